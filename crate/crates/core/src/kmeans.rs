//! Lloyd's k-means with k-means++ seeding and restarts.

use alloc::vec::Vec;

use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self { restarts: 10, max_iter: 100 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub centers: Vec<f64>,
    pub inertia: f64,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cluster `points` (row-major, `dim` columns) into `k` groups. Keeps the
/// restart with the smallest inertia; the earliest restart wins ties.
pub fn kmeans<R: Rng + ?Sized>(points: &[f64], dim: usize, k: usize, opts: KMeansOptions, rng: &mut R) -> KMeansFit {
    assert!(dim > 0 && k > 0);
    let n = points.len() / dim;
    assert!(n >= k, "fewer points than clusters");
    let mut best: Option<KMeansFit> = None;
    for _ in 0..opts.restarts.max(1) {
        let fit = lloyd(points, dim, k, plus_plus(points, dim, k, rng), opts.max_iter);
        if best.as_ref().map_or(true, |b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    best.unwrap()
}

fn plus_plus<R: Rng + ?Sized>(points: &[f64], dim: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let n = points.len() / dim;
    let row = |i: usize| &points[i * dim..(i + 1) * dim];
    let mut centers = Vec::with_capacity(k * dim);
    centers.extend_from_slice(row(rng.random_range(0..n)));
    let mut d2: Vec<f64> = (0..n).map(|i| dist2(row(i), &centers[..dim])).collect();
    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut at = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if u < d {
                    at = i;
                    break;
                }
                u -= d;
            }
            at
        } else {
            rng.random_range(0..n)
        };
        let c = centers.len();
        centers.extend_from_slice(row(pick));
        for i in 0..n {
            d2[i] = d2[i].min(dist2(row(i), &centers[c..c + dim]));
        }
    }
    centers
}

fn lloyd(points: &[f64], dim: usize, k: usize, mut centers: Vec<f64>, max_iter: usize) -> KMeansFit {
    let n = points.len() / dim;
    let row = |i: usize| &points[i * dim..(i + 1) * dim];
    let mut labels = alloc::vec![usize::MAX; n];
    for _ in 0..max_iter {
        let mut changed = false;
        for i in 0..n {
            let mut best = (f64::INFINITY, 0);
            for c in 0..k {
                let d = dist2(row(i), &centers[c * dim..(c + 1) * dim]);
                if d < best.0 {
                    best = (d, c);
                }
            }
            if labels[i] != best.1 {
                labels[i] = best.1;
                changed = true;
            }
        }
        let mut sums = alloc::vec![0.0; k * dim];
        let mut counts = alloc::vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for d in 0..dim {
                sums[labels[i] * dim + d] += points[i * dim + d];
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for d in 0..dim {
                    centers[c * dim + d] = sums[c * dim + d] / counts[c] as f64;
                }
            }
        }
        // an empty cluster takes the point farthest from its current center
        for c in 0..k {
            if counts[c] == 0 {
                let far = (0..n)
                    .filter(|&i| counts[labels[i]] > 1)
                    .max_by(|&i, &j| {
                        let di = dist2(row(i), &centers[labels[i] * dim..(labels[i] + 1) * dim]);
                        let dj = dist2(row(j), &centers[labels[j] * dim..(labels[j] + 1) * dim]);
                        di.total_cmp(&dj).then(j.cmp(&i))
                    })
                    .unwrap();
                counts[labels[far]] -= 1;
                counts[c] = 1;
                labels[far] = c;
                centers[c * dim..(c + 1) * dim].copy_from_slice(row(far));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let inertia = (0..n).map(|i| dist2(row(i), &centers[labels[i] * dim..(labels[i] + 1) * dim])).sum();
    KMeansFit { labels, centers, inertia }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separates_obvious_clusters() {
        let pts = [0.0, 0.0, 0.1, 0.0, 0.0, 0.1, 5.0, 5.0, 5.1, 5.0, 5.0, 5.1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let fit = kmeans(&pts, 2, 2, KMeansOptions::default(), &mut rng);
        assert_eq!(fit.labels[0], fit.labels[1]);
        assert_eq!(fit.labels[0], fit.labels[2]);
        assert_eq!(fit.labels[3], fit.labels[5]);
        assert_ne!(fit.labels[0], fit.labels[3]);
        assert!(fit.inertia < 0.1);
    }

    #[test]
    fn identical_points_still_fill_clusters() {
        let pts = [1.0; 8];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fit = kmeans(&pts, 1, 3, KMeansOptions::default(), &mut rng);
        for c in 0..3 {
            assert!(fit.labels.contains(&c));
        }
    }
}
