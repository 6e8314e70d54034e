//! Minimum-cost perfect matching on a square cost matrix (Hungarian method
//! with row/column potentials, `O(k³)`).

use alloc::vec::Vec;

/// Returns `assign` with `assign[row] = column`, minimizing
/// `Σ cost[row][assign[row]]`. `cost` is row-major `k × k`.
pub fn min_cost_assignment(cost: &[f64], k: usize) -> Vec<usize> {
    assert_eq!(cost.len(), k * k);
    if k == 0 {
        return Vec::new();
    }
    // 1-based arrays; column 0 is the virtual start
    let mut u = alloc::vec![0.0; k + 1];
    let mut v = alloc::vec![0.0; k + 1];
    let mut row_of = alloc::vec![0usize; k + 1];
    let mut way = alloc::vec![0usize; k + 1];
    for i in 1..=k {
        row_of[0] = i;
        let mut j0 = 0;
        let mut min_v = alloc::vec![f64::INFINITY; k + 1];
        let mut used = alloc::vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
                if cur < min_v[j] {
                    min_v[j] = cur;
                    way[j] = j0;
                }
                if min_v[j] < delta {
                    delta = min_v[j];
                    j1 = j;
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = alloc::vec![0usize; k];
    for j in 1..=k {
        assign[row_of[j] - 1] = j - 1;
    }
    assign
}

/// Calls `f` on every permutation of `0..k` (Heap's algorithm).
pub fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = alloc::vec![0usize; k];
    f(&perm);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(cost: &[f64], k: usize) -> f64 {
        let mut best = f64::INFINITY;
        for_each_permutation(k, |p| {
            let c: f64 = p.iter().enumerate().map(|(r, &col)| cost[r * k + col]).sum();
            best = best.min(c);
        });
        best
    }

    #[test]
    fn permutations_are_complete() {
        let mut n = 0;
        for_each_permutation(4, |_| n += 1);
        assert_eq!(n, 24);
    }

    #[test]
    fn matches_brute_force() {
        let mut seed = 12345u64;
        for k in 1..=5 {
            for _ in 0..50 {
                let cost: std::vec::Vec<f64> = (0..k * k)
                    .map(|_| {
                        seed = crate::rng::splitmix64(seed);
                        (seed % 17) as f64
                    })
                    .collect();
                let a = min_cost_assignment(&cost, k);
                let got: f64 = a.iter().enumerate().map(|(r, &c)| cost[r * k + c]).sum();
                assert_eq!(got, brute(&cost, k));
                let mut seen = a.clone();
                seen.sort();
                assert_eq!(seen, (0..k).collect::<std::vec::Vec<_>>());
            }
        }
    }
}
