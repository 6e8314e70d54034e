//! End-to-end checks of estimation, likelihood-ratio updates and detection.

use chernoff_sbm_core::detect::{
    detect_communities, estimate_p, lr_classify, mis, spectral_cluster, DetectOptions, Labeling, LooMode, NoClock,
    SpectralOptions,
};
use chernoff_sbm_core::rng::splitmix64;
use chernoff_sbm_core::sbm::SbmModel;
use chernoff_sbm_core::Adjacency;

fn truth(model: &SbmModel) -> Labeling {
    Labeling::new(model.labels().to_vec(), model.k()).unwrap()
}

#[test]
fn block_estimate_concentrates() {
    let p = vec![0.3, 0.1, 0.05, 0.1, 0.2, 0.08, 0.05, 0.08, 0.4];
    let model = SbmModel::balanced(900, p.clone(), 3).unwrap();
    let a = model.sample_adjacency(17);
    let est = estimate_p(&a, &truth(&model)).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            let pairs = if x == y { 300.0 * 299.0 / 2.0 } else { 300.0 * 300.0 };
            let q = p[x * 3 + y];
            let sd = (q * (1.0 - q) / pairs).sqrt();
            assert!((est.raw[x * 3 + y] - q).abs() < 5.0 * sd, "cell ({x},{y})");
        }
    }
    assert!(est.empty.iter().all(|e| !e));
}

#[test]
fn lr_matches_per_edge_scores() {
    let model = SbmModel::balanced(80, vec![0.5, 0.2, 0.1, 0.2, 0.4, 0.25, 0.1, 0.25, 0.6], 3).unwrap();
    let a = model.sample_adjacency(4);
    let mut state = 11u64;
    let mut next = || {
        state = splitmix64(state);
        state
    };
    let cols: Vec<usize> = (0..80).filter(|v| v % 3 != 1).collect();
    let rows: Vec<usize> = (0..80).collect();
    let z_cols: Vec<usize> = cols.iter().map(|_| (next() % 3) as usize).collect();
    let p_hat: Vec<f64> = (0..9).map(|_| 0.05 + 0.9 * (next() >> 11) as f64 / (1u64 << 53) as f64).collect();
    let got = lr_classify(&a, &rows, &cols, &Labeling::new(z_cols.clone(), 3).unwrap(), &p_hat).unwrap();
    for (&i, &g) in rows.iter().zip(&got) {
        let scores: Vec<f64> = (0..3)
            .map(|c| {
                cols.iter()
                    .zip(&z_cols)
                    .filter(|(&j, _)| j != i)
                    .map(|(&j, &zj)| {
                        let q = p_hat[c * 3 + zj];
                        if a.has_edge(i, j) { q.ln() } else { (1.0 - q).ln() }
                    })
                    .sum()
            })
            .collect();
        let best = (0..3).fold(0, |b, c| if scores[c] > scores[b] { c } else { b });
        assert_eq!(g, best, "row {i}: {scores:?}");
    }
}

#[test]
fn spectral_recovers_large_model() {
    let model = SbmModel::planted(2000, 3, 0.3, 0.1).unwrap();
    let a = model.sample_adjacency(2);
    let z = spectral_cluster(&a, 3, 5, &SpectralOptions::default()).unwrap();
    assert!(mis(&z, &truth(&model)).unwrap() < 0.02);
}

#[test]
fn exact_and_fast_agree() {
    let model = SbmModel::planted(400, 2, 0.6, 0.3).unwrap();
    let a = model.sample_adjacency(8);
    let run = |mode| {
        let opts = DetectOptions { mode, ..Default::default() };
        detect_communities(&a, 2, 3, &opts, &NoClock).unwrap().0
    };
    let (fast, exact) = (run(LooMode::Fast), run(LooMode::Exact));
    assert!(mis(&fast, &exact).unwrap() <= 0.01);
    assert!(mis(&fast, &truth(&model)).unwrap() < 0.02);
}

#[test]
fn detection_is_deterministic() {
    let model = SbmModel::planted(300, 3, 0.5, 0.1).unwrap();
    let a = model.sample_adjacency(1);
    let opts = DetectOptions::default();
    let (z1, t1) = detect_communities(&a, 3, 42, &opts, &NoClock).unwrap();
    let (z2, t2) = detect_communities(&a, 3, 42, &opts, &NoClock).unwrap();
    assert_eq!(z1, z2);
    assert_eq!(t1, t2);
    let (_, t3) = detect_communities(&a, 3, 43, &opts, &NoClock).unwrap();
    assert_ne!(t1.in_first_half, t3.in_first_half);
}

#[test]
fn sampled_graphs_are_simple_and_reproducible() {
    let model = SbmModel::planted(150, 2, 0.2, 0.05).unwrap();
    let a = model.sample_adjacency(3);
    assert_eq!(a, model.sample_adjacency(3));
    assert_ne!(a, model.sample_adjacency(4));
    let dense = a.to_dense();
    assert_eq!(Adjacency::from_dense(150, &dense).unwrap(), a);
    assert!((0..150).all(|i| !a.has_edge(i, i)));
}
