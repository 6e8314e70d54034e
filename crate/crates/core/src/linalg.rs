//! Small dense kernels: a cyclic Jacobi eigensolver, block Gram–Schmidt and
//! subspace iteration for the dominant eigenpairs of a symmetric operator.
//!
//! Blocks are column-major: column `c` of an `n × b` block occupies
//! `x[c * n..(c + 1) * n]`.

use alloc::vec::Vec;

use libm::{fabs, sqrt};
use rand::Rng;

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

/// Eigen-decomposition of a symmetric `m × m` matrix (row-major) by cyclic
/// Jacobi rotations. Returns eigenvalues and a column-major matrix of
/// orthonormal eigenvectors, unsorted.
pub fn jacobi_eigen(a: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = alloc::vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let frob = sqrt(a.iter().map(|x| x * x).sum::<f64>());
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..m {
            for q in p + 1..m {
                off += a[p * m + q] * a[p * m + q];
            }
        }
        if sqrt(off) <= 1e-15 * frob || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (fabs(theta) + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                // column-major: eigenvector p is v[p*m..]
                for k in 0..m {
                    let vp = v[p * m + k];
                    let vq = v[q * m + k];
                    v[p * m + k] = c * vp - s * vq;
                    v[q * m + k] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..m).map(|i| a[i * m + i]).collect(), v)
}

/// Orthonormalize the columns of an `n × b` block in place by two passes of
/// modified Gram–Schmidt. A column that collapses (numerically dependent on
/// the earlier ones) is replaced by a random vector and redone.
pub fn orthonormalize<R: Rng + ?Sized>(x: &mut [f64], n: usize, b: usize, rng: &mut R) {
    for c in 0..b {
        let mut attempts = 0;
        loop {
            let before = norm(&x[c * n..(c + 1) * n]);
            for _ in 0..2 {
                for prev in 0..c {
                    let (done, rest) = x.split_at_mut(c * n);
                    let q = &done[prev * n..(prev + 1) * n];
                    let col = &mut rest[..n];
                    let r = dot(q, col);
                    col.iter_mut().zip(q).for_each(|(v, qv)| *v -= r * qv);
                }
            }
            let col = &mut x[c * n..(c + 1) * n];
            let after = norm(col);
            if after > 1e-10 * before && after > 0.0 {
                col.iter_mut().for_each(|v| *v /= after);
                break;
            }
            attempts += 1;
            assert!(attempts < 50, "cannot extend orthonormal basis");
            col.iter_mut().for_each(|v| *v = rng.random::<f64>() - 0.5);
        }
    }
}

/// Dominant eigenpairs of a symmetric operator.
#[derive(Clone, Debug)]
pub struct EigenPairs {
    /// Eigenvalues sorted by decreasing magnitude.
    pub values: Vec<f64>,
    /// Column-major `n × k` block of eigenvectors.
    pub vectors: Vec<f64>,
    pub iterations: usize,
}

/// Settings for [`subspace_eigen`].
#[derive(Clone, Copy, Debug)]
pub struct SubspaceOptions {
    pub oversample: usize,
    /// Converged when every wanted residual `‖Av − λv‖` is at most
    /// `tol · |λ₁|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        Self { oversample: 6, tol: 1e-8, max_iter: 1000 }
    }
}

/// Top-`k` eigenpairs (by magnitude) of the symmetric `n × n` operator
/// `apply(x, y): y = A x` acting on single columns, by subspace iteration
/// with Rayleigh–Ritz projection.
pub fn subspace_eigen<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    apply: impl Fn(&[f64], &mut [f64]),
    opts: SubspaceOptions,
    rng: &mut R,
) -> Result<EigenPairs> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument("eigenpair count must be in 1..=n"));
    }
    let b = (k + opts.oversample).min(n);
    let mut x: Vec<f64> = (0..n * b).map(|_| rng.random::<f64>() - 0.5).collect();
    orthonormalize(&mut x, n, b, rng);
    let mut y = alloc::vec![0.0; n * b];
    let mut residual = f64::INFINITY;

    for iter in 1..=opts.max_iter {
        for c in 0..b {
            apply(&x[c * n..(c + 1) * n], &mut y[c * n..(c + 1) * n]);
        }
        // projected matrix H = Xᵀ A X, symmetrized
        let mut h = alloc::vec![0.0; b * b];
        for i in 0..b {
            for j in i..b {
                let v = 0.5 * (dot(&x[i * n..(i + 1) * n], &y[j * n..(j + 1) * n])
                    + dot(&x[j * n..(j + 1) * n], &y[i * n..(i + 1) * n]));
                h[i * b + j] = v;
                h[j * b + i] = v;
            }
        }
        let (vals, w) = jacobi_eigen(&h, b);
        let mut order: Vec<usize> = (0..b).collect();
        order.sort_by(|&i, &j| fabs(vals[j]).total_cmp(&fabs(vals[i])).then(i.cmp(&j)));

        // Ritz vectors X W and their images Y W, in sorted order
        let mut xr = alloc::vec![0.0; n * b];
        let mut yr = alloc::vec![0.0; n * b];
        for (c, &src) in order.iter().enumerate() {
            let wcol = &w[src * b..(src + 1) * b];
            for (r, &coef) in wcol.iter().enumerate() {
                if coef == 0.0 {
                    continue;
                }
                let xs = &x[r * n..(r + 1) * n];
                let ys = &y[r * n..(r + 1) * n];
                for t in 0..n {
                    xr[c * n + t] += coef * xs[t];
                    yr[c * n + t] += coef * ys[t];
                }
            }
        }
        let lambda: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        residual = (0..k)
            .map(|c| {
                let l = lambda[c];
                let r: f64 = (0..n)
                    .map(|t| {
                        let d = yr[c * n + t] - l * xr[c * n + t];
                        d * d
                    })
                    .sum();
                sqrt(r)
            })
            .fold(0.0, f64::max);
        if residual <= opts.tol * fabs(lambda[0]) {
            xr.truncate(n * k);
            return Ok(EigenPairs { values: lambda[..k].to_vec(), vectors: xr, iterations: iter });
        }
        x = yr;
        orthonormalize(&mut x, n, b, rng);
    }
    Err(Error::ConvergenceFailure { iterations: opts.max_iter, residual })
}
