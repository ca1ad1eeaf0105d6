//! Cyclic Jacobi rotations for small dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary, then applies the real symmetric Jacobi rotation that
//! annihilates it. Rotations are accumulated into the eigenvector matrix.

use num_complex::Complex64;

use crate::{Error, Result};

/// Stop once the off-diagonal Frobenius norm falls below this (relative to
/// `max(1, ||A||_F)`).
pub(crate) const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Diagonalizes the row-major Hermitian matrix `a` of order `n`.
///
/// Returns unsorted eigenvalues and the column-major-by-eigenvalue unitary
/// `v` (stored row-major) with `A = V diag(λ) V†`.
pub(crate) fn diagonalize(mut a: Vec<Complex64>, n: usize) -> Result<(Vec<f64>, Vec<Complex64>)> {
    debug_assert_eq!(a.len(), n * n);
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) < OFF_DIAGONAL_TOL * scale {
            let values = (0..n).map(|i| a[i * n + i].re).collect();
            return Ok((values, v));
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if off_diagonal_norm(&a, n) < OFF_DIAGONAL_TOL * scale {
        let values = (0..n).map(|i| a[i * n + i].re).collect();
        return Ok((values, v));
    }
    Err(Error::NotConverged(MAX_SWEEPS))
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase_conj = (apq / r).conj();
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // G = diag(1, e^{-iφ}) * [[c, s], [-s, c]] restricted to the (p, q) plane
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase_conj * s;
    let g_qq = phase_conj * c;

    // A <- A G
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * g_pp + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    // A <- G† A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    // V <- V G
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * g_pp + vkq * g_qp;
        v[k * n + q] = vkp * g_pq + vkq * g_qq;
    }
}
