//! Symmetric tridiagonal eigenproblems: implicit-shift QL for the spectrum,
//! inverse iteration for the eigenvectors of a few selected eigenvalues.

use crate::error::{Error, Result};

const QL_MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Implicit QL with Wilkinson-type shifts on `(diag, sub)`, where `sub[i]`
/// couples rows `i` and `i+1` and `sub[n-1]` is scratch. When `first_row` is
/// given it is rotated along, which yields the first components of the
/// eigenvectors if it starts as `e_1`.
pub(crate) fn ql_implicit(
    diag: &mut [f64],
    sub: &mut [f64],
    mut first_row: Option<&mut [f64]>,
) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(sub.len(), n);
    if n == 0 {
        return Ok(());
    }
    sub[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if sub[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::NonConvergence {
                    op: "sym_tridiag_eigen",
                    iterations: QL_MAX_SWEEPS,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * sub[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + sub[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * sub[i];
                let b = c * sub[i];
                r = f.hypot(g);
                sub[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    sub[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = first_row.as_deref_mut() {
                    let t = z[i + 1];
                    z[i + 1] = s * z[i] + c * t;
                    z[i] = c * z[i] - s * t;
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            sub[l] = g;
            sub[m] = 0.0;
        }
    }
    Ok(())
}

fn check_shape(diag: &[f64], off: &[f64]) -> Result<()> {
    if diag.is_empty() || off.len() + 1 != diag.len() {
        return Err(Error::InvalidArgument(format!(
            "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
            diag.len(),
            off.len()
        )));
    }
    Ok(())
}

/// All eigenvalues of the symmetric tridiagonal matrix, ascending.
pub fn sym_tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    check_shape(diag, off)?;
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Infinity norm, used to scale pivots and residual checks.
pub(crate) fn tridiag_norm(diag: &[f64], off: &[f64]) -> f64 {
    (0..diag.len())
        .map(|i| {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i < off.len() { off[i].abs() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0, f64::max)
}

/// Solves `(T − shift·I) x = rhs` with partial pivoting.
fn shifted_solve(diag: &[f64], off: &[f64], shift: f64, rhs: &mut [f64], floor: f64) {
    let n = diag.len();
    // rows hold (lower, diag, upper, upper2) after pivoting
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut up: Vec<f64> = off.to_vec();
    up.push(0.0);
    let mut up2 = vec![0.0; n];
    let mut low: Vec<f64> = off.to_vec();
    low.push(0.0);
    for i in 0..n.saturating_sub(1) {
        if low[i].abs() > d[i].abs() {
            // swap rows i and i+1
            let (a0, a1, a2) = (d[i], up[i], up2[i]);
            let (b0, b1, b2) = (low[i], d[i + 1], up[i + 1]);
            d[i] = b0;
            up[i] = b1;
            up2[i] = b2;
            low[i] = a0;
            d[i + 1] = a1;
            up[i + 1] = a2;
            rhs.swap(i, i + 1);
        }
        if d[i] == 0.0 {
            d[i] = floor;
        }
        let factor = low[i] / d[i];
        d[i + 1] -= factor * up[i];
        up[i + 1] -= factor * up2[i];
        rhs[i + 1] -= factor * rhs[i];
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = floor;
    }
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        if i + 1 < n {
            acc -= up[i] * rhs[i + 1];
        }
        if i + 2 < n {
            acc -= up2[i] * rhs[i + 2];
        }
        rhs[i] = acc / d[i];
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// The lowest `count` eigenpairs, ascending, with unit-norm eigenvectors.
///
/// Eigenvectors are normalised so that their largest-magnitude component is positive.
pub fn sym_tridiag_eigen(diag: &[f64], off: &[f64], count: usize) -> Result<Vec<EigenPair>> {
    let values = sym_tridiag_eigenvalues(diag, off)?;
    let n = diag.len();
    let count = count.min(n);
    let norm = tridiag_norm(diag, off).max(f64::MIN_POSITIVE);
    let floor = f64::EPSILON * norm;
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(count);
    for &value in values.iter().take(count) {
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.25 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
            .collect();
        normalize(&mut v);
        for _ in 0..3 {
            shifted_solve(diag, off, value, &mut v, floor);
            // keep clustered eigenvectors apart
            for prev in pairs.iter() {
                if (prev.value - value).abs() <= 1e-8 * norm {
                    let dot: f64 = prev.vector.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut()
                        .zip(&prev.vector)
                        .for_each(|(x, p)| *x -= dot * p);
                }
            }
            normalize(&mut v);
        }
        let pivot = v
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        pairs.push(EigenPair { value, vector: v });
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn residual(diag: &[f64], off: &[f64], pair: &EigenPair) -> f64 {
        let n = diag.len();
        let v = &pair.vector;
        (0..n)
            .map(|i| {
                let mut tv = diag[i] * v[i];
                if i > 0 {
                    tv += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    tv += off[i] * v[i + 1];
                }
                (tv - pair.value * v[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn two_by_two() {
        let vals = sym_tridiag_eigenvalues(&[2.0, 2.0], &[1.0]).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_is_sorted() {
        let vals = sym_tridiag_eigenvalues(&[3.0, -1.0, 7.0, 0.5], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(vals, vec![-1.0, 0.5, 3.0, 7.0]);
    }

    #[test]
    fn discrete_laplacian_closed_form() {
        let m = 200;
        let diag = vec![2.0; m];
        let off = vec![-1.0; m - 1];
        let vals = sym_tridiag_eigenvalues(&diag, &off).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * PI / (m + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-12);
        }
        let pairs = sym_tridiag_eigen(&diag, &off, 5).unwrap();
        let norm = tridiag_norm(&diag, &off);
        for p in &pairs {
            assert!(residual(&diag, &off, p) <= 1e-10 * norm);
        }
    }

    #[test]
    fn reversal_invariance() {
        let diag: Vec<f64> = (0..50)
            .map(|i| 1.0 + (i as f64).sin().abs() * 3.0)
            .collect();
        let off: Vec<f64> = (0..49).map(|i| -0.5 - 0.01 * i as f64).collect();
        let a = sym_tridiag_eigenvalues(&diag, &off).unwrap();
        let rd: Vec<f64> = diag.iter().rev().copied().collect();
        let ro: Vec<f64> = off.iter().rev().copied().collect();
        let b = sym_tridiag_eigenvalues(&rd, &ro).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn graded_matrix_residuals() {
        // strongly graded entries, like the mass-scaled discretisations
        let n = 300;
        let diag: Vec<f64> = (0..n)
            .map(|i| 1e4 / (1.0 + i as f64).powi(2) + 2.0)
            .collect();
        let off: Vec<f64> = (0..n - 1).map(|i| -1e2 / (1.0 + i as f64)).collect();
        let pairs = sym_tridiag_eigen(&diag, &off, 10).unwrap();
        let norm = tridiag_norm(&diag, &off);
        for p in &pairs {
            assert!(residual(&diag, &off, p) <= 1e-10 * norm);
        }
        for w in pairs.windows(2) {
            let dot: f64 = w[0]
                .vector
                .iter()
                .zip(&w[1].vector)
                .map(|(a, b)| a * b)
                .sum();
            assert!(dot.abs() < 1e-8);
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        assert!(sym_tridiag_eigenvalues(&[1.0, 2.0], &[]).is_err());
    }
}
