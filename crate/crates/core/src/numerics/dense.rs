//! Dense complex eigenvalues: Householder reduction to upper Hessenberg form,
//! then single-shift QR with Givens rotations and deflation.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration budget per eigenvalue before giving up.
const QR_ITERS_PER_EIGENVALUE: usize = 60;
const MAX_DIM: usize = 1000;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(n: usize, mut f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from real rows; panics on ragged input.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        Self::from_fn(n, |i, j| {
            assert_eq!(rows[i].len(), n, "matrix rows must be square");
            Complex64::new(rows[i][j], 0.0)
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .map(|z| z.norm())
                    .sum()
            })
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// In-place Householder reduction to upper Hessenberg form (similarity transform).
fn reduce_to_hessenberg(a: &mut CMatrix) {
    let n = a.n;
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let alpha_norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase·‖x‖·e₁, H = I − 2vv*/(v*v)
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // left: A ← H A on rows k+1..n
        for j in k..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * a[(k + 1 + r, j)])
                .sum();
            let s = dot * tau;
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= vr * s;
            }
        }
        // right: A ← A H on columns k+1..n
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| a[(i, k + 1 + r)] * vr)
                .sum();
            let s = dot * tau;
            for (r, vr) in v.iter().enumerate() {
                a[(i, k + 1 + r)] -= s * vr.conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalue of the trailing 2×2 block `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let delta = (a - d) * 0.5;
    let bc = b * c;
    let mut disc = (delta * delta + bc).sqrt();
    if (delta + disc).norm() < (delta - disc).norm() {
        disc = -disc;
    }
    let denom = delta + disc;
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// All eigenvalues of `a`, sorted by real part then imaginary part.
pub fn hessenberg_qr_eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "dense eigensolver limited to dimension {MAX_DIM}, got {n}"
        )));
    }
    let mut h = a.clone();
    reduce_to_hessenberg(&mut h);
    let norm = h.norm_inf().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let budget = QR_ITERS_PER_EIGENVALUE * n;
    let mut rot: Vec<(Complex64, Complex64)> = Vec::with_capacity(n);
    loop {
        // locate the start of the unreduced block ending at hi
        let mut l = hi;
        while l > 0 {
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let scale = if scale == 0.0 { norm } else { scale };
            if h[(l, l - 1)].norm() <= eps * scale {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            iter = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::NonConvergence {
                op: "hessenberg_qr_eigenvalues",
                iterations: budget,
            });
        }
        let sigma = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for i in l..=hi {
            h[(i, i)] -= sigma;
        }
        rot.clear();
        for k in l..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let u = h[(k, j)];
                let w = h[(k + 1, j)];
                h[(k, j)] = c.conj() * u + s.conj() * w;
                h[(k + 1, j)] = -s * u + c * w;
            }
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let u = h[(i, k)];
                let w = h[(i, k + 1)];
                h[(i, k)] = u * c + w * s;
                h[(i, k + 1)] = -u * s.conj() + w * c.conj();
            }
        }
        for i in l..=hi {
            h[(i, i)] += sigma;
        }
    }
    eig.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(eig)
}

/// Eigenvector for an (approximate) eigenvalue by inverse iteration with a
/// pivoted LU factorisation of `a − λI`. The result has unit 2-norm and its
/// largest component real and positive.
pub fn inverse_iteration(a: &CMatrix, lambda: Complex64) -> Result<Vec<Complex64>> {
    let n = a.n;
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let norm = a.norm_inf().max(f64::MIN_POSITIVE);
    let mut lu = a.clone();
    for i in 0..n {
        lu[(i, i)] -= lambda;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let floor = f64::EPSILON * norm;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap_or(k);
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
        }
        if lu[(k, k)].norm() < floor {
            lu[(k, k)] = Complex64::new(floor, 0.0);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
        }
    }
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| {
            Complex64::new(
                1.0 + 0.1 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract(),
                0.0,
            )
        })
        .collect();
    for _ in 0..3 {
        let mut x: Vec<Complex64> = perm.iter().map(|&p| v[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= lu[(i, j)] * x[j];
            }
            x[i] = acc / lu[(i, i)];
        }
        let nrm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::ZeroNorm("inverse_iteration"));
        }
        v = x.into_iter().map(|z| z / nrm).collect();
    }
    let big = v.iter().copied().fold(Complex64::new(0.0, 0.0), |acc, z| {
        if z.norm() > acc.norm() {
            z
        } else {
            acc
        }
    });
    let phase = big.conj() / big.norm();
    Ok(v.into_iter().map(|z| z * phase).collect())
}
