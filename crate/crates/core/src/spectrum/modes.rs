//! Fourier modes `φ = f(ρ)e^{ikϑ}` of the full problem in `ℍ¹`.
//!
//! On the north hemisphere the mode equation is
//!
//! ```text
//! L_k f = (1−ρ²)f'' + [(2−3ρ²)/ρ − 2ik√(1−ρ²)] f' − [k² + 2ik√(1−ρ²)/ρ] f,
//! ```
//!
//! whose energy in `θ = arcsin ρ` is `∫ sin²θ |f_θ − ikf|² dθ`. It is
//! discretised on the radial grid with the face term
//! `sin²θ_f |(f_{j+1} − f_j)/Δθ − ik(f_j + f_{j+1})/2|² Δθ`, which reduces to
//! the radial stiffness entry by entry when `k = 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ProfileParams;
use crate::numerics::dense::{hessenberg_qr_eigenvalues, inverse_iteration, CMatrix};
use crate::spectrum::discrete::{face_coefficient, BoundaryCondition, SLDiscretization};

/// Condition imposed where the two hemispheres meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Matching {
    /// Free equator, as for even radial modes.
    Continuity,
    /// Vanishing at the equator, as for odd radial modes.
    Antisymmetry,
}

impl Matching {
    pub fn boundary(self) -> BoundaryCondition {
        match self {
            Matching::Continuity => BoundaryCondition::Natural,
            Matching::Antisymmetry => BoundaryCondition::DirichletAtOne,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Matching::Continuity => "continuity",
            Matching::Antisymmetry => "antisymmetry",
        }
    }
}

/// `L_k f` at `ρ` for complex jets.
pub fn mode_symbol(k: i64, rho: f64, f: Complex64, df: Complex64, d2f: Complex64) -> Complex64 {
    let kf = k as f64;
    let root = (1.0 - rho * rho).sqrt();
    let i = Complex64::i();
    d2f * (1.0 - rho * rho) + df * ((2.0 - 3.0 * rho * rho) / rho - 2.0 * i * kf * root)
        - f * (kf * kf + 2.0 * i * kf * root / rho)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    pub k: i64,
    pub matching: Matching,
    pub grid: SLDiscretization,
    pub stiffness_diag: Vec<Complex64>,
    /// `K[j][j+1]`; the lower diagonal is its conjugate.
    pub stiffness_upper: Vec<Complex64>,
}

impl ModeOperator {
    pub fn new(k: i64, n_points: usize, matching: Matching) -> Result<Self> {
        let params = ProfileParams::new(1)?;
        let grid = SLDiscretization::new(&params, matching.boundary(), n_points)?;
        let h = grid.h;
        let big_n = n_points;
        let m = grid.mass.len();
        let half = Complex64::new(0.0, k as f64 * h / 2.0);
        let u0 = Complex64::new(-1.0, 0.0) - half;
        let u1 = Complex64::new(1.0, 0.0) - half;
        let mut diag = vec![Complex64::new(0.0, 0.0); m];
        let mut upper = vec![Complex64::new(0.0, 0.0); m.saturating_sub(1)];
        let mut left_part = vec![Complex64::new(0.0, 0.0); m];
        let mut right_part = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..big_n {
            let w = face_coefficient((j as f64 + 0.5) * h, 1, h);
            if j < m {
                right_part[j] = Complex64::from(w * u0.norm_sqr());
            }
            if j + 1 < m {
                left_part[j + 1] = Complex64::from(w * u1.norm_sqr());
                upper[j] = w * (u0.conj() * u1);
            }
        }
        for j in 0..m {
            diag[j] = left_part[j] + right_part[j];
        }
        Ok(Self {
            k,
            matching,
            grid,
            stiffness_diag: diag,
            stiffness_upper: upper,
        })
    }

    pub fn dim(&self) -> usize {
        self.stiffness_diag.len()
    }

    /// `M^{−½} K M^{−½}` as a dense Hermitian matrix.
    pub fn symmetrized_dense(&self) -> CMatrix {
        let s: Vec<f64> = self.grid.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let m = self.dim();
        let mut a = CMatrix::zeros(m);
        for i in 0..m {
            a[(i, i)] = self.stiffness_diag[i] * (s[i] * s[i]);
            if i + 1 < m {
                let v = self.stiffness_upper[i] * (s[i] * s[i + 1]);
                a[(i, i + 1)] = v;
                a[(i + 1, i)] = v.conj();
            }
        }
        a
    }

    /// Leading eigenvalues belonging to constants, dropped for `k = 0`.
    fn kernel_dim(&self) -> usize {
        if self.k == 0 && self.matching == Matching::Continuity {
            1
        } else {
            0
        }
    }
}

fn check_mode_request(n_points: usize, count: usize) -> Result<()> {
    if n_points + 1 > 1000 {
        return Err(Error::InvalidArgument(format!(
            "mode grid {n_points} exceeds the dense solver limit (999)"
        )));
    }
    if count == 0 || count > n_points / 4 {
        return Err(Error::InvalidArgument(format!(
            "count = {count} must lie in 1..={}",
            n_points / 4
        )));
    }
    Ok(())
}

/// Lowest `count` eigenvalues (by real part) of Fourier mode `k`.
pub fn mode_spectrum(
    k: i64,
    n_points: usize,
    count: usize,
    matching: Matching,
) -> Result<Vec<Complex64>> {
    check_mode_request(n_points, count)?;
    let op = ModeOperator::new(k, n_points, matching)?;
    let all = hessenberg_qr_eigenvalues(&op.symmetrized_dense())?;
    Ok(all.into_iter().skip(op.kernel_dim()).take(count).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeEigenpair {
    pub value: Complex64,
    /// Nodal values of `f` on the grid.
    pub vector: Vec<Complex64>,
    pub rho: Vec<f64>,
}

/// Eigenpairs of mode `k`, eigenvectors by inverse iteration.
pub fn mode_eigenpairs(
    k: i64,
    n_points: usize,
    count: usize,
    matching: Matching,
) -> Result<Vec<ModeEigenpair>> {
    check_mode_request(n_points, count)?;
    let op = ModeOperator::new(k, n_points, matching)?;
    let a = op.symmetrized_dense();
    let values = hessenberg_qr_eigenvalues(&a)?;
    values
        .into_iter()
        .skip(op.kernel_dim())
        .take(count)
        .map(|lam| {
            let y = inverse_iteration(&a, lam)?;
            let vector = y
                .iter()
                .zip(&op.grid.mass)
                .map(|(v, m)| v / m.sqrt())
                .collect();
            Ok(ModeEigenpair {
                value: lam,
                vector,
                rho: op.grid.nodes.clone(),
            })
        })
        .collect()
}

/// Angular average over `ϑ` of `Σ_k f_k(ρ)e^{ikϑ}` at each node, by the
/// periodic trapezoid rule with `n_theta` points.
pub fn spherical_mean_project(
    components: &[(i64, Vec<Complex64>)],
    n_theta: usize,
) -> Result<Vec<Complex64>> {
    let len = components
        .first()
        .map(|c| c.1.len())
        .ok_or_else(|| Error::InvalidArgument("no mode components".into()))?;
    if components.iter().any(|c| c.1.len() != len) || n_theta == 0 {
        return Err(Error::InvalidArgument(
            "components must share one grid".into(),
        ));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for j in 0..n_theta {
        let theta = std::f64::consts::TAU * j as f64 / n_theta as f64;
        for (k, f) in components {
            let phase = Complex64::from_polar(1.0, *k as f64 * theta);
            for (o, v) in out.iter_mut().zip(f) {
                *o += v * phase;
            }
        }
    }
    let scale = 1.0 / n_theta as f64;
    Ok(out.into_iter().map(|v| v * scale).collect())
}
