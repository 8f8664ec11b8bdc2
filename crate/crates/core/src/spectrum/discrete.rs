//! Finite-volume discretisation of the radial problem `(pφ')' + λwφ = 0`.
//!
//! The grid is uniform in `θ = arcsin ρ`, where the energy and mass become
//! `∫ sin^{2n}θ φ_θ² dθ` and `∫ sin^{2n}θ φ² dθ`. Nodes sit at `θ_j = jΔθ`,
//! fluxes at the cell faces `(j+½)Δθ`, and the mass of each node is the exact
//! weight of its dual cell. The coefficient `sin^{2n}θ` vanishes at the pole,
//! so no boundary row is needed there; the equator is either left free
//! (natural condition) or pinned to zero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ProfileParams;
use crate::numerics::quadrature::{gauss_jacobi_rule, QuadratureRule};
use crate::numerics::tridiag::{sym_tridiag_eigen, sym_tridiag_eigenvalues, EigenPair};

pub const MIN_POINTS: usize = 50;
const CELL_RULE_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    /// Free equator: the even (symmetric) problem.
    Natural,
    /// `φ(1) = 0`: the odd (antisymmetric) problem.
    DirichletAtOne,
}

impl BoundaryCondition {
    pub fn label(self) -> &'static str {
        match self {
            BoundaryCondition::Natural => "natural",
            BoundaryCondition::DirichletAtOne => "dirichlet",
        }
    }
}

/// Face coefficient `sin^{2n}(θ)/Δθ`; shared with the Fourier-mode operator.
pub(crate) fn face_coefficient(theta: f64, n: usize, h: f64) -> f64 {
    theta.sin().powi(2 * n as i32) / h
}

fn legendre_rule() -> Result<QuadratureRule> {
    gauss_jacobi_rule(CELL_RULE_ORDER, 0.0, 0.0)
}

/// `∫_a^b sin^{2n}θ dθ` by Gauss–Legendre on `[a, b]`.
fn cell_mass(rule: &QuadratureRule, a: f64, b: f64, n: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    (b - a) * rule.integrate(|s| (a + (b - a) * s).sin().powi(2 * n as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SLDiscretization {
    pub n: usize,
    pub n_points: usize,
    /// Spacing in `θ`.
    pub h: f64,
    /// Unknown nodes in `θ`.
    pub theta: Vec<f64>,
    /// Unknown nodes in `ρ = sin θ`.
    pub nodes: Vec<f64>,
    pub stiffness_diag: Vec<f64>,
    pub stiffness_off: Vec<f64>,
    pub mass: Vec<f64>,
    pub bc: BoundaryCondition,
}

impl SLDiscretization {
    /// `n_points` cells on `θ ∈ [0, π/2]`.
    pub fn new(params: &ProfileParams, bc: BoundaryCondition, n_points: usize) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        let n = params.n;
        let big_n = n_points;
        let h = std::f64::consts::FRAC_PI_2 / big_n as f64;
        let last = match bc {
            BoundaryCondition::Natural => big_n,
            BoundaryCondition::DirichletAtOne => big_n - 1,
        };
        let rule = legendre_rule()?;
        let faces: Vec<f64> = (0..big_n)
            .map(|j| face_coefficient((j as f64 + 0.5) * h, n, h))
            .collect();
        let theta: Vec<f64> = (0..=last).map(|j| j as f64 * h).collect();
        let top = std::f64::consts::FRAC_PI_2;
        let mass: Vec<f64> = theta
            .iter()
            .map(|&t| cell_mass(&rule, (t - 0.5 * h).max(0.0), (t + 0.5 * h).min(top), n))
            .collect();
        let stiffness_diag: Vec<f64> = (0..=last)
            .map(|j| {
                let left = if j > 0 { faces[j - 1] } else { 0.0 };
                let right = if j < big_n { faces[j] } else { 0.0 };
                left + right
            })
            .collect();
        let stiffness_off: Vec<f64> = (0..last).map(|j| -faces[j]).collect();
        Ok(Self {
            n,
            n_points,
            h,
            nodes: theta.iter().map(|t| t.sin()).collect(),
            theta,
            stiffness_diag,
            stiffness_off,
            mass,
            bc,
        })
    }

    /// Dirichlet problem on `ρ ∈ [a, b]`, `0 < a < b ≤ 1`, with `n_points` cells.
    pub fn on_interval(params: &ProfileParams, a: f64, b: f64, n_points: usize) -> Result<Self> {
        if !(a > 0.0 && a < b && b <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "interval [{a}, {b}] must satisfy 0 < a < b ≤ 1"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        let n = params.n;
        let (ta, tb) = (a.asin(), b.asin());
        let h = (tb - ta) / n_points as f64;
        let rule = legendre_rule()?;
        let faces: Vec<f64> = (0..n_points)
            .map(|j| face_coefficient(ta + (j as f64 + 0.5) * h, n, h))
            .collect();
        let theta: Vec<f64> = (1..n_points).map(|j| ta + j as f64 * h).collect();
        let mass = theta
            .iter()
            .map(|&t| cell_mass(&rule, t - 0.5 * h, t + 0.5 * h, n))
            .collect();
        let stiffness_diag = (1..n_points).map(|j| faces[j - 1] + faces[j]).collect();
        let stiffness_off = (1..n_points - 1).map(|j| -faces[j]).collect();
        Ok(Self {
            n,
            n_points,
            h,
            nodes: theta.iter().map(|t| t.sin()).collect(),
            theta,
            stiffness_diag,
            stiffness_off,
            mass,
            bc: BoundaryCondition::DirichletAtOne,
        })
    }

    /// `M^{−½} K M^{−½}` as (diagonal, off-diagonal).
    pub fn symmetrized(&self) -> (Vec<f64>, Vec<f64>) {
        let s: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let diag = self
            .stiffness_diag
            .iter()
            .zip(&s)
            .map(|(k, si)| k * si * si)
            .collect();
        let off = self
            .stiffness_off
            .iter()
            .enumerate()
            .map(|(i, k)| k * s[i] * s[i + 1])
            .collect();
        (diag, off)
    }

    /// Number of leading eigenvalues that belong to constants (dropped).
    fn kernel_dim(&self) -> usize {
        match self.bc {
            BoundaryCondition::Natural => 1,
            BoundaryCondition::DirichletAtOne => 0,
        }
    }

    /// Every eigenvalue of the pencil, ascending, constants included.
    pub fn all_eigenvalues(&self) -> Result<Vec<f64>> {
        let (d, e) = self.symmetrized();
        sym_tridiag_eigenvalues(&d, &e)
    }

    /// Lowest `count` non-trivial eigenvalues.
    pub fn eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        let all = self.all_eigenvalues()?;
        Ok(all
            .into_iter()
            .skip(self.kernel_dim())
            .take(count)
            .collect())
    }

    /// Lowest `count` non-trivial eigenpairs; vectors are nodal values of `φ`
    /// with unit discrete weighted norm `Σ mᵢφᵢ² = 1`.
    pub fn eigenpairs(&self, count: usize) -> Result<Vec<EigenPair>> {
        let (d, e) = self.symmetrized();
        let skip = self.kernel_dim();
        let pairs = sym_tridiag_eigen(&d, &e, count + skip)?;
        Ok(pairs
            .into_iter()
            .skip(skip)
            .map(|p| EigenPair {
                value: p.value,
                vector: p
                    .vector
                    .iter()
                    .zip(&self.mass)
                    .map(|(y, m)| y / m.sqrt())
                    .collect(),
            })
            .collect())
    }
}

/// Lowest `count` eigenvalues of the radial problem on `n_points` cells.
pub fn discrete_radial_spectrum(
    params: &ProfileParams,
    bc: BoundaryCondition,
    n_points: usize,
    count: usize,
) -> Result<Vec<f64>> {
    if count == 0 || count > n_points / 4 {
        return Err(Error::InvalidArgument(format!(
            "count = {count} must lie in 1..={}",
            n_points / 4
        )));
    }
    SLDiscretization::new(params, bc, n_points)?.eigenvalues(count)
}

/// One eigenvalue on two grids with its Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtrapolatedEigenvalue {
    pub grid1: f64,
    pub grid2: f64,
    pub extrapolated: f64,
}

/// Second-order Richardson extrapolation from grids `N` and `2N`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    fine + (fine - coarse) / 3.0
}

/// Eigenvalues on grids `n_points` and `2·n_points`, extrapolated.
pub fn extrapolated_spectrum(
    params: &ProfileParams,
    bc: BoundaryCondition,
    n_points: usize,
    count: usize,
) -> Result<Vec<ExtrapolatedEigenvalue>> {
    let coarse = discrete_radial_spectrum(params, bc, n_points, count)?;
    let fine = discrete_radial_spectrum(params, bc, 2 * n_points, count)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(&c, &f)| ExtrapolatedEigenvalue {
            grid1: c,
            grid2: f,
            extrapolated: richardson(c, f),
        })
        .collect())
}

/// Lowest Dirichlet eigenvalue on `[a, b]` minus `bound`.
pub fn subdomain_bound_check(
    a: f64,
    b: f64,
    bound: f64,
    params: &ProfileParams,
    n_points: usize,
) -> Result<f64> {
    let disc = SLDiscretization::on_interval(params, a, b, n_points)?;
    let lowest = disc
        .all_eigenvalues()?
        .first()
        .copied()
        .ok_or_else(|| Error::InvalidArgument("empty subdomain grid".into()))?;
    Ok(lowest - bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize) -> ProfileParams {
        ProfileParams::new(n).unwrap()
    }

    #[test]
    fn masses_positive_and_total() {
        for n in 1..=3 {
            let d = SLDiscretization::new(&p(n), BoundaryCondition::Natural, 200).unwrap();
            assert!(d.mass.iter().all(|&m| m > 0.0));
            // ∫₀^{π/2} sin^{2n}θ dθ = (π/2)·(2n−1)!!/(2n)!!
            let mut exact = std::f64::consts::FRAC_PI_2;
            for j in 1..=n {
                exact *= (2 * j - 1) as f64 / (2 * j) as f64;
            }
            let total: f64 = d.mass.iter().sum();
            assert!((total - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn constants_in_kernel() {
        let d = SLDiscretization::new(&p(1), BoundaryCondition::Natural, 100).unwrap();
        for (i, &k) in d.stiffness_diag.iter().enumerate() {
            let left = if i > 0 { d.stiffness_off[i - 1] } else { 0.0 };
            let right = if i < d.stiffness_off.len() {
                d.stiffness_off[i]
            } else {
                0.0
            };
            assert!((k + left + right).abs() < 1e-9 * k.abs().max(1.0));
        }
        let all = d.all_eigenvalues().unwrap();
        assert!(all[0].abs() < 1e-8);
    }

    #[test]
    fn coarse_grid_values() {
        let nat = discrete_radial_spectrum(&p(1), BoundaryCondition::Natural, 50, 3).unwrap();
        let dir =
            discrete_radial_spectrum(&p(1), BoundaryCondition::DirichletAtOne, 50, 3).unwrap();
        for (v, e) in nat.iter().zip([8.0, 24.0, 48.0]) {
            assert!((v - e).abs() / e < 1e-2);
        }
        for (v, e) in dir.iter().zip([3.0, 15.0, 35.0]) {
            assert!((v - e).abs() / e < 1e-2);
        }
    }

    #[test]
    fn fine_grid_within_one_percent() {
        let nat = discrete_radial_spectrum(&p(1), BoundaryCondition::Natural, 2000, 3).unwrap();
        let dir =
            discrete_radial_spectrum(&p(1), BoundaryCondition::DirichletAtOne, 2000, 3).unwrap();
        for (v, e) in nat.iter().zip([8.0, 24.0, 48.0]) {
            assert!((v - e).abs() / e < 1e-2);
        }
        for (v, e) in dir.iter().zip([3.0, 15.0, 35.0]) {
            assert!((v - e).abs() / e < 1e-2);
        }
    }

    #[test]
    fn second_order_and_extrapolation() {
        let q = p(2);
        let ex = extrapolated_spectrum(&q, BoundaryCondition::DirichletAtOne, 200, 3).unwrap();
        for (e, k) in ex.iter().zip([1usize, 3, 5]) {
            let exact = (k * (k + 4)) as f64;
            let err1 = (e.grid1 - exact).abs();
            let err2 = (e.grid2 - exact).abs();
            assert!(err1 / err2 > 3.5 && err1 / err2 < 4.5);
            assert!((e.extrapolated - exact).abs() < 1e-5 * exact);
        }
    }

    #[test]
    fn pencil_nonnegative() {
        for n in 1..=3 {
            for bc in [
                BoundaryCondition::Natural,
                BoundaryCondition::DirichletAtOne,
            ] {
                for &np in &[50, 137, 400] {
                    let d = SLDiscretization::new(&p(n), bc, np).unwrap();
                    assert!(d.all_eigenvalues().unwrap().iter().all(|&v| v >= -1e-10));
                }
            }
        }
    }

    #[test]
    fn eigenvectors_satisfy_pencil() {
        let d = SLDiscretization::new(&p(1), BoundaryCondition::DirichletAtOne, 300).unwrap();
        for pair in d.eigenpairs(4).unwrap() {
            let v = &pair.vector;
            let m = v.len();
            for i in 0..m {
                let mut kv = d.stiffness_diag[i] * v[i];
                if i > 0 {
                    kv += d.stiffness_off[i - 1] * v[i - 1];
                }
                if i + 1 < m {
                    kv += d.stiffness_off[i] * v[i + 1];
                }
                assert!((kv - pair.value * d.mass[i] * v[i]).abs() < 1e-7 * (1.0 + kv.abs()));
            }
        }
    }

    #[test]
    fn subdomain_bounds() {
        for n in 1..=2 {
            let q = p(n);
            let qd = q.q as f64;
            assert!(subdomain_bound_check(0.05, 0.95, qd - 1.0, &q, 400).unwrap() >= 0.0);
            let a = ((qd - 1.0) / qd).sqrt() + 0.01;
            assert!(subdomain_bound_check(a, 0.99, 2.0 * qd, &q, 400).unwrap() >= 0.0);
        }
        let q = p(1);
        let wide = subdomain_bound_check(0.05, 0.95, 0.0, &q, 400).unwrap();
        let narrow = subdomain_bound_check(0.2, 0.8, 0.0, &q, 400).unwrap();
        assert!(narrow > wide);
    }

    #[test]
    fn bad_inputs() {
        assert!(SLDiscretization::new(&p(1), BoundaryCondition::Natural, 10).is_err());
        assert!(discrete_radial_spectrum(&p(1), BoundaryCondition::Natural, 100, 26).is_err());
        assert!(SLDiscretization::on_interval(&p(1), 0.5, 0.4, 100).is_err());
    }
}
