//! Rayleigh quotients, Gram matrices, Green-formula residuals and Poincaré
//! estimates on the profile.
//!
//! Radial integrals use the weight `w = ρ^{2n}/√(1−ρ²)` on one hemisphere;
//! the factor `O_{2n−1}/2` is dropped except where both hemispheres are summed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Hemisphere, ProfileParams};
use crate::numerics::quadrature::QuadratureRule;
use crate::operators::{apply_polar_h1, apply_radial, PolarJet, RadialJet};
use crate::spectrum::discrete::{discrete_radial_spectrum, BoundaryCondition};
use crate::spectrum::modes::{mode_spectrum, Matching};
use crate::spectrum::radial::RadialEigenmode;

/// Trapezoid points in `ϑ` for the two-dimensional checks.
pub const THETA_POINTS: usize = 64;

fn check_rule(rule: &QuadratureRule, params: &ProfileParams) -> Result<()> {
    let beta = params.n as f64 - 0.5;
    if rule.alpha != -0.5 || rule.beta != beta {
        return Err(Error::InvalidArgument(format!(
            "rule exponents ({}, {}) do not match the profile weight (−0.5, {beta})",
            rule.alpha, rule.beta
        )));
    }
    Ok(())
}

/// `½ Σ wᵢ g(√sᵢ)` with errors from `g` propagated.
fn radial_sum<G: Fn(f64) -> Result<f64>>(
    g: G,
    rule: &QuadratureRule,
    params: &ProfileParams,
) -> Result<f64> {
    check_rule(rule, params)?;
    let mut acc = 0.0;
    for (s, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * g(s.sqrt())?;
    }
    Ok(0.5 * acc)
}

/// `∫(1−ρ²)f'² w dρ / ∫f² w dρ` for a radial `f` given as `ρ ↦ (f, f')`.
pub fn rayleigh_quotient<F>(f: F, rule: &QuadratureRule, params: &ProfileParams) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let energy = radial_sum(|r| f(r).map(|(_, d)| (1.0 - r * r) * d * d), rule, params)?;
    let mass = radial_sum(|r| f(r).map(|(v, _)| v * v), rule, params)?;
    if !(mass > 0.0) {
        return Err(Error::ZeroNorm("rayleigh_quotient"));
    }
    Ok(energy / mass)
}

/// `L²(w)` Gram matrix over the whole profile, averaged over the two
/// hemispheres so that normalised modes have unit diagonal. Odd modes carry
/// the hemisphere sign, so odd-even entries cancel.
pub fn gram_matrix(
    modes: &[RadialEigenmode],
    rule: &QuadratureRule,
    params: &ProfileParams,
) -> Result<Vec<Vec<f64>>> {
    check_rule(rule, params)?;
    let values = rule
        .nodes
        .iter()
        .map(|s| {
            modes
                .iter()
                .map(|m| m.value(s.sqrt()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut g = vec![vec![0.0; modes.len()]; modes.len()];
    for i in 0..modes.len() {
        for j in 0..=i {
            let hemi: f64 = 0.5
                * values
                    .iter()
                    .zip(&rule.weights)
                    .map(|(v, w)| w * v[i] * v[j])
                    .sum::<f64>();
            let signs: f64 = [Hemisphere::North, Hemisphere::South]
                .iter()
                .map(|&h| modes[i].hemisphere_sign(h) * modes[j].hemisphere_sign(h))
                .sum();
            g[i][j] = 0.5 * signs * hemi;
            g[j][i] = g[i][j];
        }
    }
    Ok(g)
}

/// A radial trial `ρ ↦ (φ, φ', φ'')`.
#[derive(Debug, Clone, Copy)]
pub struct RadialTrial {
    pub name: &'static str,
    pub jet: fn(f64) -> (f64, f64, f64),
}

impl RadialTrial {
    pub fn standard_set() -> Vec<RadialTrial> {
        vec![
            RadialTrial {
                name: "rho^2",
                jet: |r| (r * r, 2.0 * r, 2.0),
            },
            RadialTrial {
                name: "rho^4",
                jet: |r| (r.powi(4), 4.0 * r.powi(3), 12.0 * r * r),
            },
            RadialTrial {
                name: "exp(rho^2)",
                jet: |r| {
                    let e = (r * r).exp();
                    (e, 2.0 * r * e, (2.0 + 4.0 * r * r) * e)
                },
            },
            RadialTrial {
                name: "cos(rho)",
                jet: |r| (r.cos(), -r.sin(), -r.cos()),
            },
            RadialTrial {
                name: "1/(2+rho^2)",
                jet: |r| {
                    let d = 2.0 + r * r;
                    (
                        1.0 / d,
                        -2.0 * r / (d * d),
                        (6.0 * r * r - 4.0) / (d * d * d),
                    )
                },
            },
        ]
    }
}

fn radial_l(trial: &RadialTrial, rho: f64, params: &ProfileParams) -> Result<f64> {
    let (f, df, d2f) = (trial.jet)(rho);
    Ok(apply_radial(&RadialJet::new(f, df, d2f, rho)?, params))
}

/// `|∫_S L φ dσ|` for a radial trial; both hemispheres contribute equally.
pub fn green_check_radial(
    trial: &RadialTrial,
    params: &ProfileParams,
    rule: &QuadratureRule,
) -> Result<f64> {
    let half = radial_sum(|r| radial_l(trial, r, params), rule, params)?;
    Ok((params.sphere_area * half).abs())
}

/// `|∫_S (ψ Lφ − φ Lψ) dσ|` for radial trials.
pub fn green_check_symmetric(
    psi: &RadialTrial,
    phi: &RadialTrial,
    params: &ProfileParams,
    rule: &QuadratureRule,
) -> Result<f64> {
    let half = radial_sum(
        |r| {
            Ok((psi.jet)(r).0 * radial_l(phi, r, params)?
                - (phi.jet)(r).0 * radial_l(psi, r, params)?)
        },
        rule,
        params,
    )?;
    Ok((params.sphere_area * half).abs())
}

/// A trial `φ(ρ, ϑ)` on `ℍ¹`, the same on both hemispheres.
#[derive(Debug, Clone, Copy)]
pub struct PolarTrial {
    pub name: &'static str,
    pub jet: fn(f64, f64) -> PolarJet,
}

impl PolarTrial {
    pub fn standard_set() -> Vec<PolarTrial> {
        vec![
            PolarTrial {
                name: "(3-4rho^2)cos(theta)",
                jet: |r, t| {
                    let (s, c) = t.sin_cos();
                    let g = 3.0 - 4.0 * r * r;
                    PolarJet {
                        rho: r,
                        f: g * c,
                        f_r: -8.0 * r * c,
                        f_t: -g * s,
                        f_rr: -8.0 * c,
                        f_tt: -g * c,
                        f_tr: 8.0 * r * s,
                    }
                },
            },
            PolarTrial {
                name: "x^2+rho^4",
                jet: |r, t| {
                    let (s, c) = t.sin_cos();
                    PolarJet {
                        rho: r,
                        f: r * r * c * c + r.powi(4),
                        f_r: 2.0 * r * c * c + 4.0 * r.powi(3),
                        f_t: -2.0 * r * r * c * s,
                        f_rr: 2.0 * c * c + 12.0 * r * r,
                        f_tt: -2.0 * r * r * (2.0 * t).cos(),
                        f_tr: -4.0 * r * c * s,
                    }
                },
            },
            PolarTrial {
                name: "exp(x)",
                jet: |r, t| {
                    let (s, c) = t.sin_cos();
                    let e = (r * c).exp();
                    PolarJet {
                        rho: r,
                        f: e,
                        f_r: c * e,
                        f_t: -r * s * e,
                        f_rr: c * c * e,
                        f_tt: (r * r * s * s - r * c) * e,
                        f_tr: -(s + r * s * c) * e,
                    }
                },
            },
        ]
    }
}

/// `|∫_S L φ dσ|` on `ℍ¹` with `dσ = ρ²/(2√(1−ρ²)) dρ dϑ` per hemisphere:
/// Gauss–Jacobi in `s = ρ²` times the periodic trapezoid rule in `ϑ`.
pub fn green_check_polar(trial: &PolarTrial, rule: &QuadratureRule) -> Result<f64> {
    let params = ProfileParams::new(1)?;
    let dt = std::f64::consts::TAU / THETA_POINTS as f64;
    let mut total = 0.0;
    for hem in [Hemisphere::North, Hemisphere::South] {
        total += radial_sum(
            |r| {
                let ring: f64 = (0..THETA_POINTS)
                    .map(|j| apply_polar_h1(&(trial.jet)(r, j as f64 * dt), hem))
                    .sum();
                Ok(ring * dt)
            },
            rule,
            &params,
        )?;
    }
    Ok(total.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoincareEstimate {
    /// Lowest non-zero natural eigenvalue.
    pub natural: f64,
    /// Lowest Dirichlet-at-one eigenvalue.
    pub dirichlet: f64,
    pub mu: f64,
    /// `1/μ`.
    pub constant: f64,
}

/// Radial-only estimate of `μ` and the Poincaré constant `1/μ`.
pub fn poincare_constant_estimate(
    params: &ProfileParams,
    n_points: usize,
) -> Result<PoincareEstimate> {
    let natural = discrete_radial_spectrum(params, BoundaryCondition::Natural, n_points, 1)?[0];
    let dirichlet =
        discrete_radial_spectrum(params, BoundaryCondition::DirichletAtOne, n_points, 1)?[0];
    let mu = natural.min(dirichlet);
    Ok(PoincareEstimate {
        natural,
        dirichlet,
        mu,
        constant: 1.0 / mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeMinimum {
    pub k: i64,
    pub matching: Matching,
    pub lambda_re: f64,
    pub lambda_im: f64,
}

/// Lowest eigenvalue of every Fourier mode `1 ≤ |k| ≤ k_max` under both
/// matchings, next to the radial estimate. Exploratory: no claim is attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullModeSurvey {
    pub exploratory: bool,
    pub radial: PoincareEstimate,
    pub modes: Vec<ModeMinimum>,
    pub mu: f64,
}

pub fn full_mode_survey(n_points: usize, k_max: i64) -> Result<FullModeSurvey> {
    if k_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} must be at least 1"
        )));
    }
    let radial = poincare_constant_estimate(&ProfileParams::new(1)?, n_points)?;
    let mut modes = Vec::new();
    for k in 1..=k_max {
        for matching in [Matching::Continuity, Matching::Antisymmetry] {
            let lam = mode_spectrum(k, n_points, 1, matching)?[0];
            modes.push(ModeMinimum {
                k,
                matching,
                lambda_re: lam.re,
                lambda_im: lam.im,
            });
        }
    }
    let mu = modes.iter().map(|m| m.lambda_re).fold(radial.mu, f64::min);
    Ok(FullModeSurvey {
        exploratory: true,
        radial,
        modes,
        mu,
    })
}

/// `∫₀¹ f w dρ` for a fallible integrand; used by callers holding mode evaluators.
pub fn weighted_mean<F: Fn(f64) -> Result<f64>>(
    f: F,
    rule: &QuadratureRule,
    params: &ProfileParams,
) -> Result<f64> {
    radial_sum(f, rule, params)
}
