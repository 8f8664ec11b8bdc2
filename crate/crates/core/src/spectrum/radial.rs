//! Closed-form radial eigenpairs and the Gamma-function eigenconditions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Hemisphere, ProfileParams};
use crate::numerics::quadrature::{profile_rule, DEFAULT_ORDER};
use crate::numerics::roots::scan_roots;
use crate::specfun::{
    gamma, gauss_value_at_one, hyp2f1, hyp2f1_dz, hyp2f1_dz2, recip_gamma, Hyp2F1Params,
};

/// Scan step for the eigenconditions.
pub const ROOT_SCAN_STEP: f64 = 0.5;
/// First scan point; keeps integer eigenvalues off the grid.
pub const ROOT_SCAN_START: f64 = 0.25;
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: usize) -> Self {
        if k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// `λ_k = k(k + 2n)`.
pub fn radial_eigenvalue(k: usize, params: &ProfileParams) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "k = 0 gives λ = 0, which is not an eigenvalue".into(),
        ));
    }
    Ok((k * (k + 2 * params.n)) as f64)
}

/// Hypergeometric parameters of mode `k`: `(−m, n+m, n+½)` for `k = 2m`,
/// `(−m−½, n+m+½, n+½)` for `k = 2m+1`.
pub fn mode_hyp_params(k: usize, params: &ProfileParams) -> Hyp2F1Params {
    let n = params.n as f64;
    let m = (k / 2) as f64;
    match Parity::of(k) {
        Parity::Even => Hyp2F1Params::new(-m, n + m, n + 0.5),
        Parity::Odd => Hyp2F1Params::new(-m - 0.5, n + m + 0.5, n + 0.5),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenmode {
    pub k: usize,
    pub n: usize,
    pub parity: Parity,
    pub lambda: f64,
    pub hyp: Hyp2F1Params,
    /// Factor giving unit norm in `L²(ρ^{2n}/√(1−ρ²) dρ)` on one hemisphere.
    pub normalization: f64,
}

impl RadialEigenmode {
    fn raw(&self, rho: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::domain(
                "RadialEigenmode",
                format!("rho = {rho} outside [0, 1]"),
            ));
        }
        if rho == 1.0 {
            return gauss_value_at_one(self.hyp);
        }
        hyp2f1(self.hyp, rho * rho)
    }

    /// Normalised value on the north hemisphere.
    pub fn value(&self, rho: f64) -> Result<f64> {
        Ok(self.normalization * self.raw(rho)?)
    }

    /// Value on the given hemisphere; odd modes change sign across the equator.
    pub fn signed_value(&self, rho: f64, hemisphere: Hemisphere) -> Result<f64> {
        Ok(self.hemisphere_sign(hemisphere) * self.value(rho)?)
    }

    pub fn hemisphere_sign(&self, hemisphere: Hemisphere) -> f64 {
        match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => hemisphere.sign(),
        }
    }

    /// `(φ, φ', φ'')` in `ρ` from `φ = F(ρ²)`: `φ' = 2ρF'`, `φ'' = 2F' + 4ρ²F''`.
    pub fn jet(&self, rho: f64) -> Result<(f64, f64, f64)> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::domain(
                "RadialEigenmode::jet",
                format!("rho = {rho} outside [0, 1)"),
            ));
        }
        let x = rho * rho;
        let f = hyp2f1(self.hyp, x)?;
        let d1 = hyp2f1_dz(self.hyp, x)?;
        let d2 = hyp2f1_dz2(self.hyp, x)?;
        let c = self.normalization;
        Ok((c * f, c * 2.0 * rho * d1, c * (2.0 * d1 + 4.0 * x * d2)))
    }
}

/// Mode `k` with unit weighted norm and `φ(0) > 0`.
pub fn radial_eigenfunction(k: usize, params: &ProfileParams) -> Result<RadialEigenmode> {
    let lambda = radial_eigenvalue(k, params)?;
    let hyp = mode_hyp_params(k, params);
    let rule = profile_rule(params, DEFAULT_ORDER)?;
    // ∫₀¹ F(ρ²)² w dρ = ½ Σ wᵢ F(sᵢ)²
    let values = rule
        .nodes
        .iter()
        .map(|&s| hyp2f1(hyp, s))
        .collect::<Result<Vec<f64>>>()?;
    let norm2: f64 = 0.5
        * values
            .iter()
            .zip(&rule.weights)
            .map(|(v, w)| w * v * v)
            .sum::<f64>();
    if !(norm2 > 0.0) {
        return Err(Error::ZeroNorm("radial_eigenfunction"));
    }
    Ok(RadialEigenmode {
        k,
        n: params.n,
        parity: Parity::of(k),
        lambda,
        hyp,
        normalization: 1.0 / norm2.sqrt(),
    })
}

fn root_r(lambda: f64, params: &ProfileParams) -> f64 {
    let n = params.n as f64;
    (n * n + lambda).sqrt()
}

/// `√π Γ(n+½) / 2 · 1/Γ((2+n−r)/2) · 1/Γ((2+n+r)/2)`, `r = √(n²+λ)`:
/// the weighted mean of the regular solution, zero exactly at even eigenvalues.
pub fn even_condition(lambda: f64, params: &ProfileParams) -> f64 {
    let n = params.n as f64;
    let r = root_r(lambda, params);
    let pre = std::f64::consts::PI.sqrt() * gamma(n + 0.5).expect("n ≥ 1") / 2.0;
    pre * recip_gamma((2.0 + n - r) / 2.0) * recip_gamma((2.0 + n + r) / 2.0)
}

/// `F(α, β; n+½; 1)` with `α, β = (n ∓ √(n²+λ))/2`, zero exactly at odd eigenvalues.
pub fn odd_condition(lambda: f64, params: &ProfileParams) -> f64 {
    let n = params.n as f64;
    let r = root_r(lambda, params);
    gauss_value_at_one(Hyp2F1Params::new((n - r) / 2.0, (n + r) / 2.0, n + 0.5))
        .expect("c − a − b = 1/2")
}

fn check_lambda_max(lambda_max: f64) -> Result<()> {
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "lambda_max = {lambda_max} must be positive"
        )));
    }
    Ok(())
}

/// Roots of [`even_condition`] in `(0, lambda_max]`.
pub fn eigencondition_even_roots(lambda_max: f64, params: &ProfileParams) -> Result<Vec<f64>> {
    check_lambda_max(lambda_max)?;
    scan_roots(
        |l| even_condition(l, params),
        ROOT_SCAN_START,
        lambda_max,
        ROOT_SCAN_STEP,
        ROOT_TOL,
    )
}

/// Roots of [`odd_condition`] in `(0, lambda_max]`.
pub fn eigencondition_odd_roots(lambda_max: f64, params: &ProfileParams) -> Result<Vec<f64>> {
    check_lambda_max(lambda_max)?;
    scan_roots(
        |l| odd_condition(l, params),
        ROOT_SCAN_START,
        lambda_max,
        ROOT_SCAN_STEP,
        ROOT_TOL,
    )
}
