//! Gauss–Jacobi quadrature on `[0, 1]` for weights `s^β (1−s)^α`.
//!
//! Under `s = ρ²` the profile measure `ρ^{2n} (1−ρ²)^{−1/2} dρ` becomes
//! `½ s^{n−½} (1−s)^{−½} ds`, so both endpoint singularities are absorbed
//! into a classical Jacobi weight with `α = −½` (at `s = 1`) and
//! `β = n − ½` (at `s = 0`).

use crate::error::{Error, Result};
use crate::geometry::ProfileParams;
use crate::numerics::tridiag::ql_implicit;
use crate::specfun::{beta as beta_fn, ln_gamma};

/// Node count used for every verification integral.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Increasing nodes in `(0, 1)`, in the variable `s`.
    pub nodes: Vec<f64>,
    /// Positive weights summing to `B(β+1, α+1)`.
    pub weights: Vec<f64>,
    /// Exponent of `(1 − s)`.
    pub alpha: f64,
    /// Exponent of `s`.
    pub beta: f64,
    pub order: usize,
}

impl QuadratureRule {
    /// `∫₀¹ g(s) s^β (1−s)^α ds`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * g(s))
            .sum()
    }

    /// Total mass `B(β+1, α+1)` of the weight.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss–Jacobi rule with `n_nodes` nodes for `(1−s)^alpha s^beta` on `[0, 1]`,
/// computed by diagonalising the Jacobi-polynomial recurrence matrix.
pub fn gauss_jacobi_rule(n_nodes: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    if n_nodes == 0 {
        return Err(Error::InvalidArgument(
            "quadrature needs at least one node".into(),
        ));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "Jacobi exponents must exceed −1 (alpha = {alpha}, beta = {beta})"
        )));
    }
    let ab = alpha + beta;
    let mut diag = Vec::with_capacity(n_nodes);
    let mut sub = Vec::with_capacity(n_nodes);
    for k in 0..n_nodes {
        let kf = k as f64;
        let a_k = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        diag.push(a_k);
        let j = kf + 1.0;
        let b_j = if k == 0 {
            // k = 1 entry with the (k + α + β) / (2k + α + β − 1) factor cancelled
            (4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
        } else {
            let t = 2.0 * j + ab;
            (4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0))).sqrt()
        };
        sub.push(b_j);
    }
    let mut first = vec![0.0; n_nodes];
    first[0] = 1.0;
    ql_implicit(&mut diag, &mut sub, Some(&mut first))?;

    // μ₀ on [0, 1]: B(β+1, α+1)
    let mass = (ln_gamma(alpha + 1.0)? + ln_gamma(beta + 1.0)? - ln_gamma(ab + 2.0)?).exp();
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(&first)
        .map(|(&x, &v)| (0.5 * (1.0 + x), mass * v * v))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        alpha,
        beta,
        order: n_nodes,
    })
}

/// The rule matching the profile weight for dimension `n`.
pub fn profile_rule(params: &ProfileParams, n_nodes: usize) -> Result<QuadratureRule> {
    gauss_jacobi_rule(n_nodes, -0.5, params.n as f64 - 0.5)
}

/// `∫₀¹ f(ρ) ρ^{2n} (1−ρ²)^{−1/2} dρ` through the `s = ρ²` substitution.
pub fn integrate_profile_radial<F: Fn(f64) -> f64>(
    f: F,
    rule: &QuadratureRule,
    params: &ProfileParams,
) -> Result<f64> {
    let expected_beta = params.n as f64 - 0.5;
    if rule.alpha != -0.5 || rule.beta != expected_beta {
        return Err(Error::InvalidArgument(format!(
            "rule exponents ({}, {}) do not match the profile weight (−0.5, {expected_beta})",
            rule.alpha, rule.beta
        )));
    }
    Ok(0.5 * rule.integrate(|s| f(s.sqrt())))
}

/// Same integral scaled by `O_{2n−1}/2`, the angular factor of one hemisphere.
pub fn integrate_hemisphere<F: Fn(f64) -> f64>(
    f: F,
    rule: &QuadratureRule,
    params: &ProfileParams,
) -> Result<f64> {
    Ok(0.5 * params.sphere_area * integrate_profile_radial(f, rule, params)?)
}

/// `∫₀¹ s^m s^β (1−s)^α ds = B(β+m+1, α+1)`.
pub fn jacobi_moment(m: u32, alpha: f64, beta: f64) -> Result<f64> {
    beta_fn(beta + m as f64 + 1.0, alpha + 1.0)
}
