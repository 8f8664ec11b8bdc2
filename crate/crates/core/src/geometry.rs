//! Geometry of the unit isoperimetric profile in `ℍⁿ` and a CC-geodesic integrator.
//!
//! Points of `ℝ^{2n}` are stored as `(x₁, y₁, …, xₙ, yₙ)` and the complex
//! structure acts pairwise, `J(x, y) = (−y, x)`. The profile is the graph
//! `t = ±u₀(|z|)` over the closed unit ball; `+` is the north hemisphere.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::specfun::gamma;

/// Finite-difference step shared by the geometric cross-checks.
pub const FD_STEP: f64 = 1e-5;
const SAMPLE_SEED: u64 = 0x5eed_0001;

/// Dimension data of `ℍⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileParams {
    pub n: usize,
    /// Homogeneous dimension `2n + 2`.
    pub q: usize,
    /// Area `2πⁿ/Γ(n)` of the unit sphere `S^{2n−1}`.
    pub sphere_area: f64,
}

impl ProfileParams {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Heisenberg index n must be at least 1".into(),
            ));
        }
        let sphere_area = 2.0 * PI.powi(n as i32) / gamma(n as f64)?;
        Ok(Self {
            n,
            q: 2 * n + 2,
            sphere_area,
        })
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hemisphere {
    North,
    South,
}

impl Hemisphere {
    pub fn sign(self) -> f64 {
        match self {
            Hemisphere::North => 1.0,
            Hemisphere::South => -1.0,
        }
    }

    /// Hemisphere containing a point at height `t`; the equator counts as north.
    pub fn from_height(t: f64) -> Self {
        if t < 0.0 {
            Hemisphere::South
        } else {
            Hemisphere::North
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicState {
    pub z: Vec<f64>,
    pub t: f64,
    pub p_h: Vec<f64>,
    pub p_last: f64,
}

/// `Jz`, the pairwise rotation by a right angle.
pub fn perp(z: &[f64]) -> Vec<f64> {
    z.chunks_exact(2).flat_map(|p| [-p[1], p[0]]).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_rho(op: &'static str, rho: f64, lo_open: bool, hi_open: bool) -> Result<()> {
    let lo_ok = if lo_open { rho > 0.0 } else { rho >= 0.0 };
    let hi_ok = if hi_open { rho < 1.0 } else { rho <= 1.0 };
    if lo_ok && hi_ok {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("rho = {rho} outside the admissible range"),
        ))
    }
}

/// `κ(ρ) = √(1−ρ²)/ρ`.
pub fn kappa(rho: f64) -> f64 {
    (1.0 - rho * rho).max(0.0).sqrt() / rho
}

/// Height of the north hemisphere, `u₀(ρ) = π/8 + (ρ/4)√(1−ρ²) − (1/4) arcsin ρ`.
pub fn profile_height(rho: f64, _params: &ProfileParams) -> Result<f64> {
    check_rho("profile_height", rho, false, false)?;
    Ok(PI / 8.0 + 0.25 * rho * (1.0 - rho * rho).sqrt() - 0.25 * rho.asin())
}

/// `u₀'(ρ) = −ρ²/(2√(1−ρ²))`.
pub fn profile_height_deriv(rho: f64) -> Result<f64> {
    check_rho("profile_height_deriv", rho, false, true)?;
    Ok(-rho * rho / (2.0 * (1.0 - rho * rho).sqrt()))
}

/// Unit horizontal normal `ν^± = z ± κ Jz`.
pub fn horizontal_normal(z: &[f64], hemisphere: Hemisphere) -> Result<Vec<f64>> {
    if z.is_empty() || z.len() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "z has odd length {}",
            z.len()
        )));
    }
    let rho = norm(z);
    if rho == 0.0 {
        return Err(Error::domain(
            "horizontal_normal",
            "characteristic point z = 0",
        ));
    }
    if rho > 1.0 + 1e-12 {
        return Err(Error::domain(
            "horizontal_normal",
            format!("|z| = {rho} exceeds 1"),
        ));
    }
    let k = hemisphere.sign() * kappa(rho.min(1.0));
    let jz = perp(z);
    Ok(z.iter().zip(&jz).map(|(a, b)| a + k * b).collect())
}

/// `ϖ^± = ±2√(1−ρ²)/ρ`.
pub fn omega_bar(rho: f64, hemisphere: Hemisphere) -> Result<f64> {
    check_rho("omega_bar", rho, true, false)?;
    Ok(hemisphere.sign() * 2.0 * kappa(rho))
}

/// Pointwise density `ρ/(2√(1−ρ²))` and radial weight `ρ^{2n}/√(1−ρ²)`.
pub fn area_density(rho: f64, params: &ProfileParams) -> Result<(f64, f64)> {
    check_rho("area_density", rho, true, true)?;
    let root = (1.0 - rho * rho).sqrt();
    Ok((rho / (2.0 * root), rho.powi(2 * params.n as i32) / root))
}

fn random_interior_point(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    let dir: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let len = norm(&dir).max(1e-3);
    let r = rng.gen_range(lo..hi);
    dir.iter().map(|x| x * r / len).collect()
}

fn normal_field(z: &[f64], hemisphere: Hemisphere) -> Vec<f64> {
    horizontal_normal(z, hemisphere).expect("sample points lie in the punctured ball")
}

/// Max deviation of the Euclidean divergence of `ν_H` from `2n` at seeded
/// random points, by central differences.
pub fn mean_curvature_check(params: &ProfileParams, sample_count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let dim = params.dim();
    let h = FD_STEP;
    let mut worst: f64 = 0.0;
    for i in 0..sample_count.max(1) {
        let hem = if i % 2 == 0 {
            Hemisphere::North
        } else {
            Hemisphere::South
        };
        let z = random_interior_point(&mut rng, dim, 0.1, 0.9);
        let mut div = 0.0;
        for j in 0..dim {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[j] += h;
            zm[j] -= h;
            div += (normal_field(&zp, hem)[j] - normal_field(&zm, hem)[j]) / (2.0 * h);
        }
        worst = worst.max((div - 2.0 * params.n as f64).abs());
    }
    worst
}

/// Max deviation of `∂ϖ/∂ν_H^⊥` from `2/ρ²` at seeded random points
/// (five-point stencil).
pub fn omega_derivative_check(params: &ProfileParams, sample_count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0xa5);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for i in 0..sample_count.max(1) {
        let hem = if i % 2 == 0 {
            Hemisphere::North
        } else {
            Hemisphere::South
        };
        let z = random_interior_point(&mut rng, params.dim(), 0.1, 0.9);
        let rho = norm(&z);
        let dir = perp(&normal_field(&z, hem));
        let shifted = |s: f64| -> f64 {
            let p: Vec<f64> = z.iter().zip(&dir).map(|(a, d)| a + s * d).collect();
            omega_bar(norm(&p), hem).expect("interior point")
        };
        let deriv = (8.0 * (shifted(h) - shifted(-h)) - (shifted(2.0 * h) - shifted(-2.0 * h)))
            / (12.0 * h);
        worst = worst.max((deriv - 2.0 / (rho * rho)).abs());
    }
    worst
}

/// Max of `| |ν_H| − 1 |` and `| ⟨z, ν_H⟩ − |z|² |` at seeded random points.
pub fn normal_identity_check(params: &ProfileParams, sample_count: usize) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0x3c);
    let mut unit: f64 = 0.0;
    let mut support: f64 = 0.0;
    for i in 0..sample_count.max(1) {
        let hem = if i % 2 == 0 {
            Hemisphere::North
        } else {
            Hemisphere::South
        };
        let z = random_interior_point(&mut rng, params.dim(), 0.01, 1.0);
        let nu = normal_field(&z, hem);
        unit = unit.max((norm(&nu) - 1.0).abs());
        support = support.max((dot(&z, &nu) - dot(&z, &z)).abs());
    }
    (unit, support)
}

fn geodesic_rhs(p_last: f64, z: &[f64], p_h: &[f64]) -> (Vec<f64>, f64, Vec<f64>) {
    let tdot = 0.5 * dot(&perp(z), p_h);
    let pdot: Vec<f64> = perp(p_h).into_iter().map(|v| p_last * v).collect();
    (p_h.to_vec(), tdot, pdot)
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(u, v)| u + a * v).collect()
}

/// Integrates `ż = P_H`, `ṫ = ½⟨Jz, ż⟩`, `Ṗ_H = P_last J P_H` with classical RK4.
///
/// Returns `steps + 1` states; state `j` sits at arc length `j · s_max / steps`.
pub fn geodesic_trace(
    p_last: f64,
    s_max: f64,
    steps: usize,
    initial: &GeodesicState,
) -> Result<Vec<GeodesicState>> {
    if steps == 0 {
        return Err(Error::InvalidArgument(
            "geodesic_trace needs at least one step".into(),
        ));
    }
    if initial.z.len() != initial.p_h.len() || initial.z.is_empty() || initial.z.len() % 2 != 0 {
        return Err(Error::InvalidArgument(
            "z and P_H must share an even dimension".into(),
        ));
    }
    let speed = norm(&initial.p_h);
    if (speed - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("|P_H| = {speed} must be 1")));
    }
    let h = s_max / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut z = initial.z.clone();
    let mut t = initial.t;
    let mut p = initial.p_h.clone();
    out.push(GeodesicState {
        z: z.clone(),
        t,
        p_h: p.clone(),
        p_last,
    });
    for _ in 0..steps {
        let (k1z, k1t, k1p) = geodesic_rhs(p_last, &z, &p);
        let (k2z, k2t, k2p) =
            geodesic_rhs(p_last, &axpy(&z, h / 2.0, &k1z), &axpy(&p, h / 2.0, &k1p));
        let (k3z, k3t, k3p) =
            geodesic_rhs(p_last, &axpy(&z, h / 2.0, &k2z), &axpy(&p, h / 2.0, &k2p));
        let (k4z, k4t, k4p) = geodesic_rhs(p_last, &axpy(&z, h, &k3z), &axpy(&p, h, &k3p));
        for i in 0..z.len() {
            z[i] += h / 6.0 * (k1z[i] + 2.0 * k2z[i] + 2.0 * k3z[i] + k4z[i]);
            p[i] += h / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
        }
        t += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        out.push(GeodesicState {
            z: z.clone(),
            t,
            p_h: p.clone(),
            p_last,
        });
    }
    Ok(out)
}

/// Initial state at the south pole `(0, −π/8)` heading along `x₁`.
pub fn south_pole_state(params: &ProfileParams) -> GeodesicState {
    let mut p_h = vec![0.0; params.dim()];
    p_h[0] = 1.0;
    GeodesicState {
        z: vec![0.0; params.dim()],
        t: -PI / 8.0,
        p_h,
        p_last: 2.0,
    }
}

/// Max over the pole-to-pole geodesic (`P_last = 2`, `s ∈ [0, π]`) of
/// `|t − sign·u₀(|z|)|`, with the sign taken from the hemisphere of `t`.
pub fn profile_geodesic_residual(params: &ProfileParams, steps: usize) -> Result<f64> {
    let trace = geodesic_trace(2.0, PI, steps, &south_pole_state(params))?;
    let mut worst: f64 = 0.0;
    for st in &trace {
        let rho = norm(&st.z).min(1.0);
        let hem = Hemisphere::from_height(st.t);
        let u = profile_height(rho, params)?;
        worst = worst.max((st.t - hem.sign() * u).abs());
    }
    Ok(worst)
}
