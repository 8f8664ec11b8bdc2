//! Pointwise evaluation of `L_HS` on the profile and numerical checks of
//! the identities behind its coordinate forms.
//!
//! On the hemisphere with sign `s` the operator acting on a `t`-independent
//! function `φ(z)` is
//!
//! ```text
//! L φ = Δφ − 2(n − κ²)⟨∇φ, z⟩ − s·Q·κ⟨∇φ, Jz⟩ − ⟨∇²φ ν, ν⟩,   κ = √(1−ρ²)/ρ.
//! ```
//!
//! In the adapted coordinates `ρ = |z|`, `ẑ = z/ρ`, `ζ = Jz/ρ`, with jets
//! `φ_ζ = ⟨∇φ, ζ⟩`, `φ_ζζ = ⟨∇²φ ζ, ζ⟩ − φ_ρ/ρ`, `φ_ζρ = ⟨∇²φ ζ, ẑ⟩ + φ_ζ/ρ`,
//! this reads
//!
//! ```text
//! L φ = (1−ρ²)φ_ρρ + ((2n − (2n+1)ρ²)/ρ)φ_ρ − 2sρ√(1−ρ²)φ_ζρ
//!       + Δ_S φ/ρ² − (1−ρ²)φ_ζζ − 2ns√(1−ρ²)φ_ζ.
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    dot, horizontal_normal, kappa, norm, omega_bar, perp, Hemisphere, ProfileParams,
};

/// Step of the central difference oracles.
pub const FD_STEP: f64 = 1e-5;
const SAMPLE_SEED: u64 = 0x0b5e_7a11;

fn sqrt_one_minus(rho: f64) -> f64 {
    (1.0 - rho * rho).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
    pub rho: f64,
}

impl RadialJet {
    pub fn new(f: f64, df: f64, d2f: f64, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::domain(
                "RadialJet",
                format!("rho = {rho} outside (0, 1)"),
            ));
        }
        Ok(Self { f, df, d2f, rho })
    }
}

/// Self-adjoint form `(p φ')' = −λ w φ` of the radial problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SLCoefficients {
    pub n: usize,
}

impl SLCoefficients {
    pub fn new(params: &ProfileParams) -> Self {
        Self { n: params.n }
    }

    /// `p(ρ) = ρ^{2n}√(1−ρ²)`.
    pub fn p(&self, rho: f64) -> f64 {
        rho.powi(2 * self.n as i32) * sqrt_one_minus(rho)
    }

    /// `w(ρ) = ρ^{2n}/√(1−ρ²)`.
    pub fn w(&self, rho: f64) -> f64 {
        rho.powi(2 * self.n as i32) / sqrt_one_minus(rho)
    }
}

/// `(1−ρ²)φ'' + ((2n − (2n+1)ρ²)/ρ)φ'`.
pub fn apply_radial(jet: &RadialJet, params: &ProfileParams) -> f64 {
    let r = jet.rho;
    let n = params.n as f64;
    (1.0 - r * r) * jet.d2f + (2.0 * n - (2.0 * n + 1.0) * r * r) / r * jet.df
}

/// Jets of `φ(ρ, ϑ)` in polar coordinates of `ℍ¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarJet {
    pub rho: f64,
    pub f: f64,
    pub f_r: f64,
    pub f_t: f64,
    pub f_rr: f64,
    pub f_tt: f64,
    pub f_tr: f64,
}

/// `L_HS` in polar coordinates of `ℍ¹`:
/// `(1−ρ²)φ_ρρ − 2s√(1−ρ²)φ_ϑρ + φ_ϑϑ + ((2−3ρ²)/ρ)φ_ρ − 2s(√(1−ρ²)/ρ)φ_ϑ`.
pub fn apply_polar_h1(jet: &PolarJet, hemisphere: Hemisphere) -> f64 {
    let r = jet.rho;
    let s = hemisphere.sign();
    let root = sqrt_one_minus(r);
    (1.0 - r * r) * jet.f_rr - 2.0 * s * root * jet.f_tr
        + jet.f_tt
        + (2.0 - 3.0 * r * r) / r * jet.f_r
        - 2.0 * s * root / r * jet.f_t
}

/// Determinant of the principal symbol of [`apply_polar_h1`] in `(ρ, ϑ)`.
pub fn polar_symbol_determinant(rho: f64) -> f64 {
    let root = sqrt_one_minus(rho);
    let a_rr = root * root;
    let a_rt = -root;
    let a_tt = 1.0;
    a_rr * a_tt - a_rt * a_rt
}

/// Jets of `φ` in the adapted frame `(ẑ, ζ, S^{2n−1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullJet {
    pub rho: f64,
    pub f_r: f64,
    pub f_rr: f64,
    pub f_z: f64,
    pub f_zz: f64,
    pub f_zr: f64,
    /// Laplacian of `φ(ρ·)` on the unit sphere `S^{2n−1}`.
    pub sphere_laplacian: f64,
}

impl FullJet {
    /// Jets from the Euclidean gradient and Hessian at `z ≠ 0`.
    pub fn from_ambient(z: &[f64], grad: &[f64], hess: &[Vec<f64>]) -> Result<Self> {
        let rho = norm(z);
        if rho == 0.0 {
            return Err(Error::domain("FullJet::from_ambient", "z = 0"));
        }
        let dim = z.len();
        let zh: Vec<f64> = z.iter().map(|v| v / rho).collect();
        let zeta: Vec<f64> = perp(&zh);
        let quad =
            |a: &[f64], b: &[f64]| -> f64 { (0..dim).map(|i| a[i] * dot(&hess[i], b)).sum() };
        let f_r = dot(grad, &zh);
        let f_rr = quad(&zh, &zh);
        let f_z = dot(grad, &zeta);
        let f_zz = quad(&zeta, &zeta) - f_r / rho;
        let f_zr = quad(&zeta, &zh) + f_z / rho;
        let trace: f64 = (0..dim).map(|i| hess[i][i]).sum();
        let sphere_laplacian = rho * rho * (trace - f_rr - (dim as f64 - 1.0) * f_r / rho);
        Ok(Self {
            rho,
            f_r,
            f_rr,
            f_z,
            f_zz,
            f_zr,
            sphere_laplacian,
        })
    }

    fn euclidean_laplacian(&self, n: usize) -> f64 {
        let r = self.rho;
        self.f_rr + (2.0 * n as f64 - 1.0) * self.f_r / r + self.sphere_laplacian / (r * r)
    }
}

/// Radial operator + mixed derivatives + angular operator.
pub fn apply_full(jet: &FullJet, params: &ProfileParams, hemisphere: Hemisphere) -> f64 {
    let r = jet.rho;
    let n = params.n as f64;
    let s = hemisphere.sign();
    let root = sqrt_one_minus(r);
    let radial = (1.0 - r * r) * jet.f_rr + (2.0 * n - (2.0 * n + 1.0) * r * r) / r * jet.f_r;
    let mixed = -2.0 * s * r * root * jet.f_zr;
    let angular =
        jet.sphere_laplacian / (r * r) - (1.0 - r * r) * jet.f_zz - 2.0 * n * s * root * jet.f_z;
    radial + mixed + angular
}

/// Same operator grouped around the Euclidean Laplacian.
pub fn apply_full_grouped(jet: &FullJet, params: &ProfileParams, hemisphere: Hemisphere) -> f64 {
    let r = jet.rho;
    let n = params.n as f64;
    let s = hemisphere.sign();
    let root = sqrt_one_minus(r);
    let lap = jet.euclidean_laplacian(params.n);
    (1.0 - r * r) * (lap - jet.f_zz) - 2.0 * s * r * root * jet.f_zr
        + jet.sphere_laplacian
        + (1.0 - 2.0 * r * r) / r * jet.f_r
        - 2.0 * n * s * root * jet.f_z
}

/// `L_HS φ` straight from the Euclidean gradient and Hessian.
pub fn apply_ambient(
    z: &[f64],
    grad: &[f64],
    hess: &[Vec<f64>],
    params: &ProfileParams,
    hemisphere: Hemisphere,
) -> Result<f64> {
    let rho = norm(z);
    let nu = horizontal_normal(z, hemisphere)?;
    let k = kappa(rho);
    let n = params.n as f64;
    let dim = z.len();
    let trace: f64 = (0..dim).map(|i| hess[i][i]).sum();
    let hnn: f64 = (0..dim).map(|i| nu[i] * dot(&hess[i], &nu)).sum();
    Ok(trace
        - 2.0 * (n - k * k) * dot(grad, z)
        - hemisphere.sign() * params.q as f64 * k * dot(grad, &perp(z))
        - hnn)
}

/// `⟨∇²φ ν, ν⟩` expressed through adapted jets.
pub fn hessian_normal_from_jets(jet: &FullJet, hemisphere: Hemisphere) -> f64 {
    let r = jet.rho;
    let s = hemisphere.sign();
    let root = sqrt_one_minus(r);
    r * r * jet.f_rr
        + (1.0 - r * r) * jet.f_zz
        + 2.0 * s * r * root * jet.f_zr
        + (1.0 - r * r) / r * jet.f_r
        - 2.0 * s * root * jet.f_z
}

/// A polynomial in the coordinates of `ℝ^{2n}` with exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTrial {
    pub name: String,
    pub dim: usize,
    /// `(coefficient, exponents)` pairs.
    pub terms: Vec<(f64, Vec<u32>)>,
}

fn monomial(exps: &[u32], z: &[f64], skip: &[usize]) -> f64 {
    let mut e: Vec<u32> = exps.to_vec();
    let mut factor = 1.0;
    for &i in skip {
        if e[i] == 0 {
            return 0.0;
        }
        factor *= e[i] as f64;
        e[i] -= 1;
    }
    factor
        * e.iter()
            .zip(z)
            .map(|(&p, &x)| x.powi(p as i32))
            .product::<f64>()
}

impl PolyTrial {
    pub fn new(name: impl Into<String>, dim: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        if terms.iter().any(|(_, e)| e.len() != dim) {
            return Err(Error::InvalidArgument(
                "monomial exponent length differs from dimension".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            dim,
            terms,
        })
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * monomial(e, z, &[]))
            .sum()
    }

    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                self.terms
                    .iter()
                    .map(|(c, e)| c * monomial(e, z, &[i]))
                    .sum()
            })
            .collect()
    }

    pub fn hessian(&self, z: &[f64]) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        self.terms
                            .iter()
                            .map(|(c, e)| c * monomial(e, z, &[i, j]))
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// Default trial set: `ρ²`, `x₁²y₁ − 3x₁`, `ρ⁴ + x₁y₁`, and a cubic mixing the first two planes.
    pub fn standard_set(params: &ProfileParams) -> Vec<PolyTrial> {
        let dim = params.dim();
        let unit = |pairs: &[(usize, u32)]| {
            let mut e = vec![0u32; dim];
            for &(i, p) in pairs {
                e[i] += p;
            }
            e
        };
        let rho2: Vec<(f64, Vec<u32>)> = (0..dim).map(|i| (1.0, unit(&[(i, 2)]))).collect();
        let mut rho4 = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                rho4.push((1.0, unit(&[(i, 2), (j, 2)])));
            }
        }
        rho4.push((1.0, unit(&[(0, 1), (1, 1)])));
        let last = dim - 1;
        let mut out = vec![
            PolyTrial::new("rho^2", dim, rho2).expect("consistent"),
            PolyTrial::new(
                "x1^2 y1 - 3 x1",
                dim,
                vec![(1.0, unit(&[(0, 2), (1, 1)])), (-3.0, unit(&[(0, 1)]))],
            )
            .expect("consistent"),
            PolyTrial::new("rho^4 + x1 y1", dim, rho4).expect("consistent"),
        ];
        out.push(
            PolyTrial::new(
                "mixed cubic",
                dim,
                vec![
                    (0.7, unit(&[(0, 1), (last, 2)])),
                    (-1.3, unit(&[(1, 3)])),
                    (0.4, unit(&[(0, 1), (1, 1), (last, 1)])),
                    (2.0, unit(&[(last, 1)])),
                ],
            )
            .expect("consistent"),
        );
        out
    }
}

/// Maximum deviation recorded for one identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub max_deviation: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn worst(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn axpy(z: &[f64], a: f64, d: &[f64]) -> Vec<f64> {
    z.iter().zip(d).map(|(x, y)| x + a * y).collect()
}

fn central<F: Fn(f64) -> f64>(f: F) -> f64 {
    (f(FD_STEP) - f(-FD_STEP)) / (2.0 * FD_STEP)
}

fn central_vec<F: Fn(f64) -> Vec<f64>>(f: F) -> Vec<f64> {
    let p = f(FD_STEP);
    let m = f(-FD_STEP);
    p.iter()
        .zip(&m)
        .map(|(a, b)| (a - b) / (2.0 * FD_STEP))
        .collect()
}

/// Orthonormal frame of the horizontal tangent space `ν^⊥` at `z`, built by
/// Gram–Schmidt on `(Jν, e₁, e₂, …)` restricted to the given candidate indices.
fn tangent_frame(z: &[f64], hem: Hemisphere, picks: &[usize]) -> Vec<Vec<f64>> {
    let nu = horizontal_normal(z, hem).expect("interior sample");
    let dim = z.len();
    let mut basis: Vec<Vec<f64>> = vec![nu.clone()];
    let mut frame = Vec::new();
    for &c in picks {
        let mut v = if c == 0 {
            perp(&nu)
        } else {
            let mut e = vec![0.0; dim];
            e[c - 1] = 1.0;
            e
        };
        for b in &basis {
            let d = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let l = norm(&v);
        v.iter_mut().for_each(|x| *x /= l);
        basis.push(v.clone());
        frame.push(v);
    }
    frame
}

/// Greedy pivoted completion: indices of coordinate axes that extend the
/// orthonormal set `basis` to `needed` vectors, largest residual first.
fn pivoted_axes(mut basis: Vec<Vec<f64>>, dim: usize, needed: usize) -> Vec<usize> {
    let mut picks = Vec::new();
    while basis.len() < needed {
        let mut best = (0usize, -1.0f64, Vec::new());
        for c in 0..dim {
            let mut v = vec![0.0; dim];
            v[c] = 1.0;
            for b in &basis {
                let d = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
            let l = norm(&v);
            if l > best.1 {
                best = (c, l, v);
            }
        }
        let (c, l, mut v) = best;
        v.iter_mut().for_each(|x| *x /= l);
        basis.push(v);
        picks.push(c);
    }
    picks
}

fn frame_picks(z: &[f64], hem: Hemisphere) -> Vec<usize> {
    let nu = horizontal_normal(z, hem).expect("interior sample");
    let dim = z.len();
    let mut picks = vec![0usize];
    picks.extend(
        pivoted_axes(vec![nu.clone(), perp(&nu)], dim, dim)
            .into_iter()
            .map(|c| c + 1),
    );
    picks
}

/// `Δ_HS φ` from the definition `Σ τ_i(τ_i φ) − (∇_{τ_i}τ_i)_{HS} φ`, by differences.
fn delta_hs_fd(trial: &PolyTrial, z: &[f64], hem: Hemisphere) -> f64 {
    let picks = frame_picks(z, hem);
    let nu = horizontal_normal(z, hem).expect("interior sample");
    let frame = tangent_frame(z, hem, &picks);
    let grad = trial.gradient(z);
    let mut acc = 0.0;
    for (i, tau) in frame.iter().enumerate() {
        let first = central(|s| {
            let p = axpy(z, s, tau);
            dot(&trial.gradient(&p), &tangent_frame(&p, hem, &picks)[i])
        });
        let dtt = central_vec(|s| tangent_frame(&axpy(z, s, tau), hem, &picks)[i].clone());
        let normal_part = dot(&dtt, &nu);
        let projected: Vec<f64> = dtt
            .iter()
            .zip(&nu)
            .map(|(a, b)| a - normal_part * b)
            .collect();
        acc += first - dot(&grad, &projected);
    }
    acc
}

fn omega_field(z: &[f64], hem: Hemisphere) -> f64 {
    omega_bar(norm(z), hem).expect("interior sample")
}

/// `grad_HS ϖ`: projection of the Euclidean gradient of `ϖ(|z|)` onto `ν^⊥`.
fn grad_hs_omega(z: &[f64], hem: Hemisphere) -> Vec<f64> {
    let nu = horizontal_normal(z, hem).expect("interior sample");
    let g: Vec<f64> = (0..z.len())
        .map(|j| {
            central(|s| {
                let mut p = z.to_vec();
                p[j] += s;
                omega_field(&p, hem)
            })
        })
        .collect();
    let d = dot(&g, &nu);
    g.iter().zip(&nu).map(|(a, b)| a - d * b).collect()
}

/// Jets by differences along radial lines and great circles through `z`.
pub fn fd_full_jet(trial: &PolyTrial, z: &[f64]) -> FullJet {
    let rho = norm(z);
    let zh: Vec<f64> = z.iter().map(|v| v / rho).collect();
    let zeta = perp(&zh);
    let dim = z.len();
    let circle = |r: f64, e: f64, v: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let point: Vec<f64> = (0..dim)
            .map(|i| r * (e.cos() * zh[i] + e.sin() * v[i]))
            .collect();
        let tangent: Vec<f64> = (0..dim)
            .map(|i| r * (-e.sin() * zh[i] + e.cos() * v[i]))
            .collect();
        (point, tangent)
    };
    let f_r = dot(&trial.gradient(z), &zh);
    let f_rr = central(|s| dot(&trial.gradient(&axpy(z, s, &zh)), &zh));
    let psi_e = dot(&trial.gradient(z), &circle(rho, 0.0, &zeta).1);
    let psi_ee = central(|e| {
        let (p, t) = circle(rho, e, &zeta);
        dot(&trial.gradient(&p), &t)
    });
    let psi_er = central(|s| {
        let (p, t) = circle(rho + s, 0.0, &zeta);
        dot(&trial.gradient(&p), &t)
    });
    // orthonormal basis of the tangent space of the sphere at ẑ
    let mut basis: Vec<Vec<f64>> = vec![zh.clone()];
    for c in pivoted_axes(vec![zh.clone()], dim, dim) {
        let mut v = vec![0.0; dim];
        v[c] = 1.0;
        for b in &basis {
            let d = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let l = norm(&v);
        v.iter_mut().for_each(|x| *x /= l);
        basis.push(v);
    }
    let lap: f64 = basis[1..]
        .iter()
        .map(|v| {
            central(|e| {
                let (p, t) = circle(rho, e, v);
                dot(&trial.gradient(&p), &t)
            })
        })
        .sum();
    FullJet {
        rho,
        f_r,
        f_rr,
        f_z: psi_e / rho,
        f_zz: psi_ee / (rho * rho),
        f_zr: psi_er / rho,
        sphere_laplacian: lap,
    }
}

/// Evaluates each identity at `sample_count` seeded points per trial, both
/// hemispheres, `ρ ∈ [0.1, 0.9]`, and records the largest deviation.
pub fn verify_identities(
    params: &ProfileParams,
    trials: &[PolyTrial],
    sample_count: usize,
) -> Result<IdentityReport> {
    let dim = params.dim();
    if trials.iter().any(|t| t.dim != dim) {
        return Err(Error::InvalidArgument(
            "trial dimension differs from 2n".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let names = [
        "tangential_laplacian",
        "normal_derivative_of_normal",
        "hessian_normal_decomposition",
        "hessian_normal_jets",
        "full_form_vs_ambient",
        "grouped_form",
    ];
    let mut worst = [0.0f64; 6];
    let mut count = 0usize;
    for i in 0..sample_count {
        let hem = if i % 2 == 0 {
            Hemisphere::North
        } else {
            Hemisphere::South
        };
        let dir: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = norm(&dir).max(1e-3);
        let r = rng.gen_range(0.1..0.9);
        let z: Vec<f64> = dir.iter().map(|x| x * r / len).collect();
        let nu = horizontal_normal(&z, hem)?;
        let nu_perp = perp(&nu);
        let om = omega_field(&z, hem);
        let g_om = grad_hs_omega(&z, hem);

        // D_ν ν = −grad_HS ϖ/ϖ + ϖ ν^⊥
        let dnn = central_vec(|s| horizontal_normal(&axpy(&z, s, &nu), hem).expect("interior"));
        let dnn_dev = (0..dim)
            .map(|j| (dnn[j] - (-g_om[j] / om + om * nu_perp[j])).abs())
            .fold(0.0, f64::max);
        worst[1] = worst[1].max(dnn_dev);

        for trial in trials {
            count += 1;
            let grad = trial.gradient(&z);
            let hess = trial.hessian(&z);
            let trace: f64 = (0..dim).map(|j| hess[j][j]).sum();
            let hnn: f64 = (0..dim).map(|j| nu[j] * dot(&hess[j], &nu)).sum();
            let dphi_nu = dot(&grad, &nu);

            let lhs = delta_hs_fd(trial, &z, hem);
            let rhs = trace - 2.0 * params.n as f64 * dphi_nu - hnn;
            worst[0] = worst[0].max((lhs - rhs).abs());

            // ⟨∇²φν,ν⟩ = ∂²φ/∂ν² + ⟨grad ϖ/ϖ, grad φ⟩ − ϖ ∂φ/∂ν^⊥
            let d2nu = central(|s| {
                let p = axpy(&z, s, &nu);
                dot(
                    &trial.gradient(&p),
                    &horizontal_normal(&p, hem).expect("interior"),
                )
            });
            let grad_hs: Vec<f64> = grad.iter().zip(&nu).map(|(a, b)| a - dphi_nu * b).collect();
            let decomposed = d2nu + dot(&g_om, &grad_hs) / om - om * dot(&grad, &nu_perp);
            worst[2] = worst[2].max((hnn - decomposed).abs());

            let fd_jet = fd_full_jet(trial, &z);
            worst[3] = worst[3].max((hessian_normal_from_jets(&fd_jet, hem) - hnn).abs());

            let truth = apply_ambient(&z, &grad, &hess, params, hem)?;
            worst[4] = worst[4].max((apply_full(&fd_jet, params, hem) - truth).abs());
            let exact_jet = FullJet::from_ambient(&z, &grad, &hess)?;
            worst[5] = worst[5].max(
                (apply_full(&exact_jet, params, hem) - apply_full_grouped(&exact_jet, params, hem))
                    .abs(),
            );
        }
    }
    let checks = names
        .iter()
        .zip(worst)
        .enumerate()
        .map(|(i, (name, dev))| IdentityCheck {
            name: name.to_string(),
            max_deviation: dev,
            samples: if i == 1 { sample_count } else { count },
        })
        .collect();
    Ok(IdentityReport { checks })
}

/// An angular profile `g(ϑ)` with its first two derivatives.
pub trait AngularProfile {
    fn eval(&self, theta: f64) -> (f64, f64, f64);
}

impl<F: Fn(f64) -> (f64, f64, f64)> AngularProfile for F {
    fn eval(&self, theta: f64) -> (f64, f64, f64) {
        self(theta)
    }
}

/// `min_λ sup_{ρ, ϑ} |L φ + λφ|` for `φ = g(ϑ)` on the north hemisphere of
/// `ℍ¹`, `ρ ∈ [0.1, 0.9]`.
pub fn purely_angular_probe<G: AngularProfile>(profile: &G, lambda_grid: &[f64]) -> f64 {
    let n_rho = 81;
    let n_theta = 64;
    let mut samples = Vec::with_capacity(n_rho * n_theta);
    for i in 0..n_rho {
        let rho = 0.1 + 0.8 * i as f64 / (n_rho - 1) as f64;
        for j in 0..n_theta {
            let theta = std::f64::consts::TAU * j as f64 / n_theta as f64;
            let (g, g1, g2) = profile.eval(theta);
            let jet = PolarJet {
                rho,
                f: g,
                f_r: 0.0,
                f_t: g1,
                f_rr: 0.0,
                f_tt: g2,
                f_tr: 0.0,
            };
            samples.push((apply_polar_h1(&jet, Hemisphere::North), g));
        }
    }
    lambda_grid
        .iter()
        .map(|&lam| {
            samples
                .iter()
                .map(|(l, g)| (l + lam * g).abs())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}
