//! Real special functions: the Gamma family and the Gauss hypergeometric
//! function `₂F₁(a, b; c; x)` for `0 ≤ x < 1`.
//!
//! Gamma values come from a Lanczos approximation (`g = 7`, nine
//! coefficients) with the reflection formula below `x = 0.5`. The
//! hypergeometric function is summed directly for `x < 0.5` and through the
//! two-term connection formula in `1 − x` above that, unless the series
//! terminates, in which case it is always summed as a polynomial.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Maximum number of series terms before giving up on a non-terminating sum.
pub const TERM_BUDGET: usize = 500;
/// Relative size of a term below which it counts as negligible.
pub const SERIES_TOL: f64 = 1e-14;
/// Above this argument the non-terminating series is evaluated in `1 − x`.
pub const X_SWITCH: f64 = 0.5;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `sin(πx)` with the argument reduced before scaling, exact zero at integers.
fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    let r = x % 2.0;
    (PI * r).sin()
}

/// Lanczos partial-fraction sum for the shifted argument `x − 1`.
fn lanczos_sum(shifted: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (shifted + i as f64);
    }
    acc
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "ln_gamma",
            format!("x = {x} must be positive"),
        ));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx), and sin(πx) > 0 on (0, ½).
        return (PI / sin_pi(x)).ln() - ln_gamma_pos(1.0 - x);
    }
    let shifted = x - 1.0;
    let t = shifted + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (shifted + 0.5) * t.ln() - t + lanczos_sum(shifted).ln()
}

/// `Γ(x)` for real `x` away from the poles at non-positive integers.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) || !x.is_finite() {
        return Err(Error::domain("gamma", format!("pole at x = {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unchecked(1.0 - x));
    }
    if x > 140.0 {
        return ln_gamma_pos(x).exp();
    }
    let shifted = x - 1.0;
    let t = shifted + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(shifted + 0.5) * (-t).exp() * lanczos_sum(shifted)
}

/// `1 / Γ(x)`, an entire function: exactly zero at `0, −1, −2, …`.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x <= 0.0 {
        sin_pi(x) * gamma_unchecked(1.0 - x) / PI
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// Rising factorial `(d)_k = d (d+1) ⋯ (d+k−1)`, with `(d)_0 = 1`.
pub fn pochhammer(d: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (d + i as f64))
}

/// Euler Beta function `B(a, b)` for positive arguments.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}

/// Parameters `(a, b, c)` of `₂F₁(a, b; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// Degree of the polynomial when `a` or `b` is a non-positive integer.
    pub fn terminating_degree(&self) -> Option<usize> {
        [self.a, self.b]
            .into_iter()
            .filter(|&v| is_nonpositive_integer(v))
            .map(|v| (-v) as usize)
            .min()
    }

    /// Parameters of the derivative, `d/dx F(a,b;c;x) = (ab/c) F(a+1, b+1; c+1; x)`.
    pub fn shifted(&self) -> Self {
        Self::new(self.a + 1.0, self.b + 1.0, self.c + 1.0)
    }

    /// `c − a − b`, the exponent governing the behaviour at `x = 1`.
    pub fn excess(&self) -> f64 {
        self.c - self.a - self.b
    }

    fn validate(&self, op: &'static str) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::domain(op, format!("non-finite parameters {self:?}")));
        }
        if is_nonpositive_integer(self.c) {
            let pole = (-self.c) as usize;
            match self.terminating_degree() {
                Some(m) if m <= pole => {}
                _ => {
                    return Err(Error::domain(
                        op,
                        format!("c = {} is a pole of the series", self.c),
                    ))
                }
            }
        }
        Ok(())
    }
}

fn series(p: Hyp2F1Params, x: f64) -> Result<f64> {
    let Hyp2F1Params { a, b, c } = p;
    let mut sum = 1.0;
    let mut term = 1.0;
    if let Some(m) = p.terminating_degree() {
        for k in 0..m {
            let k = k as f64;
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
            sum += term;
        }
        return Ok(sum);
    }
    let mut small_run = 0;
    for k in 0..TERM_BUDGET {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term.abs() <= SERIES_TOL * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        op: "hyp2f1",
        iterations: TERM_BUDGET,
    })
}

fn check_unit_interval(op: &'static str, x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(op, format!("x = {x} outside [0, 1)")));
    }
    Ok(())
}

/// Gauss hypergeometric function `₂F₁(a, b; c; x)` on `[0, 1)`.
pub fn hyp2f1(p: Hyp2F1Params, x: f64) -> Result<f64> {
    check_unit_interval("hyp2f1", x)?;
    p.validate("hyp2f1")?;
    if p.terminating_degree().is_some() || x < X_SWITCH {
        return series(p, x);
    }
    let excess = p.excess();
    if excess.fract() == 0.0 {
        // Logarithmic case of the connection formula; not needed in scope.
        return series(p, x);
    }
    connection(p, x)
}

/// `₂F₁` evaluated through the connection formula in `1 − x`.
///
/// Terminating parameter sets bypass the transformation and are summed
/// directly. Requires `c − a − b` not to be an integer.
pub fn hyp2f1_near_one(p: Hyp2F1Params, x: f64) -> Result<f64> {
    check_unit_interval("hyp2f1_near_one", x)?;
    p.validate("hyp2f1_near_one")?;
    if p.terminating_degree().is_some() {
        return series(p, x);
    }
    if p.excess().fract() == 0.0 {
        return Err(Error::domain(
            "hyp2f1_near_one",
            format!("c − a − b = {} is an integer", p.excess()),
        ));
    }
    connection(p, x)
}

fn connection(p: Hyp2F1Params, x: f64) -> Result<f64> {
    let Hyp2F1Params { a, b, c } = p;
    let d = p.excess();
    let y = 1.0 - x;
    let gc = gamma(c)?;
    let coeff_regular = gc * gamma(d)? * recip_gamma(c - a) * recip_gamma(c - b);
    let coeff_singular = gc * gamma(-d)? * recip_gamma(a) * recip_gamma(b);
    let mut value = 0.0;
    if coeff_regular != 0.0 {
        value += coeff_regular * series(Hyp2F1Params::new(a, b, 1.0 - d), y)?;
    }
    if coeff_singular != 0.0 {
        value += coeff_singular * y.powf(d) * series(Hyp2F1Params::new(c - a, c - b, 1.0 + d), y)?;
    }
    Ok(value)
}

/// `d/dx ₂F₁(a, b; c; x)` via the parameter shift.
pub fn hyp2f1_dz(p: Hyp2F1Params, x: f64) -> Result<f64> {
    check_unit_interval("hyp2f1_dz", x)?;
    if p.a == 0.0 || p.b == 0.0 {
        return Ok(0.0);
    }
    Ok(p.a * p.b / p.c * hyp2f1(p.shifted(), x)?)
}

/// `d²/dx² ₂F₁(a, b; c; x)`.
pub fn hyp2f1_dz2(p: Hyp2F1Params, x: f64) -> Result<f64> {
    check_unit_interval("hyp2f1_dz2", x)?;
    if p.a == 0.0 || p.b == 0.0 {
        return Ok(0.0);
    }
    Ok(p.a * p.b / p.c * hyp2f1_dz(p.shifted(), x)?)
}

/// Gauss's summation `F(a,b;c;1) = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b))`, valid for `c − a − b > 0`.
pub fn gauss_value_at_one(p: Hyp2F1Params) -> Result<f64> {
    let d = p.excess();
    if !(d > 0.0) {
        return Err(Error::domain(
            "gauss_value_at_one",
            format!("c − a − b = {d} must be positive"),
        ));
    }
    Ok(gamma(p.c)? * gamma(d)? * recip_gamma(p.c - p.a) * recip_gamma(p.c - p.b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-14);
        assert!(rel(ln_gamma(0.5).unwrap(), PI.sqrt().ln()) < 1e-13);
        assert!(rel(ln_gamma(6.0).unwrap(), 120f64.ln()) < 1e-13);
        // 99! ≈ 9.332621544394415e155
        let ln99fact: f64 = (1..=99).map(|k| (k as f64).ln()).sum();
        assert!(rel(ln_gamma(100.0).unwrap(), ln99fact) < 1e-13);
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(ln_gamma(-2.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn recip_gamma_poles_and_values() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        let expected = 1.0 / (1.5 * 0.5 * PI.sqrt());
        assert!(rel(recip_gamma(2.5), expected) < 1e-12);
        // Γ(−½) = −2√π
        assert!(rel(recip_gamma(-0.5), -0.5 / PI.sqrt()) < 1e-12);
        // Γ(−3.5) = 16√π/105
        assert!(rel(recip_gamma(-3.5), 105.0 / (16.0 * PI.sqrt())) < 1e-12);
    }

    #[test]
    fn recip_gamma_large_arguments() {
        // 1/Γ(31) = 1/30!
        let fact30: f64 = (1..=30).map(|k| k as f64).product();
        assert!(rel(recip_gamma(31.0), 1.0 / fact30) < 1e-12);
        // reflection: 1/Γ(−30.5) = −sin(π·30.5)... checked via Γ(x)Γ(1−x) = π/sin(πx)
        let x = -30.5;
        let lhs = recip_gamma(x) * recip_gamma(1.0 - x);
        assert!(rel(lhs, sin_pi(x) / PI) < 1e-12);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(-1.0, 2), 0.0);
        assert_eq!(pochhammer(0.5, 3), 1.875);
        assert_eq!(pochhammer(1.0, 5), 120.0);
    }

    #[test]
    fn hyp2f1_at_zero_is_one() {
        for p in [
            Hyp2F1Params::new(0.3, 1.7, 2.2),
            Hyp2F1Params::new(-2.0, 3.0, 1.5),
            Hyp2F1Params::new(-0.5, 1.5, 1.5),
        ] {
            assert_eq!(hyp2f1(p, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn hyp2f1_second_mode_polynomial() {
        let p = Hyp2F1Params::new(-1.0, 2.0, 1.5);
        for i in 0..=20 {
            let rho = i as f64 / 20.0 * 0.999;
            let x = rho * rho;
            let v = hyp2f1(p, x).unwrap();
            assert!((v - (1.0 - 4.0 / 3.0 * x)).abs() < 1e-15);
            assert!((v * 3.0 - (3.0 - 4.0 * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn hyp2f1_first_mode_is_sqrt() {
        let p = Hyp2F1Params::new(-0.5, 1.5, 1.5);
        for i in 0..100 {
            let x = i as f64 / 100.0;
            let v = hyp2f1(p, x).unwrap();
            assert!(rel(v, (1.0 - x).sqrt()) < 1e-12, "x={x} v={v}");
        }
        let v = hyp2f1_near_one(p, 0.99).unwrap();
        assert!(rel(v, 0.1) < 1e-12);
    }

    #[test]
    fn near_one_bypasses_terminating() {
        let p = Hyp2F1Params::new(-3.0, 2.5, 1.5);
        for x in [0.5, 0.7, 0.95] {
            assert_eq!(hyp2f1_near_one(p, x).unwrap(), hyp2f1(p, x).unwrap());
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        for p in [
            Hyp2F1Params::new(-1.5, 2.5, 1.5),
            Hyp2F1Params::new(-2.5, 4.5, 2.5),
            Hyp2F1Params::new(0.3, 0.9, 1.7),
            Hyp2F1Params::new(-0.5, 3.5, 3.5),
        ] {
            let s = series(p, X_SWITCH).unwrap();
            let c = hyp2f1_near_one(p, X_SWITCH).unwrap();
            assert!((c - s).abs() < 1e-10 * (1.0 + s.abs()), "{p:?}: {s} vs {c}");
            for eps in [1e-3, 1e-6, 1e-9] {
                let left = hyp2f1(p, X_SWITCH - eps).unwrap();
                let right = hyp2f1_near_one(p, X_SWITCH + eps).unwrap();
                assert!((left - right).abs() < 10.0 * eps * (1.0 + left.abs()));
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let p = Hyp2F1Params::new(0.3, -1.2, 2.4);
        assert!(rel(hyp2f1_dz(p, 0.0).unwrap(), 0.3 * -1.2 / 2.4) < 1e-15);

        let quad = Hyp2F1Params::new(-1.0, 2.0, 1.5);
        for x in [0.0, 0.3, 0.8] {
            assert!((hyp2f1_dz(quad, x).unwrap() + 4.0 / 3.0).abs() < 1e-15);
            assert_eq!(hyp2f1_dz2(quad, x).unwrap(), 0.0);
        }

        let root = Hyp2F1Params::new(-0.5, 1.5, 1.5);
        for x in [0.1f64, 0.45, 0.6, 0.9, 0.99] {
            let expected = -0.5 / (1.0 - x).sqrt();
            assert!(rel(hyp2f1_dz(root, x).unwrap(), expected) < 1e-12);
            let expected2 = -0.25 / (1.0 - x).powf(1.5);
            assert!(rel(hyp2f1_dz2(root, x).unwrap(), expected2) < 1e-11);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for p in [
            Hyp2F1Params::new(-1.5, 2.5, 1.5),
            Hyp2F1Params::new(-2.0, 4.0, 2.5),
            Hyp2F1Params::new(0.4, 0.7, 1.9),
        ] {
            for x in [0.05, 0.3, 0.49, 0.51, 0.8, 0.95] {
                let fd = (hyp2f1(p, x + h).unwrap() - hyp2f1(p, x - h).unwrap()) / (2.0 * h);
                assert!((fd - hyp2f1_dz(p, x).unwrap()).abs() < 1e-6, "{p:?} x={x}");
            }
        }
    }

    #[test]
    fn gauss_summation_examples() {
        for n in 1..=4 {
            let nf = n as f64;
            assert_eq!(
                gauss_value_at_one(Hyp2F1Params::new(-0.5, nf + 0.5, nf + 0.5)).unwrap(),
                0.0
            );
        }
        let v = gauss_value_at_one(Hyp2F1Params::new(-1.0, 2.0, 1.5)).unwrap();
        assert!(rel(v, -1.0 / 3.0) < 1e-13);
        assert_eq!(
            gauss_value_at_one(Hyp2F1Params::new(-1.5, 2.5, 1.5)).unwrap(),
            0.0
        );
        assert!(gauss_value_at_one(Hyp2F1Params::new(1.0, 1.0, 1.5)).is_err());
    }

    #[test]
    fn near_one_limit_matches_gauss_value() {
        // F(1−y) = F(1) + K√y + O(y) when c − a − b = ½, so 2F(1−y/4) − F(1−y) → F(1).
        for p in [
            Hyp2F1Params::new(-1.0, 2.0, 1.5),
            Hyp2F1Params::new(0.25, 0.75, 1.5),
            Hyp2F1Params::new(-1.5, 2.5, 1.5),
            Hyp2F1Params::new(-2.5, 5.5, 3.5),
        ] {
            let limit = gauss_value_at_one(p).unwrap();
            let y = 1e-12;
            let coarse = hyp2f1_near_one(p, 1.0 - y).unwrap();
            let fine = hyp2f1_near_one(p, 1.0 - y / 4.0).unwrap();
            assert!((2.0 * fine - coarse - limit).abs() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn domain_errors() {
        let p = Hyp2F1Params::new(0.5, 0.5, 1.0);
        assert!(hyp2f1(p, 1.0).is_err());
        assert!(hyp2f1(p, -0.1).is_err());
        assert!(hyp2f1(Hyp2F1Params::new(0.5, 0.5, -2.0), 0.3).is_err());
        // terminating before the pole is fine
        assert!(hyp2f1(Hyp2F1Params::new(-1.0, 0.5, -2.0), 0.3).is_ok());
        assert!(hyp2f1_near_one(Hyp2F1Params::new(0.5, 0.5, 2.0), 0.7).is_err());
    }
}
