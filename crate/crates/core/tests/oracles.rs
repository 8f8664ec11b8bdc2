//! Library values against oracles computed independently on the test side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use hprofile::geometry::ProfileParams;
use hprofile::specfun::{gamma, hyp2f1, Hyp2F1Params};
use hprofile::spectrum::{radial_eigenfunction, Parity};

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `₂F₁(−m, b; c; x)` as an exact rational.
fn terminating_exact(m: u32, b: &BigRational, c: &BigRational, x: &BigRational) -> BigRational {
    let mut term = rat(1, 1);
    let mut sum = term.clone();
    for k in 0..m {
        let kk = rat(k as i64, 1);
        let a_k = rat(-(m as i64), 1) + &kk;
        term = term * a_k * (b + &kk) / ((c + &kk) * (&kk + rat(1, 1))) * x;
        sum += &term;
    }
    sum
}

fn half(k: i64) -> BigRational {
    rat(k, 2)
}

#[test]
fn even_modes_match_exact_rational_series() {
    for n in 1..=3i64 {
        for m in 1..=4u32 {
            let b = rat(n + m as i64, 1);
            let c = half(2 * n + 1);
            let p = Hyp2F1Params::new(-(m as f64), (n + m as i64) as f64, n as f64 + 0.5);
            for i in 0..=40 {
                let x = rat(i, 41);
                let exact = terminating_exact(m, &b, &c, &x).to_f64().unwrap();
                let got = hyp2f1(p, i as f64 / 41.0).unwrap();
                assert!(
                    (got - exact).abs() < 1e-13 * (1.0 + exact.abs()),
                    "n={n} m={m} x={i}/41: {got} vs {exact}"
                );
            }
        }
    }
}

/// Odd modes through Euler's transformation:
/// `F(−m−½, n+m+½; n+½; x) = √(1−x) F(n+m+1, −m; n+½; x)`, a terminating series.
#[test]
fn odd_modes_match_euler_transform() {
    for n in 1..=3usize {
        let params = ProfileParams::new(n).unwrap();
        for m in 0..=4u32 {
            let k = 2 * m as usize + 1;
            let mode = radial_eigenfunction(k, &params).unwrap();
            assert_eq!(mode.parity, Parity::Odd);
            let b = rat(n as i64 + m as i64 + 1, 1);
            let c = half(2 * n as i64 + 1);
            for i in 0..=50 {
                let x = rat(i, 51);
                let poly = terminating_exact(m, &b, &c, &x).to_f64().unwrap();
                let xf = i as f64 / 51.0;
                let expected = mode.normalization * (1.0 - xf).sqrt() * poly;
                let got = mode.value(xf.sqrt()).unwrap();
                assert!(
                    (got - expected).abs() < 1e-11 * (1.0 + expected.abs()),
                    "n={n} k={k} x={xf}: {got} vs {expected}"
                );
            }
            assert!(mode.value(1.0).unwrap().abs() < 1e-12);
        }
    }
}

/// `Γ(n+½) = (2n)!√π / (4ⁿ n!)` and `Γ(n) = (n−1)!`.
#[test]
fn gamma_matches_factorials() {
    let mut fact = 1.0f64;
    for n in 1..=20u32 {
        let g = gamma(n as f64).unwrap();
        assert!((g - fact).abs() < 1e-13 * fact, "Γ({n})");
        fact *= n as f64;
    }
    for n in 0..=10u32 {
        let mut num = 1.0f64;
        for j in 1..=2 * n {
            num *= j as f64;
        }
        let mut den = 1.0f64;
        for j in 1..=n {
            den *= 4.0 * j as f64;
        }
        let expected = num * std::f64::consts::PI.sqrt() / den;
        let g = gamma(n as f64 + 0.5).unwrap();
        assert!((g - expected).abs() < 1e-13 * expected, "Γ({n}+½)");
    }
}

/// Normalisation against an exact-rational Gram integral of the even modes:
/// `∫₀¹ F(s)² s^{n−½}(1−s)^{−½} ds` expands into Beta moments
/// `B(n+½+j, ½) = B(n+½, ½) Π_{i<j} (n+½+i)/(n+1+i)`.
#[test]
fn even_normalisation_matches_beta_moments() {
    for n in 1..=3i64 {
        let params = ProfileParams::new(n as usize).unwrap();
        for m in 1..=3u32 {
            let b = rat(n + m as i64, 1);
            let c = half(2 * n + 1);
            // coefficients of F(−m, b; c; s)
            let mut coeffs = vec![rat(1, 1)];
            for k in 0..m {
                let kk = rat(k as i64, 1);
                let next = coeffs[k as usize].clone() * (rat(-(m as i64), 1) + &kk) * (&b + &kk)
                    / ((&c + &kk) * (&kk + rat(1, 1)));
                coeffs.push(next);
            }
            // moment ratios relative to B(n+½, ½)
            let deg = 2 * m as usize;
            let mut moments = vec![rat(1, 1)];
            for j in 0..deg {
                let j = j as i64;
                let r = moments[j as usize].clone() * half(2 * n + 1 + 2 * j) / rat(n + 1 + j, 1);
                moments.push(r);
            }
            let mut sq = rat(0, 1);
            for (i, ci) in coeffs.iter().enumerate() {
                for (j, cj) in coeffs.iter().enumerate() {
                    sq += ci * cj * &moments[i + j];
                }
            }
            let beta0 = hprofile::specfun::beta(n as f64 + 0.5, 0.5).unwrap();
            // ∫₀¹ φ² w dρ = ½ ∫₀¹ F(s)² s^{n−½}(1−s)^{−½} ds
            let norm2 = 0.5 * beta0 * sq.to_f64().unwrap();
            let mode = radial_eigenfunction(2 * m as usize, &params).unwrap();
            let expected = 1.0 / norm2.sqrt();
            assert!(
                (mode.normalization - expected).abs() < 1e-12 * expected,
                "n={n} m={m}"
            );
        }
    }
}
