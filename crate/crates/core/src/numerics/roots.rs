use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 400;

/// Refines a sign change of `f` inside `[lo, hi]` until the bracket is narrower than `tol`.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.signum() != f_hi.signum()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::InvalidBracket { lo, hi, f_lo, f_hi });
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `(start, stop]` with a fixed step and bisects every sign change.
pub fn scan_roots<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    stop: f64,
    step: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scan step {step} must be positive"
        )));
    }
    let mut roots = Vec::new();
    let mut left = start;
    let mut f_left = f(left);
    while left < stop {
        let right = (left + step).min(stop);
        let f_right = f(right);
        if f_right == 0.0 {
            roots.push(right);
        } else if f_left != 0.0 && f_left.signum() != f_right.signum() {
            roots.push(bisect_root(&f, left, right, tol)?);
        }
        left = right;
        f_left = f_right;
    }
    Ok(roots)
}
