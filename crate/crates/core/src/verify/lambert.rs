use std::f64::consts::E;

use super::scalar::Scalar;
use super::VerifyError;

/// Principal-branch starting point.
fn initial_guess(x: f64) -> f64 {
    if x < -0.25 {
        // expansion about the branch point −1/e
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        x / (1.0 + x).max(0.5)
    } else {
        let l = x.ln();
        l - l.ln()
    }
}

/// Principal branch W₀ by Halley iteration.
pub fn lambert_w_f64(x: f64) -> Result<f64, VerifyError> {
    let branch = -1.0 / E;
    if x.is_nan() || x < branch - 4.0 * f64::EPSILON {
        return Err(VerifyError::Domain(x));
    }
    if x <= branch {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = initial_guess(x);
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE);
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

/// W₀ in any precision: f64 start, then Halley steps at full precision.
pub(crate) fn lambert_w_generic<S: Scalar>(x: &S) -> S {
    let xf = x.to_f64();
    if xf == 0.0 {
        return x.clone();
    }
    let Ok(w0) = lambert_w_f64(xf) else {
        return S::from_f64(f64::NAN);
    };
    let one = S::from_f64(1.0);
    let two = S::from_f64(2.0);
    let mut w = S::from_f64(w0);
    for _ in 0..60 {
        let ew = w.exp();
        let f = w.mul(&ew).sub(x);
        let wp1 = w.add(&one);
        let denom = ew.mul(&wp1).sub(&w.add(&two).mul(&f).div(&wp1.mul(&two)));
        let step = f.div(&denom);
        w = w.sub(&step);
        let s = step.to_f64().abs();
        if s == 0.0 || s <= S::EPS * w.to_f64().abs() {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        assert_eq!(lambert_w_f64(0.0).unwrap(), 0.0);
        assert!((lambert_w_f64(E).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambert_w_f64(-1.0 / E).unwrap() + 1.0).abs() < 1e-7);
        assert!(matches!(lambert_w_f64(-0.5), Err(VerifyError::Domain(_))));
        let x = 2.0 * (-10f64).exp();
        let w = lambert_w_f64(x).unwrap();
        assert!((w - 9.07916e-5).abs() < 1e-9);
        assert!((w * w.exp() - x).abs() <= 1e-14 * x.max(1.0));
    }
}
