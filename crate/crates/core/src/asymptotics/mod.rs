//! The divergent Hankel expansion of J₀ and residual-guided truncation.

mod quadrature;

use std::f64::consts::{FRAC_PI_4, PI};

use num_bigint::BigInt;

use crate::arith::{rat_to_f64, Rational};

pub use quadrature::{bessel_j0_oracle, integrate, QuadratureError};

pub const DEFAULT_KMAX: usize = 25;

/// a_k with |a_k| = Π_{j≤k}(2j−1)²/(k!·8ᵏ) and sign (−1)^⌊(k+1)/2⌋.
pub fn hankel_coeff(k: usize) -> Rational {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for j in 1..=k as i64 {
        num *= BigInt::from((2 * j - 1) * (2 * j - 1));
        den *= BigInt::from(8 * j);
    }
    let r = Rational::new(num, den);
    if (k + 1) / 2 % 2 == 1 {
        -r
    } else {
        r
    }
}

/// cos(x − π/4) for even k, −sin(x − π/4) for odd k: the oscillating factor
/// of the last kept term.
fn trig_factor(k: usize, x: f64) -> f64 {
    if k % 2 == 0 {
        (x - FRAC_PI_4).cos()
    } else {
        -(x - FRAC_PI_4).sin()
    }
}

/// (k+½)²·|a_k|·x^{−(k+½)}, optionally times the trig factor's magnitude.
pub fn residual_term_magnitude(k: usize, x: f64, trig: bool) -> f64 {
    let kh = k as f64 + 0.5;
    let m = kh * kh * rat_to_f64(&hankel_coeff(k)).abs() * x.powf(-kh);
    if trig {
        m * trig_factor(k, x).abs()
    } else {
        m
    }
}

/// Residual of the truncated sum under x²y″ + xy′ + x²y, exactly.
pub fn hankel_residual(x: f64, k: usize) -> f64 {
    let kh = k as f64 + 0.5;
    (2.0 / PI).sqrt() * kh * kh * rat_to_f64(&hankel_coeff(k)) * x.powf(-kh) * trig_factor(k, x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub k_star: usize,
    /// (k, residual_term_magnitude) for k = 0..=kmax.
    pub table: Vec<(usize, f64)>,
}

/// argmin over k ≤ kmax, ties toward smaller k.
pub fn optimal_truncation(x: f64, trig: bool, kmax: usize) -> Truncation {
    let table: Vec<(usize, f64)> = (0..=kmax).map(|k| (k, residual_term_magnitude(k, x, trig))).collect();
    let k_star = table.iter().fold((0, f64::INFINITY), |best, &(k, v)| if v < best.1 { (k, v) } else { best }).0;
    Truncation { k_star, table }
}

/// √(2/(πx))·(A cos(x−π/4) − B sin(x−π/4)), A summing the kept even-index
/// terms a_j x^{−j}, B the odd-index ones.
pub fn hankel_partial_sum(x: f64, k: usize) -> f64 {
    let (mut a, mut b) = (0.0, 0.0);
    for j in 0..=k {
        let t = rat_to_f64(&hankel_coeff(j)) * x.powi(-(j as i32));
        if j % 2 == 0 {
            a += t;
        } else {
            b += t;
        }
    }
    (2.0 / (PI * x)).sqrt() * (a * (x - FRAC_PI_4).cos() - b * (x - FRAC_PI_4).sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn coefficients() {
        let want = [
            rat(1, 1),
            rat(-1, 8),
            rat(-9, 128),
            rat(75, 1024),
            rat(3675, 32768),
            rat(-59535, 262144),
            rat(-2401245, 4194304),
            rat(57972915, 33554432),
        ];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(&hankel_coeff(k), w, "a_{k}");
        }
    }

    #[test]
    fn residual_table_at_2_3() {
        let want = [0.165, 0.081, 0.055, 0.049, 0.054, 0.070];
        for (k, w) in want.iter().enumerate() {
            assert!((residual_term_magnitude(k, 2.3, false) - w).abs() < 1e-3, "k={k}");
        }
        assert_eq!(optimal_truncation(2.3, false, DEFAULT_KMAX).k_star, 3);
        assert_eq!(optimal_truncation(2.3, true, DEFAULT_KMAX).k_star, 4);
    }

    #[test]
    fn partial_sums() {
        let want = [0.0295489, 0.0580967, 0.0577039, 0.0545419, 0.0546603, 0.0565138];
        for (k, w) in want.iter().enumerate() {
            assert!((hankel_partial_sum(2.3, k) - w).abs() < 1e-6, "k={k}");
        }
        let j0 = bessel_j0_oracle(2.3).unwrap();
        let e4 = (hankel_partial_sum(2.3, 4) - j0).abs();
        assert!((e4 - 8.8e-4).abs() < 5e-5);
        assert!((hankel_partial_sum(2.3, 4) - j0).abs() < (hankel_partial_sum(2.3, 5) - j0).abs());
        assert!((hankel_partial_sum(50.0, 3) - bessel_j0_oracle(50.0).unwrap()).abs() < 1e-6);
    }
}
