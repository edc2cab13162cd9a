use std::cell::RefCell;
use std::fmt;

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_traits::ToPrimitive;

use crate::arith::{rat_to_f64, Rational};

use super::lambert::{lambert_w_f64, lambert_w_generic};

/// Real arithmetic the expression evaluator is generic over.
pub trait Scalar: Clone + Send + Sync + fmt::Debug {
    /// Relative accuracy the iterative routines aim for.
    const EPS: f64;

    fn from_f64(x: f64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn powi(&self, n: i64) -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;

    fn lambert_w(&self) -> Self {
        lambert_w_generic(self)
    }

    /// x^r: integer powers exactly, half-integers through sqrt, otherwise
    /// exp(r·ln x).
    fn powr(&self, r: &Rational) -> Self {
        if r.is_integer() {
            if let Some(n) = r.to_integer().to_i64() {
                return self.powi(n);
            }
        }
        if *r.denom() == 2.into() {
            if let Some(n) = r.numer().to_i64() {
                return self.sqrt().powi(n);
            }
        }
        self.ln().mul(&Self::from_rational(r)).exp()
    }
}

impl Scalar for f64 {
    const EPS: f64 = f64::EPSILON;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(r: &Rational) -> Self {
        rat_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn powi(&self, n: i64) -> Self {
        match i32::try_from(n) {
            Ok(n) => f64::powi(*self, n),
            Err(_) => f64::powf(*self, n as f64),
        }
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn lambert_w(&self) -> Self {
        lambert_w_f64(*self).unwrap_or(f64::NAN)
    }
    fn powr(&self, r: &Rational) -> Self {
        if r.is_integer() {
            if let Some(n) = r.to_integer().to_i64() {
                return Scalar::powi(self, n);
            }
        }
        if *r.denom() == 2.into() {
            if let Some(n) = r.numer().to_i64() {
                return Scalar::powi(&f64::sqrt(*self), n);
            }
        }
        f64::powf(*self, rat_to_f64(r))
    }
}

/// Working precision of [`Hp`] in bits.
pub const HP_BITS: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// 320-bit binary floating point.
#[derive(Clone)]
pub struct Hp(pub BigFloat);

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hp({:e})", self.to_f64())
    }
}

impl Hp {
    fn unary(&self, f: impl FnOnce(&BigFloat, &mut Consts) -> BigFloat) -> Hp {
        Hp(with_cc(|cc| f(&self.0, cc)))
    }

    fn from_decimal(s: &str) -> Hp {
        Hp(with_cc(|cc| BigFloat::parse(s, Radix::Dec, HP_BITS, RM, cc)))
    }

    pub fn pi() -> Hp {
        Hp(with_cc(|cc| cc.pi(HP_BITS, RM)))
    }
}

impl Scalar for Hp {
    const EPS: f64 = 1e-90;

    fn from_f64(x: f64) -> Self {
        Hp(BigFloat::from_f64(x, HP_BITS))
    }
    fn from_rational(r: &Rational) -> Self {
        let n = Hp::from_decimal(&r.numer().to_string());
        if r.is_integer() {
            return n;
        }
        n.div(&Hp::from_decimal(&r.denom().to_string()))
    }
    fn to_f64(&self) -> f64 {
        let b = &self.0;
        if b.is_nan() {
            return f64::NAN;
        }
        if b.is_inf() {
            return if b.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if b.is_zero() {
            return 0.0;
        }
        let Some((m, _, sign, e, _)) = b.as_raw_parts() else {
            return f64::NAN;
        };
        let top = m[m.len() - 1] as f64;
        let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
        let mag = (top + next / 2f64.powi(64)) * 2f64.powi(e - 64);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }
    fn add(&self, o: &Self) -> Self {
        Hp(self.0.add(&o.0, HP_BITS, RM))
    }
    fn sub(&self, o: &Self) -> Self {
        Hp(self.0.sub(&o.0, HP_BITS, RM))
    }
    fn mul(&self, o: &Self) -> Self {
        Hp(self.0.mul(&o.0, HP_BITS, RM))
    }
    fn div(&self, o: &Self) -> Self {
        Hp(self.0.div(&o.0, HP_BITS, RM))
    }
    fn neg(&self) -> Self {
        Hp(self.0.neg())
    }
    fn powi(&self, n: i64) -> Self {
        let p = Hp(self.0.powi(n.unsigned_abs() as usize, HP_BITS, RM));
        if n < 0 {
            Hp::from_f64(1.0).div(&p)
        } else {
            p
        }
    }
    fn sqrt(&self) -> Self {
        Hp(self.0.sqrt(HP_BITS, RM))
    }
    fn sin(&self) -> Self {
        self.unary(|b, cc| b.sin(HP_BITS, RM, cc))
    }
    fn cos(&self) -> Self {
        self.unary(|b, cc| b.cos(HP_BITS, RM, cc))
    }
    fn tan(&self) -> Self {
        self.unary(|b, cc| b.tan(HP_BITS, RM, cc))
    }
    fn exp(&self) -> Self {
        self.unary(|b, cc| b.exp(HP_BITS, RM, cc))
    }
    fn ln(&self) -> Self {
        self.unary(|b, cc| b.ln(HP_BITS, RM, cc))
    }
}

/// |a − b| relative to max(|a|, |b|), in f64.
pub fn rel_diff<S: Scalar>(a: &S, b: &S) -> f64 {
    let d = a.sub(b).to_f64().abs();
    let s = a.to_f64().abs().max(b.to_f64().abs());
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn hp_round_trip() {
        for x in [1.0, -2.5, 1e-30, 3.0e200, std::f64::consts::PI] {
            assert_eq!(Hp::from_f64(x).to_f64(), x);
        }
        let third = Hp::from_rational(&rat(1, 3));
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn hp_transcendentals() {
        let one = Hp::from_f64(1.0);
        assert!((one.exp().to_f64() - std::f64::consts::E).abs() < 1e-15);
        let x = Hp::from_rational(&rat(1, 10));
        // sin² + cos² = 1 to far beyond double precision
        let s = x.sin().powi(2).add(&x.cos().powi(2)).sub(&one);
        assert!(s.to_f64().abs() < 1e-90);
        assert!((Hp::pi().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }
}
