//! Exact coefficient arithmetic: rationals, the cyclic ring ℚ[α]/(αⁿ−1),
//! univariate polynomials and Poisson series.

mod cyclo;
mod poly;
mod trig;

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use cyclo::{cyclo_inverse, cyclotomic_polynomial, CycloElement};
pub use poly::Poly;
pub use trig::{trig_diff, trig_mul, TrigBasis, TrigKey, TrigSeries};

pub type Rational = num_rational::BigRational;

/// Variable names are fixed at build time (t, τ, x, μ, ε).
pub type Symbol = &'static str;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("cannot invert zero")]
    ZeroInput,
    #[error("element is a zero divisor in Q[a]/(a^{0}-1)")]
    ZeroDivisor(usize),
    #[error("symbol mismatch: {0} vs {1}")]
    SymbolMismatch(Symbol, Symbol),
    #[error("cyclic order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
}

/// Commutative ring with an explicit context, so that zero and one exist
/// even for values (empty polynomials) that carry no sample element.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_of(ctx: &Self::Ctx) -> Self;
    fn one_of(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Multiplicative inverse, `None` for non-units.
    fn inverse(&self) -> Option<Self>;

    fn is_unity(&self) -> bool {
        *self == Self::one_of(&self.ctx())
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one_of(&self.ctx());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.times(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// Expansion of a ring element as a finite vector over ℚ, used to turn
/// ring-valued conditions into rational linear equations.
pub trait Coordinates: Ring {
    type Key: Ord + Clone + Debug + Send + Sync;

    /// Nonzero rational coordinates.
    fn coordinates(&self) -> BTreeMap<Self::Key, Rational>;
}

impl Ring for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_of(_: &()) -> Self {
        Zero::zero()
    }
    fn one_of(_: &()) -> Self {
        One::one()
    }
    fn from_rational(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Coordinates for Rational {
    type Key = ();

    fn coordinates(&self) -> BTreeMap<(), Rational> {
        let mut m = BTreeMap::new();
        if !Zero::is_zero(self) {
            m.insert((), self.clone());
        }
        m
    }
}

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// "p/q" or "p" with no decimal point.
pub fn rat_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "p/q", an integer, or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{ip}{fp}").parse().ok()?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(all);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}
