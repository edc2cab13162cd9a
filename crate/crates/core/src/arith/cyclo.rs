use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{rat_string, ArithError, Coordinates, Rational, Ring};

/// c₀ + c₁α + … + c_{n−1}α^{n−1} in ℚ[α]/(αⁿ−1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElement {
    order: usize,
    coeffs: Vec<Rational>,
}

impl CycloElement {
    /// Builds an element from any number of coefficients; index i lands on
    /// α^{i mod n}.
    pub fn new(order: usize, coeffs: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclic order must be positive");
        let mut c = vec![Rational::zero(); order];
        for (i, v) in coeffs.into_iter().enumerate() {
            c[i % order] += v;
        }
        CycloElement { order, coeffs: c }
    }

    pub fn constant(order: usize, r: Rational) -> Self {
        Self::new(order, vec![r])
    }

    /// α^k.
    pub fn alpha_pow(order: usize, k: i64) -> Self {
        let n = order as i64;
        let mut c = vec![Rational::zero(); order];
        c[k.rem_euclid(n) as usize] = Rational::one();
        CycloElement { order, coeffs: c }
    }

    pub fn alpha(order: usize) -> Self {
        Self::alpha_pow(order, 1)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i % self.order]
    }

    /// Rational value if the element is a constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Ring map α ↦ α^k.
    pub fn substitute_power(&self, k: i64) -> Self {
        let n = self.order as i64;
        let mut c = vec![Rational::zero(); self.order];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[(i as i64 * k).rem_euclid(n) as usize] += v;
        }
        CycloElement { order: self.order, coeffs: c }
    }

    /// Reduction modulo Φₙ: the image in ℚ(ζₙ), as coefficients of
    /// 1, ζ, …, ζ^{φ(n)−1}.
    pub fn project_cyclotomic(&self) -> Vec<Rational> {
        let phi = cyclotomic_polynomial(self.order);
        let (_, r) = dense_div_rem(&self.coeffs, &phi);
        let mut r = r;
        r.resize(phi.len() - 1, Rational::zero());
        r
    }

    pub fn try_inverse(&self) -> Result<Self, ArithError> {
        cyclo_inverse(self)
    }
}

/// Inverse in ℚ[α]/(αⁿ−1) by the extended Euclidean algorithm against αⁿ−1.
pub fn cyclo_inverse(a: &CycloElement) -> Result<CycloElement, ArithError> {
    if a.vanishes() {
        return Err(ArithError::ZeroInput);
    }
    let n = a.order;
    let mut modulus = vec![Rational::zero(); n + 1];
    modulus[0] = -Rational::one();
    modulus[n] = Rational::one();

    // invariant: s·a ≡ r (mod αⁿ−1)
    let mut r0 = modulus;
    let mut r1 = trim(a.coeffs.clone());
    let mut s0: Vec<Rational> = Vec::new();
    let mut s1: Vec<Rational> = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = dense_div_rem(&r0, &r1);
        let s2 = dense_sub(&s0, &dense_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 {
        return Err(ArithError::ZeroDivisor(n));
    }
    let c = r0[0].recip();
    Ok(CycloElement::new(n, s0.into_iter().map(|v| v * &c).collect()))
}

/// Φₙ as dense coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<Rational> {
    let mut p = vec![Rational::zero(); n + 1];
    p[0] = -Rational::one();
    p[n] = Rational::one();
    for d in 1..n {
        if n % d == 0 {
            let (q, _) = dense_div_rem(&p, &cyclotomic_polynomial(d));
            p = q;
        }
    }
    p
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn dense_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn dense_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn dense_div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b[db].recip();
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = &r[r.len() - 1] * &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

impl Ring for CycloElement {
    type Ctx = usize;

    fn ctx(&self) -> usize {
        self.order
    }
    fn zero_of(order: &usize) -> Self {
        CycloElement { order: *order, coeffs: vec![Rational::zero(); *order] }
    }
    fn one_of(order: &usize) -> Self {
        Self::constant(*order, Rational::one())
    }
    fn from_rational(order: &usize, r: &Rational) -> Self {
        Self::constant(*order, r.clone())
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclic order mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycloElement { order: self.order, coeffs }
    }
    fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclic order mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycloElement { order: self.order, coeffs }
    }
    fn times(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclic order mismatch");
        let n = self.order;
        let mut c = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    c[(i + j) % n] += a * b;
                }
            }
        }
        CycloElement { order: n, coeffs: c }
    }
    fn negate(&self) -> Self {
        CycloElement { order: self.order, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
    fn scale(&self, r: &Rational) -> Self {
        CycloElement { order: self.order, coeffs: self.coeffs.iter().map(|a| a * r).collect() }
    }
    fn inverse(&self) -> Option<Self> {
        cyclo_inverse(self).ok()
    }
}

impl Coordinates for CycloElement {
    type Key = usize;

    fn coordinates(&self) -> BTreeMap<usize, Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }
}

impl<'a> Add<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        self.plus(rhs)
    }
}

impl<'a> Sub<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        self.minus(rhs)
    }
}

impl<'a> Mul<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        self.times(rhs)
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        self.negate()
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", rat_string(c))?,
                1 => write!(f, "{}*a", rat_string(c))?,
                _ => write!(f, "{}*a^{}", rat_string(c), i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.order)
    }
}
