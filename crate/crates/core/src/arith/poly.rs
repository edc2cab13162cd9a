use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{int, rat_to_f64, Coordinates, Rational, Ring, Symbol};

/// Sparse univariate polynomial over a coefficient ring.
#[derive(Clone, PartialEq)]
pub struct Poly<R: Ring> {
    symbol: Symbol,
    ctx: R::Ctx,
    terms: BTreeMap<u32, R>,
}

impl<R: Ring> Poly<R> {
    pub fn zero(symbol: Symbol, ctx: R::Ctx) -> Self {
        Poly { symbol, ctx, terms: BTreeMap::new() }
    }

    pub fn constant(symbol: Symbol, c: R) -> Self {
        Self::monomial(symbol, c, 0)
    }

    pub fn monomial(symbol: Symbol, c: R, degree: u32) -> Self {
        let mut p = Self::zero(symbol, c.ctx());
        if !c.vanishes() {
            p.terms.insert(degree, c);
        }
        p
    }

    /// The polynomial `symbol` itself.
    pub fn var(symbol: Symbol, ctx: R::Ctx) -> Self {
        let one = R::one_of(&ctx);
        Self::monomial(symbol, one, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, R)>>(symbol: Symbol, ctx: R::Ctx, terms: I) -> Self {
        let mut p = Self::zero(symbol, ctx);
        for (d, c) in terms {
            p.add_term(d, &c);
        }
        p
    }

    pub fn symbol(&self) -> Symbol {
        self.symbol
    }

    pub fn ring_ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &R)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn coeff(&self, d: u32) -> R {
        self.terms.get(&d).cloned().unwrap_or_else(|| R::zero_of(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, d: u32, c: &R) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(v) => {
                *v = v.plus(c);
                if v.vanishes() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c.clone());
            }
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.symbol, other.symbol, "polynomial symbol mismatch");
    }

    pub fn mul_coeff(&self, c: &R) -> Self {
        let mut p = Self::zero(self.symbol, self.ctx.clone());
        for (d, v) in &self.terms {
            p.add_term(*d, &v.times(c));
        }
        p
    }

    /// Multiplication by symbol^k.
    pub fn shift(&self, k: u32) -> Self {
        Poly {
            symbol: self.symbol,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let mut p = Self::zero(self.symbol, self.ctx.clone());
        for (d, c) in &self.terms {
            if *d > 0 {
                p.add_term(d - 1, &c.scale(&int(*d as i64)));
            }
        }
        p
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Self {
        let mut p = Self::zero(self.symbol, self.ctx.clone());
        for (d, c) in &self.terms {
            p.add_term(d + 1, &c.scale(&Rational::new(1.into(), (*d as i64 + 1).into())));
        }
        p
    }

    /// Horner evaluation at a ring element.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero_of(&self.ctx);
        let mut last = match self.degree() {
            Some(d) => d,
            None => return acc,
        };
        for (d, c) in self.terms.iter().rev() {
            acc = acc.times(&x.pow(last - d)).plus(c);
            last = *d;
        }
        acc.times(&x.pow(last))
    }

    /// Polynomial composition self(q).
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero(q.symbol, self.ctx.clone());
        let mut last = match self.degree() {
            Some(d) => d,
            None => return acc,
        };
        for (d, c) in self.terms.iter().rev() {
            acc = acc.times(&q.pow(last - d)).plus(&Self::constant(q.symbol, c.clone()));
            last = *d;
        }
        acc.times(&q.pow(last))
    }

    pub fn map<S: Ring>(&self, ctx: S::Ctx, f: impl Fn(&R) -> S) -> Poly<S> {
        let mut p = Poly::zero(self.symbol, ctx);
        for (d, c) in &self.terms {
            p.add_term(*d, &f(c));
        }
        p
    }

    pub fn with_symbol(&self, symbol: Symbol) -> Self {
        Poly { symbol, ctx: self.ctx.clone(), terms: self.terms.clone() }
    }
}

impl Poly<Rational> {
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        let deg = match self.degree() {
            Some(d) => d,
            None => return 0.0,
        };
        for d in (0..=deg).rev() {
            acc = acc * x + self.terms.get(&d).map(rat_to_f64).unwrap_or(0.0);
        }
        acc
    }

    /// Euclidean division over ℚ.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        self.check(divisor);
        let db = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeff(db).recip();
        let mut q = Self::zero(self.symbol, ());
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = r.coeff(dr) * &lead;
            let t = Self::monomial(self.symbol, c, dr - db);
            r = r.minus(&t.times(divisor));
            q = q.plus(&t);
        }
        (q, r)
    }
}

impl<R: Ring> Ring for Poly<R> {
    type Ctx = (Symbol, R::Ctx);

    fn ctx(&self) -> Self::Ctx {
        (self.symbol, self.ctx.clone())
    }
    fn zero_of(ctx: &Self::Ctx) -> Self {
        Poly::zero(ctx.0, ctx.1.clone())
    }
    fn one_of(ctx: &Self::Ctx) -> Self {
        Poly::constant(ctx.0, R::one_of(&ctx.1))
    }
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self {
        Poly::constant(ctx.0, R::from_rational(&ctx.1, r))
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.check(other);
        let mut p = self.clone();
        for (d, c) in &other.terms {
            p.add_term(*d, c);
        }
        p
    }
    fn minus(&self, other: &Self) -> Self {
        self.check(other);
        let mut p = self.clone();
        for (d, c) in &other.terms {
            p.add_term(*d, &c.negate());
        }
        p
    }
    fn times(&self, other: &Self) -> Self {
        self.check(other);
        let mut p = Self::zero(self.symbol, self.ctx.clone());
        for (da, a) in &self.terms {
            for (db, b) in &other.terms {
                p.add_term(da + db, &a.times(b));
            }
        }
        p
    }
    fn negate(&self) -> Self {
        Poly {
            symbol: self.symbol,
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(d, c)| (*d, c.negate())).collect(),
        }
    }
    fn scale(&self, r: &Rational) -> Self {
        let mut p = Self::zero(self.symbol, self.ctx.clone());
        for (d, c) in &self.terms {
            p.add_term(*d, &c.scale(r));
        }
        p
    }
    fn inverse(&self) -> Option<Self> {
        match self.degree() {
            Some(0) => Some(Poly::constant(self.symbol, self.coeff(0).inverse()?)),
            _ => None,
        }
    }
}

impl<R: Coordinates> Coordinates for Poly<R> {
    type Key = (u32, R::Key);

    fn coordinates(&self) -> BTreeMap<Self::Key, Rational> {
        let mut m = BTreeMap::new();
        for (d, c) in &self.terms {
            for (k, v) in c.coordinates() {
                m.insert((*d, k), v);
            }
        }
        m
    }
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: &Poly<R>) -> Poly<R> {
        self.plus(rhs)
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: &Poly<R>) -> Poly<R> {
        self.minus(rhs)
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &Poly<R>) -> Poly<R> {
        self.times(rhs)
    }
}

impl<R: Ring> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        self.negate()
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{}", self.symbol)?,
                _ => write!(f, "({c})*{}^{d}", self.symbol)?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()?;
        write!(f, "[{}]", self.symbol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, CycloElement};

    fn p(c: &[(u32, i64)]) -> Poly<Rational> {
        Poly::from_terms("x", (), c.iter().map(|&(d, v)| (d, int(v))))
    }

    #[test]
    fn no_stored_zeros() {
        let a = p(&[(0, 1), (2, 3)]);
        let b = p(&[(2, -3)]);
        let s = a.plus(&b);
        assert_eq!(s.terms().count(), 1);
        assert_eq!(s.degree(), Some(0));
    }

    #[test]
    fn product_and_eval() {
        let a = p(&[(0, 1), (1, 1)]);
        let b = p(&[(0, -1), (1, 1)]);
        assert_eq!(a.times(&b), p(&[(0, -1), (2, 1)]));
        assert_eq!(a.eval(&rat(1, 2)), rat(3, 2));
        assert_eq!(p(&[(3, 2), (1, 1)]).eval(&int(2)), int(18));
        assert!((p(&[(3, 2), (1, 1)]).eval_f64(0.5) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn calculus() {
        let a = p(&[(0, 5), (3, 4)]);
        assert_eq!(a.derivative(), p(&[(2, 12)]));
        assert_eq!(a.derivative().integral(), p(&[(3, 4)]));
    }

    #[test]
    fn division() {
        let a = p(&[(0, -1), (3, 1)]);
        let b = p(&[(0, -1), (1, 1)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[(0, 1), (1, 1), (2, 1)]));
        assert!(r.is_zero());
    }

    #[test]
    fn composition() {
        let a = p(&[(0, 1), (2, 1)]);
        let q = p(&[(1, 2)]);
        assert_eq!(a.compose(&q), p(&[(0, 1), (2, 4)]));
    }

    #[test]
    fn cyclo_coefficients() {
        let a = Poly::monomial("t", CycloElement::alpha(4), 1);
        let sq = a.times(&a);
        assert_eq!(sq.coeff(2), CycloElement::alpha_pow(4, 2));
        assert!(sq.inverse().is_none());
        assert!(Poly::constant("t", CycloElement::alpha(4)).inverse().is_some());
    }
}
