use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{int, rat, ArithError, Coordinates, Poly, Rational, Ring, Symbol};

type Amp = Poly<Rational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrigBasis {
    Cos,
    Sin,
}

/// Coordinate of tᵖ·cos(ht) or tᵖ·sin(ht).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrigKey {
    pub harmonic: u32,
    pub basis: TrigBasis,
    pub power: u32,
}

/// Σ_h p_h(t)·cos(ht) + q_h(t)·sin(ht) with exact polynomial amplitudes.
#[derive(Clone, PartialEq)]
pub struct TrigSeries {
    symbol: Symbol,
    terms: BTreeMap<u32, (Amp, Amp)>,
}

impl TrigSeries {
    pub fn zero(symbol: Symbol) -> Self {
        TrigSeries { symbol, terms: BTreeMap::new() }
    }

    pub fn constant(symbol: Symbol, c: Rational) -> Self {
        Self::from_poly(Poly::constant(symbol, c))
    }

    /// A harmonic-0 series (a plain polynomial in the time symbol).
    pub fn from_poly(p: Amp) -> Self {
        let mut s = Self::zero(p.symbol());
        s.add_cos(0, &p);
        s
    }

    /// c·tᵖ·cos(ht).
    pub fn cos_term(symbol: Symbol, h: u32, c: Rational, power: u32) -> Self {
        let mut s = Self::zero(symbol);
        s.add_cos(h as i64, &Poly::monomial(symbol, c, power));
        s
    }

    /// c·tᵖ·sin(ht).
    pub fn sin_term(symbol: Symbol, h: u32, c: Rational, power: u32) -> Self {
        let mut s = Self::zero(symbol);
        s.add_sin(h as i64, &Poly::monomial(symbol, c, power));
        s
    }

    pub fn symbol(&self) -> Symbol {
        self.symbol
    }

    pub fn cos_amp(&self, h: u32) -> Amp {
        self.terms.get(&h).map(|t| t.0.clone()).unwrap_or_else(|| Poly::zero(self.symbol, ()))
    }

    pub fn sin_amp(&self, h: u32) -> Amp {
        self.terms.get(&h).map(|t| t.1.clone()).unwrap_or_else(|| Poly::zero(self.symbol, ()))
    }

    pub fn harmonics(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Amp, &Amp)> {
        self.terms.iter().map(|(h, (c, s))| (*h, c, s))
    }

    /// Exact coefficient of tᵖ·cos(ht) or tᵖ·sin(ht).
    pub fn coefficient(&self, key: TrigKey) -> Rational {
        match self.terms.get(&key.harmonic) {
            None => <Rational as Zero>::zero(),
            Some((c, s)) => match key.basis {
                TrigBasis::Cos => c.coeff(key.power),
                TrigBasis::Sin => s.coeff(key.power),
            },
        }
    }

    /// Largest polynomial degree among all amplitudes.
    pub fn amplitude_degree(&self) -> Option<u32> {
        self.terms
            .values()
            .flat_map(|(c, s)| [c.degree(), s.degree()])
            .flatten()
            .max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn entry(&mut self, h: u32) -> &mut (Amp, Amp) {
        let sym = self.symbol;
        self.terms.entry(h).or_insert_with(|| (Poly::zero(sym, ()), Poly::zero(sym, ())))
    }

    fn prune(&mut self, h: u32) {
        if let Some((c, s)) = self.terms.get(&h) {
            if c.is_zero() && s.is_zero() {
                self.terms.remove(&h);
            }
        }
    }

    /// Adds p·cos(ht) for any integer h.
    fn add_cos(&mut self, h: i64, p: &Amp) {
        if p.is_zero() {
            return;
        }
        let h = h.unsigned_abs() as u32;
        let e = self.entry(h);
        e.0 = e.0.plus(p);
        self.prune(h);
    }

    /// Adds p·sin(ht) for any integer h; sin 0 vanishes.
    fn add_sin(&mut self, h: i64, p: &Amp) {
        if h == 0 || p.is_zero() {
            return;
        }
        let q = if h < 0 { p.negate() } else { p.clone() };
        let h = h.unsigned_abs() as u32;
        let e = self.entry(h);
        e.1 = e.1.plus(&q);
        self.prune(h);
    }

    pub fn mul_poly(&self, p: &Amp) -> Self {
        self.times(&Self::from_poly(p.clone()))
    }

    pub fn derivative(&self) -> Self {
        trig_diff(self)
    }

    /// Value at a float time.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(h, (c, s))| {
                let x = *h as f64 * t;
                c.eval_f64(t) * x.cos() + s.eval_f64(t) * x.sin()
            })
            .sum()
    }

    /// Exact value at t = 0.
    pub fn eval_at_zero(&self) -> Rational {
        self.terms.values().map(|(c, _)| c.coeff(0)).fold(<Rational as Zero>::zero(), |a, b| a + b)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        if self.symbol != other.symbol {
            return Err(ArithError::SymbolMismatch(self.symbol, other.symbol));
        }
        Ok(self.times(other))
    }

    pub fn map_amplitudes(&self, f: impl Fn(&Amp) -> Amp) -> Self {
        let mut s = Self::zero(self.symbol);
        for (h, (c, q)) in &self.terms {
            s.add_cos(*h as i64, &f(c));
            s.add_sin(*h as i64, &f(q));
        }
        s
    }
}

/// Exact product with all cross terms rewritten by product-to-sum identities.
pub fn trig_mul(a: &TrigSeries, b: &TrigSeries) -> Result<TrigSeries, ArithError> {
    a.try_mul(b)
}

/// d/dt[p cos ht] = p′cos ht − h·p sin ht, d/dt[q sin ht] = q′ sin ht + h·q cos ht.
pub fn trig_diff(a: &TrigSeries) -> TrigSeries {
    let mut out = TrigSeries::zero(a.symbol);
    for (h, (c, s)) in &a.terms {
        let hh = int(*h as i64);
        let h = *h as i64;
        out.add_cos(h, &c.derivative());
        out.add_sin(h, &c.scale(&hh).negate());
        out.add_sin(h, &s.derivative());
        out.add_cos(h, &s.scale(&hh));
    }
    out
}

impl Ring for TrigSeries {
    type Ctx = Symbol;

    fn ctx(&self) -> Symbol {
        self.symbol
    }
    fn zero_of(symbol: &Symbol) -> Self {
        TrigSeries::zero(symbol)
    }
    fn one_of(symbol: &Symbol) -> Self {
        TrigSeries::constant(symbol, int(1))
    }
    fn from_rational(symbol: &Symbol, r: &Rational) -> Self {
        TrigSeries::constant(symbol, r.clone())
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.symbol, other.symbol, "time symbol mismatch");
        let mut s = self.clone();
        for (h, (c, q)) in &other.terms {
            s.add_cos(*h as i64, c);
            s.add_sin(*h as i64, q);
        }
        s
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }
    fn times(&self, other: &Self) -> Self {
        assert_eq!(self.symbol, other.symbol, "time symbol mismatch");
        let half = rat(1, 2);
        let mut out = TrigSeries::zero(self.symbol);
        for (ha, (ca, sa)) in &self.terms {
            for (hb, (cb, sb)) in &other.terms {
                let (a, b) = (*ha as i64, *hb as i64);
                if !ca.is_zero() && !cb.is_zero() {
                    let p = ca.times(cb).scale(&half);
                    out.add_cos(a - b, &p);
                    out.add_cos(a + b, &p);
                }
                if !sa.is_zero() && !sb.is_zero() {
                    let p = sa.times(sb).scale(&half);
                    out.add_cos(a - b, &p);
                    out.add_cos(a + b, &p.negate());
                }
                if !sa.is_zero() && !cb.is_zero() {
                    let p = sa.times(cb).scale(&half);
                    out.add_sin(a + b, &p);
                    out.add_sin(a - b, &p);
                }
                if !ca.is_zero() && !sb.is_zero() {
                    let p = ca.times(sb).scale(&half);
                    out.add_sin(a + b, &p);
                    out.add_sin(a - b, &p.negate());
                }
            }
        }
        out
    }
    fn negate(&self) -> Self {
        self.map_amplitudes(|p| p.negate())
    }
    fn scale(&self, r: &Rational) -> Self {
        self.map_amplitudes(|p| p.scale(r))
    }
    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (c, _) = self.terms.get(&0)?;
        if c.degree() != Some(0) {
            return None;
        }
        Some(TrigSeries::constant(self.symbol, c.coeff(0).recip()))
    }
}

impl Coordinates for TrigSeries {
    type Key = TrigKey;

    fn coordinates(&self) -> BTreeMap<TrigKey, Rational> {
        let mut m = BTreeMap::new();
        for (h, (c, s)) in &self.terms {
            for (basis, amp) in [(TrigBasis::Cos, c), (TrigBasis::Sin, s)] {
                for (power, v) in amp.terms() {
                    m.insert(TrigKey { harmonic: *h, basis, power }, v.clone());
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a TrigSeries> for &'a TrigSeries {
    type Output = TrigSeries;
    fn add(self, rhs: &TrigSeries) -> TrigSeries {
        self.plus(rhs)
    }
}

impl<'a> Sub<&'a TrigSeries> for &'a TrigSeries {
    type Output = TrigSeries;
    fn sub(self, rhs: &TrigSeries) -> TrigSeries {
        self.minus(rhs)
    }
}

impl<'a> Mul<&'a TrigSeries> for &'a TrigSeries {
    type Output = TrigSeries;
    fn mul(self, rhs: &TrigSeries) -> TrigSeries {
        self.times(rhs)
    }
}

impl Neg for &TrigSeries {
    type Output = TrigSeries;
    fn neg(self) -> TrigSeries {
        self.negate()
    }
}

impl fmt::Display for TrigSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (key, v) in self.coordinates() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", super::rat_string(&v))?;
            match key.power {
                0 => {}
                1 => write!(f, "*{}", self.symbol)?,
                p => write!(f, "*{}^{}", self.symbol, p)?,
            }
            if key.harmonic > 0 {
                let name = match key.basis {
                    TrigBasis::Cos => "cos",
                    TrigBasis::Sin => "sin",
                };
                if key.harmonic == 1 {
                    write!(f, "*{}({})", name, self.symbol)?;
                } else {
                    write!(f, "*{}({}{})", name, key.harmonic, self.symbol)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TrigSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigSeries({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos(h: u32, c: Rational, p: u32) -> TrigSeries {
        TrigSeries::cos_term("t", h, c, p)
    }

    fn sin(h: u32, c: Rational, p: u32) -> TrigSeries {
        TrigSeries::sin_term("t", h, c, p)
    }

    #[test]
    fn cos_squared() {
        let c = cos(1, int(1), 0);
        let expect = TrigSeries::constant("t", rat(1, 2)).plus(&cos(2, rat(1, 2), 0));
        assert_eq!(trig_mul(&c, &c).unwrap(), expect);
    }

    #[test]
    fn sin_cubed() {
        let s = sin(1, int(1), 0);
        let cube = s.times(&s).times(&s);
        assert_eq!(cube, sin(1, rat(3, 4), 0).plus(&sin(3, rat(-1, 4), 0)));
    }

    #[test]
    fn polynomial_amplitude_product() {
        let a = sin(1, int(1), 1);
        let b = cos(1, int(1), 0);
        assert_eq!(a.times(&b), sin(2, rat(1, 2), 1));
    }

    #[test]
    fn derivatives() {
        assert_eq!(trig_diff(&cos(1, int(1), 0)), sin(1, int(-1), 0));
        let d = trig_diff(&sin(1, int(1), 1));
        assert_eq!(d, sin(1, int(1), 0).plus(&cos(1, int(1), 1)));
        let c = cos(1, int(1), 0);
        assert!(trig_diff(&trig_diff(&c)).plus(&c).is_zero());
    }

    #[test]
    fn symbol_mismatch() {
        let a = cos(1, int(1), 0);
        let b = TrigSeries::cos_term("tau", 1, int(1), 0);
        assert!(matches!(trig_mul(&a, &b), Err(ArithError::SymbolMismatch(..))));
    }

    #[test]
    fn harmonic_zero_has_no_sine() {
        let s = sin(2, int(1), 0).times(&sin(2, int(1), 0));
        assert!(s.sin_amp(0).is_zero());
        assert_eq!(s.cos_amp(0), Poly::constant("t", rat(1, 2)));
    }

    #[test]
    fn coordinates_and_degree() {
        let s = cos(3, rat(2, 7), 2).plus(&sin(1, int(1), 0));
        assert_eq!(s.amplitude_degree(), Some(2));
        let key = TrigKey { harmonic: 3, basis: TrigBasis::Cos, power: 2 };
        assert_eq!(s.coefficient(key), rat(2, 7));
        assert_eq!(s.coordinates().len(), 2);
        assert_eq!(s.eval_at_zero(), int(0));
    }
}
