use std::fmt;

use num_integer::Integer;

use crate::arith::{int, Rational, Ring, Symbol};

use super::SeriesError;

/// Gauge variable μ with ε = μᵈ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gauge {
    pub symbol: Symbol,
    pub denominator: u32,
}

impl Gauge {
    pub const EPS: Gauge = Gauge { symbol: "eps", denominator: 1 };

    pub fn new(symbol: Symbol, denominator: u32) -> Self {
        assert!(denominator >= 1, "gauge denominator must be positive");
        Gauge { symbol, denominator }
    }
}

/// Power series in a gauge variable. A series is either truncated (known
/// through μᴺ, unknown beyond) or exact (every omitted coefficient is zero).
#[derive(Clone, PartialEq)]
pub struct GaugeSeries<R: Ring> {
    gauge: Gauge,
    ctx: R::Ctx,
    coeffs: Vec<R>,
    order: Option<usize>,
}

impl<R: Ring> GaugeSeries<R> {
    /// Series known through μ^order; missing coefficients are zero, extra
    /// ones are dropped.
    pub fn truncated(gauge: Gauge, ctx: R::Ctx, mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.resize(order + 1, R::zero_of(&ctx));
        GaugeSeries { gauge, ctx, coeffs, order: Some(order) }
    }

    /// Finite series with no truncation error.
    pub fn exact(gauge: Gauge, ctx: R::Ctx, coeffs: Vec<R>) -> Self {
        let mut s = GaugeSeries { gauge, ctx, coeffs, order: None };
        s.trim();
        s
    }

    pub fn zero(gauge: Gauge, ctx: R::Ctx) -> Self {
        Self::exact(gauge, ctx, Vec::new())
    }

    pub fn one(gauge: Gauge, ctx: R::Ctx) -> Self {
        let one = R::one_of(&ctx);
        Self::exact(gauge, ctx, vec![one])
    }

    pub fn constant(gauge: Gauge, c: R) -> Self {
        let ctx = c.ctx();
        Self::exact(gauge, ctx, vec![c])
    }

    /// c·μᵏ.
    pub fn monomial(gauge: Gauge, c: R, k: usize) -> Self {
        let ctx = c.ctx();
        let mut v = vec![R::zero_of(&ctx); k];
        v.push(c);
        Self::exact(gauge, ctx, v)
    }

    fn trim(&mut self) {
        if self.order.is_none() {
            while self.coeffs.last().is_some_and(|c| c.vanishes()) {
                self.coeffs.pop();
            }
        }
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn ring_ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    /// Truncation order, `None` when the series is exact.
    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Stored coefficients (through the truncation order, or through the
    /// last nonzero term of an exact series).
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<R, SeriesError> {
        match self.order {
            Some(n) if k > n => Err(SeriesError::OrderExceeded { requested: k, order: n }),
            _ => Ok(self.coeffs.get(k).cloned().unwrap_or_else(|| R::zero_of(&self.ctx))),
        }
    }

    /// First nonzero known coefficient.
    pub fn leading(&self) -> Option<(usize, &R)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.vanishes())
    }

    pub fn is_zero(&self) -> bool {
        self.leading().is_none()
    }

    /// Drops every coefficient beyond μ^order.
    pub fn truncate(&self, order: usize) -> Self {
        let order = self.order.map_or(order, |n| n.min(order));
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        Self::truncated(self.gauge, self.ctx.clone(), coeffs, order)
    }

    /// The same coefficients, declared exact.
    pub fn as_exact(&self) -> Self {
        Self::exact(self.gauge, self.ctx.clone(), self.coeffs.clone())
    }

    pub fn map<S: Ring>(&self, ctx: S::Ctx, f: impl Fn(&R) -> S) -> GaugeSeries<S> {
        let mut s = GaugeSeries { gauge: self.gauge, ctx, coeffs: self.coeffs.iter().map(f).collect(), order: self.order };
        s.trim();
        s
    }

    fn min_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.gauge.symbol != other.gauge.symbol {
            return Err(SeriesError::GaugeMismatch(self.gauge.symbol, other.gauge.symbol));
        }
        if self.ctx != other.ctx {
            return Err(SeriesError::RingMismatch);
        }
        Ok(())
    }

    /// Both operands on the finest common gauge.
    fn aligned(&self, other: &Self) -> Result<(Self, Self), SeriesError> {
        self.compatible(other)?;
        let (da, db) = (self.gauge.denominator, other.gauge.denominator);
        if da == db {
            return Ok((self.clone(), other.clone()));
        }
        let l = da.lcm(&db);
        Ok((self.refine(l / da)?, other.refine(l / db)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = self.aligned(other)?;
        let order = Self::min_order(a.order, b.order);
        let len = match order {
            Some(n) => n + 1,
            None => a.coeffs.len().max(b.coeffs.len()),
        };
        let zero = R::zero_of(&a.ctx);
        let coeffs = (0..len)
            .map(|k| a.coeffs.get(k).unwrap_or(&zero).plus(b.coeffs.get(k).unwrap_or(&zero)))
            .collect();
        Ok(Self::with_order(a.gauge, a.ctx, coeffs, order))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(self.ctx.clone(), R::negate)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(self.ctx.clone(), |c| c.scale(r))
    }

    pub fn mul_coeff(&self, c: &R) -> Self {
        self.map(self.ctx.clone(), |x| x.times(c))
    }

    fn with_order(gauge: Gauge, ctx: R::Ctx, coeffs: Vec<R>, order: Option<usize>) -> Self {
        match order {
            Some(n) => Self::truncated(gauge, ctx, coeffs, n),
            None => Self::exact(gauge, ctx, coeffs),
        }
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = self.aligned(other)?;
        let order = Self::min_order(a.order, b.order);
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Ok(Self::with_order(a.gauge, a.ctx.clone(), Vec::new(), order));
        }
        let full = a.coeffs.len() + b.coeffs.len() - 1;
        let len = order.map_or(full, |n| (n + 1).min(full));
        let mut out = vec![R::zero_of(&a.ctx); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= len || x.vanishes() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if !y.vanishes() {
                    out[i + j] = out[i + j].plus(&x.times(y));
                }
            }
        }
        Ok(Self::with_order(a.gauge, a.ctx, out, order))
    }

    pub fn pow(&self, n: u32) -> Result<Self, SeriesError> {
        let mut acc = Self::one(self.gauge, self.ctx.clone());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn bounded_order(&self, other: Option<&Self>) -> Result<usize, SeriesError> {
        Self::min_order(self.order, other.and_then(|o| o.order)).ok_or(SeriesError::UnboundedOrder)
    }

    /// q with q·b = a through the truncation order.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = self.aligned(other)?;
        let n = a.bounded_order(Some(&b))?;
        let inv0 = b.coeff(0)?.inverse().ok_or(SeriesError::NotAUnit)?;
        let mut q: Vec<R> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = a.coeff(k)?;
            for j in 1..=k {
                let bj = b.coeff(j)?;
                if !bj.vanishes() {
                    acc = acc.minus(&bj.times(&q[k - j]));
                }
            }
            q.push(acc.times(&inv0));
        }
        Ok(Self::truncated(a.gauge, a.ctx, q, n))
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        let n = self.bounded_order(None)?;
        if !self.coeff(0)?.vanishes() {
            return Err(SeriesError::NonZeroConstant);
        }
        // k·b_k = Σ_{j=1..k} j·a_j·b_{k−j}
        let mut b = vec![R::one_of(&self.ctx)];
        for k in 1..=n {
            let mut acc = R::zero_of(&self.ctx);
            for j in 1..=k {
                let aj = self.coeff(j)?;
                if !aj.vanishes() {
                    acc = acc.plus(&aj.times(&b[k - j]).scale(&int(j as i64)));
                }
            }
            b.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        Ok(Self::truncated(self.gauge, self.ctx.clone(), b, n))
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let n = self.bounded_order(None)?;
        if !self.coeff(0)?.is_unity() {
            return Err(SeriesError::NotUnitConstant);
        }
        // b_k = a_k − (1/k)·Σ_{j=1..k−1} j·b_j·a_{k−j}
        let mut b = vec![R::zero_of(&self.ctx)];
        for k in 1..=n {
            let mut acc = R::zero_of(&self.ctx);
            for j in 1..k {
                let a = self.coeff(k - j)?;
                if !a.vanishes() && !b[j].vanishes() {
                    acc = acc.plus(&b[j].times(&a).scale(&int(j as i64)));
                }
            }
            let bk = self.coeff(k)?.minus(&acc.scale(&Rational::new(1.into(), (k as i64).into())));
            b.push(bk);
        }
        Ok(Self::truncated(self.gauge, self.ctx.clone(), b, n))
    }

    /// Reinterprets the series on the finer gauge ε = μ^{d·factor}.
    pub fn refine(&self, factor: u32) -> Result<Self, SeriesError> {
        if factor == 0 {
            return Err(SeriesError::BadRefinement);
        }
        let f = factor as usize;
        let gauge = Gauge::new(self.gauge.symbol, self.gauge.denominator * factor);
        let zero = R::zero_of(&self.ctx);
        let mut coeffs = vec![zero; self.coeffs.len().saturating_sub(1) * f + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * f] = c.clone();
        }
        // known through μ^{(N+1)f − 1}: the gap below the first unknown term is exactly zero
        let order = self.order.map(|n| (n + 1) * f - 1);
        Ok(Self::with_order(gauge, self.ctx.clone(), coeffs, order))
    }

    /// The same coefficients under a new name for the gauge variable.
    pub fn renamed(&self, symbol: Symbol) -> Self {
        let mut s = self.clone();
        s.gauge.symbol = symbol;
        s
    }

    /// Inverse of [`refine`](Self::refine).
    pub fn coarsen(&self, factor: u32) -> Result<Self, SeriesError> {
        if factor == 0 || self.gauge.denominator % factor != 0 {
            return Err(SeriesError::BadRefinement);
        }
        let f = factor as usize;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k % f != 0 && !c.vanishes() {
                return Err(SeriesError::CoarsenNonzero { index: k });
            }
        }
        let gauge = Gauge::new(self.gauge.symbol, self.gauge.denominator / factor);
        let coeffs = self.coeffs.iter().step_by(f).cloned().collect();
        let order = self.order.map(|n| n / f);
        Ok(Self::with_order(gauge, self.ctx.clone(), coeffs, order))
    }

    /// Multiplication by μᵏ.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![R::zero_of(&self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::with_order(self.gauge, self.ctx.clone(), coeffs, self.order.map(|n| n + k))
    }

    /// Division by μᵏ; the first k coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self, SeriesError> {
        if let Some(n) = self.order {
            if k > n {
                return Err(SeriesError::OrderExceeded { requested: k, order: n });
            }
        }
        if self.coeffs.iter().take(k).any(|c| !c.vanishes()) {
            return Err(SeriesError::ShiftNonzero);
        }
        let coeffs = self.coeffs.iter().skip(k).cloned().collect();
        Ok(Self::with_order(self.gauge, self.ctx.clone(), coeffs, self.order.map(|n| n - k)))
    }

    /// Σ c_k xᵏ over the known coefficients.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero_of(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// Known coefficients as a polynomial in the gauge symbol.
    pub fn to_poly(&self) -> crate::arith::Poly<R> {
        crate::arith::Poly::from_terms(
            self.gauge.symbol,
            self.ctx.clone(),
            self.coeffs.iter().enumerate().map(|(k, c)| (k as u32, c.clone())),
        )
    }

    pub fn from_poly(gauge: Gauge, p: &crate::arith::Poly<R>) -> Self {
        let ctx = p.ring_ctx().clone();
        let len = p.degree().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![R::zero_of(&ctx); len];
        for (d, c) in p.terms() {
            coeffs[d as usize] = c.clone();
        }
        Self::exact(gauge, ctx, coeffs)
    }
}

impl GaugeSeries<Rational> {
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + crate::arith::rat_to_f64(c))
    }
}

impl<R: Ring + fmt::Display> fmt::Display for GaugeSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{}", self.gauge.symbol)?,
                _ => write!(f, "({c})*{}^{k}", self.gauge.symbol)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.order {
            write!(f, " + O({}^{})", self.gauge.symbol, n + 1)?;
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for GaugeSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeSeries")
            .field("gauge", &self.gauge)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}
