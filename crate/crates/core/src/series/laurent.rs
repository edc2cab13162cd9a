use std::fmt;

use crate::arith::{Rational, Ring};

use super::{GaugeSeries, SeriesError};

/// μ^valuation · series, for quantities with finitely many negative powers.
#[derive(Clone, PartialEq)]
pub struct LaurentSeries<R: Ring> {
    valuation: i64,
    series: GaugeSeries<R>,
}

impl<R: Ring> LaurentSeries<R> {
    pub fn new(valuation: i64, series: GaugeSeries<R>) -> Self {
        LaurentSeries { valuation, series }
    }

    pub fn from_series(series: GaugeSeries<R>) -> Self {
        Self::new(0, series)
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn series(&self) -> &GaugeSeries<R> {
        &self.series
    }

    /// Highest known exponent, `None` when exact.
    pub fn order(&self) -> Option<i64> {
        self.series.order().map(|n| n as i64 + self.valuation)
    }

    /// Coefficient of μᵏ.
    pub fn coeff(&self, k: i64) -> Result<R, SeriesError> {
        if k < self.valuation {
            return Ok(R::zero_of(self.series.ring_ctx()));
        }
        self.series.coeff((k - self.valuation) as usize)
    }

    /// Lowest nonzero term as (exponent, coefficient).
    pub fn leading(&self) -> Option<(i64, R)> {
        self.series.leading().map(|(k, c)| (k as i64 + self.valuation, c.clone()))
    }

    /// Nonzero known terms as (exponent, coefficient).
    pub fn terms(&self) -> Vec<(i64, R)> {
        self.series
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.vanishes())
            .map(|(k, c)| (k as i64 + self.valuation, c.clone()))
            .collect()
    }

    fn with_valuation(&self, v: i64) -> Self {
        assert!(v <= self.valuation);
        LaurentSeries { valuation: v, series: self.series.shift_up((self.valuation - v) as usize) }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let v = self.valuation.min(other.valuation);
        let a = self.with_valuation(v);
        let b = other.with_valuation(v);
        Ok(LaurentSeries { valuation: v, series: a.series.add(&b.series)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries { valuation: self.valuation, series: self.series.neg() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        LaurentSeries { valuation: self.valuation, series: self.series.scale(r) }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(LaurentSeries { valuation: self.valuation + other.valuation, series: self.series.mul(&other.series)? })
    }

    pub fn pow(&self, n: u32) -> Result<Self, SeriesError> {
        Ok(LaurentSeries { valuation: self.valuation * n as i64, series: self.series.pow(n)? })
    }

    /// Multiplication by μᵏ for any integer k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { valuation: self.valuation + k, series: self.series.clone() }
    }

    pub fn map<S: Ring>(&self, ctx: S::Ctx, f: impl Fn(&R) -> S) -> LaurentSeries<S> {
        LaurentSeries { valuation: self.valuation, series: self.series.map(ctx, f) }
    }
}

impl<R: Ring + fmt::Display> fmt::Display for LaurentSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.series.gauge().symbol;
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{sym}^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.order() {
            write!(f, " + O({sym}^{})", n + 1)?;
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for LaurentSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentSeries").field("valuation", &self.valuation).field("series", &self.series).finish()
    }
}
