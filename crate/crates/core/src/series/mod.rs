//! Truncated power series in a gauge variable and the gauge changes used
//! for Puiseux and singular problems.

mod gauge;
mod laurent;

use thiserror::Error;

use crate::arith::{Ring, Symbol};

pub use gauge::{Gauge, GaugeSeries};
pub use laurent::LaurentSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient {requested} requested from a series known only through order {order}")]
    OrderExceeded { requested: usize, order: usize },
    #[error("gauge mismatch: {0} vs {1}")]
    GaugeMismatch(Symbol, Symbol),
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("constant term is not a unit")]
    NotAUnit,
    #[error("exp needs a zero constant term")]
    NonZeroConstant,
    #[error("log needs constant term 1")]
    NotUnitConstant,
    #[error("operation on two exact series needs an explicit truncation order")]
    UnboundedOrder,
    #[error("gauge factor must divide the denominator and be positive")]
    BadRefinement,
    #[error("cannot coarsen: coefficient of index {index} is nonzero")]
    CoarsenNonzero { index: usize },
    #[error("cannot divide by the gauge variable: low-order coefficients are nonzero")]
    ShiftNonzero,
}

pub fn series_mul<R: Ring>(a: &GaugeSeries<R>, b: &GaugeSeries<R>) -> Result<GaugeSeries<R>, SeriesError> {
    a.mul(b)
}

pub fn series_div<R: Ring>(a: &GaugeSeries<R>, b: &GaugeSeries<R>) -> Result<GaugeSeries<R>, SeriesError> {
    a.div(b)
}

pub fn series_exp<R: Ring>(a: &GaugeSeries<R>) -> Result<GaugeSeries<R>, SeriesError> {
    a.exp()
}

pub fn series_log<R: Ring>(a: &GaugeSeries<R>) -> Result<GaugeSeries<R>, SeriesError> {
    a.log()
}

/// Moves the series to the gauge ε = μ^{d·factor}.
pub fn gauge_refine<R: Ring>(a: &GaugeSeries<R>, factor: u32) -> Result<GaugeSeries<R>, SeriesError> {
    a.refine(factor)
}

pub fn series_coeff<R: Ring>(a: &GaugeSeries<R>, k: usize) -> Result<R, SeriesError> {
    a.coeff(k)
}
