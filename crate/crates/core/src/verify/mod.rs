//! Floating-point residual audits of closed-form candidates: expression
//! trees with symbolic derivatives, Lambert W, and grid reports.

mod audits;
mod expr;
mod forms;
mod lambert;
mod scalar;
mod tape;

use thiserror::Error;

use crate::arith::Symbol;
use crate::backward::BackwardError;
use crate::series::SeriesError;
use crate::solve::SolveError;

pub use audits::{
    dde_residual_series, hyperasymptotic_root, morrison_audit, morrison_solution, pendulum_audit, residual_slope,
    HyperasymptoticRoot, PendulumForm, ResidualReport,
};
pub use expr::{Expr, Func, Node};
pub use forms::{bessel0_operator, hankel_expr, linear_ode_expr, poly_to_expr, series_to_expr, trig_to_expr};
pub use lambert::lambert_w_f64 as lambert_w;
pub use scalar::{rel_diff, Hp, Scalar, HP_BITS};
pub use tape::{eval_expr, uniform_grid, Tape};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("lambert_w argument {0} is below -1/e")]
    Domain(f64),
    #[error("variable {0} has no binding")]
    UnboundVariable(Symbol),
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Backward(#[from] BackwardError),
}

/// d/dx of an expression, as a free function.
pub fn expr_diff(e: &Expr, var: Symbol) -> Expr {
    e.diff(var)
}
