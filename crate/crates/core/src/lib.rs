//! Perturbation series with exact residuals and backward-error analysis.

pub mod arith;
pub mod asymptotics;
pub mod backward;
pub mod linalg;
pub mod series;
pub mod solve;
pub mod verify;
