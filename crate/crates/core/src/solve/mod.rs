//! Residual-driven perturbation iteration and its instantiations.
//!
//! Every solver follows the same loop: with z_n = u₀ + … + εⁿuₙ, compute the
//! residual Δₙ by direct substitution, then solve A·u_{n+1} = −[ε^{n+1}]Δₙ
//! with A frozen at order 0.

mod algebraic;
mod lindstedt;
mod odes;
mod oscillator;
pub mod problems;
mod renorm;
mod system;

use thiserror::Error;

use crate::arith::{ArithError, Ring};
use crate::linalg::LinalgError;
use crate::series::{Gauge, GaugeSeries, SeriesError};

pub use algebraic::{solve_puiseux, AlgebraicProblem, BranchSolution, Rescaled};
pub use lindstedt::{solve_lindstedt, LindstedtSolution};
pub use odes::{
    duffing_regular, duffing_spec, pendulum_equation, pendulum_regular, series_diff, LinearOde, OdeResidualSpec, OdeSeries,
};
pub use oscillator::solve_oscillator;
pub use renorm::{renormalize, Renormalization};
pub use system::{solve_system_order0, Order0, PolyTerm, SystemProblem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("order-0 linearization is not invertible; the problem is singular")]
    SingularProblem,
    #[error("initial term leaves a nonzero order-0 residual")]
    BadInitialTerm,
    #[error("Jacobian is singular at the supplied root")]
    SingularJacobian,
    #[error("supplied point is not a root of the order-0 system")]
    NotARoot,
    #[error("secular terms at order {order} cannot be removed by a single frequency correction")]
    InconsistentSecularity { order: usize },
    #[error("amplitude has order-0 term {0}, expected 1")]
    NotUnitAmplitude(String),
    #[error("harmonic {0} present; only the fundamental can be renormalized")]
    NonFundamentalHarmonic(u32),
    #[error("residual coefficient of order {order} is nonzero after solving")]
    OrderGuarantee { order: usize },
    #[error("problem is ill-formed: {0}")]
    IllFormed(&'static str),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One step of the iteration: the right-hand side −[ε^{k}]Δ_{k−1} and the
/// correction uₖ it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderRecord<C: Ring> {
    pub order: usize,
    pub rhs: Vec<C>,
    pub correction: Vec<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSolution<C: Ring> {
    /// One exact (finite) series per unknown.
    pub series: Vec<GaugeSeries<C>>,
    /// One exact residual series per equation.
    pub residual: Vec<GaugeSeries<C>>,
    /// Residual coefficients 0..=achieved_order are zero.
    pub achieved_order: usize,
    pub diagnostics: Vec<OrderRecord<C>>,
}

impl<C: Ring> PerturbationSolution<C> {
    /// The series of a scalar problem.
    pub fn scalar(&self) -> &GaugeSeries<C> {
        &self.series[0]
    }

    pub fn scalar_residual(&self) -> &GaugeSeries<C> {
        &self.residual[0]
    }

    /// Lowest order at which some residual component is nonzero.
    pub fn leading_residual_order(&self) -> Option<usize> {
        self.residual.iter().filter_map(|r| r.leading().map(|(k, _)| k)).min()
    }
}

/// A problem the generic iteration can drive.
pub trait IterationProblem {
    type Coeff: Ring;
    /// Frozen order-0 operator, ready to solve with.
    type Linear;

    fn gauge(&self) -> Gauge;
    fn coeff_ctx(&self) -> <Self::Coeff as Ring>::Ctx;
    /// Exact residual of a candidate by direct substitution.
    fn residual(&self, z: &[GaugeSeries<Self::Coeff>]) -> Result<Vec<GaugeSeries<Self::Coeff>>, SolveError>;
    fn linearize(&self, z0: &[Self::Coeff]) -> Result<Self::Linear, SolveError>;
    fn solve_linear(&self, a: &Self::Linear, rhs: &[Self::Coeff]) -> Result<Vec<Self::Coeff>, SolveError>;
}

/// Runs the iteration from `z0` through order `n`.
pub fn perturb_iterate<P: IterationProblem>(
    problem: &P,
    z0: &[P::Coeff],
    n: usize,
) -> Result<PerturbationSolution<P::Coeff>, SolveError> {
    let gauge = problem.gauge();
    let ctx = problem.coeff_ctx();
    let mut comps: Vec<Vec<P::Coeff>> = z0.iter().map(|u| vec![u.clone()]).collect();
    let build = |comps: &[Vec<P::Coeff>]| -> Vec<GaugeSeries<P::Coeff>> {
        comps.iter().map(|c| GaugeSeries::exact(gauge, ctx.clone(), c.clone())).collect()
    };

    let mut z = build(&comps);
    let mut delta = problem.residual(&z)?;
    if delta.iter().any(|d| d.coeff(0).map(|c| !c.vanishes()).unwrap_or(true)) {
        return Err(SolveError::BadInitialTerm);
    }
    let a = problem.linearize(z0)?;
    let mut diagnostics = Vec::with_capacity(n);
    for k in 1..=n {
        let rhs = delta.iter().map(|d| d.coeff(k).map(|c| c.negate())).collect::<Result<Vec<_>, _>>()?;
        let u = problem.solve_linear(&a, &rhs)?;
        for (c, v) in comps.iter_mut().zip(&u) {
            c.push(v.clone());
        }
        diagnostics.push(OrderRecord { order: k, rhs, correction: u });
        z = build(&comps);
        delta = problem.residual(&z)?;
    }
    for d in &delta {
        for k in 0..=n {
            if !d.coeff(k)?.vanishes() {
                return Err(SolveError::OrderGuarantee { order: k });
            }
        }
    }
    Ok(PerturbationSolution { series: z, residual: delta, achieved_order: n, diagnostics })
}
