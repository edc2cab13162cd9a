//! Residuals in the original equation, structured backward-error fits and
//! the simultaneous backward error over all roots.

mod fit;
mod simultaneous;

use thiserror::Error;

use crate::arith::{Coordinates, Ring};
use crate::linalg::LinalgError;
use crate::series::{GaugeSeries, LaurentSeries, SeriesError};
use crate::solve::{AlgebraicProblem, LinearOde, OdeSeries, SolveError};

pub use fit::{
    optimal_backward_error, pendulum_fit, quintic_fit, BEFitSpec, BackwardErrorResult, Direction, DirectionTerm, FitCondition,
};
pub use simultaneous::{simultaneous_backward_error, SimultaneousResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BackwardError {
    #[error("fit basis cannot cancel the residual at order {order}")]
    UnsolvableFit { order: i64 },
    #[error("fit did not raise the leading residual order")]
    NoImprovement,
    #[error("product coefficient of x^{power} at order {order} is not rational")]
    NonRationalProduct { power: usize, order: i64 },
    #[error("branches and problem use different gauges")]
    InconsistentGauge,
    #[error("no branches supplied")]
    NoBranches,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// c·μ^power added to the coefficient of slot `slot`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotCorrection<C> {
    pub slot: usize,
    pub power: u32,
    pub coeff: C,
}

/// An equation Σ_slot c_slot(μ)·S_slot(z) whose coefficients can be
/// perturbed; the residual is affine in those coefficients.
pub trait SlottedEquation: Clone {
    type Coeff: Ring + Coordinates;
    type Candidate;

    fn coeff_ctx(&self) -> <Self::Coeff as Ring>::Ctx;
    /// S_slot(z): uʲ for algebraic equations, the j-th derivative for ODEs.
    fn slot_value(&self, slot: usize, z: &Self::Candidate) -> Result<LaurentSeries<Self::Coeff>, BackwardError>;
    fn residual(&self, z: &Self::Candidate) -> Result<LaurentSeries<Self::Coeff>, BackwardError>;
    fn perturbed(&self, corrections: &[SlotCorrection<Self::Coeff>]) -> Self;
}

/// Residual of a candidate by direct substitution.
pub fn residual_exact<E: SlottedEquation>(
    problem: &E,
    candidate: &E::Candidate,
) -> Result<LaurentSeries<E::Coeff>, BackwardError> {
    problem.residual(candidate)
}

/// F(u) − r: the equation that an exact candidate with residual r solves.
pub fn reverse_engineered<R: Ring>(
    problem: &AlgebraicProblem<R>,
    candidate: &GaugeSeries<R>,
) -> Result<AlgebraicProblem<R>, BackwardError> {
    if candidate.order().is_some() {
        return Err(SeriesError::UnboundedOrder.into());
    }
    let r = problem.eval_series(candidate)?;
    let mut out = problem.clone();
    for (k, c) in r.coeffs().iter().enumerate() {
        if !c.vanishes() {
            out = out.add_term(0, k as u32, &c.negate());
        }
    }
    Ok(out)
}

impl<R: Ring + Coordinates> SlottedEquation for AlgebraicProblem<R> {
    type Coeff = R;
    type Candidate = LaurentSeries<R>;

    fn coeff_ctx(&self) -> R::Ctx {
        self.ring_ctx().clone()
    }

    fn slot_value(&self, slot: usize, z: &LaurentSeries<R>) -> Result<LaurentSeries<R>, BackwardError> {
        Ok(z.pow(slot as u32)?)
    }

    fn residual(&self, z: &LaurentSeries<R>) -> Result<LaurentSeries<R>, BackwardError> {
        Ok(self.eval_laurent(z)?)
    }

    fn perturbed(&self, corrections: &[SlotCorrection<R>]) -> Self {
        corrections.iter().fold(self.clone(), |p, c| p.add_term(c.slot, c.power, &c.coeff))
    }
}

impl SlottedEquation for LinearOde {
    type Coeff = crate::arith::TrigSeries;
    type Candidate = OdeSeries;

    fn coeff_ctx(&self) -> crate::arith::Symbol {
        self.time()
    }

    fn slot_value(&self, slot: usize, z: &OdeSeries) -> Result<LaurentSeries<Self::Coeff>, BackwardError> {
        let mut d = z.clone();
        for _ in 0..slot {
            d = crate::solve::series_diff(&d);
        }
        Ok(LaurentSeries::from_series(d))
    }

    fn residual(&self, z: &OdeSeries) -> Result<LaurentSeries<Self::Coeff>, BackwardError> {
        Ok(LaurentSeries::from_series(self.apply(z)?))
    }

    fn perturbed(&self, corrections: &[SlotCorrection<Self::Coeff>]) -> Self {
        let mut out = self.clone();
        for c in corrections {
            let slot = out.coeff_mut(c.slot);
            let term = GaugeSeries::monomial(slot.gauge(), c.coeff.clone(), c.power as usize);
            *slot = slot.add(&term).expect("correction shares the equation's gauge");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Rational};
    use crate::series::Gauge;
    use crate::solve::{perturb_iterate, problems};

    #[test]
    fn quintic_residual_of_z2() {
        let p = problems::quintic_regular();
        let z2 = GaugeSeries::exact(Gauge::EPS, (), vec![int(1), rat(1, 5), rat(-1, 25)]);
        let r = residual_exact(&p, &LaurentSeries::from_series(z2.clone())).unwrap();
        assert_eq!(r.coeff(2).unwrap(), int(0));
        assert_eq!(r.coeff(3).unwrap(), rat(-1, 25));
        assert_eq!(r.coeff(4).unwrap(), rat(-3, 125));
        assert_eq!(r.coeff(5).unwrap(), rat(11, 3125));
        assert_eq!(r.order(), None);
        assert_eq!(r.series().coeffs().len() - 1, 10);
        let at_one: Rational = r.terms().into_iter().map(|(_, c)| c).sum();
        let v = rat(29, 25);
        assert_eq!(at_one, Ring::pow(&v, 5) - &v - int(1));
    }

    #[test]
    fn reverse_engineered_equation_is_solved() {
        let p = problems::quintic_regular();
        let sol = perturb_iterate(&p, &[int(1)], 2).unwrap();
        let q = reverse_engineered(&p, sol.scalar()).unwrap();
        assert!(q.eval_series(sol.scalar()).unwrap().is_zero());
    }
}
