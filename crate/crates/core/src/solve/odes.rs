use std::fmt;
use std::sync::Arc;

use crate::arith::{int, trig_diff, Rational, Symbol, TrigSeries};
use crate::series::{Gauge, GaugeSeries};

use super::{perturb_iterate, solve_oscillator, IterationProblem, PerturbationSolution, SolveError};

pub type OdeSeries = GaugeSeries<TrigSeries>;
type ResidualFn = dyn Fn(&OdeSeries) -> Result<OdeSeries, SolveError> + Send + Sync;

/// d/dt applied to every coefficient.
pub fn series_diff(z: &OdeSeries) -> OdeSeries {
    z.map(*z.ring_ctx(), trig_diff)
}

/// An ODE perturbed about y″ + y: the residual functional, the initial
/// conditions, and the time symbol. Each order is solved by
/// [`solve_oscillator`] with zero initial data.
#[derive(Clone)]
pub struct OdeResidualSpec {
    gauge: Gauge,
    time: Symbol,
    residual: Arc<ResidualFn>,
    pub y0: Rational,
    pub yprime0: Rational,
}

impl fmt::Debug for OdeResidualSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OdeResidualSpec")
            .field("gauge", &self.gauge)
            .field("time", &self.time)
            .field("y0", &self.y0)
            .field("yprime0", &self.yprime0)
            .finish_non_exhaustive()
    }
}

impl OdeResidualSpec {
    pub fn new(
        gauge: Gauge,
        time: Symbol,
        y0: Rational,
        yprime0: Rational,
        residual: impl Fn(&OdeSeries) -> Result<OdeSeries, SolveError> + Send + Sync + 'static,
    ) -> Self {
        OdeResidualSpec { gauge, time, residual: Arc::new(residual), y0, yprime0 }
    }

    pub fn time(&self) -> Symbol {
        self.time
    }

    pub fn eval(&self, z: &OdeSeries) -> Result<OdeSeries, SolveError> {
        (self.residual)(z)
    }

    /// Order-0 term: the free oscillation with the given initial data.
    pub fn initial_term(&self) -> TrigSeries {
        solve_oscillator(&TrigSeries::zero(self.time), &self.y0, &self.yprime0)
    }

    pub fn solve(&self, n: usize) -> Result<PerturbationSolution<TrigSeries>, SolveError> {
        perturb_iterate(self, &[self.initial_term()], n)
    }
}

impl IterationProblem for OdeResidualSpec {
    type Coeff = TrigSeries;
    type Linear = ();

    fn gauge(&self) -> Gauge {
        self.gauge
    }

    fn coeff_ctx(&self) -> Symbol {
        self.time
    }

    fn residual(&self, z: &[OdeSeries]) -> Result<Vec<OdeSeries>, SolveError> {
        Ok(vec![self.eval(&z[0])?])
    }

    fn linearize(&self, _: &[TrigSeries]) -> Result<(), SolveError> {
        Ok(())
    }

    fn solve_linear(&self, _: &(), rhs: &[TrigSeries]) -> Result<Vec<TrigSeries>, SolveError> {
        let zero = int(0);
        Ok(vec![solve_oscillator(&rhs[0], &zero, &zero)])
    }
}

/// c₂(ε,t)·z″ + c₁(ε,t)·z′ + c₀(ε,t)·z with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOde {
    pub c0: OdeSeries,
    pub c1: OdeSeries,
    pub c2: OdeSeries,
}

impl LinearOde {
    pub fn time(&self) -> Symbol {
        *self.c0.ring_ctx()
    }

    pub fn gauge(&self) -> Gauge {
        self.c0.gauge()
    }

    /// Coefficient of the j-th derivative.
    pub fn coeff(&self, j: usize) -> &OdeSeries {
        match j {
            0 => &self.c0,
            1 => &self.c1,
            _ => &self.c2,
        }
    }

    pub fn coeff_mut(&mut self, j: usize) -> &mut OdeSeries {
        match j {
            0 => &mut self.c0,
            1 => &mut self.c1,
            _ => &mut self.c2,
        }
    }

    pub fn apply(&self, z: &OdeSeries) -> Result<OdeSeries, SolveError> {
        let d1 = series_diff(z);
        let d2 = series_diff(&d1);
        Ok(self.c2.mul(&d2)?.add(&self.c1.mul(&d1)?)?.add(&self.c0.mul(z)?)?)
    }

    pub fn to_spec(&self, y0: Rational, yprime0: Rational) -> OdeResidualSpec {
        let ode = self.clone();
        OdeResidualSpec::new(self.gauge(), self.time(), y0, yprime0, move |z| ode.apply(z))
    }
}

fn trig_const(time: Symbol, c: i64) -> TrigSeries {
    TrigSeries::constant(time, int(c))
}

/// z″ + z + εz³ in t with z(0) = 1, z′(0) = 0.
pub fn duffing_spec() -> OdeResidualSpec {
    let g = Gauge::EPS;
    OdeResidualSpec::new(g, "t", int(1), int(0), move |z| {
        let d2 = series_diff(&series_diff(z));
        let cube = z.pow(3)?.shift_up(1);
        Ok(d2.add(z)?.add(&cube)?)
    })
}

/// (1 + ετ)θ″ + 2εθ′ + θ in τ.
pub fn pendulum_equation() -> LinearOde {
    let g = Gauge::EPS;
    let tau = "tau";
    let t1 = TrigSeries::from_poly(crate::arith::Poly::var(tau, ()));
    LinearOde {
        c0: GaugeSeries::exact(g, tau, vec![trig_const(tau, 1)]),
        c1: GaugeSeries::exact(g, tau, vec![trig_const(tau, 0), trig_const(tau, 2)]),
        c2: GaugeSeries::exact(g, tau, vec![trig_const(tau, 1), t1]),
    }
}

pub fn duffing_regular(n: usize) -> Result<PerturbationSolution<TrigSeries>, SolveError> {
    duffing_spec().solve(n)
}

/// θ(0) = 1, θ′(0) = 0.
pub fn pendulum_regular(n: usize) -> Result<PerturbationSolution<TrigSeries>, SolveError> {
    pendulum_equation().to_spec(int(1), int(0)).solve(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Ring};

    fn cos(h: u32, c: Rational, p: u32) -> TrigSeries {
        TrigSeries::cos_term("t", h, c, p)
    }

    fn sin(h: u32, c: Rational, p: u32) -> TrigSeries {
        TrigSeries::sin_term("t", h, c, p)
    }

    fn sum(parts: &[TrigSeries]) -> TrigSeries {
        parts.iter().fold(TrigSeries::zero(parts[0].symbol()), |a, b| a.plus(b))
    }

    #[test]
    fn duffing_zeroth_order() {
        let sol = duffing_regular(0).unwrap();
        assert_eq!(sol.scalar().coeffs(), &[cos(1, int(1), 0)]);
        let r = sol.scalar_residual();
        assert_eq!(r.coeff(1).unwrap(), sum(&[cos(1, rat(3, 4), 0), cos(3, rat(1, 4), 0)]));
    }

    #[test]
    fn duffing_first_order() {
        let sol = duffing_regular(1).unwrap();
        let z1 = sum(&[cos(3, rat(1, 32), 0), cos(1, rat(-1, 32), 0), sin(1, rat(-3, 8), 1)]);
        assert_eq!(sol.scalar().coeff(1).unwrap(), z1);
        let r2 = sum(&[
            cos(1, rat(-3, 64), 0),
            cos(5, rat(3, 128), 0),
            cos(3, rat(3, 128), 0),
            sin(1, rat(-9, 32), 1),
            sin(3, rat(-9, 32), 1),
        ]);
        assert_eq!(sol.scalar_residual().coeff(2).unwrap(), r2);
    }

    #[test]
    fn pendulum_first_order() {
        let sol = pendulum_regular(1).unwrap();
        let tc = |h, c, p| TrigSeries::cos_term("tau", h, c, p);
        let ts = |h, c, p| TrigSeries::sin_term("tau", h, c, p);
        let z1 = sum(&[ts(1, rat(3, 4), 0), ts(1, rat(1, 4), 2), tc(1, rat(-3, 4), 1)]);
        assert_eq!(sol.scalar().coeff(1).unwrap(), z1);
        let r = sol.scalar_residual();
        assert_eq!(r.leading().map(|(k, _)| k), Some(2));
        let want = sum(&[ts(1, rat(-1, 4), 3), tc(1, rat(9, 4), 2), ts(1, rat(15, 4), 1)]);
        assert_eq!(r.coeff(2).unwrap(), want);
        assert_eq!(r.coeffs().len(), 3);
    }
}
