use crate::arith::{int, CycloElement, Poly, Rational, Ring};
use crate::series::{Gauge, GaugeSeries, LaurentSeries};

use super::{perturb_iterate, IterationProblem, PerturbationSolution, SolveError};

/// F(u; μ) = Σⱼ cⱼ(μ)·uʲ with exact polynomial coefficients in the gauge
/// variable.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicProblem<R: Ring> {
    gauge: Gauge,
    ctx: R::Ctx,
    coeffs: Vec<Poly<R>>,
}

/// G(y) with F(μˢy) = μᵐ·G(y).
#[derive(Debug, Clone, PartialEq)]
pub struct Rescaled<R: Ring> {
    pub problem: AlgebraicProblem<R>,
    pub scale: i64,
    pub shift: i64,
}

impl<R: Ring> AlgebraicProblem<R> {
    pub fn new(gauge: Gauge, ctx: R::Ctx, coeffs: Vec<Poly<R>>) -> Result<Self, SolveError> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(SolveError::IllFormed("degree in the unknown must be at least 1"));
        }
        if coeffs.iter().any(|c| c.symbol() != gauge.symbol) {
            return Err(SolveError::IllFormed("coefficients must be polynomials in the gauge symbol"));
        }
        Ok(AlgebraicProblem { gauge, ctx, coeffs })
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of uʲ.
    pub fn coeff(&self, j: usize) -> Poly<R> {
        self.coeffs.get(j).cloned().unwrap_or_else(|| Poly::zero(self.gauge.symbol, self.ctx.clone()))
    }

    pub fn coeffs(&self) -> &[Poly<R>] {
        &self.coeffs
    }

    pub fn ring_ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    /// Adds c·μᵏ to the coefficient of uʲ.
    pub fn add_term(&self, j: usize, k: u32, c: &R) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() <= j {
            coeffs.resize(j + 1, Poly::zero(self.gauge.symbol, self.ctx.clone()));
        }
        coeffs[j].add_term(k, c);
        AlgebraicProblem { gauge: self.gauge, ctx: self.ctx.clone(), coeffs }
    }

    pub fn embed<S: Ring>(&self, ctx: S::Ctx, f: impl Fn(&R) -> S) -> AlgebraicProblem<S> {
        AlgebraicProblem {
            gauge: self.gauge,
            ctx: ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c.map(ctx.clone(), &f)).collect(),
        }
    }

    /// ∂F/∂u.
    pub fn derivative(&self) -> Self {
        let coeffs =
            self.coeffs.iter().enumerate().skip(1).map(|(j, c)| c.scale(&int(j as i64))).collect::<Vec<_>>();
        AlgebraicProblem { gauge: self.gauge, ctx: self.ctx.clone(), coeffs }
    }

    fn coeff_series(&self, j: usize) -> GaugeSeries<R> {
        GaugeSeries::from_poly(self.gauge, &self.coeffs[j])
    }

    /// F(z) by Horner's rule in the unknown.
    pub fn eval_series(&self, z: &GaugeSeries<R>) -> Result<GaugeSeries<R>, SolveError> {
        let mut acc = self.coeff_series(self.degree());
        for j in (0..self.degree()).rev() {
            acc = acc.mul(z)?.add(&self.coeff_series(j))?;
        }
        Ok(acc)
    }

    /// F(z) for a candidate with negative powers of the gauge variable.
    pub fn eval_laurent(&self, z: &LaurentSeries<R>) -> Result<LaurentSeries<R>, SolveError> {
        let mut acc = LaurentSeries::from_series(self.coeff_series(self.degree()));
        for j in (0..self.degree()).rev() {
            acc = acc.mul(z)?.add(&LaurentSeries::from_series(self.coeff_series(j)))?;
        }
        Ok(acc)
    }

    /// Substitutes ε = μ^{factor} in every coefficient; the new gauge
    /// variable is named μ.
    pub fn refine_gauge(&self, factor: u32) -> Self {
        let gauge = Gauge::new("mu", self.gauge.denominator * factor);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Poly::from_terms(gauge.symbol, self.ctx.clone(), c.terms().map(|(k, v)| (k * factor, v.clone()))))
            .collect();
        AlgebraicProblem { gauge, ctx: self.ctx.clone(), coeffs }
    }

    /// Substitutes u = μˢ·y and divides out the lowest power μᵐ.
    pub fn rescale_unknown(&self, scale: i64) -> Rescaled<R> {
        let exps: Vec<Vec<(i64, R)>> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.terms().map(|(k, v)| (k as i64 + scale * j as i64, v.clone())).collect())
            .collect();
        let shift = exps.iter().flatten().map(|(e, _)| *e).min().unwrap_or(0);
        let coeffs = exps
            .into_iter()
            .map(|terms| {
                Poly::from_terms(self.gauge.symbol, self.ctx.clone(), terms.into_iter().map(|(e, v)| ((e - shift) as u32, v)))
            })
            .collect();
        Rescaled { problem: AlgebraicProblem { gauge: self.gauge, ctx: self.ctx.clone(), coeffs }, scale, shift }
    }
}

impl AlgebraicProblem<Rational> {
    /// Problem from terms c·μᵏ·uʲ given as (j, k, c).
    pub fn from_terms(gauge: Gauge, terms: &[(usize, u32, Rational)]) -> Result<Self, SolveError> {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![Poly::zero(gauge.symbol, ()); deg + 1];
        for (j, k, c) in terms {
            coeffs[*j].add_term(*k, c);
        }
        Self::new(gauge, (), coeffs)
    }

    pub fn to_cyclo(&self, order: usize) -> AlgebraicProblem<CycloElement> {
        self.embed(order, |r| CycloElement::constant(order, r.clone()))
    }
}

impl<R: Ring> IterationProblem for AlgebraicProblem<R> {
    type Coeff = R;
    type Linear = R;

    fn gauge(&self) -> Gauge {
        self.gauge
    }

    fn coeff_ctx(&self) -> R::Ctx {
        self.ctx.clone()
    }

    fn residual(&self, z: &[GaugeSeries<R>]) -> Result<Vec<GaugeSeries<R>>, SolveError> {
        Ok(vec![self.eval_series(&z[0])?])
    }

    fn linearize(&self, z0: &[R]) -> Result<R, SolveError> {
        let d = self.derivative();
        let a = d.coeffs.iter().map(|c| c.coeff(0)).rev().fold(R::zero_of(&self.ctx), |acc, c| acc.times(&z0[0]).plus(&c));
        a.inverse().ok_or(SolveError::SingularProblem)
    }

    fn solve_linear(&self, a_inv: &R, rhs: &[R]) -> Result<Vec<R>, SolveError> {
        Ok(vec![a_inv.times(&rhs[0])])
    }
}

/// A branch of a Puiseux or singular problem: y solves the rescaled problem
/// G, and z = μˢ·y is the candidate for the original equation.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSolution<R: Ring> {
    /// Original problem after ε = μᵈ.
    pub refined: AlgebraicProblem<R>,
    pub rescaled: Rescaled<R>,
    pub solution: PerturbationSolution<R>,
    pub candidate: LaurentSeries<R>,
    /// F(z) in the original equation, by direct substitution.
    pub original_residual: LaurentSeries<R>,
}

impl<R: Ring> BranchSolution<R> {
    pub fn y(&self) -> &GaugeSeries<R> {
        self.solution.scalar()
    }
}

impl BranchSolution<CycloElement> {
    /// The candidate under α ↦ αᵏ.
    pub fn conjugate(&self, k: i64) -> LaurentSeries<CycloElement> {
        let n = *self.candidate.series().ring_ctx();
        self.candidate.map(n, |c| c.substitute_power(k))
    }
}

/// Solves for the branch u = μˢ·y with ε = μᵈ starting from y₀ = `root`.
pub fn solve_puiseux<R: Ring>(
    problem: &AlgebraicProblem<R>,
    d: u32,
    scale: i64,
    root: R,
    n: usize,
) -> Result<BranchSolution<R>, SolveError> {
    let refined = problem.refine_gauge(d);
    let rescaled = refined.rescale_unknown(scale);
    let solution = perturb_iterate(&rescaled.problem, &[root], n)?;
    let candidate = LaurentSeries::new(scale, solution.scalar().clone());
    let original_residual = refined.eval_laurent(&candidate)?;
    Ok(BranchSolution { refined, rescaled, solution, candidate, original_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::solve::problems;

    #[test]
    fn regular_quintic_order_three() {
        let p = problems::quintic_regular();
        let sol = perturb_iterate(&p, &[int(1)], 3).unwrap();
        let z = sol.scalar();
        let want = [int(1), rat(1, 5), rat(-1, 25), rat(1, 125)];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(&z.coeff(k).unwrap(), w);
        }
        assert_eq!(sol.scalar_residual().leading(), Some((5, &rat(21, 3125))));
    }

    #[test]
    fn trivial_linear() {
        let p = AlgebraicProblem::from_terms(Gauge::EPS, &[(1, 0, int(1)), (0, 1, int(-1))]).unwrap();
        let sol = perturb_iterate(&p, &[int(0)], 1).unwrap();
        assert_eq!(sol.scalar().coeffs(), &[int(0), int(1)]);
        assert!(sol.scalar_residual().is_zero());
    }

    #[test]
    fn bad_initial_term() {
        let p = problems::quintic_regular();
        assert_eq!(perturb_iterate(&p, &[int(2)], 2).unwrap_err(), SolveError::BadInitialTerm);
    }

    #[test]
    fn singular_linearization() {
        // u² − ε at u₀ = 0
        let p = AlgebraicProblem::from_terms(Gauge::EPS, &[(2, 0, int(1)), (0, 1, int(-1))]).unwrap();
        assert_eq!(perturb_iterate(&p, &[int(0)], 2).unwrap_err(), SolveError::SingularProblem);
    }

    #[test]
    fn singular_quintic_rescales() {
        let p = problems::quintic_singular().refine_gauge(4);
        let r = p.rescale_unknown(-1);
        assert_eq!(r.shift, -1);
        let want = AlgebraicProblem::from_terms(
            Gauge::new("mu", 4),
            &[(5, 0, int(1)), (1, 0, int(-1)), (0, 1, int(-1))],
        )
        .unwrap();
        assert_eq!(r.problem, want);
    }

    #[test]
    fn puiseux_rescales() {
        let r = problems::quintic_puiseux().refine_gauge(5).rescale_unknown(1);
        assert_eq!(r.shift, 5);
        let want = AlgebraicProblem::from_terms(
            Gauge::new("mu", 5),
            &[(5, 0, int(1)), (1, 1, int(-1)), (0, 0, int(-1))],
        )
        .unwrap();
        assert_eq!(r.problem, want);
    }
}
