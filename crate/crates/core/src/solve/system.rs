use num_traits::Zero;

use crate::arith::{int, Rational, Ring};
use crate::linalg::{self, Matrix};
use crate::series::{Gauge, GaugeSeries};

use super::{IterationProblem, SolveError};

/// c·μᵏ·v₁^{e₁}⋯vₙ^{eₙ}.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    pub gauge_power: u32,
    pub coeff: Rational,
}

impl PolyTerm {
    pub fn new(exponents: Vec<u32>, gauge_power: u32, coeff: Rational) -> Self {
        PolyTerm { exponents, gauge_power, coeff }
    }
}

/// Square polynomial system with rational coefficients polynomial in μ.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemProblem {
    gauge: Gauge,
    dim: usize,
    equations: Vec<Vec<PolyTerm>>,
}

/// A validated starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct Order0 {
    pub root: Vec<Rational>,
    pub jacobian: Matrix,
    pub det: Rational,
    pub inverse: Matrix,
}

impl SystemProblem {
    pub fn new(gauge: Gauge, dim: usize, equations: Vec<Vec<PolyTerm>>) -> Result<Self, SolveError> {
        if equations.len() != dim {
            return Err(SolveError::IllFormed("system must be square"));
        }
        if equations.iter().flatten().any(|t| t.exponents.len() != dim) {
            return Err(SolveError::IllFormed("exponent vector length must equal the dimension"));
        }
        Ok(SystemProblem { gauge, dim, equations })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn eval_order0(&self, v: &[Rational]) -> Vec<Rational> {
        self.equations
            .iter()
            .map(|eq| {
                eq.iter()
                    .filter(|t| t.gauge_power == 0)
                    .map(|t| t.exponents.iter().zip(v).fold(t.coeff.clone(), |acc, (&e, x)| acc * Ring::pow(x, e)))
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Jacobian of the ε = 0 system at v.
    pub fn jacobian0(&self, v: &[Rational]) -> Matrix {
        self.equations
            .iter()
            .map(|eq| {
                (0..self.dim)
                    .map(|i| {
                        eq.iter()
                            .filter(|t| t.gauge_power == 0 && t.exponents[i] > 0)
                            .map(|t| {
                                let mut acc = &t.coeff * int(t.exponents[i] as i64);
                                for (j, (&e, x)) in t.exponents.iter().zip(v).enumerate() {
                                    let e = if j == i { e - 1 } else { e };
                                    acc *= Ring::pow(x, e);
                                }
                                acc
                            })
                            .fold(Rational::zero(), |a, b| a + b)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Checks that `root` solves the ε = 0 system and that its Jacobian is
/// invertible.
pub fn solve_system_order0(spec: &SystemProblem, root: &[Rational]) -> Result<Order0, SolveError> {
    if root.len() != spec.dim {
        return Err(SolveError::IllFormed("root has the wrong dimension"));
    }
    if spec.eval_order0(root).iter().any(|r| !r.is_zero()) {
        return Err(SolveError::NotARoot);
    }
    let jacobian = spec.jacobian0(root);
    let det = linalg::determinant(&jacobian);
    if det.is_zero() {
        return Err(SolveError::SingularJacobian);
    }
    let inverse = linalg::inverse(&jacobian)?;
    Ok(Order0 { root: root.to_vec(), jacobian, det, inverse })
}

impl IterationProblem for SystemProblem {
    type Coeff = Rational;
    type Linear = Matrix;

    fn gauge(&self) -> Gauge {
        self.gauge
    }

    fn coeff_ctx(&self) {}

    fn residual(&self, z: &[GaugeSeries<Rational>]) -> Result<Vec<GaugeSeries<Rational>>, SolveError> {
        let mut out = Vec::with_capacity(self.dim);
        for eq in &self.equations {
            let mut acc = GaugeSeries::zero(self.gauge, ());
            for t in eq {
                let mut term = GaugeSeries::monomial(self.gauge, t.coeff.clone(), t.gauge_power as usize);
                for (&e, zi) in t.exponents.iter().zip(z) {
                    if e > 0 {
                        term = term.mul(&zi.pow(e)?)?;
                    }
                }
                acc = acc.add(&term)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    fn linearize(&self, z0: &[Rational]) -> Result<Matrix, SolveError> {
        Ok(solve_system_order0(self, z0)?.jacobian)
    }

    fn solve_linear(&self, a: &Matrix, rhs: &[Rational]) -> Result<Vec<Rational>, SolveError> {
        linalg::solve(a, rhs).map_err(|_| SolveError::SingularJacobian)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::solve::{perturb_iterate, problems};

    #[test]
    fn order0_at_three_four() {
        let p = problems::circle_hyperbola();
        let o = solve_system_order0(&p, &[rat(3, 5), rat(4, 5)]).unwrap();
        assert_eq!(o.det, int(-14));
        assert_eq!(o.inverse[0], vec![rat(-15, 14), rat(4, 35)]);
        assert_eq!(o.inverse[1], vec![rat(10, 7), rat(-3, 35)]);
        assert!(solve_system_order0(&p, &[rat(4, 5), rat(3, 5)]).is_ok());
        assert_eq!(solve_system_order0(&p, &[int(0), int(0)]).unwrap_err(), SolveError::NotARoot);
    }

    #[test]
    fn first_correction() {
        let p = problems::circle_hyperbola();
        let sol = perturb_iterate(&p, &[rat(3, 5), rat(4, 5)], 1).unwrap();
        assert_eq!(sol.series[0].coeff(1).unwrap(), rat(-114, 175));
        assert_eq!(sol.series[1].coeff(1).unwrap(), rat(138, 175));
    }
}
