//! The algebraic test problems used throughout: three quintics and the
//! circle/hyperbola system.

use crate::arith::{int, Rational};
use crate::series::Gauge;

use super::{AlgebraicProblem, PolyTerm, SystemProblem};

fn build(terms: &[(usize, u32, i64)]) -> AlgebraicProblem<Rational> {
    let terms: Vec<_> = terms.iter().map(|&(j, k, c)| (j, k, int(c))).collect();
    AlgebraicProblem::from_terms(Gauge::EPS, &terms).expect("well-formed quintic")
}

/// u⁵ − εu − 1.
pub fn quintic_regular() -> AlgebraicProblem<Rational> {
    build(&[(5, 0, 1), (1, 1, -1), (0, 0, -1)])
}

/// εu⁵ − u − 1.
pub fn quintic_singular() -> AlgebraicProblem<Rational> {
    build(&[(5, 1, 1), (1, 0, -1), (0, 0, -1)])
}

/// u⁵ − ε(u + 1).
pub fn quintic_puiseux() -> AlgebraicProblem<Rational> {
    build(&[(5, 0, 1), (1, 1, -1), (0, 1, -1)])
}

/// v₁² + v₂² − 1 − εv₁v₂ = 0, 25v₁v₂ − 12 + 2εv₁ = 0.
pub fn circle_hyperbola() -> SystemProblem {
    let t = |e: [u32; 2], k: u32, c: i64| PolyTerm::new(vec![e[0], e[1]], k, int(c));
    SystemProblem::new(
        Gauge::EPS,
        2,
        vec![
            vec![t([2, 0], 0, 1), t([0, 2], 0, 1), t([0, 0], 0, -1), t([1, 1], 1, -1)],
            vec![t([1, 1], 0, 25), t([0, 0], 0, -12), t([1, 0], 1, 2)],
        ],
    )
    .expect("square system")
}
