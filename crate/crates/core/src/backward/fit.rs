use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::arith::{int, Coordinates, CycloElement, Poly, Rational, Ring, TrigBasis, TrigKey, TrigSeries};
use crate::linalg::{self, LinalgError};
use crate::series::{GaugeSeries, LaurentSeries};

use super::{BackwardError, SlotCorrection, SlottedEquation};

/// multiplier·μ^power added to one slot per unit of the parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionTerm<C> {
    pub slot: usize,
    pub power: u32,
    pub multiplier: C,
}

/// One rational parameter; several terms make a correlated perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction<C> {
    pub label: String,
    pub terms: Vec<DirectionTerm<C>>,
}

/// Coordinates of [μ^order]residual to cancel; `None` means all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct FitCondition<K> {
    pub order: i64,
    pub keys: Option<Vec<K>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BEFitSpec<C: Coordinates> {
    pub directions: Vec<Direction<C>>,
    pub conditions: Vec<FitCondition<C::Key>>,
}

#[derive(Debug, Clone)]
pub struct BackwardErrorResult<E: SlottedEquation> {
    /// One value per direction.
    pub parameters: Vec<Rational>,
    /// Parameters folded into per-slot, per-power coefficients.
    pub corrections: Vec<SlotCorrection<E::Coeff>>,
    pub modified: E,
    pub original_residual: LaurentSeries<E::Coeff>,
    /// Residual of the modified equation, by fresh substitution.
    pub new_residual: LaurentSeries<E::Coeff>,
    /// Leading order of the new residual, `None` if it vanishes.
    pub improvement_order: Option<i64>,
}

impl<E: SlottedEquation> BackwardErrorResult<E> {
    /// Total correction on a slot as a series in the gauge.
    pub fn slot_correction(&self, slot: usize) -> Vec<(u32, E::Coeff)> {
        self.corrections.iter().filter(|c| c.slot == slot).map(|c| (c.power, c.coeff.clone())).collect()
    }
}

/// a_j·μʲ on the u⁵ slot for j = 10..15, each a_j a free element of
/// ℚ[α]/(α⁴−1), cancelling the residual of the rescaled quintic at μ⁵..μ¹⁰.
pub fn quintic_fit() -> BEFitSpec<CycloElement> {
    let mut directions = Vec::new();
    for j in 10..=15u32 {
        for m in 0..4 {
            directions.push(Direction {
                label: format!("a{j}[alpha^{m}]"),
                terms: vec![DirectionTerm { slot: 5, power: j, multiplier: CycloElement::alpha_pow(4, m) }],
            });
        }
    }
    let conditions = (5..=10).map(|order| FitCondition { order, keys: None }).collect();
    BEFitSpec { directions, conditions }
}

/// ε²p(τ) on θ″ with 2ε²p′(τ) on θ′, p quadratic; cancels the ε²τᵏcos τ
/// terms for k = 0, 1, 2.
pub fn pendulum_fit() -> BEFitSpec<TrigSeries> {
    let tau = |k: u32, c: i64| TrigSeries::from_poly(Poly::monomial("tau", int(c), k));
    let dir = |label: &str, terms: Vec<(usize, TrigSeries)>| Direction {
        label: label.into(),
        terms: terms.into_iter().map(|(slot, m)| DirectionTerm { slot, power: 2, multiplier: m }).collect(),
    };
    BEFitSpec {
        directions: vec![
            dir("p0", vec![(2, tau(0, 1))]),
            dir("p1", vec![(2, tau(1, 1)), (1, tau(0, 2))]),
            dir("p2", vec![(2, tau(2, 1)), (1, tau(1, 4))]),
        ],
        conditions: vec![FitCondition {
            order: 2,
            keys: Some((0..3).map(|power| TrigKey { harmonic: 1, basis: TrigBasis::Cos, power }).collect()),
        }],
    }
}

fn coords_at<C: Coordinates>(s: &LaurentSeries<C>, order: i64) -> Result<BTreeMap<C::Key, Rational>, BackwardError> {
    Ok(s.coeff(order)?.coordinates())
}

/// Solves for the direction parameters that cancel the listed residual
/// coordinates, taking conditions in increasing order and checking
/// consistency as each order is added.
pub fn optimal_backward_error<E: SlottedEquation>(
    problem: &E,
    candidate: &E::Candidate,
    fit: &BEFitSpec<E::Coeff>,
) -> Result<BackwardErrorResult<E>, BackwardError> {
    let ctx = problem.coeff_ctx();
    let base = problem.residual(candidate)?;
    let g = base.series().gauge();
    let mut slot_cache: BTreeMap<usize, LaurentSeries<E::Coeff>> = BTreeMap::new();
    let mut effects = Vec::with_capacity(fit.directions.len());
    for d in &fit.directions {
        let mut acc = LaurentSeries::from_series(GaugeSeries::zero(g, ctx.clone()));
        for t in &d.terms {
            if !slot_cache.contains_key(&t.slot) {
                slot_cache.insert(t.slot, problem.slot_value(t.slot, candidate)?);
            }
            let sv = &slot_cache[&t.slot];
            let m = LaurentSeries::new(t.power as i64, GaugeSeries::constant(g, t.multiplier.clone()));
            acc = acc.add(&m.mul(sv)?)?;
        }
        effects.push(acc);
    }

    let unknowns = fit.directions.len();
    let mut conditions = fit.conditions.clone();
    conditions.sort_by_key(|c| c.order);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut params = vec![Rational::zero(); unknowns];
    for cond in &conditions {
        let b = coords_at(&base, cond.order)?;
        let cols = effects.iter().map(|e| coords_at(e, cond.order)).collect::<Result<Vec<_>, _>>()?;
        let keys: BTreeSet<<E::Coeff as Coordinates>::Key> = match &cond.keys {
            Some(k) => k.iter().cloned().collect(),
            None => b.keys().chain(cols.iter().flat_map(|c| c.keys())).cloned().collect(),
        };
        for key in keys {
            rows.push(cols.iter().map(|c| c.get(&key).cloned().unwrap_or_else(Rational::zero)).collect());
            rhs.push(-b.get(&key).cloned().unwrap_or_else(Rational::zero));
        }
        params = match linalg::solve_consistent(&rows, &rhs, unknowns) {
            Ok(x) => x,
            Err(LinalgError::Inconsistent) => return Err(BackwardError::UnsolvableFit { order: cond.order }),
            Err(e) => return Err(e.into()),
        };
    }

    let mut folded: BTreeMap<(usize, u32), E::Coeff> = BTreeMap::new();
    for (d, x) in fit.directions.iter().zip(&params) {
        if x.is_zero() {
            continue;
        }
        for t in &d.terms {
            let v = t.multiplier.scale(x);
            folded
                .entry((t.slot, t.power))
                .and_modify(|c| *c = c.plus(&v))
                .or_insert(v);
        }
    }
    let corrections: Vec<_> = folded
        .into_iter()
        .filter(|(_, c)| !c.vanishes())
        .map(|((slot, power), coeff)| SlotCorrection { slot, power, coeff })
        .collect();
    let modified = problem.perturbed(&corrections);
    let new_residual = modified.residual(candidate)?;
    let improvement_order = new_residual.leading().map(|(k, _)| k);
    let before = base.leading().map(|(k, _)| k);
    let all_full = !conditions.is_empty() && conditions.iter().all(|c| c.keys.is_none());
    if all_full {
        if let (Some(b), Some(a)) = (before, improvement_order) {
            if a <= b {
                return Err(BackwardError::NoImprovement);
            }
        }
    }
    Ok(BackwardErrorResult {
        parameters: params,
        corrections,
        modified,
        original_residual: base,
        new_residual,
        improvement_order,
    })
}
