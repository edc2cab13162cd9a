use num_traits::Zero;

use crate::arith::{CycloElement, Rational};
use crate::series::{GaugeSeries, LaurentSeries};
use crate::solve::AlgebraicProblem;

use super::BackwardError;

/// leading·Π(x − ζᵢ) against the original polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousResult {
    /// Coefficient of xʲ in the product, j = 0..=number of branches.
    pub product: Vec<LaurentSeries<Rational>>,
    /// original − product per power of x.
    pub deviation: Vec<LaurentSeries<Rational>>,
    /// Lowest gauge order present in any deviation coefficient.
    pub deviation_order: Option<i64>,
}

impl SimultaneousResult {
    /// |deviation| relative to the largest original coefficient of the same
    /// power of x, evaluated at gauge value `mu`.
    pub fn relative_deviation(&self, original: &AlgebraicProblem<Rational>, mu: f64) -> Vec<f64> {
        let eval = |s: &LaurentSeries<Rational>| -> f64 {
            s.terms().iter().map(|(k, c)| crate::arith::rat_to_f64(c) * mu.powi(*k as i32)).sum()
        };
        self.deviation
            .iter()
            .enumerate()
            .map(|(j, d)| {
                let orig = original.coeff(j);
                let scale = orig.terms().map(|(k, c)| (crate::arith::rat_to_f64(c) * mu.powi(k as i32)).abs()).fold(0.0, f64::max);
                let dev = eval(d).abs();
                if scale > 0.0 {
                    dev / scale
                } else {
                    dev
                }
            })
            .collect()
    }
}

/// Rational value of an element of ℚ[α]/(αⁿ−1) in ℚ(ζₙ).
fn rational_part(c: &CycloElement) -> Option<Rational> {
    let v = c.project_cyclotomic();
    if v[1..].iter().all(Zero::is_zero) {
        Some(v[0].clone())
    } else {
        None
    }
}

/// Expands leading·Π(x − ζᵢ) exactly, maps each coefficient into ℚ(ζₙ)
/// (where conjugate branches combine to rational values), and compares it
/// with the problem's own coefficients.
pub fn simultaneous_backward_error(
    branches: &[LaurentSeries<CycloElement>],
    leading: &LaurentSeries<CycloElement>,
    original: &AlgebraicProblem<Rational>,
) -> Result<SimultaneousResult, BackwardError> {
    let first = branches.first().ok_or(BackwardError::NoBranches)?;
    let g = first.series().gauge();
    let n = *first.series().ring_ctx();
    if branches.iter().chain([leading]).any(|b| b.series().gauge() != g || *b.series().ring_ctx() != n)
        || original.gauge() != g
    {
        return Err(BackwardError::InconsistentGauge);
    }
    let zero = LaurentSeries::from_series(GaugeSeries::zero(g, n));
    let mut poly = vec![leading.clone()];
    for z in branches {
        let mut next = vec![zero.clone(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] = next[j + 1].add(c)?;
            next[j] = next[j].sub(&c.mul(z)?)?;
        }
        poly = next;
    }
    let mut product = Vec::with_capacity(poly.len());
    for (power, c) in poly.iter().enumerate() {
        let mut coeffs = Vec::new();
        let v = c.valuation();
        for (i, e) in c.series().coeffs().iter().enumerate() {
            let r = rational_part(e).ok_or(BackwardError::NonRationalProduct { power, order: v + i as i64 })?;
            coeffs.push(r);
        }
        let s = match c.series().order() {
            Some(o) => GaugeSeries::truncated(g, (), coeffs, o),
            None => GaugeSeries::exact(g, (), coeffs),
        };
        product.push(LaurentSeries::new(v, s));
    }
    let mut deviation = Vec::with_capacity(product.len());
    for (j, p) in product.iter().enumerate() {
        let orig = LaurentSeries::from_series(GaugeSeries::from_poly(g, &original.coeff(j)));
        deviation.push(orig.sub(p)?);
    }
    for j in product.len()..=original.degree() {
        deviation.push(LaurentSeries::from_series(GaugeSeries::from_poly(g, &original.coeff(j))));
    }
    let deviation_order = deviation.iter().filter_map(|d| d.leading().map(|(k, _)| k)).min();
    Ok(SimultaneousResult { product, deviation, deviation_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::series::Gauge;
    use crate::solve::{perturb_iterate, problems, solve_puiseux};

    fn cyc(v: Rational) -> CycloElement {
        CycloElement::constant(4, v)
    }

    #[test]
    fn exact_factorization() {
        // x² − 1 over the gauge μ with roots ±1
        let g = Gauge::new("mu", 1);
        let p = AlgebraicProblem::from_terms(g, &[(2, 0, int(1)), (0, 0, int(-1))]).unwrap();
        let root = |v: i64| LaurentSeries::from_series(GaugeSeries::constant(g, cyc(int(v))));
        let lead = LaurentSeries::from_series(GaugeSeries::constant(g, cyc(int(1))));
        let r = simultaneous_backward_error(&[root(1), root(-1)], &lead, &p).unwrap();
        assert!(r.deviation.iter().all(|d| d.leading().is_none()));
        assert_eq!(r.deviation_order, None);
    }

    #[test]
    fn quintic_all_roots() {
        let p = problems::quintic_singular();
        let refined = p.refine_gauge(4);
        let b = solve_puiseux(&p.to_cyclo(4), 4, -1, CycloElement::alpha(4), 5).unwrap();
        let mut branches: Vec<_> = (0..4).map(|k| b.conjugate(k)).collect();
        let reg = perturb_iterate(&p, &[int(-1)], 2).unwrap();
        let reg = reg.scalar().refine(4).unwrap().renamed("mu").map(4, |c| cyc(c.clone()));
        branches.push(LaurentSeries::from_series(reg));
        let g = refined.gauge();
        let lead = LaurentSeries::new(4, GaugeSeries::constant(g, cyc(int(1))));
        let r = simultaneous_backward_error(&branches, &lead, &refined).unwrap();
        assert_eq!(r.product[4].coeff(12).unwrap(), int(5));
        assert_eq!(r.deviation[4].coeff(12).unwrap(), int(-5));
        assert_eq!(r.deviation[3].coeff(8).unwrap(), rat(23205, 16384));
        assert_eq!(r.deviation[3].coeff(12).unwrap(), rat(45, 8));
        assert_eq!(r.deviation[0].coeff(8).unwrap(), rat(8453745, 2097152));
        assert_eq!(r.deviation_order, Some(8));
        assert!(r.deviation[5].leading().is_none());
        assert!(r.deviation[1].leading().is_none_or(|(k, _)| k >= 8));
    }
}
