use crate::arith::{int, Coordinates, Rational, Ring, TrigSeries};
use crate::linalg::{self, LinalgError};
use crate::series::{Gauge, GaugeSeries};

use super::odes::{series_diff, OdeSeries};
use super::{solve_oscillator, SolveError};

const TAU: &str = "tau";

/// y(τ) with τ = ωt solving ω²y″ + y + εy³ = 0, y(0) = 1, y′(0) = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LindstedtSolution {
    /// Coefficients are trigonometric polynomials in τ.
    pub solution: OdeSeries,
    pub omega: GaugeSeries<Rational>,
    /// Exact residual of the t-equation, written in τ.
    pub residual: OdeSeries,
}

fn residual(y: &OdeSeries, omega: &GaugeSeries<Rational>) -> Result<OdeSeries, SolveError> {
    let w2 = omega.pow(2)?.map(TAU, |c| TrigSeries::constant(TAU, c.clone()));
    let d2 = series_diff(&series_diff(y));
    Ok(w2.mul(&d2)?.add(y)?.add(&y.pow(3)?.shift_up(1))?)
}

pub fn solve_lindstedt(n: usize) -> Result<LindstedtSolution, SolveError> {
    let g = Gauge::EPS;
    let mut ys = vec![TrigSeries::cos_term(TAU, 1, int(1), 0)];
    let mut ws = vec![int(1)];
    let zero = int(0);
    for k in 1..=n {
        let y = GaugeSeries::exact(g, TAU, ys.clone());
        let at = |w: i64| -> Result<TrigSeries, SolveError> {
            let mut wk = ws.clone();
            wk.push(int(w));
            Ok(residual(&y, &GaugeSeries::exact(g, (), wk))?.coeff(k)?)
        };
        let r0 = at(0)?;
        let d = at(1)?.minus(&r0);
        // harmonic-1 coordinates of r0 + ω_k·d must all vanish
        let (c0, cd) = (r0.coordinates(), d.coordinates());
        let keys: Vec<_> = c0.keys().chain(cd.keys()).filter(|key| key.harmonic == 1).cloned().collect();
        let rows: Vec<Vec<Rational>> = keys.iter().map(|key| vec![cd.get(key).cloned().unwrap_or_else(|| int(0))]).collect();
        let rhs: Vec<Rational> = keys.iter().map(|key| -c0.get(key).cloned().unwrap_or_else(|| int(0))).collect();
        let wk = match linalg::solve_consistent(&rows, &rhs, 1) {
            Ok(v) => v[0].clone(),
            Err(LinalgError::Inconsistent) => return Err(SolveError::InconsistentSecularity { order: k }),
            Err(e) => return Err(e.into()),
        };
        let forcing = r0.plus(&d.scale(&wk)).negate();
        ys.push(solve_oscillator(&forcing, &zero, &zero));
        ws.push(wk);
    }
    let solution = GaugeSeries::exact(g, TAU, ys);
    let omega = GaugeSeries::exact(g, (), ws);
    let residual = residual(&solution, &omega)?;
    for k in 0..=n {
        if !residual.coeff(k)?.vanishes() {
            return Err(SolveError::OrderGuarantee { order: k });
        }
    }
    Ok(LindstedtSolution { solution, omega, residual })
}

impl LindstedtSolution {
    /// y(ωt) re-expanded in ε as a series in t, known through ε^order.
    /// Secular terms reappear here from expanding cos((1+δ)ht).
    pub fn in_t(&self, order: usize) -> Result<OdeSeries, SolveError> {
        let g = self.omega.gauge();
        let t = "t";
        let delta = self.omega.sub(&GaugeSeries::one(g, ()))?.truncate(order);
        let t_poly = crate::arith::Poly::var(t, ());
        let delta_t = delta.map(t, |c| TrigSeries::from_poly(t_poly.scale(c)));
        let mut out = GaugeSeries::truncated(g, t, vec![], order);
        for (k, yk) in self.solution.coeffs().iter().enumerate().take(order + 1) {
            let mut term = GaugeSeries::truncated(g, t, vec![], order);
            for (h, p, q) in yk.terms() {
                let (a, b) = (p.coeff(0), q.coeff(0));
                let x = delta_t.scale(&int(h as i64));
                let (cx, sx) = cos_sin(&x, order)?;
                let cos_h = GaugeSeries::constant(g, TrigSeries::cos_term(t, h, int(1), 0));
                let sin_h = GaugeSeries::constant(g, TrigSeries::sin_term(t, h, int(1), 0));
                // cos(h(1+δ)t) = cos ht·cos hδt − sin ht·sin hδt, sin likewise
                let c = cos_h.mul(&cx)?.sub(&sin_h.mul(&sx)?)?;
                let s = sin_h.mul(&cx)?.add(&cos_h.mul(&sx)?)?;
                term = term.add(&c.scale(&a))?.add(&s.scale(&b))?;
            }
            out = out.add(&term.shift_up(k).truncate(order))?;
        }
        Ok(out)
    }
}

/// cos x and sin x for a series x with zero constant term.
fn cos_sin(x: &OdeSeries, order: usize) -> Result<(OdeSeries, OdeSeries), SolveError> {
    let g = x.gauge();
    let sym = *x.ring_ctx();
    let mut c = GaugeSeries::truncated(g, sym, vec![TrigSeries::constant(sym, int(1))], order);
    let mut s = GaugeSeries::truncated(g, sym, vec![], order);
    let mut pow = GaugeSeries::truncated(g, sym, vec![TrigSeries::constant(sym, int(1))], order);
    let mut fact = int(1);
    for m in 1..=order {
        pow = pow.mul(x)?.truncate(order);
        fact *= int(m as i64);
        let term = pow.scale(&fact.recip());
        match m % 4 {
            1 => s = s.add(&term)?,
            2 => c = c.sub(&term)?,
            3 => s = s.sub(&term)?,
            _ => c = c.add(&term)?,
        }
    }
    Ok((c, s))
}
