use crate::arith::{int, rat, Poly, Rational, Ring, TrigSeries};

type Amp = Poly<Rational>;

/// Exact solution of y″ + y = forcing with y(0) = y0, y′(0) = yprime0.
///
/// Per harmonic h the particular solution is P(t)cos ht + Q(t)sin ht with
///   (1−h²)P + P″ + 2hQ′ = p,   (1−h²)Q + Q″ − 2hP′ = q.
/// Off resonance the operator is c·I + N with N nilpotent, so a finite
/// Neumann series inverts it; at h = 1 the system is integrated directly.
pub fn solve_oscillator(forcing: &TrigSeries, y0: &Rational, yprime0: &Rational) -> TrigSeries {
    let sym = forcing.symbol();
    let mut y = TrigSeries::zero(sym);
    for (h, p, q) in forcing.terms() {
        let (pp, qq) = if h == 1 { resonant(p, q) } else { off_resonance(h, p, q) };
        y = y.plus(&amp_term(sym, h, &pp, &qq));
    }
    let dy = y.derivative();
    let c = y0 - y.eval_at_zero();
    let s = yprime0 - dy.eval_at_zero();
    y.plus(&TrigSeries::cos_term(sym, 1, c, 0)).plus(&TrigSeries::sin_term(sym, 1, s, 0))
}

fn amp_term(sym: crate::arith::Symbol, h: u32, p: &Amp, q: &Amp) -> TrigSeries {
    let mut out = TrigSeries::zero(sym);
    for (d, c) in p.terms() {
        out = out.plus(&TrigSeries::cos_term(sym, h, c.clone(), d));
    }
    for (d, c) in q.terms() {
        out = out.plus(&TrigSeries::sin_term(sym, h, c.clone(), d));
    }
    out
}

fn off_resonance(h: u32, p: &Amp, q: &Amp) -> (Amp, Amp) {
    let hh = int(h as i64);
    let c = int(1) - &hh * &hh;
    let cinv = c.recip();
    let two_h = &hh * int(2);
    // N(P, Q) = (P″ + 2hQ′, Q″ − 2hP′)
    let apply_n = |a: &Amp, b: &Amp| -> (Amp, Amp) {
        let na = a.derivative().derivative().plus(&b.derivative().scale(&two_h));
        let nb = b.derivative().derivative().minus(&a.derivative().scale(&two_h));
        (na, nb)
    };
    let (mut ta, mut tb) = (p.scale(&cinv), q.scale(&cinv));
    let (mut xa, mut xb) = (ta.clone(), tb.clone());
    let neg_cinv = -cinv;
    while !(ta.is_zero() && tb.is_zero()) {
        let (na, nb) = apply_n(&ta, &tb);
        ta = na.scale(&neg_cinv);
        tb = nb.scale(&neg_cinv);
        xa = xa.plus(&ta);
        xb = xb.plus(&tb);
    }
    if h == 0 {
        xb = Poly::zero(p.symbol(), ());
    }
    (xa, xb)
}

/// P″ + 2Q′ = p, Q″ − 2P′ = q, iterated from P = Q = 0 with
/// P = ∫(Q″ − q)/2 and Q = ∫(p − P″)/2; each sweep fixes one more degree.
fn resonant(p: &Amp, q: &Amp) -> (Amp, Amp) {
    let half = rat(1, 2);
    let sym = p.symbol();
    let (mut pa, mut qa) = (Poly::zero(sym, ()), Poly::zero(sym, ()));
    let bound = p.degree().max(q.degree()).map_or(0, |d| d as usize) + 3;
    for _ in 0..2 * bound {
        let np = qa.derivative().derivative().minus(q).scale(&half).integral();
        let nq = p.minus(&np.derivative().derivative()).scale(&half).integral();
        if np == pa && nq == qa {
            break;
        }
        pa = np;
        qa = nq;
    }
    (pa, qa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(f: &TrigSeries, y0: &Rational, yp0: &Rational) -> TrigSeries {
        let y = solve_oscillator(f, y0, yp0);
        let lhs = y.derivative().derivative().plus(&y);
        assert_eq!(lhs, *f);
        assert_eq!(&y.eval_at_zero(), y0);
        assert_eq!(&y.derivative().eval_at_zero(), yp0);
        y
    }

    #[test]
    fn free_oscillation() {
        let y = check(&TrigSeries::zero("t"), &int(1), &int(0));
        assert_eq!(y, TrigSeries::cos_term("t", 1, int(1), 0));
    }

    #[test]
    fn duffing_first_order_forcing() {
        let f = TrigSeries::cos_term("t", 1, rat(-3, 4), 0).plus(&TrigSeries::cos_term("t", 3, rat(-1, 4), 0));
        let y = check(&f, &int(0), &int(0));
        let want = TrigSeries::cos_term("t", 3, rat(1, 32), 0)
            .plus(&TrigSeries::cos_term("t", 1, rat(-1, 32), 0))
            .plus(&TrigSeries::sin_term("t", 1, rat(-3, 8), 1));
        assert_eq!(y, want);
    }

    #[test]
    fn resonant_sine() {
        let y = check(&TrigSeries::sin_term("t", 1, int(1), 0), &int(0), &int(0));
        let want = TrigSeries::cos_term("t", 1, rat(-1, 2), 1).plus(&TrigSeries::sin_term("t", 1, rat(1, 2), 0));
        assert_eq!(y, want);
    }

    #[test]
    fn polynomial_amplitudes() {
        let f = TrigSeries::cos_term("t", 1, int(3), 2)
            .plus(&TrigSeries::sin_term("t", 2, int(-5), 3))
            .plus(&TrigSeries::cos_term("t", 0, int(7), 1));
        check(&f, &rat(1, 3), &int(2));
    }
}
