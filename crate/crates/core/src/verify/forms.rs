
use crate::arith::{Poly, Rational, Symbol, TrigSeries};
use crate::asymptotics::hankel_coeff;
use crate::series::GaugeSeries;
use crate::solve::{LinearOde, Renormalization};

use super::expr::Expr;

pub fn poly_to_expr(p: &Poly<Rational>, x: &Expr) -> Expr {
    p.terms().fold(Expr::int(0), |acc, (d, c)| acc + Expr::constant(c.clone()) * x.powi(d as i64))
}

/// Σ p_h(t)cos(ht) + q_h(t)sin(ht).
pub fn trig_to_expr(s: &TrigSeries, t: &Expr) -> Expr {
    let mut acc = Expr::int(0);
    for (h, p, q) in s.terms() {
        let arg = Expr::int(h as i64) * t.clone();
        if !p.is_zero() {
            acc = acc + poly_to_expr(p, t) * arg.cos();
        }
        if !q.is_zero() {
            acc = acc + poly_to_expr(q, t) * arg.sin();
        }
    }
    acc
}

/// Σ εᵏ·[εᵏ]s over the known coefficients.
pub fn series_to_expr(s: &GaugeSeries<TrigSeries>, eps: &Expr, t: &Expr) -> Expr {
    s.coeffs()
        .iter()
        .enumerate()
        .fold(Expr::int(0), |acc, (k, c)| acc + eps.powi(k as i64) * trig_to_expr(c, t))
}

/// Σ_j c_j(ε, t)·dʲz/dtʲ.
pub fn linear_ode_expr(ode: &LinearOde, z: &Expr, time: Symbol, eps: &Expr) -> Expr {
    let t = Expr::var(time);
    let mut d = z.clone();
    let mut acc = Expr::int(0);
    for j in 0..3 {
        acc = acc + series_to_expr(ode.coeff(j), eps, &t) * d.clone();
        d = d.diff(time);
    }
    acc
}

impl Renormalization {
    /// e^{Re L}·cos(τ + Im L), optionally without the τ-free phase.
    pub fn closed_form(&self, eps: &Expr, tau: &Expr, drop_constant_phase: bool) -> Expr {
        let mut re = Expr::int(0);
        let mut im = Expr::int(0);
        for k in 1..self.real.len() {
            let ek = eps.powi(k as i64);
            re = re + ek.clone() * poly_to_expr(&self.real[k], tau);
            let mut phase = self.imag[k].clone();
            if drop_constant_phase {
                phase.add_term(0, &-self.constant_phase[k].clone());
            }
            im = im + ek * poly_to_expr(&phase, tau);
        }
        re.exp() * (tau.clone() + im).cos()
    }
}

/// Hankel partial sum through a_k as an expression in x.
pub fn hankel_expr(k: usize, x: &Expr) -> Expr {
    let (mut a, mut b) = (Expr::int(0), Expr::int(0));
    for j in 0..=k {
        let t = Expr::constant(hankel_coeff(j)) * x.powi(-(j as i64));
        if j % 2 == 0 {
            a = a + t;
        } else {
            b = b + t;
        }
    }
    let pi = Expr::float(std::f64::consts::PI);
    let chi = x.clone() - pi.clone() / Expr::int(4);
    (Expr::int(2) / (pi * x.clone())).sqrt() * (a * chi.cos() - b * chi.sin())
}

/// x²y″ + xy′ + x²y.
pub fn bessel0_operator(y: &Expr, var: Symbol) -> Expr {
    let x = Expr::var(var);
    let d1 = y.diff(var);
    let d2 = d1.diff(var);
    x.powi(2) * d2 + x.clone() * d1 + x.powi(2) * y.clone()
}



#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{hankel_partial_sum, hankel_residual};
    use crate::solve::{pendulum_regular, renormalize};
    use crate::verify::tape::eval_expr;

    #[test]
    fn hankel_residual_formula() {
        let x = Expr::var("x");
        for k in 0..=4 {
            let y = hankel_expr(k, &x);
            let r = bessel0_operator(&y, "x");
            for i in 0..20 {
                let xv = 2.0 + 8.0 * i as f64 / 19.0;
                let yv: f64 = eval_expr(&y, &[("x", xv)]).unwrap();
                assert!((yv - hankel_partial_sum(xv, k)).abs() < 1e-14);
                let rv: f64 = eval_expr(&r, &[("x", xv)]).unwrap();
                let want = hankel_residual(xv, k);
                assert!((rv - want).abs() <= 1e-8 * want.abs().max(1e-3), "k={k} x={xv}: {rv} vs {want}");
            }
        }
    }

    #[test]
    fn renormalized_closed_form() {
        let reg = pendulum_regular(1).unwrap();
        let r = renormalize(&reg, 1).unwrap();
        let (eps, tau) = (Expr::var("eps"), Expr::var("tau"));
        let z = r.closed_form(&eps, &tau, true);
        let v: f64 = eval_expr(&z, &[("eps", 0.1), ("tau", 2.0)]).unwrap();
        let want = (-0.075f64 * 2.0).exp() * (2.0 - 0.1f64).cos();
        assert!((v - want).abs() < 1e-14);
        // with the phase kept it agrees with the regular series to O(ε²)
        let zk = r.closed_form(&eps, &tau, false);
        let zr = series_to_expr(reg.scalar(), &eps, &tau);
        let a: f64 = eval_expr(&zk, &[("eps", 0.1), ("tau", 2.0)]).unwrap();
        let b: f64 = eval_expr(&zr, &[("eps", 0.1), ("tau", 2.0)]).unwrap();
        assert!((a - b).abs() < 0.1f64.powi(2) * 4.0);
    }
}
