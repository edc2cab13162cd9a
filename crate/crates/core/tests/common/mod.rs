//! Property suites shared by the `properties` test target and the acceptance
//! runner. Each suite drives a proptest runner at a fixed case count.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use perturb_core::arith::{cyclo_inverse, int, rat, trig_mul, CycloElement, Poly, Rational, Ring, TrigSeries};
use perturb_core::backward::{optimal_backward_error, pendulum_fit, residual_exact, SlottedEquation};
use perturb_core::series::{Gauge, GaugeSeries, LaurentSeries};
use perturb_core::solve::{
    duffing_regular, pendulum_equation, pendulum_regular, perturb_iterate, problems, renormalize, solve_lindstedt,
    solve_oscillator, solve_puiseux, AlgebraicProblem,
};
use perturb_core::verify::{eval_expr, lambert_w, morrison_audit, pendulum_audit, Expr, PendulumForm};

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("ring axioms: rationals", ring_rational),
    ("ring axioms: cyclotomic n=2,4,5", ring_cyclo),
    ("ring axioms: polynomials", ring_poly),
    ("ring axioms: trig series", ring_trig),
    ("cyclotomic inverse", cyclo_inverses),
    ("trig product numeric consistency", trig_numeric_product),
    ("trig derivative finite differences", trig_numeric_diff),
    ("series truncation bookkeeping", series_bookkeeping),
    ("series div/exp/log round trips", series_round_trips),
    ("gauge refinement preserves values", gauge_refinement),
    ("oscillator re-substitution", oscillator_resubstitution),
    ("residual order guarantee", order_guarantee),
    ("random regular problems keep the order guarantee", random_regular_order),
    ("duffing secular growth degree", duffing_degree),
    ("lindstedt non-secularity", lindstedt_non_secular),
    ("backward error homomorphism", backward_homomorphism),
    ("expression derivatives vs finite differences", expr_derivatives),
    ("lambert w identity", lambert_identity),
    ("residual report consistency", report_consistency),
    ("morrison residual scales like eps^3", morrison_scaling),
];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn small_rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

pub fn cyclo(n: usize) -> impl Strategy<Value = CycloElement> {
    prop::collection::vec(small_rat(), n).prop_map(move |c| CycloElement::new(n, c))
}

pub fn poly() -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec((0u32..=4, small_rat()), 0..=5).prop_map(|t| Poly::from_terms("t", (), t))
}

/// Trig series with harmonics ≤ `hmax` and amplitude degree ≤ `pmax`.
pub fn trig(hmax: u32, pmax: u32, nterms: usize) -> impl Strategy<Value = TrigSeries> {
    prop::collection::vec((0..=hmax, any::<bool>(), 0..=pmax, small_rat()), 0..=nterms).prop_map(|terms| {
        terms.into_iter().fold(TrigSeries::zero("t"), |acc, (h, cos, p, c)| {
            let t = if cos { TrigSeries::cos_term("t", h, c, p) } else { TrigSeries::sin_term("t", h, c, p) };
            acc.plus(&t)
        })
    })
}

fn axioms<R: Ring>(a: &R, b: &R, c: &R) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.times(b).times(c), a.times(&b.times(c)));
    prop_assert_eq!(a.times(&b.plus(c)), a.times(b).plus(&a.times(c)));
    prop_assert_eq!(a.times(b), b.times(a));
    prop_assert_eq!(a.plus(&a.negate()), R::zero_of(&a.ctx()));
    prop_assert_eq!(a.times(&R::one_of(&a.ctx())), a.clone());
    Ok(())
}

fn ring_rational() -> Result<(), String> {
    run(1000, (small_rat(), small_rat(), small_rat()), |(a, b, c)| axioms(&a, &b, &c))
}

fn ring_cyclo() -> Result<(), String> {
    let s = prop_oneof![Just(2usize), Just(4), Just(5)].prop_flat_map(|n| (cyclo(n), cyclo(n), cyclo(n)));
    run(1000, s, |(a, b, c)| axioms(&a, &b, &c))
}

fn ring_poly() -> Result<(), String> {
    run(1000, (poly(), poly(), poly()), |(a, b, c)| axioms(&a, &b, &c))
}

fn ring_trig() -> Result<(), String> {
    run(1000, (trig(4, 2, 4), trig(4, 2, 4), trig(4, 2, 4)), |(a, b, c)| axioms(&a, &b, &c))
}

fn cyclo_inverses() -> Result<(), String> {
    let s = prop_oneof![Just(2usize), Just(4), Just(5)]
        .prop_flat_map(cyclo)
        .prop_filter("unit", |a| cyclo_inverse(a).is_ok());
    run(200, s, |a| {
        let inv = cyclo_inverse(&a).unwrap();
        prop_assert!(a.times(&inv).is_unity());
        Ok(())
    })?;
    // 1 − α vanishes at α = 1, so it is a zero divisor
    let zd = CycloElement::constant(5, int(1)).minus(&CycloElement::alpha(5));
    check(cyclo_inverse(&zd).is_err(), || "1 - alpha inverted".into())
}

/// Σ|c|·|t|ᵖ over all terms, a bound on |a(t)|.
fn trig_norm(a: &TrigSeries, t: f64) -> f64 {
    a.terms()
        .map(|(_, p, q)| {
            p.terms().chain(q.terms()).map(|(d, c)| perturb_core::arith::rat_to_f64(c).abs() * t.abs().powi(d as i32)).sum::<f64>()
        })
        .sum()
}

fn trig_numeric_product() -> Result<(), String> {
    let s = (trig(5, 3, 4), trig(5, 3, 4), prop::collection::vec(-3.0f64..3.0, 10));
    run(200, s, |(a, b, ts)| {
        let ab = trig_mul(&a, &b).unwrap();
        for t in ts {
            let lhs = ab.eval_f64(t);
            let rhs = a.eval_f64(t) * b.eval_f64(t);
            let scale = (trig_norm(&a, t) * trig_norm(&b, t)).max(1e-300);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "t={t}: {lhs} vs {rhs}");
        }
        Ok(())
    })
}

fn trig_numeric_diff() -> Result<(), String> {
    let coeff = (-10i64..=10, 1i64..=4).prop_map(|(n, d)| rat(n, d));
    let s = (
        prop::collection::vec((0u32..=4, any::<bool>(), 0u32..=2, coeff), 0..=4),
        prop::collection::vec(-2.0f64..2.0, 5),
    );
    run(200, s, |(terms, ts)| {
        let a = terms.into_iter().fold(TrigSeries::zero("t"), |acc, (h, cos, p, c)| {
            acc.plus(&if cos { TrigSeries::cos_term("t", h, c, p) } else { TrigSeries::sin_term("t", h, c, p) })
        });
        let da = perturb_core::arith::trig_diff(&a);
        let h = 1e-5;
        for t in ts {
            let fd = (a.eval_f64(t + h) - a.eval_f64(t - h)) / (2.0 * h);
            prop_assert!((fd - da.eval_f64(t)).abs() <= 1e-6, "t={t}: {fd} vs {}", da.eval_f64(t));
        }
        Ok(())
    })
}

fn rseries(max_order: usize) -> impl Strategy<Value = GaugeSeries<Rational>> {
    (0..=max_order).prop_flat_map(|n| {
        prop::collection::vec(small_rat(), n + 1).prop_map(move |c| GaugeSeries::truncated(Gauge::EPS, (), c, n))
    })
}

fn series_bookkeeping() -> Result<(), String> {
    run(200, (rseries(8), rseries(8)), |(a, b)| {
        let p = a.mul(&b).unwrap();
        let n = a.order().unwrap().min(b.order().unwrap());
        prop_assert_eq!(p.order(), Some(n));
        for k in 0..=n {
            let conv = (0..=k).fold(int(0), |acc, i| acc + a.coeff(i).unwrap() * b.coeff(k - i).unwrap());
            prop_assert_eq!(p.coeff(k).unwrap(), conv);
        }
        prop_assert!(p.coeff(n + 1).is_err());
        Ok(())
    })
}

fn series_round_trips() -> Result<(), String> {
    let unit = rseries(8).prop_filter("unit constant term", |s| s.coeff(0).map(|c| c != int(0)).unwrap_or(false));
    run(200, (rseries(8), unit), |(a, b)| {
        let q = a.div(&b).unwrap();
        prop_assert_eq!(q.mul(&b).unwrap().truncate(q.order().unwrap()), a.truncate(q.order().unwrap()));
        let n = a.order().unwrap();
        let mut c = a.coeffs().to_vec();
        c[0] = int(0);
        let a0 = GaugeSeries::truncated(Gauge::EPS, (), c.clone(), n);
        prop_assert_eq!(a0.exp().unwrap().log().unwrap(), a0.clone());
        c[0] = int(1);
        let a1 = GaugeSeries::truncated(Gauge::EPS, (), c, n);
        prop_assert_eq!(a1.log().unwrap().exp().unwrap(), a1);
        Ok(())
    })
}

fn gauge_refinement() -> Result<(), String> {
    let s = (prop::collection::vec(small_rat(), 0..=8), 1u32..=5, small_rat());
    run(200, s, |(c, d, mu)| {
        let a = GaugeSeries::exact(Gauge::EPS, (), c);
        let r = a.refine(d).unwrap();
        prop_assert_eq!(r.gauge().denominator, d);
        prop_assert_eq!(a.eval(&Ring::pow(&mu, d)), r.eval(&mu));
        prop_assert_eq!(r.coarsen(d).unwrap(), a);
        Ok(())
    })
}

fn oscillator_resubstitution() -> Result<(), String> {
    run(200, (trig(5, 3, 6), small_rat(), small_rat()), |(f, y0, yp0)| {
        let y = solve_oscillator(&f, &y0, &yp0);
        prop_assert_eq!(y.derivative().derivative().plus(&y).minus(&f), TrigSeries::zero("t"));
        prop_assert_eq!(y.eval_at_zero(), y0);
        prop_assert_eq!(y.derivative().eval_at_zero(), yp0);
        Ok(())
    })
}

fn vanishes_through<C: Ring>(r: &GaugeSeries<C>, n: usize) -> bool {
    (0..=n).all(|k| r.coeff(k).map(|c| c.vanishes()).unwrap_or(false))
}

/// Every solver on every built-in problem, for N = 0..=8.
fn order_guarantee() -> Result<(), String> {
    for n in 0..=8 {
        let fail = |what: &str| format!("{what} at N={n}");
        let q = perturb_iterate(&problems::quintic_regular(), &[int(1)], n).map_err(|e| e.to_string())?;
        check(vanishes_through(q.scalar_residual(), n), || fail("quintic regular"))?;
        let s = perturb_iterate(&problems::quintic_singular(), &[int(-1)], n).map_err(|e| e.to_string())?;
        check(vanishes_through(s.scalar_residual(), n), || fail("quintic singular regular branch"))?;
        let sys = perturb_iterate(&problems::circle_hyperbola(), &[rat(3, 5), rat(4, 5)], n).map_err(|e| e.to_string())?;
        check(sys.residual.iter().all(|r| vanishes_through(r, n)), || fail("circle/hyperbola"))?;
        let p = solve_puiseux(&problems::quintic_puiseux().to_cyclo(5), 5, 1, CycloElement::alpha(5), n)
            .map_err(|e| e.to_string())?;
        check(vanishes_through(p.solution.scalar_residual(), n), || fail("puiseux branch"))?;
        let b = solve_puiseux(&problems::quintic_singular().to_cyclo(4), 4, -1, CycloElement::alpha(4), n)
            .map_err(|e| e.to_string())?;
        check(vanishes_through(b.solution.scalar_residual(), n), || fail("singular branch"))?;
        let d = duffing_regular(n).map_err(|e| e.to_string())?;
        check(vanishes_through(d.scalar_residual(), n) && d.achieved_order >= n, || fail("duffing"))?;
        let pe = pendulum_regular(n).map_err(|e| e.to_string())?;
        check(vanishes_through(pe.scalar_residual(), n), || fail("pendulum"))?;
        let l = solve_lindstedt(n).map_err(|e| e.to_string())?;
        check(vanishes_through(&l.residual, n), || fail("lindstedt"))?;
    }
    Ok(())
}

/// u⁵ + ε·p(u) − 1 = 0 from u₀ = 1 with random p.
fn random_regular_order() -> Result<(), String> {
    let s = (prop::collection::vec((0usize..=6, 1u32..=2, small_rat()), 1..=4), 0usize..=8);
    run(50, s, |(terms, n)| {
        let mut all = vec![(5, 0, int(1)), (0, 0, int(-1))];
        all.extend(terms);
        let p = AlgebraicProblem::from_terms(Gauge::EPS, &all).unwrap();
        let sol = perturb_iterate(&p, &[int(1)], n).unwrap();
        prop_assert!(vanishes_through(sol.scalar_residual(), n));
        Ok(())
    })
}

fn duffing_degree() -> Result<(), String> {
    for n in 1..=5 {
        let sol = duffing_regular(n).map_err(|e| e.to_string())?;
        let r = sol.scalar_residual().coeff(n + 1).map_err(|e| e.to_string())?;
        check(r.amplitude_degree() == Some(n as u32), || {
            format!("order {} residual degree {:?}, expected {n}", n + 1, r.amplitude_degree())
        })?;
    }
    Ok(())
}

fn lindstedt_non_secular() -> Result<(), String> {
    let sol = solve_lindstedt(4).map_err(|e| e.to_string())?;
    for (k, c) in sol.solution.coeffs().iter().enumerate() {
        check(c.amplitude_degree().unwrap_or(0) == 0, || format!("secular term at order {k}"))?;
    }
    Ok(())
}

/// Residual of the modified equation = original residual − correction.
fn backward_homomorphism() -> Result<(), String> {
    let eq = pendulum_equation();
    let z = renormalize(&pendulum_regular(1).map_err(|e| e.to_string())?, 1)
        .and_then(|r| r.series_form(2, true))
        .map_err(|e| e.to_string())?;
    let r = optimal_backward_error(&eq, &z, &pendulum_fit()).map_err(|e| e.to_string())?;
    let direct = residual_exact(&r.modified, &z).map_err(|e| e.to_string())?;
    let mut acc = r.original_residual.clone();
    for c in &r.corrections {
        let slot = eq.slot_value(c.slot, &z).map_err(|e| e.to_string())?;
        let mono = LaurentSeries::from_series(GaugeSeries::monomial(z.gauge(), c.coeff.clone(), c.power as usize));
        let term = slot.mul(&mono).map_err(|e| e.to_string())?;
        acc = acc.add(&term).map_err(|e| e.to_string())?;
    }
    check(direct == acc && direct == r.new_residual, || "pendulum modified residual mismatch".into())?;
    // random perturbations of the quintic: the reverse-engineered problem is solved exactly
    run(50, prop::collection::vec(small_rat(), 1..=4), |tail| {
        let p = problems::quintic_regular();
        let mut c = vec![int(1)];
        c.extend(tail);
        let zs = GaugeSeries::exact(Gauge::EPS, (), c);
        let z = LaurentSeries::from_series(zs.clone());
        let r = residual_exact(&p, &z).unwrap();
        let rev = perturb_core::backward::reverse_engineered(&p, &zs).unwrap();
        prop_assert!(residual_exact(&rev, &z).unwrap().leading().is_none());
        prop_assert!(r.leading().is_some());
        Ok(())
    })
}

/// Domain-safe random expressions in x.
fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::var("x")),
        (-3i64..=3, 1i64..=3).prop_map(|(n, d)| Expr::constant(rat(n, d))),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / (Expr::int(2) + b.cos())),
            inner.clone().prop_map(|a| a.sin()),
            inner.clone().prop_map(|a| a.cos()),
            inner.clone().prop_map(|a| a.sin().exp()),
            inner.clone().prop_map(|a| (Expr::int(2) + a.sin()).ln()),
            inner.clone().prop_map(|a| (Expr::int(1) + a.powi(2)).sqrt()),
            (inner.clone(), prop_oneof![Just(rat(1, 2)), Just(rat(-1, 1)), Just(rat(3, 2)), Just(rat(2, 1))])
                .prop_map(|(a, r)| (Expr::int(1) + a.powi(2)).powr(r)),
            inner.clone().prop_map(|a| (a.sin() / Expr::int(2)).tan()),
            inner.prop_map(|a| a.sin().powi(2).lambert_w()),
        ]
    })
}

fn expr_derivatives() -> Result<(), String> {
    run(100, (expr_tree(), prop::collection::vec(-1.0f64..1.0, 5)), |(e, xs)| {
        let d = e.diff("x");
        let h = 1e-6;
        for x in xs {
            let f = |v: f64| eval_expr::<f64>(&e, &[("x", v)]).unwrap();
            let fd = (f(x + h) - f(x - h)) / (2.0 * h);
            let dv = eval_expr::<f64>(&d, &[("x", x)]).unwrap();
            let scale = dv.abs().max(f(x).abs()).max(1.0);
            prop_assert!((fd - dv).abs() <= 1e-5 * scale, "{e} at x={x}: fd {fd} vs {dv}");
        }
        Ok(())
    })
}

fn lambert_identity() -> Result<(), String> {
    let lo = -1.0 / std::f64::consts::E + 1e-6;
    // dense near the branch point, then log-spaced out to 1e6
    let mut xs: Vec<f64> = (0..=200).map(|i| lo - lo * (i as f64 / 200.0).powi(3)).collect();
    xs.extend((0..=400).map(|i| 10f64.powf(-12.0 + 18.0 * i as f64 / 400.0)));
    for x in xs {
        let w = lambert_w(x).map_err(|e| e.to_string())?;
        let err = (w * w.exp() - x).abs();
        check(err <= 1e-14 * x.abs().max(1.0), || format!("W({x}) = {w}: |We^W - x| = {err}"))?;
    }
    check(lambert_w(-0.5).is_err(), || "accepted x < -1/e".into())
}

fn report_consistency() -> Result<(), String> {
    let reports = [
        pendulum_audit(0.1, 30.0, 500, PendulumForm::Regular),
        pendulum_audit(0.1, 30.0, 500, PendulumForm::Renorm),
        pendulum_audit(0.1, 30.0, 500, PendulumForm::Modified),
        morrison_audit(0.1, 1.0, 100.0, 500),
    ];
    for r in reports {
        let r = r.map_err(|e| e.to_string())?;
        let m = r.scaled_values().into_iter().fold(0.0, f64::max);
        check(m == r.max_scaled, || format!("max_scaled {} vs {m}", r.max_scaled))?;
        check(r.grid.len() == r.residual_values.len() && r.grid.len() == r.scale_values.len(), || "length mismatch".into())?;
    }
    Ok(())
}

/// At fixed t, |Δ| drops by about 10³ between ε = 1e−2 and 1e−3.
fn morrison_scaling() -> Result<(), String> {
    let a = morrison_audit(1e-2, 1.0, 20.0, 2000).map_err(|e| e.to_string())?;
    let b = morrison_audit(1e-3, 1.0, 20.0, 2000).map_err(|e| e.to_string())?;
    let ratio = a.max_abs / b.max_abs;
    check((500.0..=2000.0).contains(&ratio), || format!("maxAbs ratio {ratio}"))
}
