mod common;

fn suite(name: &str) {
    let (_, f) = common::SUITES.iter().find(|s| s.0 == name).expect("known suite");
    if let Err(e) = f() {
        panic!("{name}: {e}");
    }
}

macro_rules! suites {
    ($($test:ident => $name:literal),* $(,)?) => {
        $(#[test] fn $test() { suite($name); })*
        #[test]
        fn every_suite_is_listed() {
            let listed = [$($name),*];
            for (name, _) in common::SUITES {
                assert!(listed.contains(name), "{name} has no test");
            }
        }
    };
}

suites! {
    ring_rational => "ring axioms: rationals",
    ring_cyclo => "ring axioms: cyclotomic n=2,4,5",
    ring_poly => "ring axioms: polynomials",
    ring_trig => "ring axioms: trig series",
    cyclo_inverse => "cyclotomic inverse",
    trig_product => "trig product numeric consistency",
    trig_derivative => "trig derivative finite differences",
    series_bookkeeping => "series truncation bookkeeping",
    series_round_trips => "series div/exp/log round trips",
    gauge_refinement => "gauge refinement preserves values",
    oscillator => "oscillator re-substitution",
    order_guarantee => "residual order guarantee",
    random_regular => "random regular problems keep the order guarantee",
    duffing_degree => "duffing secular growth degree",
    lindstedt => "lindstedt non-secularity",
    backward_homomorphism => "backward error homomorphism",
    expr_derivatives => "expression derivatives vs finite differences",
    lambert => "lambert w identity",
    reports => "residual report consistency",
    morrison_scaling => "morrison residual scales like eps^3",
}
