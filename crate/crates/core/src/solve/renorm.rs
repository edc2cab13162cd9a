use crate::arith::{int, CycloElement, Poly, Rational, Ring, Symbol, TrigSeries};
use crate::series::GaugeSeries;

use super::{PerturbationSolution, SolveError};

type CPoly = Poly<CycloElement>;

/// z = Re(A(τ;ε)·e^{iτ}) with A = exp(L).
#[derive(Debug, Clone, PartialEq)]
pub struct Renormalization {
    pub time: Symbol,
    /// Complex amplitude A, truncated at the input order; i is α with α⁴ = 1.
    pub amplitude: GaugeSeries<CPoly>,
    /// L = log A.
    pub log: GaugeSeries<CPoly>,
    /// Re [εᵏ]L per order.
    pub real: Vec<Poly<Rational>>,
    /// Im [εᵏ]L per order.
    pub imag: Vec<Poly<Rational>>,
    /// τ-free part of Im [εᵏ]L.
    pub constant_phase: Vec<Rational>,
    /// z(0) and z′(0) per order of the phase-dropped series form, against
    /// the regular initial data.
    pub initial_value: Vec<Rational>,
    pub initial_slope: Vec<Rational>,
}

fn i4() -> CycloElement {
    CycloElement::alpha(4)
}

fn re(c: &CycloElement) -> Rational {
    c.coeff(0) - c.coeff(2)
}

fn im(c: &CycloElement) -> Rational {
    c.coeff(1) - c.coeff(3)
}

/// p cos τ + q sin τ ↦ p − i·q.
fn amplitude_of(z: &TrigSeries) -> Result<CPoly, SolveError> {
    if let Some(h) = z.harmonics().find(|&h| h != 1) {
        return Err(SolveError::NonFundamentalHarmonic(h));
    }
    let embed = |p: &Poly<Rational>| p.map(4, |c| CycloElement::constant(4, c.clone()));
    Ok(embed(&z.cos_amp(1)).minus(&embed(&z.sin_amp(1)).mul_coeff(&i4())))
}

/// Re(P·e^{iτ}) = Re P·cos τ − Im P·sin τ.
fn trig_of(p: &CPoly, time: Symbol) -> TrigSeries {
    let r = p.map((), re);
    let m = p.map((), im);
    let mut out = TrigSeries::zero(time);
    for (d, c) in r.terms() {
        out = out.plus(&TrigSeries::cos_term(time, 1, c.clone(), d));
    }
    for (d, c) in m.terms() {
        out = out.plus(&TrigSeries::sin_term(time, 1, -c.clone(), d));
    }
    out
}

pub fn renormalize(regular: &PerturbationSolution<TrigSeries>, n: usize) -> Result<Renormalization, SolveError> {
    let z = regular.scalar();
    let time = *z.ring_ctx();
    let g = z.gauge();
    let coeffs = (0..=n).map(|k| amplitude_of(&z.coeff(k)?)).collect::<Result<Vec<_>, SolveError>>()?;
    let amplitude = GaugeSeries::truncated(g, (time, 4), coeffs, n);
    let a0 = amplitude.coeff(0)?;
    if !a0.is_unity() {
        return Err(SolveError::NotUnitAmplitude(format!("{a0}")));
    }
    let log = amplitude.log()?;
    let mut real = Vec::with_capacity(n + 1);
    let mut imag = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let l = log.coeff(k)?;
        real.push(l.map((), re));
        imag.push(l.map((), im));
    }
    let constant_phase = imag.iter().map(|p| p.coeff(0)).collect();
    let mut r = Renormalization {
        time,
        amplitude,
        log,
        real,
        imag,
        constant_phase,
        initial_value: Vec::new(),
        initial_slope: Vec::new(),
    };
    let s = r.series_form(n, true)?;
    for k in 0..=n {
        let c = s.coeff(k)?;
        let base = if k == 0 { int(1) } else { int(0) };
        r.initial_value.push(c.eval_at_zero() - base);
        let slope0 = if k == 0 { regular.scalar().coeff(0)?.derivative().eval_at_zero() } else { int(0) };
        r.initial_slope.push(c.derivative().eval_at_zero() - slope0);
    }
    Ok(r)
}

impl Renormalization {
    pub fn order(&self) -> usize {
        self.real.len() - 1
    }

    /// Re(exp(L)·e^{iτ}) expanded in ε through `order`, L taken as the
    /// finite sum of its computed terms.
    pub fn series_form(&self, order: usize, drop_constant_phase: bool) -> Result<GaugeSeries<TrigSeries>, SolveError> {
        let mut l = self.log.as_exact();
        if drop_constant_phase {
            let ctx = (self.time, 4);
            let phase: Vec<CPoly> = self
                .constant_phase
                .iter()
                .map(|c| CPoly::constant(self.time, i4().scale(c)))
                .collect();
            l = l.sub(&GaugeSeries::exact(l.gauge(), ctx, phase))?;
        }
        let e = l.truncate(order).exp()?;
        let coeffs = (0..=order).map(|k| Ok(trig_of(&e.coeff(k)?, self.time))).collect::<Result<Vec<_>, SolveError>>()?;
        Ok(GaugeSeries::truncated(e.gauge(), self.time, coeffs, order))
    }
}
