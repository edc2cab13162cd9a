use std::collections::HashMap;

use rayon::prelude::*;

use crate::arith::{Rational, Symbol};

use super::expr::{Expr, Func, Node};
use super::scalar::Scalar;
use super::VerifyError;

#[derive(Debug, Clone)]
enum Op {
    Const(Rational),
    Var(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow(usize, Rational),
    Neg(usize),
    Apply(Func, usize),
}

/// An expression flattened into straight-line code, with shared subtrees
/// evaluated once.
#[derive(Debug, Clone)]
pub struct Tape {
    ops: Vec<Op>,
    vars: Vec<Symbol>,
}

impl Tape {
    /// Compiles `e`; every variable in it must be listed in `vars`.
    pub fn compile(e: &Expr, vars: &[Symbol]) -> Result<Tape, VerifyError> {
        let mut t = Tape { ops: Vec::new(), vars: vars.to_vec() };
        let mut slots = HashMap::new();
        t.emit(e, &mut slots)?;
        Ok(t)
    }

    fn emit(&mut self, e: &Expr, slots: &mut HashMap<usize, usize>) -> Result<usize, VerifyError> {
        if let Some(&s) = slots.get(&e.id()) {
            return Ok(s);
        }
        let op = match e.node() {
            Node::Const(r) => Op::Const(r.clone()),
            Node::Var(v) => Op::Var(self.vars.iter().position(|x| x == v).ok_or(VerifyError::UnboundVariable(v))?),
            Node::Add(a, b) => Op::Add(self.emit(a, slots)?, self.emit(b, slots)?),
            Node::Sub(a, b) => Op::Sub(self.emit(a, slots)?, self.emit(b, slots)?),
            Node::Mul(a, b) => Op::Mul(self.emit(a, slots)?, self.emit(b, slots)?),
            Node::Div(a, b) => Op::Div(self.emit(a, slots)?, self.emit(b, slots)?),
            Node::Pow(a, r) => Op::Pow(self.emit(a, slots)?, r.clone()),
            Node::Neg(a) => Op::Neg(self.emit(a, slots)?),
            Node::Apply(f, a) => Op::Apply(*f, self.emit(a, slots)?),
        };
        self.ops.push(op);
        let s = self.ops.len() - 1;
        slots.insert(e.id(), s);
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Value at the point `args` (one per compiled variable).
    pub fn eval<S: Scalar>(&self, args: &[S]) -> S {
        let mut r: Vec<S> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Const(c) => S::from_rational(c),
                Op::Var(i) => args[*i].clone(),
                Op::Add(a, b) => r[*a].add(&r[*b]),
                Op::Sub(a, b) => r[*a].sub(&r[*b]),
                Op::Mul(a, b) => r[*a].mul(&r[*b]),
                Op::Div(a, b) => r[*a].div(&r[*b]),
                Op::Pow(a, p) => r[*a].powr(p),
                Op::Neg(a) => r[*a].neg(),
                Op::Apply(f, a) => {
                    let x = &r[*a];
                    match f {
                        Func::Sin => x.sin(),
                        Func::Cos => x.cos(),
                        Func::Tan => x.tan(),
                        Func::Exp => x.exp(),
                        Func::Ln => x.ln(),
                        Func::Sqrt => x.sqrt(),
                        Func::LambertW => x.lambert_w(),
                    }
                }
            };
            r.push(v);
        }
        r.pop().expect("nonempty tape")
    }

    /// f64 values of a one-variable tape over a grid, in parallel.
    pub fn eval_grid(&self, grid: &[f64]) -> Vec<f64> {
        grid.par_iter().map(|&x| self.eval::<f64>(&[x])).collect()
    }
}

/// Value of `e` with the given bindings.
pub fn eval_expr<S: Scalar>(e: &Expr, bindings: &[(Symbol, S)]) -> Result<S, VerifyError> {
    let vars: Vec<Symbol> = bindings.iter().map(|b| b.0).collect();
    let args: Vec<S> = bindings.iter().map(|b| b.1.clone()).collect();
    Ok(Tape::compile(e, &vars)?.eval(&args))
}

/// n + 1 equally spaced points on [a, b].
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![a];
    }
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}
