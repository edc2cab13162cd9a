use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{int, rat_string, Rational, Ring, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    LambertW,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::LambertW => "W",
        }
    }
}

#[derive(Debug)]
pub enum Node {
    Const(Rational),
    Var(Symbol),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, Rational),
    Neg(Expr),
    Apply(Func, Expr),
}

/// Shared, immutable expression tree. Equal subtrees built once are shared,
/// which the differentiator and the evaluator exploit.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn wrap(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(r: Rational) -> Self {
        Self::wrap(Node::Const(r))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    /// Exact value of a finite float.
    pub fn float(x: f64) -> Self {
        Self::constant(BigRational::from_float(x).expect("finite constant"))
    }

    pub fn var(name: Symbol) -> Self {
        Self::wrap(Node::Var(name))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(r) => Some(r),
            _ => None,
        }
    }

    fn is_const(&self, v: i64) -> bool {
        self.as_const().is_some_and(|r| *r == int(v))
    }

    pub fn powr(&self, r: Rational) -> Self {
        if r.is_zero() {
            return Self::int(1);
        }
        if r.is_one() {
            return self.clone();
        }
        if let Some(c) = self.as_const() {
            if r.is_integer() && !(c.is_zero() && r.is_negative()) {
                let e = r.to_integer();
                if let Ok(e) = i32::try_from(e) {
                    let v = if e >= 0 { Ring::pow(c, e as u32) } else { Ring::pow(&c.recip(), (-e) as u32) };
                    return Self::constant(v);
                }
            }
        }
        Self::wrap(Node::Pow(self.clone(), r))
    }

    pub fn powi(&self, n: i64) -> Self {
        self.powr(int(n))
    }

    fn apply(&self, f: Func) -> Self {
        if let Some(c) = self.as_const() {
            if c.is_zero() {
                match f {
                    Func::Sin | Func::Tan | Func::Sqrt | Func::LambertW => return Self::int(0),
                    Func::Cos | Func::Exp => return Self::int(1),
                    Func::Ln => {}
                }
            }
            if c.is_one() && f == Func::Ln {
                return Self::int(0);
            }
        }
        Self::wrap(Node::Apply(f, self.clone()))
    }

    pub fn sin(&self) -> Self {
        self.apply(Func::Sin)
    }
    pub fn cos(&self) -> Self {
        self.apply(Func::Cos)
    }
    pub fn tan(&self) -> Self {
        self.apply(Func::Tan)
    }
    pub fn exp(&self) -> Self {
        self.apply(Func::Exp)
    }
    pub fn ln(&self) -> Self {
        self.apply(Func::Ln)
    }
    pub fn sqrt(&self) -> Self {
        self.apply(Func::Sqrt)
    }
    pub fn lambert_w(&self) -> Self {
        self.apply(Func::LambertW)
    }

    /// 2/(eˣ + e⁻ˣ).
    pub fn sech(&self) -> Self {
        Self::int(2) / (self.exp() + (-self).exp())
    }

    /// Variables occurring in the tree.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            match e.node() {
                Node::Const(_) => {}
                Node::Var(v) => {
                    if !out.contains(v) {
                        out.push(*v);
                    }
                }
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Pow(a, _) | Node::Neg(a) | Node::Apply(_, a) => stack.push(a.clone()),
            }
        }
        out
    }

    /// Number of distinct nodes.
    pub fn size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            match e.node() {
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Pow(a, _) | Node::Neg(a) | Node::Apply(_, a) => stack.push(a.clone()),
                _ => {}
            }
        }
        seen.len()
    }

    /// Replaces every occurrence of `var`.
    pub fn substitute(&self, var: Symbol, with: &Expr) -> Expr {
        let mut memo = HashMap::new();
        subst_rec(self, var, with, &mut memo)
    }

    pub fn diff(&self, var: Symbol) -> Expr {
        let mut memo = HashMap::new();
        diff_rec(self, var, &mut memo)
    }
}

fn subst_rec(e: &Expr, var: Symbol, with: &Expr, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(r) = memo.get(&e.id()) {
        return r.clone();
    }
    let mut go = |x: &Expr| subst_rec(x, var, with, memo);
    let out = match e.node() {
        Node::Const(_) => e.clone(),
        Node::Var(v) => {
            if *v == var {
                with.clone()
            } else {
                e.clone()
            }
        }
        Node::Add(a, b) => go(a) + go(b),
        Node::Sub(a, b) => go(a) - go(b),
        Node::Mul(a, b) => go(a) * go(b),
        Node::Div(a, b) => go(a) / go(b),
        Node::Pow(a, r) => go(a).powr(r.clone()),
        Node::Neg(a) => -go(a),
        Node::Apply(f, a) => go(a).apply(*f),
    };
    memo.insert(e.id(), out.clone());
    out
}

fn diff_rec(e: &Expr, var: Symbol, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(r) = memo.get(&e.id()) {
        return r.clone();
    }
    let out = match e.node() {
        Node::Const(_) => Expr::int(0),
        Node::Var(v) => Expr::int(if *v == var { 1 } else { 0 }),
        Node::Add(a, b) => diff_rec(a, var, memo) + diff_rec(b, var, memo),
        Node::Sub(a, b) => diff_rec(a, var, memo) - diff_rec(b, var, memo),
        Node::Mul(a, b) => {
            let (da, db) = (diff_rec(a, var, memo), diff_rec(b, var, memo));
            da * b.clone() + a.clone() * db
        }
        Node::Div(a, b) => {
            let (da, db) = (diff_rec(a, var, memo), diff_rec(b, var, memo));
            if db.is_const(0) {
                da / b.clone()
            } else {
                (da * b.clone() - a.clone() * db) / b.powi(2)
            }
        }
        Node::Pow(a, r) => {
            let da = diff_rec(a, var, memo);
            Expr::constant(r.clone()) * a.powr(r - int(1)) * da
        }
        Node::Neg(a) => -diff_rec(a, var, memo),
        Node::Apply(f, a) => {
            let da = diff_rec(a, var, memo);
            if da.is_const(0) {
                Expr::int(0)
            } else {
                let outer = match f {
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                    Func::Tan => Expr::int(1) + e.powi(2),
                    Func::Exp => e.clone(),
                    Func::Ln => Expr::int(1) / a.clone(),
                    Func::Sqrt => Expr::constant(crate::arith::rat(1, 2)) / e.clone(),
                    // W′(u) = e^{−W}/(1 + W), finite at u = 0
                    Func::LambertW => (-e).exp() / (Expr::int(1) + e.clone()),
                };
                outer * da
            }
        }
    };
    memo.insert(e.id(), out.clone());
    out
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a + b),
            (Some(a), _) if a.is_zero() => rhs,
            (_, Some(b)) if b.is_zero() => self,
            _ => Expr::wrap(Node::Add(self, rhs)),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a - b),
            (Some(a), _) if a.is_zero() => -rhs,
            (_, Some(b)) if b.is_zero() => self,
            _ => Expr::wrap(Node::Sub(self, rhs)),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a * b),
            (Some(a), _) | (_, Some(a)) if a.is_zero() => Expr::int(0),
            (Some(a), _) if a.is_one() => rhs,
            (_, Some(b)) if b.is_one() => self,
            _ => Expr::wrap(Node::Mul(self, rhs)),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) if !b.is_zero() => Expr::constant(a / b),
            (Some(a), _) if a.is_zero() => Expr::int(0),
            (_, Some(b)) if b.is_one() => self,
            _ => Expr::wrap(Node::Div(self, rhs)),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self.node() {
            Node::Const(a) => Expr::constant(-a),
            Node::Neg(a) => a.clone(),
            _ => Expr::wrap(Node::Neg(self)),
        }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

macro_rules! ref_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $tr::$m(self.clone(), rhs.clone())
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $tr::$m(self, rhs.clone())
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $tr::$m(self.clone(), rhs)
            }
        }
    )*};
}

ref_ops!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(r) => {
                if r.is_integer() && !r.is_negative() {
                    write!(f, "{}", rat_string(r))
                } else {
                    write!(f, "({})", rat_string(r))
                }
            }
            Node::Var(v) => write!(f, "{v}"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "{a}*{b}"),
            Node::Div(a, b) => write!(f, "{a}/({b})"),
            Node::Pow(a, r) => write!(f, "({a})^({})", rat_string(r)),
            Node::Neg(a) => write!(f, "-({a})"),
            Node::Apply(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
