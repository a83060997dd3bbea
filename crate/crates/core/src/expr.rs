//! Expression trees and Laurent-monomial leaves: construction, evaluation,
//! objective computation, and rendering.
//!
//! Evaluation is strict about domain faults. Any square root of a negative
//! number, division by a near-zero denominator, non-finite intermediate, or
//! zero raised to a negative power is reported as a [`DomainError`] rather
//! than propagated as NaN/inf, and the objective treats a fault at any data
//! point as an infinitely bad fit.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::Real;

/// Node operator. SQRT and EXP are unary, the rest are binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Exp,
}

impl Op {
    pub const BINARY: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];
    pub const UNARY: [Op; 2] = [Op::Sqrt, Op::Exp];

    pub fn is_binary(self) -> bool {
        matches!(self, Op::Add | Op::Sub | Op::Mul | Op::Div)
    }

    pub fn is_unary(self) -> bool {
        !self.is_binary()
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, Op::Add | Op::Mul)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Sqrt => "sqrt",
            Op::Exp => "exp",
        }
    }

    /// Parses the lowercase operator names used on the command line.
    pub fn from_name(name: &str) -> Option<Op> {
        match name.trim().to_ascii_lowercase().as_str() {
            "add" | "+" => Some(Op::Add),
            "sub" | "-" => Some(Op::Sub),
            "mul" | "*" => Some(Op::Mul),
            "div" | "/" => Some(Op::Div),
            "sqrt" => Some(Op::Sqrt),
            "exp" => Some(Op::Exp),
            _ => None,
        }
    }
}

/// Rooted expression tree shape. Leaves are monomial slots; the leaf at DFS
/// position `j` (left to right) is bound to `ParamAssignment.leaves[j]`.
///
/// A single leaf has depth 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gentree {
    Leaf,
    Unary(Op, Box<Gentree>),
    Binary(Op, Box<Gentree>, Box<Gentree>),
}

impl Gentree {
    pub fn unary(op: Op, child: Gentree) -> Gentree {
        assert!(op.is_unary(), "{op:?} is not unary");
        Gentree::Unary(op, Box::new(child))
    }

    pub fn binary(op: Op, left: Gentree, right: Gentree) -> Gentree {
        assert!(op.is_binary(), "{op:?} is not binary");
        Gentree::Binary(op, Box::new(left), Box::new(right))
    }

    pub fn depth(&self) -> usize {
        match self {
            Gentree::Leaf => 0,
            Gentree::Unary(_, c) => 1 + c.depth(),
            Gentree::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Gentree::Leaf => 1,
            Gentree::Unary(_, c) => c.leaf_count(),
            Gentree::Binary(_, l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Total node count; the complexity measure used to order the catalog.
    pub fn node_count(&self) -> usize {
        match self {
            Gentree::Leaf => 1,
            Gentree::Unary(_, c) => 1 + c.node_count(),
            Gentree::Binary(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Canonical prefix serialization, e.g. `(+ L (sqrt L))`.
    pub fn serialize(&self) -> String {
        match self {
            Gentree::Leaf => "L".to_string(),
            Gentree::Unary(op, c) => format!("({} {})", op.symbol(), (**c).serialize()),
            Gentree::Binary(op, l, r) => {
                format!("({} {} {})", op.symbol(), (**l).serialize(), (**r).serialize())
            }
        }
    }

    /// Sorts the children of commutative nodes by serialization, recursively.
    /// Trees equal up to commutative operand order canonicalize identically.
    pub fn canonicalized(&self) -> Gentree {
        match self {
            Gentree::Leaf => Gentree::Leaf,
            Gentree::Unary(op, c) => Gentree::Unary(*op, Box::new(c.canonicalized())),
            Gentree::Binary(op, l, r) => {
                let mut l = l.canonicalized();
                let mut r = r.canonicalized();
                if op.is_commutative() && r.serialize() < l.serialize() {
                    std::mem::swap(&mut l, &mut r);
                }
                Gentree::Binary(*op, Box::new(l), Box::new(r))
            }
        }
    }

    /// Visits every subtree, including `self`.
    pub fn for_each_subtree<'a>(&'a self, f: &mut impl FnMut(&'a Gentree)) {
        f(self);
        match self {
            Gentree::Leaf => {}
            Gentree::Unary(_, c) => c.for_each_subtree(f),
            Gentree::Binary(_, l, r) => {
                l.for_each_subtree(f);
                r.for_each_subtree(f);
            }
        }
    }
}

/// Laurent monomial `h * x1^p1 * ... * xn^pn`.
///
/// `gated` is the constant gate: when false the multiplier is pinned to
/// exactly 1 and does not count against the model's constant budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LMonomial<S> {
    pub powers: Vec<i32>,
    pub gated: bool,
    pub constant: S,
}

impl<S: Real> LMonomial<S> {
    pub fn ungated(powers: Vec<i32>) -> Self {
        LMonomial { powers, gated: false, constant: S::one() }
    }

    pub fn gated(powers: Vec<i32>, constant: S) -> Self {
        LMonomial { powers, gated: true, constant }
    }

    /// The multiplicative identity leaf: all powers zero, no constant.
    pub fn identity(n_vars: usize) -> Self {
        Self::ungated(vec![0; n_vars])
    }

    pub fn abs_power_sum(&self) -> i64 {
        self.powers.iter().map(|p| p.unsigned_abs() as i64).sum()
    }
}

/// Per-leaf parameters for one tree, in DFS leaf order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamAssignment<S> {
    pub leaves: Vec<LMonomial<S>>,
}

impl<S: Real> ParamAssignment<S> {
    pub fn new(leaves: Vec<LMonomial<S>>) -> Self {
        ParamAssignment { leaves }
    }

    pub fn gate_pattern(&self) -> Vec<bool> {
        self.leaves.iter().map(|l| l.gated).collect()
    }

    /// Powers of all leaves flattened in (leaf, variable) order.
    pub fn flat_powers(&self) -> Vec<i32> {
        self.leaves.iter().flat_map(|l| l.powers.iter().copied()).collect()
    }
}

/// A fitted model. `sse` is the objective recomputed on the training set
/// after fitting, so it always agrees with [`sse`] on the same data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateModel<S> {
    pub tree: Gentree,
    pub params: ParamAssignment<S>,
    pub sse: S,
    pub complexity: usize,
}

impl<S: Real> CandidateModel<S> {
    pub fn new(tree: Gentree, params: ParamAssignment<S>, sse: S) -> Self {
        let complexity = tree.node_count();
        CandidateModel { tree, params, sse, complexity }
    }

    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    /// Symbolic form of the model with constant values elided: gated
    /// constants become `C`, commutative children are sorted, leaves list
    /// variables by index. Two models with the same pattern share tree shape
    /// and power assignment up to commutative reordering.
    pub fn pattern(&self, names: &[String]) -> String {
        fn leaf_pattern<S: Real>(m: &LMonomial<S>, names: &[String]) -> String {
            let mut parts = Vec::new();
            if m.gated {
                parts.push("C".to_string());
            }
            for (i, &p) in m.powers.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if p == 1 {
                    parts.push(names[i].clone());
                } else {
                    parts.push(format!("{}^{}", names[i], p));
                }
            }
            if parts.is_empty() {
                "[1]".to_string()
            } else {
                format!("[{}]", parts.join("·"))
            }
        }
        fn walk<S: Real>(
            t: &Gentree,
            leaves: &[LMonomial<S>],
            names: &[String],
            next: &mut usize,
        ) -> String {
            match t {
                Gentree::Leaf => {
                    let s = leaf_pattern(&leaves[*next], names);
                    *next += 1;
                    s
                }
                Gentree::Unary(op, c) => {
                    format!("({} {})", op.symbol(), walk(c, leaves, names, next))
                }
                Gentree::Binary(op, l, r) => {
                    let mut a = walk(l, leaves, names, next);
                    let mut b = walk(r, leaves, names, next);
                    if op.is_commutative() && b < a {
                        std::mem::swap(&mut a, &mut b);
                    }
                    format!("({} {} {})", op.symbol(), a, b)
                }
            }
        }
        let mut next = 0;
        walk(&self.tree, &self.params.leaves, names, &mut next)
    }
}

/// Evaluation fault. Any fault makes the whole parameter assignment
/// infeasible at that data point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("square root of a negative value")]
    SqrtNegative,
    #[error("division by (near-)zero")]
    DivByZero,
    #[error("non-finite intermediate value")]
    Overflow,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
}

/// Integer power by squaring. Exact sign behavior for negative bases; never
/// routed through `exp(p * ln x)`.
pub fn pow_int<S: Real>(base: S, exp: i32) -> Result<S, DomainError> {
    if exp == 0 {
        return Ok(S::one());
    }
    if base == S::zero() {
        if exp < 0 {
            return Err(DomainError::ZeroToNegativePower);
        }
        return Ok(S::zero());
    }
    let mut acc = S::one();
    let mut b = base;
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b;
        }
        e >>= 1;
        if e > 0 {
            b = b * b;
        }
    }
    let v = if exp < 0 { S::one() / acc } else { acc };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DomainError::Overflow)
    }
}

/// Evaluates one monomial at a point. `x.len()` must equal `powers.len()`.
pub fn eval_lmonomial<S: Real>(m: &LMonomial<S>, x: &[S]) -> Result<S, DomainError> {
    assert_eq!(m.powers.len(), x.len(), "variable count mismatch");
    debug_assert!(m.gated || m.constant == S::one(), "ungated leaf with constant != 1");
    let mut acc = m.constant;
    for (&xi, &p) in x.iter().zip(&m.powers) {
        acc = acc * pow_int(xi, p)?;
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(DomainError::Overflow)
    }
}

/// Evaluates a tree at a point. Panics if the leaf count of `tree` does not
/// match `params` (an API misuse, not a data fault). `eps_div` is the
/// denominator guard: `|den| < eps_div` raises [`DomainError::DivByZero`].
pub fn eval_gentree<S: Real>(
    tree: &Gentree,
    params: &ParamAssignment<S>,
    x: &[S],
    eps_div: S,
) -> Result<S, DomainError> {
    assert_eq!(tree.leaf_count(), params.leaves.len(), "leaf count mismatch");
    let mut next = 0;
    eval_node(tree, &params.leaves, x, eps_div, &mut next)
}

fn eval_node<S: Real>(
    tree: &Gentree,
    leaves: &[LMonomial<S>],
    x: &[S],
    eps_div: S,
    next: &mut usize,
) -> Result<S, DomainError> {
    let finite = |v: S| if v.is_finite() { Ok(v) } else { Err(DomainError::Overflow) };
    match tree {
        Gentree::Leaf => {
            let v = eval_lmonomial(&leaves[*next], x)?;
            *next += 1;
            Ok(v)
        }
        Gentree::Unary(op, c) => {
            let a = eval_node(c, leaves, x, eps_div, next)?;
            match op {
                Op::Sqrt => {
                    if a < S::zero() {
                        Err(DomainError::SqrtNegative)
                    } else {
                        Ok(a.sqrt())
                    }
                }
                Op::Exp => finite(a.exp()),
                _ => unreachable!("binary operator in unary node"),
            }
        }
        Gentree::Binary(op, l, r) => {
            let a = eval_node(l, leaves, x, eps_div, next)?;
            let b = eval_node(r, leaves, x, eps_div, next)?;
            match op {
                Op::Add => finite(a + b),
                Op::Sub => finite(a - b),
                Op::Mul => finite(a * b),
                Op::Div => {
                    if b.abs() < eps_div {
                        Err(DomainError::DivByZero)
                    } else {
                        finite(a / b)
                    }
                }
                _ => unreachable!("unary operator in binary node"),
            }
        }
    }
}

/// Sum of squared residuals over the whole dataset, in data order. A domain
/// fault at any point makes the assignment infeasible: returns `+inf`.
pub fn sse<S: Real>(
    tree: &Gentree,
    params: &ParamAssignment<S>,
    data: &Dataset<S>,
    eps_div: S,
) -> S {
    let mut acc = S::zero();
    for (x, &y) in data.points.iter().zip(&data.targets) {
        match eval_gentree(tree, params, x, eps_div) {
            Ok(v) => {
                let r = y - v;
                acc = acc + r * r;
            }
            Err(_) => return S::infinity(),
        }
    }
    acc
}

/// Formats a constant with enough digits to round-trip; scientific notation
/// outside [1e-4, 1e7).
fn fmt_const<S: Real>(v: S) -> String {
    let a = v.abs();
    if a != S::zero() && (a < S::of(1e-4) || a >= S::of(1e7)) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Renders the model as an infix formula over the given variable names,
/// e.g. `0.25·m·x^2·(w^2 + w0^2)`. Gated constants are printed with
/// round-trip precision; pinned (ungated) unit constants are omitted.
pub fn render<S: Real>(tree: &Gentree, params: &ParamAssignment<S>, names: &[String]) -> String {
    assert_eq!(tree.leaf_count(), params.leaves.len(), "leaf count mismatch");
    let mut next = 0;
    render_node(tree, &params.leaves, names, &mut next).0
}

// Precedence levels: 1 additive (also any string starting with a minus sign),
// 2 multiplicative (also multi-factor leaves), 3 atoms and function calls.
fn render_node<S: Real>(
    tree: &Gentree,
    leaves: &[LMonomial<S>],
    names: &[String],
    next: &mut usize,
) -> (String, u8) {
    match tree {
        Gentree::Leaf => {
            let m = &leaves[*next];
            *next += 1;
            let mut parts = Vec::new();
            if m.gated {
                parts.push(fmt_const(m.constant));
            }
            for (i, &p) in m.powers.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if p == 1 {
                    parts.push(names[i].clone());
                } else {
                    parts.push(format!("{}^{}", names[i], p));
                }
            }
            if parts.is_empty() {
                ("1".to_string(), 3)
            } else {
                let s = parts.join("·");
                let prec = if s.starts_with('-') {
                    1
                } else if parts.len() > 1 {
                    2
                } else {
                    3
                };
                (s, prec)
            }
        }
        Gentree::Unary(op, c) => {
            let (s, _) = render_node(c, leaves, names, next);
            (format!("{}({})", op.symbol(), s), 3)
        }
        Gentree::Binary(op, l, r) => {
            let my = if matches!(op, Op::Add | Op::Sub) { 1 } else { 2 };
            let (ls, lp) = render_node(l, leaves, names, next);
            let (rs, rp) = render_node(r, leaves, names, next);
            let left = if lp < my { format!("({ls})") } else { ls };
            let right = if rp < my || (rp == my && matches!(op, Op::Sub | Op::Div)) {
                format!("({rs})")
            } else {
                rs
            };
            let joined = match op {
                Op::Add => format!("{left} + {right}"),
                Op::Sub => format!("{left} - {right}"),
                Op::Mul => format!("{left}·{right}"),
                Op::Div => format!("{left}/{right}"),
                _ => unreachable!(),
            };
            (joined, my)
        }
    }
}
