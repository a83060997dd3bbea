//! Dimensional analysis over exact rationals.
//!
//! Every tree node is assigned a symbolic unit vector: a linear form in the
//! integer leaf powers (and, when dimensioned constants are enabled, one free
//! rational vector per gated leaf). Operators induce equations between those
//! forms: ADD/SUB children must match, MUL sums, DIV subtracts, SQRT halves,
//! EXP forces dimensionless, and the root must match the target units. Free
//! constant vectors are eliminated exactly by Gaussian elimination, leaving a
//! linear system over the integer powers alone that the feasibility iterator
//! walks lazily.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::data::UnitTable;
use crate::expr::{CandidateModel, Gentree, Op};
use crate::{Rat, Real};

/// Exponents of one quantity over the base dimensions, exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitVector(pub Vec<Rat>);

impl UnitVector {
    pub fn zeros(n_dims: usize) -> Self {
        UnitVector(vec![Rat::zero(); n_dims])
    }

    pub fn from_ints(exps: &[i64]) -> Self {
        UnitVector(exps.iter().map(|&e| Rat::from_integer(e)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|r| r.is_zero())
    }

    /// Parses one exponent written as a (signed) decimal, e.g. `-2`, `0.5`,
    /// `1.25`. The value is represented exactly.
    pub fn parse_decimal(field: &str) -> Result<Rat, String> {
        let s = field.trim();
        let (sign, digits) = match s.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, s.strip_prefix('+').unwrap_or(s)),
        };
        if digits.is_empty() {
            return Err(format!("empty unit exponent {field:?}"));
        }
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.chars().chain(frac_part.chars()).any(|c| !c.is_ascii_digit())
            || (int_part.is_empty() && frac_part.is_empty())
            || frac_part.len() > 12
        {
            return Err(format!("malformed unit exponent {field:?}"));
        }
        let int_val: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| format!("unit exponent {field:?} out of range"))? };
        let mut num = int_val;
        let mut den = 1i64;
        for c in frac_part.chars() {
            num = num.checked_mul(10).and_then(|n| n.checked_add((c as u8 - b'0') as i64))
                .ok_or_else(|| format!("unit exponent {field:?} out of range"))?;
            den *= 10;
        }
        Ok(Rat::new(sign * num, den))
    }
}

impl std::fmt::Display for UnitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// One scalar equation over the flattened leaf powers:
/// `sum(coeffs[v] * p[v]) = rhs`, tagged with the base dimension it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRow {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
    pub dim: usize,
}

/// Unit constraints for one tree and gate pattern, already free of constant
/// unit vectors. Power variables are flattened as `leaf * n_vars + var`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitConstraintSystem {
    pub n_leaves: usize,
    pub n_vars: usize,
    pub rows: Vec<ConstraintRow>,
}

impl UnitConstraintSystem {
    pub fn n_power_vars(&self) -> usize {
        self.n_leaves * self.n_vars
    }

    /// Exact check of every row against a concrete flattened assignment.
    pub fn is_satisfied_by(&self, powers: &[i32]) -> bool {
        assert_eq!(powers.len(), self.n_power_vars(), "power vector length mismatch");
        self.rows.iter().all(|row| {
            let mut acc = Rat::zero();
            for (c, &p) in row.coeffs.iter().zip(powers) {
                acc += *c * Rat::from_integer(p as i64);
            }
            acc == row.rhs
        })
    }

    /// A row with no power coefficients but a nonzero right-hand side proves
    /// the whole system infeasible regardless of the integer box.
    pub fn contradiction(&self) -> Option<&ConstraintRow> {
        self.rows.iter().find(|r| r.rhs != Rat::zero() && r.coeffs.iter().all(Rat::is_zero))
    }
}

// Linear form of one node's unit vector: per dimension, coefficients over the
// flattened powers plus coefficients of the free per-leaf constant vectors.
struct NodeForm {
    p: Vec<Vec<Rat>>,
    w: Vec<Vec<Rat>>,
}

struct RawRow {
    p: Vec<Rat>,
    w: Vec<Rat>,
    rhs: Rat,
    dim: usize,
}

/// Builds the unit-constraint system for `tree` under gate pattern `z`.
/// With `dimensioned_constants`, every gated leaf contributes a free rational
/// unit vector that is eliminated before the system is returned; equations
/// fully absorbed by a free vector are dropped as vacuous.
pub fn tree_unit_constraints(
    tree: &Gentree,
    z: &[bool],
    table: &UnitTable,
    dimensioned_constants: bool,
) -> UnitConstraintSystem {
    let m = tree.leaf_count();
    assert_eq!(z.len(), m, "gate pattern length mismatch");
    let n = table.var_units.len();
    let b = table.n_dims();
    assert_eq!(table.target_units.len(), b, "target unit arity mismatch");
    let n_p = m * n;

    let mut rows: Vec<RawRow> = Vec::new();
    let mut next_leaf = 0usize;
    let root =
        build_form(tree, z, table, dimensioned_constants, n_p, m, b, n, &mut next_leaf, &mut rows);
    for d in 0..b {
        rows.push(RawRow {
            p: root.p[d].clone(),
            w: root.w[d].clone(),
            rhs: table.target_units.0[d],
            dim: d,
        });
    }

    // Eliminate each free scalar w[j, d]. Rows of different dimensions never
    // share one, so elimination groups by (leaf, dim). Pivot rows are dropped:
    // a free vector component absorbs whatever value the row would demand.
    for j in 0..m {
        for d in 0..b {
            let idxs: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.dim == d && !r.w[j].is_zero())
                .map(|(i, _)| i)
                .collect();
            let Some((&pivot_idx, rest)) = idxs.split_first() else { continue };
            let pivot = std::mem::replace(
                &mut rows[pivot_idx],
                RawRow { p: vec![Rat::zero(); n_p], w: vec![Rat::zero(); m], rhs: Rat::zero(), dim: d },
            );
            for &ri in rest {
                let factor = rows[ri].w[j] / pivot.w[j];
                for v in 0..n_p {
                    let delta = factor * pivot.p[v];
                    rows[ri].p[v] -= delta;
                }
                for wj in 0..m {
                    let delta = factor * pivot.w[wj];
                    rows[ri].w[wj] -= delta;
                }
                let rhs_delta = factor * pivot.rhs;
                rows[ri].rhs -= rhs_delta;
            }
        }
    }

    let out = rows
        .into_iter()
        .filter(|r| {
            debug_assert!(r.w.iter().all(Rat::is_zero), "unresolved free unit vector");
            !(r.rhs.is_zero() && r.p.iter().all(Rat::is_zero))
        })
        .map(|r| ConstraintRow { coeffs: r.p, rhs: r.rhs, dim: r.dim })
        .collect();

    UnitConstraintSystem { n_leaves: m, n_vars: n, rows: out }
}

#[allow(clippy::too_many_arguments)]
fn build_form(
    tree: &Gentree,
    z: &[bool],
    table: &UnitTable,
    dimensioned: bool,
    n_p: usize,
    m: usize,
    b: usize,
    n: usize,
    next_leaf: &mut usize,
    rows: &mut Vec<RawRow>,
) -> NodeForm {
    match tree {
        Gentree::Leaf => {
            let j = *next_leaf;
            *next_leaf += 1;
            let mut form = NodeForm {
                p: vec![vec![Rat::zero(); n_p]; b],
                w: vec![vec![Rat::zero(); m]; b],
            };
            for d in 0..b {
                for i in 0..n {
                    form.p[d][j * n + i] = table.var_units[i].0[d];
                }
                if z[j] && dimensioned {
                    form.w[d][j] = Rat::from_integer(1);
                }
            }
            form
        }
        Gentree::Unary(op, c) => {
            let child = build_form(c, z, table, dimensioned, n_p, m, b, n, next_leaf, rows);
            match op {
                Op::Sqrt => {
                    let half = Rat::new(1, 2);
                    NodeForm {
                        p: child.p.iter().map(|r| r.iter().map(|c| *c * half).collect()).collect(),
                        w: child.w.iter().map(|r| r.iter().map(|c| *c * half).collect()).collect(),
                    }
                }
                Op::Exp => {
                    // argument and result are both dimensionless
                    for d in 0..b {
                        rows.push(RawRow {
                            p: child.p[d].clone(),
                            w: child.w[d].clone(),
                            rhs: Rat::zero(),
                            dim: d,
                        });
                    }
                    NodeForm {
                        p: vec![vec![Rat::zero(); n_p]; b],
                        w: vec![vec![Rat::zero(); m]; b],
                    }
                }
                _ => unreachable!("binary operator in unary node"),
            }
        }
        Gentree::Binary(op, l, r) => {
            let left = build_form(l, z, table, dimensioned, n_p, m, b, n, next_leaf, rows);
            let right = build_form(r, z, table, dimensioned, n_p, m, b, n, next_leaf, rows);
            match op {
                Op::Add | Op::Sub => {
                    for d in 0..b {
                        rows.push(RawRow {
                            p: sub_vec(&left.p[d], &right.p[d]),
                            w: sub_vec(&left.w[d], &right.w[d]),
                            rhs: Rat::zero(),
                            dim: d,
                        });
                    }
                    left
                }
                Op::Mul => NodeForm {
                    p: zip_vecs(&left.p, &right.p, |a, b| a + b),
                    w: zip_vecs(&left.w, &right.w, |a, b| a + b),
                },
                Op::Div => NodeForm {
                    p: zip_vecs(&left.p, &right.p, |a, b| a - b),
                    w: zip_vecs(&left.w, &right.w, |a, b| a - b),
                },
                _ => unreachable!("unary operator in binary node"),
            }
        }
    }
}

fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

fn zip_vecs(a: &[Vec<Rat>], b: &[Vec<Rat>], f: impl Fn(Rat, Rat) -> Rat) -> Vec<Vec<Rat>> {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| f(*x, *y)).collect()).collect()
}

/// Lazy lexicographic enumeration of all flattened power assignments in
/// `[-delta, delta]^(m*n)` with per-leaf absolute power sums at most `tau`
/// that satisfy every constraint row exactly.
///
/// The walk is an odometer with exact interval propagation: a prefix is
/// abandoned as soon as some row cannot be completed by any suffix within the
/// box. Output order is lexicographic with coordinates ascending from
/// `-delta`, which also makes pause/resume cursors well defined (see
/// [`PowerIter::seek_after`]).
pub struct PowerIter {
    rows: Vec<ConstraintRow>,
    // suffix_slack[r][v] bounds |sum over coords >= v of coeffs * p| by
    // delta * sum of |coeffs|; index v == n_power_vars means zero slack.
    suffix_slack: Vec<Vec<Rat>>,
    state: Vec<i32>,
    row_fixed: Vec<Rat>,
    leaf_abs: Vec<i32>,
    prefix_len: usize,
    delta: i32,
    tau: i32,
    n_vars: usize,
    total: usize,
    phase: IterPhase,
}

#[derive(PartialEq)]
enum IterPhase {
    Fresh,
    Running,
    Done,
}

impl PowerIter {
    pub fn new(sys: &UnitConstraintSystem, delta: i32, tau: i32) -> Self {
        Self::build(sys.rows.clone(), sys.n_leaves, sys.n_vars, delta, tau)
    }

    /// Box-only enumeration, for runs without unit information.
    pub fn unconstrained(n_leaves: usize, n_vars: usize, delta: i32, tau: i32) -> Self {
        Self::build(Vec::new(), n_leaves, n_vars, delta, tau)
    }

    fn build(rows: Vec<ConstraintRow>, m: usize, n: usize, delta: i32, tau: i32) -> Self {
        assert!(delta >= 0 && tau >= 0, "bounds must be non-negative");
        let total = m * n;
        let d = Rat::from_integer(delta as i64);
        let suffix_slack = rows
            .iter()
            .map(|row| {
                let mut s = vec![Rat::zero(); total + 1];
                for v in (0..total).rev() {
                    s[v] = s[v + 1] + row.coeffs[v].abs() * d;
                }
                s
            })
            .collect();
        PowerIter {
            row_fixed: vec![Rat::zero(); rows.len()],
            rows,
            suffix_slack,
            state: vec![0; total],
            leaf_abs: vec![0; m],
            prefix_len: 0,
            delta,
            tau,
            n_vars: n,
            total,
            phase: IterPhase::Fresh,
        }
    }

    /// Positions the cursor so the next item is the first feasible
    /// assignment lexicographically after `last` (normally the most recently
    /// emitted assignment, when resuming a paused scan).
    pub fn seek_after(&mut self, last: &[i32]) {
        assert_eq!(last.len(), self.total, "cursor length mismatch");
        self.reset_sums();
        for (v, &val) in last.iter().enumerate() {
            self.enter(v, val);
        }
        self.phase = IterPhase::Running;
    }

    fn reset_sums(&mut self) {
        self.row_fixed.iter_mut().for_each(|r| *r = Rat::zero());
        self.leaf_abs.iter_mut().for_each(|a| *a = 0);
        self.prefix_len = 0;
    }

    fn enter(&mut self, v: usize, val: i32) {
        self.state[v] = val;
        let rv = Rat::from_integer(val as i64);
        for (fixed, row) in self.row_fixed.iter_mut().zip(&self.rows) {
            *fixed += row.coeffs[v] * rv;
        }
        self.leaf_abs[v / self.n_vars] += val.abs();
        self.prefix_len = v + 1;
    }

    fn leave(&mut self, v: usize) {
        let rv = Rat::from_integer(self.state[v] as i64);
        for (fixed, row) in self.row_fixed.iter_mut().zip(&self.rows) {
            *fixed -= row.coeffs[v] * rv;
        }
        self.leaf_abs[v / self.n_vars] -= self.state[v].abs();
        self.prefix_len = v;
    }

    fn prefix_ok(&self) -> bool {
        if self.leaf_abs.iter().any(|&a| a > self.tau) {
            return false;
        }
        let v = self.prefix_len;
        for (r, row) in self.rows.iter().enumerate() {
            let diff = row.rhs - self.row_fixed[r];
            if diff.abs() > self.suffix_slack[r][v] {
                return false;
            }
        }
        true
    }

    // Moves to the next feasible full assignment. `increment` distinguishes
    // "bump the last coordinate" (after an emission) from "extend the current
    // prefix with minimal values".
    fn advance(&mut self, mut increment: bool) -> bool {
        loop {
            if increment {
                if self.prefix_len == 0 {
                    return false;
                }
                let v = self.prefix_len - 1;
                if self.state[v] >= self.delta {
                    self.leave(v);
                    continue;
                }
                let nv = self.state[v] + 1;
                self.leave(v);
                self.enter(v, nv);
            } else {
                if self.prefix_len == self.total {
                    return true;
                }
                let v = self.prefix_len;
                self.enter(v, -self.delta);
            }
            increment = !self.prefix_ok();
        }
    }
}

impl Iterator for PowerIter {
    type Item = Vec<i32>;

    fn next(&mut self) -> Option<Vec<i32>> {
        let increment = match self.phase {
            IterPhase::Done => return None,
            IterPhase::Fresh => false,
            IterPhase::Running => true,
        };
        // Empty variable space: a single empty assignment, feasible only if
        // no row demands a nonzero right-hand side.
        if self.total == 0 {
            self.phase = IterPhase::Done;
            if !increment && self.rows.iter().all(|r| r.rhs.is_zero()) {
                return Some(Vec::new());
            }
            return None;
        }
        if self.advance(increment) {
            self.phase = IterPhase::Running;
            Some(self.state.clone())
        } else {
            self.phase = IterPhase::Done;
            None
        }
    }
}

/// All dimensionally consistent power assignments for the system, lazily and
/// in lexicographic order. An immediately empty iterator with
/// [`UnitConstraintSystem::contradiction`] set apart distinguishes "no
/// integer point fits the box" from "the system itself is contradictory".
pub fn feasible_power_sets(sys: &UnitConstraintSystem, delta: i32, tau: i32) -> PowerIter {
    PowerIter::new(sys, delta, tau)
}

/// Audit helper: true when the model's powers satisfy the unit constraints
/// for its own gate pattern. Datasets without units vacuously pass.
pub fn check_model_units<S: Real>(
    model: &CandidateModel<S>,
    table: &UnitTable,
    dimensioned_constants: bool,
) -> bool {
    let z = model.params.gate_pattern();
    let sys = tree_unit_constraints(&model.tree, &z, table, dimensioned_constants);
    sys.is_satisfied_by(&model.params.flat_powers())
}
