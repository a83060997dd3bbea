//! Gentree catalog generation: exhaustive enumeration up to a depth bound,
//! algebraic redundancy pruning, and complexity ordering.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Gentree, Op};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("operator set is empty")]
    EmptyOperatorSet,
    #[error("unknown operator {0:?}")]
    BadOperator(String),
    #[error("unknown pruning rule {0:?}")]
    BadRule(String),
    #[error("restart plan is empty")]
    EmptyRestartPlan,
    #[error("{0}")]
    Invalid(String),
}

/// The operators available to one enumeration pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSet {
    binary: Vec<Op>,
    unary: Vec<Op>,
}

impl OperatorSet {
    pub fn new(ops: impl IntoIterator<Item = Op>) -> Result<Self, ConfigError> {
        let mut binary = Vec::new();
        let mut unary = Vec::new();
        for op in ops {
            let bucket = if op.is_binary() { &mut binary } else { &mut unary };
            if !bucket.contains(&op) {
                bucket.push(op);
            }
        }
        binary.sort();
        unary.sort();
        if binary.is_empty() && unary.is_empty() {
            return Err(ConfigError::EmptyOperatorSet);
        }
        Ok(OperatorSet { binary, unary })
    }

    /// The default search set: SUB is dropped (subtraction is absorbed by
    /// signed constants) and EXP is reserved for restarts.
    pub fn standard() -> Self {
        Self::new([Op::Add, Op::Mul, Op::Div, Op::Sqrt]).unwrap()
    }

    /// The restart set with SQRT swapped for EXP.
    pub fn with_exp() -> Self {
        Self::new([Op::Add, Op::Mul, Op::Div, Op::Exp]).unwrap()
    }

    pub fn full() -> Self {
        Self::new([Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Sqrt, Op::Exp]).unwrap()
    }

    /// Parses a comma-separated operator list, e.g. `"add,mul,div,sqrt"`.
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let mut ops = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            ops.push(Op::from_name(part).ok_or_else(|| ConfigError::BadOperator(part.trim().to_string()))?);
        }
        Self::new(ops)
    }

    pub fn binary_ops(&self) -> &[Op] {
        &self.binary
    }

    pub fn unary_ops(&self) -> &[Op] {
        &self.unary
    }

    pub fn contains(&self, op: Op) -> bool {
        self.binary.contains(&op) || self.unary.contains(&op)
    }

    pub fn names(&self) -> String {
        self.binary
            .iter()
            .chain(&self.unary)
            .map(|o| o.symbol())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Enable flags for the redundancy rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub r1: bool,
    pub r2a: bool,
    pub r2b: bool,
    pub r3: bool,
    pub sqrt_leaf: bool,
}

impl RuleSet {
    pub fn all() -> Self {
        RuleSet { r1: true, r2a: true, r2b: true, r3: true, sqrt_leaf: true }
    }

    pub fn none() -> Self {
        RuleSet { r1: false, r2a: false, r2b: false, r3: false, sqrt_leaf: false }
    }

    /// Parses `"all"`, `"none"`, or a comma list like `"r1,r3,sqrt-l"`.
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => return Ok(Self::all()),
            "none" => return Ok(Self::none()),
            _ => {}
        }
        let mut rules = Self::none();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            match part.trim().to_ascii_lowercase().as_str() {
                "r1" => rules.r1 = true,
                "r2a" => rules.r2a = true,
                "r2b" => rules.r2b = true,
                "r3" => rules.r3 = true,
                "sqrt-l" | "sqrtl" | "sqrt_leaf" => rules.sqrt_leaf = true,
                other => return Err(ConfigError::BadRule(other.to_string())),
            }
        }
        Ok(rules)
    }
}

/// Which redundancy rule removed a tree. `Display` gives the report names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PruneRule {
    R1,
    R2a,
    R2b,
    R3,
    SqrtLeaf,
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PruneRule::R1 => "R1",
            PruneRule::R2a => "R2a",
            PruneRule::R2b => "R2b",
            PruneRule::R3 => "R3",
            PruneRule::SqrtLeaf => "SQRT-L",
        };
        f.write_str(s)
    }
}

fn is_leaf(t: &Gentree) -> bool {
    matches!(t, Gentree::Leaf)
}

// additive node over two bare leaves, the `(L ± L)` shape of the rules
fn is_pm_ll(t: &Gentree) -> bool {
    matches!(t, Gentree::Binary(Op::Add | Op::Sub, l, r) if is_leaf(l) && is_leaf(r))
}

fn matches_rule(t: &Gentree, rule: PruneRule) -> bool {
    match rule {
        // L1 × L2 or L1 / L2: a product/quotient of monomials is a monomial
        PruneRule::R1 => {
            matches!(t, Gentree::Binary(Op::Mul | Op::Div, l, r) if is_leaf(l) && is_leaf(r))
        }
        // L × (L ± L) in either operand order: distributes to (L ± L)
        PruneRule::R2a => {
            matches!(t, Gentree::Binary(Op::Mul, l, r)
                if (is_leaf(l) && is_pm_ll(r)) || (is_pm_ll(l) && is_leaf(r)))
        }
        // (L ± L) × (L ± L): distributes to a four-term sum
        PruneRule::R2b => {
            matches!(t, Gentree::Binary(Op::Mul, l, r) if is_pm_ll(l) && is_pm_ll(r))
        }
        // (L ± L) / L: splits into a two-term sum
        PruneRule::R3 => {
            matches!(t, Gentree::Binary(Op::Div, l, r) if is_pm_ll(l) && is_leaf(r))
        }
        PruneRule::SqrtLeaf => matches!(t, Gentree::Unary(Op::Sqrt, c) if is_leaf(c)),
    }
}

const RULE_ORDER: [PruneRule; 5] =
    [PruneRule::R1, PruneRule::R2a, PruneRule::R2b, PruneRule::R3, PruneRule::SqrtLeaf];

fn rule_enabled(rules: &RuleSet, rule: PruneRule) -> bool {
    match rule {
        PruneRule::R1 => rules.r1,
        PruneRule::R2a => rules.r2a,
        PruneRule::R2b => rules.r2b,
        PruneRule::R3 => rules.r3,
        PruneRule::SqrtLeaf => rules.sqrt_leaf,
    }
}

/// Removal check with containment semantics: a tree is removed when any of
/// its subtrees matches an enabled rule. Rules are tried in a fixed order so
/// the reported rule is deterministic.
pub fn prune(t: &Gentree, rules: &RuleSet) -> Option<PruneRule> {
    for rule in RULE_ORDER {
        if !rule_enabled(rules, rule) {
            continue;
        }
        let mut hit = false;
        t.for_each_subtree(&mut |s| hit |= matches_rule(s, rule));
        if hit {
            return Some(rule);
        }
    }
    None
}

// Root-only variant used during bottom-up construction: children are drawn
// from already-pruned pools, so the root is the only new subtree.
fn prune_root(t: &Gentree, rules: &RuleSet) -> bool {
    RULE_ORDER.iter().any(|&rule| rule_enabled(rules, rule) && matches_rule(t, rule))
}

/// One enumeration pass's full configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumConfig {
    pub depth: usize,
    pub ops: OperatorSet,
    pub rules: RuleSet,
    /// Sort children of commutative nodes so operand-order duplicates
    /// collapse to one tree.
    pub canonicalize: bool,
}

impl EnumConfig {
    pub fn new(depth: usize, ops: OperatorSet) -> Self {
        EnumConfig { depth, ops, rules: RuleSet::all(), canonicalize: true }
    }

    /// The frozen calibration preset: no SUB, all rules including SQRT-L,
    /// commutative canonicalization on. Catalog sizes under this preset are
    /// golden values guarded by tests.
    pub fn paper_counts(depth: usize) -> Self {
        Self::new(depth, OperatorSet::standard())
    }
}

/// All surviving gentrees up to the configured depth, sorted ascending by
/// (node count, canonical serialization).
#[derive(Clone, Debug)]
pub struct GentreeCatalog {
    trees: Vec<Gentree>,
    depth: usize,
}

impl GentreeCatalog {
    /// Wraps a hand-picked tree list, kept in the given order. Scheduling
    /// honors that order, so tests can pin exact slice traces.
    pub fn from_trees(trees: Vec<Gentree>) -> Self {
        let depth = trees.iter().map(Gentree::depth).max().unwrap_or(0);
        GentreeCatalog { trees, depth }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[Gentree] {
        &self.trees
    }

    pub fn max_depth(&self) -> usize {
        self.depth
    }

    /// `counts[d]` = number of catalog trees of depth at most `d`,
    /// for every d up to the configured bound.
    pub fn cumulative_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.depth + 1];
        for t in &self.trees {
            counts[t.depth()] += 1;
        }
        for d in 1..counts.len() {
            counts[d] += counts[d - 1];
        }
        counts
    }
}

/// Enumerates every structurally distinct gentree of depth at most
/// `cfg.depth` over the operator set, drops trees matched by the enabled
/// rules, and sorts survivors by complexity.
///
/// Construction is bottom-up by exact depth: a binary node takes at least one
/// child of depth exactly `d - 1` (so each tree is built at its own depth
/// only), and pruning containment-closes for free because children come from
/// already-surviving pools.
pub fn enumerate_gentrees(cfg: &EnumConfig) -> Result<GentreeCatalog, ConfigError> {
    if cfg.ops.binary_ops().is_empty() && cfg.ops.unary_ops().is_empty() {
        return Err(ConfigError::EmptyOperatorSet);
    }
    let mut exact: Vec<Vec<Gentree>> = vec![vec![Gentree::Leaf]];
    for d in 1..=cfg.depth {
        let mut seen = BTreeSet::new();
        let (below, prev) = exact.split_at(d - 1);
        let prev = &prev[0];
        let below: Vec<&Gentree> = below.iter().flatten().collect();
        let mut pairs: Vec<(&Gentree, &Gentree)> = Vec::new();
        for l in prev {
            for r in below.iter().copied().chain(prev.iter()) {
                pairs.push((l, r));
            }
        }
        for &l in &below {
            for r in prev {
                pairs.push((l, r));
            }
        }
        for &op in cfg.ops.unary_ops() {
            for c in prev {
                consider(Gentree::unary(op, c.clone()), cfg, &mut seen);
            }
        }
        for &op in cfg.ops.binary_ops() {
            for &(l, r) in &pairs {
                consider(Gentree::binary(op, l.clone(), r.clone()), cfg, &mut seen);
            }
        }
        exact.push(seen.into_iter().map(|(_, t)| t).collect());
    }
    let mut trees: Vec<Gentree> = exact.into_iter().flatten().collect();
    trees.sort_by(|a, b| {
        a.node_count().cmp(&b.node_count()).then_with(|| a.serialize().cmp(&b.serialize()))
    });
    Ok(GentreeCatalog { trees, depth: cfg.depth })
}

fn consider(cand: Gentree, cfg: &EnumConfig, seen: &mut BTreeSet<(String, Gentree)>) {
    let t = if cfg.canonicalize { cand.canonicalized() } else { cand };
    if prune_root(&t, &cfg.rules) {
        return;
    }
    let key = t.serialize();
    seen.insert((key, t));
}
