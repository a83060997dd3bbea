//! Helpers shared by the integration tests: a pruning-free tree generator
//! and a no-shortcuts reference solver. Both stay deliberately dumb so they
//! can serve as oracles for the real implementations.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gentree::data::Dataset;
use gentree::enumerate::{prune, EnumConfig, OperatorSet};
use gentree::expr::Gentree;
use gentree::solver::{fit_constants, SolverConfig};

/// Every distinct tree of depth at most `depth` over `ops`, generated by
/// plain closure under the operators with no pruning and no canonical form.
pub fn naive_trees(depth: usize, ops: &OperatorSet) -> BTreeSet<Gentree> {
    let mut all = BTreeSet::new();
    all.insert(Gentree::Leaf);
    for _ in 0..depth {
        let prev: Vec<Gentree> = all.iter().cloned().collect();
        for &op in ops.unary_ops() {
            for c in &prev {
                all.insert(Gentree::unary(op, c.clone()));
            }
        }
        for &op in ops.binary_ops() {
            for l in &prev {
                for r in &prev {
                    all.insert(Gentree::binary(op, l.clone(), r.clone()));
                }
            }
        }
    }
    all
}

/// What the catalog ought to contain: generate everything, then apply the
/// canonical form and the removal rules as plain per-tree filters.
pub fn oracle_catalog(cfg: &EnumConfig) -> BTreeSet<Gentree> {
    let mut out = BTreeSet::new();
    for t in naive_trees(cfg.depth, &cfg.ops) {
        let t = if cfg.canonicalize { t.canonicalized() } else { t };
        if prune(&t, &cfg.rules).is_none() {
            out.insert(t);
        }
    }
    out
}

/// Best SSE over the whole discrete space by exhaustive iteration: every
/// gate pattern with at most `max_constants` gates, every power matrix in
/// the [-delta, delta] box passing the per-leaf tau budget. The continuous
/// subproblem is delegated to `fit_constants`, same as the real solver, so
/// disagreements isolate bugs in the search traversal itself.
pub fn brute_force_best_sse(
    tree: &Gentree,
    data: &Dataset<f64>,
    cfg: &SolverConfig<f64>,
) -> f64 {
    let m = tree.leaf_count();
    let n = data.n_vars();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize > cfg.max_constants {
            continue;
        }
        let z: Vec<bool> = (0..m).map(|j| mask >> j & 1 == 1).collect();
        let mut p = vec![-cfg.delta; m * n];
        'powers: loop {
            let tau_ok = (0..m).all(|leaf| {
                let s: i64 = p[leaf * n..(leaf + 1) * n]
                    .iter()
                    .map(|&v| v.unsigned_abs() as i64)
                    .sum();
                s <= cfg.tau as i64
            });
            if tau_ok {
                let (_, sse) = fit_constants(tree, &p, &z, data, cfg);
                if sse < best {
                    best = sse;
                }
            }
            for i in (0..m * n).rev() {
                if p[i] < cfg.delta {
                    p[i] += 1;
                    for q in p[i + 1..].iter_mut() {
                        *q = -cfg.delta;
                    }
                    continue 'powers;
                }
            }
            break;
        }
    }
    best
}

pub fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn plain_data(points: Vec<Vec<f64>>, targets: Vec<f64>, vars: &[&str]) -> Dataset<f64> {
    Dataset::new(names(vars), points, targets).unwrap()
}
