//! Per-gentree fitting.
//!
//! One gentree's fitting problem is solved by exhausting the discrete part
//! (constant gates, then dimensionally feasible integer powers) and fitting
//! the continuous constants for every discrete assignment: a closed-form
//! least-squares solve when the gated constants enter linearly, a dense grid
//! over the constant box with local refinement otherwise. The search pauses
//! cleanly on a wall-clock budget and resumes from a cursor without
//! revisiting (or skipping) assignments.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::dimension::{feasible_power_sets, tree_unit_constraints, PowerIter};
use crate::enumerate::ConfigError;
use crate::expr::{eval_lmonomial, sse, CandidateModel, Gentree, LMonomial, Op, ParamAssignment};
use crate::interval::{AllError, Iv, IvResult};
use crate::Real;

/// Search bounds and tolerances for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<S> {
    /// maximum gentree depth d
    pub depth: usize,
    /// maximum number of gated constants k
    pub max_constants: usize,
    /// constant box: gated constants live in [-omega, omega]
    pub omega: S,
    /// per-variable power bound: |p| <= delta
    pub delta: i32,
    /// per-leaf power budget: sum of |p| <= tau
    pub tau: i32,
    /// target SSE; at or below it a model counts as solved
    pub tol: S,
    /// overall wall-clock limit in seconds for a search
    pub time_limit_s: f64,
    /// denominators smaller than this in magnitude are domain errors
    pub eps_div: S,
    /// total grid budget for the constant search (per-axis count is the
    /// c-th root for c gated constants)
    pub grid_points: usize,
    /// how many best grid cells get local refinement
    pub multistart: usize,
    /// gated constants may carry their own physical units
    pub dimensioned_constants: bool,
    pub bound_kind: BoundKind,
}

/// Which lower bound `solve_gentree` computes before enumerating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// Always 0: only an incumbent that is already perfect triggers a cutoff.
    Trivial,
    /// Interval arithmetic over the whole parameter box.
    Interval,
}

impl<S: Real> Default for SolverConfig<S> {
    fn default() -> Self {
        SolverConfig {
            depth: 3,
            max_constants: 1,
            omega: S::of(100.0),
            delta: 2,
            tau: 6,
            tol: S::of(1e-4),
            time_limit_s: 600.0,
            eps_div: S::of(1e-30),
            grid_points: 2001,
            multistart: 8,
            dimensioned_constants: true,
            bound_kind: BoundKind::Trivial,
        }
    }
}

impl<S: Real> SolverConfig<S> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        if !(self.omega > S::zero()) {
            return bad("omega must be positive");
        }
        if self.delta < 0 || self.tau < 0 {
            return bad("power bounds must be non-negative");
        }
        if !(self.tol > S::zero()) {
            return bad("tol must be positive");
        }
        if !(self.time_limit_s > 0.0) {
            return bad("time limit must be positive");
        }
        if !(self.eps_div > S::zero()) {
            return bad("eps_div must be positive");
        }
        if self.grid_points < 2 {
            return bad("grid needs at least 2 points");
        }
        if self.multistart == 0 {
            return bad("multistart must be at least 1");
        }
        Ok(())
    }
}

/// Shared-search hooks polled between power assignments. The standalone
/// defaults never cut off and never cancel.
pub trait SearchProbe: Sync {
    /// Best SSE found anywhere so far.
    fn incumbent(&self) -> f64 {
        f64::INFINITY
    }

    /// Cooperative cancellation: a paused status is returned promptly.
    fn cancelled(&self) -> bool {
        false
    }
}

/// Probe for standalone solves.
pub struct NoProbe;

impl SearchProbe for NoProbe {}

/// Resumable position in one gentree's assignment stream, plus the best
/// model found so far so a resumed run reports the same answer an
/// uninterrupted one would.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SolveCursor<S: Real> {
    pub z_index: usize,
    /// last power assignment already fitted under pattern `z_index`;
    /// `None` when that pattern has not produced one yet
    pub last_powers: Option<Vec<i32>>,
    pub best: Option<CandidateModel<S>>,
}

/// Outcome of one `solve_gentree` call.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "")]
pub enum SolveStatus<S: Real> {
    /// best model reached the tolerance; search stopped early
    Solved(CandidateModel<S>),
    /// every assignment was tried; best may be absent when all were infeasible
    Exhausted(Option<CandidateModel<S>>),
    /// the lower bound already meets the incumbent, nothing here can win
    Cutoff { bound: S },
    /// global time limit: best-so-far, assigned by the scheduler
    Timeout(Option<CandidateModel<S>>),
    /// slice budget or cancellation; resume with the cursor
    Paused(SolveCursor<S>),
}

impl<S: Real> SolveStatus<S> {
    pub fn best_model(&self) -> Option<&CandidateModel<S>> {
        match self {
            SolveStatus::Solved(m) => Some(m),
            SolveStatus::Exhausted(b) | SolveStatus::Timeout(b) => b.as_ref(),
            SolveStatus::Paused(c) => c.best.as_ref(),
            SolveStatus::Cutoff { .. } => None,
        }
    }
}

/// All gate patterns with at most `k` gated leaves, fewest gates first so the
/// constant-free exact fit is tried earliest; ties in ascending bit order
/// with leaf 0 as the lowest bit.
pub fn gate_patterns(m: usize, k: usize) -> Vec<Vec<bool>> {
    assert!(m <= 24, "leaf count {m} out of range");
    let mut masks: Vec<u32> = (0..(1u32 << m)).filter(|b| b.count_ones() as usize <= k).collect();
    masks.sort_by_key(|b| (b.count_ones(), *b));
    masks
        .into_iter()
        .map(|b| (0..m).map(|j| b & (1 << j) != 0).collect())
        .collect()
}

/// Deterministic preference order between fitted models: lower SSE, then
/// smaller total power, then lexicographically smaller powers, then smaller
/// constants.
pub fn prefer<S: Real>(a: &CandidateModel<S>, b: &CandidateModel<S>) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let sse = a.sse.partial_cmp(&b.sse).expect("SSE is never NaN");
    if sse != Ordering::Equal {
        return sse;
    }
    let pa: i64 = a.params.leaves.iter().map(|l| l.abs_power_sum()).sum();
    let pb: i64 = b.params.leaves.iter().map(|l| l.abs_power_sum()).sum();
    pa.cmp(&pb)
        .then_with(|| a.params.flat_powers().cmp(&b.params.flat_powers()))
        .then_with(|| {
            let ha: Vec<S> = a.params.leaves.iter().map(|l| l.constant.abs()).collect();
            let hb: Vec<S> = b.params.leaves.iter().map(|l| l.constant.abs()).collect();
            ha.partial_cmp(&hb).expect("constants are never NaN")
        })
}

/// Exhausts one gentree's assignment space within a wall-clock budget.
///
/// Gate patterns are scanned fewest-constants-first; inside a pattern,
/// dimensionally feasible power assignments stream in lexicographic order
/// and each one gets its constants fitted. The first model at or below
/// `cfg.tol` returns immediately as `Solved`. The incumbent (the passed
/// value, refreshed through `probe` between assignments) cuts the whole tree
/// off when the precomputed lower bound already matches it.
pub fn solve_gentree<S: Real>(
    tree: &Gentree,
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    incumbent_sse: S,
    budget_s: f64,
    resume: Option<SolveCursor<S>>,
    probe: &dyn SearchProbe,
) -> SolveStatus<S> {
    let start = Instant::now();
    let m = tree.leaf_count();
    let n = data.n_vars();
    let bound = lower_bound(tree, data, cfg, &PartialAssignment::all_free(m));
    let refreshed = |initial: S| -> S {
        let shared = S::of(probe.incumbent());
        if shared < initial {
            shared
        } else {
            initial
        }
    };
    if bound >= refreshed(incumbent_sse) {
        return SolveStatus::Cutoff { bound };
    }
    let mut best: Option<CandidateModel<S>> = resume.as_ref().and_then(|c| c.best.clone());
    let (z_start, mut seek) = match resume {
        Some(c) => (c.z_index, c.last_powers),
        None => (0, None),
    };
    let patterns = gate_patterns(m, cfg.max_constants.min(m));
    // Budget pauses only after at least one assignment is fitted, so every
    // slice makes progress no matter how small it is.
    let mut processed: u64 = 0;
    for zi in z_start..patterns.len() {
        let z = &patterns[zi];
        let mut iter = match &data.units {
            Some(units) => {
                let sys = tree_unit_constraints(tree, z, units, cfg.dimensioned_constants);
                feasible_power_sets(&sys, cfg.delta, cfg.tau)
            }
            None => PowerIter::unconstrained(m, n, cfg.delta, cfg.tau),
        };
        let mut last_done = seek.take();
        if let Some(last) = &last_done {
            iter.seek_after(last);
        }
        loop {
            if probe.cancelled() || (processed > 0 && start.elapsed().as_secs_f64() > budget_s) {
                return SolveStatus::Paused(SolveCursor {
                    z_index: zi,
                    last_powers: last_done,
                    best,
                });
            }
            let Some(powers) = iter.next() else { break };
            let (params, fit_sse) = fit_constants(tree, &powers, z, data, cfg);
            processed += 1;
            if fit_sse.is_finite() {
                let cand = CandidateModel::new(tree.clone(), params, fit_sse);
                let replace = match &best {
                    None => true,
                    Some(b) => prefer(&cand, b) == std::cmp::Ordering::Less,
                };
                if replace {
                    if cand.sse <= cfg.tol {
                        return SolveStatus::Solved(cand);
                    }
                    best = Some(cand);
                }
            }
            if bound >= refreshed(incumbent_sse) {
                return SolveStatus::Cutoff { bound };
            }
            last_done = Some(powers);
        }
    }
    SolveStatus::Exhausted(best)
}

/// Fits the gated constants of one fully discrete assignment.
///
/// When every gated leaf reaches the root through ADD/SUB nodes and MUL
/// nodes whose other operand holds no gated leaf, the model is affine in the
/// constants and a box-clamped least-squares solve is exact. Any DIV, SQRT,
/// or EXP on the path makes the dependence nonlinear and the constants are
/// searched on a dense grid with golden-section refinement instead. The
/// returned SSE is always the one recomputed by the shared evaluator.
pub fn fit_constants<S: Real>(
    tree: &Gentree,
    powers: &[i32],
    z: &[bool],
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
) -> (ParamAssignment<S>, S) {
    let m = tree.leaf_count();
    let n = data.n_vars();
    assert_eq!(powers.len(), m * n, "flattened power length mismatch");
    assert_eq!(z.len(), m, "gate pattern length mismatch");
    let leaves: Vec<LMonomial<S>> = (0..m)
        .map(|j| {
            let p = powers[j * n..(j + 1) * n].to_vec();
            if z[j] {
                LMonomial::gated(p, S::one())
            } else {
                LMonomial::ungated(p)
            }
        })
        .collect();
    let mut params = ParamAssignment::new(leaves);
    let gated: Vec<usize> = (0..m).filter(|&j| z[j]).collect();
    if gated.is_empty() {
        let v = sse(tree, &params, data, cfg.eps_div);
        return (params, v);
    }
    if linear_in_gates(tree, z) {
        if let Some(result) = fit_linear(tree, &mut params, &gated, data, cfg) {
            return (params, result);
        }
    }
    let v = fit_grid(tree, &mut params, &gated, data, cfg);
    (params, v)
}

// True when the model value is affine in the gated constants: every gated
// leaf's path to the root crosses only ADD/SUB, or MUL with a gated-free
// sibling. DIV is excluded even for numerators, trading a cheap closed form
// for one uniform rule.
fn linear_in_gates(tree: &Gentree, z: &[bool]) -> bool {
    fn rec(t: &Gentree, z: &[bool], next: &mut usize, ok: &mut bool) -> bool {
        match t {
            Gentree::Leaf => {
                let j = *next;
                *next += 1;
                z[j]
            }
            Gentree::Unary(_, c) => {
                let has = rec(c, z, next, ok);
                if has {
                    *ok = false;
                }
                has
            }
            Gentree::Binary(op, l, r) => {
                let hl = rec(l, z, next, ok);
                let hr = rec(r, z, next, ok);
                match op {
                    Op::Add | Op::Sub => {}
                    Op::Mul => {
                        if hl && hr {
                            *ok = false;
                        }
                    }
                    Op::Div => {
                        if hl || hr {
                            *ok = false;
                        }
                    }
                    _ => unreachable!("unary operator in binary node"),
                }
                hl || hr
            }
        }
    }
    let mut ok = true;
    let mut next = 0;
    rec(tree, z, &mut next, &mut ok);
    ok
}

// Closed-form least squares for the affine case: f(x; h) = base(x) + sum_j
// h_j * g_j(x). Returns None on a (rare) singular system, falling back to
// the grid. Domain errors cannot depend on h here, so an error at h = 0
// means the whole assignment is infeasible.
fn fit_linear<S: Real>(
    tree: &Gentree,
    params: &mut ParamAssignment<S>,
    gated: &[usize],
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
) -> Option<S> {
    let c = gated.len();
    let pts = data.n_points();
    for &j in gated {
        params.leaves[j].constant = S::zero();
    }
    let mut base = Vec::with_capacity(pts);
    for x in &data.points {
        match crate::expr::eval_gentree(tree, params, x, cfg.eps_div) {
            Ok(v) => base.push(v),
            Err(_) => {
                for &j in gated {
                    params.leaves[j].constant = S::one();
                }
                return Some(S::infinity());
            }
        }
    }
    let mut cols: Vec<Vec<S>> = Vec::with_capacity(c);
    for (ci, &j) in gated.iter().enumerate() {
        params.leaves[j].constant = S::one();
        let mut col = Vec::with_capacity(pts);
        for (i, x) in data.points.iter().enumerate() {
            match crate::expr::eval_gentree(tree, params, x, cfg.eps_div) {
                Ok(v) => col.push(v - base[i]),
                Err(_) => {
                    // affine structure guarantees h-independent domain
                    // behavior; only float overflow at h = 1 lands here
                    for &jj in &gated[..=ci] {
                        params.leaves[jj].constant = S::one();
                    }
                    return None;
                }
            }
        }
        cols.push(col);
        params.leaves[j].constant = S::zero();
    }
    // normal equations over c <= 3 unknowns
    let mut a = vec![vec![S::zero(); c]; c];
    let mut b = vec![S::zero(); c];
    for i in 0..pts {
        let r = data.targets[i] - base[i];
        for p in 0..c {
            b[p] = b[p] + cols[p][i] * r;
            for q in 0..c {
                a[p][q] = a[p][q] + cols[p][i] * cols[q][i];
            }
        }
    }
    let h = solve_spd(&mut a, &mut b)?;
    let omega = cfg.omega;
    let clamp = |v: S| v.max(-omega).min(omega);
    let mut h: Vec<S> = h.into_iter().map(clamp).collect();
    if c > 1 {
        // box-constrained refinement: per-coordinate exact minimizer, clamped
        for _ in 0..100 {
            let mut moved = S::zero();
            for p in 0..c {
                let app = {
                    let mut acc = S::zero();
                    for (i, col) in cols[p].iter().enumerate() {
                        let mut others = base[i];
                        for q in 0..c {
                            if q != p {
                                others = others + h[q] * cols[q][i];
                            }
                        }
                        acc = acc + *col * (data.targets[i] - others);
                    }
                    acc
                };
                let diag = {
                    let mut d = S::zero();
                    for v in &cols[p] {
                        d = d + *v * *v;
                    }
                    d
                };
                if diag > S::zero() {
                    let nv = clamp(app / diag);
                    moved = moved.max((nv - h[p]).abs());
                    h[p] = nv;
                }
            }
            if moved < S::of(1e-14) {
                break;
            }
        }
    }
    for (ci, &j) in gated.iter().enumerate() {
        params.leaves[j].constant = h[ci];
    }
    Some(sse(tree, params, data, cfg.eps_div))
}

fn solve_spd<S: Real>(a: &mut [Vec<S>], b: &mut [S]) -> Option<Vec<S>> {
    let c = b.len();
    for col in 0..c {
        let mut piv = col;
        for r in col + 1..c {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < S::of(1e-280) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..c {
            let f = a[r][col] / a[col][col];
            for k in col..c {
                let delta = f * a[col][k];
                a[r][k] = a[r][k] - delta;
            }
            let delta = f * b[col];
            b[r] = b[r] - delta;
        }
    }
    let mut h = vec![S::zero(); c];
    for col in (0..c).rev() {
        let mut acc = b[col];
        for k in col + 1..c {
            acc = acc - a[col][k] * h[k];
        }
        h[col] = acc / a[col][col];
        if !h[col].is_finite() {
            return None;
        }
    }
    Some(h)
}

// Dense grid over [-omega, omega]^c followed by golden-section refinement of
// the best cells. No early exit: the scan is deterministic and exhaustive so
// paused and fresh runs agree. Exact grid nodes (the grid spans the box with
// per - 1 equal steps) keep exact-rational constants like -1 or 0.5 bit-clean
// when they already fit perfectly, because refinement only replaces the best
// on a strict improvement.
fn fit_grid<S: Real>(
    tree: &Gentree,
    params: &mut ParamAssignment<S>,
    gated: &[usize],
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
) -> S {
    let c = gated.len();
    let per: usize = if c == 1 {
        cfg.grid_points
    } else {
        let root = (cfg.grid_points as f64).powf(1.0 / c as f64).floor() as usize;
        root.max(2)
    };
    let lo = -cfg.omega;
    let span = cfg.omega + cfg.omega;
    let node = |t: usize| lo + span * S::of(t as f64) / S::of((per - 1) as f64);
    let step = span / S::of((per - 1) as f64);
    let eval_at = |h: &[S], params: &mut ParamAssignment<S>| -> S {
        for (ci, &j) in gated.iter().enumerate() {
            params.leaves[j].constant = h[ci];
        }
        sse(tree, params, data, cfg.eps_div)
    };
    let mut cells: Vec<(S, Vec<S>)> = Vec::new();
    let mut idx = vec![0usize; c];
    let mut h = vec![S::zero(); c];
    loop {
        for (ci, &t) in idx.iter().enumerate() {
            h[ci] = node(t);
        }
        let v = eval_at(&h, params);
        cells.push((v, h.clone()));
        // odometer over the product grid
        let mut ci = 0;
        loop {
            if ci == c {
                break;
            }
            idx[ci] += 1;
            if idx[ci] < per {
                break;
            }
            idx[ci] = 0;
            ci += 1;
        }
        if ci == c {
            break;
        }
    }
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&x, &y| {
        cells[x].0.partial_cmp(&cells[y].0).expect("SSE is never NaN").then(x.cmp(&y))
    });
    // Best over every probe ever made; only strict improvements replace it,
    // so an exact grid node that already fits stays bit-identical.
    let mut best_h = cells[order[0]].1.clone();
    let mut best_v = cells[order[0]].0;
    for &cell in order.iter().take(cfg.multistart) {
        let mut cur = cells[cell].1.clone();
        let mut cur_val = cells[cell].0;
        if c == 1 {
            let a = (cur[0] - step).max(-cfg.omega);
            let b = (cur[0] + step).min(cfg.omega);
            let (arg, val) = golden_min(|v| eval_at(&[v], params), a, b);
            if val < best_v {
                best_v = val;
                best_h = vec![arg];
            }
        } else {
            for _round in 0..60 {
                let round_start = cur_val;
                for ci in 0..c {
                    let a = (cur[ci] - step).max(-cfg.omega);
                    let b = (cur[ci] + step).min(cfg.omega);
                    let (arg, val) = golden_min(
                        |v| {
                            let mut probe = cur.clone();
                            probe[ci] = v;
                            eval_at(&probe, params)
                        },
                        a,
                        b,
                    );
                    if val < cur_val {
                        cur[ci] = arg;
                        cur_val = val;
                        if val < best_v {
                            best_v = val;
                            best_h = cur.clone();
                        }
                    }
                }
                if round_start - cur_val < S::of(1e-12) {
                    break;
                }
            }
        }
    }
    for (ci, &j) in gated.iter().enumerate() {
        params.leaves[j].constant = best_h[ci];
    }
    // recompute through the shared evaluator so the stored SSE matches the
    // model exactly
    eval_at(&best_h, params)
}

// One-dimensional golden-section minimization on [a, b] to absolute width
// 1e-12; returns the best probe (argument, value) seen, infinite when every
// probe was infeasible.
fn golden_min<S: Real>(mut f: impl FnMut(S) -> S, mut a: S, mut b: S) -> (S, S) {
    let ratio = S::of(0.618_033_988_749_894_8);
    let tol = S::of(1e-12).max(S::epsilon());
    let mut best = (a, S::infinity());
    fn upd<S: Real>(best: &mut (S, S), h: S, v: S) {
        if v < best.1 {
            *best = (h, v);
        }
    }
    let mut c = b - (b - a) * ratio;
    let mut d = a + (b - a) * ratio;
    let mut fc = f(c);
    upd(&mut best, c, fc);
    let mut fd = f(d);
    upd(&mut best, d, fd);
    let mut iters = 0;
    while b - a > tol && iters < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * ratio;
            fc = f(c);
            upd(&mut best, c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * ratio;
            fd = f(d);
            upd(&mut best, d, fd);
        }
        iters += 1;
    }
    best
}

/// What is already pinned down when a bound is asked for.
pub enum LeafState<'a, S: Real> {
    Fixed(&'a LMonomial<S>),
    Free,
}

pub struct PartialAssignment<'a, S: Real> {
    pub leaves: Vec<LeafState<'a, S>>,
}

impl<'a, S: Real> PartialAssignment<'a, S> {
    pub fn all_free(m: usize) -> Self {
        PartialAssignment { leaves: (0..m).map(|_| LeafState::Free).collect() }
    }

    pub fn of_params(params: &'a ParamAssignment<S>) -> Self {
        PartialAssignment { leaves: params.leaves.iter().map(LeafState::Fixed).collect() }
    }

    fn all_fixed(&self) -> Option<ParamAssignment<S>> {
        let mut leaves = Vec::with_capacity(self.leaves.len());
        for l in &self.leaves {
            match l {
                LeafState::Fixed(m) => leaves.push((*m).clone()),
                LeafState::Free => return None,
            }
        }
        Some(ParamAssignment::new(leaves))
    }
}

/// A lower bound on the SSE of any completion of `state`, never exceeding
/// the true minimum. The trivial kind returns 0; the interval kind evaluates
/// the tree in interval arithmetic with free leaves replaced by the hull of
/// everything a leaf can produce at that data point, and sums each point's
/// unavoidable squared residual. A fully fixed state under the interval kind
/// collapses to the exact SSE.
pub fn lower_bound<S: Real>(
    tree: &Gentree,
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    state: &PartialAssignment<S>,
) -> S {
    assert_eq!(tree.leaf_count(), state.leaves.len(), "leaf count mismatch");
    match cfg.bound_kind {
        BoundKind::Trivial => S::zero(),
        BoundKind::Interval => {
            if let Some(params) = state.all_fixed() {
                return sse(tree, &params, data, cfg.eps_div);
            }
            let mut total = S::zero();
            for (x, &y) in data.points.iter().zip(&data.targets) {
                let mut next = 0;
                match node_interval(tree, state, x, cfg, &mut next) {
                    Err(AllError) => return S::infinity(),
                    Ok(iv) => {
                        let r = Iv::point(y).sub(iv);
                        if !r.contains_zero() {
                            let c = (r.lo * r.lo).min(r.hi * r.hi);
                            total = total + c;
                        }
                    }
                }
            }
            total
        }
    }
}

fn node_interval<S: Real>(
    tree: &Gentree,
    state: &PartialAssignment<S>,
    x: &[S],
    cfg: &SolverConfig<S>,
    next: &mut usize,
) -> IvResult<S> {
    match tree {
        Gentree::Leaf => {
            let j = *next;
            *next += 1;
            match &state.leaves[j] {
                LeafState::Fixed(l) => match eval_lmonomial(l, x) {
                    Ok(v) => Ok(Iv::point(v)),
                    Err(_) => Err(AllError),
                },
                LeafState::Free => {
                    // constants: 1 when ungated, [-omega, omega] when gated
                    let mut iv = Iv::new((-cfg.omega).min(S::one()), cfg.omega.max(S::one()));
                    for &xi in x {
                        iv = iv.mul(crate::interval::power_hull(xi, cfg.delta));
                    }
                    Ok(iv)
                }
            }
        }
        Gentree::Unary(Op::Sqrt, c) => node_interval(c, state, x, cfg, next)?.sqrt(),
        Gentree::Unary(_, c) => Ok(node_interval(c, state, x, cfg, next)?.exp()),
        Gentree::Binary(op, l, r) => {
            let a = node_interval(l, state, x, cfg, next)?;
            let b = node_interval(r, state, x, cfg, next)?;
            match op {
                Op::Add => Ok(a.add(b)),
                Op::Sub => Ok(a.sub(b)),
                Op::Mul => Ok(a.mul(b)),
                Op::Div => a.div(b, cfg.eps_div),
                _ => unreachable!("unary operator in binary node"),
            }
        }
    }
}
