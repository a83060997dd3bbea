//! Round-robin portfolio search over a gentree catalog.
//!
//! Every catalog tree is a task. Tasks run in short slices, at most one
//! slice per worker thread at a time, and rotate through a queue so cheap
//! shallow trees are never starved by expensive deep ones. Workers share
//! three atomics: the best SSE anywhere (tightens every task's cutoff
//! test), a cancel flag, and the depth cutoff. Once a tree of depth d is
//! solved, nothing deeper is worth finishing: deeper tasks cancel
//! themselves mid-slice and queued ones are dropped when popped.
//!
//! A search runs one or more restart phases. Each phase re-enumerates the
//! catalog under its own operator set and tolerance; the first phase that
//! solves anything ends the search.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering::SeqCst};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::enumerate::{enumerate_gentrees, ConfigError, EnumConfig, GentreeCatalog, OperatorSet};
use crate::expr::{render, CandidateModel, Gentree};
use crate::report::{
    ModelRecord, PhaseReport, SearchEvent, SearchReport, StatusKind, TimedEvent, TreeRecord,
};
use crate::solver::{prefer, solve_gentree, SearchProbe, SolveCursor, SolveStatus, SolverConfig};
use crate::Real;

/// One restart phase: an operator set to enumerate with, the SSE level that
/// counts as solved, and a wall-clock budget of its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartPhase<S> {
    pub ops: OperatorSet,
    pub tol: S,
    pub budget_s: f64,
}

/// The standard two-phase plan: square roots first at the configured
/// tolerance, then a tighter pass that swaps sqrt for exp.
pub fn default_plan<S: Real>(cfg: &SolverConfig<S>) -> Vec<RestartPhase<S>> {
    vec![
        RestartPhase {
            ops: OperatorSet::standard(),
            tol: cfg.tol,
            budget_s: cfg.time_limit_s,
        },
        RestartPhase {
            ops: OperatorSet::with_exp(),
            tol: S::of(1e-8),
            budget_s: cfg.time_limit_s,
        },
    ]
}

/// Search-level knobs that are not part of the per-tree solver config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub threads: usize,
    /// worker slice length in seconds; slices shorter than one assignment
    /// fit still make progress
    pub slice_s: f64,
    pub label: Option<String>,
    /// noise seed recorded in the report, if the data was perturbed
    pub seed: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { threads: 1, slice_s: 1.0, label: None, seed: None }
    }
}

/// State shared by all workers of one phase.
struct Shared {
    /// bit pattern of the best SSE seen anywhere, lowered with a CAS loop;
    /// SSE is non-negative so the f64 bit order agrees with the value order
    best_sse: AtomicU64,
    cancel: AtomicBool,
    /// depth of the shallowest solved tree so far
    depth_cutoff: AtomicUsize,
}

impl Shared {
    fn new() -> Self {
        Shared {
            best_sse: AtomicU64::new(f64::INFINITY.to_bits()),
            cancel: AtomicBool::new(false),
            depth_cutoff: AtomicUsize::new(usize::MAX),
        }
    }

    fn best(&self) -> f64 {
        f64::from_bits(self.best_sse.load(SeqCst))
    }

    fn offer(&self, sse: f64) {
        if !sse.is_finite() || sse < 0.0 {
            return;
        }
        let mut seen = self.best_sse.load(SeqCst);
        while sse < f64::from_bits(seen) {
            match self.best_sse.compare_exchange(seen, sse.to_bits(), SeqCst, SeqCst) {
                Ok(_) => return,
                Err(now) => seen = now,
            }
        }
    }

    fn cutoff(&self) -> usize {
        self.depth_cutoff.load(SeqCst)
    }

    fn tighten(&self, depth: usize) {
        self.depth_cutoff.fetch_min(depth, SeqCst);
    }
}

/// Worker-side view of the shared state. Deeper tasks self-cancel as soon
/// as the cutoff drops below their depth, even mid-slice.
struct TaskProbe<'a> {
    shared: &'a Shared,
    depth: usize,
}

impl SearchProbe for TaskProbe<'_> {
    fn incumbent(&self) -> f64 {
        self.shared.best()
    }

    fn cancelled(&self) -> bool {
        self.shared.cancel.load(SeqCst) || self.depth > self.shared.cutoff()
    }
}

struct TaskState<S: Real> {
    depth: usize,
    status: StatusKind,
    best: Option<CandidateModel<S>>,
    bound: Option<S>,
    cursor: Option<SolveCursor<S>>,
}

/// Searches the default catalog (standard operators, all pruning rules) as
/// a single phase at the configured tolerance.
pub fn search<S: Real>(
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    opts: &SearchOptions,
) -> Result<SearchReport<S>, ConfigError> {
    let plan = [RestartPhase {
        ops: OperatorSet::standard(),
        tol: cfg.tol,
        budget_s: cfg.time_limit_s,
    }];
    search_with_restarts(data, cfg, &plan, opts)
}

/// Runs the restart plan phase by phase, stopping at the first phase that
/// solves at least one tree. Later phases inherit the incumbent, so their
/// cutoff tests start sharp.
pub fn search_with_restarts<S: Real>(
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    plan: &[RestartPhase<S>],
    opts: &SearchOptions,
) -> Result<SearchReport<S>, ConfigError> {
    cfg.validate()?;
    if plan.is_empty() {
        return Err(ConfigError::EmptyRestartPlan);
    }
    let started = Instant::now();
    let mut incumbent: Option<CandidateModel<S>> = None;
    let mut phases: Vec<PhaseReport<S>> = Vec::new();
    for phase in plan {
        let catalog = enumerate_gentrees(&EnumConfig::new(cfg.depth, phase.ops.clone()))?;
        let phase_cfg = SolverConfig { tol: phase.tol, ..cfg.clone() };
        let report = run_phase(
            data,
            &phase_cfg,
            phase.ops.names(),
            phase.budget_s,
            &catalog,
            opts,
            &mut incumbent,
        );
        let solved = report.status == StatusKind::Solved;
        phases.push(report);
        if solved {
            break;
        }
    }
    Ok(assemble(data, cfg, opts, incumbent, phases, started))
}

/// Single-phase search over a caller-built catalog, in the catalog's own
/// order. The solver config is used as is, tolerance included.
pub fn search_catalog<S: Real>(
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    catalog: &GentreeCatalog,
    opts: &SearchOptions,
) -> Result<SearchReport<S>, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let mut incumbent: Option<CandidateModel<S>> = None;
    let report = run_phase(
        data,
        cfg,
        "catalog".to_string(),
        cfg.time_limit_s,
        catalog,
        opts,
        &mut incumbent,
    );
    Ok(assemble(data, cfg, opts, incumbent, vec![report], started))
}

fn assemble<S: Real>(
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    opts: &SearchOptions,
    incumbent: Option<CandidateModel<S>>,
    phases: Vec<PhaseReport<S>>,
    started: Instant,
) -> SearchReport<S> {
    let status = if phases.iter().any(|p| p.status == StatusKind::Solved) {
        StatusKind::Solved
    } else {
        phases.last().map(|p| p.status).unwrap_or(StatusKind::Exhausted)
    };
    SearchReport {
        label: opts.label.clone(),
        status,
        incumbent: incumbent.map(|m| ModelRecord::of(&m, &data.names)),
        phases,
        elapsed_s: started.elapsed().as_secs_f64(),
        config: cfg.clone(),
        threads: opts.threads.max(1),
        slice_s: opts.slice_s,
        seed: opts.seed,
        variable_names: data.names.clone(),
    }
}

/// One slice of one task, run on a worker thread. Solving tightens the
/// shared cutoff immediately so same-batch deeper workers stop early, and
/// any best model is offered to the shared incumbent before the slice
/// result is handed back for ordered processing.
fn run_slice<S: Real>(
    tree: &Gentree,
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    shared: &Shared,
    cursor: Option<SolveCursor<S>>,
    budget_s: f64,
    depth: usize,
) -> SolveStatus<S> {
    let probe = TaskProbe { shared, depth };
    let incumbent = S::of(shared.best());
    let status = solve_gentree(tree, data, cfg, incumbent, budget_s, cursor, &probe);
    if matches!(status, SolveStatus::Solved(_)) {
        shared.tighten(depth);
    }
    if let Some(model) = status.best_model() {
        if let Some(sse) = model.sse.to_f64() {
            shared.offer(sse);
        }
    }
    status
}

fn run_phase<S: Real>(
    data: &Dataset<S>,
    cfg: &SolverConfig<S>,
    ops_label: String,
    budget_s: f64,
    catalog: &GentreeCatalog,
    opts: &SearchOptions,
    incumbent: &mut Option<CandidateModel<S>>,
) -> PhaseReport<S> {
    let started = Instant::now();
    let trees = catalog.trees();
    let threads = opts.threads.max(1);
    let shared = Shared::new();
    if let Some(sse) = incumbent.as_ref().and_then(|m| m.sse.to_f64()) {
        shared.offer(sse);
    }
    let mut tasks: Vec<TaskState<S>> = trees
        .iter()
        .map(|t| TaskState {
            depth: t.depth(),
            status: StatusKind::Pending,
            best: None,
            bound: None,
            cursor: None,
        })
        .collect();
    let mut queue: VecDeque<usize> = (0..trees.len()).collect();
    let mut events: Vec<TimedEvent<S>> = Vec::new();
    let mut solved: Vec<(usize, CandidateModel<S>)> = Vec::new();
    let mut phase_best: Option<CandidateModel<S>> = None;
    // depth of the shallowest solved tree whose event is already logged;
    // results are processed in catalog order, so a deeper same-batch solve
    // arriving after this dropped is demoted instead of logged
    let mut cutoff = usize::MAX;
    let mut slices: u64 = 0;
    let mut timed_out = false;

    while !queue.is_empty() {
        let remaining = budget_s - started.elapsed().as_secs_f64();
        if remaining <= 0.0 {
            timed_out = true;
            shared.cancel.store(true, SeqCst);
            break;
        }
        let slice_budget = opts.slice_s.min(remaining);

        let mut batch: Vec<(usize, usize, Option<SolveCursor<S>>)> = Vec::new();
        while batch.len() < threads {
            let Some(i) = queue.pop_front() else { break };
            if tasks[i].depth > cutoff {
                tasks[i].status = StatusKind::Cancelled;
                push_event(
                    &mut events,
                    &started,
                    SearchEvent::TreeDone { tree_index: i, status: StatusKind::Cancelled },
                );
                continue;
            }
            batch.push((i, tasks[i].depth, tasks[i].cursor.take()));
        }
        if batch.is_empty() {
            break;
        }
        for (i, _, _) in &batch {
            push_event(&mut events, &started, SearchEvent::SliceStart { slice: slices, tree_index: *i });
            slices += 1;
        }

        let mut results: Vec<(usize, SolveStatus<S>)> = if threads == 1 {
            let (i, depth, cursor) = batch.pop().expect("batch holds one task");
            vec![(i, run_slice(&trees[i], data, cfg, &shared, cursor, slice_budget, depth))]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = batch
                    .drain(..)
                    .map(|(i, depth, cursor)| {
                        let shared = &shared;
                        scope.spawn(move || {
                            (i, run_slice(&trees[i], data, cfg, shared, cursor, slice_budget, depth))
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker slice panicked"))
                    .collect()
            })
        };
        results.sort_by_key(|(i, _)| *i);

        for (i, status) in results {
            if let Some(model) = status.best_model() {
                tasks[i].best = Some(model.clone());
                offer_model(&mut phase_best, model);
                if offer_model(incumbent, model) {
                    push_event(
                        &mut events,
                        &started,
                        SearchEvent::Improved {
                            tree_index: i,
                            sse: model.sse,
                            rendered: render(&model.tree, &model.params, &data.names),
                        },
                    );
                }
            }
            match status {
                SolveStatus::Solved(model) => {
                    if tasks[i].depth > cutoff {
                        // lost the same-batch race to a shallower solution;
                        // the model stays as this tree's best
                        tasks[i].status = StatusKind::Cancelled;
                        push_event(
                            &mut events,
                            &started,
                            SearchEvent::TreeDone { tree_index: i, status: StatusKind::Cancelled },
                        );
                    } else {
                        tasks[i].status = StatusKind::Solved;
                        push_event(
                            &mut events,
                            &started,
                            SearchEvent::Solved { tree_index: i, depth: tasks[i].depth, sse: model.sse },
                        );
                        if tasks[i].depth < cutoff {
                            cutoff = tasks[i].depth;
                            shared.tighten(cutoff);
                            push_event(&mut events, &started, SearchEvent::DepthCutoff { depth: cutoff });
                        }
                        solved.push((i, model));
                    }
                }
                SolveStatus::Exhausted(_) => {
                    tasks[i].status = StatusKind::Exhausted;
                    push_event(
                        &mut events,
                        &started,
                        SearchEvent::TreeDone { tree_index: i, status: StatusKind::Exhausted },
                    );
                }
                SolveStatus::Cutoff { bound } => {
                    tasks[i].status = StatusKind::Cutoff;
                    tasks[i].bound = Some(bound);
                    push_event(
                        &mut events,
                        &started,
                        SearchEvent::TreeDone { tree_index: i, status: StatusKind::Cutoff },
                    );
                }
                SolveStatus::Timeout(_) => {
                    tasks[i].status = StatusKind::Timeout;
                    push_event(
                        &mut events,
                        &started,
                        SearchEvent::TreeDone { tree_index: i, status: StatusKind::Timeout },
                    );
                }
                SolveStatus::Paused(cursor) => {
                    if tasks[i].depth > cutoff {
                        tasks[i].status = StatusKind::Cancelled;
                        push_event(
                            &mut events,
                            &started,
                            SearchEvent::TreeDone { tree_index: i, status: StatusKind::Cancelled },
                        );
                    } else {
                        tasks[i].status = StatusKind::Paused;
                        tasks[i].cursor = Some(cursor);
                        queue.push_back(i);
                    }
                }
            }
        }
    }

    for i in queue.drain(..) {
        tasks[i].status = StatusKind::Timeout;
        push_event(
            &mut events,
            &started,
            SearchEvent::TreeDone { tree_index: i, status: StatusKind::Timeout },
        );
    }

    let status = if !solved.is_empty() {
        StatusKind::Solved
    } else if timed_out {
        StatusKind::Timeout
    } else {
        StatusKind::Exhausted
    };
    solved.sort_by(|(ia, a), (ib, b)| prefer(a, b).then(ia.cmp(ib)));
    let tree_records = tasks
        .iter()
        .enumerate()
        .map(|(i, t)| TreeRecord {
            index: i,
            shape: trees[i].serialize(),
            depth: t.depth,
            complexity: trees[i].node_count(),
            status: t.status,
            best: t.best.as_ref().map(|m| ModelRecord::of(m, &data.names)),
            bound: t.bound,
        })
        .collect();
    PhaseReport {
        ops: ops_label,
        tol: cfg.tol,
        budget_s,
        elapsed_s: started.elapsed().as_secs_f64(),
        slices,
        status,
        incumbent: phase_best.map(|m| ModelRecord::of(&m, &data.names)),
        solved: solved.iter().map(|(_, m)| ModelRecord::of(m, &data.names)).collect(),
        trees: tree_records,
        events,
    }
}

fn push_event<S: Real>(events: &mut Vec<TimedEvent<S>>, started: &Instant, event: SearchEvent<S>) {
    events.push(TimedEvent { at_s: started.elapsed().as_secs_f64(), event });
}

/// Replaces `slot` when the candidate wins the preference order; infinite
/// SSE never lands in a report. Returns whether the slot changed.
fn offer_model<S: Real>(slot: &mut Option<CandidateModel<S>>, candidate: &CandidateModel<S>) -> bool {
    if !candidate.sse.is_finite() {
        return false;
    }
    let better = match slot.as_ref() {
        None => true,
        Some(cur) => prefer(candidate, cur) == Ordering::Less,
    };
    if better {
        *slot = Some(candidate.clone());
    }
    better
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Op;

    fn data(xs: Vec<Vec<f64>>, ys: Vec<f64>, names: &[&str]) -> Dataset<f64> {
        Dataset::new(names.iter().map(|s| s.to_string()).collect(), xs, ys).unwrap()
    }

    fn quick_cfg() -> SolverConfig<f64> {
        SolverConfig { grid_points: 101, ..SolverConfig::default() }
    }

    fn slice_trace(report: &SearchReport<f64>) -> Vec<usize> {
        report.phases[0]
            .events
            .iter()
            .filter_map(|e| match e.event {
                SearchEvent::SliceStart { tree_index, .. } => Some(tree_index),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn shared_best_is_a_running_minimum() {
        let shared = Shared::new();
        assert!(shared.best().is_infinite());
        shared.offer(3.0);
        shared.offer(7.0);
        assert_eq!(shared.best(), 3.0);
        shared.offer(f64::NAN);
        shared.offer(-1.0);
        assert_eq!(shared.best(), 3.0);
        shared.offer(0.5);
        assert_eq!(shared.best(), 0.5);
    }

    #[test]
    fn proportionality_solves_in_one_phase() {
        let d = data(vec![vec![1.0], vec![2.0], vec![3.0]], vec![2.5, 5.0, 7.5], &["x"]);
        let cfg = SolverConfig { depth: 1, ..quick_cfg() };
        let report = search(&d, &cfg, &SearchOptions::default()).unwrap();
        assert_eq!(report.status, StatusKind::Solved);
        let best = report.best_model().unwrap();
        assert_eq!(best.rendered, "2.5·x");
        assert_eq!(report.incumbent.as_ref().unwrap().sse, best.sse);
        assert_eq!(report.replay_min_sse(), Some(best.sse));
    }

    #[test]
    fn round_robin_rotates_through_the_whole_catalog() {
        // Five two-leaf trees over two variables, none of which can reach
        // the absurd tolerance, scheduled with zero-length slices: each
        // slice fits exactly one assignment, so the trace must wrap around.
        let tree = Gentree::binary(Op::Add, Gentree::Leaf, Gentree::Leaf);
        let catalog = GentreeCatalog::from_trees(vec![tree; 5]);
        let d = data(
            vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![3.0, 5.0], vec![4.0, 7.0]],
            vec![3.1, 4.9, 11.3, 0.7],
            &["a", "b"],
        );
        let cfg = SolverConfig { tol: 1e-300, time_limit_s: 30.0, ..quick_cfg() };
        let opts = SearchOptions { slice_s: 0.0, ..SearchOptions::default() };
        let report = search_catalog(&d, &cfg, &catalog, &opts).unwrap();
        let trace = slice_trace(&report);
        assert!(trace.len() >= 10, "want at least two full rounds, got {trace:?}");
        assert_eq!(&trace[..10], &[0, 1, 2, 3, 4, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn depth_cutoff_cancels_deeper_trees() {
        let catalog = GentreeCatalog::from_trees(vec![
            Gentree::Leaf,
            Gentree::binary(Op::Add, Gentree::Leaf, Gentree::Leaf),
        ]);
        let d = data(vec![vec![1.0], vec![2.0], vec![3.0]], vec![3.0, 6.0, 9.0], &["x"]);
        let cfg = quick_cfg();
        let report = search_catalog(&d, &cfg, &catalog, &SearchOptions::default()).unwrap();
        let phase = &report.phases[0];
        assert_eq!(phase.trees[0].status, StatusKind::Solved);
        assert_eq!(phase.trees[1].status, StatusKind::Cancelled);
        assert!(phase
            .events
            .iter()
            .any(|e| matches!(e.event, SearchEvent::DepthCutoff { depth: 0 })));
        // replay safety: no solved event may be deeper than one before it
        let mut seen = usize::MAX;
        for e in &phase.events {
            if let SearchEvent::Solved { depth, .. } = e.event {
                assert!(depth <= seen);
                seen = seen.min(depth);
            }
        }
    }

    #[test]
    fn failed_phase_falls_through_to_exp() {
        // y = 3*exp(x^2) defeats the sqrt phase at depth 1 but the exp
        // phase fits it exactly with one gated constant.
        let xs: Vec<Vec<f64>> = (0..8).map(|i| vec![0.5 + 0.2 * i as f64]).collect();
        let ys: Vec<f64> = xs.iter().map(|row| 3.0 * (row[0] * row[0]).exp()).collect();
        let d = data(xs, ys, &["x"]);
        let cfg = SolverConfig { depth: 2, tol: 1e-10, time_limit_s: 60.0, ..quick_cfg() };
        let report = search_with_restarts(&d, &cfg, &default_plan(&cfg), &SearchOptions::default()).unwrap();
        assert_eq!(report.status, StatusKind::Solved);
        assert_eq!(report.phases.len(), 2);
        assert_eq!(report.phases[0].status, StatusKind::Exhausted);
        assert!(report.phases[0].solved.is_empty());
        let best = report.best_model().unwrap();
        assert!(best.rendered.contains("exp"), "got {}", best.rendered);
        assert!(best.sse <= 1e-8);
    }

    #[test]
    fn timeout_labels_every_unfinished_tree() {
        let catalog = GentreeCatalog::from_trees(vec![Gentree::Leaf; 3]);
        let d = data(vec![vec![1.0], vec![2.0]], vec![1.0, 4.0], &["x"]);
        let cfg = SolverConfig { time_limit_s: 1e-12, ..quick_cfg() };
        let report = search_catalog(&d, &cfg, &catalog, &SearchOptions::default()).unwrap();
        assert_eq!(report.status, StatusKind::Timeout);
        let phase = &report.phases[0];
        assert!(phase.trees.iter().all(|t| t.status == StatusKind::Timeout));
        assert_eq!(phase.slices, 0);
        assert!(report.incumbent.is_none());
    }

    #[test]
    fn empty_plan_is_rejected() {
        let d = data(vec![vec![1.0]], vec![1.0], &["x"]);
        let err = search_with_restarts(&d, &quick_cfg(), &[], &SearchOptions::default()).unwrap_err();
        assert_eq!(err, ConfigError::EmptyRestartPlan);
    }

    #[test]
    fn single_thread_runs_are_bit_reproducible() {
        // Zero-length slices pause after every assignment, so slice
        // boundaries do not depend on wall time and the whole event log
        // replays identically.
        let d = data(
            vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![3.0, 5.0], vec![4.0, 7.0]],
            vec![2.0, 6.5, 15.0, 28.0],
            &["a", "b"],
        );
        let cfg = SolverConfig { depth: 1, tol: 1e-20, time_limit_s: 20.0, ..quick_cfg() };
        let opts = SearchOptions { slice_s: 0.0, ..SearchOptions::default() };
        let a = search(&d, &cfg, &opts).unwrap();
        let b = search(&d, &cfg, &opts).unwrap();
        assert!(a.phases[0].slices > 100, "workload should spread over many slices");
        assert_eq!(a.phases[0].status, StatusKind::Exhausted);
        assert_eq!(a.normalized_json(), b.normalized_json());
    }

    #[test]
    fn thread_counts_agree_on_the_answer() {
        let d = data(
            vec![vec![1.0, 1.0], vec![2.0, 3.0], vec![3.0, 4.0], vec![5.0, 2.0]],
            vec![1.0, 6.0, 12.0, 10.0],
            &["a", "b"],
        );
        let cfg = SolverConfig { depth: 1, ..quick_cfg() };
        let single = search(&d, &cfg, &SearchOptions::default()).unwrap();
        let multi = search(&d, &cfg, &SearchOptions { threads: 4, ..SearchOptions::default() }).unwrap();
        assert_eq!(single.status, StatusKind::Solved);
        assert_eq!(multi.status, StatusKind::Solved);
        let a = single.best_model().unwrap();
        let b = multi.best_model().unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.sse, b.sse);
    }
}
