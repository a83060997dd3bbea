//! Search reports: everything one run found, in a form that serializes to
//! JSON and reloads without loss.

use serde::{Deserialize, Serialize};

use crate::expr::{render, CandidateModel, Gentree, ParamAssignment};
use crate::solver::SolverConfig;
use crate::Real;

/// Final label of one catalog tree (or of a whole search).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusKind {
    /// never assigned to a worker
    Pending,
    /// mid-stream cursor exists; only seen while a search is running
    Paused,
    /// reached the phase tolerance
    Solved,
    /// assignment space fully scanned
    Exhausted,
    /// lower bound met the incumbent
    Cutoff,
    /// global time limit expired first
    Timeout,
    /// abandoned after a shallower solution fixed the depth cutoff
    Cancelled,
}

impl std::fmt::Display for StatusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StatusKind::Pending => "pending",
            StatusKind::Paused => "paused",
            StatusKind::Solved => "solved",
            StatusKind::Exhausted => "exhausted",
            StatusKind::Cutoff => "cutoff",
            StatusKind::Timeout => "timeout",
            StatusKind::Cancelled => "cancelled",
        };
        f.write_str(s)
    }
}

/// A model plus its human rendering; the raw tree and parameters stay
/// alongside so nothing is lost in serialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ModelRecord<S: Real> {
    pub rendered: String,
    pub pattern: String,
    pub sse: S,
    pub depth: usize,
    pub complexity: usize,
    pub tree: Gentree,
    pub params: ParamAssignment<S>,
}

impl<S: Real> ModelRecord<S> {
    pub fn of(model: &CandidateModel<S>, names: &[String]) -> Self {
        ModelRecord {
            rendered: render(&model.tree, &model.params, names),
            pattern: model.pattern(names),
            sse: model.sse,
            depth: model.depth(),
            complexity: model.complexity,
            tree: model.tree.clone(),
            params: model.params.clone(),
        }
    }

    pub fn as_model(&self) -> CandidateModel<S> {
        CandidateModel::new(self.tree.clone(), self.params.clone(), self.sse)
    }
}

/// Per-tree outcome line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TreeRecord<S: Real> {
    pub index: usize,
    pub shape: String,
    pub depth: usize,
    pub complexity: usize,
    pub status: StatusKind,
    pub best: Option<ModelRecord<S>>,
    /// lower bound, recorded when the tree was cut off by it
    pub bound: Option<S>,
}

/// One entry of the append-only search log. `at_s` is wall time since the
/// phase started; comparisons of two runs go through
/// [`SearchReport::normalized_json`], which zeroes every timing field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TimedEvent<S: Real> {
    pub at_s: f64,
    #[serde(flatten)]
    pub event: SearchEvent<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum SearchEvent<S: Real> {
    /// a worker slice began on tree `tree_index`
    SliceStart { slice: u64, tree_index: usize },
    /// the search-wide incumbent improved
    Improved { tree_index: usize, sse: S, rendered: String },
    /// a tree reached the phase tolerance
    Solved { tree_index: usize, depth: usize, sse: S },
    /// the depth cutoff tightened
    DepthCutoff { depth: usize },
    /// a tree reached a terminal status
    TreeDone { tree_index: usize, status: StatusKind },
}

/// Everything one restart phase did.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PhaseReport<S: Real> {
    pub ops: String,
    pub tol: S,
    pub budget_s: f64,
    pub elapsed_s: f64,
    pub slices: u64,
    pub status: StatusKind,
    /// min-SSE model this phase found, solved or not
    pub incumbent: Option<ModelRecord<S>>,
    /// all tolerance-meeting models, preference order
    pub solved: Vec<ModelRecord<S>>,
    pub trees: Vec<TreeRecord<S>>,
    pub events: Vec<TimedEvent<S>>,
}

/// The full result of a search, across restart phases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SearchReport<S: Real> {
    pub label: Option<String>,
    pub status: StatusKind,
    /// min-SSE model across all phases
    pub incumbent: Option<ModelRecord<S>>,
    pub phases: Vec<PhaseReport<S>>,
    pub elapsed_s: f64,
    pub config: SolverConfig<S>,
    pub threads: usize,
    pub slice_s: f64,
    pub seed: Option<u64>,
    pub variable_names: Vec<String>,
}

impl<S: Real> SearchReport<S> {
    /// The answer to report: the preferred solved model when one exists,
    /// otherwise the incumbent.
    pub fn best_model(&self) -> Option<&ModelRecord<S>> {
        for phase in &self.phases {
            if let Some(first) = phase.solved.first() {
                return Some(first);
            }
        }
        self.incumbent.as_ref()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// JSON with all wall-clock fields zeroed, for comparing two runs of the
    /// same deterministic workload.
    pub fn normalized_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_s = 0.0;
        for p in &mut r.phases {
            p.elapsed_s = 0.0;
            for e in &mut p.events {
                e.at_s = 0.0;
            }
        }
        serde_json::to_string(&r).expect("report serializes")
    }

    /// Replays the event log: the smallest SSE any event ever carried. The
    /// final incumbent must reproduce it exactly (no lost updates).
    pub fn replay_min_sse(&self) -> Option<S> {
        let mut min: Option<S> = None;
        for phase in &self.phases {
            for e in &phase.events {
                let sse = match &e.event {
                    SearchEvent::Improved { sse, .. } | SearchEvent::Solved { sse, .. } => *sse,
                    _ => continue,
                };
                min = Some(match min {
                    None => sse,
                    Some(m) => {
                        if sse < m {
                            sse
                        } else {
                            m
                        }
                    }
                });
            }
        }
        min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::LMonomial;
    use crate::solver::SolverConfig;

    fn sample_report() -> SearchReport<f64> {
        let model = CandidateModel::new(
            Gentree::Leaf,
            ParamAssignment::new(vec![LMonomial::gated(vec![1, 1, -2], 6.674e-11)]),
            1.25e-21,
        );
        let names = vec!["m1".to_string(), "m2".to_string(), "r".to_string()];
        let rec = ModelRecord::of(&model, &names);
        SearchReport {
            label: Some("gravity".into()),
            status: StatusKind::Solved,
            incumbent: Some(rec.clone()),
            phases: vec![PhaseReport {
                ops: "+,*,/,sqrt".into(),
                tol: 1e-4,
                budget_s: 600.0,
                elapsed_s: 0.233,
                slices: 2,
                status: StatusKind::Solved,
                incumbent: Some(rec.clone()),
                solved: vec![rec.clone()],
                trees: vec![TreeRecord {
                    index: 0,
                    shape: "L".into(),
                    depth: 0,
                    complexity: 1,
                    status: StatusKind::Solved,
                    best: Some(rec.clone()),
                    bound: None,
                }],
                events: vec![
                    TimedEvent {
                        at_s: 0.001,
                        event: SearchEvent::SliceStart { slice: 1, tree_index: 0 },
                    },
                    TimedEvent {
                        at_s: 0.2,
                        event: SearchEvent::Improved {
                            tree_index: 0,
                            sse: 1.25e-21,
                            rendered: rec.rendered.clone(),
                        },
                    },
                    TimedEvent {
                        at_s: 0.21,
                        event: SearchEvent::Solved { tree_index: 0, depth: 0, sse: 1.25e-21 },
                    },
                ],
            }],
            elapsed_s: 0.25,
            config: SolverConfig::default(),
            threads: 4,
            slice_s: 10.0,
            seed: Some(1),
            variable_names: names,
        }
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let report = sample_report();
        let json = report.to_json();
        let back = SearchReport::<f64>::from_json(&json).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn normalized_json_hides_wall_time_only() {
        let report = sample_report();
        let mut slower = report.clone();
        slower.elapsed_s = 99.0;
        slower.phases[0].elapsed_s = 42.0;
        slower.phases[0].events[1].at_s = 7.0;
        assert_eq!(report.normalized_json(), slower.normalized_json());
        let mut different = report.clone();
        different.phases[0].solved.clear();
        assert_ne!(report.normalized_json(), different.normalized_json());
    }

    #[test]
    fn replay_matches_incumbent() {
        let report = sample_report();
        assert_eq!(report.replay_min_sse(), Some(report.incumbent.as_ref().unwrap().sse));
    }

    #[test]
    fn renders_carry_through() {
        let report = sample_report();
        assert_eq!(report.best_model().unwrap().rendered, "6.674e-11·m1·m2·r^-2");
    }
}
