//! The benchmark registry: a fixed set of physics formulas with units and
//! safe sampling ranges, plus a runner that searches each one and tabulates
//! the outcomes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{Dataset, UnitTable};
use crate::dimension::UnitVector;
use crate::enumerate::ConfigError;
use crate::report::StatusKind;
use crate::rng::SplitMix64;
use crate::scheduler::{default_plan, search_with_restarts, SearchOptions};
use crate::solver::SolverConfig;

/// Dimension basis shared by every registry problem: length, time, mass,
/// temperature, voltage.
pub const DIM_NAMES: [&str; 5] = ["m", "s", "kg", "T", "V"];

/// Points generated per problem.
pub const BENCH_POINTS: usize = 10;

const DIMLESS: [i64; 5] = [0, 0, 0, 0, 0];
const LENGTH: [i64; 5] = [1, 0, 0, 0, 0];
const AREA: [i64; 5] = [2, 0, 0, 0, 0];
const VOLUME: [i64; 5] = [3, 0, 0, 0, 0];
const MASS: [i64; 5] = [0, 0, 1, 0, 0];
const TEMPERATURE: [i64; 5] = [0, 0, 0, 1, 0];
const VELOCITY: [i64; 5] = [1, -1, 0, 0, 0];
const ACCELERATION: [i64; 5] = [1, -2, 0, 0, 0];
const ANGULAR_FREQ: [i64; 5] = [0, -1, 0, 0, 0];
const WAVENUMBER: [i64; 5] = [-1, 0, 0, 0, 0];
const FORCE: [i64; 5] = [1, -2, 1, 0, 0];
const ENERGY: [i64; 5] = [2, -2, 1, 0, 0];
const POWER: [i64; 5] = [2, -3, 1, 0, 0];
const PRESSURE: [i64; 5] = [-1, -2, 1, 0, 0];
const INTENSITY: [i64; 5] = [0, -3, 1, 0, 0];
const VOLT: [i64; 5] = [0, 0, 0, 0, 1];
const CHARGE: [i64; 5] = [2, -2, 1, 0, -1];
const PERMITTIVITY: [i64; 5] = [1, -2, 1, 0, -2];
const CAPACITANCE: [i64; 5] = [2, -2, 1, 0, -2];
const EFIELD: [i64; 5] = [-1, 0, 0, 0, 1];
const BFIELD: [i64; 5] = [-2, 1, 0, 0, 1];
const GRAVITATION: [i64; 5] = [3, -2, -1, 0, 0];
const THERMAL_COND: [i64; 5] = [1, -3, 1, -1, 0];
const ACTION: [i64; 5] = [2, -1, 1, 0, 0];

/// One registry problem: where its variables live, what they measure, and
/// the ground-truth formula its datasets are drawn from.
pub struct ProblemSpec {
    pub label: &'static str,
    /// documentation and summaries only; never parsed
    pub true_form: &'static str,
    pub names: &'static [&'static str],
    /// per-variable closed sampling interval
    pub ranges: &'static [(f64, f64)],
    pub var_units: &'static [[i64; 5]],
    pub target_units: [i64; 5],
    pub truth: fn(&[f64]) -> f64,
}

static REGISTRY: [ProblemSpec; 17] = [
    ProblemSpec {
        label: "gravity",
        true_form: "6.674e-11*m1*m2/r^2",
        names: &["m1", "m2", "r"],
        ranges: &[(1e4, 1e6), (1e4, 1e6), (1.0, 10.0)],
        var_units: &[MASS, MASS, LENGTH],
        target_units: FORCE,
        truth: |x| 6.674e-11 * x[0] * x[1] / (x[2] * x[2]),
    },
    ProblemSpec {
        label: "I.12.1",
        true_form: "mu*Nn",
        names: &["mu", "Nn"],
        ranges: &[(1.0, 5.0), (1.0, 5.0)],
        var_units: &[DIMLESS, FORCE],
        target_units: FORCE,
        truth: |x| x[0] * x[1],
    },
    ProblemSpec {
        label: "I.12.2",
        true_form: "q1*q2/(4*pi*epsilon*r^2)",
        names: &["q1", "q2", "epsilon", "r"],
        ranges: &[(1.0, 5.0), (1.0, 5.0), (1.0, 5.0), (1.0, 5.0)],
        var_units: &[CHARGE, CHARGE, PERMITTIVITY, LENGTH],
        target_units: FORCE,
        truth: |x| x[0] * x[1] / (4.0 * std::f64::consts::PI * x[2] * x[3] * x[3]),
    },
    ProblemSpec {
        label: "I.12.4",
        true_form: "q1/(4*pi*epsilon*r^2)",
        names: &["q1", "epsilon", "r"],
        ranges: &[(1.0, 5.0), (1.0, 5.0), (1.0, 5.0)],
        var_units: &[CHARGE, PERMITTIVITY, LENGTH],
        target_units: EFIELD,
        truth: |x| x[0] / (4.0 * std::f64::consts::PI * x[1] * x[2] * x[2]),
    },
    ProblemSpec {
        label: "I.14.3",
        true_form: "m*g*z",
        names: &["m", "g", "z"],
        ranges: &[(1.0, 5.0), (1.0, 5.0), (1.0, 5.0)],
        var_units: &[MASS, ACCELERATION, LENGTH],
        target_units: ENERGY,
        truth: |x| x[0] * x[1] * x[2],
    },
    ProblemSpec {
        label: "I.25.13",
        true_form: "q/C",
        names: &["q", "C"],
        ranges: &[(1.0, 5.0), (1.0, 5.0)],
        var_units: &[CHARGE, CAPACITANCE],
        target_units: VOLT,
        truth: |x| x[0] / x[1],
    },
    ProblemSpec {
        label: "I.29.4",
        true_form: "omega/c",
        names: &["omega", "c"],
        ranges: &[(1.0, 5.0), (3.0, 10.0)],
        var_units: &[ANGULAR_FREQ, VELOCITY],
        target_units: WAVENUMBER,
        truth: |x| x[0] / x[1],
    },
    ProblemSpec {
        label: "I.34.10",
        true_form: "omega0/(1 - v/c)",
        names: &["omega0", "v", "c"],
        ranges: &[(1.0, 5.0), (1.0, 2.0), (3.0, 10.0)],
        var_units: &[ANGULAR_FREQ, VELOCITY, VELOCITY],
        target_units: ANGULAR_FREQ,
        truth: |x| x[0] / (1.0 - x[1] / x[2]),
    },
    ProblemSpec {
        label: "I.34.27",
        true_form: "h*omega/(2*pi)",
        names: &["h", "omega"],
        ranges: &[(1.0, 5.0), (1.0, 5.0)],
        var_units: &[ACTION, ANGULAR_FREQ],
        target_units: ENERGY,
        truth: |x| x[0] * x[1] / (2.0 * std::f64::consts::PI),
    },
    ProblemSpec {
        label: "I.39.11",
        true_form: "p*V/(gamma - 1)",
        names: &["gamma", "p", "V"],
        ranges: &[(2.0, 5.0), (1.0, 5.0), (1.0, 5.0)],
        var_units: &[DIMLESS, PRESSURE, VOLUME],
        target_units: ENERGY,
        truth: |x| x[1] * x[2] / (x[0] - 1.0),
    },
    ProblemSpec {
        label: "II.2.42",
        true_form: "kappa*(T2 - T1)*A/d",
        names: &["kappa", "T1", "T2", "A", "d"],
        ranges: &[(1.0, 5.0), (1.0, 3.0), (4.0, 6.0), (1.0, 5.0), (1.0, 5.0)],
        var_units: &[THERMAL_COND, TEMPERATURE, TEMPERATURE, AREA, LENGTH],
        target_units: POWER,
        truth: |x| x[0] * (x[2] - x[1]) * x[3] / x[4],
    },
    ProblemSpec {
        label: "II.3.24",
        true_form: "P/(4*pi*r^2)",
        names: &["P", "r"],
        ranges: &[(1.0, 5.0), (1.0, 5.0)],
        var_units: &[POWER, LENGTH],
        target_units: INTENSITY,
        truth: |x| x[0] / (4.0 * std::f64::consts::PI * x[1] * x[1]),
    },
    ProblemSpec {
        label: "II.34.11",
        true_form: "g_*q*B/(2*m)",
        names: &["g_", "q", "B", "m"],
        ranges: &[(1.0, 2.0), (1.0, 5.0), (1.0, 5.0), (1.0, 5.0)],
        var_units: &[DIMLESS, CHARGE, BFIELD, MASS],
        target_units: ANGULAR_FREQ,
        truth: |x| x[0] * x[1] * x[2] / (2.0 * x[3]),
    },
    ProblemSpec {
        label: "I.13.12",
        true_form: "G*m1*m2*(1/r2 - 1/r1)",
        names: &["m1", "m2", "r1", "r2", "G"],
        ranges: &[(1.0, 5.0), (1.0, 5.0), (1.0, 5.0), (1.0, 5.0), (1.0, 5.0)],
        var_units: &[MASS, MASS, LENGTH, LENGTH, GRAVITATION],
        target_units: ENERGY,
        truth: |x| x[4] * x[0] * x[1] * (1.0 / x[3] - 1.0 / x[2]),
    },
    ProblemSpec {
        label: "I.24.6",
        true_form: "m*(omega^2 + omega0^2)*x^2/4",
        names: &["m", "omega", "omega0", "x"],
        ranges: &[(1.0, 3.0), (1.0, 3.0), (1.0, 3.0), (1.0, 3.0)],
        var_units: &[MASS, ANGULAR_FREQ, ANGULAR_FREQ, LENGTH],
        target_units: ENERGY,
        truth: |x| x[0] * (x[1] * x[1] + x[2] * x[2]) * x[3] * x[3] / 4.0,
    },
    ProblemSpec {
        label: "I.9.18",
        true_form: "G*m1*m2/((x2-x1)^2 + (y2-y1)^2 + (z2-z1)^2)",
        names: &["G", "m1", "m2", "x1", "x2", "y1", "y2", "z1", "z2"],
        ranges: &[
            (1.0, 2.0),
            (1.0, 2.0),
            (1.0, 2.0),
            (1.0, 2.0),
            (3.0, 4.0),
            (1.0, 2.0),
            (3.0, 4.0),
            (1.0, 2.0),
            (3.0, 4.0),
        ],
        var_units: &[
            GRAVITATION,
            MASS,
            MASS,
            LENGTH,
            LENGTH,
            LENGTH,
            LENGTH,
            LENGTH,
            LENGTH,
        ],
        target_units: FORCE,
        truth: |x| {
            let dx = x[4] - x[3];
            let dy = x[6] - x[5];
            let dz = x[8] - x[7];
            x[0] * x[1] * x[2] / (dx * dx + dy * dy + dz * dz)
        },
    },
    ProblemSpec {
        label: "I.6.20a",
        true_form: "exp(-theta^2/2)/sqrt(2*pi)",
        names: &["theta"],
        ranges: &[(1.0, 3.0)],
        var_units: &[DIMLESS],
        target_units: DIMLESS,
        truth: |x| (-x[0] * x[0] / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt(),
    },
];

pub fn registry() -> &'static [ProblemSpec] {
    &REGISTRY
}

pub fn find_problem(label: &str) -> Option<&'static ProblemSpec> {
    REGISTRY.iter().find(|p| p.label == label)
}

impl ProblemSpec {
    /// Samples `n_points` rows uniformly from the variable ranges and
    /// evaluates the true formula; pure in (seed, n_points).
    pub fn generate(&self, n_points: usize, seed: u64) -> Dataset<f64> {
        let mut rng = SplitMix64::new(seed);
        let mut points = Vec::with_capacity(n_points);
        let mut targets = Vec::with_capacity(n_points);
        for _ in 0..n_points {
            let row: Vec<f64> =
                self.ranges.iter().map(|&(lo, hi)| rng.uniform(lo, hi)).collect();
            targets.push((self.truth)(&row));
            points.push(row);
        }
        Dataset::new(self.names.iter().map(|s| s.to_string()).collect(), points, targets)
            .expect("registry data is well formed")
            .with_units(self.unit_table())
            .expect("registry unit tables match their variables")
    }

    pub fn unit_table(&self) -> UnitTable {
        UnitTable {
            dim_names: DIM_NAMES.iter().map(|s| s.to_string()).collect(),
            var_units: self.var_units.iter().map(|u| UnitVector::from_ints(u)).collect(),
            target_units: UnitVector::from_ints(&self.target_units),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("unknown benchmark label {0:?}")]
    UnknownLabel(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// One benchmark outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub label: String,
    pub status: StatusKind,
    pub formula: Option<String>,
    pub sse: Option<f64>,
    pub elapsed_s: f64,
    pub seed: u64,
}

/// Machine-readable benchmark table plus the config it ran under.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub config: SolverConfig<f64>,
}

impl BenchReport {
    /// Fixed-width text table for terminals.
    pub fn summary(&self) -> String {
        let mut out = String::from("label        status     time        model\n");
        for row in &self.rows {
            let formula = row.formula.as_deref().unwrap_or("-");
            out.push_str(&format!(
                "{:<12} {:<10} {:>8.2} s  {}\n",
                row.label,
                row.status.to_string(),
                row.elapsed_s,
                formula,
            ));
        }
        out
    }
}

/// Generates each labelled problem's dataset and searches it with the
/// default restart plan. Labels are resolved up front so a typo fails
/// before any search time is spent.
pub fn run_benchmark(
    labels: &[String],
    cfg: &SolverConfig<f64>,
    opts: &SearchOptions,
) -> Result<BenchReport, BenchError> {
    let mut specs = Vec::with_capacity(labels.len());
    for label in labels {
        specs.push(find_problem(label).ok_or_else(|| BenchError::UnknownLabel(label.clone()))?);
    }
    let seed = opts.seed.unwrap_or(1);
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let data = spec.generate(BENCH_POINTS, seed);
        let run_opts = SearchOptions {
            label: Some(spec.label.to_string()),
            seed: Some(seed),
            ..opts.clone()
        };
        let report = search_with_restarts(&data, cfg, &default_plan(cfg), &run_opts)?;
        let best = report.best_model();
        rows.push(BenchRow {
            label: spec.label.to_string(),
            status: report.status,
            formula: best.map(|m| m.rendered.clone()),
            sse: best.map(|m| m.sse),
            elapsed_s: report.elapsed_s,
            seed,
        });
    }
    Ok(BenchReport { rows, config: cfg.clone() })
}
