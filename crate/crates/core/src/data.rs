//! In-memory training data: named variables, sample points, targets, and an
//! optional table of physical units.

use serde::{Deserialize, Serialize};

use crate::dimension::UnitVector;
use crate::Real;

/// Tabular regression data. Row `points[i]` pairs with `targets[i]`; column
/// order follows `names`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset<S> {
    pub names: Vec<String>,
    pub points: Vec<Vec<S>>,
    pub targets: Vec<S>,
    pub units: Option<UnitTable>,
}

/// Reasons a dataset shape is rejected at construction.
#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("point {index} has {got} values, expected {expected}")]
    RaggedRow { index: usize, expected: usize, got: usize },
    #[error("point count {points} does not match target count {targets}")]
    LengthMismatch { points: usize, targets: usize },
    #[error("non-finite value in row {index}")]
    NonFinite { index: usize },
    #[error("unit table covers {got} variables, dataset has {expected}")]
    UnitArity { expected: usize, got: usize },
}

impl<S: Real> Dataset<S> {
    pub fn new(
        names: Vec<String>,
        points: Vec<Vec<S>>,
        targets: Vec<S>,
    ) -> Result<Self, DataError> {
        if points.len() != targets.len() {
            return Err(DataError::LengthMismatch { points: points.len(), targets: targets.len() });
        }
        for (i, row) in points.iter().enumerate() {
            if row.len() != names.len() {
                return Err(DataError::RaggedRow { index: i, expected: names.len(), got: row.len() });
            }
            if row.iter().any(|v| !v.is_finite()) || !targets[i].is_finite() {
                return Err(DataError::NonFinite { index: i });
            }
        }
        Ok(Dataset { names, points, targets, units: None })
    }

    pub fn with_units(mut self, units: UnitTable) -> Result<Self, DataError> {
        if units.var_units.len() != self.names.len() {
            return Err(DataError::UnitArity {
                expected: self.names.len(),
                got: units.var_units.len(),
            });
        }
        self.units = Some(units);
        Ok(self)
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// Sum of squared targets; the natural scale for relative tolerances.
    pub fn sum_sq_targets(&self) -> S {
        let mut acc = S::zero();
        for &y in &self.targets {
            acc = acc + y * y;
        }
        acc
    }
}

/// Physical units for every variable and for the target, as exact rational
/// exponent vectors over a shared list of base dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitTable {
    pub dim_names: Vec<String>,
    pub var_units: Vec<UnitVector>,
    pub target_units: UnitVector,
}

impl UnitTable {
    pub fn n_dims(&self) -> usize {
        self.dim_names.len()
    }

    /// True when every variable and the target are dimensionless.
    pub fn is_trivial(&self) -> bool {
        self.target_units.is_zero() && self.var_units.iter().all(|u| u.is_zero())
    }
}
