use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::FuzzyError;

/// Tolerance used when snapping a scaled value onto its grid level, so that
/// products such as `0.57 * 100 = 56.999999999999993` land on level 57.
const SNAP_EPS: f64 = 1e-9;

/// The finite grid `{0, δ, 2δ, …, 1}` that every stored membership lives on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    delta: f64,
    steps: u64,
}

impl Grid {
    pub const DEFAULT_DELTA: f64 = 0.01;

    pub fn new(delta: f64) -> Result<Self, FuzzyError> {
        if !(delta.is_finite() && delta > 0.0 && delta <= 1.0) {
            return Err(FuzzyError::InvalidDelta(delta));
        }
        let inv = 1.0 / delta;
        let steps = inv.round();
        if (inv - steps).abs() > 1e-6 * steps.max(1.0) {
            return Err(FuzzyError::InvalidDelta(delta));
        }
        Ok(Grid {
            delta,
            steps: steps as u64,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of grid points, `⌊1/δ⌋ + 1`.
    pub fn levels(&self) -> usize {
        self.steps as usize + 1
    }

    /// Conservative discretization: clamp into `[0, 1]`, then round down to
    /// the nearest grid point.
    pub fn quantize(&self, x: f64) -> Grade {
        if x.is_nan() || x <= 0.0 {
            return Grade::ZERO;
        }
        if x >= 1.0 {
            return Grade::ONE;
        }
        let level = ((x * self.steps as f64) + SNAP_EPS).floor() as u64;
        Grade(level.min(self.steps) as f64 / self.steps as f64)
    }

    pub fn contains(&self, g: Grade) -> bool {
        self.quantize(g.0) == g
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid::new(Self::DEFAULT_DELTA).expect("default delta is valid")
    }
}

/// A membership degree that lies exactly on some [`Grid`].
///
/// Grades are only produced by [`Grid::quantize`] or by `min`/`max` of
/// existing grades, both of which stay on the grid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Grade(f64);

impl Grade {
    pub const ZERO: Grade = Grade(0.0);
    pub const ONE: Grade = Grade(1.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl PartialEq for Grade {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Grade {}

impl PartialOrd for Grade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Grade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Hash for Grade {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TNorm {
    #[default]
    Product,
    Min,
}

pub fn tnorm(a: Grade, b: Grade, kind: TNorm) -> f64 {
    match kind {
        TNorm::Product => a.0 * b.0,
        TNorm::Min => a.0.min(b.0),
    }
}
