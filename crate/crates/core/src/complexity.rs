//! Predicted versus measured primitive-operation counts.
//!
//! The predicted model charges a fixed bundle of operations per iteration,
//! plus one table lookup for the leading group:
//!
//! | root   | per iteration            |
//! |--------|--------------------------|
//! | cube   | `12M + 3A + 3D + 4S`     |
//! | square | `5M + 3A + 2D + 3S`      |
//!
//! Measured counts come from the engine's own tallies and are not expected
//! to agree exactly with the model; the report shows both side by side.

use serde::Serialize;

use crate::engine::{OpCounters, RootKind, RootResult};

/// Per-iteration coefficients of the predicted model.
pub fn per_iteration_cost(kind: RootKind) -> OpCounters {
    match kind {
        RootKind::Cube => OpCounters::new(12, 3, 3, 4, 0),
        RootKind::Square => OpCounters::new(5, 3, 2, 3, 0),
    }
}

/// Iterations the engine runs on an `digits`-digit input: one per anchor
/// place below the highest.
pub fn iterations_for(digits: usize, kind: RootKind) -> usize {
    digits.saturating_sub(1) / kind.period()
}

/// Predicted totals for a given iteration count.
pub fn predicted_for_iterations(iterations: usize, kind: RootKind) -> OpCounters {
    per_iteration_cost(kind).scaled(iterations as u64) + OpCounters::new(0, 0, 0, 0, 1)
}

/// Predicted totals for an `digits`-digit input.
pub fn predicted_counts(digits: usize, kind: RootKind) -> OpCounters {
    assert!(digits >= 1, "digit count must be positive");
    predicted_for_iterations(iterations_for(digits, kind), kind)
}

/// Signed per-counter difference, measured minus predicted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CounterDelta {
    #[serde(rename = "M")]
    pub multiplications: i64,
    #[serde(rename = "A")]
    pub additions: i64,
    #[serde(rename = "D")]
    pub divisions: i64,
    #[serde(rename = "S")]
    pub subtractions: i64,
    pub lookups: i64,
}

impl CounterDelta {
    pub fn between(measured: OpCounters, predicted: OpCounters) -> Self {
        let d = |a: u64, b: u64| a as i64 - b as i64;
        Self {
            multiplications: d(measured.multiplications, predicted.multiplications),
            additions: d(measured.additions, predicted.additions),
            divisions: d(measured.divisions, predicted.divisions),
            subtractions: d(measured.subtractions, predicted.subtractions),
            lookups: d(measured.lookups, predicted.lookups),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub kind: RootKind,
    /// Digit count of the input.
    pub digits: usize,
    pub iterations: usize,
    pub predicted: OpCounters,
    pub measured: OpCounters,
    pub difference: CounterDelta,
    /// Clamp plus decrement events.
    pub adjustments: usize,
    /// Measured increments of the seed, then of each iteration.
    pub stages: Vec<OpCounters>,
}

impl ComplexityReport {
    /// The model's iteration count taken literally as `digits / k`.
    pub fn nominal_iterations(&self) -> f64 {
        self.digits as f64 / f64::from(self.kind.exponent())
    }
}

pub fn compare(result: &RootResult) -> ComplexityReport {
    let kind = result.kind;
    let digits = result.input_digits;
    let predicted = if digits == 0 {
        OpCounters::default()
    } else {
        predicted_for_iterations(result.iterations, kind)
    };
    ComplexityReport {
        kind,
        digits,
        iterations: result.iterations,
        predicted,
        measured: result.counters,
        difference: CounterDelta::between(result.counters, predicted),
        adjustments: result.adjustments(),
        stages: result.stage_counters.clone(),
    }
}
