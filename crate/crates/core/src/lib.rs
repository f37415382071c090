//! Digit-by-digit square and cube root extraction over arbitrary-precision
//! decimal naturals, with a per-step trace, operation counters, a
//! brute-force oracle for differential checks, and a long-form tableau
//! renderer.
//!
//! ```
//! use digit_roots::{extract_root, DecimalNatural, RootKind};
//!
//! let x: DecimalNatural = "34965783".parse().unwrap();
//! let r = extract_root(&x, RootKind::Cube);
//! assert_eq!(r.root.to_string(), "327");
//! assert!(r.remainder.is_zero());
//! ```

pub mod complexity;
pub mod decimal;
pub mod engine;
pub mod oracle;
pub mod tableau;

pub use complexity::{compare, predicted_counts, ComplexityReport};
pub use decimal::{DecimalNatural, ParseDecimalError, Underflow};
pub use engine::{
    extract_root, EngineError, EventKind, OpCounters, RootKind, RootResult, RootState, TraceEvent,
};
pub use oracle::{floor_root, verify_random, verify_range, VerifyReport};
pub use tableau::{render_text, MarkerStyle};
