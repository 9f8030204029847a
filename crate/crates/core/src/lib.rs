//! Topology of real algebraic plane curves.
//!
//! Given `g ∈ ℚ[x, y]`, this crate computes a straight-line graph isotopic to
//! the real curve `{g = 0}` over a vertical strip. The pipeline sweeps a
//! vertical line across the plane:
//!
//! 1. the critical abscissas are the real roots of the discriminant of `g`
//!    with respect to `y` ([`sweep::critical_values`]);
//! 2. a good partition interleaves a regular sample between any two critical
//!    abscissas and the fibers over every sample are isolated
//!    ([`sweep::build_table`]);
//! 3. regular fiber points carry one half-branch on each side, and the branch
//!    counts at the single critical point of a critical fiber follow from the
//!    conservation of half-branches between adjacent fibers
//!    ([`topology::complete_to_data`]);
//! 4. a greedy matching connects the fiber points ([`topology::build_graph`]).
//!
//! Everything is computed with exact rational arithmetic except for the
//! critical fibers of the `float` mode, which use double precision complex
//! root finding. The `certified` mode covers critical fibers with rational
//! boxes whose signs are decided from Bernstein coefficients.

pub mod algebra;
pub mod certified;
pub mod counters;
pub mod emit;
mod error;
pub mod pipeline;
pub mod report;
pub mod roots;
pub mod sweep;
pub mod text;
pub mod topology;

pub use algebra::{BivarPoly, Interval, Rational, UnivarPoly};
pub use counters::{CounterSnapshot, Counters};
pub use error::{Error, Result};
pub use pipeline::{run, Mode, RunConfig, RunOutcome};
