//! Operation counters.
//!
//! Counters are shared by reference across worker threads, so every field is
//! an atomic updated with relaxed ordering.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

#[derive(Debug, Default)]
pub struct Counters {
    ring_ops: AtomicU64,
    branch_additions: AtomicU64,
    graph_additions: AtomicU64,
    derivative_test_ops: AtomicU64,
    isolations: AtomicU64,
}

/// Plain copy of [`Counters`] at one instant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterSnapshot {
    /// Rational additions and multiplications spent in polynomial evaluation.
    pub ring_ops: u64,
    /// Integer additions spent completing the branch matrices.
    pub branch_additions: u64,
    /// Integer additions (decrements) spent by the greedy graph construction.
    pub graph_additions: u64,
    /// Evaluations spent on higher-derivative classification.
    pub derivative_test_ops: u64,
    /// Calls to univariate real root isolation.
    pub isolations: u64,
}

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_ring_ops(&self, n: u64) {
        self.ring_ops.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_branch_additions(&self, n: u64) {
        self.branch_additions.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_graph_additions(&self, n: u64) {
        self.graph_additions.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_derivative_test_ops(&self, n: u64) {
        self.derivative_test_ops.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_isolation(&self) {
        self.isolations.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            ring_ops: self.ring_ops.load(Ordering::Relaxed),
            branch_additions: self.branch_additions.load(Ordering::Relaxed),
            graph_additions: self.graph_additions.load(Ordering::Relaxed),
            derivative_test_ops: self.derivative_test_ops.load(Ordering::Relaxed),
            isolations: self.isolations.load(Ordering::Relaxed),
        }
    }
}
