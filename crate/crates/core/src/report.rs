//! The serializable topology report (schema version `"1"`, documented in
//! `docs/schema.md`).
//!
//! Exact rationals are strings `"p/q"` (or `"n"`); every exact value has a
//! float companion named `approx` for plotting. In certified mode, interval
//! abscissas and ordinates are two-element ranges; float mode writes single
//! samples throughout.

use serde::{Deserialize, Serialize};

use crate::algebra::{to_f64, Interval};
use crate::counters::CounterSnapshot;
use crate::pipeline::RunOutcome;
use crate::sweep::Mode;

pub const SCHEMA_VERSION: &str = "1";

/// A rational, or a range of rationals, in exact text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactValue {
    Point(String),
    Range([String; 2]),
}

impl ExactValue {
    /// Points stay points; intervals become ranges unless `points_only`, in
    /// which case their midpoint is written.
    pub fn of(iv: &Interval, points_only: bool) -> Self {
        if iv.is_point() {
            ExactValue::Point(iv.lo.to_string())
        } else if points_only {
            ExactValue::Point(iv.midpoint().to_string())
        } else {
            ExactValue::Range([iv.lo.to_string(), iv.hi.to_string()])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearEntry {
    pub value: String,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbscissaEntry {
    pub index: usize,
    pub critical: bool,
    pub x: ExactValue,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberPointEntry {
    pub rank: usize,
    pub y: ExactValue,
    pub approx: f64,
    pub delta: bool,
    pub left: u32,
    pub right: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub schema_version: String,
    pub mode: Mode,
    /// Canonical text of the input polynomial.
    pub input: String,
    /// Canonical text of the swept polynomial `g(x + t·y, y)` after removal
    /// of repeated factors and rootless content.
    pub curve: String,
    pub shear: ShearEntry,
    pub degree: usize,
    /// Width of the branch matrices.
    pub columns: usize,
    pub partition: Vec<AbscissaEntry>,
    pub fibers: Vec<Vec<FiberPointEntry>>,
    #[serde(rename = "L")]
    pub left: Vec<Vec<u32>>,
    #[serde(rename = "R")]
    pub right: Vec<Vec<u32>>,
    /// `[[fiber, rank], [fiber + 1, rank']]`, 0-based.
    pub edges: Vec<[[usize; 2]; 2]>,
    pub components: usize,
    pub counters: CounterSnapshot,
}

impl TopologyReport {
    pub fn from_outcome(out: &RunOutcome) -> Self {
        let table = &out.data.table;
        let points_only = table.mode == Mode::Float;
        let partition = table
            .partition
            .xs
            .iter()
            .zip(&table.partition.critical)
            .enumerate()
            .map(|(index, (iv, &critical))| AbscissaEntry {
                index,
                critical,
                x: ExactValue::of(iv, points_only),
                approx: iv.approx(),
            })
            .collect();
        let fibers = table
            .fibers
            .iter()
            .enumerate()
            .map(|(i, fiber)| {
                fiber
                    .iter()
                    .map(|p| FiberPointEntry {
                        rank: p.rank,
                        y: ExactValue::of(&p.y, points_only),
                        approx: p.y.approx(),
                        delta: p.delta,
                        left: out.data.left[i][p.rank],
                        right: out.data.right[i][p.rank],
                    })
                    .collect()
            })
            .collect();
        TopologyReport {
            schema_version: SCHEMA_VERSION.to_string(),
            mode: table.mode,
            input: out.input.to_string(),
            curve: out.curve.to_string(),
            shear: ShearEntry {
                value: out.shear.to_string(),
                approx: to_f64(&out.shear),
            },
            degree: table.degree,
            columns: out.data.left.first().map_or(0, Vec::len),
            partition,
            fibers,
            left: out.data.left.clone(),
            right: out.data.right.clone(),
            edges: out
                .graph
                .edges
                .iter()
                .map(|&((i, j), (k, l))| [[i, j], [k, l]])
                .collect(),
            components: out.components,
            counters: out.counters,
        }
    }
}
