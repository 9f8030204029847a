//! End-to-end run: general position, branch completion, refinement and the
//! graph.

use num_traits::{Signed, Zero};

use crate::algebra::{midpoint, pow2, rat, BivarPoly, Interval, Rational};
use crate::counters::{CounterSnapshot, Counters};
use crate::error::{Error, Result};
use crate::sweep::{general_position_pipeline, SweepConfig};
use crate::topology::{build_graph, complete_to_data, connected_components, refine, CurveData, TopoGraph};

pub use crate::sweep::Mode;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    /// Width of fiber intervals and of certified boxes.
    pub epsilon: Rational,
    /// Strip `[lo, hi]` to sweep; its ends must be regular values.
    pub x_range: Option<(Rational, Rational)>,
    /// Distance of the outer samples from the extreme critical values.
    pub margin: Rational,
    /// Regular abscissas inserted after the sweep.
    pub refine_count: usize,
    pub derivative_test: bool,
    pub no_discriminant: bool,
    pub seed: u64,
    pub max_shear_attempts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Float,
            epsilon: pow2(-10),
            x_range: None,
            margin: rat(1),
            refine_count: 0,
            derivative_test: true,
            no_discriminant: false,
            seed: 0,
            max_shear_attempts: 20,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_positive() {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if !self.margin.is_positive() {
            return Err(Error::InvalidConfig("margin must be positive".into()));
        }
        if let Some((lo, hi)) = &self.x_range {
            if lo >= hi {
                return Err(Error::InvalidConfig(format!(
                    "x-range {lo},{hi} is empty"
                )));
            }
        }
        if self.max_shear_attempts == 0 {
            return Err(Error::InvalidConfig("max shear attempts must be positive".into()));
        }
        Ok(())
    }

    fn sweep(&self) -> SweepConfig {
        SweepConfig {
            mode: self.mode,
            epsilon: self.epsilon.clone(),
            margin: self.margin.clone(),
            x_range: self
                .x_range
                .as_ref()
                .map(|(lo, hi)| Interval::new(lo.clone(), hi.clone())),
            no_discriminant: self.no_discriminant,
            relaxed: self.derivative_test,
            seed: self.seed,
            max_attempts: self.max_shear_attempts,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub input: BivarPoly,
    /// The swept polynomial, in sheared coordinates.
    pub curve: BivarPoly,
    /// Shear `t`: the sweep ran on `g(x + t·y, y)`.
    pub shear: Rational,
    /// Shears tried, the accepted one included.
    pub attempts: usize,
    pub data: CurveData,
    pub graph: TopoGraph,
    pub components: usize,
    pub counters: CounterSnapshot,
}

/// Abscissa halving the widest gap between consecutive samples (the first
/// one on ties).
pub fn widest_gap_midpoint(data: &CurveData) -> Option<Rational> {
    let xs = &data.table.partition.xs;
    let mut best: Option<(Rational, Rational)> = None;
    for w in xs.windows(2) {
        let gap = &w[1].lo - &w[0].hi;
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, midpoint(&w[0].hi, &w[1].lo)));
        }
    }
    best.filter(|(g, _)| !g.is_zero()).map(|(_, m)| m)
}

/// Runs the whole pipeline with fresh counters.
pub fn run(config: &RunConfig, g: &BivarPoly) -> Result<RunOutcome> {
    run_with_counters(config, g, &Counters::new())
}

pub fn run_with_counters(config: &RunConfig, g: &BivarPoly, counters: &Counters) -> Result<RunOutcome> {
    config.validate()?;
    let accepted = general_position_pipeline(g, &config.sweep(), counters)?;
    let mut data = complete_to_data(accepted.table, config.derivative_test, counters)?;
    for _ in 0..config.refine_count {
        let Some(x) = widest_gap_midpoint(&data) else {
            break;
        };
        data = refine(&data, &x, counters)?;
    }
    let graph = build_graph(&data, counters)?;
    let components = connected_components(&graph);
    Ok(RunOutcome {
        config: config.clone(),
        input: g.clone(),
        curve: accepted.curve,
        shear: accepted.shear,
        attempts: accepted.attempts,
        data,
        graph,
        components,
        counters: counters.snapshot(),
    })
}
