//! The sweep: critical abscissas, general position, the good partition and
//! the fibers above every sample.

mod float;

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    discriminant_y, from_f64, pow2, rat, to_f64, BivarPoly, Interval, Rational, Sign,
    UnivarPoly,
};
use crate::certified::{
    classify_boxes, default_y_range, epsilon_floor, fiber_box_cover, locate_critical_boxes, Rect,
};
use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::roots::{gap_midpoint, isolate_roots, isolate_roots_default, refine_interval, root_bound, sign_at_root, RootInterval};

/// How critical fibers are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact regular fibers; irrational critical fibers from double
    /// precision complex roots.
    #[default]
    Float,
    /// Every fiber certified: critical fibers are rational box covers.
    Certified,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Float => "float",
            Mode::Certified => "certified",
        })
    }
}

/// Sorted abscissas with critical flags. Regular abscissas are single
/// rationals; a critical abscissa is an interval isolating one critical
/// value (a single rational when that value is rational).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPartition {
    pub xs: Vec<Interval>,
    pub critical: Vec<bool>,
}

impl GoodPartition {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Rational representative of abscissa `i`.
    pub fn sample(&self, i: usize) -> Rational {
        self.xs[i].midpoint()
    }
}

/// Signs at a critical point of `g_x` and of `g_{y^r}` for `r = 2, 3, …`.
/// Exact fibers report `Zero`; box fibers report `Unknown` for a sign they
/// cannot decide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalProbe {
    pub gx: Sign,
    pub higher: Vec<Sign>,
}

impl CriticalProbe {
    /// `g_x` certainly nonzero: the point is smooth.
    pub fn is_smooth(&self) -> bool {
        self.gx.is_definite()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPoint {
    /// Ordinate: a single rational in float mode, an interval in certified
    /// mode.
    pub y: Interval,
    /// `g_y ≠ 0` at the point.
    pub delta: bool,
    /// Position in the fiber, from the bottom.
    pub rank: usize,
    /// Present exactly when `delta` is false.
    pub probe: Option<CriticalProbe>,
}

impl FiberPoint {
    pub fn regular(y: Interval) -> Self {
        FiberPoint {
            y,
            delta: true,
            rank: 0,
            probe: None,
        }
    }

    pub fn critical(y: Interval, probe: CriticalProbe) -> Self {
        FiberPoint {
            y,
            delta: false,
            rank: 0,
            probe: Some(probe),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiberTable {
    /// The swept curve (after any shear).
    pub curve: BivarPoly,
    pub mode: Mode,
    pub epsilon: Rational,
    pub partition: GoodPartition,
    pub fibers: Vec<Vec<FiberPoint>>,
    /// Every critical interval of the curve, including those outside a
    /// user-chosen strip.
    pub critical: Vec<Interval>,
    pub degree: usize,
}

impl FiberTable {
    /// Width of the branch matrices: the largest possible fiber size.
    pub fn width(&self) -> usize {
        self.curve
            .deg_y()
            .max(self.fibers.iter().map(Vec::len).max().unwrap_or(0))
    }
}

/// Parameters of one sweep.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub mode: Mode,
    pub epsilon: Rational,
    pub margin: Rational,
    pub x_range: Option<Interval>,
    pub no_discriminant: bool,
    /// Accept fibers with several smooth critical points.
    pub relaxed: bool,
    pub seed: u64,
    pub max_attempts: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: Mode::Float,
            epsilon: pow2(-10),
            margin: rat(1),
            x_range: None,
            no_discriminant: false,
            relaxed: true,
            seed: 0,
            max_attempts: 20,
        }
    }
}

/// Why a sheared curve is not in general position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    /// The leading coefficient in `y` is not constant: some branch escapes
    /// to infinity above a finite abscissa.
    VerticalAsymptote,
    /// The sheared curve contains a vertical line.
    VerticalLine { x: f64 },
    /// A critical fiber holds more points than the conservation law can
    /// resolve.
    CrowdedFiber { fiber: usize, x: f64, points: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub shear: String,
    pub violations: Vec<Violation>,
}

impl GeneralPositionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GeneralPositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "shear {}:", self.shear)?;
        if self.violations.is_empty() {
            return f.write_str(" general position");
        }
        for v in &self.violations {
            match v {
                Violation::VerticalAsymptote => f.write_str(" vertical asymptote;")?,
                Violation::VerticalLine { x } => write!(f, " vertical line at x ≈ {x};")?,
                Violation::CrowdedFiber { fiber, x, points } => write!(
                    f,
                    " fiber {fiber} (x ≈ {x}) has {points} unresolvable critical points;"
                )?,
            }
        }
        Ok(())
    }
}

/// Squarefree part of the discriminant with respect to `y`.
pub fn critical_polynomial(g: &BivarPoly) -> Result<UnivarPoly> {
    if g.deg_y() == 0 {
        return Ok(UnivarPoly::one());
    }
    let disc = discriminant_y(g)?;
    if disc.is_zero() {
        return Err(Error::NonSquarefree);
    }
    disc.squarefree_part()
}

/// Rejects curves containing a vertical line `x = c`.
pub fn check_vertical_lines(g: &BivarPoly) -> Result<()> {
    let content = g.content_x();
    if content.is_constant() {
        return Ok(());
    }
    let roots = isolate_roots_default(&content.squarefree_part()?)?;
    match roots.first() {
        None => Ok(()),
        Some(iv) => Err(Error::VerticalLineComponent {
            x: if iv.is_point() {
                iv.lo.to_string()
            } else {
                format!("{:.6}", iv.approx())
            },
        }),
    }
}

/// Isolating intervals of the critical values, sorted.
pub fn critical_values(g: &BivarPoly) -> Result<Vec<RootInterval>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_vertical_lines(g)?;
    isolate_roots_default(&critical_polynomial(g)?)
}

/// Interleaves regular samples with the critical intervals. Without a range
/// the outer samples sit `margin` beyond the extreme critical values; with a
/// range its endpoints are the outer samples.
pub fn build_good_partition(
    crit: &[Interval],
    margin: &Rational,
    range: Option<&Interval>,
) -> GoodPartition {
    let (first, last) = match (range, crit.first(), crit.last()) {
        (Some(r), _, _) => (r.lo.clone(), r.hi.clone()),
        (None, Some(a), Some(b)) => (&a.lo - margin, &b.hi + margin),
        (None, _, _) => (-margin.clone(), margin.clone()),
    };
    let mut xs = vec![Interval::point(first)];
    let mut critical = vec![false];
    for (k, iv) in crit.iter().enumerate() {
        if k > 0 {
            xs.push(Interval::point(gap_midpoint(&crit[k - 1], iv)));
            critical.push(false);
        }
        xs.push(iv.clone());
        critical.push(true);
    }
    xs.push(Interval::point(last));
    critical.push(false);
    GoodPartition { xs, critical }
}

/// Keeps the critical intervals strictly inside `range`, refining those that
/// straddle an endpoint. An endpoint equal to a critical value is rejected.
fn restrict_to_range(
    crit: &[Interval],
    disc: &UnivarPoly,
    range: &Interval,
) -> Result<Vec<Interval>> {
    let mut out = Vec::new();
    for iv in crit {
        let mut iv = iv.clone();
        loop {
            if iv.hi < range.lo || iv.lo > range.hi {
                break;
            }
            if iv.lo > range.lo && iv.hi < range.hi {
                out.push(iv);
                break;
            }
            if iv.is_point() {
                return Err(Error::InvalidConfig(format!(
                    "x-range endpoint {} is a critical value",
                    iv.lo
                )));
            }
            iv = crate::roots::bisect_once(disc, &iv);
        }
    }
    Ok(out)
}

/// Fiber over a regular abscissa: every root of the slice, isolated and
/// refined to width `eps`.
pub fn regular_fiber(
    g: &BivarPoly,
    x: &Rational,
    eps: &Rational,
    mode: Mode,
    counters: &Counters,
) -> Result<Vec<FiberPoint>> {
    let slice = g.slice_at_x(x);
    counters.add_ring_ops(2 * (g.deg_x() as u64) * (g.deg_y() as u64 + 1));
    counters.add_isolation();
    if slice.is_zero() {
        return Err(Error::VerticalLineComponent { x: x.to_string() });
    }
    if slice.is_constant() {
        return Ok(Vec::new());
    }
    let b = root_bound(&slice)?;
    let roots = isolate_roots(&slice, &Interval::new(-b.clone(), b))?;
    Ok(ranked(
        roots
            .iter()
            .map(|iv| FiberPoint::regular(output_y(&refine_interval(&slice, iv, eps), mode)))
            .collect(),
    ))
}

fn output_y(iv: &Interval, mode: Mode) -> Interval {
    match mode {
        Mode::Float => Interval::point(iv.midpoint()),
        Mode::Certified => iv.clone(),
    }
}

fn ranked(mut points: Vec<FiberPoint>) -> Vec<FiberPoint> {
    for (rank, p) in points.iter_mut().enumerate() {
        p.rank = rank;
    }
    points
}

/// Fiber over a rational critical value, decided exactly: a root of the
/// slice is critical when it is also a root of the derivative, and the
/// probe signs are the exact signs of `g_x`, `g_yy`, … there.
pub fn exact_critical_fiber(
    g: &BivarPoly,
    x: &Rational,
    eps: &Rational,
    mode: Mode,
    counters: &Counters,
) -> Result<Vec<FiberPoint>> {
    let slice = g.slice_at_x(x);
    counters.add_isolation();
    if slice.is_zero() {
        return Err(Error::VerticalLineComponent { x: x.to_string() });
    }
    if slice.is_constant() {
        return Ok(Vec::new());
    }
    let sf = slice.squarefree_part()?;
    let repeated = UnivarPoly::gcd(&slice, &slice.derivative());
    let gx = g.partial_x().slice_at_x(x);
    let higher: Vec<UnivarPoly> = (2..=g.deg_y().max(2))
        .map(|r| g.partial_y(r).slice_at_x(x))
        .collect();
    let b = root_bound(&sf)?;
    let roots = isolate_roots(&sf, &Interval::new(-b.clone(), b))?;
    let points = roots
        .iter()
        .map(|iv| {
            let multiple =
                !repeated.is_constant() && sign_at_root(&repeated, &sf, iv).0 == Sign::Zero;
            let y = output_y(&refine_interval(&sf, iv, eps), mode);
            if !multiple {
                return FiberPoint::regular(y);
            }
            let probe = CriticalProbe {
                gx: sign_at_root(&gx, &sf, iv).0,
                higher: higher.iter().map(|h| sign_at_root(h, &sf, iv).0).collect(),
            };
            FiberPoint::critical(y, probe)
        })
        .collect();
    Ok(ranked(points))
}

/// Fiber over an irrational critical value in float mode: the slice at the
/// midpoint of the (very narrow) critical interval, solved in double
/// precision; roots closer than `eps` merge into one critical point.
pub fn float_critical_fiber(g: &BivarPoly, x: &Interval, eps: &Rational) -> Vec<FiberPoint> {
    let xm = x.midpoint();
    let slice = g.slice_at_x(&xm);
    let coeffs: Vec<f64> = slice.coeffs().iter().map(to_f64).collect();
    let tol = to_f64(eps);
    let roots = float::complex_roots(&coeffs);
    let xf = to_f64(&xm);
    let gx = g.partial_x();
    let higher: Vec<BivarPoly> = (2..=g.deg_y().max(2)).map(|r| g.partial_y(r)).collect();
    let float_sign = |h: &BivarPoly, y: f64| {
        let v = h.eval_f64(xf, y);
        if v.abs() <= tol * h.magnitude_f64(xf, y) {
            Sign::Zero
        } else if v > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    };
    let points = float::real_clusters(&roots, tol)
        .into_iter()
        .map(|c| {
            let y = Interval::point(from_f64(c.y));
            if c.size == 1 {
                FiberPoint::regular(y)
            } else {
                let probe = CriticalProbe {
                    gx: float_sign(&gx, c.y),
                    higher: higher.iter().map(|h| float_sign(h, c.y)).collect(),
                };
                FiberPoint::critical(y, probe)
            }
        })
        .collect();
    ranked(points)
}

/// Halvings of epsilon after which several possibly singular boxes in one
/// fiber are reported instead of shrunk further.
const LENIENT_AFTER: u32 = 8;

/// Fiber over an irrational critical value in certified mode. The critical
/// interval is narrowed to width `e²` and covered by boxes of height `e`,
/// halving `e` until the boxes classify. Returns the narrowed interval.
pub fn certified_critical_fiber(
    g: &BivarPoly,
    x: &Interval,
    disc: &UnivarPoly,
    eps: &Rational,
    fiber: usize,
    counters: &Counters,
) -> Result<(Interval, Vec<FiberPoint>)> {
    let floor = epsilon_floor();
    let mut e = eps.clone();
    let mut halvings = 0;
    loop {
        let j = refine_interval(disc, x, &(&e * &e));
        if j.is_point() {
            let points = exact_critical_fiber(g, &j.lo, eps, Mode::Certified, counters)?;
            return Ok((j, points));
        }
        counters.add_isolation();
        let attempt = fiber_box_cover(g, &j, &e, None)
            .and_then(|cover| classify_boxes(g, &cover, halvings >= LENIENT_AFTER));
        match attempt {
            Ok(points) => return Ok((j, points)),
            Err(Error::ShrinkEpsilon | Error::CoverTooCoarse { .. }) => {
                e /= rat(2);
                halvings += 1;
                if e < floor {
                    return Err(Error::EpsilonFloor { fiber });
                }
            }
            Err(other) => return Err(other),
        }
    }
}

/// Builds the partition and every fiber of `g` for one configuration.
pub fn build_table(g: &BivarPoly, cfg: &SweepConfig, counters: &Counters) -> Result<FiberTable> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_vertical_lines(g)?;
    if cfg.no_discriminant {
        return build_table_without_discriminant(g, cfg, counters);
    }
    let disc = critical_polynomial(g)?;
    let isolated = isolate_roots_default(&disc)?;
    let inside = match &cfg.x_range {
        Some(r) => restrict_to_range(&isolated, &disc, r)?,
        None => isolated.clone(),
    };
    // Samples are placed between the isolating intervals, whose endpoints
    // are short dyadic rationals, before the critical intervals are narrowed.
    let mut partition = build_good_partition(&inside, &cfg.margin, cfg.x_range.as_ref());
    let width = match cfg.mode {
        Mode::Float => pow2(-60),
        Mode::Certified => &cfg.epsilon * &cfg.epsilon,
    };
    let narrow = |iv: &Interval| refine_interval(&disc, iv, &width);
    let all: Vec<Interval> = isolated.iter().map(narrow).collect();
    for (x, _) in partition.xs.iter_mut().zip(&partition.critical).filter(|(_, c)| **c) {
        *x = narrow(x);
    }
    let computed: Vec<(Interval, Vec<FiberPoint>)> = (0..partition.len())
        .into_par_iter()
        .map(|i| {
            let x = &partition.xs[i];
            if !partition.critical[i] {
                return Ok((x.clone(), regular_fiber(g, &x.lo, &cfg.epsilon, cfg.mode, counters)?));
            }
            if x.is_point() {
                return Ok((
                    x.clone(),
                    exact_critical_fiber(g, &x.lo, &cfg.epsilon, cfg.mode, counters)?,
                ));
            }
            match cfg.mode {
                Mode::Float => {
                    counters.add_isolation();
                    Ok((x.clone(), float_critical_fiber(g, x, &cfg.epsilon)))
                }
                Mode::Certified => {
                    certified_critical_fiber(g, x, &disc, &cfg.epsilon, i, counters)
                }
            }
        })
        .collect::<Result<_>>()?;
    assemble(g, cfg, partition, computed, all)
}

fn assemble(
    g: &BivarPoly,
    cfg: &SweepConfig,
    mut partition: GoodPartition,
    computed: Vec<(Interval, Vec<FiberPoint>)>,
    critical: Vec<Interval>,
) -> Result<FiberTable> {
    let mut fibers = Vec::with_capacity(computed.len());
    for (i, (x, fiber)) in computed.into_iter().enumerate() {
        partition.xs[i] = x;
        fibers.push(fiber);
    }
    Ok(FiberTable {
        curve: g.clone(),
        mode: cfg.mode,
        epsilon: cfg.epsilon.clone(),
        partition,
        fibers,
        critical,
        degree: g.total_degree(),
    })
}

/// The strip swept when neither a discriminant nor a range bounds it.
pub fn default_strip() -> Interval {
    Interval::new(rat(-8), rat(8))
}

/// Critical abscissas from a quad-tree cover of `g = g_y = 0` instead of the
/// discriminant. Each cluster of boxes becomes one critical interval, whose
/// fiber is covered by boxes in either mode; epsilon is halved until every
/// fiber classifies.
fn build_table_without_discriminant(
    g: &BivarPoly,
    cfg: &SweepConfig,
    counters: &Counters,
) -> Result<FiberTable> {
    let strip = cfg.x_range.clone().unwrap_or_else(default_strip);
    let region = Rect::new(strip.clone(), default_y_range(g, &strip));
    let floor = epsilon_floor();
    let mut e = cfg.epsilon.clone();
    loop {
        let boxes = locate_critical_boxes(g, &region, &e);
        let mut crit: Vec<Interval> = Vec::new();
        for b in boxes {
            match crit.last_mut() {
                Some(last) if b.x.lo <= last.hi => {
                    last.hi = last.hi.clone().max(b.x.hi.clone());
                }
                _ => crit.push(b.x.clone()),
            }
        }
        if crit
            .iter()
            .any(|iv| iv.lo <= strip.lo || iv.hi >= strip.hi)
        {
            return Err(Error::InvalidConfig(
                "a critical point lies on the boundary of the strip; widen --x-range".into(),
            ));
        }
        let partition = build_good_partition(&crit, &cfg.margin, Some(&strip));
        let attempt: Result<Vec<(Interval, Vec<FiberPoint>)>> = (0..partition.len())
            .into_par_iter()
            .map(|i| {
                let x = &partition.xs[i];
                if !partition.critical[i] {
                    return Ok((x.clone(), regular_fiber(g, &x.lo, &cfg.epsilon, cfg.mode, counters)?));
                }
                counters.add_isolation();
                let cover = fiber_box_cover(g, x, &e, None)?;
                let points = classify_boxes(g, &cover, false)?;
                let points = match cfg.mode {
                    Mode::Float => points
                        .into_iter()
                        .map(|mut p| {
                            p.y = Interval::point(p.y.midpoint());
                            p
                        })
                        .collect(),
                    Mode::Certified => points,
                };
                Ok((x.clone(), points))
            })
            .collect();
        match attempt {
            Ok(computed) => return assemble(g, cfg, partition, computed, crit),
            Err(Error::ShrinkEpsilon | Error::CoverTooCoarse { .. }) => {
                e /= rat(2);
                if e < floor {
                    return Err(Error::EpsilonFloor { fiber: 0 });
                }
            }
            Err(Error::NonSquarefree) => {
                // A regular sample hit a tangency missed by the boxes.
                e /= rat(2);
                if e < floor {
                    return Err(Error::NonSquarefree);
                }
            }
            Err(other) => return Err(other),
        }
    }
}

/// Strict: at most one critical point per fiber. Relaxed: at most one point
/// per fiber that may be singular (`g_x` not certainly nonzero); smooth
/// critical points are left to the derivative test.
pub fn check_general_position(table: &FiberTable, strict: bool) -> GeneralPositionReport {
    let mut violations = Vec::new();
    for (i, fiber) in table.fibers.iter().enumerate() {
        let unresolved = fiber
            .iter()
            .filter(|p| match &p.probe {
                None => false,
                Some(probe) => strict || !probe.is_smooth(),
            })
            .count();
        if unresolved > 1 {
            violations.push(Violation::CrowdedFiber {
                fiber: i,
                x: table.partition.xs[i].approx(),
                points: unresolved,
            });
        }
    }
    GeneralPositionReport {
        shear: String::new(),
        violations,
    }
}

/// A curve accepted by the sweep, in the sheared coordinates
/// `(x', y) = (x - t·y, y)`.
#[derive(Clone, Debug)]
pub struct Accepted {
    pub curve: BivarPoly,
    pub shear: Rational,
    pub attempts: usize,
    pub table: FiberTable,
}

/// Candidate shears: `0`, then `±1/k` with `k ∈ 2..=17` from a seeded
/// generator.
pub fn shear_sequence(seed: u64) -> impl Iterator<Item = Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::once(Rational::zero()).chain(std::iter::from_fn(move || {
        let k: i64 = rng.gen_range(2..=17);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        Some(Rational::new(sign.into(), k.into()))
    }))
}

/// Squarefree part, removal of real-rootless content, then shears until the
/// table passes the general position check.
pub fn general_position_pipeline(
    g: &BivarPoly,
    cfg: &SweepConfig,
    counters: &Counters,
) -> Result<Accepted> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = if g.deg_y() == 0 {
        // A polynomial in x alone: vertical lines, or no real points.
        check_vertical_lines(g)?;
        BivarPoly::constant(rat(1))
    } else {
        let sf = g.squarefree_part()?;
        check_vertical_lines(&sf)?;
        sf.primitive_part_y()
    };
    let attempts = cfg.max_attempts.max(1);
    let mut last = GeneralPositionReport::default();
    for (attempt, t) in shear_sequence(cfg.seed).take(attempts).enumerate() {
        let h = g.shear(&t);
        let mut report = GeneralPositionReport {
            shear: t.to_string(),
            violations: Vec::new(),
        };
        if !h.leading_y_coeff().is_constant() {
            report.violations.push(Violation::VerticalAsymptote);
        } else if let Err(Error::VerticalLineComponent { x }) = check_vertical_lines(&h) {
            report.violations.push(Violation::VerticalLine {
                x: x.parse().unwrap_or(f64::NAN),
            });
        } else {
            let table = build_table(&h, cfg, counters)?;
            report.violations = check_general_position(&table, !cfg.relaxed).violations;
            if report.passed() {
                return Ok(Accepted {
                    curve: h,
                    shear: t,
                    attempts: attempt + 1,
                    table,
                });
            }
        }
        last = report;
    }
    Err(Error::GeneralPositionFailure {
        attempts,
        report: last,
    })
}

/// Map from sheared to original coordinates.
pub fn unshear(shear: &Rational, x: f64, y: f64) -> (f64, f64) {
    (x + to_f64(shear) * y, y)
}
