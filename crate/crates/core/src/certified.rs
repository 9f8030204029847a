//! Sign determination on rational boxes through the tensor-product Bernstein
//! basis, and the box covers used for critical fibers in certified mode.

use num_traits::{Signed, Zero};

use crate::algebra::{pow2, BivarPoly, Interval, Rational, Sign, UnivarPoly};
use crate::error::{Error, Result};
use crate::roots::{coefficient_sign, isolate_roots, power_to_bernstein, root_bound, BernsteinPoly};
use crate::sweep::{CriticalProbe, FiberPoint};

/// Axis-aligned rational box `x × y`. Either side may be a single point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn new(x: Interval, y: Interval) -> Self {
        Rect { x, y }
    }

    /// `[a, a + eps] × [b, b + eps]`
    pub fn square(a: &Rational, b: &Rational, eps: &Rational) -> Self {
        Rect {
            x: Interval::new(a.clone(), a + eps),
            y: Interval::new(b.clone(), b + eps),
        }
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }

    fn touches(&self, other: &Rect) -> bool {
        self.x.lo <= other.x.hi
            && other.x.lo <= self.x.hi
            && self.y.lo <= other.y.hi
            && other.y.lo <= self.y.hi
    }

    fn hull(&self, other: &Rect) -> Rect {
        Rect {
            x: Interval::new(
                self.x.lo.clone().min(other.x.lo.clone()),
                self.x.hi.clone().max(other.x.hi.clone()),
            ),
            y: Interval::new(
                self.y.lo.clone().min(other.y.lo.clone()),
                self.y.hi.clone().max(other.y.hi.clone()),
            ),
        }
    }
}

/// Coefficients of a bivariate polynomial in the tensor Bernstein basis over
/// a box: `coeffs[i][j]` goes with `B_i(x) B_j(y)`. A point side of the box
/// contributes a degree-zero basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorBernstein {
    pub rect: Rect,
    pub coeffs: Vec<Vec<Rational>>,
}

impl TensorBernstein {
    pub fn new(g: &BivarPoly, rect: &Rect) -> Self {
        let ycs = g.y_coeffs();
        if ycs.is_empty() {
            return TensorBernstein {
                rect: rect.clone(),
                coeffs: vec![vec![Rational::zero()]],
            };
        }
        // Step 1: every y-power coefficient in the x-basis.
        let dx = if rect.x.is_point() { 0 } else { g.deg_x() };
        let by_x: Vec<Vec<Rational>> = ycs
            .iter()
            .map(|c| {
                if rect.x.is_point() {
                    vec![c.eval(&rect.x.lo)]
                } else {
                    BernsteinPoly::with_degree(c, &rect.x.lo, &rect.x.hi, dx)
                        .expect("nonempty side")
                        .coeffs
                }
            })
            .collect();
        // Step 2: every x-basis row in the y-basis.
        let dy = if rect.y.is_point() { 0 } else { g.deg_y() };
        let coeffs = (0..=dx)
            .map(|i| {
                let row = UnivarPoly::new(by_x.iter().map(|v| v[i].clone()).collect());
                if rect.y.is_point() {
                    vec![row.eval(&rect.y.lo)]
                } else {
                    let q = row.compose_affine(&rect.y.lo, &rect.y.width());
                    power_to_bernstein(q.coeffs(), dy)
                }
            })
            .collect();
        TensorBernstein {
            rect: rect.clone(),
            coeffs,
        }
    }

    pub fn sign(&self) -> Sign {
        let flat: Vec<Rational> = self.coeffs.iter().flatten().cloned().collect();
        coefficient_sign(&flat)
    }
}

/// `Positive`/`Negative` when every Bernstein coefficient has that sign (then
/// so does `g` on the whole box), `Unknown` otherwise. Undecided boxes are
/// split once into quadrants, which settles polynomials such as
/// `x² + y² + 1` over boxes centred on the origin.
pub fn sign_on_box(g: &BivarPoly, rect: &Rect) -> Sign {
    let s = box_sign(g, rect);
    if s != Sign::Unknown {
        return s;
    }
    let xs = halves(&rect.x);
    let ys = halves(&rect.y);
    let mut signs = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| Rect::new(x.clone(), y.clone())))
        .map(|q| box_sign(g, &q));
    let first = signs.next().expect("at least one quadrant");
    if first.is_definite() && signs.all(|s| s == first) {
        first
    } else {
        Sign::Unknown
    }
}

fn halves(iv: &Interval) -> Vec<Interval> {
    if iv.is_point() {
        return vec![iv.clone()];
    }
    let m = iv.midpoint();
    vec![Interval::new(iv.lo.clone(), m.clone()), Interval::new(m, iv.hi.clone())]
}

/// Sign from the Bernstein coefficients over the box itself.
fn box_sign(g: &BivarPoly, rect: &Rect) -> Sign {
    TensorBernstein::new(g, rect).sign()
}

/// Sign of `x ↦ g(x, y)` over an interval of `x`.
fn sign_on_segment(g: &BivarPoly, x: &Interval, y: &Rational) -> Sign {
    let p = g.slice_at_y(y);
    if x.is_point() {
        return Sign::of(&p.eval(&x.lo));
    }
    BernsteinPoly::from_poly(&p, &x.lo, &x.hi)
        .expect("nonempty side")
        .sign()
}

/// Bound on `|y|` over every point of the curve above `x`, valid when the
/// leading coefficient in `y` keeps one sign on `x`; widened by one.
pub fn default_y_range(g: &BivarPoly, x: &Interval) -> Interval {
    let b = if x.is_point() {
        root_bound(&g.slice_at_x(&x.lo)).unwrap_or_else(|_| Rational::from_integer(1.into()))
    } else {
        let ycs = g.y_coeffs();
        let lc = BernsteinPoly::from_poly(ycs.last().expect("nonzero"), &x.lo, &x.hi)
            .expect("nonempty side");
        if lc.sign().is_definite() {
            let min_lc = lc.coeffs.iter().map(Signed::abs).min().expect("nonempty");
            let max_other = ycs[..ycs.len() - 1]
                .iter()
                .map(|c| {
                    BernsteinPoly::from_poly(c, &x.lo, &x.hi)
                        .expect("nonempty side")
                        .abs_bound()
                })
                .max()
                .unwrap_or_else(Rational::zero);
            Rational::from_integer(1.into()) + max_other / min_lc
        } else {
            let a = root_bound(&g.slice_at_x(&x.lo)).unwrap_or_else(|_| Rational::zero());
            let b = root_bound(&g.slice_at_x(&x.hi)).unwrap_or_else(|_| Rational::zero());
            a.max(b)
        }
    };
    let b = b + Rational::from_integer(1.into());
    Interval::new(-b.clone(), b)
}

/// Boxes over `x` covering the fiber `{(x', y) : g = 0, x' ∈ x}`.
///
/// The `y` range is bisected, dropping every piece on which `g` has a sign,
/// down to pieces of height at most `eps`; touching survivors are merged.
pub fn fiber_box_cover(
    g: &BivarPoly,
    x: &Interval,
    eps: &Rational,
    y_range: Option<&Interval>,
) -> Result<Vec<Rect>> {
    let range = y_range.cloned().unwrap_or_else(|| default_y_range(g, x));
    let mut leaves: Vec<Interval> = Vec::new();
    cover_rec(g, x, range, eps, &mut leaves);
    let mut merged: Vec<Interval> = Vec::new();
    for leaf in leaves {
        match merged.last_mut() {
            Some(last) if last.hi == leaf.lo => last.hi = leaf.hi,
            _ => merged.push(leaf),
        }
    }
    if merged.len() > g.deg_y() {
        return Err(Error::CoverTooCoarse {
            boxes: merged.len(),
            degree: g.deg_y(),
        });
    }
    Ok(merged
        .into_iter()
        .map(|y| Rect::new(x.clone(), y))
        .collect())
}

fn cover_rec(g: &BivarPoly, x: &Interval, y: Interval, eps: &Rational, out: &mut Vec<Interval>) {
    let rect = Rect::new(x.clone(), y);
    if box_sign(g, &rect).is_definite() {
        return;
    }
    if &rect.y.width() <= eps {
        out.push(rect.y);
        return;
    }
    let m = rect.y.midpoint();
    cover_rec(g, x, Interval::new(rect.y.lo.clone(), m.clone()), eps, out);
    cover_rec(g, x, Interval::new(m, rect.y.hi), eps, out);
}

/// Signs of `g_x` and of `g_{y^r}` for `r = 2..=deg_y` on a box.
pub fn probe_on_box(g: &BivarPoly, rect: &Rect) -> CriticalProbe {
    CriticalProbe {
        gx: sign_on_box(&g.partial_x(), rect),
        higher: (2..=g.deg_y().max(2))
            .map(|r| sign_on_box(&g.partial_y(r), rect))
            .collect(),
    }
}

/// Turns a fiber cover into fiber points.
///
/// A box on which `g_y` has a sign holds a regular point when `g` has
/// opposite signs along its bottom and top edges (then exactly one point lies
/// above every `x`), and nothing when the two signs agree. A box on which the
/// sign of `g_y` is unknown becomes a critical point (`delta = false`).
///
/// `ShrinkEpsilon` is raised when a regular box cannot be certified or when
/// more than one critical box might be singular; with `lenient` the second
/// condition is reported through the returned points instead.
pub fn classify_boxes(
    g: &BivarPoly,
    cover: &[Rect],
    lenient: bool,
) -> Result<Vec<FiberPoint>> {
    let gy = g.partial_y(1);
    let mut points = Vec::new();
    for rect in cover {
        if rect.x.is_point() && !box_holds_fiber_point(g, rect) {
            continue;
        }
        if sign_on_box(&gy, rect).is_definite() {
            let bottom = sign_on_segment(g, &rect.x, &rect.y.lo);
            let top = sign_on_segment(g, &rect.x, &rect.y.hi);
            match (bottom.is_definite() && top.is_definite(), bottom == top) {
                (true, false) => points.push(FiberPoint::regular(rect.y.clone())),
                (true, true) => {}
                (false, _) => return Err(Error::ShrinkEpsilon),
            }
        } else {
            points.push(FiberPoint::critical(rect.y.clone(), probe_on_box(g, rect)));
        }
    }
    let critical = points.iter().filter(|p| !p.delta).count();
    let unsure = points
        .iter()
        .filter(|p| p.probe.as_ref().is_some_and(|pr| !pr.gx.is_definite()))
        .count();
    if !lenient && (unsure > 1 || (critical > 1 && unsure > 0 && has_isolated(g, cover))) {
        return Err(Error::ShrinkEpsilon);
    }
    for (rank, p) in points.iter_mut().enumerate() {
        p.rank = rank;
    }
    Ok(points)
}

/// Over a single abscissa the fiber is decided exactly: the slice has a root
/// in the box or it does not.
fn box_holds_fiber_point(g: &BivarPoly, rect: &Rect) -> bool {
    let slice = g.slice_at_x(&rect.x.lo);
    if slice.is_zero() {
        return true;
    }
    let Ok(sf) = slice.squarefree_part() else {
        return true;
    };
    if rect.y.is_point() {
        return sf.eval(&rect.y.lo).is_zero();
    }
    isolate_roots(&sf, &rect.y).map_or(true, |r| !r.is_empty())
}

/// Some box in the cover has no branch through its boundary.
fn has_isolated(g: &BivarPoly, cover: &[Rect]) -> bool {
    cover.iter().any(|r| {
        !r.x.is_point()
            && sign_on_segment(g, &r.x, &r.y.lo).is_definite()
            && sign_on_segment(g, &r.x, &r.y.hi).is_definite()
            && side_roots(g, &r.x.lo, &r.y) == 0
            && side_roots(g, &r.x.hi, &r.y) == 0
    })
}

fn side_roots(g: &BivarPoly, x: &Rational, y: &Interval) -> usize {
    let slice = g.slice_at_x(x);
    match slice.squarefree_part() {
        Ok(sf) => isolate_roots(&sf, y).map_or(1, |r| r.len()),
        Err(_) => 1,
    }
}

/// Boxes of width at most `eps` covering the solutions of `g = g_y = 0`
/// inside `region`, by quad-tree subdivision. Touching survivors are merged
/// into their bounding box. Every real critical point lies in some returned
/// box, but a box need not hold one, nor exactly one.
pub fn locate_critical_boxes(g: &BivarPoly, region: &Rect, eps: &Rational) -> Vec<Rect> {
    let gy = g.partial_y(1);
    let mut stack = vec![region.clone()];
    let mut leaves: Vec<Rect> = Vec::new();
    while let Some(rect) = stack.pop() {
        if box_sign(g, &rect).is_definite() || box_sign(&gy, &rect).is_definite() {
            continue;
        }
        let (wx, wy) = (rect.x.width(), rect.y.width());
        if &wx <= eps && &wy <= eps {
            leaves.push(rect);
            continue;
        }
        let split_x = wx >= wy;
        let (a, b) = if split_x {
            let m = rect.x.midpoint();
            (
                Rect::new(Interval::new(rect.x.lo.clone(), m.clone()), rect.y.clone()),
                Rect::new(Interval::new(m, rect.x.hi.clone()), rect.y.clone()),
            )
        } else {
            let m = rect.y.midpoint();
            (
                Rect::new(rect.x.clone(), Interval::new(rect.y.lo.clone(), m.clone())),
                Rect::new(rect.x.clone(), Interval::new(m, rect.y.hi.clone())),
            )
        };
        stack.push(a);
        stack.push(b);
    }
    merge_touching(leaves)
}

fn merge_touching(mut boxes: Vec<Rect>) -> Vec<Rect> {
    let mut merged: Vec<Rect> = Vec::new();
    while let Some(mut cur) = boxes.pop() {
        loop {
            let before = boxes.len();
            let mut rest = Vec::with_capacity(before);
            for b in boxes.drain(..) {
                if cur.touches(&b) {
                    cur = cur.hull(&b);
                } else {
                    rest.push(b);
                }
            }
            boxes = rest;
            if boxes.len() == before {
                break;
            }
        }
        // A grown hull may now touch an already emitted cluster.
        if let Some(pos) = merged.iter().position(|m| m.touches(&cur)) {
            let m = merged.swap_remove(pos);
            boxes.push(m.hull(&cur));
        } else {
            merged.push(cur);
        }
    }
    merged.sort_by(|a, b| (&a.x.lo, &a.y.lo).cmp(&(&b.x.lo, &b.y.lo)));
    merged
}

/// `2^-40`: the smallest epsilon the shrinking loops may reach.
pub fn epsilon_floor() -> Rational {
    pow2(-40)
}
