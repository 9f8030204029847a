//! Branch matrices and the straight-line graph.
//!
//! `left[i][j]` and `right[i][j]` count the half-branches of the curve that
//! leave fiber point `(i, j)` towards the previous and the next abscissa.
//! Regular points have one of each. Every half-branch leaving fiber `i` to
//! the right arrives at fiber `i + 1` from the left, so within each strip
//!
//! ```text
//! Σ_k right[i][k] = Σ_k left[i + 1][k]
//! ```
//!
//! and the counts at the one unknown point of a critical fiber follow from
//! the counts of its neighbours.

use serde::{Deserialize, Serialize};

use crate::algebra::{BivarPoly, Interval, Rational, Sign};
use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::sweep::{regular_fiber, CriticalProbe, FiberPoint, FiberTable};

/// A fiber table completed with branch counts. Both matrices have one row
/// per abscissa and `table.width()` columns.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub table: FiberTable,
    pub left: Vec<Vec<u32>>,
    pub right: Vec<Vec<u32>>,
}

impl CurveData {
    fn row_sum(row: &[u32]) -> i64 {
        row.iter().map(|&v| i64::from(v)).sum()
    }

    /// First strip `i` (between fibers `i` and `i + 1`) whose half-branch
    /// counts disagree.
    pub fn conservation_violation(&self) -> Option<usize> {
        (0..self.left.len().saturating_sub(1))
            .find(|&i| Self::row_sum(&self.right[i]) != Self::row_sum(&self.left[i + 1]))
    }
}

/// Half-branch counts of one critical point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchClass {
    pub left: u32,
    pub right: u32,
}

impl BranchClass {
    pub const THROUGH: BranchClass = BranchClass { left: 1, right: 1 };
    pub const OPENS_LEFT: BranchClass = BranchClass { left: 2, right: 0 };
    pub const OPENS_RIGHT: BranchClass = BranchClass { left: 0, right: 2 };
}

/// Classification of a smooth critical point from the signs of `g_x` and of
/// `g_{y^r}`, `r = 2, 3, …`. With `r` the first order whose sign is certainly
/// nonzero, the curve is locally `x - x0 ≈ c (y - y0)^r` with `c` of the sign
/// of `-g_{y^r} g_x`: odd `r` crosses the fiber, even `r` opens towards the
/// side of `c`. Undecided signs count as possibly zero.
pub fn classify_smooth(probe: &CriticalProbe, counters: &Counters) -> Result<BranchClass> {
    let gx = probe.gx.as_i32().filter(|s| *s != 0).ok_or(Error::NotSmoothCritical)?;
    for (k, s) in probe.higher.iter().enumerate() {
        counters.add_derivative_test_ops(1);
        let Some(s) = s.as_i32().filter(|s| *s != 0) else {
            continue;
        };
        let r = k + 2;
        return Ok(if r % 2 == 1 {
            BranchClass::THROUGH
        } else if s * gx > 0 {
            BranchClass::OPENS_LEFT
        } else {
            BranchClass::OPENS_RIGHT
        });
    }
    Err(Error::AllDerivativesVanish)
}

/// The derivative test at a rational point: requires `g = g_y = 0` and
/// `g_x ≠ 0` there.
pub fn derivative_test(
    g: &BivarPoly,
    x: &Rational,
    y: &Rational,
    counters: &Counters,
) -> Result<BranchClass> {
    let on_curve = Sign::of(&g.eval_counted(x, y, counters)) == Sign::Zero;
    let gy = Sign::of(&g.partial_y(1).eval_counted(x, y, counters));
    let gx = Sign::of(&g.partial_x().eval_counted(x, y, counters));
    if !on_curve || gy != Sign::Zero || gx == Sign::Zero {
        return Err(Error::NotSmoothCritical);
    }
    let d = g.total_degree().max(2);
    let higher = (2..=d)
        .map(|r| Sign::of(&g.partial_y(r).eval_counted(x, y, counters)))
        .collect();
    classify_smooth(&CriticalProbe { gx, higher }, counters)
}

/// Fills the branch matrices: `(1, 1)` at regular points, the derivative test
/// at smooth critical points (when enabled), and the conservation law at the
/// one point per fiber that is left.
pub fn complete_to_data(
    table: FiberTable,
    use_derivative_test: bool,
    counters: &Counters,
) -> Result<CurveData> {
    let n = table.fibers.len();
    let w = table.width();
    let mut left = vec![vec![0u32; w]; n];
    let mut right = vec![vec![0u32; w]; n];
    let mut unresolved: Vec<Option<usize>> = vec![None; n];
    for (i, fiber) in table.fibers.iter().enumerate() {
        let mut pending = Vec::new();
        for p in fiber {
            if p.delta {
                left[i][p.rank] = 1;
                right[i][p.rank] = 1;
                continue;
            }
            let probe = p.probe.as_ref().expect("critical points carry a probe");
            if use_derivative_test && probe.is_smooth() {
                let class = classify_smooth(probe, counters)?;
                left[i][p.rank] = class.left;
                right[i][p.rank] = class.right;
            } else {
                pending.push(p.rank);
            }
        }
        if pending.len() > 1 {
            return Err(Error::UnresolvedFiber {
                fiber: i,
                count: pending.len(),
            });
        }
        unresolved[i] = pending.first().copied();
    }
    for (i, slot) in unresolved.iter().enumerate() {
        let Some(j) = *slot else { continue };
        if i == 0 || i + 1 == n {
            return Err(Error::UnresolvedFiber { fiber: i, count: 1 });
        }
        let r = CurveData::row_sum(&left[i + 1]) - CurveData::row_sum(&right[i]);
        let l = CurveData::row_sum(&right[i - 1]) - CurveData::row_sum(&left[i]);
        counters.add_branch_additions(4 * w as u64 + 2);
        if r < 0 || l < 0 {
            return Err(Error::NegativeBranchCount {
                fiber: i,
                rank: j,
                left: l,
                right: r,
            });
        }
        left[i][j] = l as u32;
        right[i][j] = r as u32;
    }
    let data = CurveData { table, left, right };
    match data.conservation_violation() {
        Some(fiber) => Err(Error::ConservationViolation { fiber }),
        None => Ok(data),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub fiber: usize,
    pub rank: usize,
    /// Coordinates in the swept (sheared) plane.
    pub x: f64,
    pub y: f64,
    /// A critical point of the projection.
    pub critical: bool,
}

/// Edge between `(fiber, rank)` pairs of consecutive fibers.
pub type Edge = ((usize, usize), (usize, usize));

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TopoGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Some pair of vertices is joined twice.
    pub parallel_edges: bool,
}

impl TopoGraph {
    /// Index into `vertices` of every `(fiber, rank)`.
    pub fn vertex_index(&self, fiber: usize, rank: usize) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| v.fiber == fiber && v.rank == rank)
    }
}

/// Greedy matching: every vertex, in rank order, sends its right
/// half-branches to the lowest vertices of the next fiber that still accept
/// left half-branches. The left counts of the first fiber and the right
/// counts of the last are not realized.
pub fn build_graph(data: &CurveData, counters: &Counters) -> Result<TopoGraph> {
    let table = &data.table;
    let n = table.fibers.len();
    let mut vertices = Vec::new();
    for (i, fiber) in table.fibers.iter().enumerate() {
        let x = table.partition.xs[i].approx();
        for p in fiber {
            vertices.push(Vertex {
                fiber: i,
                rank: p.rank,
                x,
                y: p.y.approx(),
                critical: !p.delta,
            });
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut parallel = false;
    for i in 0..n.saturating_sub(1) {
        let mut accept = data.left[i + 1].clone();
        let mut next = 0;
        for p in &table.fibers[i] {
            for _ in 0..data.right[i][p.rank] {
                while next < accept.len() && accept[next] == 0 {
                    next += 1;
                }
                if next == accept.len() {
                    return Err(Error::ConservationViolation { fiber: i });
                }
                accept[next] -= 1;
                counters.add_graph_additions(2);
                let e = ((i, p.rank), (i + 1, next));
                parallel |= edges.last() == Some(&e);
                edges.push(e);
            }
        }
        if accept.iter().any(|&a| a > 0) {
            return Err(Error::ConservationViolation { fiber: i });
        }
    }
    Ok(TopoGraph {
        vertices,
        edges,
        parallel_edges: parallel,
    })
}

/// Inserts the fiber over the regular abscissa `x` with one half-branch on
/// each side of each of its points. Costs a single root isolation.
pub fn refine(data: &CurveData, x: &Rational, counters: &Counters) -> Result<CurveData> {
    let table = &data.table;
    let xs = &table.partition.xs;
    for (iv, critical) in xs.iter().zip(&table.partition.critical) {
        if iv.contains(x) {
            return Err(if *critical {
                Error::NotRegularValue { x: x.to_string() }
            } else {
                Error::DuplicateAbscissa { x: x.to_string() }
            });
        }
    }
    if table.critical.iter().any(|iv| iv.contains(x)) {
        return Err(Error::NotRegularValue { x: x.to_string() });
    }
    let fiber: Vec<FiberPoint> =
        match regular_fiber(&table.curve, x, &table.epsilon, table.mode, counters) {
            Ok(f) => f,
            Err(Error::NonSquarefree) => return Err(Error::NotRegularValue { x: x.to_string() }),
            Err(e) => return Err(e),
        };
    let pos = xs.iter().position(|iv| &iv.lo > x).unwrap_or(xs.len());
    let w = table.width().max(fiber.len());
    let column: Vec<u32> = (0..w).map(|j| u32::from(j < fiber.len())).collect();
    let widen = |m: &[Vec<u32>]| -> Vec<Vec<u32>> {
        let mut m: Vec<Vec<u32>> = m
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.resize(w, 0);
                row
            })
            .collect();
        m.insert(pos, column.clone());
        m
    };
    let mut new_table = table.clone();
    new_table.partition.xs.insert(pos, Interval::point(x.clone()));
    new_table.partition.critical.insert(pos, false);
    new_table.fibers.insert(pos, fiber);
    Ok(CurveData {
        table: new_table,
        left: widen(&data.left),
        right: widen(&data.right),
    })
}

/// Connected components; isolated vertices count.
pub fn connected_components(graph: &TopoGraph) -> usize {
    let n = graph.vertices.len();
    let index: std::collections::HashMap<(usize, usize), usize> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(k, v)| ((v.fiber, v.rank), k))
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut components = n;
    for (a, b) in &graph.edges {
        let (ra, rb) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use crate::sweep::{build_table, SweepConfig};

    fn bp(t: &[(usize, usize, i64)]) -> BivarPoly {
        BivarPoly::from_ints(t)
    }

    fn data_for(g: &BivarPoly) -> CurveData {
        let c = Counters::new();
        let t = build_table(g, &SweepConfig::default(), &c).unwrap();
        complete_to_data(t, true, &c).unwrap()
    }

    fn transpose(m: &[Vec<u32>]) -> Vec<Vec<u32>> {
        (0..m[0].len()).map(|j| m.iter().map(|row| row[j]).collect()).collect()
    }

    #[test]
    fn nodal_cubic_matrices() {
        let d = data_for(&bp(&[(0, 2, 1), (3, 0, -1), (2, 0, -1)]));
        assert_eq!(transpose(&d.left), vec![vec![0, 0, 1, 2, 1], vec![0, 0, 1, 0, 1]]);
        assert_eq!(transpose(&d.right), vec![vec![0, 2, 1, 2, 1], vec![0, 0, 1, 0, 1]]);
        let g = build_graph(&d, &Counters::new()).unwrap();
        let expected: Vec<Edge> = vec![
            ((1, 0), (2, 0)),
            ((1, 0), (2, 1)),
            ((2, 0), (3, 0)),
            ((2, 1), (3, 0)),
            ((3, 0), (4, 0)),
            ((3, 0), (4, 1)),
        ];
        assert_eq!(g.edges, expected);
        assert_eq!(connected_components(&g), 1);
    }

    #[test]
    fn line_is_regular_everywhere() {
        let d = data_for(&bp(&[(0, 1, 1), (1, 0, -1)]));
        assert_eq!(d.left, vec![vec![1], vec![1]]);
        assert_eq!(d.right, vec![vec![1], vec![1]]);
        let g = build_graph(&d, &Counters::new()).unwrap();
        assert_eq!(g.edges, vec![((0, 0), (1, 0))]);
    }

    #[test]
    fn circle_matrices_and_cycle() {
        let d = data_for(&bp(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]));
        assert_eq!(d.left[1][0], 0);
        assert_eq!(d.right[1][0], 2);
        assert_eq!(d.left[3][0], 2);
        assert_eq!(d.right[3][0], 0);
        assert_eq!((d.left[2].clone(), d.right[2].clone()), (vec![1, 1], vec![1, 1]));
        let g = build_graph(&d, &Counters::new()).unwrap();
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(connected_components(&g), 1);
    }

    #[test]
    fn derivative_test_examples() {
        let c = Counters::new();
        let circle = bp(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        assert_eq!(derivative_test(&circle, &rat(1), &rat(0), &c).unwrap(), BranchClass::OPENS_LEFT);
        assert_eq!(derivative_test(&circle, &rat(-1), &rat(0), &c).unwrap(), BranchClass::OPENS_RIGHT);
        let cubic = bp(&[(0, 3, 1), (1, 0, -1)]);
        assert_eq!(derivative_test(&cubic, &rat(0), &rat(0), &c).unwrap(), BranchClass::THROUGH);
        let node = bp(&[(0, 2, 1), (3, 0, -1), (2, 0, -1)]);
        assert!(matches!(
            derivative_test(&node, &rat(0), &rat(0), &c),
            Err(Error::NotSmoothCritical)
        ));
        assert!(c.snapshot().derivative_test_ops > 0);
    }

    #[test]
    fn vanishing_derivatives() {
        let probe = CriticalProbe {
            gx: Sign::Positive,
            higher: vec![Sign::Zero, Sign::Zero],
        };
        assert!(matches!(
            classify_smooth(&probe, &Counters::new()),
            Err(Error::AllDerivativesVanish)
        ));
    }

    #[test]
    fn concentric_circles_have_two_components() {
        let inner = bp(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        let outer = bp(&[(2, 0, 1), (0, 2, 1), (0, 0, -4)]);
        let d = data_for(&(&inner * &outer));
        let g = build_graph(&d, &Counters::new()).unwrap();
        assert_eq!(connected_components(&g), 2);
        assert_eq!(connected_components(&TopoGraph::default()), 0);
    }

    #[test]
    fn refinement_examples() {
        let c = Counters::new();
        let circle = data_for(&bp(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]));
        let before = c.snapshot().isolations;
        let r = refine(&circle, &ratio(1, 2), &c).unwrap();
        assert_eq!(c.snapshot().isolations, before + 1);
        assert_eq!(r.table.fibers.len(), 6);
        assert_eq!(r.table.partition.sample(3), ratio(1, 2));
        assert_eq!(r.left[3], vec![1, 1]);
        assert_eq!(r.right[3], vec![1, 1]);
        let ys: Vec<f64> = r.table.fibers[3].iter().map(|p| p.y.approx()).collect();
        assert!((ys[0] + 0.75f64.sqrt()).abs() < 1e-3 && (ys[1] - 0.75f64.sqrt()).abs() < 1e-3);
        assert!(r.conservation_violation().is_none());
        let g = build_graph(&r, &c).unwrap();
        assert_eq!(connected_components(&g), 1);

        let nodal = data_for(&bp(&[(0, 2, 1), (3, 0, -1), (2, 0, -1)]));
        let r = refine(&nodal, &rat(2), &c).unwrap();
        assert_eq!(r.table.fibers.len(), 6);
        assert_eq!(r.left[5], vec![1, 1]);
        let y = r.table.fibers[5][1].y.approx();
        assert!((y - 12f64.sqrt()).abs() < 1e-3);

        assert!(matches!(refine(&nodal, &rat(1), &c), Err(Error::DuplicateAbscissa { .. })));
        assert!(matches!(refine(&nodal, &rat(0), &c), Err(Error::NotRegularValue { .. })));
    }

    #[test]
    fn greedy_is_deterministic_and_non_crossing() {
        let g = bp(&[(4, 0, 3), (2, 2, 5), (0, 4, 2), (0, 2, -4)]);
        let d = data_for(&g);
        let a = build_graph(&d, &Counters::new()).unwrap();
        let b = build_graph(&d, &Counters::new()).unwrap();
        assert_eq!(a, b);
        for e in &a.edges {
            for f in &a.edges {
                if e.0 .0 == f.0 .0 && e.0 .1 < f.0 .1 {
                    assert!(e.1 .1 <= f.1 .1);
                }
            }
        }
    }
}
