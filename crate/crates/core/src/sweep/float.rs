//! Double precision fibers over irrational critical abscissas: all complex
//! roots of the slice by the Aberth–Ehrlich iteration, then clustering.

use num_complex::Complex64;

/// All complex roots of `Σ coeffs[i] t^i`, highest coefficient last.
pub(crate) fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let end = coeffs.iter().rposition(|c| *c != 0.0).map_or(0, |k| k + 1);
    let coeffs = &coeffs[..end];
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let n = coeffs.len() - 1;
    let lc = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c / lc, 0.0)).collect();
    // Fujiwara's bound on the root moduli.
    let radius = (1..=n)
        .map(|k| {
            let c = monic[n - k].norm();
            if k == n { (c / 2.0).powf(1.0 / k as f64) } else { c.powf(1.0 / k as f64) }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner_with_derivative(&monic, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { d.inv() }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

fn horner_with_derivative(coeffs: &[Complex64], t: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * t + p;
        p = p * t + c;
    }
    (p, dp)
}

/// A real point of an approximate fiber: the mean of the roots merged into
/// it and how many there were.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Cluster {
    pub y: f64,
    pub size: usize,
}

/// Merges roots closer than `tol` (transitively) and keeps the clusters
/// whose mean lies within `tol / 2` of the real axis, sorted by ordinate.
pub(crate) fn real_clusters(roots: &[Complex64], tol: f64) -> Vec<Cluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for a in 0..n {
        for b in a + 1..n {
            if (roots[a] - roots[b]).norm() < tol {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for (a, root) in roots.iter().enumerate().take(n) {
        let r = find(&mut parent, a);
        groups.entry(r).or_default().push(*root);
    }
    let mut out: Vec<Cluster> = groups
        .values()
        .filter_map(|members| {
            let mean = members.iter().sum::<Complex64>() / members.len() as f64;
            (mean.im.abs() < tol / 2.0).then_some(Cluster {
                y: mean.re,
                size: members.len(),
            })
        })
        .collect();
    out.sort_by(|a, b| a.y.total_cmp(&b.y));
    out
}
