//! Polynomials in `y` over `ℚ[x]`: pseudo-remainders, the subresultant
//! resultant, primitive gcds and squarefree parts.

use num_traits::One;

use super::{BivarPoly, Rational, UnivarPoly};
use crate::error::{Error, Result};

/// Polynomial in `y` whose coefficients are polynomials in `x`, lowest
/// power first and without a trailing zero.
type YPoly = Vec<UnivarPoly>;

fn trim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(UnivarPoly::is_zero) {
        p.pop();
    }
    p
}

fn deg(p: &YPoly) -> usize {
    p.len() - 1
}

fn lc(p: &YPoly) -> &UnivarPoly {
    p.last().expect("leading coefficient of zero polynomial")
}

fn scale(p: &YPoly, c: &UnivarPoly) -> YPoly {
    trim(p.iter().map(|a| a * c).collect())
}

fn exact_div_scalar(p: &YPoly, c: &UnivarPoly) -> YPoly {
    p.iter().map(|a| a.exact_div(c)).collect()
}

/// `a - c * y^shift * b`
fn sub_shifted(a: &mut YPoly, b: &YPoly, c: &UnivarPoly, shift: usize) {
    for (k, bk) in b.iter().enumerate() {
        let t = c * bk;
        a[k + shift] = &a[k + shift] - &t;
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
fn prem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = deg(b);
    let lb = lc(b).clone();
    let mut r = a.clone();
    let mut e = deg(a) + 1 - db;
    while !r.is_empty() && deg(&r) >= db {
        let shift = deg(&r) - db;
        let lr = lc(&r).clone();
        r = scale(&r, &lb);
        r.resize(r.len().max(shift + db + 1), UnivarPoly::zero());
        sub_shifted(&mut r, b, &lr, shift);
        r = trim(r);
        e -= 1;
    }
    let f = lb.pow(e as u32);
    scale(&r, &f)
}

/// Monic gcd of the coefficients.
fn content(p: &YPoly) -> UnivarPoly {
    p.iter()
        .fold(UnivarPoly::zero(), |g, c| UnivarPoly::gcd(&g, c))
}

fn primitive(p: &YPoly) -> YPoly {
    if p.is_empty() {
        return Vec::new();
    }
    exact_div_scalar(p, &content(p))
}

fn to_ypoly(g: &BivarPoly) -> YPoly {
    trim(g.y_coeffs())
}

/// `Res_y(a, b)` as a polynomial in `x`, by the subresultant algorithm.
///
/// Every division performed is exact in `ℚ[x]`; input contents are removed
/// first to keep coefficients small.
pub fn resultant_y(a: &BivarPoly, b: &BivarPoly) -> UnivarPoly {
    let (mut a, mut b) = (to_ypoly(a), to_ypoly(b));
    if a.is_empty() || b.is_empty() {
        return UnivarPoly::zero();
    }
    let mut sign = Rational::one();
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        return lc(&b).pow(deg(&a) as u32).scale(&sign);
    }
    let (ca, cb) = (content(&a), content(&b));
    let t = &ca.pow(deg(&b) as u32) * &cb.pow(deg(&a) as u32);
    a = exact_div_scalar(&a, &ca);
    b = exact_div_scalar(&b, &cb);

    let mut g = UnivarPoly::one();
    let mut h = UnivarPoly::one();
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return UnivarPoly::zero();
        }
        b = exact_div_scalar(&r, &(&g * &h.pow(delta as u32)));
        g = lc(&a).clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta as u32).exact_div(&h.pow(delta as u32 - 1)),
        };
        if deg(&b) == 0 {
            break;
        }
    }
    let da = deg(&a) as u32;
    let last = if da == 1 {
        lc(&b).clone()
    } else {
        lc(&b).pow(da).exact_div(&h.pow(da - 1))
    };
    (&t * &last).scale(&sign)
}

/// `Res_y(g, ∂g/∂y)`. Its real roots contain every abscissa where the fiber
/// has a repeated root or where the degree in `y` drops.
pub fn discriminant_y(g: &BivarPoly) -> Result<UnivarPoly> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(resultant_y(g, &g.partial_y(1)))
}

/// Gcd of two primitive polynomials by the primitive remainder sequence;
/// the result is primitive, and `[1]` when it has no `y`.
fn primitive_gcd(a: &YPoly, b: &YPoly) -> YPoly {
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() && deg(&b) > 0 {
        let r = prem(&a, &b);
        a = b;
        b = primitive(&r);
    }
    if b.is_empty() {
        a
    } else {
        vec![UnivarPoly::one()]
    }
}

/// Exact quotient in `ℚ[x][y]`.
fn exact_div(a: &YPoly, b: &YPoly) -> YPoly {
    let db = deg(b);
    let mut r = a.clone();
    if r.is_empty() || deg(&r) < db {
        return Vec::new();
    }
    let mut q = vec![UnivarPoly::zero(); deg(&r) - db + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + db].exact_div(lc(b));
        sub_shifted(&mut r, b, &c, k);
        q[k] = c;
    }
    debug_assert!(trim(r).is_empty(), "inexact division in Q[x][y]");
    trim(q)
}

impl BivarPoly {
    /// Gcd of the `y`-coefficients: the factor of `g` depending on `x` alone.
    /// Monic; `1` when there is no such factor.
    pub fn content_x(&self) -> UnivarPoly {
        content(&to_ypoly(self))
    }

    /// Removes the content in `x`.
    pub fn primitive_part_y(&self) -> BivarPoly {
        BivarPoly::from_y_coeffs(&primitive(&to_ypoly(self)))
    }

    /// Gcd in `ℚ[x, y]` up to a rational factor.
    pub fn gcd(a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
        let (ya, yb) = (to_ypoly(a), to_ypoly(b));
        let c = UnivarPoly::gcd(&content(&ya), &content(&yb));
        let p = primitive_gcd(&ya, &yb);
        BivarPoly::from_y_coeffs(&scale(&p, &c))
    }

    /// Exact quotient; `divisor` must divide `self` in `ℚ[x, y]`.
    pub fn exact_div(&self, divisor: &BivarPoly) -> BivarPoly {
        BivarPoly::from_y_coeffs(&exact_div(&to_ypoly(self), &to_ypoly(divisor)))
    }

    /// Removes repeated factors: `sqf(content) * pp / gcd(pp, ∂pp/∂y)` where
    /// `pp` is the primitive part in `y`. Same zero set, no repeated factor.
    pub fn squarefree_part(&self) -> Result<BivarPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let yp = to_ypoly(self);
        let c = content(&yp);
        let pp = primitive(&yp);
        let dpp = trim(
            BivarPoly::from_y_coeffs(&pp)
                .partial_y(1)
                .y_coeffs(),
        );
        let squarefree = || {
            let (a, b) = (BivarPoly::from_y_coeffs(&pp), BivarPoly::from_y_coeffs(&dpp));
            !resultant_y(&a, &b).is_zero()
        };
        // A nonzero discriminant rules out repeated factors and is much
        // cheaper than the gcd.
        let reduced = if dpp.is_empty() || squarefree() {
            pp
        } else {
            let g = primitive_gcd(&pp, &dpp);
            exact_div(&pp, &g)
        };
        let csf = c.squarefree_part()?;
        Ok(BivarPoly::from_y_coeffs(&scale(&reduced, &csf)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use crate::roots::isolate_roots_default;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn bp(terms: &[(usize, usize, i64)]) -> BivarPoly {
        BivarPoly::from_ints(terms)
    }

    /// Determinant by cofactor expansion over `ℚ[x]`; test oracle only.
    fn det(m: &[Vec<UnivarPoly>]) -> UnivarPoly {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = UnivarPoly::zero();
        for col in 0..n {
            if m[0][col].is_zero() {
                continue;
            }
            let minor: Vec<Vec<UnivarPoly>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != col)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][col] * &det(&minor);
            acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Resultant as the Sylvester determinant.
    fn sylvester_resultant(a: &BivarPoly, b: &BivarPoly) -> UnivarPoly {
        let (ya, yb) = (trim(a.y_coeffs()), trim(b.y_coeffs()));
        let (m, n) = (deg(&ya), deg(&yb));
        let size = m + n;
        let mut rows = Vec::new();
        for r in 0..n {
            let mut row = vec![UnivarPoly::zero(); size];
            for (k, c) in ya.iter().rev().enumerate() {
                row[r + k] = c.clone();
            }
            rows.push(row);
        }
        for r in 0..m {
            let mut row = vec![UnivarPoly::zero(); size];
            for (k, c) in yb.iter().rev().enumerate() {
                row[r + k] = c.clone();
            }
            rows.push(row);
        }
        det(&rows)
    }

    /// Asserts that the real roots of `p` are exactly the rationals `xs`.
    fn assert_real_roots(p: &UnivarPoly, xs: &[Rational]) {
        let ivs = isolate_roots_default(&p.squarefree_part().unwrap()).unwrap();
        assert_eq!(ivs.len(), xs.len());
        for (iv, x) in ivs.iter().zip(xs) {
            assert!(iv.contains(x) && p.eval(x).is_zero(), "{x} not in {iv}");
        }
    }

    #[test]
    fn nodal_cubic_discriminant() {
        let g = bp(&[(0, 2, 1), (3, 0, -1), (2, 0, -1)]);
        let d = discriminant_y(&g).unwrap();
        // -4x^2(x+1) up to a constant
        let expected = UnivarPoly::from_ints(&[0, 0, -4, -4]);
        let ratio_ = d.leading_coeff().unwrap() / expected.leading_coeff().unwrap();
        assert_eq!(d, expected.scale(&ratio_));
        assert_real_roots(&d, &[rat(-1), rat(0)]);
    }

    #[test]
    fn circle_discriminant() {
        let g = bp(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        let d = discriminant_y(&g).unwrap();
        assert_eq!(d, UnivarPoly::from_ints(&[-4, 0, 4]));
        assert_real_roots(&d, &[rat(-1), rat(1)]);
    }

    #[test]
    fn line_discriminant_is_constant() {
        let g = bp(&[(0, 1, 1), (1, 0, -1)]);
        let d = discriminant_y(&g).unwrap();
        assert!(d.is_constant() && !d.is_zero());
    }

    #[test]
    fn discriminant_of_zero_fails() {
        assert!(matches!(
            discriminant_y(&BivarPoly::zero()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn repeated_factor_gives_zero_discriminant() {
        let f = bp(&[(0, 2, 1), (1, 0, -1)]);
        assert!(discriminant_y(&(&f * &f)).unwrap().is_zero());
    }

    #[test]
    fn squarefree_examples() {
        let y1 = bp(&[(0, 1, 1), (0, 0, -1)]);
        let sf = (&y1 * &y1).squarefree_part().unwrap();
        assert_eq!(sf.scale(&(rat(1) / sf.coeff(0, 1))), y1);
        let nodal = bp(&[(0, 2, 1), (3, 0, -1), (2, 0, -1)]);
        assert_eq!(nodal.squarefree_part().unwrap(), nodal);
        let a = bp(&[(0, 2, 1), (1, 0, -1)]);
        let b = bp(&[(0, 1, 1), (1, 0, 1)]);
        let p = &(&a * &a) * &b;
        let sf = p.squarefree_part().unwrap();
        let expected = &a * &b;
        let k = sf.coeff(0, 3) / expected.coeff(0, 3);
        assert_eq!(sf, expected.scale(&k));
    }

    #[test]
    fn squarefree_keeps_x_content_once() {
        // (x - 1)^2 (y - x)
        let g = &(&bp(&[(1, 0, 1), (0, 0, -1)]) * &bp(&[(1, 0, 1), (0, 0, -1)]))
            * &bp(&[(0, 1, 1), (1, 0, -1)]);
        let sf = g.squarefree_part().unwrap();
        assert_eq!(sf.content_x(), UnivarPoly::from_ints(&[-1, 1]));
        assert_eq!(sf.total_degree(), 2);
    }

    fn arb_small(max_deg: usize) -> impl Strategy<Value = BivarPoly> {
        prop::collection::vec((0..=max_deg, 0..=max_deg, -5i64..=5), 1..8).prop_map(
            move |ts| {
                BivarPoly::from_terms(
                    ts.into_iter()
                        .filter(|&(i, j, _)| i + j <= max_deg)
                        .map(|(i, j, c)| (i, j, rat(c))),
                )
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn subresultant_matches_sylvester(g in arb_small(3)) {
            prop_assume!(g.deg_y() >= 1);
            let gy = g.partial_y(1);
            prop_assert_eq!(resultant_y(&g, &gy), sylvester_resultant(&g, &gy));
        }

        #[test]
        fn resultant_of_pairs_matches_sylvester(a in arb_small(3), b in arb_small(2)) {
            prop_assume!(a.deg_y() >= 1 && b.deg_y() >= 1);
            prop_assert_eq!(resultant_y(&a, &b), sylvester_resultant(&a, &b));
        }

        #[test]
        fn discriminant_vanishes_at_constructed_critical_values(
            g in arb_small(4),
            (xn, xd) in (-4i64..=4, 1i64..=3),
            (yn, yd) in (-4i64..=4, 1i64..=3),
        ) {
            let (x0, y0) = (ratio(xn, xd), ratio(yn, yd));
            // Subtract the first-order Taylor part in y at (x0, y0).
            let v = g.eval(&x0, &y0);
            let s = g.partial_y(1).eval(&x0, &y0);
            let lin = BivarPoly::from_terms(vec![
                (0, 0, v - &s * &y0),
                (0, 1, s),
            ]);
            let h = &g - &lin;
            prop_assume!(h.deg_y() >= 2);
            let d = discriminant_y(&h).unwrap();
            prop_assert!(d.eval(&x0).is_zero());
        }

        #[test]
        fn discriminant_root_iff_degenerate_slice(
            g in arb_small(4),
            (xn, xd) in (-4i64..=4, 1i64..=3),
        ) {
            prop_assume!(g.deg_y() >= 1);
            let x0 = ratio(xn, xd);
            let d = discriminant_y(&g).unwrap();
            let slice = g.slice_at_x(&x0);
            let drops = slice.degree() != Some(g.deg_y());
            let repeated = !slice.is_zero()
                && UnivarPoly::gcd(&slice, &slice.derivative()).degree().unwrap_or(0) > 0;
            prop_assert_eq!(d.eval(&x0).is_zero(), drops || repeated || slice.is_zero());
        }

        #[test]
        fn squarefree_part_properties(a in arb_small(2), b in arb_small(2)) {
            let p = &(&a * &a) * &b;
            prop_assume!(!p.is_zero());
            let sf = p.squarefree_part().unwrap();
            // divides p
            let g = BivarPoly::gcd(&p, &sf);
            prop_assert_eq!(g.total_degree(), sf.total_degree());
            // no repeated factor of positive y-degree
            let pp = sf.primitive_part_y();
            if pp.deg_y() > 0 {
                let h = BivarPoly::gcd(&pp, &pp.partial_y(1));
                prop_assert_eq!(h.deg_y(), 0);
            }
        }
    }
}
