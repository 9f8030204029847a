use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{binomial_row, rat, to_f64, Rational, UnivarPoly};
use crate::counters::Counters;

/// Dense bivariate polynomial; `coeffs[i][j]` multiplies `x^i y^j`.
///
/// The array is rectangular with `deg_x + 1` rows of `deg_y + 1` entries and
/// neither the last row nor the last column is entirely zero. The zero
/// polynomial has no rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    coeffs: Vec<Vec<Rational>>,
}

impl BivarPoly {
    pub fn new(mut coeffs: Vec<Vec<Rational>>) -> Self {
        let width = coeffs.iter().map(Vec::len).max().unwrap_or(0);
        for row in &mut coeffs {
            row.resize(width, Rational::zero());
        }
        while coeffs.last().is_some_and(|r| r.iter().all(Zero::is_zero)) {
            coeffs.pop();
        }
        let mut width = coeffs.first().map_or(0, Vec::len);
        while width > 0 && coeffs.iter().all(|r| r[width - 1].is_zero()) {
            width -= 1;
        }
        for row in &mut coeffs {
            row.truncate(width);
        }
        BivarPoly { coeffs }
    }

    /// Sums the given `(x exponent, y exponent, coefficient)` terms.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut coeffs: Vec<Vec<Rational>> = Vec::new();
        for (i, j, c) in terms {
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Vec::new());
            }
            let row = &mut coeffs[i];
            if row.len() <= j {
                row.resize(j + 1, Rational::zero());
            }
            row[j] += c;
        }
        Self::new(coeffs)
    }

    pub fn from_ints(terms: &[(usize, usize, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(i, j, c)| (i, j, rat(c))))
    }

    pub fn zero() -> Self {
        BivarPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![vec![c]])
    }

    pub fn x() -> Self {
        Self::from_ints(&[(1, 0, 1)])
    }

    pub fn y() -> Self {
        Self::from_ints(&[(0, 1, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn deg_x(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.coeffs.first().map_or(0, |r| r.len().saturating_sub(1))
    }

    /// `max{i + j : coeff(i, j) != 0}`, zero for the zero polynomial.
    pub fn total_degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    /// Nonzero terms in row-major order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i, j, c))
        })
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    /// Coefficients of `y^0, y^1, ...` as polynomials in `x`.
    pub fn y_coeffs(&self) -> Vec<UnivarPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        (0..=self.deg_y())
            .map(|j| UnivarPoly::new(self.coeffs.iter().map(|r| r[j].clone()).collect()))
            .collect()
    }

    pub fn from_y_coeffs(cs: &[UnivarPoly]) -> Self {
        Self::from_terms(cs.iter().enumerate().flat_map(|(j, p)| {
            p.coeffs()
                .iter()
                .enumerate()
                .map(move |(i, c)| (i, j, c.clone()))
        }))
    }

    /// Leading coefficient in `y`, as a polynomial in `x`.
    pub fn leading_y_coeff(&self) -> UnivarPoly {
        self.y_coeffs().pop().unwrap_or_default()
    }

    /// Nested Horner: each `y^j` coefficient is evaluated in `x` first, then
    /// the resulting univariate polynomial in `y`.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for j in (0..=self.deg_y()).rev() {
            if self.is_zero() {
                break;
            }
            let mut cj = Rational::zero();
            for row in self.coeffs.iter().rev() {
                cj = cj * x + &row[j];
            }
            acc = acc * y + cj;
        }
        acc
    }

    /// [`Self::eval`] recording its `2 (deg_x + 1)(deg_y + 1)` ring operations.
    pub fn eval_counted(&self, x: &Rational, y: &Rational, counters: &Counters) -> Rational {
        counters.add_ring_ops(2 * ((self.deg_x() + 1) * (self.deg_y() + 1)) as u64);
        self.eval(x, y)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for j in (0..=self.deg_y()).rev() {
            if self.is_zero() {
                break;
            }
            let cj = self
                .coeffs
                .iter()
                .rev()
                .fold(0.0, |a, row| a * x + to_f64(&row[j]));
            acc = acc * y + cj;
        }
        acc
    }

    /// Upper bound on `|g(x, y)|` rounding error scale: the value of the
    /// polynomial with absolute coefficients at `(|x|, |y|)`.
    pub fn magnitude_f64(&self, x: f64, y: f64) -> f64 {
        let (ax, ay) = (x.abs(), y.abs());
        let mut acc = 0.0;
        for j in (0..=self.deg_y()).rev() {
            if self.is_zero() {
                break;
            }
            let cj = self
                .coeffs
                .iter()
                .rev()
                .fold(0.0, |a, row| a * ax + to_f64(&row[j]).abs());
            acc = acc * ay + cj;
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| row.iter().map(|c| c * rat(i as i64)).collect())
                .collect(),
        )
    }

    /// `∂^order g / ∂y^order`; zero once `order > deg_y`.
    pub fn partial_y(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        if order > self.deg_y() || self.is_zero() {
            return Self::zero();
        }
        // Falling factorials j (j-1) ... (j-order+1).
        let factor = |j: usize| -> Rational {
            (0..order).fold(Rational::one(), |acc, k| acc * rat((j - k) as i64))
        };
        Self::new(
            self.coeffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .skip(order)
                        .map(|(j, c)| c * factor(j))
                        .collect()
                })
                .collect(),
        )
    }

    /// `y ↦ g(x, y)`. The degree drops when the leading coefficient in `y`
    /// vanishes at `x`.
    pub fn slice_at_x(&self, x: &Rational) -> UnivarPoly {
        UnivarPoly::new(self.y_coeffs().iter().map(|c| c.eval(x)).collect())
    }

    /// `x ↦ g(x, y)`.
    pub fn slice_at_y(&self, y: &Rational) -> UnivarPoly {
        UnivarPoly::new(
            self.coeffs
                .iter()
                .map(|row| row.iter().rev().fold(Rational::zero(), |a, c| a * y + c))
                .collect(),
        )
    }

    /// `g(x + t y, y)`.
    pub fn shear(&self, t: &Rational) -> Self {
        if t.is_zero() {
            return self.clone();
        }
        let mut terms = Vec::new();
        for (i, j, c) in self.terms() {
            let binom = binomial_row(i);
            let mut tk = Rational::one();
            for (k, b) in binom.iter().enumerate() {
                terms.push((i - k, j + k, c * b * &tk));
                tk *= t;
            }
        }
        Self::from_terms(terms)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|r| r.iter().map(|a| a * c).collect())
                .collect(),
        )
    }
}

/// Canonical text: terms by decreasing total degree, then decreasing power of
/// `x`; coefficients in lowest terms. Parses back to the same polynomial.
impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by_key(|t| std::cmp::Reverse((t.0 + t.1, t.0)));
        for (n, (i, j, c)) in terms.into_iter().enumerate() {
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || (i == 0 && j == 0) {
                parts.push(a.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("x".to_string()),
                _ => parts.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("y".to_string()),
                _ => parts.push(format!("y^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;

    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        BivarPoly::from_terms(
            self.terms()
                .chain(rhs.terms())
                .map(|(i, j, c)| (i, j, c.clone())),
        )
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;

    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;

    fn neg(self) -> BivarPoly {
        self.scale(&(-Rational::one()))
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;

    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut terms = Vec::new();
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                terms.push((i + k, j + l, a * b));
            }
        }
        BivarPoly::from_terms(terms)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::ratio;
    use proptest::prelude::*;

    fn nodal() -> BivarPoly {
        BivarPoly::from_ints(&[(0, 2, 1), (3, 0, -1), (2, 0, -1)])
    }

    fn circle() -> BivarPoly {
        BivarPoly::from_ints(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)])
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(nodal().eval(&rat(-1), &rat(0)), rat(0));
        assert_eq!(circle().eval(&rat(0), &rat(0)), rat(-1));
        assert_eq!(nodal().eval(&rat(1), &rat(1)), rat(-1));
    }

    #[test]
    fn counted_evaluation_is_quadratic_in_degree() {
        let counters = Counters::new();
        let g = nodal();
        g.eval_counted(&rat(2), &rat(3), &counters);
        let d = g.total_degree() as u64;
        assert!(counters.snapshot().ring_ops <= 2 * (d + 1) * (d + 1));
    }

    #[test]
    fn partial_derivative_examples() {
        assert_eq!(nodal().partial_y(1), BivarPoly::from_ints(&[(0, 1, 2)]));
        assert_eq!(circle().partial_y(2), BivarPoly::constant(rat(2)));
        let eight =
            BivarPoly::from_ints(&[(4, 0, 3), (2, 2, 5), (0, 4, 2), (0, 2, -4)]);
        assert_eq!(
            eight.partial_y(1),
            BivarPoly::from_ints(&[(2, 1, 10), (0, 3, 8), (0, 1, -8)])
        );
        assert!(circle().partial_y(3).is_zero());
    }

    #[test]
    fn slices() {
        let s = nodal().slice_at_x(&ratio(-1, 2));
        assert_eq!(s, UnivarPoly::new(vec![ratio(-1, 8), rat(0), rat(1)]));
        assert_eq!(nodal().slice_at_x(&rat(-2)), UnivarPoly::from_ints(&[4, 0, 1]));
        assert_eq!(circle().slice_at_x(&rat(0)), UnivarPoly::from_ints(&[-1, 0, 1]));
        // leading coefficient x y^2 vanishes at x = 0
        let g = BivarPoly::from_ints(&[(1, 2, 1), (0, 1, 1)]);
        assert_eq!(g.slice_at_x(&rat(0)).degree(), Some(1));
    }

    #[test]
    fn shear_examples() {
        let line = BivarPoly::from_ints(&[(0, 1, 1), (1, 0, -1)]);
        assert_eq!(line.shear(&rat(0)), line);
        assert_eq!(BivarPoly::x().shear(&rat(1)), &BivarPoly::x() + &BivarPoly::y());
        let g = BivarPoly::from_ints(&[(0, 2, 1), (1, 0, -1)]);
        assert_eq!(
            g.shear(&rat(1)),
            BivarPoly::from_ints(&[(0, 2, 1), (1, 0, -1), (0, 1, -1)])
        );
    }

    #[test]
    fn degrees() {
        let g = nodal();
        assert_eq!((g.deg_x(), g.deg_y(), g.total_degree()), (3, 2, 3));
        assert_eq!(BivarPoly::zero().total_degree(), 0);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(nodal().to_string(), "-x^3 - x^2 + y^2");
        let g = BivarPoly::from_terms(vec![(0, 1, ratio(1, 2)), (1, 0, rat(-1))]);
        assert_eq!(g.to_string(), "-x + 1/2*y");
        assert_eq!(BivarPoly::constant(rat(-3)).to_string(), "-3");
    }

    pub(crate) fn arb_poly(max_deg: usize) -> impl Strategy<Value = BivarPoly> {
        prop::collection::vec((0..=max_deg, 0..=max_deg, -10i64..=10), 1..12).prop_map(
            move |ts| {
                BivarPoly::from_terms(
                    ts.into_iter()
                        .filter(|&(i, j, _)| i + j <= max_deg)
                        .map(|(i, j, c)| (i, j, rat(c))),
                )
            },
        )
    }

    fn naive_eval(g: &BivarPoly, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (i, j, c) in g.terms() {
            let mut t = c.clone();
            for _ in 0..i {
                t *= x;
            }
            for _ in 0..j {
                t *= y;
            }
            acc += t;
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn horner_matches_term_by_term(
            g in arb_poly(6),
            (xn, xd) in (-10i64..=10, 1i64..=10),
            (yn, yd) in (-10i64..=10, 1i64..=10),
        ) {
            let (x, y) = (ratio(xn, xd), ratio(yn, yd));
            prop_assert_eq!(g.eval(&x, &y), naive_eval(&g, &x, &y));
        }
    }

    proptest! {
        #[test]
        fn product_rule(p in arb_poly(4), q in arb_poly(4)) {
            let lhs = (&p * &q).partial_y(1);
            let rhs = &(&p * &q.partial_y(1)) + &(&q * &p.partial_y(1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn shear_inverts(g in arb_poly(5), (tn, td) in (-5i64..=5, 1i64..=6)) {
            let t = ratio(tn, td);
            prop_assert_eq!(g.shear(&t).shear(&-t.clone()), g.clone());
            prop_assert_eq!(g.shear(&t).total_degree(), g.total_degree());
        }
    }
}
