use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{binomial_row, Interval, Rational, Sign, UnivarPoly};
use crate::error::{Error, Result};

/// Polynomial in the Bernstein basis of degree `coeffs.len() - 1` over
/// `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinPoly {
    pub domain: Interval,
    pub coeffs: Vec<Rational>,
}

/// Power-basis coefficients of a polynomial in `t ∈ [0, 1]` converted to the
/// Bernstein basis of the given degree (`degree >= q.len() - 1`).
pub(crate) fn power_to_bernstein(q: &[Rational], degree: usize) -> Vec<Rational> {
    let binom_n = binomial_row(degree);
    (0..=degree)
        .map(|k| {
            let binom_k = binomial_row(k);
            let mut acc = Rational::zero();
            for (i, qi) in q.iter().enumerate().take(k + 1) {
                if !qi.is_zero() {
                    acc += qi * &binom_k[i] / &binom_n[i];
                }
            }
            acc
        })
        .collect()
}

/// De Casteljau subdivision at parameter `tau`: coefficients of the left and
/// right pieces.
pub(crate) fn de_casteljau(coeffs: &[Rational], tau: &Rational) -> (Vec<Rational>, Vec<Rational>) {
    let n = coeffs.len();
    let mut work = coeffs.to_vec();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let one_minus = Rational::one() - tau;
    for level in 0..n {
        left.push(work[0].clone());
        right.push(work[n - 1 - level].clone());
        for i in 0..n - 1 - level {
            work[i] = &work[i] * &one_minus + &work[i + 1] * tau;
        }
    }
    right.reverse();
    (left, right)
}

/// Strict sign changes, zeros skipped.
pub(crate) fn count_sign_variations<T: Signed>(coeffs: &[T]) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let pos = c.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

/// `Positive` when every coefficient is positive, `Negative` when every one is
/// negative, `Zero` when all vanish and `Unknown` otherwise.
pub(crate) fn coefficient_sign(coeffs: &[Rational]) -> Sign {
    if coeffs.iter().all(Zero::is_zero) {
        Sign::Zero
    } else if coeffs.iter().all(Signed::is_positive) {
        Sign::Positive
    } else if coeffs.iter().all(Signed::is_negative) {
        Sign::Negative
    } else {
        Sign::Unknown
    }
}

impl BernsteinPoly {
    /// Exact change of basis over `[a, b]`.
    pub fn from_poly(p: &UnivarPoly, a: &Rational, b: &Rational) -> Result<Self> {
        Self::with_degree(p, a, b, p.degree_or_zero())
    }

    /// Like [`Self::from_poly`] with the basis degree raised to `degree`.
    pub fn with_degree(p: &UnivarPoly, a: &Rational, b: &Rational, degree: usize) -> Result<Self> {
        if a >= b {
            return Err(Error::EmptyDomain {
                lo: a.to_string(),
                hi: b.to_string(),
            });
        }
        assert!(degree >= p.degree_or_zero(), "basis degree too small");
        let q = p.compose_affine(a, &(b - a));
        Ok(BernsteinPoly {
            domain: Interval::new(a.clone(), b.clone()),
            coeffs: power_to_bernstein(q.coeffs(), degree),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn param(&self, x: &Rational) -> Rational {
        (x - &self.domain.lo) / self.domain.width()
    }

    /// Value at any rational, by de Casteljau.
    pub fn eval(&self, x: &Rational) -> Rational {
        let tau = self.param(x);
        let one_minus = Rational::one() - &tau;
        let mut work = self.coeffs.clone();
        for level in 1..work.len() {
            for i in 0..work.len() - level {
                work[i] = &work[i] * &one_minus + &work[i + 1] * &tau;
            }
        }
        work.swap_remove(0)
    }

    /// Splits at `m`, strictly inside the domain.
    pub fn split(&self, m: &Rational) -> (Self, Self) {
        debug_assert!(&self.domain.lo < m && m < &self.domain.hi);
        let (l, r) = de_casteljau(&self.coeffs, &self.param(m));
        (
            BernsteinPoly {
                domain: Interval::new(self.domain.lo.clone(), m.clone()),
                coeffs: l,
            },
            BernsteinPoly {
                domain: Interval::new(m.clone(), self.domain.hi.clone()),
                coeffs: r,
            },
        )
    }

    /// Upper bound on the number of roots in the open domain, with the same
    /// parity.
    pub fn sign_variations(&self) -> usize {
        count_sign_variations(&self.coeffs)
    }

    pub fn sign(&self) -> Sign {
        coefficient_sign(&self.coeffs)
    }

    /// Largest absolute coefficient: bounds `|p|` on the domain.
    pub fn abs_bound(&self) -> Rational {
        self.coeffs
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Bernstein coefficients times an unknown positive integer, which leaves
/// their signs intact. Splitting only at midpoints keeps every step in `ℤ`,
/// avoiding the gcd normalizations of rational arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ScaledBernstein {
    pub domain: Interval,
    pub coeffs: Vec<BigInt>,
}

impl ScaledBernstein {
    pub fn from_poly(p: &UnivarPoly, a: &Rational, b: &Rational) -> Result<Self> {
        let bp = BernsteinPoly::from_poly(p, a, b)?;
        let l = bp
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let coeffs = bp
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        Ok(Self::reduced(bp.domain, coeffs))
    }

    fn reduced(domain: Interval, mut coeffs: Vec<BigInt>) -> Self {
        let g = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut coeffs {
                *c /= &g;
            }
        }
        ScaledBernstein { domain, coeffs }
    }

    /// Halves the domain. With `w⁽ˡ⁾ = 2ˡ v⁽ˡ⁾` the integer de Casteljau
    /// pyramid, both halves are brought to the common scale `2ⁿ⁻¹`.
    pub fn split_half(&self) -> (Self, Self) {
        let n = self.coeffs.len();
        let mut work = self.coeffs.clone();
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for level in 0..n {
            left.push(&work[0] << (n - 1 - level));
            right.push(work[n - 1 - level].clone());
            for i in 0..n - 1 - level {
                work[i] = &work[i] + &work[i + 1];
            }
        }
        right.reverse();
        for (j, c) in right.iter_mut().enumerate() {
            *c <<= j;
        }
        let m = self.domain.midpoint();
        (
            Self::reduced(Interval::new(self.domain.lo.clone(), m.clone()), left),
            Self::reduced(Interval::new(m, self.domain.hi.clone()), right),
        )
    }

    pub fn sign_variations(&self) -> usize {
        count_sign_variations(&self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn conversion_examples() {
        let b = BernsteinPoly::from_poly(&UnivarPoly::from_ints(&[-1, 2]), &rat(0), &rat(1)).unwrap();
        assert_eq!(b.coeffs, vec![rat(-1), rat(1)]);
        let b = BernsteinPoly::from_poly(&UnivarPoly::from_ints(&[1, 0, 1]), &rat(0), &rat(1)).unwrap();
        assert_eq!(b.coeffs, vec![rat(1), rat(1), rat(2)]);
        let b = BernsteinPoly::from_poly(&UnivarPoly::zero(), &rat(-1), &rat(1)).unwrap();
        assert!(b.coeffs.iter().all(Zero::is_zero));
    }

    #[test]
    fn empty_domain() {
        assert!(matches!(
            BernsteinPoly::from_poly(&UnivarPoly::one(), &rat(1), &rat(1)),
            Err(Error::EmptyDomain { .. })
        ));
    }

    #[test]
    fn variation_examples() {
        assert_eq!(count_sign_variations(&[rat(-1), rat(1)]), 1);
        assert_eq!(count_sign_variations(&[rat(1), rat(1), rat(2)]), 0);
        assert_eq!(count_sign_variations(&[rat(1), rat(-3), rat(1)]), 2);
        assert_eq!(count_sign_variations(&[rat(1), rat(0), rat(-1)]), 1);
    }

    #[test]
    fn endpoint_interpolation() {
        let p = UnivarPoly::from_ints(&[3, -1, 4, -1, 5]);
        let b = BernsteinPoly::from_poly(&p, &ratio(-1, 2), &rat(2)).unwrap();
        assert_eq!(b.coeffs[0], p.eval(&ratio(-1, 2)));
        assert_eq!(b.coeffs[4], p.eval(&rat(2)));
    }

    #[test]
    fn degree_elevation_preserves_values() {
        let p = UnivarPoly::from_ints(&[1, -2, 3]);
        let b = BernsteinPoly::with_degree(&p, &rat(0), &rat(3), 5).unwrap();
        for k in 0..=6 {
            let x = ratio(k, 2);
            assert_eq!(b.eval(&x), p.eval(&x));
        }
    }

    #[test]
    fn scaled_split_matches_rational_split() {
        let p = UnivarPoly::from_ints(&[3, -1, 4, -1, 5, -9]);
        let (a, b) = (ratio(-3, 2), rat(2));
        let exact = BernsteinPoly::from_poly(&p, &a, &b).unwrap();
        let scaled = ScaledBernstein::from_poly(&p, &a, &b).unwrap();
        let (el, er) = exact.split(&exact.domain.midpoint());
        let (sl, sr) = scaled.split_half();
        for (e, s) in [(el, sl), (er, sr)] {
            assert_eq!(e.domain, s.domain);
            // Proportional with a positive factor.
            let k = &e.coeffs[0] / Rational::from_integer(s.coeffs[0].clone());
            assert!(k.is_positive());
            for (x, y) in e.coeffs.iter().zip(&s.coeffs) {
                assert_eq!(x, &(&k * Rational::from_integer(y.clone())));
            }
        }
    }

    fn arb_univar() -> impl Strategy<Value = UnivarPoly> {
        prop::collection::vec(-20i64..=20, 1..8).prop_map(|c| UnivarPoly::from_ints(&c))
    }

    proptest! {
        #[test]
        fn conversion_agrees_with_horner(
            p in arb_univar(),
            (an, bn, d) in (-10i64..=0, 1i64..=10, 1i64..=4),
            xs in prop::collection::vec((-40i64..=40, 1i64..=9), 10),
        ) {
            let (a, b) = (ratio(an, d), ratio(bn, d));
            let bp = BernsteinPoly::from_poly(&p, &a, &b).unwrap();
            for (n, dd) in xs {
                let x = ratio(n, dd);
                prop_assert_eq!(bp.eval(&x), p.eval(&x));
            }
        }

        #[test]
        fn de_casteljau_split_is_consistent(
            p in arb_univar(),
            (mn, md) in (1i64..=8, 9i64..=10),
            pts in prop::collection::vec((0i64..=200, 200i64..=201), 200),
        ) {
            let bp = BernsteinPoly::from_poly(&p, &rat(0), &rat(1)).unwrap();
            let m = ratio(mn, md);
            let (l, r) = bp.split(&m);
            prop_assert_eq!(&l.domain.hi, &r.domain.lo);
            for (n, d) in pts {
                let x = ratio(n, d);
                prop_assert_eq!(l.eval(&x), bp.eval(&x));
                prop_assert_eq!(r.eval(&x), bp.eval(&x));
            }
        }
    }
}
