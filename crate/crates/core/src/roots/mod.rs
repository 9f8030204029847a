//! Certified real root isolation for univariate rational polynomials.
//!
//! Roots are isolated by bisection of the Bernstein form: an interval whose
//! coefficient sequence has no sign variation holds no root, one variation
//! certifies exactly one root, and anything else is split with de Casteljau.
//! A midpoint that is itself a root is reported as a point interval.

mod bernstein;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use bernstein::BernsteinPoly;
use bernstein::ScaledBernstein;
pub(crate) use bernstein::{coefficient_sign, power_to_bernstein};

use crate::algebra::{height_bits, midpoint, rat, Interval, Rational, Sign, UnivarPoly};
use crate::error::{Error, Result};

/// Interval containing exactly one real root of its polynomial. Point
/// intervals are exact rational roots; otherwise the polynomial takes
/// nonzero values of opposite signs at the two endpoints.
pub type RootInterval = Interval;

/// Cauchy bound `1 + max |c_i| / |c_deg|` rounded up to a power of two, so
/// that bisection of `[-B, B]` only meets short dyadic rationals. Every real
/// root lies in `[-B, B]`.
pub fn root_bound(p: &UnivarPoly) -> Result<Rational> {
    let lc = p.leading_coeff().ok_or(Error::ZeroPolynomial)?.abs();
    let deg = p.degree_or_zero();
    let max = p.coeffs()[..deg]
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero);
    let cauchy = (Rational::one() + max / lc).ceil().to_integer();
    Ok(Rational::from_integer(BigInt::one() << (cauchy - 1u32).bits()))
}

/// Bisection depth after which a polynomial is declared non-squarefree.
///
/// The separation of the roots of a squarefree integer polynomial of degree
/// `n` and height `H` exceeds `2^-(n (log n + 1) + n log H)`, so this limit is
/// never reached by squarefree input.
fn depth_limit(p: &UnivarPoly, range: &Interval) -> usize {
    let n = p.degree_or_zero() as u64;
    let ip = p.primitive_integer();
    let h = height_bits(ip.coeffs());
    let log_n = 64 - n.max(1).leading_zeros() as u64;
    let width_bits = range.width().ceil().to_integer().bits();
    (64 + width_bits + n * (log_n + 1) + n * h) as usize
}

/// Isolates the real roots of `p` in `[range.lo, range.hi]`, sorted
/// increasingly. `p` must be squarefree.
pub fn isolate_roots(p: &UnivarPoly, range: &Interval) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if range.lo >= range.hi {
        return Err(Error::EmptyDomain {
            lo: range.lo.to_string(),
            hi: range.hi.to_string(),
        });
    }
    let mut out = Vec::new();
    if p.degree() == Some(0) {
        return Ok(out);
    }
    if p.eval(&range.lo).is_zero() {
        out.push(Interval::point(range.lo.clone()));
    }
    let limit = depth_limit(p, range);
    let bp = ScaledBernstein::from_poly(p, &range.lo, &range.hi)?;
    isolate_rec(p, bp, 0, limit, &mut out)?;
    if p.eval(&range.hi).is_zero() {
        out.push(Interval::point(range.hi.clone()));
    }
    separate(p, &mut out);
    Ok(out)
}

/// Neighbouring intervals may share an endpoint that is not a root; halve
/// both until they are disjoint.
fn separate(p: &UnivarPoly, ivs: &mut [RootInterval]) {
    for k in 1..ivs.len() {
        while ivs[k - 1].hi >= ivs[k].lo {
            ivs[k - 1] = bisect_once(p, &ivs[k - 1]);
            ivs[k] = bisect_once(p, &ivs[k]);
        }
    }
}

/// Isolates every real root, over the Cauchy bound.
pub fn isolate_roots_default(p: &UnivarPoly) -> Result<Vec<RootInterval>> {
    let b = root_bound(p)?;
    isolate_roots(p, &Interval::new(-b.clone(), b))
}

fn isolate_rec(
    p: &UnivarPoly,
    bp: ScaledBernstein,
    depth: usize,
    limit: usize,
    out: &mut Vec<RootInterval>,
) -> Result<()> {
    match bp.sign_variations() {
        0 => Ok(()),
        1 => {
            out.push(certify_single(p, bp));
            Ok(())
        }
        _ => {
            if depth >= limit {
                return Err(Error::NonSquarefree);
            }
            let (l, r) = bp.split_half();
            let hit = l.coeffs.last().is_some_and(Zero::is_zero);
            let m = l.domain.hi.clone();
            isolate_rec(p, l, depth + 1, limit, out)?;
            if hit {
                out.push(Interval::point(m));
            }
            isolate_rec(p, r, depth + 1, limit, out)
        }
    }
}

/// Shrinks a domain holding exactly one root in its interior until neither
/// endpoint is a root.
fn certify_single(p: &UnivarPoly, mut bp: ScaledBernstein) -> RootInterval {
    loop {
        let first = bp.coeffs.first().expect("nonempty");
        let last = bp.coeffs.last().expect("nonempty");
        if !first.is_zero() && !last.is_zero() {
            return bp.domain;
        }
        let m = bp.domain.midpoint();
        if p.eval(&m).is_zero() {
            return Interval::point(m);
        }
        let (l, r) = bp.split_half();
        bp = if l.sign_variations() == 1 { l } else { r };
    }
}

fn sign_of(p: &UnivarPoly, x: &Rational) -> Sign {
    Sign::of(&p.eval(x))
}

/// Integer coefficients of a positive multiple of a polynomial, evaluated in
/// homogeneous form: for `x = n/q`, `Σ c_i n^i q^(d-i)` has the sign of the
/// polynomial at `x` and needs no rational normalization.
struct IntegerSigns(Vec<BigInt>);

impl IntegerSigns {
    fn new(p: &UnivarPoly) -> Self {
        IntegerSigns(p.primitive_integer().coeffs().iter().map(Rational::to_integer).collect())
    }

    fn at(&self, x: &Rational) -> Sign {
        let (n, q) = (x.numer(), x.denom());
        let mut coeffs = self.0.iter().rev();
        let Some(lead) = coeffs.next() else {
            return Sign::Zero;
        };
        let mut acc = lead.clone();
        let mut qpow = BigInt::one();
        for c in coeffs {
            qpow *= q;
            acc = acc * n + c * &qpow;
        }
        match acc.sign() {
            num_bigint::Sign::Plus => Sign::Positive,
            num_bigint::Sign::Minus => Sign::Negative,
            num_bigint::Sign::NoSign => Sign::Zero,
        }
    }
}

/// Sub-interval of width at most `eps` still holding the root.
pub fn refine_interval(p: &UnivarPoly, iv: &RootInterval, eps: &Rational) -> RootInterval {
    if iv.is_point() {
        return iv.clone();
    }
    let signs = IntegerSigns::new(p);
    let sign_of = |_: &UnivarPoly, x: &Rational| signs.at(x);
    let mut iv = iv.clone();
    let (mut s_lo, s_hi) = (sign_of(p, &iv.lo), sign_of(p, &iv.hi));
    if s_lo == Sign::Zero || s_hi == Sign::Zero || s_lo == s_hi {
        // Endpoint on a root: fall back to the variation certificate.
        let bp = ScaledBernstein::from_poly(p, &iv.lo, &iv.hi).expect("nonempty interval");
        iv = certify_single(p, bp);
        if iv.is_point() {
            return iv;
        }
        s_lo = sign_of(p, &iv.lo);
    }
    while &iv.width() > eps {
        let m = iv.midpoint();
        match sign_of(p, &m) {
            Sign::Zero => return Interval::point(m),
            s if s == s_lo => iv.lo = m,
            _ => iv.hi = m,
        }
    }
    iv
}

/// Halves `iv` once, keeping the root of `p`. Returns a point interval when
/// the midpoint is the root.
pub(crate) fn bisect_once(p: &UnivarPoly, iv: &RootInterval) -> RootInterval {
    let half = iv.width() / rat(2);
    refine_interval(p, iv, &half)
}

/// Sign of `q` at the unique root of the squarefree `p` in `iv`, decided
/// exactly: a common factor of `p` and `q` vanishing in `iv` gives `Zero`,
/// otherwise `iv` is narrowed until the Bernstein form of `q` has one sign.
/// The narrowed interval is returned alongside.
pub fn sign_at_root(q: &UnivarPoly, p: &UnivarPoly, iv: &RootInterval) -> (Sign, RootInterval) {
    if iv.is_point() {
        return (sign_of(q, &iv.lo), iv.clone());
    }
    if q.is_zero() {
        return (Sign::Zero, iv.clone());
    }
    let h = UnivarPoly::gcd(q, p);
    if h.degree().unwrap_or(0) > 0 {
        let (a, b) = (sign_of(&h, &iv.lo), sign_of(&h, &iv.hi));
        if a.is_definite() && b.is_definite() && a != b {
            return (Sign::Zero, iv.clone());
        }
    }
    let mut iv = iv.clone();
    loop {
        let s = BernsteinPoly::from_poly(q, &iv.lo, &iv.hi)
            .expect("nonempty interval")
            .sign();
        if s.is_definite() {
            return (s, iv);
        }
        iv = bisect_once(p, &iv);
        if iv.is_point() {
            return (sign_of(q, &iv.lo), iv);
        }
    }
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &UnivarPoly) -> Result<usize> {
    let sf = p.squarefree_part()?;
    Ok(isolate_roots_default(&sf)?.len())
}

/// Midpoint of the gap between two disjoint sorted intervals.
pub fn gap_midpoint(left: &Interval, right: &Interval) -> Rational {
    midpoint(&left.hi, &right.lo)
}
