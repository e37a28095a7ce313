//! Square-free reduction, Sturm sequences and real-root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{Error, Result};

const MODULE: &str = "exactpoly";

/// Default isolating-interval width: `2^-20`.
pub const DEFAULT_REFINE_BITS: u32 = 20;

/// `p / gcd(p, p')`, made monic. Same real roots as `p`, all simple.
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::input(
            MODULE,
            "square-free part of the zero polynomial",
        ));
    }
    let g = p.gcd(&p.derivative());
    Ok(p.div_rem(&g).0.monic())
}

pub fn is_squarefree(p: &Polynomial) -> bool {
    !p.is_zero() && p.gcd(&p.derivative()).is_constant()
}

/// An endpoint of an open interval on the real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

impl Bound {
    pub fn int(v: i64) -> Self {
        Bound::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    fn less_than(&self, other: &Bound) -> bool {
        match (self, other) {
            (Bound::NegInfinity, Bound::NegInfinity) | (Bound::PosInfinity, _) => false,
            (Bound::NegInfinity, _) | (_, Bound::PosInfinity) => true,
            (_, Bound::NegInfinity) => false,
            (Bound::Finite(a), Bound::Finite(b)) => a < b,
        }
    }
}

pub(crate) fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Positive multiple of `p` with coprime integer coefficients; same sign everywhere.
fn positive_primitive(p: &Polynomial) -> Vec<BigInt> {
    let mut c = p.primitive_integer_coeffs();
    if p.leading().is_some_and(Signed::is_negative) {
        c.iter_mut().for_each(|x| *x = -&*x);
    }
    c
}

fn to_poly(c: &[BigInt]) -> Polynomial {
    Polynomial::new(c.iter().cloned().map(BigRational::from_integer).collect())
}

/// Sign of `Σ c_i x^i` at `x = a/b`, by integer Horner on `Σ c_i a^i b^(d−i)`.
fn int_sign_at(c: &[BigInt], x: &BigRational) -> i8 {
    let (a, b) = (x.numer(), x.denom());
    let Some((lead, rest)) = c.split_last() else {
        return 0;
    };
    let mut acc = lead.clone();
    let mut b_pow = BigInt::one();
    for ci in rest.iter().rev() {
        b_pow *= b;
        acc = acc * a + ci * &b_pow;
    }
    // b > 0 for a reduced rational
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

fn int_sign_at_bound(c: &[BigInt], at: &Bound) -> i8 {
    match at {
        Bound::Finite(x) => int_sign_at(c, x),
        infinite => {
            let Some(lead) = c.last() else {
                return 0;
            };
            let s = if lead.is_positive() { 1 } else { -1 };
            if *infinite == Bound::NegInfinity && c.len().is_multiple_of(2) {
                -s
            } else {
                s
            }
        }
    }
}

/// Sturm sequence `p, p', -rem(p, p'), ...` down to a nonzero constant, each
/// term rescaled by a positive constant to a primitive integer polynomial.
pub fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    int_sturm(p).iter().map(|c| to_poly(c)).collect()
}

fn int_sturm(p: &Polynomial) -> Vec<Vec<BigInt>> {
    if p.is_zero() {
        return Vec::new();
    }
    let mut seq = vec![positive_primitive(p)];
    let mut prev = to_poly(&seq[0]);
    let mut next = p.derivative();
    while !next.is_zero() {
        let c = positive_primitive(&next);
        let cur = to_poly(&c);
        seq.push(c);
        next = -&prev.rem(&cur);
        prev = cur;
    }
    seq
}

fn sign_changes(seq: &[Vec<BigInt>], at: &Bound) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for q in seq {
        let s = int_sign_at_bound(q, at);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Roots of a square-free `p` in `(low, high]`, from a precomputed Sturm sequence.
fn half_open_count(seq: &[Vec<BigInt>], low: &Bound, high: &Bound) -> usize {
    sign_changes(seq, low).saturating_sub(sign_changes(seq, high))
}

fn open_count(seq: &[Vec<BigInt>], low: &Bound, high: &Bound) -> usize {
    let n = half_open_count(seq, low, high);
    if int_sign_at_bound(&seq[0], high) == 0 {
        n - 1
    } else {
        n
    }
}

/// Exact number of real roots of a square-free polynomial in the open interval `(low, high)`.
pub fn count_real_roots(p: &Polynomial, low: &Bound, high: &Bound) -> Result<usize> {
    if !is_squarefree(p) {
        return Err(Error::input(
            MODULE,
            format!("polynomial {p} is not square-free; reduce it with squarefree_part first"),
        ));
    }
    if !low.less_than(high) {
        return Err(Error::input(MODULE, "interval endpoints out of order"));
    }
    Ok(open_count(&int_sturm(p), low, high))
}

/// A real root location: an open interval holding exactly one root, or the
/// point at infinity of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsolatingInterval {
    Finite {
        #[serde(with = "rational_str")]
        low: BigRational,
        #[serde(with = "rational_str")]
        high: BigRational,
    },
    Infinity,
}

impl IsolatingInterval {
    pub fn width(&self) -> Option<BigRational> {
        match self {
            IsolatingInterval::Finite { low, high } => Some(high - low),
            IsolatingInterval::Infinity => None,
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        match self {
            IsolatingInterval::Finite { low, high } => low < x && x < high,
            IsolatingInterval::Infinity => false,
        }
    }

    /// Floating midpoint; `+inf` for the point at infinity.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            IsolatingInterval::Finite { low, high } => ((low + high)
                / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN),
            IsolatingInterval::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for IsolatingInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsolatingInterval::Finite { low, high } => write!(f, "({low}, {high})"),
            IsolatingInterval::Infinity => write!(f, "∞"),
        }
    }
}

pub(crate) mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::super::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

fn half(x: &BigRational) -> BigRational {
    x / BigRational::from_integer(BigInt::from(2))
}

/// Isolates every real root of a square-free polynomial by Sturm bisection.
///
/// Intervals come back sorted, pairwise disjoint, with endpoints that are not
/// roots, each narrower than `2^-refine_bits`.
pub fn isolate_real_roots(p: &Polynomial, refine_bits: u32) -> Result<Vec<IsolatingInterval>> {
    if !is_squarefree(p) {
        return Err(Error::input(
            MODULE,
            format!("polynomial {p} is not square-free; reduce it with squarefree_part first"),
        ));
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let seq = int_sturm(p);
    let max_width = BigRational::new(BigInt::one(), BigInt::one() << refine_bits);
    let m = p.root_bound();

    let mut out = Vec::new();
    // Depth-first from the right so that results pop out in ascending order.
    let mut stack = vec![(-m.clone(), m)];
    while let Some((lo, hi)) = stack.pop() {
        let count = open_count(&seq, &Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()));
        if count == 0 {
            continue;
        }
        if count == 1 && &hi - &lo <= max_width {
            out.push(IsolatingInterval::Finite { low: lo, high: hi });
            continue;
        }
        let mid = half(&(&lo + &hi));
        if int_sign_at(&seq[0], &mid) == 0 {
            // Exact rational root: carve out a small window around it whose
            // endpoints are not roots and which holds no other root.
            let mut delta = half(&half(&(&hi - &lo)).min(max_width.clone()));
            loop {
                let a = &mid - &delta;
                let b = &mid + &delta;
                if int_sign_at(&seq[0], &a) != 0
                    && int_sign_at(&seq[0], &b) != 0
                    && open_count(&seq, &Bound::Finite(a.clone()), &Bound::Finite(b.clone())) == 1
                {
                    stack.push((b.clone(), hi));
                    stack.push((a.clone(), b));
                    stack.push((lo, a));
                    break;
                }
                delta = half(&delta);
            }
        } else {
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn squarefree_collapses_repeated_root() {
        let double = &p(&[-1, 1]) * &p(&[-1, 1]);
        assert_eq!(squarefree_part(&double).unwrap(), p(&[-1, 1]));
    }

    #[test]
    fn squarefree_keeps_squarefree_input() {
        assert_eq!(squarefree_part(&p(&[-2, 0, 1])).unwrap(), p(&[-2, 0, 1]));
        assert_eq!(squarefree_part(&p(&[-4, 0, 2])).unwrap(), p(&[-2, 0, 1]));
    }

    #[test]
    fn squarefree_of_mixed_multiplicities() {
        // (z^2 + 1)^2 (z - 3); gcd(p, p') = z^2 + 1 by long division.
        let q = &p(&[1, 0, 1]);
        let input = &(q * q) * &p(&[-3, 1]);
        let g = input.gcd(&input.derivative());
        assert_eq!(g, p(&[1, 0, 1]));
        assert_eq!(squarefree_part(&input).unwrap(), q * &p(&[-3, 1]));
    }

    #[test]
    fn squarefree_rejects_zero() {
        assert!(matches!(
            squarefree_part(&Polynomial::zero()),
            Err(Error::InvalidInput { .. })
        ));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(
            count_real_roots(&p(&[-2, 0, 1]), &Bound::int(0), &Bound::int(2)).unwrap(),
            1
        );
        assert_eq!(
            count_real_roots(&p(&[1, 0, 1]), &Bound::NegInfinity, &Bound::PosInfinity).unwrap(),
            0
        );
        assert_eq!(
            count_real_roots(&p(&[0, -1, 0, 1]), &Bound::NegInfinity, &Bound::PosInfinity).unwrap(),
            3
        );
    }

    #[test]
    fn open_interval_excludes_root_endpoints() {
        let cubic = p(&[0, -1, 0, 1]);
        assert_eq!(
            count_real_roots(&cubic, &Bound::int(-1), &Bound::int(1)).unwrap(),
            1
        );
        assert_eq!(
            count_real_roots(&cubic, &Bound::int(0), &Bound::int(1)).unwrap(),
            0
        );
        assert_eq!(
            count_real_roots(&cubic, &Bound::int(-1), &Bound::PosInfinity).unwrap(),
            2
        );
    }

    #[test]
    fn sturm_rejects_repeated_roots() {
        let double = &p(&[-1, 1]) * &p(&[-1, 1]);
        assert!(count_real_roots(&double, &Bound::NegInfinity, &Bound::PosInfinity).is_err());
    }

    #[test]
    fn isolate_symmetric_pair() {
        let iv = isolate_real_roots(&p(&[-4, 0, 1]), DEFAULT_REFINE_BITS).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].contains(&r(-2, 1)));
        assert!(iv[1].contains(&r(2, 1)));
    }

    #[test]
    fn isolate_four_roots() {
        let q = &p(&[-1, 0, 1]) * &p(&[-4, 0, 1]);
        let iv = isolate_real_roots(&q, DEFAULT_REFINE_BITS).unwrap();
        let expected = [-2, -1, 1, 2];
        assert_eq!(iv.len(), 4);
        for (i, root) in iv.iter().zip(expected) {
            assert!(i.contains(&r(root, 1)), "{i} should contain {root}");
            assert!(i.width().unwrap() <= r(1, 1 << 20));
        }
    }

    #[test]
    fn isolate_constant_is_empty() {
        assert!(isolate_real_roots(&p(&[5]), DEFAULT_REFINE_BITS)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn isolate_root_at_bisection_point() {
        // 0 is the first midpoint of the symmetric start interval.
        let iv = isolate_real_roots(&p(&[0, 1]), 4).unwrap();
        assert_eq!(iv.len(), 1);
        assert!(iv[0].contains(&BigRational::zero()));
        assert!(iv[0].width().unwrap() <= r(1, 16));
    }

    #[test]
    fn isolate_close_roots() {
        // (1000z - 1)(1001z - 1)
        let q = &p(&[-1, 1000]) * &p(&[-1, 1001]);
        let iv = isolate_real_roots(&q, 4).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].contains(&r(1, 1001)));
        assert!(iv[1].contains(&r(1, 1000)));
    }
}
