use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::roots::{is_squarefree, isolate_real_roots, sign, squarefree_part, IsolatingInterval};
use super::Polynomial;
use crate::error::{Error, Result};

/// A reduced quotient of polynomials, read as a function on `ℝ ∪ {∞}`.
///
/// The denominator is kept monic, so the constant factor lives in the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

/// A point of the real projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CirclePoint {
    Finite(BigRational),
    Infinity,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::input(
                "exactpoly",
                "rational function with zero denominator",
            ));
        }
        let g = numerator.gcd(&denominator);
        let (num, den) = if g.is_zero() {
            (numerator, denominator)
        } else {
            (numerator.div_rem(&g).0, denominator.div_rem(&g).0)
        };
        let lc = den.leading().cloned().expect("nonzero denominator");
        let inv = lc.recip();
        Ok(RationalFunction {
            numerator: num.scale(&inv),
            denominator: den.scale(&inv),
        })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        RationalFunction {
            numerator: p,
            denominator: Polynomial::from_ints(&[1]),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `deg(denominator) − deg(numerator)`: positive for a zero at ∞, negative for a pole.
    pub fn order_at_infinity(&self) -> i64 {
        let dn = self.numerator.degree().map_or(0, |d| d as i64);
        let dd = self.denominator.degree().map_or(0, |d| d as i64);
        dd - dn
    }

    /// Exact sign of `g` at a point of the circle.
    pub fn sign_at(&self, at: &CirclePoint) -> Result<i8> {
        match at {
            CirclePoint::Finite(x) => {
                let d = self.denominator.eval(x);
                if d.is_zero() {
                    return Err(Error::PoleAtSample);
                }
                Ok(sign(&self.numerator.eval(x)) * sign(&d))
            }
            CirclePoint::Infinity => {
                let order = self.order_at_infinity();
                if order < 0 {
                    return Err(Error::PoleAtSample);
                }
                if order > 0 || self.numerator.is_zero() {
                    return Ok(0);
                }
                let ratio = self.numerator.leading().expect("nonzero")
                    / self.denominator.leading().expect("nonzero");
                Ok(sign(&ratio))
            }
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_constant() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

/// Sign of `g` at a rational sample or at ∞.
pub fn sign_on_circle(g: &RationalFunction, sample: &CirclePoint) -> Result<i8> {
    g.sign_at(sample)
}

/// Outcome of checking `g` against the admissibility conditions for the conic model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GValidation {
    /// Isolated simple real zeros in ascending order, `Infinity` last when present.
    pub real_zero_intervals: Vec<IsolatingInterval>,
    pub pole_free: bool,
    pub simple_real_zeros: bool,
    pub order_at_infinity: i64,
}

impl GValidation {
    pub fn is_admissible(&self) -> bool {
        self.pole_free && self.simple_real_zeros
    }

    pub fn zero_count(&self) -> usize {
        self.real_zero_intervals.len()
    }

    pub fn finite_zeros(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.real_zero_intervals.iter().filter_map(|iv| match iv {
            IsolatingInterval::Finite { low, high } => Some((low, high)),
            IsolatingInterval::Infinity => None,
        })
    }

    /// The first failing clause, phrased for error messages.
    pub fn failure(&self) -> Option<String> {
        if !self.pole_free {
            let at_inf = if self.order_at_infinity < 0 {
                " (pole at infinity)"
            } else {
                ""
            };
            return Some(format!("g has a real pole{at_inf}"));
        }
        if !self.simple_real_zeros {
            return Some(if self.order_at_infinity >= 2 {
                "g has a multiple zero at infinity".to_string()
            } else {
                "g has a multiple real zero".to_string()
            });
        }
        None
    }
}

/// Checks pole-freeness and simplicity of real zeros on `ℝ ∪ {∞}`, and isolates the zeros.
pub fn validate_g(g: &RationalFunction, refine_bits: u32) -> Result<GValidation> {
    if g.is_zero() {
        return Err(Error::input("exactpoly", "g must not be identically zero"));
    }
    let order = g.order_at_infinity();

    let den_sf = squarefree_part(g.denominator())?;
    let den_real_roots = !isolate_real_roots(&den_sf, refine_bits)?.is_empty();
    let pole_free = !den_real_roots && order >= 0;

    let num = g.numerator();
    let repeated = num.gcd(&num.derivative());
    let repeated_real = if repeated.is_constant() {
        false
    } else {
        !isolate_real_roots(&squarefree_part(&repeated)?, refine_bits)?.is_empty()
    };
    let simple_real_zeros = !repeated_real && order <= 1;

    let num_sf = squarefree_part(num)?;
    debug_assert!(is_squarefree(&num_sf));
    let mut zeros = isolate_real_roots(&num_sf, refine_bits)?;
    if order == 1 {
        zeros.push(IsolatingInterval::Infinity);
    }
    Ok(GValidation {
        real_zero_intervals: zeros,
        pole_free,
        simple_real_zeros,
        order_at_infinity: order,
    })
}

/// Maximal arcs of constant nonzero sign of an admissible `g` on the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignArcs {
    /// Signs of the arcs in circular order starting after the smallest finite zero.
    pub signs: Vec<i8>,
    /// Sign of `g` when it has no real zero at all.
    pub constant_sign: Option<i8>,
}

impl SignArcs {
    pub fn positive_arcs(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }
}

/// Splits the circle at the isolated zeros and evaluates the exact sign on each arc
/// at a rational sample point (or at ∞ for the arc through it).
pub fn sign_arcs(g: &RationalFunction, validation: &GValidation) -> Result<SignArcs> {
    let finite: Vec<_> = validation.finite_zeros().collect();
    let zero_at_infinity = validation
        .real_zero_intervals
        .iter()
        .any(|iv| matches!(iv, IsolatingInterval::Infinity));
    let two = BigRational::from_integer(2.into());
    let one = BigRational::from_integer(1.into());

    if finite.is_empty() && !zero_at_infinity {
        let s = g.sign_at(&CirclePoint::Finite(BigRational::zero()))?;
        return Ok(SignArcs {
            signs: Vec::new(),
            constant_sign: Some(s),
        });
    }

    let mut signs = Vec::new();
    for w in finite.windows(2) {
        let sample = (w[0].1 + w[1].0) / &two;
        signs.push(g.sign_at(&CirclePoint::Finite(sample))?);
    }
    match (finite.first(), finite.last()) {
        (Some(first), Some(last)) if zero_at_infinity => {
            signs.push(g.sign_at(&CirclePoint::Finite(last.1 + &one))?);
            signs.push(g.sign_at(&CirclePoint::Finite(first.0 - &one))?);
        }
        (Some(_), Some(_)) => {
            signs.push(g.sign_at(&CirclePoint::Infinity)?);
        }
        _ => {
            // Only zero is at ∞; a single arc covers ℝ.
            signs.push(g.sign_at(&CirclePoint::Finite(BigRational::zero()))?);
        }
    }
    debug_assert!(signs.iter().all(|s| s.is_positive() || s.is_negative()));
    Ok(SignArcs {
        signs,
        constant_sign: None,
    })
}
