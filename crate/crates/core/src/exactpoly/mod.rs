//! Exact univariate polynomial arithmetic over the rationals.

mod poly;
mod rational_fn;
mod roots;

pub use num_rational::BigRational;
pub use poly::Polynomial;
pub use rational_fn::{
    sign_arcs, sign_on_circle, validate_g, CirclePoint, GValidation, RationalFunction, SignArcs,
};
pub use roots::{
    count_real_roots, is_squarefree, isolate_real_roots, squarefree_part, sturm_sequence, Bound,
    IsolatingInterval, DEFAULT_REFINE_BITS,
};

use crate::error::{Error, Result};

/// Parses an exact integer or `p/q` literal. Decimal points and exponents are rejected.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    use num_bigint::BigInt;
    use num_traits::Zero;

    let bad = || {
        Error::input(
            "exactpoly",
            format!("not an exact rational literal: {text:?}"),
        )
    };
    let t = text.trim();
    let int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(int(t)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(int(n)?, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(
            parse_rational("-6/4").unwrap(),
            BigRational::new((-3).into(), 2.into())
        );
        assert_eq!(
            parse_rational("17").unwrap(),
            BigRational::from_integer(17.into())
        );
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("").is_err());
    }
}
