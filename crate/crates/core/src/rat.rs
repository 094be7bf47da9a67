//! Exact rational scalars and their wire format.
//!
//! Every decision-relevant number in this crate is a [`Rat`]. On the wire
//! (game files, analysis reports) rationals are strings `"a/b"` or `"a"`
//! with decimal integers and a positive denominator, never floats.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;

/// Arbitrary-precision exact rational.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`; intended for
/// literals in code and tests, not for parsing input.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a/b"` or `"a"`. The denominator must be a positive decimal
/// integer; the reported error names `field` so callers can point at the
/// offending location in a larger document.
pub fn parse_rat(field: &str, text: &str) -> Result<Rat, Error> {
    let bad = |message: String| Error::Parse {
        field: field.to_string(),
        message,
    };
    let text = text.trim();
    if text.is_empty() {
        return Err(bad("empty rational literal".to_string()));
    }
    match text.split_once('/') {
        None => {
            let n = BigInt::from_str(text)
                .map_err(|_| bad(format!("cannot parse {text:?} as an integer")))?;
            Ok(Rat::from_integer(n))
        }
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim())
                .map_err(|_| bad(format!("cannot parse numerator {num:?}")))?;
            let d = BigInt::from_str(den.trim())
                .map_err(|_| bad(format!("cannot parse denominator {den:?}")))?;
            if d <= BigInt::zero() {
                return Err(bad(format!("denominator must be positive, got {d}")));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Canonical wire form: `"a/b"` in lowest terms, or `"a"` for integers.
pub fn format_rat(value: &Rat) -> String {
    value.to_string()
}
