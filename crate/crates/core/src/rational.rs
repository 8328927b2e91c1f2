//! Rational scalars and their textual form (`"p/q"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"7"`, `"-3/4"`. Floats are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `q^k` for any integer `k`; `q` must be nonzero when `k < 0`.
pub fn pow(q: &Rational, k: i64) -> Rational {
    let mut base = if k < 0 { q.recip() } else { q.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = Rational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// A rational is a non-root of unity exactly when its absolute value is not 0 or 1.
pub fn check_non_root_of_unity(q: &Rational) -> Result<()> {
    if q.is_zero() || q.abs().is_one() {
        return Err(Error::InvalidInput(format!(
            "q = {} must satisfy |q| not in {{0, 1}}",
            format_rational(q)
        )));
    }
    Ok(())
}

pub fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_rejects_floats() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(" 12 ").unwrap(), int(12));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&frac(6, -4)), "-3/2");
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow(&int(2), 10), int(1024));
        assert_eq!(pow(&int(-2), 3), int(-8));
        assert_eq!(pow(&int(2), -2), frac(1, 4));
        assert!(check_non_root_of_unity(&int(-1)).is_err());
        assert!(check_non_root_of_unity(&frac(1, 2)).is_ok());
    }
}
