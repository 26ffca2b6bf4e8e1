//! Exact rational arithmetic helpers.
//!
//! All times, works and speeds in this crate are arbitrary-precision
//! rationals so that feasibility statements (completion before deadline,
//! exact work conservation) never fail to rounding. Only energies, which
//! involve `speed^α` for real α, live in floating point.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Convert to `f64`, accurate to a few ulp for values in double range.
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    if let (Some(n), Some(d)) = (num.to_f64(), den.to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Out of double range: shift both parts down by a common power of two.
    let shift = (num.bits().max(den.bits()) as i64 - 900).max(0) as u64;
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Canonical `p/q` rendering (lowest terms, positive denominator).
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse a rational from `p/q`, an integer, or a decimal literal
/// (optionally with an exponent). Decimals convert exactly: `"0.1"` is
/// one tenth, not the nearest double.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let numer: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let denom: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(numer, denom));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational, Error> {
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(Error::Parse(format!("bad numeric literal {s:?}")));
    }
    let numer: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad numeric literal {s:?}")))?;
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(numer * ten.pow(scale as u32))
    } else {
        Rational::new(numer, ten.pow((-scale) as u32))
    })
}

/// Least common multiple of the denominators of `values`, as a positive
/// integer. Used to rescale rational times onto an integer grid.
pub fn denominator_lcm<'a>(values: impl Iterator<Item = &'a Rational>) -> BigInt {
    let mut l = BigInt::from(1);
    for v in values {
        l = num_integer::lcm(l, v.denom().abs());
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("3.25").unwrap(), rat(13, 4));
        assert_eq!(parse_rational("1e3").unwrap(), int(1000));
        assert_eq!(parse_rational("2.5e-1").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_ratio(&rat(6, 4)), "3/2");
        assert_eq!(format_ratio(&int(5)), "5/1");
        assert_eq!(format_ratio(&rat(1, -2)), "-1/2");
    }

    #[test]
    fn f64_conversion_is_close() {
        assert_eq!(to_f64(&rat(3, 2)), 1.5);
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
