pub mod ball;
pub mod gaussian;

pub use ball::Ball;
pub use gaussian::GaussianRational;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{CoreError, Result};

/// Parse an exact rational from a decimal string ("-0.5", "3"), a fraction
/// ("2/3", "-7/4"), or scientific-free integer notation. Never rounds.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(CoreError::Parse("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad numerator in '{s}'")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad denominator in '{s}'")))?;
        if den.is_zero() {
            return Err(CoreError::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(CoreError::Parse(format!("bad number '{s}'")));
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(CoreError::Parse(format!("bad number '{s}'")));
    }
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad number '{s}'")))?
    };
    let den = BigInt::from(10u8).pow(frac_part.len() as u32);
    Ok(BigRational::new(BigInt::from(sign) * num, den))
}

/// Render a rational in canonical form: integer when the denominator is 1,
/// otherwise "p/q" in lowest terms. Deterministic byte-for-byte.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
