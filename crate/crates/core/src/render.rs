//! Numeric presentation: exact fractions, fixed-precision decimals, and
//! parsing of user-supplied rationals.
//!
//! Computation happens on exact rationals; decimals exist only at this
//! presentation layer. Rounding is round-half-even.

use num_traits::Signed;

use crate::Rational;

/// Largest supported decimal precision. Callers validate user input against
/// this before rendering.
pub const MAX_PRECISION: u32 = 18;

/// `numer/denom`, always with an explicit denominator: `1/1`, `-1/5`, `0/1`.
pub fn fraction(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Fixed-point decimal with exactly `precision` fractional digits,
/// round-half-even: `-1/6` at precision 2 is `-0.17`, `-1/5` is `-0.20`.
pub fn decimal_fixed(r: Rational, precision: u32) -> String {
    assert!(precision <= MAX_PRECISION, "precision out of range");
    let negative = r.is_negative();
    let numer = i128::from(*r.numer()).abs();
    let denom = i128::from(*r.denom());
    let scale = 10i128.pow(precision);

    let mut scaled = numer * scale / denom;
    let remainder = numer * scale % denom;
    match (2 * remainder).cmp(&denom) {
        std::cmp::Ordering::Greater => scaled += 1,
        std::cmp::Ordering::Equal => scaled += scaled & 1, // tie: round to even
        std::cmp::Ordering::Less => {}
    }

    let sign = if negative && scaled != 0 { "-" } else { "" };
    if precision == 0 {
        format!("{sign}{scaled}")
    } else {
        format!(
            "{sign}{}.{:0width$}",
            scaled / scale,
            scaled % scale,
            width = precision as usize
        )
    }
}

/// Like [`decimal_fixed`] but with trailing fractional zeros trimmed, so
/// `-1/5` renders as `-0.2` and `0/1` as `0`.
pub fn decimal_trimmed(r: Rational, precision: u32) -> String {
    let fixed = decimal_fixed(r, precision);
    if !fixed.contains('.') {
        return fixed;
    }
    let trimmed = fixed.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

/// The standard two-part rendering used everywhere numbers are shown:
/// `-1/5 (-0.20)`.
pub fn fraction_and_decimal(r: Rational, precision: u32) -> String {
    format!("{} ({})", fraction(r), decimal_fixed(r, precision))
}

/// Parses a rational from `n`, `n/d`, or a plain decimal such as `0.4`
/// (which becomes exactly `2/5`). Rejects zero denominators and values too
/// large for 64-bit arithmetic.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".to_string());
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let n: i64 = numer
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator {numer:?}"))?;
        let d: i64 = denom
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator {denom:?}"))?;
        if d == 0 {
            return Err("denominator must be non-zero".to_string());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.trim() {
            x if x.starts_with('-') => (-1i64, &x[1..]),
            x if x.starts_with('+') => (1, &x[1..]),
            x => (1, x),
        };
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.is_empty() && int_digits.is_empty()
        {
            return Err(format!("invalid decimal {s:?}"));
        }
        if frac_part.len() as u32 > MAX_PRECISION {
            return Err(format!("too many decimal digits in {s:?}"));
        }
        let scale = 10i64.pow(frac_part.len() as u32);
        let int_value: i64 = if int_digits.is_empty() {
            0
        } else {
            int_digits
                .parse()
                .map_err(|_| format!("invalid decimal {s:?}"))?
        };
        let frac_value: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part
                .parse()
                .map_err(|_| format!("invalid decimal {s:?}"))?
        };
        let numer = int_value
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_value))
            .ok_or_else(|| format!("number {s:?} is too large"))?;
        return Ok(Rational::new(sign * numer, scale));
    }
    let n: i64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    Ok(Rational::from_integer(n))
}
