//! Exact rational arithmetic helpers.
//!
//! Densities and degree fractions are computed as exact rationals end to end;
//! decimal strings appear only at the presentation boundary (12 significant
//! digits, round-half-even).

use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Rat = Ratio<i64>;

/// Parse a plain decimal like `0.05`, `1`, or `.3` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::malformed(format!("not a decimal number: {s:?}")));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::malformed(format!("not a decimal number: {s:?}")));
    }
    if frac_part.len() > 15 {
        return Err(Error::malformed(format!("too many decimal digits: {s:?}")));
    }
    let mut num: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        num = num
            .checked_mul(10)
            .and_then(|n| n.checked_add((b - b'0') as i64))
            .ok_or_else(|| Error::malformed(format!("decimal out of range: {s:?}")))?;
    }
    let den = 10i64.pow(frac_part.len() as u32);
    Ok(Rat::new(sign * num, den))
}

/// Format with 12 significant digits, round-half-even, computed exactly from
/// the rational (no float round trip).
pub fn to_decimal_12(r: &Rat) -> String {
    const DIGITS: u32 = 12;
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let num = r.numer().unsigned_abs() as u128;
    let den = *r.denom() as u128; // Ratio keeps denominators positive
    // exponent e: 10^e <= num/den < 10^(e+1)
    let mut e: i32 = 0;
    let (mut hi, mut lo) = (num, den);
    while hi >= 10 * lo {
        lo *= 10;
        e += 1;
    }
    while hi < lo {
        hi *= 10;
        e -= 1;
    }
    // mantissa = round_half_even(num/den * 10^(DIGITS-1-e)), an integer with
    // exactly DIGITS digits (or DIGITS+1 after a carry like 999.. -> 1000..).
    let shift = DIGITS as i32 - 1 - e;
    let (mut n, mut d) = (num, den);
    if shift >= 0 {
        n *= 10u128.pow(shift as u32);
    } else {
        d *= 10u128.pow((-shift) as u32);
    }
    let q = n / d;
    let rem = n % d;
    let mant = match (2 * rem).cmp(&d) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q % 2 == 0 {
                q
            } else {
                q + 1
            }
        }
    };
    let mut mant_str = mant.to_string();
    let mut exp = e;
    if mant_str.len() as u32 > DIGITS {
        // carry overflowed into an extra digit (e.g. 9.99... -> 10.0...)
        mant_str.truncate(DIGITS as usize);
        exp += 1;
    }
    // trim trailing zeros of the mantissa
    let trimmed = mant_str.trim_end_matches('0');
    let mant_str = if trimmed.is_empty() { "0" } else { trimmed };
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp >= 0 && (exp as usize) < DIGITS as usize + 3 {
        // plain notation like 123.456
        let int_len = exp as usize + 1;
        if mant_str.len() <= int_len {
            out.push_str(mant_str);
            out.push_str(&"0".repeat(int_len - mant_str.len()));
        } else {
            out.push_str(&mant_str[..int_len]);
            out.push('.');
            out.push_str(&mant_str[int_len..]);
        }
    } else if (-4..0).contains(&exp) {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp - 1) as usize));
        out.push_str(mant_str);
    } else {
        out.push_str(&mant_str[..1]);
        if mant_str.len() > 1 {
            out.push('.');
            out.push_str(&mant_str[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

/// Smallest integer >= r.
pub fn ceil_to_usize(r: &Rat) -> usize {
    let c = r.ceil();
    let v = c.to_integer();
    if v < 0 {
        0
    } else {
        v as usize
    }
}

pub fn binomial2(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

pub fn binomial3(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}
