//! Small helpers shared by the line-oriented file formats.

use crate::error::{Error, Result};

/// Formats a finite double as a C99-style hexadecimal float
/// (`0x1.8p+1`, `-0x0p+0`). Parsing the result with [`parse_float`]
/// yields the identical bit pattern.
pub fn format_hex_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 {
        (0, -1022)
    } else {
        (1, exp_bits - 1023)
    };
    let mut frac = format!("{mantissa:013x}");
    while frac.ends_with('0') {
        frac.pop();
    }
    let dot = if frac.is_empty() { "" } else { "." };
    format!("{sign}0x{lead}{dot}{frac}p{exp:+}")
}

fn parse_hex_float(s: &str) -> Option<f64> {
    let (neg, rest) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let rest = rest.strip_prefix("0x").or_else(|| rest.strip_prefix("0X"))?;
    let (digits, exp) = rest.split_once(['p', 'P'])?;
    let exp: i32 = exp.parse().ok()?;
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    // Accumulate exactly in an integer mantissa; 15 hex digits fit in 60 bits,
    // which covers every value this module emits.
    let all: String = format!("{int_part}{frac_part}");
    if all.len() > 15 {
        return None;
    }
    let mant = if all.is_empty() {
        0
    } else {
        u64::from_str_radix(&all, 16).ok()?
    };
    let shift = exp - 4 * frac_part.len() as i32;
    let mut value = mant as f64;
    // `mant` is exact in f64 only up to 2^53; larger mantissas are rejected
    // because round-tripping output never produces them.
    if mant >= 1u64 << 53 {
        return None;
    }
    // Scale in steps so subnormal results are reached without overflow.
    let mut e = shift;
    while e > 1000 {
        value *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        value *= 2f64.powi(-1000);
        e += 1000;
    }
    value *= 2f64.powi(e);
    Some(if neg { -value } else { value })
}

/// Parses a decimal or hexadecimal float.
pub fn parse_float(s: &str) -> Option<f64> {
    let t = s.trim();
    if t.contains("0x") || t.contains("0X") {
        parse_hex_float(t)
    } else {
        t.parse().ok()
    }
}

/// Formats with `sig` significant digits in plain decimal notation.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.prec$}", prec = sig.saturating_sub(1));
    }
    let mag = x.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// 17 significant digits with trailing zeros dropped (`0.75`, `1.0`);
/// parses back to the same `f64`.
pub fn format_machine(x: f64) -> String {
    let s = format_sig(x, 17);
    if !x.is_finite() || !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers. Trailing
/// `#` comments are stripped.
pub fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a count for {what}, found `{tok}`")))
}

pub fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    parse_float(tok).ok_or_else(|| Error::parse(line, format!("invalid number `{tok}`")))
}

/// Reads a `key=value` token.
pub fn parse_keyed(tok: &str, key: &str, line: usize) -> Result<usize> {
    let value = tok
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=<n>`, found `{tok}`")))?;
    parse_usize(value, line, key)
}
