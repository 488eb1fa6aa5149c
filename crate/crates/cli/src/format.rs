//! Number rendering for human-readable output.

use ablkit::OutcomeDistribution;

const SIG_DIGITS: i32 = 12;
const MAX_DENOMINATOR: u32 = 24;
const FRACTION_TOL: f64 = 1e-9;

/// A probability with 12 significant digits and, when it sits on a small
/// fraction, an annotation like `≈ 1/6`.
pub fn probability(p: f64) -> String {
    let digits = significant(p);
    match small_fraction(p) {
        Some((n, d)) if d > 1 => format!("{digits} ≈ {n}/{d}"),
        _ => digits,
    }
}

pub fn significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude < -6 {
        return format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    }
    let decimals = (SIG_DIGITS - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Nearest `n/d` with `d ≤ 24`, if within `1e-9`. Smallest denominator wins.
pub fn small_fraction(x: f64) -> Option<(i64, u32)> {
    (1..=MAX_DENOMINATOR).find_map(|d| {
        let n = (x * f64::from(d)).round();
        ((x - n / f64::from(d)).abs() <= FRACTION_TOL).then_some((n as i64, d))
    })
}

/// Eigenvalues rounded to 12 significant digits with trailing zeros dropped.
/// Anything below `1e-12` in magnitude prints as 0.
pub fn value(x: f64) -> String {
    if x.abs() < 1e-12 {
        return "0".to_string();
    }
    let s = significant(x);
    let s = if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else if !s.starts_with('-') && x > 0.0 {
        format!("+{s}")
    } else {
        s
    }
}

pub fn distribution(d: &OutcomeDistribution) -> String {
    let parts: Vec<String> = d
        .outcomes()
        .iter()
        .map(|o| format!("{}: {}", value(o.eigenvalue), probability(o.probability)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn pairs(expected: &[(f64, f64)]) -> String {
    let parts: Vec<String> = expected
        .iter()
        .map(|&(v, p)| format!("{}: {}", value(v), probability(p)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}
