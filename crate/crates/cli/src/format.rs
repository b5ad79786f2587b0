//! Fixed, byte-deterministic text output.

use std::fmt::Write;

use xdiscord::dynamics::SweepResult;
use xdiscord::{CorrelationBreakdown, SuddenChangeEvent};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub const CSV_HEADER: &str =
    "tau_t,eta_or_gamma_or_p,mutual_info,classical,discord,s1,s2,s3,argmin_branch";
pub const ORACLE_HEADER: &str = ",oracle_min,oracle_dev";

/// Formats like C's `%.12g`: shortest of fixed and lowercase scientific,
/// trailing zeros removed. Negative zero prints as `0`.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        let fixed = trim_zeros(&fixed);
        if fixed == "-0" {
            "0".into()
        } else {
            fixed.to_string()
        }
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Oracle minimum and its absolute deviation from min{S1, S2, S3}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleColumns {
    pub minimum: f64,
    pub deviation: f64,
}

pub fn header(with_oracle: bool) -> String {
    if with_oracle {
        format!("{CSV_HEADER}{ORACLE_HEADER}")
    } else {
        CSV_HEADER.to_string()
    }
}

pub fn row(
    tau_t: f64,
    control: f64,
    c: &CorrelationBreakdown,
    oracle: Option<OracleColumns>,
) -> String {
    let mut line = [
        tau_t,
        control,
        c.mutual_info,
        c.classical,
        c.discord,
        c.s1,
        c.s2,
        c.s3,
    ]
    .iter()
    .map(|x| number(*x))
    .collect::<Vec<_>>()
    .join(",");
    write!(line, ",{}", c.argmin_branch).unwrap();
    if let Some(o) = oracle {
        write!(line, ",{},{}", number(o.minimum), number(o.deviation)).unwrap();
    }
    line
}

pub fn event_line(e: &SuddenChangeEvent) -> String {
    format!(
        "#event tau_t={} from={} to={} quantity={} left_slope={} right_slope={} weak={}",
        number(e.tau_t),
        e.branch_before,
        e.branch_after,
        e.quantity.as_str(),
        number(e.left_slope),
        number(e.right_slope),
        e.weak
    )
}

/// Header, one row per grid point, then one `#event` line per event.
pub fn sweep_csv(result: &SweepResult, oracle: Option<&[OracleColumns]>) -> String {
    let mut out = header(oracle.is_some());
    out.push('\n');
    for (i, row_data) in result.rows.iter().enumerate() {
        out.push_str(&row(
            result.grid[i],
            result.controls[i],
            row_data,
            oracle.map(|o| o[i]),
        ));
        out.push('\n');
    }
    for e in &result.events {
        out.push_str(&event_line(e));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_c_percent_g() {
        let cases = [
            (1.0, "1"),
            (-0.0, "0"),
            (0.5, "0.5"),
            (2.0f64.ln(), "0.69314718056"),
            (1.0 / 3.0, "0.333333333333"),
            (123456.789, "123456.789"),
            (1e-5, "1e-05"),
            (-2.5e-7, "-2.5e-07"),
            (0.0001, "0.0001"),
            (1e12, "1e+12"),
            (999999999999.0, "999999999999"),
            (-1.0e-300, "-1e-300"),
        ];
        for (x, want) in cases {
            assert_eq!(number(x), want, "{x}");
        }
    }

    #[test]
    fn rounding_that_carries_into_exponent() {
        assert_eq!(number(9.9999999999999e-5), "0.0001");
        assert_eq!(number(0.99999999999999), "1");
    }
}
