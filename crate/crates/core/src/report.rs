//! CSV output.
//!
//! The long form has one row per record under the header
//! `sweep_param,sweep_value,metric,mean,stderr,trials`. The plot form has
//! one row per sweep value and a `<metric>`/`<metric>_stderr` column pair
//! per metric. Numbers use 12 significant digits in C `%.12g` style, so
//! files are byte-stable for identical records.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::harness::ResultRecord;

pub const CSV_HEADER: &str = "sweep_param,sweep_value,metric,mean,stderr,trials";

/// Formats `x` like C's `%.{sig}g`.
pub fn format_g(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_g(x, 12)
}

/// Long-form CSV text for `records`.
pub fn csv_string(records: &[ResultRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.sweep_param,
            num(r.sweep_value),
            r.metric,
            num(r.mean),
            num(r.stderr),
            r.trials
        );
    }
    out
}

/// Wide CSV text: one row per sweep value, metrics in first-seen order.
pub fn plot_csv_string(records: &[ResultRecord]) -> String {
    let mut metrics: Vec<&str> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for r in records {
        if !metrics.contains(&r.metric.as_str()) {
            metrics.push(&r.metric);
        }
        if !values.contains(&r.sweep_value) {
            values.push(r.sweep_value);
        }
    }
    let param = records.first().map_or("sweep_value", |r| r.sweep_param.as_str());
    let mut out = String::from(param);
    for m in &metrics {
        let _ = write!(out, ",{m},{m}_stderr");
    }
    out.push('\n');
    for &v in &values {
        out.push_str(&num(v));
        for m in &metrics {
            match records.iter().find(|r| r.sweep_value == v && r.metric == *m) {
                Some(r) => {
                    let _ = write!(out, ",{},{}", num(r.mean), num(r.stderr));
                }
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}

/// Writes the long-form CSV to `path`.
pub fn emit_csv(records: &[ResultRecord], path: &Path) -> io::Result<()> {
    if records.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no records to write"));
    }
    fs::write(path, csv_string(records))
}

/// Writes the plot-ready wide CSV to `path`.
pub fn emit_plot_csv(records: &[ResultRecord], path: &Path) -> io::Result<()> {
    if records.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no records to write"));
    }
    fs::write(path, plot_csv_string(records))
}
