//! Serialization helpers. Numbers are written with Rust's `{:e}` format:
//! shortest round-trip digits, lowercase exponent, no locale.

use std::fmt::Write as _;
use std::path::Path;

use gravred::PhysicalContext;
use serde::Serialize;

use crate::CliError;

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// `# units: <system> (hbar = .., G = ..)`.
pub fn units_header(ctx: &PhysicalContext) -> String {
    format!("# units: {} (hbar = {}, G = {})\n", ctx.units().label(), num(ctx.hbar()), num(ctx.g()))
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitsEcho {
    pub system: &'static str,
    pub hbar: f64,
    #[serde(rename = "G")]
    pub g: f64,
}

impl From<&PhysicalContext> for UnitsEcho {
    fn from(ctx: &PhysicalContext) -> Self {
        Self { system: ctx.units().label(), hbar: ctx.hbar(), g: ctx.g() }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// CSV text: units header, column row, then data rows.
pub fn csv(ctx: &PhysicalContext, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = units_header(ctx);
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Config(format!("cannot write output: {e}")))
        }
    }
}

pub fn gnuplot_script(csv_path: Option<&Path>, title: &str) -> String {
    let data = csv_path.map(|p| p.display().to_string()).unwrap_or_else(|| "trajectory.csv".into());
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel 't'");
    let _ = writeln!(s, "set ylabel 'r'");
    let _ = writeln!(s, "set title '{title}'");
    let _ = writeln!(s, "set xzeroaxis");
    let _ = writeln!(s, "plot '{data}' using 1:2 with lines");
    s
}
