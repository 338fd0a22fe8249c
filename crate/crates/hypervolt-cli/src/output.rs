//! CSV and JSON writers with deterministic, full-precision formatting.
//! Every float is printed with 17 significant digits so the two formats
//! encode bit-identical values and files diff cleanly across runs.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
pub struct SolveRow {
    pub t: f64,
    pub value: f64,
    pub route: &'static str,
    pub err_est: Option<f64>,
}

#[derive(Serialize)]
pub struct VerifyRow {
    pub t: f64,
    pub residual: f64,
    pub convolution_value: f64,
    pub regularization: &'static str,
    pub quadrature_error_estimate: f64,
}

#[derive(Serialize)]
pub struct CompareRow {
    pub pair: String,
    pub n: usize,
    pub max_rel_diff: f64,
    pub rms_rel_diff: f64,
}

#[derive(Serialize)]
pub struct CatalogRow {
    pub name: String,
    pub value_at_zero: f64,
    pub moment0: f64,
    pub decay: String,
}

#[derive(Serialize)]
pub struct AsymRecord {
    pub record: String,
    pub amplitude: f64,
    pub exponent: f64,
    pub window_lo: Option<f64>,
    pub window_hi: Option<f64>,
    pub rms_log_residual: Option<f64>,
}

#[derive(Serialize)]
pub struct AsymReport {
    pub records: Vec<AsymRecord>,
    pub note: String,
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_solve(w: &mut dyn Write, fmt: Format, rows: &[SolveRow]) -> std::io::Result<()> {
    match fmt {
        Format::Csv => {
            writeln!(w, "t,value,route,err_est")?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt_f64(r.t),
                    fmt_f64(r.value),
                    r.route,
                    opt(r.err_est)
                )?;
            }
            Ok(())
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(rows).unwrap()),
    }
}

pub fn write_verify(w: &mut dyn Write, fmt: Format, rows: &[VerifyRow]) -> std::io::Result<()> {
    match fmt {
        Format::Csv => {
            writeln!(
                w,
                "t,residual,convolution_value,regularization,quadrature_error_estimate"
            )?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    fmt_f64(r.t),
                    fmt_f64(r.residual),
                    fmt_f64(r.convolution_value),
                    r.regularization,
                    fmt_f64(r.quadrature_error_estimate)
                )?;
            }
            Ok(())
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(rows).unwrap()),
    }
}

pub fn write_compare(w: &mut dyn Write, fmt: Format, rows: &[CompareRow]) -> std::io::Result<()> {
    match fmt {
        Format::Csv => {
            writeln!(w, "pair,n,max_rel_diff,rms_rel_diff")?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{}",
                    r.pair,
                    r.n,
                    fmt_f64(r.max_rel_diff),
                    fmt_f64(r.rms_rel_diff)
                )?;
            }
            Ok(())
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(rows).unwrap()),
    }
}

pub fn write_catalog(w: &mut dyn Write, fmt: Format, rows: &[CatalogRow]) -> std::io::Result<()> {
    match fmt {
        Format::Csv => {
            writeln!(w, "name,value_at_zero,moment0,decay")?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{}",
                    r.name,
                    fmt_f64(r.value_at_zero),
                    fmt_f64(r.moment0),
                    r.decay
                )?;
            }
            Ok(())
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(rows).unwrap()),
    }
}

pub fn write_asym(w: &mut dyn Write, fmt: Format, report: &AsymReport) -> std::io::Result<()> {
    match fmt {
        Format::Csv => {
            writeln!(
                w,
                "record,amplitude,exponent,window_lo,window_hi,rms_log_residual"
            )?;
            for r in &report.records {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.record,
                    fmt_f64(r.amplitude),
                    fmt_f64(r.exponent),
                    opt(r.window_lo),
                    opt(r.window_hi),
                    opt(r.rms_log_residual)
                )?;
            }
            writeln!(w, "# note: {}", report.note)
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(report).unwrap()),
    }
}
