//! CSV and JSON writers. CSV floats carry 17 significant digits, so every
//! value round-trips exactly.

use std::io::{self, Write};

use birkhoff_core::gauge::SpinVector;
use birkhoff_core::verify::{Field, GridSpec, TimeConvention};
use birkhoff_core::Complex;
use serde::Serialize;

use crate::config::OutputFormat;

pub const SCHEMA_VERSION: u32 = 1;
pub const NLS_HEADER: &str = "x,t,re_u,im_u,abs_u";
pub const HM_HEADER: &str = "x,t,s1,s2,s3,norm_err";

fn csv_row(w: &mut impl Write, values: &[f64]) -> io::Result<()> {
    let mut first = true;
    for v in values {
        if !first {
            w.write_all(b",")?;
        }
        write!(w, "{v:.16e}")?;
        first = false;
    }
    w.write_all(b"\n")
}

pub fn write_nls_csv(w: &mut impl Write, u: &Field<Complex>) -> io::Result<()> {
    writeln!(w, "{NLS_HEADER}")?;
    for ((x, t), v) in u.grid().nodes().zip(u.values()) {
        csv_row(w, &[x, t, v.re, v.im, v.norm()])?;
    }
    Ok(())
}

pub fn write_hm_csv(w: &mut impl Write, s: &Field<SpinVector>) -> io::Result<()> {
    writeln!(w, "{HM_HEADER}")?;
    for ((x, t), v) in s.grid().nodes().zip(s.values()) {
        csv_row(w, &[x, t, v.s1, v.s2, v.s3, v.norm_error()])?;
    }
    Ok(())
}

#[derive(Serialize)]
struct NlsSample {
    x: f64,
    t: f64,
    re_u: f64,
    im_u: f64,
    abs_u: f64,
}

#[derive(Serialize)]
struct HmSample {
    x: f64,
    t: f64,
    s1: f64,
    s2: f64,
    s3: f64,
    norm_err: f64,
}

#[derive(Serialize)]
struct FieldDocument<'a, T> {
    schema_version: u32,
    field: &'static str,
    grid: &'a GridSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_convention: Option<TimeConvention>,
    samples: Vec<T>,
}

pub fn write_nls_json(w: &mut impl Write, u: &Field<Complex>) -> io::Result<()> {
    let samples = u
        .grid()
        .nodes()
        .zip(u.values())
        .map(|((x, t), v)| NlsSample {
            x,
            t,
            re_u: v.re,
            im_u: v.im,
            abs_u: v.norm(),
        })
        .collect();
    write_json(
        w,
        &FieldDocument {
            schema_version: SCHEMA_VERSION,
            field: "nls",
            grid: u.grid(),
            time_convention: None,
            samples,
        },
    )
}

pub fn write_hm_json(
    w: &mut impl Write,
    s: &Field<SpinVector>,
    convention: TimeConvention,
) -> io::Result<()> {
    let samples = s
        .grid()
        .nodes()
        .zip(s.values())
        .map(|((x, t), v)| HmSample {
            x,
            t,
            s1: v.s1,
            s2: v.s2,
            s3: v.s3,
            norm_err: v.norm_error(),
        })
        .collect();
    write_json(
        w,
        &FieldDocument {
            schema_version: SCHEMA_VERSION,
            field: "hm",
            grid: s.grid(),
            time_convention: Some(convention),
            samples,
        },
    )
}

pub fn write_nls(w: &mut impl Write, u: &Field<Complex>, format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_nls_csv(w, u),
        OutputFormat::Json => write_nls_json(w, u),
    }
}

pub fn write_hm(
    w: &mut impl Write,
    s: &Field<SpinVector>,
    format: OutputFormat,
    convention: TimeConvention,
) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_hm_csv(w, s),
        OutputFormat::Json => write_hm_json(w, s, convention),
    }
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json(w: &mut impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    w.write_all(b"\n")
}
