//! JSON and CSV rendering, and atomic file output.

use std::io::Write;
use std::path::Path;

use symseq_core::NormBounds;

use crate::config::Format;
use crate::error::CliError;
use crate::run::{Output, Record};

/// 17 significant digits, locale-free.
pub fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn render(record: &Record, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(record),
        Format::Csv => to_csv(&record.result),
    }
}

pub fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn flags(b: &NormBounds) -> String {
    if b.flags.is_empty() {
        String::new()
    } else {
        serde_json::to_string(&b.flags).unwrap_or_default()
    }
}

fn label<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn bounds_row(b: &NormBounds) -> Vec<String> {
    vec![
        num(b.lower),
        num(b.upper),
        label(&b.method),
        b.certified.to_string(),
        flags(b),
    ]
}

fn to_csv(out: &Output) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut footer = Vec::new();
    let bounds_header = ["lower", "upper", "method", "certified", "flags"];
    let res = (|| -> csv::Result<()> {
        match out {
            Output::Value { value } => {
                w.write_record(["value"])?;
                w.write_record([num(*value)])?;
            }
            Output::Bounds { bounds } => {
                w.write_record(bounds_header)?;
                w.write_record(bounds_row(bounds))?;
            }
            Output::Multiplier { route, report } => {
                let mut h = bounds_header.to_vec();
                h.push("route");
                w.write_record(h)?;
                let mut r = bounds_row(&report.bounds);
                r.push(label(route));
                w.write_record(r)?;
            }
            Output::Factorization { ratio, cert } => {
                w.write_record(["norm_product", "reference_norm", "ratio", "product_error"])?;
                w.write_record([
                    num(cert.norm_product),
                    num(cert.reference_norm),
                    num(*ratio),
                    num(cert.product_error),
                ])?;
            }
            Output::Growth { curve } => {
                w.write_record(["size", "lower", "upper", "residual"])?;
                for (k, r) in curve.residuals().iter().enumerate() {
                    w.write_record([
                        curve.sizes[k].to_string(),
                        num(curve.values[k]),
                        num(curve.uppers[k]),
                        num(*r),
                    ])?;
                }
                let (a, b) = curve.fit;
                footer.push(format!(
                    "# fit a={} b={} r2={}",
                    num(a),
                    num(b),
                    num(curve.r_squared)
                ));
                if !curve.under_resolved.is_empty() {
                    footer.push(format!("# under_resolved {:?}", curve.under_resolved));
                }
            }
            Output::Upper { upper } => {
                w.write_record(["upper"])?;
                w.write_record([num(*upper)])?;
            }
            Output::Embedding { audit: a } => {
                w.write_record([
                    "lp_lower",
                    "ef_lower",
                    "ratio",
                    "constant",
                    "e_convexity",
                    "f_concavity",
                    "violation",
                ])?;
                w.write_record([
                    num(a.lp_lower),
                    num(a.ef_lower),
                    num(a.ratio),
                    num(a.constant),
                    num(a.e_convexity),
                    num(a.f_concavity),
                    a.violation.to_string(),
                ])?;
            }
            Output::Axioms { audit } => {
                w.write_record(["axiom", "worst", "pass"])?;
                for c in &audit.checks {
                    w.write_record([label(&c.axiom), num(c.worst), c.pass.to_string()])?;
                }
            }
        }
        Ok(())
    })();
    res.map_err(|e| CliError::Usage(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut s = String::from_utf8(bytes).expect("csv output is utf-8");
    for line in footer {
        s.push_str(&line);
        s.push('\n');
    }
    Ok(s)
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(5.0), "5.0000000000000000e0");
        assert_eq!(num(-0.125), "-1.2500000000000000e-1");
        assert_eq!(num(f64::INFINITY), "inf");
        let x = 0.1 + 0.2;
        assert_eq!(num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, "a").unwrap();
        write_atomic(&p, "b").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
