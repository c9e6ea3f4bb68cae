//! Results table CSV: fixed 11-column layout, header row, '.' decimal
//! separator, UTF-8, LF line endings. Floats are written in Rust's shortest
//! round-trip form, so a load after a save reproduces the numbers
//! bit-identically.

use crate::error::HarnessError;
use crate::run::ResultRow;
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: &str =
    "scenario_id,model,label,kappa_inv_us,alpha,n_cut,dt_ns,fidelity,trace_error,leakage,wall_time_s";

pub fn rows_to_string(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.scenario_id,
            r.model,
            r.label,
            r.kappa_inv_us,
            r.alpha,
            r.n_cut,
            r.dt_ns,
            r.fidelity,
            r.trace_error,
            r.leakage,
            r.wall_time_s
        ));
    }
    out
}

pub fn write_rows(path: &Path, rows: &[ResultRow]) -> Result<(), HarnessError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    f.write_all(rows_to_string(rows).as_bytes())
        .map_err(|e| HarnessError::io(path.display().to_string(), e))
}

pub fn parse_rows(text: &str) -> Result<Vec<ResultRow>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, other)) => {
            return Err(HarnessError::CsvFormat {
                line: 1,
                message: format!("unexpected header `{other}`"),
            })
        }
        None => {
            return Err(HarnessError::CsvFormat {
                line: 1,
                message: "empty document".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(HarnessError::CsvFormat {
                line: lineno,
                message: format!("expected 11 fields, got {}", fields.len()),
            });
        }
        let num = |k: usize, name: &str| -> Result<f64, HarnessError> {
            let v = fields[k].parse::<f64>().map_err(|_| HarnessError::CsvFormat {
                line: lineno,
                message: format!("bad {name} `{}`", fields[k]),
            })?;
            if !v.is_finite() {
                return Err(HarnessError::CsvFormat {
                    line: lineno,
                    message: format!("non-finite {name} `{}`", fields[k]),
                });
            }
            Ok(v)
        };
        let n_cut = fields[5]
            .parse::<usize>()
            .map_err(|_| HarnessError::CsvFormat {
                line: lineno,
                message: format!("bad n_cut `{}`", fields[5]),
            })?;
        let row = ResultRow {
            scenario_id: fields[0].to_string(),
            model: fields[1].to_string(),
            label: fields[2].to_string(),
            kappa_inv_us: num(3, "kappa_inv_us")?,
            alpha: num(4, "alpha")?,
            n_cut,
            dt_ns: num(6, "dt_ns")?,
            fidelity: num(7, "fidelity")?,
            trace_error: num(8, "trace_error")?,
            leakage: num(9, "leakage")?,
            wall_time_s: num(10, "wall_time_s")?,
        };
        // row invariants
        if !(0.0..=1.0).contains(&row.fidelity) {
            return Err(HarnessError::CsvFormat {
                line: lineno,
                message: format!("fidelity {} outside [0, 1]", row.fidelity),
            });
        }
        if row.trace_error > 1e-4 {
            return Err(HarnessError::CsvFormat {
                line: lineno,
                message: format!("trace_error {} exceeds 1e-4", row.trace_error),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn load_rows(path: &Path) -> Result<Vec<ResultRow>, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::io(path.display().to_string(), e))?;
    parse_rows(&text)
}
