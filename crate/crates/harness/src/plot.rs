//! Static SVG line charts of fidelity versus cavity lifetime, one panel per
//! angle case, one colored series per model (full = red, effective = blue,
//! effective_clean = green). Every data row is drawn exactly once as a
//! circle marker on its series.

use crate::error::HarnessError;
use crate::run::ResultRow;
use plotters::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;

fn model_color(model: &str) -> RGBColor {
    match model {
        "full" => RED,
        "effective" => BLUE,
        "effective_clean" => RGBColor(0, 140, 60),
        _ => BLACK,
    }
}

/// Render the rows and return the number of point markers drawn.
pub fn emit_plot(path: &Path, rows: &[ResultRow]) -> Result<usize, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::Config("no rows to plot".into()));
    }
    // group by label, then by model, keep deterministic order
    let mut panels: BTreeMap<&str, BTreeMap<&str, Vec<&ResultRow>>> = BTreeMap::new();
    for r in rows {
        panels
            .entry(r.label.as_str())
            .or_default()
            .entry(r.model.as_str())
            .or_default()
            .push(r);
    }
    let n_panels = panels.len();
    let cols = if n_panels > 1 { 2 } else { 1 };
    let grid_rows = n_panels.div_ceil(cols);

    let width = 640 * cols as u32;
    let height = 480 * grid_rows as u32;
    let path_str = path.display().to_string();
    let root = SVGBackend::new(&path_str, (width, height)).into_drawing_area();
    root.fill(&WHITE)
        .map_err(|e| HarnessError::Plot(e.to_string()))?;
    let areas = root.split_evenly((grid_rows, cols));

    let mut points_drawn = 0usize;
    for (panel_idx, (label, by_model)) in panels.iter().enumerate() {
        let area = &areas[panel_idx];
        let all: Vec<&ResultRow> = by_model.values().flatten().copied().collect();
        let x_min = all.iter().map(|r| r.kappa_inv_us).fold(f64::INFINITY, f64::min);
        let x_max = all
            .iter()
            .map(|r| r.kappa_inv_us)
            .fold(f64::NEG_INFINITY, f64::max);
        let y_min = all.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min);
        let y_max = all
            .iter()
            .map(|r| r.fidelity)
            .fold(f64::NEG_INFINITY, f64::max);
        let x_pad = ((x_max - x_min) * 0.05).max(1.0);
        let y_pad = ((y_max - y_min) * 0.08).max(1e-4);
        let mut chart = ChartBuilder::on(area)
            .caption(format!("case ({label})"), ("sans-serif", 22))
            .margin(12)
            .x_label_area_size(40)
            .y_label_area_size(60)
            .build_cartesian_2d(
                (x_min - x_pad)..(x_max + x_pad),
                (y_min - y_pad)..(y_max + y_pad),
            )
            .map_err(|e| HarnessError::Plot(e.to_string()))?;
        chart
            .configure_mesh()
            .x_desc("cavity lifetime (us)")
            .y_desc("fidelity")
            .draw()
            .map_err(|e| HarnessError::Plot(e.to_string()))?;
        for (model, series_rows) in by_model {
            let mut pts: Vec<(f64, f64)> = series_rows
                .iter()
                .map(|r| (r.kappa_inv_us, r.fidelity))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let color = model_color(model);
            chart
                .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
                .map_err(|e| HarnessError::Plot(e.to_string()))?
                .label(model.to_string())
                .legend(move |(x, y)| {
                    PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
                });
            chart
                .draw_series(
                    pts.iter()
                        .map(|&(x, y)| Circle::new((x, y), 3, color.filled())),
                )
                .map_err(|e| HarnessError::Plot(e.to_string()))?;
            points_drawn += pts.len();
        }
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .background_style(WHITE.mix(0.85))
            .draw()
            .map_err(|e| HarnessError::Plot(e.to_string()))?;
    }
    root.present().map_err(|e| HarnessError::Plot(e.to_string()))?;
    Ok(points_drawn)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(label: &str, model: &str, kappa: f64, f: f64) -> ResultRow {
        ResultRow {
            scenario_id: format!("{label}-{model}-k{kappa}"),
            model: model.into(),
            label: label.into(),
            kappa_inv_us: kappa,
            alpha: 0.5,
            n_cut: 6,
            dt_ns: 0.01,
            fidelity: f,
            trace_error: 1e-9,
            leakage: 1e-4,
            wall_time_s: 1.0,
        }
    }

    #[test]
    fn plot_references_every_row_once() {
        let mut rows = Vec::new();
        for label in ["a", "b", "c", "d"] {
            for model in ["full", "effective"] {
                for k in [100.0, 300.0, 500.0] {
                    rows.push(row(label, model, k, 0.98 + 0.01 * (k / 500.0)));
                }
            }
        }
        let dir = std::env::temp_dir().join("catphase_plot_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fig.svg");
        let drawn = emit_plot(&path, &rows).unwrap();
        assert_eq!(drawn, rows.len());
        let svg = std::fs::read_to_string(&path).unwrap();
        let circles = svg.matches("<circle").count();
        assert_eq!(circles, rows.len(), "one marker per row");
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn empty_rows_rejected() {
        let path = std::env::temp_dir().join("catphase_empty.svg");
        assert!(emit_plot(&path, &[]).is_err());
    }
}
