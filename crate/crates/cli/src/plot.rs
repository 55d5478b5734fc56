use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::grid::GridOutcome;
use crate::CliError;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 45.0;
const Y_MIN: f64 = -0.25;
const Y_MAX: f64 = 1.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Per-strategy series of windowed kappa over stream steps (already
/// averaged over seeds).
pub struct KappaSeries {
    pub strategy: String,
    pub values: Vec<f64>,
}

fn x_of(step: usize, len: usize) -> f64 {
    let span = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    MARGIN_LEFT + span * step as f64 / (len.max(2) - 1) as f64
}

fn y_of(kappa: f64) -> f64 {
    let clamped = kappa.clamp(Y_MIN, Y_MAX);
    let span = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    MARGIN_TOP + span * (Y_MAX - clamped) / (Y_MAX - Y_MIN)
}

/// Render kappa-over-steps curves with one vertical marker per drift
/// boundary. Pure string assembly; no rendering dependency.
pub fn render_kappa_svg(
    title: &str,
    series: &[KappaSeries],
    boundaries: &[usize],
    stream_len: usize,
) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14">{title}</text>"#,
        MARGIN_LEFT
    );

    // Axes and horizontal grid lines.
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    for tick in [-0.25, 0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = y_of(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#dddddd" stroke-width="1"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{tick}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    let y_axis_bottom = y_of(Y_MIN);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{}" x2="{x0}" y2="{y_axis_bottom}" stroke="black" stroke-width="1"/>"#,
        y_of(Y_MAX)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y_axis_bottom}" x2="{x1}" y2="{y_axis_bottom}" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">stream step</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {})">windowed kappa</text>"#,
        (y_of(Y_MAX) + y_axis_bottom) / 2.0,
        (y_of(Y_MAX) + y_axis_bottom) / 2.0
    );

    // Drift boundaries.
    for &b in boundaries {
        let x = x_of(b, stream_len);
        let _ = writeln!(
            svg,
            r##"<line class="drift-marker" x1="{x}" y1="{}" x2="{x}" y2="{y_axis_bottom}" stroke="#888888" stroke-width="1" stroke-dasharray="5,4"/>"##,
            y_of(Y_MAX)
        );
    }

    // Kappa curves, downsampled to keep the file small.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let stride = (s.values.len() / 1500).max(1);
        let mut points = String::new();
        for (step, &v) in s.values.iter().enumerate() {
            if step % stride == 0 || step + 1 == s.values.len() {
                let _ = write!(points, "{:.2},{:.2} ", x_of(step, stream_len), y_of(v));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let ly = MARGIN_TOP + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/>"#,
            x1 + 10.0,
            x1 + 34.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            x1 + 40.0,
            ly + 4.0,
            s.strategy
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Average the windowed kappa per strategy over seeds and render the
/// scenario plot.
pub fn plot_outcome(outcome: &GridOutcome, out_path: &Path) -> Result<(), CliError> {
    let mut grouped: BTreeMap<String, Vec<&crate::grid::CellResult>> = BTreeMap::new();
    for cell in &outcome.results {
        grouped.entry(cell.strategy.clone()).or_default().push(cell);
    }
    let mut series = Vec::new();
    let mut stream_len = 0;
    for (strategy, runs) in grouped {
        let len = runs.iter().map(|r| r.trace.len()).min().unwrap_or(0);
        if len == 0 {
            continue;
        }
        stream_len = stream_len.max(len);
        let mut mean = vec![0.0; len];
        for run in &runs {
            for (i, s) in run.trace.steps[..len].iter().enumerate() {
                mean[i] += s.kappa;
            }
        }
        for v in &mut mean {
            *v /= runs.len() as f64;
        }
        series.push(KappaSeries {
            strategy,
            values: mean,
        });
    }
    if series.is_empty() {
        return Err(CliError::Internal("no completed runs to plot".into()));
    }
    let title = format!("windowed kappa over the {} stream", outcome.scenario_name);
    let svg = render_kappa_svg(&title, &series, &outcome.boundaries, stream_len);
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(out_path, svg)?;
    Ok(())
}
