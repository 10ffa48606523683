//! Training-curve SVG: trailing win rate and mean steps-to-win per episode.

use std::fmt::Write as _;
use std::path::Path;

use super::metrics::{read_metrics, MetricsRow};
use super::HarnessError;

const WIDTH: f64 = 760.0;
const PANEL_HEIGHT: f64 = 280.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

struct Panel<'a> {
    top: f64,
    title: &'a str,
    y_label: &'a str,
    y_max: f64,
    color: &'a str,
    id: &'a str,
}

impl Panel<'_> {
    fn plot_width() -> f64 {
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    }

    fn plot_height() -> f64 {
        PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    }

    fn x(&self, episode: f64, x_max: f64) -> f64 {
        MARGIN_LEFT + episode / x_max * Self::plot_width()
    }

    fn y(&self, value: f64) -> f64 {
        self.top + MARGIN_TOP + (1.0 - value / self.y_max) * Self::plot_height()
    }

    fn draw(&self, svg: &mut String, x_max: f64, points: impl Iterator<Item = (f64, Option<f64>)>) {
        let (x0, x1) = (MARGIN_LEFT, MARGIN_LEFT + Self::plot_width());
        let (y0, y1) = (self.top + MARGIN_TOP + Self::plot_height(), self.top + MARGIN_TOP);
        let _ = writeln!(svg, r#"<g id="{}">"#, self.id);
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            self.top + 18.0,
            self.title
        );
        let _ = writeln!(
            svg,
            r#"<line class="axis" x1="{x0:.1}" y1="{y0:.1}" x2="{x1:.1}" y2="{y0:.1}" stroke="black"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<line class="axis" x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{y1:.1}" stroke="black"/>"#
        );
        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let (tx, ty) = (x0 + f * (x1 - x0), y0 - f * (y0 - y1));
            let _ = writeln!(
                svg,
                r#"<text x="{tx:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
                y0 + 14.0,
                fmt_tick(f * x_max)
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{}</text>"#,
                x0 - 6.0,
                ty + 3.0,
                fmt_tick(f * self.y_max)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">episode</text>"#,
            (x0 + x1) / 2.0,
            y0 + 34.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            self.y_label
        );

        // Missing values break the line into separate segments.
        let mut segment: Vec<(f64, f64)> = Vec::new();
        let flush = |seg: &mut Vec<(f64, f64)>, svg: &mut String| {
            if seg.is_empty() {
                return;
            }
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                svg,
                r#"<polyline class="series" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                self.color,
                pts.join(" ")
            );
            seg.clear();
        };
        for (episode, value) in points {
            match value {
                Some(v) => segment.push((self.x(episode, x_max), self.y(v))),
                None => flush(&mut segment, svg),
            }
        }
        flush(&mut segment, svg);
        let _ = writeln!(svg, "</g>");
    }
}

fn fmt_tick(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

pub fn render_svg(rows: &[MetricsRow]) -> String {
    let x_max = rows.iter().map(|r| r.episode as f64).fold(1.0, f64::max);
    let steps_max = rows
        .iter()
        .filter_map(|r| r.mean_steps_to_win_window)
        .fold(0.0, f64::max)
        .max(1.0)
        .ceil();
    let height = 2.0 * PANEL_HEIGHT;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    Panel {
        top: 0.0,
        title: "Win rate (trailing window)",
        y_label: "win rate",
        y_max: 1.0,
        color: "#1f77b4",
        id: "win-rate",
    }
    .draw(
        &mut svg,
        x_max,
        rows.iter().map(|r| (r.episode as f64, Some(r.win_rate_window))),
    );
    Panel {
        top: PANEL_HEIGHT,
        title: "Mean steps to win (trailing window)",
        y_label: "steps",
        y_max: steps_max,
        color: "#d62728",
        id: "steps-to-win",
    }
    .draw(
        &mut svg,
        x_max,
        rows.iter().map(|r| (r.episode as f64, r.mean_steps_to_win_window)),
    );
    svg.push_str("</svg>\n");
    svg
}

/// Reads a metrics CSV and writes the two-panel SVG.
pub fn plot(metrics_path: impl AsRef<Path>, out_path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let rows = read_metrics(metrics_path)?;
    let out = out_path.as_ref();
    std::fs::write(out, render_svg(&rows)).map_err(|e| HarnessError::io(out, e))
}
