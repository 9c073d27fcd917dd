//! CSV and SVG rendering of experiment rows.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::experiment::ExperimentRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

pub const CSV_HEADER: &str = "m,n,sis_count,games,mean,std,seed";

/// Formats `x` with 12 significant digits, like C's `%.12g`.
pub fn format_sig12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn render_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.sis_count,
            r.games,
            format_sig12(r.mean),
            format_sig12(r.std),
            r.seed
        );
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line chart of mean row value against SIS count, one polyline per size.
pub fn render_svg(rows: &[ExperimentRow]) -> String {
    let mut series: BTreeMap<(usize, usize), Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        series.entry((r.m, r.n)).or_default().push((r.sis_count as f64, r.mean));
    }
    let xs = rows.iter().map(|r| r.sis_count as f64);
    let ys = rows.iter().map(|r| r.mean);
    let (x_lo, x_hi) = padded_range(xs);
    let (y_lo, y_hi) = padded_range(ys);
    let px = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">number of SISes</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 18 {})">mean row value</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for k in (x_lo.ceil() as i64)..=(x_hi.floor() as i64) {
        let x = px(k as f64);
        let _ = writeln!(svg, r#"<text x="{x:.1}" y="{}" text-anchor="middle" font-size="11">{k}</text>"#, bottom + 16.0);
    }
    for y in [y_lo, (y_lo + y_hi) / 2.0, y_hi] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.1}" text-anchor="end" font-size="11">{:.3}</text>"#,
            left - 6.0,
            py(y) + 4.0,
            y
        );
    }
    for (i, ((m, n), points)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = top + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            right - 70.0,
            right - 50.0
        );
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="12">{m}x{n}</text>"#, right - 45.0, ly + 4.0);
    }
    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Writes `rows` to `path` in the given format. Nothing is written when
/// `rows` is empty.
pub fn emit_outputs(rows: &[ExperimentRow], format: OutputFormat, path: &Path) -> Result<()> {
    if rows.is_empty() {
        bail!("no experiment rows to write");
    }
    let text = match format {
        OutputFormat::Csv => render_csv(rows),
        OutputFormat::Svg => render_svg(rows),
    };
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(m: usize, n: usize, k: usize, mean: f64) -> ExperimentRow {
        ExperimentRow { m, n, sis_count: k, games: 3, mean, std: 0.125, seed: 42 }
    }

    #[test]
    fn sig12_matches_printf_g() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig12(-19.0 / 3.0), "-6.33333333333");
        assert_eq!(format_sig12(0.5), "0.5");
        assert_eq!(format_sig12(1.5e-7), "1.5e-07");
        assert_eq!(format_sig12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_sig12(0.0001234), "0.0001234");
    }

    #[test]
    fn csv_has_one_line_per_row() {
        let rows: Vec<_> = (1..=4).map(|k| row(4, 4, k, 0.5 + k as f64 / 10.0)).collect();
        let csv = render_csv(&rows);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "4,4,1,3,0.6,0.125,42");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn svg_has_a_polyline_per_size() {
        let rows = vec![row(4, 4, 1, 0.6), row(4, 4, 2, 0.7), row(6, 6, 1, 0.65), row(6, 6, 2, 0.8)];
        assert_eq!(render_svg(&rows).matches("<polyline").count(), 2);
    }

    #[test]
    fn empty_rows_write_nothing() {
        let dir = std::env::temp_dir().join(format!("seslo-empty-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        assert!(emit_outputs(&[], OutputFormat::Csv, &path).is_err());
        assert!(!path.exists());
    }
}
