//! Self-contained SVG charts: grouped bars, heat maps and box plots.
//!
//! Output uses only inline attributes and the generic `sans-serif` family so
//! files render without any external asset.

use std::fmt::Write;

use wepbench_core::stats::{quantile, significance_stars};

const PALETTE: [&str; 8] = ["#4C72B0", "#DD8452", "#55A868", "#C44E52", "#8172B3", "#937860", "#DA8BC3", "#8C8C8C"];
const FONT: &str = r#"font-family="sans-serif""#;

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn colour(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn open(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15" {FONT}>{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

fn legend(out: &mut String, x: f64, y: f64, names: &[String]) {
    for (i, name) in names.iter().enumerate() {
        let ly = y + i as f64 * 18.0;
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="12" height="12" fill="{}"/>"#, ly - 10.0, colour(i));
        let _ = writeln!(out, r#"<text x="{}" y="{ly}" font-size="12" {FONT}>{}</text>"#, x + 18.0, escape(name));
    }
}

/// Y axis from 0 to `max` with gridlines every `step`.
fn y_axis(out: &mut String, left: f64, right: f64, top: f64, bottom: f64, max: f64, step: f64, label: &str) {
    let mut v = 0.0;
    while v <= max + 1e-9 {
        let y = bottom - (bottom - top) * v / max;
        let _ = writeln!(out, r##"<line x1="{left}" y1="{y:.1}" x2="{right}" y2="{y:.1}" stroke="#e0e0e0"/>"##);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end" font-size="11" {FONT}>{v}</text>"#,
            left - 6.0,
            y + 4.0
        );
        v += step;
    }
    let _ = writeln!(out, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#);
    let mid = (top + bottom) / 2.0;
    let _ = writeln!(
        out,
        r#"<text x="16" y="{mid}" transform="rotate(-90 16 {mid})" text-anchor="middle" font-size="12" {FONT}>{}</text>"#,
        escape(label)
    );
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub value: f64,
    /// Drawn as a dashed line across the bar.
    pub baseline: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarGroup {
    pub label: String,
    /// One bar per series, in series order; `None` leaves a gap.
    pub bars: Vec<Option<Bar>>,
    /// Significance marker printed above the group.
    pub stars: String,
}

/// Grouped bar chart on a 0 to 100 scale.
pub fn bar_chart(title: &str, y_label: &str, series: &[String], groups: &[BarGroup]) -> String {
    let (left, top, legend_w) = (60.0, 40.0, 150.0);
    let bar_w = 22.0;
    let group_w = bar_w * series.len().max(1) as f64 + 30.0;
    let plot_w = group_w * groups.len().max(1) as f64;
    let (width, height) = (left + plot_w + legend_w, 380.0);
    let bottom = height - 70.0;
    let mut out = String::new();
    open(&mut out, width, height, title);
    y_axis(&mut out, left, left + plot_w, top, bottom, 100.0, 20.0, y_label);
    let scale = |v: f64| bottom - (bottom - top) * v.clamp(0.0, 100.0) / 100.0;

    for (g, group) in groups.iter().enumerate() {
        let gx = left + g as f64 * group_w + 15.0;
        for (s, bar) in group.bars.iter().enumerate() {
            let Some(bar) = bar else { continue };
            let x = gx + s as f64 * bar_w;
            let y = scale(bar.value);
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{}" height="{:.1}" fill="{}"><title>{}: {:.2}</title></rect>"#,
                bar_w - 2.0,
                bottom - y,
                colour(s),
                escape(&series[s]),
                bar.value
            );
            if let Some(b) = bar.baseline {
                let by = scale(b);
                let _ = writeln!(
                    out,
                    r#"<line class="baseline" x1="{:.1}" y1="{by:.1}" x2="{:.1}" y2="{by:.1}" stroke="black" stroke-width="1.5" stroke-dasharray="4 3"/>"#,
                    x - 1.0,
                    x + bar_w - 1.0
                );
            }
        }
        let cx = gx + bar_w * series.len() as f64 / 2.0;
        if !group.stars.is_empty() {
            let top_bar = group.bars.iter().flatten().map(|b| b.value).fold(0.0, f64::max);
            let _ = writeln!(
                out,
                r#"<text class="stars" x="{cx:.1}" y="{:.1}" text-anchor="middle" font-size="13" {FONT}>{}</text>"#,
                scale(top_bar) - 6.0,
                group.stars
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{cx:.1}" y="{}" text-anchor="end" font-size="11" transform="rotate(-30 {cx:.1} {})" {FONT}>{}</text>"#,
            bottom + 16.0,
            bottom + 16.0,
            escape(&group.label)
        );
    }
    legend(&mut out, left + plot_w + 20.0, top + 10.0, series);
    let _ = writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-dasharray="4 3"/>"#,
        left + plot_w + 20.0,
        top + 10.0 + series.len() as f64 * 18.0 - 4.0,
        left + plot_w + 32.0,
        top + 10.0 + series.len() as f64 * 18.0 - 4.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" {FONT}>random baseline</text>"#,
        left + plot_w + 38.0,
        top + 10.0 + series.len() as f64 * 18.0
    );
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatCell {
    pub value: Option<f64>,
    pub p_value: Option<f64>,
}

/// Heat map with one row per label and one column per comparison. Cells show
/// the value and significance stars for their p-value.
pub fn heat_map(title: &str, rows: &[String], columns: &[String], cells: &[Vec<HeatCell>]) -> String {
    let (left, top, cw, ch) = (150.0, 130.0, 86.0, 24.0);
    let width = left + cw * columns.len().max(1) as f64 + 20.0;
    let height = top + ch * rows.len() as f64 + 50.0;
    let max = cells
        .iter()
        .flatten()
        .filter_map(|c| c.value)
        .fold(0.0_f64, f64::max)
        .max(1e-12);
    let mut out = String::new();
    open(&mut out, width, height, title);
    for (j, col) in columns.iter().enumerate() {
        let x = left + cw * (j as f64 + 0.5);
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{}" font-size="11" transform="rotate(-40 {x:.1} {})" {FONT}>{}</text>"#,
            top - 8.0,
            top - 8.0,
            escape(col)
        );
    }
    for (i, row) in rows.iter().enumerate() {
        let y = top + ch * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end" font-size="12" {FONT}>{}</text>"#,
            left - 8.0,
            y + ch * 0.65,
            escape(row)
        );
        for (j, cell) in cells[i].iter().enumerate() {
            let x = left + cw * j as f64;
            let (fill, text, ink) = match cell.value {
                Some(v) => {
                    let t = (v / max).clamp(0.0, 1.0);
                    // white to dark blue
                    let shade = |lo: f64, hi: f64| (lo + (hi - lo) * t).round() as u8;
                    let fill = format!("#{:02x}{:02x}{:02x}", shade(255.0, 8.0), shade(255.0, 48.0), shade(255.0, 107.0));
                    let stars = cell.p_value.map(significance_stars).unwrap_or("");
                    (fill, format!("{v:.3}{stars}"), if t > 0.55 { "white" } else { "black" })
                }
                None => ("#d9d9d9".to_string(), "n/a".to_string(), "black"),
            };
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{cw}" height="{ch}" fill="{fill}" stroke="white"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text class="cell" x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11" fill="{ink}" {FONT}>{text}</text>"#,
                x + cw / 2.0,
                y + ch * 0.65
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{left}" y="{:.1}" font-size="11" {FONT}>* p &lt; 0.10, ** p &lt; 0.05, *** p &lt; 0.01 (Mann-Whitney U)</text>"#,
        top + ch * rows.len() as f64 + 24.0
    );
    out.push_str("</svg>\n");
    out
}

/// Box plots on a 0 to 100 scale: for every category, one box per series.
/// Whiskers reach the furthest point within 1.5 IQR; points beyond are drawn
/// individually.
pub fn box_plot(title: &str, y_label: &str, series: &[String], categories: &[String], data: &[Vec<Vec<f64>>]) -> String {
    let (left, top, legend_w) = (60.0, 40.0, 170.0);
    let box_w = 14.0;
    let group_w = box_w * series.len().max(1) as f64 + 16.0;
    let plot_w = group_w * categories.len().max(1) as f64;
    let (width, height) = (left + plot_w + legend_w, 420.0);
    let bottom = height - 110.0;
    let mut out = String::new();
    open(&mut out, width, height, title);
    y_axis(&mut out, left, left + plot_w, top, bottom, 100.0, 20.0, y_label);
    let scale = |v: f64| bottom - (bottom - top) * v.clamp(0.0, 100.0) / 100.0;

    for (c, cat) in categories.iter().enumerate() {
        let gx = left + c as f64 * group_w + 8.0;
        for (s, values) in data[c].iter().enumerate() {
            if values.is_empty() {
                continue;
            }
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            let (q1, med, q3) = (quantile(&sorted, 0.25), quantile(&sorted, 0.5), quantile(&sorted, 0.75));
            let fence = 1.5 * (q3 - q1);
            let lo = sorted.iter().copied().find(|&v| v >= q1 - fence).unwrap_or(q1);
            let hi = sorted.iter().rev().copied().find(|&v| v <= q3 + fence).unwrap_or(q3);
            let x = gx + s as f64 * box_w;
            let cx = x + (box_w - 2.0) / 2.0;
            let _ = writeln!(out, r#"<g class="box"><title>{} / {}: median {med}</title>"#, escape(cat), escape(&series[s]));
            let _ = writeln!(
                out,
                r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="black"/>"#,
                scale(hi),
                scale(lo)
            );
            let _ = writeln!(
                out,
                r#"<rect x="{x:.1}" y="{:.1}" width="{}" height="{:.1}" fill="{}" stroke="black"/>"#,
                scale(q3),
                box_w - 2.0,
                (scale(q1) - scale(q3)).max(0.5),
                colour(s)
            );
            let _ = writeln!(
                out,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#,
                scale(med),
                x + box_w - 2.0,
                scale(med)
            );
            for &v in sorted.iter().filter(|&&v| v < lo || v > hi) {
                let _ = writeln!(out, r#"<circle cx="{cx:.1}" cy="{:.1}" r="1.8" fill="none" stroke="black"/>"#, scale(v));
            }
            out.push_str("</g>\n");
        }
        let lx = gx + box_w * series.len() as f64 / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{lx:.1}" y="{}" text-anchor="end" font-size="11" transform="rotate(-45 {lx:.1} {})" {FONT}>{}</text>"#,
            bottom + 14.0,
            bottom + 14.0,
            escape(cat)
        );
    }
    legend(&mut out, left + plot_w + 20.0, top + 10.0, series);
    out.push_str("</svg>\n");
    out
}
