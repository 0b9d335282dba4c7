//! Static SVG histogram. The bucket data is repeated in a `<desc>` table so
//! the file stays readable without a renderer.

use std::fmt::Write;

use twins_core::models::ExperimentSummary;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;

pub fn histogram(summary: &ExperimentSummary) -> String {
    let buckets = &summary.histogram;
    let tallest = buckets.iter().map(|b| b.count).max().unwrap_or(0).max(1) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let bar_w = plot_w / buckets.len().max(1) as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        "<title>{} over {} trials</title>",
        escape(&summary.statistic),
        summary.trials
    );
    out.push_str("<desc>\nlower,upper,count\n");
    for b in buckets {
        let _ = writeln!(out, "{},{},{}", b.lower, b.upper, b.count);
    }
    out.push_str("</desc>\n");
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    for (i, b) in buckets.iter().enumerate() {
        let h = plot_h * b.count as f64 / tallest;
        let x = MARGIN + i as f64 * bar_w;
        let y = MARGIN + plot_h - h;
        let _ = writeln!(
            out,
            r##"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{h:.2}" fill="#4a78b5"><title>[{}, {}): {}</title></rect>"##,
            (bar_w - 1.0).max(0.5),
            b.lower,
            b.upper,
            b.count
        );
    }
    let base = MARGIN + plot_h;
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#,
        MARGIN + plot_w
    );
    if let (Some(first), Some(last)) = (buckets.first(), buckets.last()) {
        let ty = base + 18.0;
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{ty}" font-size="12">{:.4}</text>"#,
            first.lower
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ty}" font-size="12" text-anchor="end">{:.4}</text>"#,
            MARGIN + plot_w,
            last.upper
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="13">mean {:.4}, sd {:.4}, max count {}</text>"#,
        MARGIN - 16.0,
        summary.mean,
        summary.std_dev,
        tallest as usize
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
