//! Static SVG charts: a scatter of relative nur values against cover counts
//! and per-dataset height profiles.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const JOIN_COLOUR: &str = "#d62728";
const MEET_COLOUR: &str = "#1f77b4";

fn plot_w() -> f64 {
    WIDTH - 2.0 * MARGIN
}

fn plot_h() -> f64 {
    HEIGHT - 2.0 * MARGIN
}

fn y_of(v: f64) -> f64 {
    HEIGHT - MARGIN - v.clamp(0.0, 1.0) * plot_h()
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // axes
    let _ = writeln!(
        out,
        r#"<path d="M{MARGIN} {MARGIN} V{} H{}" stroke="black" fill="none"/>"#,
        HEIGHT - MARGIN,
        WIDTH - MARGIN
    );
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{MARGIN}" y2="{y}" stroke="black"/><text x="{}" y="{}" text-anchor="end">{v:.2}</text>"#,
            MARGIN - 4.0,
            MARGIN - 6.0,
            y + 4.0
        );
    }
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    for (i, (label, colour)) in entries.iter().enumerate() {
        let y = MARGIN + 14.0 * i as f64;
        let x = WIDTH - MARGIN - 110.0;
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{}" width="10" height="10" fill="{colour}"/><text x="{}" y="{}">{}</text>"#,
            y - 9.0,
            x + 14.0,
            y,
            escape(label)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One point per dataset and side; `x` is the cover count on a log scale.
pub struct ScatterPoint {
    pub label: String,
    pub covers: usize,
    pub join_rel: f64,
    pub meet_rel: f64,
}

pub fn scatter(points: &[ScatterPoint]) -> String {
    let mut out = String::new();
    header(&mut out, "relative non-unit rises by number of covers");
    let logs: Vec<f64> = points
        .iter()
        .map(|p| (p.covers.max(1) as f64).log10())
        .collect();
    let lo = logs
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        .floor()
        .min(0.0);
    let hi = logs
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .ceil()
        .max(lo + 1.0);
    let x_of = |l: f64| MARGIN + (l - lo) / (hi - lo) * plot_w();
    for decade in lo as i32..=hi as i32 {
        let x = x_of(decade as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" text-anchor="middle">1e{decade}</text>"#,
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 4.0,
            HEIGHT - MARGIN + 16.0
        );
    }
    for (p, &l) in points.iter().zip(&logs) {
        let x = x_of(l);
        for (v, colour, side) in [
            (p.join_rel, JOIN_COLOUR, "join"),
            (p.meet_rel, MEET_COLOUR, "meet"),
        ] {
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.2}" cy="{:.2}" r="4" fill="{colour}"><title>{} {side} {v:.2}</title></circle>"#,
                y_of(v),
                escape(&p.label)
            );
        }
    }
    legend(&mut out, &[("join", JOIN_COLOUR), ("meet", MEET_COLOUR)]);
    out.push_str("</svg>\n");
    out
}

/// Share of non-unit meet-rises per height of the lower element, one
/// polyline per dataset.
pub fn height_profiles(series: &[(String, Vec<(usize, f64)>)]) -> String {
    const PALETTE: [&str; 8] = [
        MEET_COLOUR,
        "#ff7f0e",
        "#2ca02c",
        JOIN_COLOUR,
        "#9467bd",
        "#8c564b",
        "#e377c2",
        "#7f7f7f",
    ];
    let mut out = String::new();
    header(&mut out, "non-unit meet-rises by height");
    let max_h = series
        .iter()
        .flat_map(|(_, s)| s.iter().map(|&(h, _)| h))
        .max()
        .unwrap_or(0)
        .max(1);
    let x_of = |h: usize| MARGIN + h as f64 / max_h as f64 * plot_w();
    for h in 0..=max_h {
        if max_h <= 20 || h % (max_h / 10) == 0 {
            let x = x_of(h);
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{}" text-anchor="middle">{h}</text>"#,
                HEIGHT - MARGIN + 16.0
            );
        }
    }
    let mut entries = Vec::new();
    for (i, (label, s)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .iter()
            .map(|&(h, v)| format!("{:.2},{:.2}", x_of(h), y_of(v)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"><title>{}</title></polyline>"#,
            pts.join(" "),
            escape(label)
        );
        entries.push((label.as_str(), colour));
    }
    if entries.len() <= 12 {
        legend(&mut out, &entries);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_has_two_points_per_dataset() {
        let pts = vec![
            ScatterPoint {
                label: "a".into(),
                covers: 5,
                join_rel: 0.2,
                meet_rel: 0.2,
            },
            ScatterPoint {
                label: "b<c".into(),
                covers: 1500,
                join_rel: 0.5,
                meet_rel: 0.3,
            },
        ];
        let svg = scatter(&pts);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert!(svg.contains("b&lt;c"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn profile_polyline_per_series() {
        let svg = height_profiles(&[("x".into(), vec![(0, 1.0), (1, 0.0)])]);
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn empty_profiles_still_render() {
        assert!(height_profiles(&[]).starts_with("<svg"));
    }
}
