//! Static log-log SVG of a convergence run.

use std::fmt::Write as _;

use crate::lab::ConvergenceRecord;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 64.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    points: Vec<(f64, f64)>,
}

fn positive_logs(records: &[ConvergenceRecord], pick: fn(&ConvergenceRecord) -> f64) -> Vec<(f64, f64)> {
    records
        .iter()
        .filter(|r| r.h_n > 0.0 && pick(r) > 0.0)
        .map(|r| (r.h_n.log10(), pick(r).log10()))
        .collect()
}

/// Plots `(h_n, sup_err)` and `(h_n, η_n)` on log-log axes with a guide line of slope
/// `alpha / 2` through the first `sup_err` point.
pub fn loglog_svg(records: &[ConvergenceRecord], alpha: f64, title: &str) -> String {
    let mut series = vec![
        Series {
            label: "sup_err",
            color: "#1f77b4",
            points: positive_logs(records, |r| r.sup_err),
        },
        Series {
            label: "eta_n",
            color: "#d62728",
            points: positive_logs(records, |r| r.eta_n),
        },
    ];
    if let Some(&(x0, y0)) = series[0].points.first() {
        let x1 = series[0].points.last().map_or(x0, |p| p.0);
        let slope = alpha / 2.0;
        series.push(Series {
            label: "",
            color: "#7f7f7f",
            points: vec![(x0, y0), (x1, y0 + slope * (x1 - x0))],
        });
        series[2].label = "slope α/2";
    }

    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if xmin > xmax {
        (xmin, xmax, ymin, ymax) = (-1.0, 0.0, -1.0, 0.0);
    }
    let (xmin, xmax) = (xmin.floor(), xmax.ceil().max(xmin.floor() + 1.0));
    let (ymin, ymax) = (ymin.floor(), ymax.ceil().max(ymin.floor() + 1.0));
    let sx = |x: f64| MARGIN + (x - xmin) / (xmax - xmin) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - ymin) / (ymax - ymin) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for k in (xmin as i32)..=(xmax as i32) {
        let x = sx(k as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{k}</text>"##,
            MARGIN,
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 18.0
        );
    }
    for k in (ymin as i32)..=(ymax as i32) {
        let y = sy(k as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">1e{k}</text>"##,
            MARGIN,
            WIDTH - MARGIN,
            MARGIN - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">fill distance h_n</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );

    for (i, ser) in series.iter().enumerate() {
        if ser.points.is_empty() {
            continue;
        }
        let path: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = if i == 2 { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
            path.join(" "),
            ser.color
        );
        if i < 2 {
            for &(x, y) in &ser.points {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                    sx(x),
                    sy(y),
                    ser.color
                );
            }
        }
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let lx = WIDTH - MARGIN - 110.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            ser.color,
            lx + 26.0,
            ly + 4.0,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
