//! Self-contained SVG log-log charts for convergence tables.

use crate::analysis::ConvergenceTable;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const LABELS: [&str; 4] = ["err_u_l2", "err_v_l2", "err_u_h1", "err_v_h1"];

/// Renders log10(h) vs log10(error) for the four error columns.
/// Non-positive errors (exact reproductions) are skipped.
pub fn loglog_svg(table: &ConvergenceTable, title: &str) -> String {
    let series: Vec<Vec<(f64, f64)>> = (0..4)
        .map(|s| {
            table
                .rows
                .iter()
                .filter_map(|row| {
                    let e = match s {
                        0 => row.report.err_u_l2,
                        1 => row.report.err_v_l2,
                        2 => row.report.err_u_h1,
                        _ => row.report.err_v_h1,
                    };
                    (e > 0.0).then(|| (row.report.h.log10(), e.log10()))
                })
                .collect()
        })
        .collect();

    let points: Vec<(f64, f64)> = series.iter().flatten().copied().collect();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if points.is_empty() {
        x_min = -1.0;
        x_max = 0.0;
        y_min = -1.0;
        y_max = 0.0;
    }
    if x_max - x_min < 1e-9 {
        x_max = x_min + 1.0;
    }
    if y_max - y_min < 1e-9 {
        y_max = y_min + 1.0;
    }

    let sx = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));

    // axes
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{cx}\" y=\"{ly}\" text-anchor=\"middle\" font-size=\"12\">log10(h)</text>\n\
         <text x=\"16\" y=\"{cy}\" text-anchor=\"middle\" font-size=\"12\" \
          transform=\"rotate(-90 16 {cy})\">log10(error)</text>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
        cx = WIDTH / 2.0,
        ly = HEIGHT - 16.0,
        cy = HEIGHT / 2.0,
    ));

    // integer ticks
    let mut x_tick = x_min.ceil();
    while x_tick <= x_max {
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{b}\" x2=\"{x}\" y2=\"{b2}\" stroke=\"black\"/>\n\
             <text x=\"{x}\" y=\"{ty}\" text-anchor=\"middle\" font-size=\"10\">{x_tick}</text>\n",
            x = sx(x_tick),
            b = HEIGHT - MARGIN,
            b2 = HEIGHT - MARGIN + 5.0,
            ty = HEIGHT - MARGIN + 18.0,
        ));
        x_tick += 1.0;
    }
    let mut y_tick = y_min.ceil();
    while y_tick <= y_max {
        svg.push_str(&format!(
            "<line x1=\"{m}\" y1=\"{y}\" x2=\"{m2}\" y2=\"{y}\" stroke=\"black\"/>\n\
             <text x=\"{tx}\" y=\"{y}\" text-anchor=\"end\" font-size=\"10\" dy=\"3\">{y_tick}</text>\n",
            m = MARGIN,
            m2 = MARGIN - 5.0,
            y = sy(y_tick),
            tx = MARGIN - 8.0,
        ));
        y_tick += 1.0;
    }

    for (s, pts) in series.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let path: Vec<String> = pts
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                format!(
                    "{}{:.2},{:.2}",
                    if i == 0 { "M" } else { "L" },
                    sx(x),
                    sy(y)
                )
            })
            .collect();
        svg.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            path.join(" "),
            COLORS[s]
        ));
        for &(x, y) in pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\"/>\n",
                sx(x),
                sy(y),
                COLORS[s]
            ));
        }
        // legend
        let ly = MARGIN + 16.0 * s as f64;
        svg.push_str(&format!(
            "<rect x=\"{lx}\" y=\"{ry}\" width=\"10\" height=\"10\" fill=\"{c}\"/>\n\
             <text x=\"{tx}\" y=\"{ty}\" font-size=\"11\">{label}</text>\n",
            lx = WIDTH - MARGIN - 110.0,
            ry = ly - 9.0,
            c = COLORS[s],
            tx = WIDTH - MARGIN - 95.0,
            ty = ly,
            label = LABELS[s],
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
