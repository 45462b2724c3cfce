//! Static scatter plot of a clustering.

use std::fmt::Write;

use hdi_core::kmeans::Point;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

const COLORS: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

#[derive(Debug, Clone, Copy)]
enum Shape {
    Circle,
    Square,
    Triangle,
    Diamond,
}

const SHAPES: [Shape; 4] = [
    Shape::Circle,
    Shape::Square,
    Shape::Triangle,
    Shape::Diamond,
];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point>) -> Self {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = x;
        for p in points {
            x = (x.0.min(p[0]), x.1.max(p[0]));
            y = (y.0.min(p[1]), y.1.max(p[1]));
        }
        let pad = |(lo, hi): (f64, f64)| {
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        Self {
            x: pad(x),
            y: pad(y),
        }
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn mark(svg: &mut String, shape: Shape, x: f64, y: f64, attrs: &str) {
    let r = 4.0;
    let _ = match shape {
        Shape::Circle => writeln!(
            svg,
            r#"<circle {attrs} cx="{x:.2}" cy="{y:.2}" r="{r:.2}"/>"#
        ),
        Shape::Square => writeln!(
            svg,
            r#"<rect {attrs} x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        Shape::Triangle => writeln!(
            svg,
            r#"<polygon {attrs} points="{x:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
            y - r,
            x - r,
            y + r,
            x + r,
            y + r
        ),
        Shape::Diamond => writeln!(
            svg,
            r#"<polygon {attrs} points="{x:.2},{:.2} {:.2},{y:.2} {x:.2},{:.2} {:.2},{y:.2}"/>"#,
            y - r,
            x + r,
            y + r,
            x - r
        ),
    };
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// HDI on the x axis, GDP on the y axis; one colour and shape per cluster,
/// centroids drawn as crosses.
pub fn scatter(
    title: &str,
    points: &[Point],
    assignments: &[usize],
    centroids: &[Point],
) -> String {
    let frame = Frame::fit(points.iter().chain(centroids).copied());
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );

    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(svg, r#"<g class="axes" stroke="black" fill="none">"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#
    );
    svg.push_str("</g>\n");
    let _ = writeln!(svg, r#"<g class="ticks" fill="black">"#);
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = frame.x.0 + t * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + t * (frame.y.1 - frame.y.0);
        let (px, py) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.2}</text>"#,
            y0 + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.2}</text>"#,
            x0 - 8.0,
            py + 4.0
        );
    }
    svg.push_str("</g>\n");
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">HDI</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">GDP</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    let _ = writeln!(svg, r#"<g class="points" fill-opacity="0.75">"#);
    for (p, &c) in points.iter().zip(assignments) {
        let attrs = format!(
            r#"class="point" data-cluster="{c}" fill="{}""#,
            COLORS[c % COLORS.len()]
        );
        mark(
            &mut svg,
            SHAPES[c % SHAPES.len()],
            frame.px(p[0]),
            frame.py(p[1]),
            &attrs,
        );
    }
    svg.push_str("</g>\n");

    let _ = writeln!(
        svg,
        r#"<g class="centroids" stroke="black" stroke-width="2.5">"#
    );
    for (c, p) in centroids.iter().enumerate() {
        let (x, y) = (frame.px(p[0]), frame.py(p[1]));
        let _ = writeln!(
            svg,
            r#"<path class="centroid" data-cluster="{c}" d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}"/>"#,
            x - 7.0,
            y - 7.0,
            x + 7.0,
            y + 7.0,
            x - 7.0,
            y + 7.0,
            x + 7.0,
            y - 7.0
        );
    }
    svg.push_str("</g>\n");

    let _ = writeln!(svg, r#"<g class="legend">"#);
    for c in 0..centroids.len() {
        let y = TOP + 10.0 + 22.0 * c as f64;
        let x = WIDTH - RIGHT + 25.0;
        let attrs = format!(r#"fill="{}""#, COLORS[c % COLORS.len()]);
        mark(&mut svg, SHAPES[c % SHAPES.len()], x, y, &attrs);
        let size = assignments.iter().filter(|&&a| a == c).count();
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">cluster {} (n={size})</text>"#,
            x + 12.0,
            y + 4.0,
            c + 1
        );
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}
