//! SVG pictures of Farey–Ford polygons.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::polygon::{EdgeKind, PolygonGeometry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub polygon: String,
    pub circles: String,
    pub guide: String,
    pub labels: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            polygon: "red".into(),
            circles: "#1f4e9c".into(),
            guide: "#888888".into(),
            labels: "#222222".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvgOptions {
    /// Pixels spanned by the window `[α, β]`.
    pub width: u32,
    pub palette: Palette,
    pub show_circles: bool,
    pub show_labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 1200,
            palette: Palette::default(),
            show_circles: true,
            show_labels: false,
        }
    }
}

const MARGIN: f64 = 20.0;

struct Frame {
    alpha: f64,
    scale: f64,
    top: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.alpha) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.top - y) * self.scale
    }

    fn len(&self, l: f64) -> f64 {
        l * self.scale
    }
}

/// Fixed-precision coordinate, with `-0.000` folded to `0.000`.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Renders the polygon, the dashed line `y = 1/(2Q²)` through the lowest
/// centres, and optionally the Ford circles and fraction labels.
///
/// The output depends only on the arguments, byte for byte.
pub fn render_svg(g: &PolygonGeometry, options: &SvgOptions) -> Result<String> {
    if options.width == 0 {
        return Err(Error::usage("SVG width must be positive"));
    }
    let alpha = g.top_left.x;
    let span = g.top_right.x - alpha;
    let top = g.top_edge.radius.max(0.5);
    let f = Frame {
        alpha,
        scale: options.width as f64 / span,
        top,
    };
    let w = options.width as f64 + 2.0 * MARGIN;
    let h = f.len(top) + 2.0 * MARGIN;
    let p = &options.palette;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="0.5"/>"#,
        num(f.x(alpha)),
        num(f.y(0.0)),
        num(f.x(g.top_right.x)),
        num(f.y(0.0)),
        p.guide
    );
    if options.show_circles {
        let _ = writeln!(s, r#"<g fill="none" stroke="{}" stroke-width="0.75">"#, p.circles);
        for c in &g.circles {
            let o = c.center_f64();
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                num(f.x(o.x)),
                num(f.y(o.y)),
                num(f.len(c.radius_f64()))
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let q = g.order as f64;
    let delta = 0.5 / (q * q);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="0.75" stroke-dasharray="6 4"/>"#,
        num(f.x(alpha)),
        num(f.y(delta)),
        num(f.x(g.top_right.x)),
        num(f.y(delta)),
        p.guide
    );
    let _ = writeln!(
        s,
        r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.5" stroke-linejoin="round"/>"#,
        polygon_path(g, &f),
        p.polygon
    );
    if options.show_labels {
        let _ = writeln!(
            s,
            r#"<g font-family="sans-serif" font-size="10" text-anchor="middle" fill="{}">"#,
            p.labels
        );
        for (fr, v) in g.fractions.iter().zip(&g.vertices) {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}">{}</text>"#,
                num(f.x(v.x)),
                num(f.y(0.0) + 12.0),
                fr
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn polygon_path(g: &PolygonGeometry, f: &Frame) -> String {
    let pt = |p: Point| format!("{} {}", num(f.x(p.x)), num(f.y(p.y)));
    let first = g.vertices[0];
    let last = *g.vertices.last().expect("at least two vertices");
    let mut d = format!("M {}", pt(g.top_left));
    if first != g.top_left {
        d += &format!(" L {}", pt(first));
    }
    for (i, v) in g.vertices.iter().enumerate().skip(1) {
        match g.edges {
            EdgeKind::Euclidean => d += &format!(" L {}", pt(*v)),
            EdgeKind::Hyperbolic => {
                let r = num(f.len(g.arcs[i - 1].radius));
                // left to right over the top is clockwise on screen
                d += &format!(" A {r} {r} 0 0 1 {}", pt(*v));
            }
        }
    }
    if last != g.top_right {
        d += &format!(" L {}", pt(g.top_right));
    }
    let r = num(f.len(g.top_edge.radius));
    d += &format!(" A {r} {r} 0 0 0 {} Z", pt(g.top_left));
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::build_polygon;
    use crate::rational::RationalInterval;

    fn order_5(edges: EdgeKind) -> PolygonGeometry {
        build_polygon(5, RationalInterval::unit(), edges).unwrap()
    }

    #[test]
    fn order_5_counts() {
        for edges in [EdgeKind::Euclidean, EdgeKind::Hyperbolic] {
            let svg = render_svg(&order_5(edges), &SvgOptions::default()).unwrap();
            assert_eq!(svg.matches("<circle").count(), 13);
            assert_eq!(svg.matches("<path").count(), 1);
            assert!(svg.contains(r#"Z" fill="none" stroke="red""#));
        }
        let svg = render_svg(&order_5(EdgeKind::Euclidean), &SvgOptions::default()).unwrap();
        let path = svg.split("<path d=\"").nth(1).unwrap().split('"').next().unwrap();
        // 11 bottom vertices after the move to the top-left corner, which is O_1 here
        assert_eq!(path.matches(" L ").count(), 10);
    }

    #[test]
    fn options() {
        let g = order_5(EdgeKind::Hyperbolic);
        let off = SvgOptions {
            show_circles: false,
            ..Default::default()
        };
        assert_eq!(render_svg(&g, &off).unwrap().matches("<circle").count(), 0);
        let zero = SvgOptions {
            width: 0,
            ..Default::default()
        };
        assert!(matches!(render_svg(&g, &zero), Err(Error::Usage(_))));
        let labels = SvgOptions {
            show_labels: true,
            ..Default::default()
        };
        assert_eq!(render_svg(&g, &labels).unwrap().matches("<text").count(), 11);
    }

    #[test]
    fn deterministic() {
        let i: RationalInterval = "1/3:3/4".parse().unwrap();
        let g = build_polygon(17, i, EdgeKind::Hyperbolic).unwrap();
        let a = render_svg(&g, &SvgOptions::default()).unwrap();
        let b = render_svg(&build_polygon(17, i, EdgeKind::Hyperbolic).unwrap(), &SvgOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(" A "));
    }
}
