//! Deterministic SVG 1.1 figures.
//!
//! The canvas is 800 x 800 user units. The bounding box of every drawn point,
//! disk and ellipse is scaled uniformly into `[40, 760]^2` and centered. Data
//! y points up, SVG y points down: `X = 400 + s (x - cx)`, `Y = 400 - s (y - cy)`
//! with `(cx, cy)` the box center and `s = 720 / max(width, height)`. Every
//! coordinate is printed with three decimals.

use std::fmt::Write as _;

use mmp_core::matching::Color;
use mmp_core::{Disk, EllipseRegion, Point};

pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub points: Vec<(Point, Option<Color>)>,
    pub segments: Vec<(Point, Point)>,
    pub disks: Vec<Disk>,
    pub ellipses: Vec<EllipseRegion>,
    pub witness: Option<Point>,
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

struct Frame {
    cx: f64,
    cy: f64,
    scale: f64,
}

impl Frame {
    fn fit(scene: &Scene) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: Point, r: f64| {
            lo = Point::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Point::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        for &(p, _) in &scene.points {
            grow(p, 0.0);
        }
        for d in &scene.disks {
            grow(d.center, d.radius);
        }
        for e in scene.ellipses.iter().filter(|e| e.is_well_formed()) {
            grow(e.focus_a.midpoint(e.focus_b), e.semimajor);
        }
        if let Some(w) = scene.witness {
            grow(w, 0.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        let scale = if span > 0.0 && span.is_finite() { (CANVAS - 2.0 * MARGIN) / span } else { 1.0 };
        let (cx, cy) = if lo.x.is_finite() { ((lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0) } else { (0.0, 0.0) };
        Self { cx, cy, scale }
    }

    fn x(&self, x: f64) -> String {
        num(CANVAS / 2.0 + self.scale * (x - self.cx))
    }

    fn y(&self, y: f64) -> String {
        num(CANVAS / 2.0 - self.scale * (y - self.cy))
    }

    fn len(&self, d: f64) -> String {
        num(self.scale * d)
    }
}

pub fn render(scene: &Scene) -> String {
    let f = Frame::fit(scene);
    let mut out = String::new();
    let c = CANVAS as u32;
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#
    );
    let _ = writeln!(out, r#"<rect width="{c}" height="{c}" fill="white"/>"#);
    for d in &scene.disks {
        let _ = writeln!(
            out,
            r##"<circle class="disk" cx="{}" cy="{}" r="{}" fill="#4a7ab8" fill-opacity="0.08" stroke="#4a7ab8"/>"##,
            f.x(d.center.x),
            f.y(d.center.y),
            f.len(d.radius)
        );
    }
    for e in scene.ellipses.iter().filter(|e| e.is_well_formed()) {
        let center = e.focus_a.midpoint(e.focus_b);
        let half_focal = e.focus_a.distance(e.focus_b) / 2.0;
        let minor = (e.semimajor * e.semimajor - half_focal * half_focal).max(0.0).sqrt();
        let axis = e.focus_b - e.focus_a;
        // the y flip mirrors angles
        let angle = -axis.y.atan2(axis.x).to_degrees();
        let (x, y) = (f.x(center.x), f.y(center.y));
        let _ = writeln!(
            out,
            r##"<ellipse class="ellipse" cx="{x}" cy="{y}" rx="{}" ry="{}" transform="rotate({} {x} {y})" fill="none" stroke="#8a8a8a" stroke-dasharray="4 3"/>"##,
            f.len(e.semimajor),
            f.len(minor),
            num(angle)
        );
    }
    for &(a, b) in &scene.segments {
        let _ = writeln!(
            out,
            r#"<line class="segment" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
            f.x(a.x),
            f.y(a.y),
            f.x(b.x),
            f.y(b.y)
        );
    }
    for &(p, color) in &scene.points {
        let (class, fill) = match color {
            Some(Color::Red) => ("red", "#c0392b"),
            Some(Color::Blue) => ("blue", "#2056a8"),
            None => ("plain", "black"),
        };
        let _ = writeln!(
            out,
            r#"<circle class="point {class}" cx="{}" cy="{}" r="4" fill="{fill}"/>"#,
            f.x(p.x),
            f.y(p.y)
        );
    }
    if let Some(w) = scene.witness {
        let (x, y) = (CANVAS / 2.0 + f.scale * (w.x - f.cx), CANVAS / 2.0 - f.scale * (w.y - f.cy));
        let _ = writeln!(
            out,
            r##"<path class="witness" d="M {} {} L {} {} M {} {} L {} {}" stroke="#1e8449" stroke-width="2"/>"##,
            num(x - 6.0),
            num(y - 6.0),
            num(x + 6.0),
            num(y + 6.0),
            num(x - 6.0),
            num(y + 6.0),
            num(x + 6.0),
            num(y - 6.0)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scene_is_a_bare_canvas() {
        let svg = render(&Scene::default());
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.lines().count(), 4);
    }

    #[test]
    fn y_axis_points_up() {
        let scene = Scene {
            points: vec![(Point::new(0.0, 0.0), None), (Point::new(0.0, 1.0), None)],
            ..Scene::default()
        };
        let svg = render(&scene);
        assert!(svg.contains(r#"cx="400.000" cy="760.000""#), "{svg}");
        assert!(svg.contains(r#"cx="400.000" cy="40.000""#), "{svg}");
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(-1.5), "-1.500");
    }
}
