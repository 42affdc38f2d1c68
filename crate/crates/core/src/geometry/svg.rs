//! SVG 1.1 rendering of a realization.

use std::fmt::Write;

use super::{GeometryError, Point, Realization};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layers {
    pub polygon: bool,
    pub chords: bool,
    pub arcs: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Self {
            polygon: true,
            chords: false,
            arcs: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgStyle {
    /// Canvas width and height in pixels.
    pub size: f64,
    pub margin: f64,
    pub stroke_width: f64,
    pub layers: Layers,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            size: 512.0,
            margin: 16.0,
            stroke_width: 1.5,
            layers: Layers::default(),
        }
    }
}

struct Frame {
    cx: f64,
    cy: f64,
    scale: f64,
    half: f64,
}

impl Frame {
    fn map<T: Real>(&self, p: Point<T>) -> (f64, f64) {
        let (x, y) = (p.x.to_f64().unwrap_or(f64::NAN), p.y.to_f64().unwrap_or(f64::NAN));
        (self.half + (x - self.cx) * self.scale, self.half - (y - self.cy) * self.scale)
    }
}

pub fn render_svg<T: Real>(rz: &Realization<T>, style: &SvgStyle) -> Result<String, GeometryError> {
    if !rz.is_finite() || rz.polygon_vertices.is_empty() {
        return Err(GeometryError::NonFinite);
    }
    let pts: Vec<(f64, f64)> = rz
        .polygon_vertices
        .iter()
        .map(|p| (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0)))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let extent = (x1 - x0).max(y1 - y0).max(f64::EPSILON);
    let frame = Frame {
        cx: (x0 + x1) / 2.0,
        cy: (y0 + y1) / 2.0,
        scale: (style.size - 2.0 * style.margin) / extent,
        half: style.size / 2.0,
    };

    let mut out = String::new();
    let size = style.size;
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(out, "  <title>{}</title>", rz.composition).unwrap();
    let sw = style.stroke_width;

    if style.layers.arcs {
        writeln!(out, r##"  <g id="arcs" fill="none" stroke="#9aa5b1" stroke-width="{sw}">"##).unwrap();
        let radius = frame.scale;
        for arc in &rz.arcs {
            let (sx, sy) = frame.map(arc.start);
            let (ex, ey) = frame.map(arc.end);
            let cross = arc.start.sub(arc.center).cross(arc.end.sub(arc.center));
            // The y flip reverses orientation.
            let sweep = if cross > T::zero() { 0 } else { 1 };
            writeln!(
                out,
                r#"    <path d="M {sx:.3} {sy:.3} A {radius:.3} {radius:.3} 0 0 {sweep} {ex:.3} {ey:.3}"/>"#
            )
            .unwrap();
        }
        writeln!(out, "  </g>").unwrap();
    }

    if style.layers.chords {
        writeln!(out, r##"  <g id="chords" fill="none" stroke="#c0392b" stroke-width="{sw}">"##).unwrap();
        let star = &rz.star_vertices;
        for i in 0..star.len() {
            let (ax, ay) = frame.map(star[i]);
            let (bx, by) = frame.map(star[(i + 1) % star.len()]);
            writeln!(
                out,
                r#"    <line x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}"/>"#
            )
            .unwrap();
        }
        writeln!(out, "  </g>").unwrap();
    }

    if style.layers.polygon {
        writeln!(out, r##"  <g id="polygon" fill="none" stroke="#1f2d3d" stroke-width="{sw}">"##).unwrap();
        let mut d = String::new();
        for (i, p) in rz.polygon_vertices.iter().enumerate() {
            let (x, y) = frame.map(*p);
            write!(d, "{}{x:.3} {y:.3} ", if i == 0 { "M " } else { "L " }).unwrap();
        }
        d.push('Z');
        writeln!(out, r#"    <path d="{d}"/>"#).unwrap();
        writeln!(out, "  </g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
