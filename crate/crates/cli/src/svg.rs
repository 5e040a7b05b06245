//! SVG rendering of moment-plane scenes.
//!
//! A scene is the outline of a domain's moment image plus tagged regions and
//! oriented paths. Geometry stays rational until the final coordinate
//! mapping into the viewport; rendering precision never feeds back into any
//! predicate. Output is deterministic for a fixed scene.

use std::fmt::Write as _;

use shapelift_core::domains::ToricDomain;
use shapelift_core::geom::{clip_polygon_halfplane, LinearForm, Point, PolyPath};
use shapelift_core::Rat;

pub struct TaggedRegion {
    pub label: String,
    pub color: &'static str,
    pub vertices: Vec<Point>,
}

pub struct LabeledPath {
    pub label: String,
    pub color: &'static str,
    pub path: PolyPath,
}

pub struct Scene {
    pub domain: ToricDomain,
    pub regions: Vec<TaggedRegion>,
    pub paths: Vec<LabeledPath>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 60.0;

struct Viewport {
    scale_x: f64,
    scale_y: f64,
    max_s: f64,
}

impl Viewport {
    fn map(&self, p: &Point) -> (f64, f64) {
        let x = MARGIN + p.r.to_f64_lossy() * self.scale_x;
        let y = MARGIN + (self.max_s - p.s.to_f64_lossy()) * self.scale_y;
        (x, y)
    }
}

fn fmt_pts(viewport: &Viewport, pts: &[Point]) -> String {
    let mut out = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = viewport.map(p);
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.2},{y:.2}");
    }
    out
}

/// Axis-aligned bounding box of everything in the scene, in rational
/// coordinates, grown to include the origin.
fn scene_bounds(scene: &Scene) -> (Rat, Rat) {
    let mut max_r = Rat::zero();
    let mut max_s = Rat::zero();
    let mut take = |p: &Point| {
        if p.r > max_r {
            max_r = p.r.clone();
        }
        if p.s > max_s {
            max_s = p.s.clone();
        }
    };
    for p in scene.domain.boundary_profile() {
        take(&p);
    }
    for region in &scene.regions {
        for p in &region.vertices {
            take(p);
        }
    }
    for lp in &scene.paths {
        for p in lp.path.vertices() {
            take(p);
        }
    }
    if max_r.is_zero() {
        max_r = Rat::one();
    }
    if max_s.is_zero() {
        max_s = Rat::one();
    }
    (max_r, max_s)
}

/// Clip the rectangle `[0, max_r] x [0, max_s]` by half-planes
/// `form <= 0`; used to turn unbounded analytic regions into drawable
/// polygons.
pub fn clipped_region(max_r: &Rat, max_s: &Rat, forms: &[LinearForm]) -> Vec<Point> {
    let mut poly = vec![
        Point::new(Rat::zero(), Rat::zero()),
        Point::new(max_r.clone(), Rat::zero()),
        Point::new(max_r.clone(), max_s.clone()),
        Point::new(Rat::zero(), max_s.clone()),
    ];
    for form in forms {
        poly = clip_polygon_halfplane(&poly, form);
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    poly
}

pub fn render(scene: &Scene) -> String {
    let (max_r, max_s) = scene_bounds(scene);
    let pad = Rat::new(1, 10);
    let max_r = &max_r * &(Rat::one() + &pad);
    let max_s = &max_s * &(Rat::one() + &pad);
    let viewport = Viewport {
        scale_x: (WIDTH - 2.0 * MARGIN) / max_r.to_f64_lossy(),
        scale_y: (HEIGHT - 2.0 * MARGIN) / max_s.to_f64_lossy(),
        max_s: max_s.to_f64_lossy(),
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" \
         orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\"/></marker></defs>"
    );

    // Axes.
    let origin = viewport.map(&Point::new(Rat::zero(), Rat::zero()));
    let r_end = viewport.map(&Point::new(max_r.clone(), Rat::zero()));
    let s_end = viewport.map(&Point::new(Rat::zero(), max_s.clone()));
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\"/>",
        origin.0, origin.1, r_end.0, r_end.1
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\"/>",
        origin.0, origin.1, s_end.0, s_end.1
    );

    // Shaded regions first so outlines stay visible.
    for region in &scene.regions {
        if region.vertices.len() < 3 {
            continue;
        }
        let _ = writeln!(
            svg,
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.35\" stroke=\"{}\"/>",
            fmt_pts(&viewport, &region.vertices),
            region.color,
            region.color
        );
    }

    // Domain outline: the closed moment image boundary.
    let mut outline = vec![Point::new(Rat::zero(), Rat::zero())];
    outline.extend(scene.domain.boundary_profile().iter().rev().cloned());
    outline.push(Point::new(Rat::zero(), Rat::zero()));
    let _ = writeln!(
        svg,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#d2691e\" stroke-width=\"2\"/>",
        fmt_pts(&viewport, &outline)
    );

    // Oriented paths with arrowheads.
    for lp in &scene.paths {
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" \
             marker-end=\"url(#arrow)\"/>",
            fmt_pts(&viewport, lp.path.vertices()),
            lp.color
        );
    }

    // Legend.
    let mut row = 0usize;
    let mut legend = |label: &str, color: &str, svg: &mut String| {
        let y = 20.0 + 18.0 * row as f64;
        let _ = writeln!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{}\"/>\
             <text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            WIDTH - 240.0,
            y,
            color,
            WIDTH - 222.0,
            y + 10.0,
            label
        );
        row += 1;
    };
    legend("moment image", "#d2691e", &mut svg);
    for region in &scene.regions {
        legend(&region.label, region.color, &mut svg);
    }
    for lp in &scene.paths {
        legend(&lp.label, lp.color, &mut svg);
    }

    svg.push_str("</svg>\n");
    svg
}
