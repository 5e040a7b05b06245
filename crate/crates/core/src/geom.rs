//! Piecewise-linear planar geometry over exact rationals.
//!
//! Points live in the `(r, s)` plane of symplectic area coordinates. Paths
//! are oriented polylines parameterized affinely on each segment, with vertex
//! `i` at parameter `t = i`. All predicates are decided exactly.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rat::Rat;

/// A point `(r, s)` of the moment plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub r: Rat,
    pub s: Rat,
}

impl Point {
    pub fn new(r: Rat, s: Rat) -> Self {
        Point { r, s }
    }

    /// Shorthand for integer-fraction literals, mainly in tests.
    pub fn of(rn: i64, rd: i64, sn: i64, sd: i64) -> Self {
        Point::new(Rat::new(rn, rd), Rat::new(sn, sd))
    }

    pub fn scale(&self, f: &Rat) -> Point {
        Point::new(f * &self.r, f * &self.s)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.s)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (&self.r, &self.s).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (r, s) = <(Rat, Rat)>::deserialize(deserializer)?;
        Ok(Point { r, s })
    }
}

/// Cross product `(a - o) x (b - o)`; positive when `o -> a -> b` turns left.
pub fn cross(o: &Point, a: &Point, b: &Point) -> Rat {
    let abr = &a.r - &o.r;
    let abs_ = &a.s - &o.s;
    let acr = &b.r - &o.r;
    let acs = &b.s - &o.s;
    &abr * &acs - &abs_ * &acr
}

/// Affine form `a*r + b*s + c` on the moment plane.
#[derive(Clone, Debug)]
pub struct LinearForm {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl LinearForm {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        LinearForm { a, b, c }
    }

    pub fn eval(&self, p: &Point) -> Rat {
        &self.a * &p.r + &self.b * &p.s + &self.c
    }
}

/// Oriented segment with distinct endpoints.
#[derive(Clone, Debug)]
pub struct Segment {
    p0: Point,
    p1: Point,
}

impl Segment {
    pub fn new(p0: Point, p1: Point) -> Result<Self, Error> {
        if p0 == p1 {
            return Err(Error::invalid("segment endpoints must be distinct"));
        }
        Ok(Segment { p0, p1 })
    }

    pub fn start(&self) -> &Point {
        &self.p0
    }

    pub fn end(&self) -> &Point {
        &self.p1
    }

    /// Point at local parameter `u` in `[0, 1]`.
    pub fn eval(&self, u: &Rat) -> Point {
        let one_minus = Rat::one() - u;
        Point::new(
            &one_minus * &self.p0.r + u * &self.p1.r,
            &one_minus * &self.p0.s + u * &self.p1.s,
        )
    }
}

/// Monotonicity of the ratio `r(t)/s(t)` along a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioTrend {
    NonIncreasing,
    NonDecreasing,
    Constant,
}

/// Trend of `r(t)/s(t)` along a segment whose endpoints have `s > 0`.
///
/// The derivative of the ratio has numerator `dr*s(t) - r(t)*ds`, which is
/// constant in `t`, so one sign evaluation decides the trend exactly.
pub fn segment_ratio_trend(seg: &Segment) -> Result<RatioTrend, Error> {
    if !seg.p0.s.is_positive() || !seg.p1.s.is_positive() {
        return Err(Error::pre(format!(
            "ratio trend needs s > 0 at both endpoints, got s = {} and s = {}",
            seg.p0.s, seg.p1.s
        )));
    }
    let dr = &seg.p1.r - &seg.p0.r;
    let ds = &seg.p1.s - &seg.p0.s;
    let numer = &dr * &seg.p0.s - &seg.p0.r * &ds;
    Ok(if numer.is_zero() {
        RatioTrend::Constant
    } else if numer.is_negative() {
        RatioTrend::NonIncreasing
    } else {
        RatioTrend::NonDecreasing
    })
}

/// Oriented piecewise-linear path with at least two vertices.
///
/// Vertex `i` sits at parameter `t = i`; the path is affine on `[i, i+1]`
/// and ends at `t = segment count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PolyPath {
    vertices: Vec<Point>,
}

impl PolyPath {
    pub fn new(vertices: Vec<Point>) -> Result<Self, Error> {
        if vertices.len() < 2 {
            return Err(Error::invalid("a path needs at least two vertices"));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("consecutive path vertices must be distinct"));
        }
        Ok(PolyPath { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn start(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Point {
        self.vertices.last().expect("nonempty")
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Path parameter of the final vertex.
    pub fn param_end(&self) -> Rat {
        Rat::int(self.segment_count() as i64)
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices
            .windows(2)
            .map(|w| Segment::new(w[0].clone(), w[1].clone()).expect("distinct by invariant"))
    }

    /// Point at global parameter `t` in `[0, segment_count]`.
    pub fn eval(&self, t: &Rat) -> Result<Point, Error> {
        if t.is_negative() || *t > self.param_end() {
            return Err(Error::pre(format!(
                "path parameter {t} outside [0, {}]",
                self.param_end()
            )));
        }
        let idx = t.floor_int();
        let mut i: usize = 0;
        let mut acc = num_bigint::BigInt::from(0u32);
        while acc < idx && i + 1 < self.segment_count() {
            acc += 1;
            i += 1;
        }
        let u = t - Rat::int(i as i64);
        let seg = Segment::new(self.vertices[i].clone(), self.vertices[i + 1].clone())
            .expect("distinct by invariant");
        Ok(seg.eval(&u))
    }

    pub fn reversed(&self) -> PolyPath {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyPath { vertices: v }
    }

    /// Sub-path between global parameters `a <= b`, with interpolated
    /// endpoints inserted as vertices.
    pub fn subpath(&self, a: &Rat, b: &Rat) -> Result<PolyPath, Error> {
        if a >= b {
            return Err(Error::pre(format!("empty sub-path [{a}, {b}]")));
        }
        let pa = self.eval(a)?;
        let pb = self.eval(b)?;
        let mut verts = vec![pa];
        for i in 1..self.vertices.len() - 1 {
            let ti = Rat::int(i as i64);
            if ti > *a && ti < *b {
                let v = self.vertices[i].clone();
                if *verts.last().unwrap() != v {
                    verts.push(v);
                }
            }
        }
        if *verts.last().unwrap() != pb {
            verts.push(pb);
        }
        PolyPath::new(verts)
    }
}

impl<'de> Deserialize<'de> for PolyPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vertices = Vec::<Point>::deserialize(deserializer)?;
        PolyPath::new(vertices).map_err(serde::de::Error::custom)
    }
}

/// Exact min and max of `alpha*r + beta*s` over a path.
///
/// The form is affine on each segment, so both extrema are attained at
/// vertices.
pub fn linear_extrema_on_path(alpha: &Rat, beta: &Rat, path: &PolyPath) -> (Rat, Rat) {
    let mut values = path.vertices().iter().map(|p| alpha * &p.r + beta * &p.s);
    let first = values.next().expect("paths have vertices");
    values.fold((first.clone(), first), |(lo, hi), v| {
        (lo.min(v.clone()), hi.max(v))
    })
}

/// Convex polygon with counterclockwise vertices.
///
/// Construction rejects fewer than three vertices, repeated consecutive
/// vertices, any clockwise turn, and fully collinear input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, Error> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::invalid("a polygon needs at least three vertices"));
        }
        let mut some_turn = false;
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            if a == b {
                return Err(Error::invalid("repeated consecutive polygon vertices"));
            }
            let z = cross(a, b, c);
            if z.is_negative() {
                return Err(Error::invalid(
                    "polygon vertices must be convex in counterclockwise order",
                ));
            }
            if z.is_positive() {
                some_turn = true;
            }
        }
        if !some_turn {
            return Err(Error::invalid("degenerate polygon: all vertices collinear"));
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Exact point containment; `strict` requires the interior.
    pub fn contains_point(&self, p: &Point, strict: bool) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let z = cross(a, b, p);
            if strict {
                z.is_positive()
            } else {
                !z.is_negative()
            }
        })
    }

    /// A segment is contained in a convex polygon iff its endpoints are.
    pub fn contains_segment(&self, seg: &Segment, strict: bool) -> bool {
        self.contains_point(seg.start(), strict) && self.contains_point(seg.end(), strict)
    }

    /// A convex polygon is contained iff all of its vertices are.
    pub fn contains_polygon(&self, inner: &ConvexPolygon, strict: bool) -> bool {
        inner
            .vertices
            .iter()
            .all(|v| self.contains_point(v, strict))
    }

    /// Twice the enclosed area (shoelace); positive for counterclockwise.
    pub fn double_area(&self) -> Rat {
        shoelace_double_area(&self.vertices)
    }
}

pub(crate) fn shoelace_double_area(vertices: &[Point]) -> Rat {
    let n = vertices.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        acc = acc + (&a.r * &b.s - &b.r * &a.s);
    }
    acc
}

/// Clip a convex vertex loop against the half-plane `form <= 0`
/// (Sutherland-Hodgman step, exact intersections).
pub fn clip_polygon_halfplane(vertices: &[Point], form: &LinearForm) -> Vec<Point> {
    let n = vertices.len();
    let mut out: Vec<Point> = Vec::new();
    let mut push = |p: Point| {
        if out.last() != Some(&p) {
            out.push(p);
        }
    };
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let va = form.eval(a);
        let vb = form.eval(b);
        let a_in = !va.is_positive();
        let b_in = !vb.is_positive();
        if a_in {
            push(a.clone());
        }
        if a_in != b_in {
            // The crossing parameter va / (va - vb) is exact.
            let u = &va / &(&va - &vb);
            let one_minus = Rat::one() - &u;
            push(Point::new(
                &one_minus * &a.r + &u * &b.r,
                &one_minus * &a.s + &u * &b.s,
            ));
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}
