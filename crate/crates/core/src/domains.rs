//! Toric domains of the moment plane and their membership machinery.
//!
//! Every domain is described by the piecewise-linear upper boundary `s = f(r)`
//! of its moment image over `0 <= r <= r_max`: a triangle for balls and
//! ellipsoids, a box for polydisks, and a user-supplied strictly decreasing
//! profile for the general case. Open images use strict inequalities exactly
//! as the half-open triangle and box definitions do; closures use `<=`.
//! Containment of points, segments, and convex polygons is decided exactly,
//! including for non-convex profiles, by clipping to the profile cells.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geom::{clip_polygon_halfplane, ConvexPolygon, LinearForm, Point, Segment};
use crate::intervals::{Interval, IntervalSet};
use crate::rat::Rat;

/// A basic 4-dimensional toric domain, identified with its moment image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub enum ToricDomain {
    Ball { capacity: Rat },
    Ellipsoid { a: Rat, b: Rat },
    Polydisk { c: Rat, d: Rat },
    ToricPl { profile: Vec<Point> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum DomainRepr {
    Ball {
        #[serde(rename = "R")]
        capacity: Rat,
    },
    Ellipsoid {
        a: Rat,
        b: Rat,
    },
    Polydisk {
        c: Rat,
        d: Rat,
    },
    ToricPl {
        profile: Vec<Point>,
    },
}

impl TryFrom<DomainRepr> for ToricDomain {
    type Error = Error;

    fn try_from(repr: DomainRepr) -> Result<Self, Error> {
        match repr {
            DomainRepr::Ball { capacity } => ToricDomain::ball(capacity),
            DomainRepr::Ellipsoid { a, b } => ToricDomain::ellipsoid(a, b),
            DomainRepr::Polydisk { c, d } => ToricDomain::polydisk(c, d),
            DomainRepr::ToricPl { profile } => ToricDomain::toric_pl(profile),
        }
    }
}

impl From<ToricDomain> for DomainRepr {
    fn from(d: ToricDomain) -> Self {
        match d {
            ToricDomain::Ball { capacity } => DomainRepr::Ball { capacity },
            ToricDomain::Ellipsoid { a, b } => DomainRepr::Ellipsoid { a, b },
            ToricDomain::Polydisk { c, d } => DomainRepr::Polydisk { c, d },
            ToricDomain::ToricPl { profile } => DomainRepr::ToricPl { profile },
        }
    }
}

impl ToricDomain {
    pub fn ball(capacity: Rat) -> Result<Self, Error> {
        if !capacity.is_positive() {
            return Err(Error::invalid("ball capacity must be positive"));
        }
        Ok(ToricDomain::Ball { capacity })
    }

    pub fn ellipsoid(a: Rat, b: Rat) -> Result<Self, Error> {
        if !a.is_positive() {
            return Err(Error::invalid("ellipsoid parameter a must be positive"));
        }
        if b < a {
            return Err(Error::invalid("ellipsoid parameters must satisfy a <= b"));
        }
        Ok(ToricDomain::Ellipsoid { a, b })
    }

    pub fn polydisk(c: Rat, d: Rat) -> Result<Self, Error> {
        if !c.is_positive() {
            return Err(Error::invalid("polydisk parameter c must be positive"));
        }
        if d < c {
            return Err(Error::invalid("polydisk parameters must satisfy c <= d"));
        }
        Ok(ToricDomain::Polydisk { c, d })
    }

    /// Domain below a strictly decreasing profile from `(0, s_0)` to `(r_n, 0)`.
    ///
    /// Strict monotonicity keeps the boundary transversal to radial rays, so
    /// the domain is star-shaped.
    pub fn toric_pl(profile: Vec<Point>) -> Result<Self, Error> {
        if profile.len() < 2 {
            return Err(Error::invalid("a profile needs at least two points"));
        }
        if !profile[0].r.is_zero() {
            return Err(Error::invalid("profile must start on the s-axis (r = 0)"));
        }
        if !profile.last().unwrap().s.is_zero() {
            return Err(Error::invalid("profile must end on the r-axis (s = 0)"));
        }
        if !profile[0].s.is_positive() || !profile.last().unwrap().r.is_positive() {
            return Err(Error::invalid("profile intercepts must be positive"));
        }
        for w in profile.windows(2) {
            if w[1].r <= w[0].r || w[1].s >= w[0].s {
                return Err(Error::invalid(
                    "profile must be strictly decreasing: r increasing, s decreasing",
                ));
            }
        }
        Ok(ToricDomain::ToricPl { profile })
    }

    /// Upper boundary `s = f(r)` as a polyline with strictly increasing `r`.
    pub fn boundary_profile(&self) -> Vec<Point> {
        match self {
            ToricDomain::Ball { capacity } => vec![
                Point::new(Rat::zero(), capacity.clone()),
                Point::new(capacity.clone(), Rat::zero()),
            ],
            ToricDomain::Ellipsoid { a, b } => vec![
                Point::new(Rat::zero(), b.clone()),
                Point::new(a.clone(), Rat::zero()),
            ],
            ToricDomain::Polydisk { c, d } => vec![
                Point::new(Rat::zero(), d.clone()),
                Point::new(c.clone(), d.clone()),
            ],
            ToricDomain::ToricPl { profile } => profile.clone(),
        }
    }

    /// Height of the upper boundary at abscissa `r`, when `0 <= r <= r_max`.
    pub fn boundary_height(&self, r: &Rat) -> Option<Rat> {
        boundary_eval(&self.boundary_profile(), r)
    }

    /// Integer aspect ratio `b/a` for a ball (ratio 1) or an ellipsoid.
    pub fn integral_ratio(&self) -> Option<BigInt> {
        match self {
            ToricDomain::Ball { .. } => Some(BigInt::one()),
            ToricDomain::Ellipsoid { a, b } => (b / a).to_integer(),
            _ => None,
        }
    }

    /// Euclidean area of the moment image, which equals the symplectic
    /// volume up to normalization.
    pub fn volume(&self) -> Rat {
        match self {
            ToricDomain::Ball { capacity } => &(capacity * capacity) / &Rat::int(2),
            ToricDomain::Ellipsoid { a, b } => &(a * b) / &Rat::int(2),
            ToricDomain::Polydisk { c, d } => c * d,
            ToricDomain::ToricPl { profile } => {
                let mut verts = vec![Point::new(Rat::zero(), Rat::zero())];
                verts.extend(profile.iter().rev().cloned());
                crate::geom::shoelace_double_area(&verts) / Rat::int(2)
            }
        }
    }

    /// Domain scaled by `factor > 0` in both area coordinates.
    pub fn scale(&self, factor: &Rat) -> Result<ToricDomain, Error> {
        if !factor.is_positive() {
            return Err(Error::invalid("scale factor must be positive"));
        }
        Ok(match self {
            ToricDomain::Ball { capacity } => ToricDomain::Ball {
                capacity: capacity * factor,
            },
            ToricDomain::Ellipsoid { a, b } => ToricDomain::Ellipsoid {
                a: a * factor,
                b: b * factor,
            },
            ToricDomain::Polydisk { c, d } => ToricDomain::Polydisk {
                c: c * factor,
                d: d * factor,
            },
            ToricDomain::ToricPl { profile } => ToricDomain::ToricPl {
                profile: profile.iter().map(|p| p.scale(factor)).collect(),
            },
        })
    }

    /// Closure of the moment image as a convex polygon, when it is convex.
    pub fn moment_polygon(&self) -> Option<ConvexPolygon> {
        let mut verts = vec![Point::new(Rat::zero(), Rat::zero())];
        verts.extend(self.boundary_profile().iter().rev().cloned());
        ConvexPolygon::new(verts).ok()
    }

    /// Whether the moment image is contained in the triangle of `E(a, b)`.
    pub fn is_subset_of_ellipsoid(&self, a: &Rat, b: &Rat) -> bool {
        self.boundary_profile()
            .iter()
            .all(|p| &(b * &p.r) + &(a * &p.s) <= a * b)
    }

    pub fn moment_contains(&self, p: &Point, query: &MomentQuery) -> bool {
        if query.positive && !(p.r.is_positive() && p.s.is_positive()) {
            return false;
        }
        if query.reduced && p.r > p.s {
            return false;
        }
        boundary_contains_point(&self.boundary_profile(), p, !query.closure)
    }

    pub fn moment_contains_segment(&self, seg: &Segment, query: &MomentQuery) -> bool {
        let set = self.moment_interval_on_segment(seg, query);
        let zero = Rat::zero();
        let one = Rat::one();
        set.intervals
            .iter()
            .any(|iv| iv.contains(&zero) && iv.contains(&one))
    }

    pub fn moment_contains_path(&self, path: &crate::geom::PolyPath, query: &MomentQuery) -> bool {
        path.segments()
            .all(|seg| self.moment_contains_segment(&seg, query))
    }

    /// Exact containment of the convex hull of `verts` in the moment image,
    /// interior when `strict`.
    pub fn moment_contains_polygon(&self, verts: &[Point], strict: bool) -> bool {
        boundary_contains_polygon(&self.boundary_profile(), verts, strict)
    }

    /// Strict-interior half-plane forms when the moment image is convex:
    /// a point with `r, s >= 0` is in the open image iff every form is
    /// negative. `None` for non-concave profiles.
    pub fn interior_forms(&self) -> Option<Vec<LinearForm>> {
        let profile = self.boundary_profile();
        // Concavity of f: edge slopes must be non-increasing.
        let mut prev_slope: Option<Rat> = None;
        let mut forms = Vec::new();
        for w in profile.windows(2) {
            let dr = &w[1].r - &w[0].r;
            let ds = &w[1].s - &w[0].s;
            let slope = &ds / &dr;
            if let Some(prev) = &prev_slope {
                if slope > *prev {
                    return None;
                }
            }
            prev_slope = Some(slope);
            // Below the edge's line: (s - s_i) dr - ds (r - r_i) < 0.
            forms.push(LinearForm::new(
                -&ds,
                dr.clone(),
                &ds * &w[0].r - &dr * &w[0].s,
            ));
        }
        let r_max = &profile.last().unwrap().r;
        forms.push(LinearForm::new(Rat::one(), Rat::zero(), -r_max));
        Some(forms)
    }

    /// Feasible sub-intervals of the unit parameter of `seg` where the query
    /// holds. Exact for every domain variant, including non-convex profiles.
    pub(crate) fn moment_interval_on_segment(
        &self,
        seg: &Segment,
        query: &MomentQuery,
    ) -> IntervalSet {
        let profile = self.boundary_profile();
        let p0 = seg.start();
        let p1 = seg.end();
        let strict = !query.closure;

        // Global affine conditions independent of the profile cell.
        let mut global = IntervalSet::single(Interval::closed(Rat::zero(), Rat::one()));
        let mut apply = |v0: Rat, v1: Rat, strict: bool| {
            let iv = feasible_unit_interval(&v0, &v1, strict);
            global = global.intersect(&IntervalSet::single(iv));
        };
        // r >= 0 and s >= 0; with the positive flag, strictly.
        apply(-&p0.r, -&p1.r, query.positive);
        apply(-&p0.s, -&p1.s, query.positive);
        if query.reduced {
            apply(&p0.r - &p0.s, &p1.r - &p1.s, false);
        }
        let r_max = &profile.last().unwrap().r;
        apply(&p0.r - r_max, &p1.r - r_max, strict);

        // Per-cell condition s - f_i(r) < 0 restricted to r in the cell.
        let mut cells: Vec<Interval> = Vec::new();
        for w in profile.windows(2) {
            let in_cell_lo = feasible_unit_interval(&(&w[0].r - &p0.r), &(&w[0].r - &p1.r), false);
            let in_cell_hi = feasible_unit_interval(&(&p0.r - &w[1].r), &(&p1.r - &w[1].r), false);
            let dr = &w[1].r - &w[0].r;
            let ds = &w[1].s - &w[0].s;
            // (s - s_i) dr - ds (r - r_i), negative below the cell line.
            let val = |p: &Point| &(&(&p.s - &w[0].s) * &dr) - &(&ds * &(&p.r - &w[0].r));
            let below = feasible_unit_interval(&val(p0), &val(p1), strict);
            let iv = in_cell_lo.intersect(&in_cell_hi).intersect(&below);
            if !iv.is_empty() {
                cells.push(iv);
            }
        }
        cells.sort_by(|x, y| x.lo.cmp(&y.lo).then(y.lo_closed.cmp(&x.lo_closed)));
        let mut region = IntervalSet::empty();
        for iv in cells {
            region.push(iv);
        }
        region.intersect(&global)
    }
}

/// Flags selecting which version of the moment image a query targets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MomentQuery {
    /// Use the closure instead of the half-open image.
    pub closure: bool,
    /// Intersect with `{r <= s}`.
    pub reduced: bool,
    /// Require `r > 0` and `s > 0`.
    pub positive: bool,
}

impl MomentQuery {
    pub fn open() -> Self {
        MomentQuery::default()
    }

    pub fn closed() -> Self {
        MomentQuery {
            closure: true,
            ..Default::default()
        }
    }

    pub fn reduced(mut self) -> Self {
        self.reduced = true;
        self
    }

    pub fn positive(mut self) -> Self {
        self.positive = true;
        self
    }
}

/// The quadrilateral footprint swept by the rolled-up Lagrangian isotopy:
/// vertices `(0,0)`, `(2a,0)`, `(a,a+b)`, `(0,a+b)`.
pub fn q_polygon(a: &Rat, b: &Rat) -> Result<ConvexPolygon, Error> {
    if !a.is_positive() {
        return Err(Error::invalid("q polygon needs a > 0"));
    }
    if b < a {
        return Err(Error::invalid("q polygon needs a <= b"));
    }
    let h = a + b;
    ConvexPolygon::new(vec![
        Point::new(Rat::zero(), Rat::zero()),
        Point::new(Rat::int(2) * a, Rat::zero()),
        Point::new(a.clone(), h.clone()),
        Point::new(Rat::zero(), h),
    ])
}

fn boundary_eval(profile: &[Point], r: &Rat) -> Option<Rat> {
    if r.is_negative() || *r > profile.last().unwrap().r {
        return None;
    }
    let w = profile.windows(2).find(|w| &w[0].r <= r && *r <= w[1].r)?;
    let dr = &w[1].r - &w[0].r;
    let ds = &w[1].s - &w[0].s;
    Some(&w[0].s + &(&ds * &(r - &w[0].r)) / &dr)
}

fn boundary_contains_point(profile: &[Point], p: &Point, strict: bool) -> bool {
    if p.r.is_negative() || p.s.is_negative() {
        return false;
    }
    let r_max = &profile.last().unwrap().r;
    if if strict { &p.r >= r_max } else { &p.r > r_max } {
        return false;
    }
    match boundary_eval(profile, &p.r) {
        Some(f) => {
            if strict {
                p.s < f
            } else {
                p.s <= f
            }
        }
        None => false,
    }
}

fn boundary_contains_polygon(profile: &[Point], verts: &[Point], strict: bool) -> bool {
    if verts.is_empty() {
        return true;
    }
    let r_max = &profile.last().unwrap().r;
    for v in verts {
        if v.r.is_negative() || v.s.is_negative() {
            return false;
        }
        if if strict { &v.r >= r_max } else { &v.r > r_max } {
            return false;
        }
    }
    // Within each profile cell the bound is a single affine form, and its
    // maximum over the clipped convex piece is attained at a clipped vertex.
    for w in profile.windows(2) {
        let keep_right = LinearForm::new(Rat::int(-1), Rat::zero(), w[0].r.clone());
        let keep_left = LinearForm::new(Rat::one(), Rat::zero(), -&w[1].r);
        let piece = clip_polygon_halfplane(verts, &keep_right);
        let piece = clip_polygon_halfplane(&piece, &keep_left);
        if piece.is_empty() {
            continue;
        }
        let dr = &w[1].r - &w[0].r;
        let ds = &w[1].s - &w[0].s;
        for v in &piece {
            let val = &(&(&v.s - &w[0].s) * &dr) - &(&ds * &(&v.r - &w[0].r));
            if if strict {
                !val.is_negative()
            } else {
                val.is_positive()
            } {
                return false;
            }
        }
    }
    true
}

/// Feasible `u` in `[0, 1]` for the affine value `v(u) = v0 + u (v1 - v0)`
/// to satisfy `v < 0` (strict) or `v <= 0`.
pub(crate) fn feasible_unit_interval(v0: &Rat, v1: &Rat, strict: bool) -> Interval {
    let unit = Interval::closed(Rat::zero(), Rat::one());
    let sat = |v: &Rat| {
        if strict {
            v.is_negative()
        } else {
            !v.is_positive()
        }
    };
    let d = v1 - v0;
    if d.is_zero() {
        return if sat(v0) {
            unit
        } else {
            Interval {
                lo: Rat::one(),
                lo_closed: false,
                hi: Rat::zero(),
                hi_closed: false,
            }
        };
    }
    let root = v0 / &(v0 - v1);
    if d.is_negative() {
        // Value decreasing: satisfied for u past the root.
        unit.intersect(&Interval {
            lo: root,
            lo_closed: !strict,
            hi: Rat::int(2),
            hi_closed: true,
        })
    } else {
        unit.intersect(&Interval {
            lo: Rat::int(-1),
            lo_closed: true,
            hi: root,
            hi_closed: !strict,
        })
    }
}
