//! The path-lifting decision engine.
//!
//! Given a toric domain and an oriented polyline of area classes starting at
//! an included product torus, `classify` returns one of three verdicts:
//!
//! * `Lifts(certificate)` - the path is realized by a smooth family of
//!   embedded Lagrangian tori. Certificates are either a Type-I span (the
//!   path stays in the reduced open moment image and product tori follow
//!   it), Type-II data with an explicit switch parameter `t_*` where the
//!   lift trades product tori for rolled-up ones, or a concatenation.
//! * `Obstructed(witness)` - no lift exists: the ratio `r/s` never increases
//!   and an obstructing affine form stays at or above its threshold, which
//!   forces any would-be lift into a contradiction.
//! * `Undetermined` - neither test applies. The sufficiency and obstruction
//!   conditions are not complements, so this is a real outcome, not a
//!   failure mode.
//!
//! All feasibility computations are exact: each condition is affine on each
//! path segment, so feasible parameter sets are finite unions of rational
//! intervals. For non-convex profile domains the pointwise checks stay
//! exact and the search for `t_*` falls back to a finite candidate sweep,
//! which keeps the engine sound (returned certificates always re-verify)
//! at the price of completeness.
//!
//! A deliberate asymmetry: obstruction is only ever asserted for the path
//! as given from its start. A sub-path that starts mid-way may sit over a
//! knotted torus, and nothing then follows about the original path.

use serde::{Deserialize, Serialize};

use crate::domains::{feasible_unit_interval, q_polygon, MomentQuery, ToricDomain};
use crate::error::Error;
use crate::geom::{segment_ratio_trend, LinearForm, Point, PolyPath, RatioTrend, Segment};
use crate::intervals::{Interval, IntervalSet};
use crate::rat::Rat;
use crate::shape::ShapeRegion;

/// Certificate that a path lifts, re-checkable with [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiftCertificate {
    /// The whole span stays in the reduced open moment image.
    TypeI { start: Rat, end: Rat },
    /// Product tori up to `t_star`, rolled-up tori afterwards.
    TypeIi { start: Rat, end: Rat, t_star: Rat },
    /// Pieces tiling the path parameter range, in order.
    Concatenation { pieces: Vec<LiftCertificate> },
}

impl LiftCertificate {
    pub fn start(&self) -> Rat {
        match self {
            LiftCertificate::TypeI { start, .. } | LiftCertificate::TypeIi { start, .. } => {
                start.clone()
            }
            LiftCertificate::Concatenation { pieces } => pieces[0].start(),
        }
    }

    pub fn end(&self) -> Rat {
        match self {
            LiftCertificate::TypeI { end, .. } | LiftCertificate::TypeIi { end, .. } => end.clone(),
            LiftCertificate::Concatenation { pieces } => pieces.last().expect("nonempty").end(),
        }
    }
}

/// Witness that a path does not lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    pub domain: ToricDomain,
    /// Trend of `r/s` on each segment; all non-increasing or constant.
    pub segment_trends: Vec<RatioTrend>,
    /// Minimum of the obstructing affine form along the path.
    pub form_min: Rat,
    /// The threshold the form stays at or above.
    pub threshold: Rat,
}

impl ObstructionWitness {
    /// Re-derive the witness from scratch and compare.
    pub fn verify(&self, path: &PolyPath) -> bool {
        let Ok(region) = ShapeRegion::try_from(&self.domain) else {
            return false;
        };
        matches!(obstruction_i(&region, path), Ok(Some(w)) if w == *self)
    }
}

/// Outcome of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LiftVerdict {
    Lifts { certificate: LiftCertificate },
    Obstructed { witness: ObstructionWitness },
    Undetermined,
}

fn reduced_query() -> MomentQuery {
    MomentQuery::open().reduced().positive()
}

/// Obstructing form coefficients and threshold: the form `alpha*r + beta*s`
/// must stay `>= threshold`.
fn obstruction_form(region: &ShapeRegion) -> (Rat, Rat, Rat) {
    match region {
        ShapeRegion::Ball { capacity } => (Rat::int(2), Rat::one(), capacity.clone()),
        ShapeRegion::Ellipsoid { b, k, .. } => (
            Rat::from_bigint(k.clone()) + Rat::one(),
            Rat::one(),
            b.clone(),
        ),
        ShapeRegion::Polydisk { d, .. } => (Rat::one(), Rat::one(), d.clone()),
    }
}

/// Strict upper bound on `r` in the suffix condition of the sufficiency
/// test.
fn suffix_bound(region: &ShapeRegion) -> Rat {
    match region {
        ShapeRegion::Ball { capacity } => capacity / &Rat::int(3),
        ShapeRegion::Ellipsoid { a, .. } => a / &Rat::int(2),
        ShapeRegion::Polydisk { c, .. } => c / &Rat::int(2),
    }
}

fn check_reduced_positive(path: &PolyPath) -> Result<(), Error> {
    for p in path.vertices() {
        if !p.r.is_positive() {
            return Err(Error::pre(format!(
                "path needs r > 0 throughout, got r = {}",
                p.r
            )));
        }
        if p.r > p.s {
            return Err(Error::pre(format!(
                "path needs r <= s throughout, got ({}, {})",
                p.r, p.s
            )));
        }
    }
    Ok(())
}

fn check_strictly_reduced(path: &PolyPath) -> Result<(), Error> {
    for p in path.vertices() {
        if !p.r.is_positive() || p.r >= p.s {
            return Err(Error::pre(format!(
                "the general criterion needs 0 < r < s throughout, got ({}, {})",
                p.r, p.s
            )));
        }
    }
    Ok(())
}

fn shift_interval(iv: Interval, offset: i64) -> Interval {
    let o = Rat::int(offset);
    Interval {
        lo: iv.lo + &o,
        lo_closed: iv.lo_closed,
        hi: iv.hi + o,
        hi_closed: iv.hi_closed,
    }
}

/// Parameters where the path sits in the reduced open moment image, as an
/// exact interval set over the global path parameter.
fn inside_set(x: &ToricDomain, path: &PolyPath) -> IntervalSet {
    let query = reduced_query();
    let mut out = IntervalSet::empty();
    for (i, seg) in path.segments().enumerate() {
        for iv in x.moment_interval_on_segment(&seg, &query).intervals {
            out.push(shift_interval(iv, i as i64));
        }
    }
    out
}

fn set_covers(set: &IntervalSet, lo: &Rat, hi: &Rat) -> bool {
    set.intervals
        .iter()
        .any(|iv| iv.contains(lo) && iv.contains(hi))
}

/// Build a global interval set from a per-segment unit-parameter rule,
/// restricted to the span `[lo, hi]`.
fn global_set<F>(path: &PolyPath, lo: &Rat, hi: &Rat, rule: F) -> IntervalSet
where
    F: Fn(&Segment) -> IntervalSet,
{
    let mut parts: Vec<Interval> = Vec::new();
    for (i, seg) in path.segments().enumerate() {
        let seg_lo = Rat::int(i as i64);
        let seg_hi = Rat::int(i as i64 + 1);
        if *hi < seg_lo || *lo > seg_hi {
            continue;
        }
        let u0 = if *lo > seg_lo {
            lo - &seg_lo
        } else {
            Rat::zero()
        };
        let u1 = if *hi < seg_hi {
            hi - &seg_lo
        } else {
            Rat::one()
        };
        let window = Interval::closed(u0, u1);
        for iv in rule(&seg).intervals {
            let clipped = iv.intersect(&window);
            if !clipped.is_empty() {
                parts.push(shift_interval(clipped, i as i64));
            }
        }
    }
    parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
    let mut out = IntervalSet::empty();
    for iv in parts {
        out.push(iv);
    }
    out
}

fn strict_form_interval(seg: &Segment, alpha: &Rat, beta: &Rat, gamma: &Rat) -> Interval {
    // alpha*r + beta*s + gamma < 0
    let v = |p: &Point| alpha * &p.r + beta * &p.s + gamma;
    feasible_unit_interval(&v(seg.start()), &v(seg.end()), true)
}

/// Obstruction test: a witness means the path does not lift.
///
/// Preconditions: the path starts in the reduced open moment image, ends
/// outside it, and keeps `0 < r <= s` throughout. A witness is returned iff
/// the ratio `r/s` is non-increasing on every segment and the obstructing
/// form stays at or above its threshold, both checked at vertices, which is
/// exact because the form is affine per segment and the ratio is monotone
/// per segment.
pub fn obstruction_i(
    region: &ShapeRegion,
    path: &PolyPath,
) -> Result<Option<ObstructionWitness>, Error> {
    check_reduced_positive(path)?;
    let x = region.domain();
    let query = reduced_query();
    if !x.moment_contains(path.start(), &query) {
        return Err(Error::pre(format!(
            "obstruction test needs the path to start in the reduced open moment image, got {:?}",
            path.start()
        )));
    }
    if x.moment_contains(path.end(), &query) {
        return Err(Error::pre(format!(
            "obstruction test needs the path to end outside the reduced open moment image, got {:?}",
            path.end()
        )));
    }

    let mut trends = Vec::with_capacity(path.segment_count());
    for seg in path.segments() {
        let trend = segment_ratio_trend(&seg)?;
        if trend == RatioTrend::NonDecreasing {
            return Ok(None);
        }
        trends.push(trend);
    }

    let (alpha, beta, threshold) = obstruction_form(region);
    let (form_min, _) = crate::geom::linear_extrema_on_path(&alpha, &beta, path);
    if form_min < threshold {
        return Ok(None);
    }
    Ok(Some(ObstructionWitness {
        domain: x,
        segment_trends: trends,
        form_min,
        threshold,
    }))
}

/// Sufficiency test in the closed-form families, via the family-specific
/// clauses.
///
/// Computes the exact feasible set of switch parameters `t_*` from three
/// conditions: the prefix up to `t_*` stays in the reduced open moment
/// image; the family clause holds at `t_*`; and `r` stays under the family
/// bound on the whole suffix. Returns a certificate with the earliest
/// feasible rational `t_*`, or `None`.
pub fn sufficiency_ii(
    region: &ShapeRegion,
    path: &PolyPath,
) -> Result<Option<LiftCertificate>, Error> {
    check_reduced_positive(path)?;
    let x = region.domain();
    let query = reduced_query();
    if !x.moment_contains(path.start(), &query) {
        return Err(Error::pre(format!(
            "sufficiency test needs the path to start in the reduced open moment image, got {:?}",
            path.start()
        )));
    }

    let zero = Rat::zero();
    let t_end = path.param_end();
    let inside = inside_set(&x, path);
    let prefix = match inside.prefix_from(&zero) {
        Some(iv) => IntervalSet::single(iv),
        None => return Ok(None),
    };

    let clause = |seg: &Segment| -> IntervalSet {
        match region {
            ShapeRegion::Ball { capacity } => IntervalSet::single(strict_form_interval(
                seg,
                &Rat::int(2),
                &Rat::one(),
                &-capacity,
            )),
            ShapeRegion::Polydisk { d, .. } => {
                IntervalSet::single(strict_form_interval(seg, &Rat::one(), &Rat::one(), &-d))
            }
            ShapeRegion::Ellipsoid { a, b, k } => {
                let k = Rat::from_bigint(k.clone());
                let km1 = &k - &Rat::one();
                let kp1 = &k + &Rat::one();
                // (k-1) r <= s and (k+1) r + s < b
                let le = |p: &Point| &km1 * &p.r - &p.s;
                let first = feasible_unit_interval(&le(seg.start()), &le(seg.end()), false)
                    .intersect(&strict_form_interval(seg, &kp1, &Rat::one(), &-b));
                // (k-1) r > s and 2 r < a
                let gt = |p: &Point| &p.s - &km1 * &p.r;
                let second = feasible_unit_interval(&gt(seg.start()), &gt(seg.end()), true)
                    .intersect(&strict_form_interval(seg, &Rat::int(2), &Rat::zero(), &-a));
                let mut set = IntervalSet::empty();
                let mut parts = vec![first, second];
                parts.retain(|iv| !iv.is_empty());
                parts.sort_by(|x, y| x.lo.cmp(&y.lo).then(y.lo_closed.cmp(&x.lo_closed)));
                for iv in parts {
                    set.push(iv);
                }
                set
            }
        }
    };
    let switch_ok = global_set(path, &zero, &t_end, clause);

    let bound = suffix_bound(region);
    let under = global_set(path, &zero, &t_end, |seg| {
        IntervalSet::single(feasible_unit_interval(
            &(&seg.start().r - &bound),
            &(&seg.end().r - &bound),
            true,
        ))
    });
    let suffix = match under.suffix_to(&t_end) {
        Some(iv) => IntervalSet::single(iv),
        None => return Ok(None),
    };

    let feasible = prefix.intersect(&switch_ok).intersect(&suffix);
    Ok(feasible
        .pick_earliest()
        .map(|t_star| LiftCertificate::TypeIi {
            start: zero,
            end: t_end,
            t_star,
        }))
}

/// Values of the interior forms at the vertices of `q(r, s)` as affine
/// functions of the path point, evaluated at `p`.
fn q_vertex_values(forms: &[LinearForm], p: &Point) -> Vec<Rat> {
    let two_r = &Rat::int(2) * &p.r;
    let height = &p.r + &p.s;
    let verts = [
        Point::new(Rat::zero(), Rat::zero()),
        Point::new(two_r, Rat::zero()),
        Point::new(p.r.clone(), height.clone()),
        Point::new(Rat::zero(), height),
    ];
    forms
        .iter()
        .flat_map(|g| verts.iter().map(move |v| g.eval(v)))
        .collect()
}

/// Same for the diagonal footprint `q(r, r)`.
fn q_diag_values(forms: &[LinearForm], p: &Point) -> Vec<Rat> {
    let two_r = &Rat::int(2) * &p.r;
    let verts = [
        Point::new(Rat::zero(), Rat::zero()),
        Point::new(two_r.clone(), Rat::zero()),
        Point::new(p.r.clone(), two_r.clone()),
        Point::new(Rat::zero(), two_r),
    ];
    forms
        .iter()
        .flat_map(|g| verts.iter().map(move |v| g.eval(v)))
        .collect()
}

fn conjunction_interval(v0: &[Rat], v1: &[Rat]) -> Interval {
    let mut iv = Interval::closed(Rat::zero(), Rat::one());
    for (a, b) in v0.iter().zip(v1) {
        iv = iv.intersect(&feasible_unit_interval(a, b, true));
        if iv.is_empty() {
            break;
        }
    }
    iv
}

/// Pointwise check `q(r, s)` inside the open moment image, exact for every
/// domain variant.
fn q_strictly_inside(x: &ToricDomain, r: &Rat, s: &Rat) -> bool {
    match q_polygon(r, s) {
        Ok(q) => x.moment_contains_polygon(q.vertices(), true),
        Err(_) => false,
    }
}

/// Maximum of `r` over the span `[lo, hi]` of the path.
fn r_max_on(path: &PolyPath, lo: &Rat, hi: &Rat) -> Result<Rat, Error> {
    let mut best = path.eval(lo)?.r;
    let hi_r = path.eval(hi)?.r;
    if hi_r > best {
        best = hi_r;
    }
    for (i, p) in path.vertices().iter().enumerate() {
        let t = Rat::int(i as i64);
        if t > *lo && t < *hi && p.r > best {
            best = p.r.clone();
        }
    }
    Ok(best)
}

/// Feasible switch parameters for a Type-II piece spanning `[lo, hi]`, or a
/// single feasible value for non-convex images.
fn type2_pick(
    x: &ToricDomain,
    inside: &IntervalSet,
    path: &PolyPath,
    lo: &Rat,
    hi: &Rat,
    strengthen_at_end: bool,
) -> Result<Option<Rat>, Error> {
    let start = path.eval(lo)?;
    if !x.moment_contains(&start, &reduced_query()) {
        return Ok(None);
    }
    if strengthen_at_end {
        let p = path.eval(hi)?;
        if !q_strictly_inside(x, &p.r, &p.s) {
            return Ok(None);
        }
    }

    // Prefix: the inside-component containing `lo`, clipped to the span.
    let prefix_iv = match inside.prefix_from(lo) {
        Some(iv) => iv.intersect(&Interval::closed(lo.clone(), hi.clone())),
        None => return Ok(None),
    };
    if prefix_iv.is_empty() {
        return Ok(None);
    }

    if let Some(forms) = x.interior_forms() {
        let switch_ok = global_set(path, lo, hi, |seg| {
            IntervalSet::single(conjunction_interval(
                &q_vertex_values(&forms, seg.start()),
                &q_vertex_values(&forms, seg.end()),
            ))
        });
        let diag_ok = global_set(path, lo, hi, |seg| {
            IntervalSet::single(conjunction_interval(
                &q_diag_values(&forms, seg.start()),
                &q_diag_values(&forms, seg.end()),
            ))
        });
        let suffix = match diag_ok.suffix_to(hi) {
            Some(iv) => IntervalSet::single(iv),
            None => return Ok(None),
        };
        let feasible = IntervalSet::single(prefix_iv)
            .intersect(&switch_ok)
            .intersect(&suffix);
        return Ok(feasible.pick_earliest());
    }

    // Non-convex image: sweep exact pointwise checks over a finite candidate
    // list inside the prefix. Sound but not complete.
    let mut candidates = vec![prefix_iv.lo.clone()];
    for i in 0..=path.segment_count() {
        let t = Rat::int(i as i64);
        if prefix_iv.contains(&t) {
            candidates.push(t);
        }
    }
    if prefix_iv.lo < prefix_iv.hi {
        candidates.push((&prefix_iv.lo + &prefix_iv.hi) / Rat::int(2));
        if prefix_iv.hi_closed {
            candidates.push(prefix_iv.hi.clone());
        }
    }
    candidates.sort();
    candidates.dedup();
    for t in candidates {
        if !prefix_iv.contains(&t) {
            continue;
        }
        let p = path.eval(&t)?;
        if !q_strictly_inside(x, &p.r, &p.s) {
            continue;
        }
        let rm = r_max_on(path, &t, hi)?;
        if q_strictly_inside(x, &rm, &rm) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn component_after(inside: &IntervalSet, from: &Rat) -> Vec<Interval> {
    inside
        .intervals
        .iter()
        .filter(|iv| iv.lo > *from && !iv.is_empty())
        .cloned()
        .collect()
}

fn solve_pieces(
    x: &ToricDomain,
    inside: &IntervalSet,
    path: &PolyPath,
    from: &Rat,
    depth: usize,
) -> Result<Option<Vec<LiftCertificate>>, Error> {
    let t_end = path.param_end();
    if set_covers(inside, from, &t_end) {
        return Ok(Some(vec![LiftCertificate::TypeI {
            start: from.clone(),
            end: t_end,
        }]));
    }
    if let Some(t_star) = type2_pick(x, inside, path, from, &t_end, false)? {
        return Ok(Some(vec![LiftCertificate::TypeIi {
            start: from.clone(),
            end: t_end,
            t_star,
        }]));
    }
    if depth == 0 {
        return Ok(None);
    }
    // Break inside a later component the path re-enters; the matching
    // condition at the junction is the strengthened footprint containment.
    for comp in component_after(inside, from) {
        let mut cuts = Vec::new();
        if comp.lo < comp.hi {
            let width = &comp.hi - &comp.lo;
            cuts.push(&comp.lo + &(&width / &Rat::int(2)));
            cuts.push(&comp.lo + &(&width / &Rat::int(4)));
            cuts.push(&comp.lo + &(&width * &Rat::new(3, 4)));
        } else if comp.lo_closed && comp.hi_closed {
            cuts.push(comp.lo.clone());
        }
        for cut in cuts {
            if cut >= path.param_end() || cut <= *from || !comp.contains(&cut) {
                continue;
            }
            if let Some(t_star) = type2_pick(x, inside, path, from, &cut, true)? {
                if let Some(rest) = solve_pieces(x, inside, path, &cut, depth - 1)? {
                    let mut pieces = vec![LiftCertificate::TypeIi {
                        start: from.clone(),
                        end: cut.clone(),
                        t_star,
                    }];
                    pieces.extend(rest);
                    return Ok(Some(pieces));
                }
            }
        }
    }
    Ok(None)
}

/// General footprint-containment criterion for an arbitrary toric domain.
///
/// The path must satisfy `0 < r < s` strictly and start in the reduced open
/// moment image. With user-supplied breakpoints the decomposition is taken
/// as given; otherwise pieces are cut automatically where the path re-enters
/// the image. Each non-final Type-II piece must additionally satisfy the
/// footprint condition at its junction so the next piece's product-torus
/// prefix matches up.
pub fn general_criterion(
    x: &ToricDomain,
    path: &PolyPath,
    breakpoints: Option<&[Rat]>,
) -> Result<Option<LiftCertificate>, Error> {
    check_strictly_reduced(path)?;
    let query = reduced_query();
    if !x.moment_contains(path.start(), &query) {
        return Err(Error::pre(format!(
            "the general criterion needs the path to start in the reduced open moment image, got {:?}",
            path.start()
        )));
    }
    let inside = inside_set(x, path);
    let t_end = path.param_end();

    let pieces = match breakpoints {
        None => {
            let depth = inside.intervals.len() + 1;
            solve_pieces(x, &inside, path, &Rat::zero(), depth)?
        }
        Some(cuts) => {
            let mut bounds = vec![Rat::zero()];
            for c in cuts {
                if *c <= *bounds.last().unwrap() || *c >= t_end {
                    return Err(Error::pre(format!(
                        "breakpoints must be strictly increasing inside (0, {t_end}), got {c}"
                    )));
                }
                bounds.push(c.clone());
            }
            bounds.push(t_end.clone());
            let mut pieces = Vec::new();
            let mut ok = true;
            for (idx, pair) in bounds.windows(2).enumerate() {
                let (lo, hi) = (&pair[0], &pair[1]);
                let last = idx + 2 == bounds.len();
                if set_covers(&inside, lo, hi) {
                    pieces.push(LiftCertificate::TypeI {
                        start: lo.clone(),
                        end: hi.clone(),
                    });
                    continue;
                }
                match type2_pick(x, &inside, path, lo, hi, !last)? {
                    Some(t_star) => pieces.push(LiftCertificate::TypeIi {
                        start: lo.clone(),
                        end: hi.clone(),
                        t_star,
                    }),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            ok.then_some(pieces)
        }
    };

    Ok(pieces.map(|pieces| {
        if pieces.len() == 1 {
            pieces.into_iter().next().unwrap()
        } else {
            LiftCertificate::Concatenation { pieces }
        }
    }))
}

/// Re-check a certificate against its defining clauses.
pub fn verify_certificate(
    x: &ToricDomain,
    path: &PolyPath,
    certificate: &LiftCertificate,
) -> Result<bool, Error> {
    let inside = inside_set(x, path);
    let flat: Vec<&LiftCertificate> = match certificate {
        LiftCertificate::Concatenation { pieces } => pieces.iter().collect(),
        single => vec![single],
    };
    if flat.is_empty() {
        return Ok(false);
    }
    // Pieces must tile [0, T] in order.
    let mut cursor = Rat::zero();
    for piece in &flat {
        if piece.start() != cursor || piece.end() <= cursor {
            return Ok(false);
        }
        cursor = piece.end();
    }
    if cursor != path.param_end() {
        return Ok(false);
    }
    for (idx, piece) in flat.iter().enumerate() {
        let last = idx + 1 == flat.len();
        match piece {
            LiftCertificate::TypeI { start, end } => {
                if !set_covers(&inside, start, end) {
                    return Ok(false);
                }
            }
            LiftCertificate::TypeIi { start, end, t_star } => {
                if t_star < start || t_star > end {
                    return Ok(false);
                }
                // Prefix stays inside.
                let prefix_ok = if t_star == start {
                    inside.contains(start)
                } else {
                    set_covers(&inside, start, t_star)
                };
                if !prefix_ok {
                    return Ok(false);
                }
                let p = path.eval(t_star)?;
                if !q_strictly_inside(x, &p.r, &p.s) {
                    return Ok(false);
                }
                let rm = r_max_on(path, t_star, end)?;
                if !q_strictly_inside(x, &rm, &rm) {
                    return Ok(false);
                }
                if !last {
                    let junction = path.eval(end)?;
                    if !q_strictly_inside(x, &junction.r, &junction.s) {
                        return Ok(false);
                    }
                }
            }
            LiftCertificate::Concatenation { .. } => return Ok(false),
        }
    }
    Ok(true)
}

/// Full classification of a path.
///
/// `Lifts` when the whole path stays in the reduced open image or a
/// sufficiency route produces a certificate; `Obstructed` only when the
/// obstruction test succeeds on the path as given from its start, either in
/// full or on the initial sub-path up to the first exit from the image (the
/// returned witness then describes that prefix); `Undetermined` otherwise.
/// Obstructions of sub-paths starting mid-way never propagate: the torus
/// over an interior point may be knotted, and nothing about the original
/// path would follow.
pub fn classify(x: &ToricDomain, path: &PolyPath) -> Result<LiftVerdict, Error> {
    let query = reduced_query();
    if !x.moment_contains(path.start(), &query) {
        return Err(Error::pre(format!(
            "classification needs the path to start in the reduced open moment image, got {:?}",
            path.start()
        )));
    }
    let inside = inside_set(x, path);
    let t_end = path.param_end();
    if set_covers(&inside, &Rat::zero(), &t_end) {
        return Ok(LiftVerdict::Lifts {
            certificate: LiftCertificate::TypeI {
                start: Rat::zero(),
                end: t_end,
            },
        });
    }

    let region = ShapeRegion::try_from(x).ok();
    let reduced_ok = check_reduced_positive(path).is_ok();
    if let (Some(region), true) = (&region, reduced_ok) {
        if let Some(certificate) = sufficiency_ii(region, path)? {
            return Ok(LiftVerdict::Lifts { certificate });
        }
    }
    if check_strictly_reduced(path).is_ok() {
        if let Some(certificate) = general_criterion(x, path, None)? {
            return Ok(LiftVerdict::Lifts { certificate });
        }
    }
    if let (Some(region), true) = (&region, reduced_ok) {
        if !x.moment_contains(path.end(), &query) {
            if let Some(witness) = obstruction_i(region, path)? {
                return Ok(LiftVerdict::Obstructed { witness });
            }
        }
        // A lift of the path restricts to a lift of any prefix, so an
        // obstructed prefix from the start obstructs the whole path. Try
        // the prefix ending where the path first leaves the image.
        if let Some(first) = inside.prefix_from(&Rat::zero()) {
            if !first.hi_closed && first.hi < t_end && first.hi.is_positive() {
                let prefix = path.subpath(&Rat::zero(), &first.hi)?;
                if check_reduced_positive(&prefix).is_ok() {
                    if let Some(witness) = obstruction_i(region, &prefix)? {
                        return Ok(LiftVerdict::Obstructed { witness });
                    }
                }
            }
        }
    }
    Ok(LiftVerdict::Undetermined)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(rn: i64, rd: i64, sn: i64, sd: i64) -> Point {
        Point::of(rn, rd, sn, sd)
    }

    fn path(pts: &[(i64, i64, i64, i64)]) -> PolyPath {
        PolyPath::new(pts.iter().map(|&(a, b, c, d)| pt(a, b, c, d)).collect()).unwrap()
    }

    fn ball3() -> ShapeRegion {
        ShapeRegion::ball(Rat::int(3)).unwrap()
    }

    fn e13() -> ShapeRegion {
        ShapeRegion::ellipsoid(Rat::one(), Rat::int(3)).unwrap()
    }

    #[test]
    fn obstruction_examples() {
        // Vertical path above the obstructing line of the ball.
        let w = obstruction_i(&ball3(), &path(&[(9, 10, 13, 10), (9, 10, 7, 2)]))
            .unwrap()
            .expect("witnessed");
        assert_eq!(w.form_min, Rat::new(31, 10));
        assert_eq!(w.threshold, Rat::int(3));
        assert_eq!(w.segment_trends, vec![RatioTrend::NonIncreasing]);

        let w = obstruction_i(&e13(), &path(&[(9, 20, 3, 2), (9, 20, 16, 5)]))
            .unwrap()
            .expect("witnessed");
        assert_eq!(w.form_min, Rat::new(33, 10));

        // Starts in the flexible region: no witness.
        let none = obstruction_i(&ball3(), &path(&[(1, 2, 1, 1), (1, 2, 7, 2)])).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn obstruction_precondition_errors() {
        // Ends inside the image.
        assert!(obstruction_i(&ball3(), &path(&[(9, 10, 13, 10), (9, 10, 7, 5)])).is_err());
        // Leaves the reduced half-plane.
        assert!(obstruction_i(&ball3(), &path(&[(9, 10, 13, 10), (4, 1, 1, 1)])).is_err());
        // Starts outside.
        assert!(obstruction_i(&ball3(), &path(&[(2, 1, 2, 1), (2, 1, 4, 1)])).is_err());
    }

    #[test]
    fn obstruction_witness_reverifies() {
        let p = path(&[(9, 10, 13, 10), (9, 10, 7, 2)]);
        let w = obstruction_i(&ball3(), &p).unwrap().unwrap();
        assert!(w.verify(&p));
        // A path with a different form minimum does not match the witness.
        let other = path(&[(9, 10, 7, 5), (9, 10, 7, 2)]);
        assert!(!w.verify(&other));
    }

    #[test]
    fn sufficiency_examples() {
        // Flexible start, narrow r: certificate switching immediately.
        let c = sufficiency_ii(&ball3(), &path(&[(1, 2, 1, 1), (1, 2, 7, 2)]))
            .unwrap()
            .expect("lifts");
        assert_eq!(
            c,
            LiftCertificate::TypeIi {
                start: Rat::zero(),
                end: Rat::one(),
                t_star: Rat::zero()
            }
        );

        // Second clause of the ellipsoid switch condition at t = 0.
        let c = sufficiency_ii(&e13(), &path(&[(2, 5, 3, 5), (2, 5, 7, 2)]))
            .unwrap()
            .expect("lifts");
        assert_eq!(
            c,
            LiftCertificate::TypeIi {
                start: Rat::zero(),
                end: Rat::one(),
                t_star: Rat::zero()
            }
        );

        // r too large on the suffix.
        let none = sufficiency_ii(&ball3(), &path(&[(6, 5, 13, 10), (6, 5, 7, 2)])).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn general_criterion_single_piece_examples() {
        // Ball: the footprint at the start fits, the diagonal footprint stays
        // under r = R/3 on the suffix.
        let x = ball3().domain();
        let p = path(&[(1, 2, 1, 1), (1, 2, 7, 2)]);
        let cert = general_criterion(&x, &p, None).unwrap().expect("lifts");
        assert!(verify_certificate(&x, &p, &cert).unwrap());
        assert_eq!(
            sufficiency_ii(&ball3(), &p).unwrap().is_some(),
            true,
            "both routes agree on the example"
        );

        // Polydisk: q(2/5, 1/2) has height 9/10 < 2 and width 4/5 < 1, and
        // the suffix bound 2r = 4/5 < 1 holds throughout.
        let pd = ShapeRegion::polydisk(Rat::one(), Rat::int(2)).unwrap();
        let x = pd.domain();
        let p = path(&[(2, 5, 1, 2), (2, 5, 5, 2)]);
        let cert = general_criterion(&x, &p, None).unwrap().expect("lifts");
        assert!(verify_certificate(&x, &p, &cert).unwrap());
    }

    #[test]
    fn sufficiency_and_obstruction_are_exclusive() {
        // Random-ish vertical and slanted probes in all three families.
        let regions = [
            ball3(),
            e13(),
            ShapeRegion::polydisk(Rat::one(), Rat::int(2)).unwrap(),
        ];
        let mut runs = 0;
        for region in &regions {
            let x = region.domain();
            let q = reduced_query();
            for i in 1..=12 {
                for j in 1..=12 {
                    let start = Point::new(Rat::new(i, 8), Rat::new(j, 8));
                    if start.r > start.s || !x.moment_contains(&start, &q) {
                        continue;
                    }
                    for dr in [-1i64, 0] {
                        let end = Point::new(&start.r + &Rat::new(dr, 16), &start.s + &Rat::int(4));
                        if !end.r.is_positive() || end.r > end.s {
                            continue;
                        }
                        if x.moment_contains(&end, &q) {
                            continue;
                        }
                        let p = PolyPath::new(vec![start.clone(), end]).unwrap();
                        let obs = obstruction_i(region, &p).unwrap();
                        let suf = sufficiency_ii(region, &p).unwrap();
                        assert!(
                            obs.is_none() || suf.is_none(),
                            "both tests fired for {region:?} {p:?}"
                        );
                        runs += 1;
                    }
                }
            }
        }
        assert!(runs > 100);
    }

    #[test]
    fn general_criterion_matches_sufficiency_on_verticals() {
        let b3 = ball3();
        let x = b3.domain();
        for i in 1..=20 {
            for j in i..=20 {
                let start = Point::new(Rat::new(i, 7), Rat::new(j, 7));
                if start.r >= start.s {
                    continue;
                }
                if !x.moment_contains(&start, &reduced_query()) {
                    continue;
                }
                let end = Point::new(start.r.clone(), &start.s + &Rat::int(4));
                let p = PolyPath::new(vec![start, end]).unwrap();
                let s = sufficiency_ii(&b3, &p).unwrap();
                let g = general_criterion(&x, &p, None).unwrap();
                assert_eq!(s.is_some(), g.is_some(), "{p:?}");
            }
        }
    }

    #[test]
    fn general_criterion_loop_scenario() {
        // Loop out of and back into the image; a single Type-II piece with
        // the switch in the first segment certifies it.
        let x = e13().domain();
        let p = path(&[(3, 10, 4, 5), (3, 10, 3, 1), (9, 20, 16, 5), (9, 20, 3, 2)]);
        let cert = general_criterion(&x, &p, None).unwrap().expect("lifts");
        match &cert {
            LiftCertificate::TypeIi { t_star, .. } => assert!(*t_star < Rat::one()),
            other => panic!("expected a single piece, got {other:?}"),
        }
        assert!(verify_certificate(&x, &p, &cert).unwrap());

        // The reverse's initial leg is exactly the obstructed vertical path.
        let rev = p.reversed();
        let leg = PolyPath::new(rev.vertices()[..2].to_vec()).unwrap();
        assert!(obstruction_i(&e13(), &leg).unwrap().is_some());

        // classify reaches the same verdicts: the loop lifts, its reverse is
        // obstructed through the prefix ending at the first exit.
        assert!(matches!(
            classify(&x, &p).unwrap(),
            LiftVerdict::Lifts { .. }
        ));
        assert!(matches!(
            classify(&x, &rev).unwrap(),
            LiftVerdict::Obstructed { .. }
        ));
    }

    #[test]
    fn general_criterion_on_profile_domains() {
        // Non-concave profile: the switch-parameter search falls back to the
        // exact pointwise sweep.
        let x = ToricDomain::toric_pl(vec![
            pt(0, 1, 24, 1),
            pt(2, 1, 17, 1),
            pt(19, 1, 0, 1),
        ])
        .unwrap();
        let p = path(&[(1, 1, 2, 1), (1, 1, 30, 1)]);
        let cert = general_criterion(&x, &p, None).unwrap().expect("lifts");
        assert!(verify_certificate(&x, &p, &cert).unwrap());
        assert!(matches!(classify(&x, &p).unwrap(), LiftVerdict::Lifts { .. }));

        // Far right, the footprint cannot fit (q(7, s) needs 7 + s < 12):
        // no certificate, and with no obstruction test for profile domains
        // the verdict is undetermined.
        let p = path(&[(7, 1, 8, 1), (7, 1, 30, 1)]);
        assert!(general_criterion(&x, &p, None).unwrap().is_none());
        assert_eq!(classify(&x, &p).unwrap(), LiftVerdict::Undetermined);

        // Concave profile: the convex-image interval route handles it.
        let x = ToricDomain::toric_pl(vec![
            pt(0, 1, 10, 1),
            pt(8, 1, 6, 1),
            pt(12, 1, 0, 1),
        ])
        .unwrap();
        let p = path(&[(1, 1, 3, 1), (1, 1, 20, 1)]);
        let cert = general_criterion(&x, &p, None).unwrap().expect("lifts");
        assert!(verify_certificate(&x, &p, &cert).unwrap());
    }

    #[test]
    fn single_piece_sufficiency_implies_general() {
        // On any path where the family test certifies a lift, the footprint
        // route must as well (their single-piece feasible sets coincide).
        let regions = [
            ball3(),
            e13(),
            ShapeRegion::polydisk(Rat::one(), Rat::int(2)).unwrap(),
        ];
        let mut agreements = 0;
        for region in &regions {
            let x = region.domain();
            let q = reduced_query();
            for i in 1..=10 {
                for j in 1..=10 {
                    let start = Point::new(Rat::new(i, 8), Rat::new(j, 8));
                    if start.r >= start.s || !x.moment_contains(&start, &q) {
                        continue;
                    }
                    let mid = Point::new(&start.r - &Rat::new(1, 40), &start.s + &Rat::one());
                    let end = Point::new(mid.r.clone(), &mid.s + &Rat::int(4));
                    if !mid.r.is_positive() {
                        continue;
                    }
                    let p = PolyPath::new(vec![start, mid, end]).unwrap();
                    if sufficiency_ii(region, &p).unwrap().is_some() {
                        let g = general_criterion(&x, &p, None).unwrap();
                        assert!(g.is_some(), "{region:?} {p:?}");
                        assert!(verify_certificate(&x, &p, &g.unwrap()).unwrap());
                        agreements += 1;
                    }
                }
            }
        }
        assert!(agreements > 20, "only {agreements} certified samples");
    }

    #[test]
    fn classify_outputs_reverify() {
        // Every classify verdict carries re-checkable evidence.
        let regions = [ball3(), e13()];
        let mut lifts = 0;
        let mut obstructions = 0;
        for region in &regions {
            let x = region.domain();
            let q = reduced_query();
            for i in 1..=10 {
                for j in 1..=10 {
                    let start = Point::new(Rat::new(i, 6), Rat::new(j, 6));
                    if start.r > start.s || !x.moment_contains(&start, &q) {
                        continue;
                    }
                    let end = Point::new(start.r.clone(), &start.s + &Rat::int(5));
                    let p = PolyPath::new(vec![start, end]).unwrap();
                    match classify(&x, &p).unwrap() {
                        LiftVerdict::Lifts { certificate } => {
                            assert!(verify_certificate(&x, &p, &certificate).unwrap());
                            lifts += 1;
                        }
                        LiftVerdict::Obstructed { witness } => {
                            assert!(witness.form_min >= witness.threshold);
                            assert!(witness
                                .segment_trends
                                .iter()
                                .all(|t| *t != RatioTrend::NonDecreasing));
                            obstructions += 1;
                        }
                        LiftVerdict::Undetermined => {}
                    }
                }
            }
        }
        assert!(lifts > 5 && obstructions > 5, "lifts {lifts}, obstructions {obstructions}");
    }

    #[test]
    fn boundary_exactness_of_thresholds() {
        // At r = a/2 exactly, with the obstructing form exactly at its
        // threshold at the start: the non-strict obstruction applies while
        // the strict sufficiency bound r < a/2 can never hold.
        let x = e13().domain();
        let p = path(&[(1, 2, 1, 1), (1, 2, 7, 2)]);
        assert!(sufficiency_ii(&e13(), &p).unwrap().is_none());
        assert!(general_criterion(&x, &p, None).unwrap().is_none());
        let v = classify(&x, &p).unwrap();
        match v {
            LiftVerdict::Obstructed { witness } => {
                assert_eq!(witness.form_min, Rat::int(3));
                assert_eq!(witness.threshold, Rat::int(3));
            }
            other => panic!("expected the boundary obstruction, got {other:?}"),
        }
        // One hair narrower and the same path lifts instead.
        let p = path(&[(49, 100, 1, 1), (49, 100, 7, 2)]);
        assert!(matches!(classify(&x, &p).unwrap(), LiftVerdict::Lifts { .. }));
    }

    #[test]
    fn reversal_asymmetry_at_classify_level() {
        let x = e13().domain();
        let detour = path(&[(9, 20, 3, 2), (3, 10, 4, 5), (3, 10, 16, 5)]);
        assert!(matches!(
            classify(&x, &detour).unwrap(),
            LiftVerdict::Lifts { .. }
        ));
        // The reverse starts outside the image: a precondition error.
        assert!(classify(&x, &detour.reversed()).is_err());
    }

    #[test]
    fn classify_scenarios() {
        let x = e13().domain();
        // Inside the image all along: Type-I.
        let v = classify(&x, &path(&[(1, 10, 2, 10), (2, 10, 3, 10)])).unwrap();
        assert!(matches!(
            v,
            LiftVerdict::Lifts {
                certificate: LiftCertificate::TypeI { .. }
            }
        ));

        let v = classify(&x, &path(&[(9, 20, 3, 2), (9, 20, 16, 5)])).unwrap();
        assert!(matches!(v, LiftVerdict::Obstructed { .. }));

        let v = classify(&x, &path(&[(9, 20, 3, 2), (3, 10, 4, 5), (3, 10, 16, 5)])).unwrap();
        assert!(matches!(v, LiftVerdict::Lifts { .. }));

        // Starts in the flexible region (obstruction form dips below the
        // threshold) but drifts to r >= a/2 before exiting, so no
        // sufficiency route applies either.
        let v = classify(&x, &path(&[(2, 5, 1, 1), (3, 5, 17, 10), (3, 5, 4, 1)])).unwrap();
        assert_eq!(v, LiftVerdict::Undetermined);

        // Start outside: precondition error.
        assert!(classify(&x, &path(&[(2, 1, 3, 1), (2, 1, 4, 1)])).is_err());
    }

    #[test]
    fn certificates_reverify() {
        let cases: Vec<(ShapeRegion, PolyPath)> = vec![
            (ball3(), path(&[(1, 2, 1, 1), (1, 2, 7, 2)])),
            (e13(), path(&[(2, 5, 3, 5), (2, 5, 7, 2)])),
            (
                ShapeRegion::polydisk(Rat::one(), Rat::int(2)).unwrap(),
                path(&[(2, 5, 1, 2), (2, 5, 5, 2)]),
            ),
        ];
        for (region, p) in cases {
            let x = region.domain();
            let c = sufficiency_ii(&region, &p).unwrap().expect("lifts");
            assert!(verify_certificate(&x, &p, &c).unwrap(), "{region:?}");
            // A tampered switch parameter far in the suffix fails.
            if let LiftCertificate::TypeIi { start, end, .. } = &c {
                let bad = LiftCertificate::TypeIi {
                    start: start.clone(),
                    end: end.clone(),
                    t_star: end.clone(),
                };
                assert!(!verify_certificate(&x, &p, &bad).unwrap());
            }
        }
    }

    #[test]
    fn half_plane_persistence() {
        // For integer M + N <= 0 and a non-increasing-ratio path with
        // 0 < r <= s, positivity of M r + N s at the start persists.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut checked = 0;
        for _ in 0..400 {
            // Build a path with non-increasing vertex ratios.
            let mut verts = Vec::new();
            let mut ratio_num = 1 + (next() % 50) as i64;
            let mut ratio_den = ratio_num + (next() % 50) as i64;
            for _ in 0..4 {
                let s = Rat::new(1 + (next() % 200) as i64, 1 + (next() % 20) as i64);
                let r = &s * &Rat::new(ratio_num, ratio_den);
                verts.push(Point::new(r, s));
                // Decrease the ratio.
                ratio_den += (next() % 30) as i64;
                if ratio_num > 1 && next() % 2 == 0 {
                    ratio_num -= 1;
                }
            }
            verts.dedup();
            if verts.len() < 2 {
                continue;
            }
            let p = PolyPath::new(verts).unwrap();
            for seg in p.segments() {
                assert_ne!(
                    segment_ratio_trend(&seg).unwrap(),
                    RatioTrend::NonDecreasing
                );
            }
            let n = 1 + (next() % 5) as i64;
            let m = -n - (next() % 4) as i64;
            let start = &p.vertices()[0];
            let at_start = Rat::int(m) * &start.r + Rat::int(n) * &start.s;
            if !at_start.is_positive() {
                continue;
            }
            let (lo, _) = crate::geom::linear_extrema_on_path(&Rat::int(m), &Rat::int(n), &p);
            assert!(lo.is_positive(), "M={m} N={n} path {p:?}");
            checked += 1;
        }
        assert!(checked > 100, "only {checked} non-vacuous samples");
    }

    #[test]
    fn breakpoints_validated() {
        let x = ball3().domain();
        let p = path(&[(1, 2, 1, 1), (1, 2, 7, 2)]);
        assert!(general_criterion(&x, &p, Some(&[Rat::int(2)])).is_err());
        assert!(general_criterion(&x, &p, Some(&[Rat::zero()])).is_err());
        let c = general_criterion(&x, &p, Some(&[Rat::new(1, 4)])).unwrap();
        assert!(c.is_some());
        assert!(verify_certificate(&x, &p, &c.unwrap()).unwrap());
    }
}
