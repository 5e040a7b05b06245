//! Witness-based obstructions to symplectic embeddings into ellipsoids.
//!
//! To rule out an embedding of a toric star-shaped domain `X` into `E(a, b)`
//! with integer ratio `k = b/a`, one exhibits an inner ellipsoid `E` and an
//! oriented path of area classes: the path starts over a product torus of
//! `E`, stays in the moment image of `X` while avoiding the moment image of
//! `E(ak/(k+1), b)`, keeps a non-increasing ratio, and ends outside the
//! target's image. Verification is exact; the search is a best-effort grid
//! sweep whose results always re-verify, with no completeness claim.
//!
//! The excluded region is encoded by the affine condition
//! `(k+1) r + s >= b`, which is equivalent to avoiding the open image of
//! `E(ak/(k+1), b)` at positive area classes and uniformly covers the ball
//! case `k = 1`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::domains::{MomentQuery, ToricDomain};
use crate::error::Error;
use crate::geom::{segment_ratio_trend, Point, PolyPath, RatioTrend};
use crate::rat::Rat;

/// A candidate non-embedding claim: `source` should not embed into the
/// ellipsoid target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionInstance {
    pub source: ToricDomain,
    /// Target parameters `(a, b)` with `b/a` a positive integer.
    pub target_a: Rat,
    pub target_b: Rat,
}

impl ObstructionInstance {
    /// Target given as a ball or an ellipsoid with integer ratio `>= 1`.
    pub fn new(source: ToricDomain, target: &ToricDomain) -> Result<Self, Error> {
        let (a, b) = match target {
            ToricDomain::Ball { capacity } => (capacity.clone(), capacity.clone()),
            ToricDomain::Ellipsoid { a, b } => (a.clone(), b.clone()),
            _ => {
                return Err(Error::invalid(
                    "obstruction targets must be balls or ellipsoids",
                ))
            }
        };
        if (&b / &a).to_integer().is_none() {
            return Err(Error::invalid(format!(
                "obstruction targets need an integer ratio, got b/a = {}",
                &b / &a
            )));
        }
        Ok(ObstructionInstance {
            source,
            target_a: a,
            target_b: b,
        })
    }

    pub fn ratio(&self) -> BigInt {
        (&self.target_b / &self.target_a)
            .to_integer()
            .expect("validated at construction")
    }

    /// Whether the source's moment image already sits inside the target's:
    /// then an embedding exists by inclusion and no witness can verify.
    pub fn source_included(&self) -> bool {
        self.source
            .is_subset_of_ellipsoid(&self.target_a, &self.target_b)
    }
}

/// Witness data: the inner ellipsoid and the path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Inner ellipsoid parameters `(e_r, e_s)` with `e_r <= e_s`.
    pub inner: (Rat, Rat),
    pub path: PolyPath,
}

/// Conclusion of an obstruction attempt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "conclusion", rename_all = "snake_case")]
pub enum Conclusion {
    /// The witness verifies: no symplectic embedding of the source into the
    /// target exists.
    Obstructed { witness: Witness },
    /// No verified witness; absence of a witness proves nothing.
    Inconclusive,
}

/// Check every clause of the witness conditions exactly.
pub fn verify_witness(inst: &ObstructionInstance, witness: &Witness) -> Result<bool, Error> {
    let k = Rat::from_bigint(inst.ratio());
    let (e_r, e_s) = &witness.inner;
    if !e_r.is_positive() || e_s < e_r {
        return Ok(false);
    }
    let inner_triangle = [
        Point::new(Rat::zero(), Rat::zero()),
        Point::new(e_r.clone(), Rat::zero()),
        Point::new(Rat::zero(), e_s.clone()),
    ];

    // (i) inner ellipsoid inside both the source and the target image...
    if !inst.source.moment_contains_polygon(&inner_triangle, false) {
        return Ok(false);
    }
    if !(e_r <= &inst.target_a && e_s <= &inst.target_b) {
        return Ok(false);
    }
    // ... but escaping the excluded ellipsoid: with e_s <= b this forces
    // e_r > a k / (k + 1).
    let excluded_a = &(&inst.target_a * &k) / &(&k + &Rat::one());
    if !(e_r > &excluded_a || e_s > &inst.target_b) {
        return Ok(false);
    }

    // (ii) the path: reduced coordinates throughout, ...
    if witness.path.vertices().iter().any(|p| p.r > p.s) {
        return Ok(false);
    }
    // ... inside the source image, ...
    if !inst
        .source
        .moment_contains_path(&witness.path, &MomentQuery::open())
    {
        return Ok(false);
    }
    // ... avoiding the excluded region: (k+1) r + s >= b along the path, ...
    let kp1 = &k + &Rat::one();
    let (form_min, _) = crate::geom::linear_extrema_on_path(&kp1, &Rat::one(), &witness.path);
    if form_min < inst.target_b {
        return Ok(false);
    }
    // ... starting over a product torus of the inner ellipsoid, ...
    let start = witness.path.start();
    let inner = ToricDomain::ellipsoid(e_r.clone(), e_s.clone()).expect("validated above");
    if !inner.moment_contains(start, &MomentQuery::open()) {
        return Ok(false);
    }
    // ... ending outside the target image, ...
    let target = ToricDomain::ellipsoid(inst.target_a.clone(), inst.target_b.clone())?;
    if target.moment_contains(witness.path.end(), &MomentQuery::open()) {
        return Ok(false);
    }
    // ... with non-increasing ratio on every segment.
    for seg in witness.path.segments() {
        match segment_ratio_trend(&seg) {
            Ok(RatioTrend::NonIncreasing) | Ok(RatioTrend::Constant) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Grid search for a verifying witness.
///
/// `grid` is the denominator of the search lattice (resolution `1/grid`).
/// Inner ellipsoids are swept from large to small over grid fractions of
/// the target parameters, then a path is steered greedily: up-left moves
/// keep the ratio non-increasing, the shifted source boundary keeps it
/// inside, and the excluded-region form is tracked until the path can climb
/// past the target boundary. Every returned witness has passed
/// [`verify_witness`].
pub fn search_witness(inst: &ObstructionInstance, grid: u32) -> Result<Option<Witness>, Error> {
    if grid == 0 {
        return Err(Error::pre("grid resolution must be positive".to_string()));
    }
    if inst.source_included() {
        return Ok(None);
    }
    let step = Rat::new(1, grid as i64);
    let k = Rat::from_bigint(inst.ratio());
    let kp1 = &k + &Rat::one();
    let excluded_a = &(&inst.target_a * &k) / &kp1;
    let profile = inst.source.boundary_profile();
    let source_r_max = profile.last().unwrap().r.clone();

    let mut e_r = grid_floor(&inst.target_a.clone().min(source_r_max), grid);
    while e_r > excluded_a {
        if let Some(height) = max_inner_height(&profile, &e_r) {
            // Largest admissible grid height, then one step down as a
            // fallback when steering fails along the tight hypotenuse.
            let top = grid_floor(&height.min(inst.target_b.clone()), grid);
            for e_s in [top.clone(), &top - &step] {
                if e_s < e_r {
                    continue;
                }
                let triangle = [
                    Point::new(Rat::zero(), Rat::zero()),
                    Point::new(e_r.clone(), Rat::zero()),
                    Point::new(Rat::zero(), e_s.clone()),
                ];
                if !inst.source.moment_contains_polygon(&triangle, false) {
                    continue;
                }
                for margin_pow in 1..=3u32 {
                    let margin = &step / &Rat::int(1 << margin_pow);
                    if let Some(path) = steer_path(inst, &e_r, &e_s, &kp1, grid, &margin) {
                        let witness = Witness {
                            inner: (e_r.clone(), e_s.clone()),
                            path,
                        };
                        if verify_witness(inst, &witness)? {
                            return Ok(Some(witness));
                        }
                    }
                }
            }
        }
        e_r = e_r - &step;
    }
    Ok(None)
}

/// Largest `e_s` such that the closed triangle of `E(e_r, e_s)` sits under
/// the source profile: the hypotenuse is affine, so the binding abscissae
/// are the profile breakpoints.
fn max_inner_height(profile: &[Point], e_r: &Rat) -> Option<Rat> {
    if *e_r > profile.last().unwrap().r || !e_r.is_positive() {
        return None;
    }
    let mut best = profile[0].s.clone();
    for p in profile {
        if p.r.is_positive() && p.r < *e_r {
            // e_s (1 - x/e_r) <= f(x)  <=>  e_s <= f(x) e_r / (e_r - x).
            let bound = &(&p.s * e_r) / &(e_r - &p.r);
            best = best.min(bound);
        }
    }
    Some(best)
}

fn grid_floor(v: &Rat, grid: u32) -> Rat {
    let g = Rat::int(grid as i64);
    Rat::from_bigint((v * &g).floor_int()) / g
}

/// Greedy steering: pick a start over the inner ellipsoid on or above the
/// excluded-region boundary, then alternate climbs toward the shifted
/// source boundary with leftward slides along it until the path sits
/// outside the target.
fn steer_path(
    inst: &ObstructionInstance,
    e_r: &Rat,
    e_s: &Rat,
    kp1: &Rat,
    grid: u32,
    margin: &Rat,
) -> Option<PolyPath> {
    let b = &inst.target_b;
    let k = kp1 - &Rat::one();
    let k = &k;

    let shifted = |r: &Rat| -> Option<Rat> {
        let f = inst.source.boundary_height(r)?;
        let g = &f - margin;
        g.is_positive().then_some(g)
    };

    // Start point: largest grid abscissa whose vertical window inside both
    // the inner ellipsoid and the source meets the excluded-region side
    // r <= s; take the window midpoint.
    let step = Rat::new(1, grid as i64);
    let mut start = None;
    let mut r = grid_floor(e_r, grid);
    while r.is_positive() {
        // Strictly under the inner hypotenuse and the source boundary.
        let inner_top = &(e_s * &(e_r - &r)) / e_r;
        if let Some(source_top) = shifted(&r) {
            let hi = inner_top.min(source_top);
            let mut lo = b - &(kp1 * &r);
            if lo < r {
                lo = r.clone();
            }
            if lo < hi {
                start = Some(Point::new(r.clone(), (&lo + &hi) / Rat::int(2)));
                break;
            }
        }
        r = r - &step;
    }
    let start = start?;

    let mut vertices = vec![start.clone()];
    let mut cur = start;
    // Bounded number of climb-and-slide rounds: one per profile cell plus
    // slack for binding-constraint stops.
    let rounds = inst.source.boundary_profile().len() + 4;
    for _ in 0..rounds {
        // Done as soon as the current point is outside the target.
        if vertices.len() >= 2 && &(k * &cur.r) + &cur.s >= *b {
            return PolyPath::new(vertices).ok();
        }

        // Vertical exit: some s in (max(cur.s, b - k r), f(r) - margin).
        let ceiling = shifted(&cur.r)?;
        let exit_floor = b - &(k * &cur.r);
        let lo = if cur.s > exit_floor {
            cur.s.clone()
        } else {
            exit_floor
        };
        if ceiling > lo {
            let s_end = (&lo + &ceiling) / Rat::int(2);
            vertices.push(Point::new(cur.r.clone(), s_end));
            return PolyPath::new(vertices).ok();
        }

        // Climb to the shifted boundary.
        if ceiling > cur.s {
            cur = Point::new(cur.r.clone(), ceiling.clone());
            vertices.push(cur.clone());
        }

        // Slide left along the shifted boundary; stop at the earlier of the
        // next profile breakpoint and the point where the excluded-region
        // form binds.
        let profile = inst.source.boundary_profile();
        let cell = profile
            .windows(2)
            .find(|w| w[0].r < cur.r && cur.r <= w[1].r)?;
        let mut target_r = cell[0].r.clone();
        if !target_r.is_positive() {
            target_r = &cur.r / &Rat::int(2);
        }
        // (k+1) r + g(r) along the slide, g affine on the cell.
        let dr = &cell[1].r - &cell[0].r;
        let ds = &cell[1].s - &cell[0].s;
        let slope = &ds / &dr;
        let coeff = kp1 + &slope;
        let g0 = &cell[0].s - &(&slope * &cell[0].r) - margin;
        let at = |r: &Rat| -> Rat { &coeff * r + &g0 };
        if at(&target_r) < *b {
            // Solve (k+1) r + g(r) = b exactly.
            if !coeff.is_positive() {
                return None;
            }
            let bound = &(b - &g0) / &coeff;
            if bound >= cur.r {
                return None;
            }
            target_r = bound;
        }
        let next_s = shifted(&target_r)?;
        if target_r < next_s && target_r < cur.r {
            cur = Point::new(target_r, next_s);
            vertices.push(cur.clone());
        } else {
            return None;
        }
    }
    None
}

/// Conclude from a supplied witness, or search when none is given.
pub fn conclude(
    inst: &ObstructionInstance,
    witness: Option<&Witness>,
    search_grid: u32,
) -> Result<Conclusion, Error> {
    let found = match witness {
        Some(w) => verify_witness(inst, w)?.then(|| w.clone()),
        None => search_witness(inst, search_grid)?,
    };
    Ok(match found {
        Some(witness) => Conclusion::Obstructed { witness },
        None => Conclusion::Inconclusive,
    })
}
