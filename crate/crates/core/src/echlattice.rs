//! Capacity sequences of ellipsoids and lattice-point counting.
//!
//! `N(a, b)` is the weakly increasing sequence, with repetitions, of all
//! values `m*a + n*b` over nonnegative integers `m, n`; indexing starts at 0
//! with `N_0 = 0`, so the k-th ECH capacity of `E(a, b)` is entry `k`.
//! `R_{a,b}(t)` counts lattice points of the closed right triangle
//! `a*i + b*j <= t` and comes with two independent evaluators that the test
//! suites hold against each other. On top of these sit Pick's identity, the
//! sequence-comparison embedding criterion, and the closed-form count that
//! certifies one explicit family of volume-filling ellipsoid embeddings.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geom::Point;
use crate::rat::Rat;

/// Leading entries of the capacity sequence `N(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapSequence {
    pub a: Rat,
    pub b: Rat,
    /// `entries[k]` is the k-th value; `entries[0] = 0`.
    pub entries: Vec<Rat>,
}

/// Closed right triangle with vertices `(0,0)`, `(t/a, 0)`, `(0, t/b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeTriangle {
    pub a: Rat,
    pub b: Rat,
    pub t: Rat,
}

impl LatticeTriangle {
    pub fn new(a: Rat, b: Rat, t: Rat) -> Result<Self, Error> {
        check_positive_pair(&a, &b)?;
        if t.is_negative() {
            return Err(Error::invalid("lattice triangle needs t >= 0"));
        }
        Ok(LatticeTriangle { a, b, t })
    }

    pub fn count(&self, mode: CountMode) -> u64 {
        lattice_count_checked(&self.a, &self.b, &self.t, mode)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Sum of per-row interval lengths, one division per row.
    RowSum,
    /// Plain enumeration of the grid; the cross-checking oracle.
    BruteForce,
}

fn check_positive_pair(a: &Rat, b: &Rat) -> Result<(), Error> {
    if !(a.is_positive() && b.is_positive()) {
        return Err(Error::invalid(format!(
            "parameters must be positive, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// First `count + 1` entries of `N(a, b)`, exact rationals.
///
/// The grid values are merged in increasing order with a heap holding one
/// candidate per row, after clearing denominators so the comparisons are
/// integer comparisons.
pub fn cap_sequence(a: &Rat, b: &Rat, count: usize) -> Result<CapSequence, Error> {
    check_positive_pair(a, b)?;
    let denom = a.denom().lcm(b.denom());
    let ai = a.numer() * (&denom / a.denom());
    let bi = b.numer() * (&denom / b.denom());

    let mut entries = Vec::with_capacity(count + 1);
    // Heap entries are (value, m, n); popping (v, m, n) pushes the next
    // value of row n, and row n + 1 is opened when its first column pops.
    let mut heap: BinaryHeap<Reverse<(BigInt, u64, u64)>> = BinaryHeap::new();
    heap.push(Reverse((BigInt::zero(), 0, 0)));
    while entries.len() <= count {
        let Reverse((v, m, n)) = heap.pop().expect("heap never empties");
        entries.push(Rat::from_big(v.clone(), denom.clone()).expect("positive denom"));
        heap.push(Reverse((&v + &ai, m + 1, n)));
        if m == 0 {
            heap.push(Reverse((v + &bi, 0, n + 1)));
        }
    }
    Ok(CapSequence {
        a: a.clone(),
        b: b.clone(),
        entries,
    })
}

/// The k-th ECH capacity of `E(a, b)`, i.e. entry `k` of `N(a, b)`.
pub fn ech_capacity(a: &Rat, b: &Rat, k: usize) -> Result<Rat, Error> {
    Ok(cap_sequence(a, b, k)?.entries[k].clone())
}

/// Number of nonnegative integer pairs `(i, j)` with `a*i + b*j <= t`.
pub fn lattice_count(a: &Rat, b: &Rat, t: &Rat, mode: CountMode) -> Result<u64, Error> {
    check_positive_pair(a, b)?;
    if t.is_negative() {
        return Err(Error::invalid("lattice count needs t >= 0"));
    }
    Ok(lattice_count_checked(a, b, t, mode))
}

fn lattice_count_checked(a: &Rat, b: &Rat, t: &Rat, mode: CountMode) -> u64 {
    // Counts are invariant under clearing denominators simultaneously.
    let denom = a.denom().lcm(b.denom()).lcm(t.denom());
    let ai = a.numer() * (&denom / a.denom());
    let bi = b.numer() * (&denom / b.denom());
    let ti = t.numer() * (&denom / t.denom());
    if let (Some(a), Some(b), Some(t)) = (ai.to_u64(), bi.to_u64(), ti.to_u64()) {
        if t.checked_add(a.max(b)).is_some() {
            return match mode {
                CountMode::RowSum => row_sum_u64(a, b, t),
                CountMode::BruteForce => brute_force_u64(a, b, t),
            };
        }
    }
    match mode {
        CountMode::RowSum => row_sum_big(&ai, &bi, &ti),
        CountMode::BruteForce => brute_force_big(&ai, &bi, &ti),
    }
}

fn row_sum_u64(a: u64, b: u64, t: u64) -> u64 {
    (0..=t / b).map(|j| (t - j * b) / a + 1).sum()
}

fn brute_force_u64(a: u64, b: u64, t: u64) -> u64 {
    let mut count = 0;
    let mut j = 0;
    while j * b <= t {
        let mut i = 0;
        while i * a + j * b <= t {
            count += 1;
            i += 1;
        }
        j += 1;
    }
    count
}

fn row_sum_big(a: &BigInt, b: &BigInt, t: &BigInt) -> u64 {
    let rows = (t / b).to_u64().expect("row count fits u64");
    let mut count: u64 = 0;
    for j in 0..=rows {
        let rem = t - BigInt::from(j) * b;
        count += (&rem / a).to_u64().expect("column count fits u64") + 1;
    }
    count
}

fn brute_force_big(a: &BigInt, b: &BigInt, t: &BigInt) -> u64 {
    let mut count = 0;
    let mut jb = BigInt::zero();
    while jb <= *t {
        let mut v = jb.clone();
        while v <= *t {
            count += 1;
            v += a;
        }
        jb += b;
    }
    count
}

/// Shared value `k*A*(A+1)/2 + (A+1)` of the two triangle counts
/// `R_{k,(k+1)^2}` and `R_{k+1,k(k+1)}` at `t = A*k*(k+1)`.
pub fn closed_form_r(k: u64, big_a: u64) -> u64 {
    // A*(A+1) is even, so the halving is exact.
    k * big_a * (big_a + 1) / 2 + (big_a + 1)
}

/// Floor bookkeeping behind the closed-form count: for `b = floor(A/(k+1))`,
/// `B = A - b(k+1)`, `c = floor(Ak/(k+1))`, `C = Ak - c(k+1)`, either both
/// remainders vanish or they sum to `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorPair {
    pub b: u64,
    pub c: u64,
    pub big_b: u64,
    pub big_c: u64,
}

/// Computes the floor data and checks the dichotomy; an assertion failure
/// would falsify the identity the closed-form count rests on.
pub fn claim_bc(k: u64, big_a: u64) -> Result<FloorPair, Error> {
    if k < 1 {
        return Err(Error::pre("floor dichotomy needs k >= 1".to_string()));
    }
    let b = big_a / (k + 1);
    let big_b = big_a - b * (k + 1);
    let c = big_a * k / (k + 1);
    let big_c = big_a * k - c * (k + 1);
    let dichotomy = (big_b == 0 && big_c == 0) || big_b + big_c == k + 1;
    if !dichotomy {
        return Err(Error::invalid(format!(
            "floor dichotomy violated at k = {k}, A = {big_a}: B = {big_b}, C = {big_c}"
        )));
    }
    if big_b > 0 && big_b * k / (k + 1) != big_b - 1 {
        return Err(Error::invalid(format!(
            "floor identity violated at k = {k}, A = {big_a}: floor(Bk/(k+1)) != B - 1"
        )));
    }
    Ok(FloorPair { b, c, big_b, big_c })
}

/// Simple polygon with integer vertices.
pub struct LatticePolygon {
    vertices: Vec<(i64, i64)>,
}

impl LatticePolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, Error> {
        if vertices.len() < 3 {
            return Err(Error::invalid(
                "a lattice polygon needs at least three vertices",
            ));
        }
        let ints = vertices
            .iter()
            .map(|p| {
                let r = p.r.to_integer().and_then(|v| v.to_i64());
                let s = p.s.to_integer().and_then(|v| v.to_i64());
                match (r, s) {
                    (Some(r), Some(s)) => Ok((r, s)),
                    _ => Err(Error::invalid(format!(
                        "lattice polygons need integer vertices, got {p:?}"
                    ))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LatticePolygon { vertices: ints })
    }

    pub fn from_ints(vertices: Vec<(i64, i64)>) -> Result<Self, Error> {
        if vertices.len() < 3 {
            return Err(Error::invalid(
                "a lattice polygon needs at least three vertices",
            ));
        }
        Ok(LatticePolygon { vertices })
    }

    /// Twice the enclosed area, absolute value.
    pub fn double_area(&self) -> u64 {
        let n = self.vertices.len();
        let mut acc: i128 = 0;
        for i in 0..n {
            let (x0, y0) = self.vertices[i];
            let (x1, y1) = self.vertices[(i + 1) % n];
            acc += x0 as i128 * y1 as i128 - x1 as i128 * y0 as i128;
        }
        acc.unsigned_abs().try_into().expect("area fits u64")
    }

    /// Lattice points on the boundary: `gcd(|dx|, |dy|)` per edge.
    pub fn boundary_count(&self) -> u64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (x0, y0) = self.vertices[i];
                let (x1, y1) = self.vertices[(i + 1) % n];
                (x1 - x0).unsigned_abs().gcd(&(y1 - y0).unsigned_abs())
            })
            .sum()
    }

    fn on_boundary(&self, x: i64, y: i64) -> bool {
        let n = self.vertices.len();
        (0..n).any(|i| {
            let (x0, y0) = self.vertices[i];
            let (x1, y1) = self.vertices[(i + 1) % n];
            let cross = (x1 - x0) as i128 * (y - y0) as i128 - (y1 - y0) as i128 * (x - x0) as i128;
            cross == 0 && x >= x0.min(x1) && x <= x0.max(x1) && y >= y0.min(y1) && y <= y0.max(y1)
        })
    }

    fn strictly_inside(&self, x: i64, y: i64) -> bool {
        if self.on_boundary(x, y) {
            return false;
        }
        // Even-odd rule with a horizontal ray; exact in integers.
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let (x0, y0) = self.vertices[i];
            let (x1, y1) = self.vertices[(i + 1) % n];
            if (y0 > y) != (y1 > y) {
                // x-coordinate of the crossing compared exactly:
                // x < x0 + (y - y0)(x1 - x0)/(y1 - y0).
                let lhs = (x - x0) as i128 * (y1 - y0) as i128;
                let rhs = (y - y0) as i128 * (x1 - x0) as i128;
                let crosses = if y1 > y0 { lhs < rhs } else { lhs > rhs };
                if crosses {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Interior and boundary lattice-point counts by enumeration over the
    /// bounding box. Intended for small polygons.
    pub fn self_count(&self) -> (u64, u64) {
        let xs = self.vertices.iter().map(|v| v.0);
        let ys = self.vertices.iter().map(|v| v.1);
        let (x_lo, x_hi) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y_lo, y_hi) = (ys.clone().min().unwrap(), ys.max().unwrap());
        let mut interior = 0;
        let mut boundary = 0;
        for x in x_lo..=x_hi {
            for y in y_lo..=y_hi {
                if self.on_boundary(x, y) {
                    boundary += 1;
                } else if self.strictly_inside(x, y) {
                    interior += 1;
                }
            }
        }
        (interior, boundary)
    }
}

/// Pick's identity `interior + boundary/2 = area + 1`, verified in the
/// doubled integer form `2*interior + boundary = 2*area + 2`.
pub fn pick_check(polygon: &LatticePolygon, interior: u64, boundary: u64) -> bool {
    2 * interior + boundary == polygon.double_area() + 2
}

/// Pick's identity with both counts obtained by enumeration.
pub fn pick_self_check(polygon: &LatticePolygon) -> bool {
    let (interior, boundary) = polygon.self_count();
    pick_check(polygon, interior, boundary)
}

/// Outcome of the finite-horizon sequence comparison for
/// `E(c, d)` embedding into `E(a, b)`.
///
/// A first index with `N(c,d)_k > N(a,b)_k` obstructs; so does a volume
/// excess. `NoObstructionUpTo` is exactly what it says: the criterion
/// quantifies over every index, so a finite horizon never certifies
/// existence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum EmbedOutcome {
    NoObstructionUpTo {
        horizon: usize,
    },
    ObstructedAt {
        index: usize,
        source_entry: Rat,
        target_entry: Rat,
    },
    ObstructedByVolume {
        source_volume: Rat,
        target_volume: Rat,
    },
}

/// Compare `N(c, d)` against `N(a, b)` through index `horizon`, then apply
/// the volume necessary condition `c*d <= a*b`.
pub fn embedding_check(
    c: &Rat,
    d: &Rat,
    a: &Rat,
    b: &Rat,
    horizon: usize,
) -> Result<EmbedOutcome, Error> {
    if horizon < 1 {
        return Err(Error::pre(
            "embedding check needs a horizon of at least 1".to_string(),
        ));
    }
    let source = cap_sequence(c, d, horizon)?;
    let target = cap_sequence(a, b, horizon)?;
    for k in 0..=horizon {
        if source.entries[k] > target.entries[k] {
            return Ok(EmbedOutcome::ObstructedAt {
                index: k,
                source_entry: source.entries[k].clone(),
                target_entry: target.entries[k].clone(),
            });
        }
    }
    let source_volume = c * d;
    let target_volume = a * b;
    if source_volume > target_volume {
        return Ok(EmbedOutcome::ObstructedByVolume {
            source_volume,
            target_volume,
        });
    }
    Ok(EmbedOutcome::NoObstructionUpTo { horizon })
}

/// Check `R_{k,(k+1)^2}(t) >= R_{k+1,k(k+1)}(t)` for all `t <= horizon`.
///
/// The right-hand counter only jumps at multiples of `k + 1`, and both
/// counters are non-decreasing, so checking at those jump values decides
/// the inequality on the whole range.
pub fn verify_prop_embedding(k: u64, horizon: &Rat) -> Result<bool, Error> {
    if k < 1 {
        return Err(Error::pre("needs k >= 1".to_string()));
    }
    if !horizon.is_positive() {
        return Err(Error::pre("needs a positive horizon".to_string()));
    }
    let small = Rat::int(k as i64);
    let small_b = Rat::int(((k + 1) * (k + 1)) as i64);
    let large = Rat::int((k + 1) as i64);
    let large_b = Rat::int((k * (k + 1)) as i64);
    let step = Rat::int((k + 1) as i64);
    let jumps = (horizon / &step)
        .floor_int()
        .to_u64()
        .expect("horizon fits");
    for j in 0..=jumps {
        let t = &step * &Rat::int(j as i64);
        let lhs = lattice_count(&small, &small_b, &t, CountMode::RowSum)?;
        let rhs = lattice_count(&large, &large_b, &t, CountMode::RowSum)?;
        if lhs < rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
