//! Built-in verification suite.
//!
//! Eleven checks covering the headline claims the library decides: shape
//! boundary pairs, the closed-form lattice counts, the volume-filling
//! ellipsoid embedding family, capacity comparisons, the corner-domain
//! obstruction scenario, fiber disconnection, orientation asymmetry of
//! lifting, the equivalence of the two sufficiency routes, the randomized
//! oracle suites, and the index arithmetic. Randomized items use a fixed
//! seed so output is stable across runs.

use serde::Serialize;

use crate::domains::{MomentQuery, ToricDomain};
use crate::echlattice::{
    cap_sequence, claim_bc, closed_form_r, ech_capacity, embedding_check, lattice_count,
    pick_self_check, verify_prop_embedding, CountMode, EmbedOutcome, LatticePolygon,
};
use crate::geom::{linear_extrema_on_path, segment_ratio_trend, Point, PolyPath, RatioTrend};
use crate::obstruct::{search_witness, verify_witness, ObstructionInstance, Witness};
use crate::pathlift::{
    classify, general_criterion, obstruction_i, sufficiency_ii, verify_certificate, LiftVerdict,
};
use crate::rat::Rat;
use crate::sftindex::{building_totals, index_bidegree, index_general, BuildingData};
use crate::shape::{knotted_member, shape_member, ShapeRegion};

/// Result of one suite item.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            pass: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            pass: false,
            detail: detail.into(),
        }
    }

    fn of(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            pass,
            detail: detail.into(),
        }
    }
}

/// Deterministic 64-bit generator (splitmix64); keeps the randomized suites
/// reproducible without an external dependency.
pub(crate) struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn pt(rn: i64, rd: i64, sn: i64, sd: i64) -> Point {
    Point::of(rn, rd, sn, sd)
}

pub fn check_shape_boundary_pair() -> CheckOutcome {
    let name = "shape_boundary_pair";
    let ball = match ShapeRegion::ball(rat(301, 100)) {
        Ok(b) => b,
        Err(e) => return CheckOutcome::fail(name, e.to_string()),
    };
    let inside = shape_member(&ball, &pt(1, 1, 2, 1));
    let outside = shape_member(&ball, &pt(2, 1, 3, 1));
    match (inside, outside) {
        (Ok(true), Ok(false)) => CheckOutcome::pass(
            name,
            "(1,2) in the ball region, (2,3) outside, at capacity 301/100",
        ),
        other => CheckOutcome::fail(name, format!("got {other:?}")),
    }
}

pub fn check_lattice_closed_form() -> CheckOutcome {
    let name = "lattice_closed_form";
    let mut checked = 0;
    for k in 1..=6u64 {
        for big_a in 0..=12u64 {
            let expected = closed_form_r(k, big_a);
            let t = Rat::int((big_a * k * (k + 1)) as i64);
            let steep = lattice_count(
                &Rat::int(k as i64),
                &Rat::int(((k + 1) * (k + 1)) as i64),
                &t,
                CountMode::BruteForce,
            );
            let shallow = lattice_count(
                &Rat::int((k + 1) as i64),
                &Rat::int((k * (k + 1)) as i64),
                &t,
                CountMode::BruteForce,
            );
            match (steep, shallow) {
                (Ok(x), Ok(y)) if x == expected && y == expected => checked += 2,
                other => {
                    return CheckOutcome::fail(
                        name,
                        format!("k={k} A={big_a}: expected {expected}, got {other:?}"),
                    )
                }
            }
        }
    }
    CheckOutcome::of(
        name,
        checked == 156,
        format!("{checked}/156 exact equalities"),
    )
}

pub fn check_ellipsoid_embedding_family() -> CheckOutcome {
    let name = "ellipsoid_embedding_family";
    for k in 1..=5u64 {
        let horizon = Rat::int((30 * k * (k + 1)) as i64);
        match verify_prop_embedding(k, &horizon) {
            Ok(true) => {}
            other => return CheckOutcome::fail(name, format!("count comparison k={k}: {other:?}")),
        }
    }
    for k in 1..=3i64 {
        let source = cap_sequence(&Rat::int(k), &Rat::int((k + 1) * (k + 1)), 2000);
        let target = cap_sequence(&Rat::int(k + 1), &Rat::int(k * (k + 1)), 2000);
        match (source, target) {
            (Ok(s), Ok(t)) => {
                if let Some(j) = (0..=2000).find(|&j| s.entries[j] > t.entries[j]) {
                    return CheckOutcome::fail(
                        name,
                        format!("capacity comparison fails at k={k}, index {j}"),
                    );
                }
            }
            other => return CheckOutcome::fail(name, format!("{other:?}")),
        }
    }
    CheckOutcome::pass(
        name,
        "counts dominate at every jump for k <= 5; capacities dominate to index 2000 for k <= 3",
    )
}

pub fn check_volume_filling_pair() -> CheckOutcome {
    let name = "volume_filling_pair";
    let e14 = ToricDomain::ellipsoid(Rat::one(), Rat::int(4)).expect("valid");
    let b2 = ToricDomain::ball(Rat::int(2)).expect("valid");
    if e14.volume() != Rat::int(2) || b2.volume() != Rat::int(2) {
        return CheckOutcome::fail(
            name,
            format!("volumes: {} and {}", e14.volume(), b2.volume()),
        );
    }
    match embedding_check(&Rat::one(), &Rat::int(4), &Rat::int(2), &Rat::int(2), 2000) {
        Ok(EmbedOutcome::NoObstructionUpTo { horizon: 2000 }) => CheckOutcome::pass(
            name,
            "equal volumes and no capacity obstruction through index 2000",
        ),
        other => CheckOutcome::fail(name, format!("{other:?}")),
    }
}

pub fn check_capacity_gap() -> CheckOutcome {
    let name = "capacity_gap";
    let lhs = ech_capacity(&Rat::one(), &Rat::int(3), 3);
    let rhs = ech_capacity(&rat(6, 5), &rat(12, 5), 3);
    match (lhs, rhs) {
        (Ok(l), Ok(r)) if l == Rat::int(3) && r == rat(12, 5) && l > r => {
            CheckOutcome::pass(name, "entry 3: 3 for E(1,3) versus 12/5 for E(6/5,12/5)")
        }
        other => CheckOutcome::fail(name, format!("{other:?}")),
    }
}

pub(crate) fn corner_instance() -> ObstructionInstance {
    let source = ToricDomain::toric_pl(vec![pt(0, 1, 24, 1), pt(2, 1, 17, 1), pt(19, 1, 0, 1)])
        .expect("valid profile");
    let target = ToricDomain::ball(Rat::int(20)).expect("valid");
    ObstructionInstance::new(source, &target).expect("integral target")
}

pub(crate) fn corner_witness() -> Witness {
    Witness {
        inner: (Rat::int(16), Rat::int(16)),
        path: PolyPath::new(vec![
            pt(7, 1, 8, 1),
            pt(5, 2, 16, 1),
            pt(2, 1, 84, 5),
            pt(1, 2, 22, 1),
        ])
        .expect("valid path"),
    }
}

pub fn check_obstruction_witness() -> CheckOutcome {
    let name = "obstruction_witness";
    let inst = corner_instance();
    match verify_witness(&inst, &corner_witness()) {
        Ok(true) => {}
        other => return CheckOutcome::fail(name, format!("hand witness: {other:?}")),
    }
    match search_witness(&inst, 4) {
        Ok(Some(w)) => match verify_witness(&inst, &w) {
            Ok(true) => CheckOutcome::pass(
                name,
                format!(
                    "hand witness verifies; search at grid 1/4 found inner E({}, {})",
                    w.inner.0, w.inner.1
                ),
            ),
            other => CheckOutcome::fail(name, format!("searched witness: {other:?}")),
        },
        other => CheckOutcome::fail(name, format!("search: {other:?}")),
    }
}

pub fn check_fiber_disconnection() -> CheckOutcome {
    let name = "fiber_disconnection";
    let x = ToricDomain::ellipsoid(Rat::one(), Rat::int(3)).expect("valid");
    let region = ShapeRegion::try_from(&x).expect("integral");
    let vertical = PolyPath::new(vec![pt(9, 20, 3, 2), pt(9, 20, 16, 5)]).expect("valid");
    let detour =
        PolyPath::new(vec![pt(9, 20, 3, 2), pt(3, 10, 4, 5), pt(3, 10, 16, 5)]).expect("valid");
    let up = classify(&x, &vertical);
    let around = classify(&x, &detour);
    let knotted = knotted_member(&region, &pt(9, 20, 3, 2));
    let ok = matches!(up, Ok(LiftVerdict::Obstructed { .. }))
        && matches!(around, Ok(LiftVerdict::Lifts { .. }))
        && matches!(knotted, Ok(true));
    CheckOutcome::of(
        name,
        ok,
        format!(
            "vertical {:?}, detour {:?}, knotted fiber {:?}",
            up.map(|v| variant_name(&v)),
            around.map(|v| variant_name(&v)),
            knotted
        ),
    )
}

fn variant_name(v: &LiftVerdict) -> &'static str {
    match v {
        LiftVerdict::Lifts { .. } => "lifts",
        LiftVerdict::Obstructed { .. } => "obstructed",
        LiftVerdict::Undetermined => "undetermined",
    }
}

pub fn check_orientation_asymmetry() -> CheckOutcome {
    let name = "orientation_asymmetry";
    let x = ToricDomain::ellipsoid(Rat::one(), Rat::int(3)).expect("valid");
    let region = ShapeRegion::try_from(&x).expect("integral");
    let forward = PolyPath::new(vec![
        pt(3, 10, 4, 5),
        pt(3, 10, 3, 1),
        pt(9, 20, 16, 5),
        pt(9, 20, 3, 2),
    ])
    .expect("valid");
    let cert = match general_criterion(&x, &forward, None) {
        Ok(Some(c)) => c,
        other => return CheckOutcome::fail(name, format!("forward loop: {other:?}")),
    };
    match verify_certificate(&x, &forward, &cert) {
        Ok(true) => {}
        other => return CheckOutcome::fail(name, format!("certificate recheck: {other:?}")),
    }
    let reverse = forward.reversed();
    let first_leg = PolyPath::new(reverse.vertices()[..2].to_vec()).expect("valid");
    match obstruction_i(&region, &first_leg) {
        Ok(Some(_)) => CheckOutcome::pass(
            name,
            "loop lifts clockwise; the reverse's initial leg is obstructed",
        ),
        other => CheckOutcome::fail(name, format!("reverse leg: {other:?}")),
    }
}

pub fn check_criterion_equivalence() -> CheckOutcome {
    let name = "criterion_equivalence";
    let cases = [
        ShapeRegion::ball(Rat::int(3)).expect("valid"),
        ShapeRegion::ellipsoid(Rat::one(), Rat::int(3)).expect("valid"),
        ShapeRegion::polydisk(Rat::one(), Rat::int(2)).expect("valid"),
    ];
    let query = MomentQuery::open().reduced().positive();
    let mut compared = 0u32;
    for region in &cases {
        let x = region.domain();
        let profile = x.boundary_profile();
        let r_max = &profile.last().expect("nonempty").r;
        let s_max = &profile[0].s;
        let climb = s_max + Rat::int(1);
        for i in 1..=50i64 {
            for j in 1..=50i64 {
                let start = Point::new(r_max * &rat(i, 51), s_max * &rat(j, 51));
                if start.r >= start.s || !x.moment_contains(&start, &query) {
                    continue;
                }
                let end = Point::new(start.r.clone(), &start.s + &climb);
                let path = PolyPath::new(vec![start, end]).expect("distinct");
                let direct = match sufficiency_ii(region, &path) {
                    Ok(v) => v.is_some(),
                    Err(e) => return CheckOutcome::fail(name, e.to_string()),
                };
                let footprint = match general_criterion(&x, &path, None) {
                    Ok(v) => v.is_some(),
                    Err(e) => return CheckOutcome::fail(name, e.to_string()),
                };
                if direct != footprint {
                    return CheckOutcome::fail(
                        name,
                        format!("{region:?}: disagree at {:?}", path.start()),
                    );
                }
                compared += 1;
            }
        }
    }
    CheckOutcome::of(
        name,
        compared > 1000,
        format!("routes agree on {compared} vertical probes"),
    )
}

fn oracle_row_sum_vs_brute(rng: &mut SplitMix) -> Result<u32, String> {
    let mut runs = 0;
    for _ in 0..500 {
        let a = rat(1 + rng.below(40) as i64, 1 + rng.below(40) as i64);
        let b = rat(1 + rng.below(40) as i64, 1 + rng.below(40) as i64);
        let small = if a < b { a.clone() } else { b.clone() };
        let t = &small * &rat(rng.below(2001) as i64, 10);
        let rs = lattice_count(&a, &b, &t, CountMode::RowSum).map_err(|e| e.to_string())?;
        let bf = lattice_count(&a, &b, &t, CountMode::BruteForce).map_err(|e| e.to_string())?;
        if rs != bf {
            return Err(format!(
                "row sum {rs} != brute force {bf} at a={a} b={b} t={t}"
            ));
        }
        runs += 1;
    }
    Ok(runs)
}

fn oracle_sequence_vs_counting(rng: &mut SplitMix) -> Result<u32, String> {
    let mut runs = 0;
    for _ in 0..50 {
        let a = rat(1 + rng.below(12) as i64, 1 + rng.below(6) as i64);
        let b = &a + &rat(rng.below(30) as i64, 1 + rng.below(6) as i64);
        let seq = cap_sequence(&a, &b, 200).map_err(|e| e.to_string())?;
        for (k, t) in seq.entries.iter().enumerate() {
            let count = lattice_count(&a, &b, t, CountMode::RowSum).map_err(|e| e.to_string())?;
            if count < k as u64 + 1 {
                return Err(format!("R(N_{k}) = {count} < {} at a={a} b={b}", k + 1));
            }
            if let Some(prev) = seq.entries[..k].iter().rev().find(|p| *p < t) {
                let mid = (prev + t) / Rat::int(2);
                let below =
                    lattice_count(&a, &b, &mid, CountMode::RowSum).map_err(|e| e.to_string())?;
                if below > k as u64 {
                    return Err(format!("R just below N_{k} is {below} at a={a} b={b}"));
                }
            }
        }
        runs += 1;
    }
    Ok(runs)
}

fn oracle_floor_dichotomy() -> Result<u32, String> {
    let mut runs = 0;
    for k in 1..=10 {
        for big_a in 0..=50 {
            claim_bc(k, big_a).map_err(|e| e.to_string())?;
            runs += 1;
        }
    }
    Ok(runs)
}

fn oracle_pick(rng: &mut SplitMix) -> Result<u32, String> {
    let mut runs = 0;
    for i in 0..100 {
        let w = 1 + rng.below(24) as i64;
        let h = 1 + rng.below(24) as i64;
        let poly = if i % 2 == 0 {
            LatticePolygon::from_ints(vec![(0, 0), (w, 0), (0, h)])
        } else {
            let x1 = rng.below(w as u64) as i64;
            LatticePolygon::from_ints(vec![(0, 0), (w, 0), (x1, h), (0, h)])
        }
        .map_err(|e| e.to_string())?;
        if !pick_self_check(&poly) {
            return Err(format!("Pick identity fails for sample {i} (w={w}, h={h})"));
        }
        runs += 1;
    }
    Ok(runs)
}

fn oracle_half_plane_persistence(rng: &mut SplitMix) -> Result<u32, String> {
    let mut non_vacuous = 0;
    let mut attempts = 0;
    while non_vacuous < 1000 && attempts < 20000 {
        attempts += 1;
        // Path with non-increasing vertex ratios and 0 < r <= s.
        let mut verts: Vec<Point> = Vec::new();
        let mut num = 1 + rng.below(40) as i64;
        let mut den = num + rng.below(40) as i64;
        for _ in 0..2 + rng.below(3) {
            let s = rat(1 + rng.below(300) as i64, 1 + rng.below(25) as i64);
            let r = &s * &rat(num, den);
            let p = Point::new(r, s);
            if verts.last() != Some(&p) {
                verts.push(p);
            }
            den += 1 + rng.below(25) as i64;
            if num > 1 && rng.below(2) == 0 {
                num -= 1;
            }
        }
        if verts.len() < 2 {
            continue;
        }
        let path = PolyPath::new(verts).map_err(|e| e.to_string())?;
        for seg in path.segments() {
            if segment_ratio_trend(&seg).map_err(|e| e.to_string())? == RatioTrend::NonDecreasing {
                return Err(format!("generator produced an increasing ratio: {path:?}"));
            }
        }
        let n = 1 + rng.below(5) as i64;
        let m = -n - rng.below(4) as i64;
        let start = &path.vertices()[0];
        let at_start = Rat::int(m) * &start.r + Rat::int(n) * &start.s;
        if !at_start.is_positive() {
            continue;
        }
        let (lo, _) = linear_extrema_on_path(&Rat::int(m), &Rat::int(n), &path);
        if !lo.is_positive() {
            return Err(format!("persistence fails for M={m} N={n} on {path:?}"));
        }
        non_vacuous += 1;
    }
    if non_vacuous < 1000 {
        return Err(format!("only {non_vacuous} non-vacuous samples"));
    }
    Ok(non_vacuous)
}

pub fn check_oracle_suites() -> CheckOutcome {
    let name = "oracle_suites";
    let mut rng = SplitMix(0x5EED_0001);
    let counts = oracle_row_sum_vs_brute(&mut rng)
        .and_then(|a| oracle_sequence_vs_counting(&mut rng).map(|b| (a, b)))
        .and_then(|(a, b)| oracle_floor_dichotomy().map(|c| (a, b, c)))
        .and_then(|(a, b, c)| oracle_pick(&mut rng).map(|d| (a, b, c, d)))
        .and_then(|(a, b, c, d)| oracle_half_plane_persistence(&mut rng).map(|e| (a, b, c, d, e)));
    match counts {
        Ok((a, b, c, d, e)) => CheckOutcome::pass(
            name,
            format!(
                "count agreement x{a}, sequence/count ties x{b}, floor dichotomy x{c}, \
                 Pick identity x{d}, half-plane persistence x{e}"
            ),
        ),
        Err(msg) => CheckOutcome::fail(name, msg),
    }
}

pub fn check_index_arithmetic() -> CheckOutcome {
    let name = "index_arithmetic";
    for k in 1..=6i64 {
        let ind = index_general(&[Rat::int(2 * k + 3)], 0, &[Rat::int(2 * k + 2)]);
        if ind != 1 {
            return CheckOutcome::fail(name, format!("cylinder index at k={k}: {ind}"));
        }
    }
    if index_bidegree(&[(0, -1)], 0, 1) != 1 {
        return CheckOutcome::fail(name, "bidegree plane index".to_string());
    }
    for k in 1..=5usize {
        let b = BuildingData {
            component_indices: vec![1; k + 1],
            matched_leaf_dims: vec![1; k],
            component_areas: vec![Rat::zero(); k + 1],
            tree: vec![],
        };
        match building_totals(&b) {
            Ok((_, 1)) => {}
            other => return CheckOutcome::fail(name, format!("building totals: {other:?}")),
        }
    }
    CheckOutcome::pass(
        name,
        "index formulas and building totals reproduce their instances",
    )
}

type Check = fn() -> CheckOutcome;

pub const SUITE: &[(&str, Check)] = &[
    ("shape_boundary_pair", check_shape_boundary_pair),
    ("lattice_closed_form", check_lattice_closed_form),
    (
        "ellipsoid_embedding_family",
        check_ellipsoid_embedding_family,
    ),
    ("volume_filling_pair", check_volume_filling_pair),
    ("capacity_gap", check_capacity_gap),
    ("obstruction_witness", check_obstruction_witness),
    ("fiber_disconnection", check_fiber_disconnection),
    ("orientation_asymmetry", check_orientation_asymmetry),
    ("criterion_equivalence", check_criterion_equivalence),
    ("oracle_suites", check_oracle_suites),
    ("index_arithmetic", check_index_arithmetic),
];

/// Run the whole suite, with at most `threads` items in flight.
pub fn run_suite(threads: usize) -> Vec<CheckOutcome> {
    let threads = threads.max(1).min(SUITE.len());
    if threads == 1 {
        return SUITE.iter().map(|(_, f)| f()).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut results: Vec<Option<CheckOutcome>> = (0..SUITE.len()).map(|_| None).collect();
    let slots: Vec<std::sync::Mutex<&mut Option<CheckOutcome>>> =
        results.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= SUITE.len() {
                    break;
                }
                let outcome = (SUITE[i].1)();
                **slots[i].lock().expect("slot lock") = Some(outcome);
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("all slots filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_are_unique() {
        let mut names: Vec<_> = SUITE.iter().map(|(n, _)| n).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), SUITE.len());
    }

    #[test]
    fn parallel_and_serial_agree() {
        // Compare only the cheap deterministic items by name and verdict.
        let quick = [check_shape_boundary_pair(), check_capacity_gap()];
        for outcome in quick {
            assert!(outcome.pass, "{}: {}", outcome.name, outcome.detail);
        }
    }
}
