//! Fredholm-index and holomorphic-building arithmetic.
//!
//! These are calculators and validators for the bookkeeping that constrains
//! limit buildings: index formulas for punctured curves with ends on torus
//! orbits, area/index totals under gluing, and the tree identities tying a
//! building component's index surplus to its homology content. No claim is
//! made that a validated configuration is realized by actual curves.
//!
//! Sign convention: operations consume raw integer pairs exactly as they
//! enter the printed formulas. An orbit described as "type `(-m, -n)`"
//! contributes the pair `(m, n)` to a plane's area and `-(m + n)` per end
//! to indices; [`orbit_type_to_formula_pair`] makes that conversion explicit
//! at the call site instead of guessing.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;

/// Asymptotic-end data of a punctured curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndData {
    /// One entry per positive end: Conley-Zehnder index plus half the
    /// dimension of the orbit's leaf space.
    pub pos_cz_plus_halfdim: Vec<Rat>,
    /// Negative ends on torus orbits, as the `(m, n)` pairs entering the
    /// index formula.
    pub neg_pairs: Vec<(i64, i64)>,
    /// Relative first Chern number of the trivialized pullback bundle.
    pub c1: i64,
}

/// Convert an orbit labeled "type `(-m, -n)`" into the `(m, n)` pair the
/// formulas consume.
pub fn orbit_type_to_formula_pair(type_m: i64, type_n: i64) -> (i64, i64) {
    (-type_m, -type_n)
}

impl EndData {
    /// Index with the negative ends on torus orbits.
    pub fn index(&self) -> i64 {
        index_torus_ends(&self.pos_cz_plus_halfdim, &self.neg_pairs)
    }

    /// Full Riemann-Roch index with explicit negative contributions.
    pub fn index_with_neg_terms(&self, neg_cz_minus_halfdim: &[Rat]) -> i64 {
        index_general(&self.pos_cz_plus_halfdim, self.c1, neg_cz_minus_halfdim)
    }
}

fn rat_sum_to_int(terms: &[Rat], what: &str) -> i64 {
    let total: Rat = terms.iter().sum();
    let int = total
        .to_integer()
        .unwrap_or_else(|| panic!("{what} must sum to an integer, got {total}"));
    i64::try_from(&int).expect("index fits i64")
}

/// Full Riemann-Roch index:
/// `(s+ + s- - 2) + 2 c1 + sum(CZ+ + dim/2) - sum(CZ- - dim/2)`.
///
/// The combined sums must be integral (half-integer terms pair up); a
/// non-integral total is a caller error and panics.
pub fn index_general(pos_cz_plus_halfdim: &[Rat], c1: i64, neg_cz_minus_halfdim: &[Rat]) -> i64 {
    let s_plus = pos_cz_plus_halfdim.len() as i64;
    let s_minus = neg_cz_minus_halfdim.len() as i64;
    let pos: Rat = pos_cz_plus_halfdim.iter().sum();
    let neg: Rat = neg_cz_minus_halfdim.iter().sum();
    let ends = rat_sum_to_int(&[pos, -neg], "Conley-Zehnder contributions");
    (s_plus + s_minus - 2) + 2 * c1 + ends
}

/// Index of a curve whose negative ends sit on torus orbits:
/// `(s+ + s- - 2) + sum(CZ+ + dim/2) + 2 sum(m_i + n_i)`.
pub fn index_torus_ends(pos_cz_plus_halfdim: &[Rat], neg_pairs: &[(i64, i64)]) -> i64 {
    let s_plus = pos_cz_plus_halfdim.len() as i64;
    let s_minus = neg_pairs.len() as i64;
    let pos = rat_sum_to_int(pos_cz_plus_halfdim, "positive-end contributions");
    let pair_sum: i64 = neg_pairs.iter().map(|(m, n)| m + n).sum();
    (s_plus + s_minus - 2) + pos + 2 * pair_sum
}

/// Index in the compactification by two spheres at infinity, for a curve of
/// bidegree `(d1, d2)`: `(s- - 2) + 4 (d1 + d2) + 2 sum(m_i + n_i)`.
pub fn index_bidegree(neg_pairs: &[(i64, i64)], d1: i64, d2: i64) -> i64 {
    let s_minus = neg_pairs.len() as i64;
    let pair_sum: i64 = neg_pairs.iter().map(|(m, n)| m + n).sum();
    (s_minus - 2) + 4 * (d1 + d2) + 2 * pair_sum
}

/// Area of a plane with one negative end of formula pair `(m, n)` on the
/// torus of area classes `(r, s)`: `r m + s n`. The caller asserts
/// positivity when the plane is holomorphic.
pub fn plane_area(r: &Rat, s: &Rat, m: i64, n: i64) -> Result<Rat, Error> {
    if !(r.is_positive() && s.is_positive()) {
        return Err(Error::pre(format!(
            "plane area needs positive area classes, got ({r}, {s})"
        )));
    }
    Ok(r * &Rat::int(m) + s * &Rat::int(n))
}

/// Per-component curve counts of a building component: `R` cobordism
/// curves, `Q` symplectization curves with their positive- and negative-end
/// counts.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ComponentCounts {
    pub cobordism_curves: u64,
    pub symplectization_curves: u64,
    /// `s_i^j`: positive-end count of each symplectization curve.
    pub positive_end_counts: Vec<u64>,
    /// `e_i^j`: negative-end count of each symplectization curve.
    pub negative_end_counts: Vec<u64>,
}

impl ComponentCounts {
    /// Euler-characteristic identity of the component's matching tree:
    /// `R + Q - (sum_j s_j - 1) = 1`.
    pub fn tree_identity_holds(&self) -> bool {
        let s_total: u64 = self.positive_end_counts.iter().sum();
        self.cobordism_curves as i128 + self.symplectization_curves as i128 - (s_total as i128 - 1)
            == 1
    }

    pub fn negative_ends(&self) -> u64 {
        self.negative_end_counts.iter().sum()
    }
}

/// Data of a holomorphic building: per-component indices and areas, the leaf
/// dimensions of matched orbits, and optionally per-component curve counts.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BuildingData {
    pub component_indices: Vec<i64>,
    pub matched_leaf_dims: Vec<i64>,
    pub component_areas: Vec<Rat>,
    #[serde(default)]
    pub tree: Vec<ComponentCounts>,
}

/// Total area and index of a glued building: areas add, and the index is
/// the component sum minus the matched leaf dimensions.
///
/// A connected building matches exactly `components - 1` orbits.
pub fn building_totals(b: &BuildingData) -> Result<(Rat, i64), Error> {
    if b.component_areas.len() != b.component_indices.len() {
        return Err(Error::invalid(
            "component areas and indices must have matching lengths",
        ));
    }
    if b.matched_leaf_dims.len() + 1 != b.component_indices.len() {
        return Err(Error::invalid(format!(
            "a connected building of {} components matches exactly {} orbits, got {}",
            b.component_indices.len(),
            b.component_indices.len() - 1,
            b.matched_leaf_dims.len()
        )));
    }
    let area: Rat = b.component_areas.iter().sum();
    let index: i64 =
        b.component_indices.iter().sum::<i64>() - b.matched_leaf_dims.iter().sum::<i64>();
    Ok((area, index))
}

/// Validate the homology bookkeeping of the components hanging off the top
/// curve of a degenerate building.
///
/// `b.tree[i]` and `b.component_indices[i]` describe component `C_i`;
/// `per_component_neg_sums[i]` is its total `sum (m + n)` over negative
/// ends; `ind_c0_minus_ends` is the (nonnegative, by hypothesis) index
/// surplus of the top curve. Checks, exactly:
///  (a) each component's matching tree has Euler characteristic one,
///  (b) each component's index exceeds its negative-end count by twice its
///      homology sum,
///  (c) the homology sums total at most zero.
pub fn tree_homology_check(
    b: &BuildingData,
    per_component_neg_sums: &[i64],
    ind_c0_minus_ends: i64,
) -> Result<bool, Error> {
    if ind_c0_minus_ends < 0 {
        return Err(Error::pre(
            "the top curve's index surplus is nonnegative by hypothesis".to_string(),
        ));
    }
    if b.tree.len() != per_component_neg_sums.len() || b.component_indices.len() != b.tree.len() {
        return Err(Error::invalid(
            "tree counts, indices, and homology sums must have matching lengths",
        ));
    }
    for (counts, (&index, &hom)) in b
        .tree
        .iter()
        .zip(b.component_indices.iter().zip(per_component_neg_sums))
    {
        if !counts.tree_identity_holds() {
            return Ok(false);
        }
        if index - counts.negative_ends() as i64 != 2 * hom {
            return Ok(false);
        }
    }
    Ok(per_component_neg_sums.iter().sum::<i64>() <= 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(ns: &[i64]) -> Vec<Rat> {
        ns.iter().map(|&n| Rat::int(n)).collect()
    }

    #[test]
    fn index_general_examples() {
        // One positive and one negative end, totals 2k+3 and 2k+2: index 1.
        for k in 1..=6 {
            let ind = index_general(&rats(&[2 * k + 3]), 0, &rats(&[2 * k + 2]));
            assert_eq!(ind, 1);
        }
        assert_eq!(index_general(&[], 0, &[]), -2);
        assert_eq!(index_general(&rats(&[3]), 0, &[]), 2);
        // Half-integer contributions cancel in pairs.
        let ind = index_general(
            &[Rat::new(7, 2), Rat::new(1, 2)],
            1,
            &[Rat::new(3, 2), Rat::new(1, 2)],
        );
        assert_eq!(ind, (2 + 2 - 2) + 2 + (4 - 2));
    }

    #[test]
    #[should_panic(expected = "integer")]
    fn index_general_rejects_non_integral_totals() {
        index_general(&[Rat::new(1, 2)], 0, &[]);
    }

    #[test]
    #[allow(clippy::identity_op)]
    fn end_data_methods() {
        let ends = EndData {
            pos_cz_plus_halfdim: rats(&[7]),
            neg_pairs: vec![(2, 1)],
            c1: 0,
        };
        assert_eq!(ends.index(), (1 + 1 - 2) + 7 + 2 * 3);
        assert_eq!(ends.index_with_neg_terms(&rats(&[6])), 1);
    }

    #[test]
    fn index_torus_ends_examples() {
        assert_eq!(index_torus_ends(&[], &[(1, 0)]), 1);
        assert_eq!(index_torus_ends(&[], &[]), -2);
        assert_eq!(index_torus_ends(&[], &[(0, -1)]), -3);
        assert_eq!(index_torus_ends(&[], &[(-2, 1)]), -3);
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn torus_ends_reduce_to_general_form() {
        // Setting each negative contribution to -2(m + n) recovers the
        // general formula.
        let cases: &[(&[i64], &[(i64, i64)])] = &[
            (&[7], &[(2, 1), (0, -1)]),
            (&[], &[(1, 0)]),
            (&[5, 3], &[(-1, -1), (2, 0), (0, 1)]),
        ];
        for (pos, pairs) in cases {
            let neg: Vec<Rat> = pairs.iter().map(|(m, n)| Rat::int(-2 * (m + n))).collect();
            assert_eq!(
                index_torus_ends(&rats(pos), pairs),
                index_general(&rats(pos), 0, &neg)
            );
        }
    }

    #[test]
    fn index_bidegree_examples() {
        assert_eq!(index_bidegree(&[(0, -1)], 0, 1), 1);
        assert_eq!(index_bidegree(&[], 0, 0), -2);
        assert_eq!(index_bidegree(&[(1, 0), (0, 1)], 1, 0), 8);
    }

    #[test]
    fn orbit_type_conversion() {
        // An orbit of type (0, -1) enters the formulas as the pair (0, 1).
        assert_eq!(orbit_type_to_formula_pair(0, -1), (0, 1));
        assert_eq!(index_bidegree(&[orbit_type_to_formula_pair(0, 1)], 0, 1), 1);
    }

    #[test]
    fn building_totals_examples() {
        let b = BuildingData {
            component_indices: vec![1, 1],
            matched_leaf_dims: vec![1],
            component_areas: vec![Rat::new(1, 2), Rat::new(1, 2)],
            tree: vec![],
        };
        assert_eq!(building_totals(&b).unwrap(), (Rat::one(), 1));

        let single = BuildingData {
            component_indices: vec![3],
            matched_leaf_dims: vec![],
            component_areas: vec![Rat::int(5)],
            tree: vec![],
        };
        assert_eq!(building_totals(&single).unwrap(), (Rat::int(5), 3));

        let chain = BuildingData {
            component_indices: vec![1; 5],
            matched_leaf_dims: vec![1; 4],
            component_areas: vec![Rat::one(); 5],
            tree: vec![],
        };
        assert_eq!(building_totals(&chain).unwrap().1, 1);

        let bad = BuildingData {
            component_indices: vec![1, 1, 1],
            matched_leaf_dims: vec![1],
            component_areas: vec![Rat::one(); 3],
            tree: vec![],
        };
        assert!(building_totals(&bad).is_err());
    }

    #[test]
    fn building_index_invariant_under_regrouping() {
        // Grouping sub-buildings differently preserves the total as long as
        // the matched leaf dimensions are preserved.
        let fine = BuildingData {
            component_indices: vec![1, 1, 1, 2],
            matched_leaf_dims: vec![1, 1, 1],
            component_areas: vec![Rat::one(); 4],
            tree: vec![],
        };
        let coarse = BuildingData {
            component_indices: vec![1, 1 + 1 - 1, 2],
            matched_leaf_dims: vec![1, 1],
            component_areas: vec![Rat::one(), Rat::int(2), Rat::one()],
            tree: vec![],
        };
        assert_eq!(
            building_totals(&fine).unwrap().1,
            building_totals(&coarse).unwrap().1
        );
    }

    #[test]
    fn plane_area_examples() {
        assert_eq!(
            plane_area(&Rat::one(), &Rat::int(2), 1, 0).unwrap(),
            Rat::one()
        );
        assert_eq!(
            plane_area(&Rat::new(3, 2), &Rat::int(5), 0, 0).unwrap(),
            Rat::zero()
        );
        // Cylinder-area cross-check at (r, s) = (1, 3), k = 3: the area
        // b - k r - s of the long cylinder is negative once kr + s >= b.
        let k = 3;
        let area = plane_area(&Rat::one(), &Rat::int(3), k, 1).unwrap();
        assert_eq!(area, Rat::int(6));
        let b = Rat::int(3);
        let cylinder = &b - &Rat::int(k) * &Rat::one() - Rat::int(3);
        assert!(cylinder.is_negative());
    }

    fn cylinder_component(hom: i64) -> (ComponentCounts, i64) {
        // One symplectization curve with two positive ends (one matching the
        // top curve) and one cobordism curve; one negative end.
        let counts = ComponentCounts {
            cobordism_curves: 1,
            symplectization_curves: 1,
            positive_end_counts: vec![2],
            negative_end_counts: vec![1],
        };
        // Index consistent with the homology sum: ind = 2*hom + ends.
        (counts, 2 * hom + 1)
    }

    #[test]
    fn tree_identity_examples() {
        let cyl = ComponentCounts {
            cobordism_curves: 0,
            symplectization_curves: 1,
            positive_end_counts: vec![1],
            negative_end_counts: vec![1],
        };
        assert!(cyl.tree_identity_holds());

        let paired = ComponentCounts {
            cobordism_curves: 1,
            symplectization_curves: 1,
            positive_end_counts: vec![2],
            negative_end_counts: vec![1],
        };
        assert!(paired.tree_identity_holds());

        let broken = ComponentCounts {
            cobordism_curves: 2,
            symplectization_curves: 1,
            positive_end_counts: vec![2],
            negative_end_counts: vec![1],
        };
        assert!(!broken.tree_identity_holds());
    }

    #[test]
    fn tree_homology_check_examples() {
        let sums = [1i64, -1, -1];
        let mut tree = Vec::new();
        let mut indices = Vec::new();
        for &h in &sums {
            let (c, ind) = cylinder_component(h);
            tree.push(c);
            indices.push(ind);
        }
        let b = BuildingData {
            component_indices: indices.clone(),
            matched_leaf_dims: vec![],
            component_areas: vec![],
            tree: tree.clone(),
        };
        assert!(tree_homology_check(&b, &sums, 1).unwrap());

        // A positive total falsifies the inequality.
        let sums_bad = [1i64, 1, -1];
        let mut tree2 = Vec::new();
        let mut indices2 = Vec::new();
        for &h in &sums_bad {
            let (c, ind) = cylinder_component(h);
            tree2.push(c);
            indices2.push(ind);
        }
        let b2 = BuildingData {
            component_indices: indices2,
            matched_leaf_dims: vec![],
            component_areas: vec![],
            tree: tree2,
        };
        assert!(!tree_homology_check(&b2, &sums_bad, 0).unwrap());

        // Inconsistent index/homology data is rejected as false.
        let mut b3 = b.clone();
        b3.component_indices[0] += 1;
        assert!(!tree_homology_check(&b3, &sums, 1).unwrap());

        assert!(tree_homology_check(&b, &sums, -1).is_err());
    }

    #[test]
    fn chain_building_scenario() {
        // A building of k+2 top-level curves, each of index 1, matched
        // through k+1 leaf-dimension-1 orbits has total index 1; with
        // balanced negative ends the plane areas sum to the cylinder area.
        for k in 1..=6i64 {
            let n = (k + 2) as usize;
            let b = BuildingData {
                component_indices: vec![1; n],
                matched_leaf_dims: vec![1; n - 1],
                component_areas: vec![Rat::zero(); n],
                tree: vec![],
            };
            assert_eq!(building_totals(&b).unwrap().1, 1);

            // k+1 planes of types (-1, 0) and (0, -1) with pair sums
            // cancelling: total homology zero.
            let mut pairs = vec![(1i64, 0i64); k as usize + 1];
            pairs.push((-(k + 1), 0));
            pairs.push((0, 1));
            pairs.push((0, -1));
            let (ms, ns): (i64, i64) = pairs
                .iter()
                .fold((0, 0), |(am, an), (m, n)| (am + m, an + n));
            assert_eq!((ms, ns), (0, 0));

            // Plane areas against the cylinder area b - k r - s at an area
            // class inside the triangle.
            let r = Rat::new(1, 4);
            let s = Rat::new(1, 2);
            let b_cap = Rat::int(k);
            let cyl = &b_cap - &(&Rat::int(k) * &r) - &s;
            let planes: Rat = pairs
                .iter()
                .filter(|(m, n)| Rat::int(*m) * Rat::one() + Rat::int(*n) >= Rat::zero())
                .map(|(m, n)| plane_area(&r, &s, *m, *n).unwrap())
                .sum();
            // The balanced types make the net area of all ends vanish.
            let net: Rat = pairs
                .iter()
                .map(|(m, n)| plane_area(&r, &s, *m, *n).unwrap())
                .sum();
            assert!(net.is_zero());
            assert!(planes.is_positive());
            assert!(cyl + planes > Rat::zero());
        }
    }
}
