//! Reduced Hamiltonian shape invariants and knotted-torus regions.
//!
//! A shape region is the set of area classes `(r, s)` of product Lagrangian
//! tori embeddable in a ball, an integral ellipsoid, or a polydisk. For each
//! family it is the open moment image together with a vertical strip; the
//! knotted regions are the slivers where the fiber of the area-class
//! projection is disconnected. Strictness follows the source formulas
//! exactly: knotted regions pair a non-strict cap on `r` with a strict
//! lower bound on the obstructing form, and shape regions are all-strict.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::domains::{MomentQuery, ToricDomain};
use crate::error::Error;
use crate::geom::Point;
use crate::rat::Rat;

/// A domain family whose reduced shape invariant has a closed-form
/// description: balls, ellipsoids with integer aspect ratio at least two,
/// and polydisks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeRegion {
    Ball { capacity: Rat },
    Ellipsoid { a: Rat, b: Rat, k: BigInt },
    Polydisk { c: Rat, d: Rat },
}

impl ShapeRegion {
    pub fn ball(capacity: Rat) -> Result<Self, Error> {
        if !capacity.is_positive() {
            return Err(Error::invalid("ball capacity must be positive"));
        }
        Ok(ShapeRegion::Ball { capacity })
    }

    /// Integral ellipsoid; fails unless `b/a` is an integer `>= 2`.
    pub fn ellipsoid(a: Rat, b: Rat) -> Result<Self, Error> {
        if !a.is_positive() {
            return Err(Error::invalid("ellipsoid parameter a must be positive"));
        }
        let k = (&b / &a)
            .to_integer()
            .filter(|k| *k >= BigInt::from(2))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "shape region needs an integral ellipsoid with b/a >= 2, got b/a = {}",
                    &b / &a
                ))
            })?;
        Ok(ShapeRegion::Ellipsoid { a, b, k })
    }

    pub fn polydisk(c: Rat, d: Rat) -> Result<Self, Error> {
        if !c.is_positive() {
            return Err(Error::invalid("polydisk parameter c must be positive"));
        }
        if d < c {
            return Err(Error::invalid("polydisk parameters must satisfy c <= d"));
        }
        Ok(ShapeRegion::Polydisk { c, d })
    }

    pub fn domain(&self) -> ToricDomain {
        match self {
            ShapeRegion::Ball { capacity } => ToricDomain::Ball {
                capacity: capacity.clone(),
            },
            ShapeRegion::Ellipsoid { a, b, .. } => ToricDomain::Ellipsoid {
                a: a.clone(),
                b: b.clone(),
            },
            ShapeRegion::Polydisk { c, d } => ToricDomain::Polydisk {
                c: c.clone(),
                d: d.clone(),
            },
        }
    }
}

impl TryFrom<&ToricDomain> for ShapeRegion {
    type Error = Error;

    fn try_from(x: &ToricDomain) -> Result<Self, Error> {
        match x {
            ToricDomain::Ball { capacity } => ShapeRegion::ball(capacity.clone()),
            ToricDomain::Ellipsoid { a, b } => ShapeRegion::ellipsoid(a.clone(), b.clone()),
            ToricDomain::Polydisk { c, d } => ShapeRegion::polydisk(c.clone(), d.clone()),
            ToricDomain::ToricPl { .. } => Err(Error::invalid(
                "shape invariants are only computed for balls, integral ellipsoids, and polydisks",
            )),
        }
    }
}

fn require_positive(p: &Point) -> Result<(), Error> {
    if !(p.r.is_positive() && p.s.is_positive()) {
        return Err(Error::pre(format!(
            "area classes must be positive, got ({}, {})",
            p.r, p.s
        )));
    }
    Ok(())
}

/// Membership of `(r, s)` in the reduced shape invariant.
///
/// Input is normalized to `r <= s` by swapping, which is legitimate because
/// the invariant is symmetric under `(r, s) -> (s, r)`.
pub fn shape_member(region: &ShapeRegion, p: &Point) -> Result<bool, Error> {
    require_positive(p)?;
    let (r, s) = if p.r <= p.s {
        (&p.r, &p.s)
    } else {
        (&p.s, &p.r)
    };
    Ok(match region {
        ShapeRegion::Ball { capacity } => &(r + s) < capacity || r + r < *capacity,
        ShapeRegion::Ellipsoid { a, b, .. } => &(b * r) + &(a * s) < a * b || &Rat::int(3) * r < *a,
        ShapeRegion::Polydisk { c, d } => (r < c && s < d) || &Rat::int(2) * r < *c,
    })
}

/// True when the fiber over `(r, s)` is guaranteed to contain a knotted
/// Lagrangian torus.
///
/// Stated only on reduced coordinates: `r > s` is a domain error rather than
/// a silent swap, because the regions say nothing about reflected fibers.
pub fn knotted_member(region: &ShapeRegion, p: &Point) -> Result<bool, Error> {
    require_positive(p)?;
    if p.r > p.s {
        return Err(Error::pre(format!(
            "knotted regions are stated on reduced coordinates r <= s, got ({}, {})",
            p.r, p.s
        )));
    }
    let open = MomentQuery::open();
    Ok(match region {
        ShapeRegion::Ball { capacity } => {
            region.domain().moment_contains(p, &open)
                && &Rat::int(3) * &p.r <= *capacity
                && &(&Rat::int(2) * &p.r) + &p.s > *capacity
        }
        ShapeRegion::Ellipsoid { a, b, k } => {
            let k = Rat::from_bigint(k.clone());
            region.domain().moment_contains(p, &open)
                && &Rat::int(2) * &p.r <= *a
                && &(&(&k + &Rat::one()) * &p.r) + &p.s > *b
        }
        ShapeRegion::Polydisk { c, d } => {
            region.domain().moment_contains(p, &open)
                && &Rat::int(2) * &p.r <= *c
                && &p.r + &p.s > *d
        }
    })
}

/// Knotted-torus detection relative to an embedding of `E(1, x)`.
///
/// True means: if a symplectic embedding of `E(1, x)` into the target
/// exists, then the image of the product torus over `(r, s)` is knotted.
/// The existence of the embedding is not checked here; compose with the
/// ellipsoid-embedding criterion to certify it.
pub fn emb_knotted_member(target: &ShapeRegion, x: &Rat, p: &Point) -> Result<bool, Error> {
    require_positive(p)?;
    if p.r > p.s {
        return Err(Error::pre(format!(
            "embedding-relative knotted regions are stated on reduced coordinates, got ({}, {})",
            p.r, p.s
        )));
    }
    let one = Rat::one();
    // Hypothesis shape: target parameters at least 1 and strictly below x.
    // (The bound on the smaller parameter is non-strict so that the polydisk
    // P(1, d) cases are admissible.)
    let ok = match target {
        ShapeRegion::Ball { capacity } => capacity >= &one && capacity < x,
        ShapeRegion::Ellipsoid { a, b, .. } => a >= &one && b < x,
        ShapeRegion::Polydisk { c, d } => c >= &one && d < x,
    };
    if !ok {
        return Err(Error::pre(format!(
            "embedding-relative region needs target parameters in [1, x), x = {x}"
        )));
    }
    let source = ToricDomain::ellipsoid(one, x.clone())?;
    let q = MomentQuery::open().reduced();
    let in_both = source.moment_contains(p, &q) && target.domain().moment_contains(p, &q);
    let above_form = match target {
        ShapeRegion::Ball { capacity } => &(&Rat::int(2) * &p.r) + &p.s > *capacity,
        ShapeRegion::Ellipsoid { b, k, .. } => {
            let k = Rat::from_bigint(k.clone());
            &(&(&k + &Rat::one()) * &p.r) + &p.s > *b
        }
        ShapeRegion::Polydisk { d, .. } => &p.r + &p.s > *d,
    };
    Ok(in_both && above_form)
}

/// Domain family for the unknotted-capacity thresholds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThresholdFamily {
    Ball,
    /// Integer aspect ratio `k >= 2`.
    Ellipsoid {
        k: u64,
    },
    /// Rational aspect ratio `k > 0`.
    Polydisk {
        k: Rat,
    },
}

/// Minimal capacity of a target consistent with the image of the closed
/// ellipsoid `E(1, x)`'s diagonal torus staying unknotted.
pub fn unknotted_threshold(family: &ThresholdFamily, x: &Rat) -> Result<Rat, Error> {
    if !x.is_positive() {
        return Err(Error::pre(
            "threshold parameter x must be positive".to_string(),
        ));
    }
    match family {
        ThresholdFamily::Ball => Ok(&(&Rat::int(3) * x) / &(x + Rat::one())),
        ThresholdFamily::Ellipsoid { k } => {
            if *k < 2 {
                return Err(Error::pre(
                    "ellipsoid threshold needs integer k >= 2".to_string(),
                ));
            }
            let k = Rat::int(k.to_i64().expect("small ratio"));
            Ok(&(&Rat::int(2) * x) / &(x + k - Rat::one()))
        }
        ThresholdFamily::Polydisk { k } => {
            if !k.is_positive() {
                return Err(Error::pre("polydisk threshold needs k > 0".to_string()));
            }
            Ok(&(&Rat::int(2) * x) / &(x + &Rat::int(2) * k - Rat::one()))
        }
    }
}
