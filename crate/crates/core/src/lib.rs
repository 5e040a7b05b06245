//! Exact-arithmetic geometry of basic 4-dimensional toric domains.
//!
//! The crate decides membership in Hamiltonian shape invariants, classifies
//! whether paths of Lagrangian-torus area classes lift to isotopies, detects
//! regions carrying knotted product tori, verifies witness-based symplectic
//! embedding obstructions, and computes ECH capacity sequences together with
//! the lattice-point counts behind the ellipsoid embedding criterion. Every
//! predicate is evaluated over arbitrary-precision rationals; there is no
//! floating point in any decision path.

pub mod domains;
pub mod echlattice;
mod error;
pub mod geom;
mod intervals;
pub mod obstruct;
pub mod pathlift;
mod rat;
pub mod sftindex;
pub mod shape;
pub mod verify;

pub use error::Error;
pub use rat::Rat;
