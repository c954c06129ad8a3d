//! Combinatorial toolkit for once-punctured torus bundles over the circle.
//!
//! Starting from a monodromy (an `RL`-word or a hyperbolic matrix in
//! `SL(2,Z)`), the crate builds the layered monodromy ideal triangulation,
//! solves for angle structures by exact rational linear programming,
//! enumerates fairly normal disc types in the truncated tetrahedron, and
//! checks the combinatorial Gauss-Bonnet identity on assembled surfaces.
//!
//! All arithmetic is exact. Angles are stored as rational multiples of pi,
//! so every constraint has integer data and solver output can be
//! re-substituted without tolerances.

pub mod angles;
pub mod discs;
pub mod farey;
pub mod simplex;
pub mod triangulation;

/// Exact scalar used throughout the angle-structure pipeline.
pub type Rat = num_rational::BigRational;

/// Integer backing [`Rat`].
pub type Int = num_bigint::BigInt;

/// Convenience constructor for a [`Rat`] from small integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}
