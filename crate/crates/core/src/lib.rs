//! Finite groupoid convolution-algebra workbench.
//!
//! The crate is organized bottom-up:
//!
//! * [`rel`] — calculus of finite binary relations, the substrate in which
//!   everything else is defined and validated;
//! * [`gpd`] — finite groupoids in relational form, derived structure maps,
//!   and the builder zoo (pair, group, set, equivalence, transformation,
//!   product groupoids);
//! * [`mor`] — relational groupoid morphisms: validation, fiber maps, the
//!   mapping-pair form, composition, factorization, actions and the
//!   canonical morphisms;
//! * [`alg`] — discrete Haar systems and the convolution *-algebra:
//!   product, star, norms, the morphism action with its weight-transport
//!   factor, units and unit-function multipliers;
//! * [`homog`] — double groups (exact factorizations), comultiplication and
//!   the pentagon operator; subgroupoids and homogeneous-space quotients;
//! * [`rep`] — representations on weighted l2 spaces, operator norms, the
//!   reduced norm and the norm probe;
//! * [`harm`] — bisections as multipliers, the cochain complex, modular
//!   cocycles, one-parameter groups, and the GNS/KMS weight;
//! * [`fixtures`] — the small shared instances used throughout the tests.
//!
//! All weights and coefficients are exact rationals wherever possible;
//! square roots (weight transport, modular values, bisection factors) are
//! evaluated in double precision and the corresponding identities are
//! checked to relative tolerance, while everything squarable is kept exact.

pub mod alg;
pub mod fixtures;
pub mod gpd;
pub mod harm;
pub mod homog;
pub mod mor;
pub mod rel;
pub mod rep;
pub mod scalar;

/// Default relative tolerance for identities that involve square roots.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `|lhs - rhs| <= tol * (1 + |rhs|)` — the relative comparison used by
/// every floating-point identity check in the crate.
#[must_use]
pub fn close(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * (1.0 + rhs.abs())
}

/// Complex variant of [`close`].
#[must_use]
pub fn close_c(lhs: scalar::C64, rhs: scalar::C64, tol: f64) -> bool {
    (lhs - rhs).norm() <= tol * (1.0 + rhs.norm())
}
