//! Shared example structures used across tests and the command-line
//! tools: small pair groupoids, cyclic groups, a transformation
//! groupoid, two exact factorizations, and a weighted Haar system.

use std::sync::Arc;

use crate::alg::HaarSystem;
use crate::gpd::{build_group, build_pair, build_transformation, FiniteGroupoid, GroupTable};
use crate::homog::{build_double, DoubleGroup};
use crate::scalar::rat;

/// The pair groupoid on two points.
#[must_use]
pub fn pair2() -> FiniteGroupoid {
    build_pair(2)
}

/// The two-element group as a groupoid.
#[must_use]
pub fn z2() -> FiniteGroupoid {
    build_group(&GroupTable::cyclic(2))
}

/// The transformation groupoid of the two-element group swapping two
/// points.
#[must_use]
pub fn t2() -> FiniteGroupoid {
    build_transformation(&GroupTable::cyclic(2), &[vec![0, 1], vec![1, 0]])
        .expect("the swap is a valid action")
}

/// The six-element symmetric group factorized by a transposition and
/// the rotation subgroup.
#[must_use]
pub fn s3_double() -> DoubleGroup {
    let s3 = GroupTable::s3();
    let swap = s3.names.iter().position(|n| n == "swap01").unwrap();
    let cyc = s3.names.iter().position(|n| n == "cyc120").unwrap();
    let cyc2 = s3.names.iter().position(|n| n == "cyc201").unwrap();
    build_double(s3, &[0, swap], &[0, cyc, cyc2]).expect("exact factorization")
}

/// The cyclic six-element group factorized by its order-2 and order-3
/// subgroups.
#[must_use]
pub fn z6_double() -> DoubleGroup {
    build_double(GroupTable::cyclic(6), &[0, 3], &[0, 2, 4]).expect("exact factorization")
}

/// The groupoid of [`s3_double`] whose units are the two-element
/// subgroup.
#[must_use]
pub fn s3f() -> FiniteGroupoid {
    s3_double().groupoid_a()
}

/// The weighted Haar system on [`pair2`]: fiber weights 1 and 4, flat
/// unit measure.
#[must_use]
pub fn weighted_pair2() -> Arc<HaarSystem> {
    let g = pair2();
    let u: Vec<usize> = g.units.iter().copied().collect();
    let c = [(u[0], rat(1, 1)), (u[1], rat(4, 1))].into_iter().collect();
    let nu = [(u[0], rat(1, 1)), (u[1], rat(1, 1))].into_iter().collect();
    Arc::new(HaarSystem::new(g, c, nu).expect("positive weights"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for g in [pair2(), z2(), t2(), s3f(), s3_double().groupoid_b()] {
            assert!(g.validate().is_valid(), "{}", g.validate());
        }
        assert_eq!(weighted_pair2().groupoid().n, 4);
        assert_eq!(z6_double().groupoid_a().units.len(), 2);
    }
}
