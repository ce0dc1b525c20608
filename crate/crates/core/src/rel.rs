//! Calculus of finite binary relations.
//!
//! A relation from a source set to a target set is stored as a set of
//! ordered pairs written **target-first**: `(y, x)` means "`x` is related to
//! `y`".  Keeping the target first everywhere removes a whole class of
//! silent transposition bugs when relations are composed and compared.
//!
//! Sets are indexed `0..size`; names live at the file-format boundary only.

use std::collections::BTreeSet;

use thiserror::Error;

/// Errors produced by relation constructors and combinators.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelError {
    #[error("pair ({target}, {src}) out of bounds for relation {target_size}x{source_size}")]
    OutOfBounds {
        target: usize,
        src: usize,
        target_size: usize,
        source_size: usize,
    },
    #[error("duplicate pair ({target}, {src})")]
    DuplicatePair { target: usize, src: usize },
    #[error("dimension mismatch: left factor has source size {left_source}, right factor has target size {right_target}")]
    DimensionMismatch {
        left_source: usize,
        right_target: usize,
    },
}

/// A finite binary relation with target-first pair storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRelation {
    source_size: usize,
    target_size: usize,
    graph: BTreeSet<(usize, usize)>,
}

impl FiniteRelation {
    /// Build a relation from target-first pairs, rejecting out-of-bounds
    /// and duplicate pairs (duplicates usually indicate a generator bug,
    /// so they are surfaced rather than silently collapsed).
    pub fn new(
        source_size: usize,
        target_size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, RelError> {
        let mut graph = BTreeSet::new();
        for (y, x) in pairs {
            if y >= target_size || x >= source_size {
                return Err(RelError::OutOfBounds {
                    target: y,
                    src: x,
                    target_size,
                    source_size,
                });
            }
            if !graph.insert((y, x)) {
                return Err(RelError::DuplicatePair { target: y, src: x });
            }
        }
        Ok(Self {
            source_size,
            target_size,
            graph,
        })
    }

    /// The identity relation on a set of `n` indices.
    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self {
            source_size: n,
            target_size: n,
            graph: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// The graph of a total map `source -> target` (target-first pairs).
    pub fn from_map(target_size: usize, map: &[usize]) -> Result<Self, RelError> {
        Self::new(
            map.len(),
            target_size,
            map.iter().enumerate().map(|(x, &y)| (y, x)),
        )
    }

    #[must_use]
    pub fn source_size(&self) -> usize {
        self.source_size
    }

    #[must_use]
    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// Target-first pairs in ascending order.
    #[must_use]
    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.graph
    }

    #[must_use]
    pub fn contains(&self, target: usize, source: usize) -> bool {
        self.graph.contains(&(target, source))
    }

    /// Composition `self ∘ rhs`: `self` relates Y to Z, `rhs` relates X to
    /// Y, the result relates X to Z via
    /// `{(z, x) : ∃ y, (z, y) ∈ self and (y, x) ∈ rhs}`.
    pub fn compose(&self, rhs: &Self) -> Result<Self, RelError> {
        if self.source_size != rhs.target_size {
            return Err(RelError::DimensionMismatch {
                left_source: self.source_size,
                right_target: rhs.target_size,
            });
        }
        let mut graph = BTreeSet::new();
        for &(z, y) in &self.graph {
            for &(y2, x) in &rhs.graph {
                if y == y2 {
                    graph.insert((z, x));
                }
            }
        }
        Ok(Self {
            source_size: rhs.source_size,
            target_size: self.target_size,
            graph,
        })
    }

    /// Simplicity of the composition `self ∘ rhs`: `true` iff every pair of
    /// the composition is produced by exactly one intermediate element.  On
    /// failure returns a witness `((z, x), (y1, y2))` with two distinct
    /// intermediates.
    pub fn is_simple(
        &self,
        rhs: &Self,
    ) -> Result<(bool, Option<((usize, usize), (usize, usize))>), RelError> {
        if self.source_size != rhs.target_size {
            return Err(RelError::DimensionMismatch {
                left_source: self.source_size,
                right_target: rhs.target_size,
            });
        }
        let mut seen: std::collections::BTreeMap<(usize, usize), usize> =
            std::collections::BTreeMap::new();
        for &(z, y) in &self.graph {
            for &(y2, x) in &rhs.graph {
                if y == y2 {
                    if let Some(&y_prev) = seen.get(&(z, x)) {
                        if y_prev != y {
                            return Ok((false, Some(((z, x), (y_prev, y)))));
                        }
                    } else {
                        seen.insert((z, x), y);
                    }
                }
            }
        }
        Ok((true, None))
    }

    /// Transposed relation: `(x, y)` for every `(y, x)`.
    #[must_use]
    pub fn transpose(&self) -> Self {
        Self {
            source_size: self.target_size,
            target_size: self.source_size,
            graph: self.graph.iter().map(|&(y, x)| (x, y)).collect(),
        }
    }

    /// Cartesian product of relations.  Source pairs `(x, z)` are encoded
    /// row-major as `x * rhs.source_size + z`, target pairs `(y, t)` as
    /// `y * rhs.target_size + t`.
    #[must_use]
    pub fn product(&self, rhs: &Self) -> Self {
        let mut graph = BTreeSet::new();
        for &(y, x) in &self.graph {
            for &(t, z) in &rhs.graph {
                graph.insert((y * rhs.target_size + t, x * rhs.source_size + z));
            }
        }
        Self {
            source_size: self.source_size * rhs.source_size,
            target_size: self.target_size * rhs.target_size,
            graph,
        }
    }

    /// Image of a source subset.
    #[must_use]
    pub fn image(&self, subset: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.graph
            .iter()
            .filter(|&&(_, x)| subset.contains(&x))
            .map(|&(y, _)| y)
            .collect()
    }

    /// Image of a single source index.
    #[must_use]
    pub fn image_of(&self, x: usize) -> BTreeSet<usize> {
        self.graph
            .iter()
            .filter(|&&(_, xx)| xx == x)
            .map(|&(y, _)| y)
            .collect()
    }

    /// If the relation is the graph of a total map, return it.
    #[must_use]
    pub fn as_map(&self) -> Option<Vec<usize>> {
        let mut map = vec![None; self.source_size];
        for &(y, x) in &self.graph {
            if map[x].is_some() {
                return None;
            }
            map[x] = Some(y);
        }
        map.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(s: usize, t: usize, pairs: &[(usize, usize)]) -> FiniteRelation {
        FiniteRelation::new(s, t, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let r = rel(2, 2, &[(1, 0)]);
        assert_eq!(FiniteRelation::identity(2).compose(&r).unwrap(), r);
        assert_eq!(r.compose(&FiniteRelation::identity(2)).unwrap(), r);
    }

    #[test]
    fn one_step_chase() {
        let r = rel(2, 2, &[(1, 0)]);
        let s = rel(2, 2, &[(0, 1)]);
        assert_eq!(r.compose(&s).unwrap(), rel(2, 2, &[(1, 1)]));
    }

    #[test]
    fn simplicity_witness() {
        // Two intermediates 0 and 1 both lead from source 0 to target 0.
        let r = rel(2, 1, &[(0, 0), (0, 1)]);
        let s = rel(1, 2, &[(0, 0), (1, 0)]);
        let (simple, witness) = r.is_simple(&s).unwrap();
        assert!(!simple);
        let ((z, x), (y1, y2)) = witness.unwrap();
        assert_eq!((z, x), (0, 0));
        assert_ne!(y1, y2);
    }

    #[test]
    fn transpose_is_involutive() {
        let r = rel(3, 2, &[(1, 0), (0, 2)]);
        assert_eq!(r.transpose().transpose(), r);
    }

    #[test]
    fn product_of_identities() {
        let p = FiniteRelation::identity(2).product(&FiniteRelation::identity(3));
        assert_eq!(p, FiniteRelation::identity(6));
    }

    #[test]
    fn image_basics() {
        let r = rel(2, 2, &[(1, 0)]);
        let a: BTreeSet<usize> = [0].into_iter().collect();
        assert_eq!(r.image(&a), [1].into_iter().collect());
    }

    #[test]
    fn duplicates_rejected() {
        let err = FiniteRelation::new(2, 2, [(1, 0), (1, 0)]).unwrap_err();
        assert_eq!(err, RelError::DuplicatePair { target: 1, src: 0 });
    }

    #[test]
    fn bounds_rejected() {
        assert!(matches!(
            FiniteRelation::new(2, 2, [(2, 0)]),
            Err(RelError::OutOfBounds { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let r = rel(3, 2, &[]);
        let s = rel(2, 2, &[]);
        assert!(matches!(r.compose(&s), Err(RelError::DimensionMismatch { .. })));
    }

    #[test]
    fn as_map_detects_maps() {
        let r = rel(2, 3, &[(2, 0), (0, 1)]);
        assert_eq!(r.as_map(), Some(vec![2, 0]));
        let not_total = rel(2, 3, &[(2, 0)]);
        assert_eq!(not_total.as_map(), None);
    }
}
