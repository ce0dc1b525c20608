//! Weighted ℓ² spaces, operators represented by matrices, the induced
//! representation of a morphism, and operator norms.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::alg::{t_factor_sq_with, AlgError, AlgebraElement, HaarSystem};
use crate::gpd::{FiniteGroupoid, GpdError};
use crate::homog::{enumerate_wide_subgroupoids, quotient_morphism, HomogError};
use crate::mor::{identity_morphism, unit_pair, GroupoidMorphism, MorError};
use crate::scalar::{rat_to_f64, C64, Rat};

/// Errors from representation construction.
#[derive(Debug, Error)]
pub enum RepError {
    #[error("operand attached to a mismatched groupoid: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgError),
    #[error(transparent)]
    Morphism(#[from] MorError),
    #[error(transparent)]
    Groupoid(#[from] GpdError),
    #[error(transparent)]
    Homogeneous(#[from] HomogError),
}

/// The weighted ℓ² space of a groupoid: coordinates indexed by elements,
/// inner product `⟨v, w⟩ = Σ_z μ(z)·conj(v_z)·w_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedL2 {
    pub g: FiniteGroupoid,
    /// Strictly positive weight of each coordinate.
    pub mu: Vec<Rat>,
}

impl WeightedL2 {
    /// The canonical space of a Haar system: `μ(z) = c(e_l(z))·ν(e_r(z))`.
    #[must_use]
    pub fn from_haar(haar: &HaarSystem) -> Self {
        let g = haar.groupoid().clone();
        let d = haar.derived();
        let mu = (0..g.n)
            .map(|z| haar.c(d.e_l[z]).clone() * haar.nu(d.e_r[z]).clone())
            .collect();
        Self { g, mu }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.g.n
    }

    /// Weights in double precision.
    #[must_use]
    pub fn mu_f64(&self) -> Vec<f64> {
        self.mu.iter().map(rat_to_f64).collect()
    }

    /// Weighted inner product, conjugate-linear in the first slot.
    #[must_use]
    pub fn inner(&self, v: &DVector<C64>, w: &DVector<C64>) -> C64 {
        self.mu_f64()
            .iter()
            .enumerate()
            .map(|(z, m)| m * v[z].conj() * w[z])
            .sum()
    }

    /// Weighted norm.
    #[must_use]
    pub fn norm(&self, v: &DVector<C64>) -> f64 {
        self.inner(v, v).re.max(0.0).sqrt()
    }
}

/// A linear operator on a weighted ℓ² space, stored as a dense matrix
/// acting on coordinates: `(Mv)_z = Σ_y M[z, y]·v_y`.
#[derive(Debug, Clone)]
pub struct LinearOperator {
    pub space: WeightedL2,
    pub matrix: DMatrix<C64>,
}

impl LinearOperator {
    #[must_use]
    pub fn identity(space: WeightedL2) -> Self {
        let n = space.dim();
        Self {
            space,
            matrix: DMatrix::identity(n, n),
        }
    }

    #[must_use]
    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }

    /// Operator composition `self ∘ rhs` (spaces must agree).
    pub fn compose(&self, rhs: &Self) -> Result<Self, RepError> {
        if self.space != rhs.space {
            return Err(RepError::Mismatch(
                "composing operators on different spaces".into(),
            ));
        }
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    /// Adjoint with respect to the weighted inner product:
    /// `A† = D⁻¹·Aᴴ·D` with `D = diag(μ)`.
    #[must_use]
    pub fn adjoint(&self) -> Self {
        let mu = self.space.mu_f64();
        let n = self.space.dim();
        let mut m = self.matrix.adjoint();
        for z in 0..n {
            for y in 0..n {
                m[(z, y)] *= mu[y] / mu[z];
            }
        }
        Self {
            space: self.space.clone(),
            matrix: m,
        }
    }

    /// Operator norm on the weighted space: the largest singular value of
    /// `D^{1/2}·M·D^{-1/2}`.
    #[must_use]
    pub fn operator_norm(&self) -> f64 {
        let mu = self.space.mu_f64();
        let n = self.space.dim();
        if n == 0 {
            return 0.0;
        }
        let mut m = self.matrix.clone();
        for z in 0..n {
            for y in 0..n {
                m[(z, y)] *= (mu[z] / mu[y]).sqrt();
            }
        }
        m.singular_values().max()
    }

    /// Entrywise closeness of two operators on the same space.
    #[must_use]
    pub fn close_to(&self, rhs: &Self, tol: f64) -> bool {
        self.space == rhs.space
            && self
                .matrix
                .iter()
                .zip(rhs.matrix.iter())
                .all(|(a, b)| crate::close_c(*a, *b, tol))
    }

    /// Whether `A†A` and `AA†` are both the identity within tolerance.
    #[must_use]
    pub fn is_unitary(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        let id = Self::identity(self.space.clone());
        self.compose(&adj).is_ok_and(|p| p.close_to(&id, tol))
            && adj.compose(self).is_ok_and(|p| p.close_to(&id, tol))
    }
}

/// The representation of a domain algebra element induced by a morphism,
/// acting on the weighted ℓ² space of the codomain Haar system:
/// `(π(ω)ψ)(z) = Σ_{x ∈ F_l(f_h(b))} c(e_r(x))·ω(x)·t(x, y)·ψ(y)` with
/// `b = e_l'(z)` and `y = s'(h_b^L(x))·z`.
pub fn pi_h(
    h: &GroupoidMorphism,
    omega: &AlgebraElement<C64>,
    haar_cod: &HaarSystem,
) -> Result<LinearOperator, RepError> {
    if omega.haar.groupoid() != &h.dom {
        return Err(RepError::Mismatch(
            "element lives over a different groupoid than the morphism domain".into(),
        ));
    }
    if haar_cod.groupoid() != &h.cod {
        return Err(RepError::Mismatch(
            "codomain Haar system attached to a different groupoid".into(),
        ));
    }
    let maps = h.derive_maps()?;
    let dd = omega.haar.derived();
    let dc = haar_cod.derived();
    let cod = &h.cod;
    let mut matrix = DMatrix::from_element(cod.n, cod.n, C64::new(0.0, 0.0));
    for z in 0..cod.n {
        let b = dc.e_l[z];
        let a = maps.f_h[&b];
        for &x in &dd.left_fibers[&a] {
            let w = maps.h_l[&(b, x)];
            let y = cod
                .mul(cod.inv[w], z)
                .expect("s'(h_b^L(x)) and z share a unit");
            let (t_sq, _) = t_factor_sq_with(h, &maps, &omega.haar, haar_cod, x, y)?;
            let weight = rat_to_f64(omega.haar.left_weight(x));
            matrix[(z, y)] += weight * omega.coef[x] * rat_to_f64(&t_sq).sqrt();
        }
    }
    Ok(LinearOperator {
        space: WeightedL2::from_haar(haar_cod),
        matrix,
    })
}

/// The norm of an element in its left-regular representation (the
/// identity morphism acting on the element's own weighted ℓ² space).
pub fn reduced_norm(omega: &AlgebraElement<C64>) -> Result<f64, RepError> {
    let h = identity_morphism(omega.haar.groupoid())?;
    Ok(pi_h(&h, omega, &omega.haar)?.operator_norm())
}

/// Norm estimate over a family of probe representations: the identity,
/// the morphism onto the pair groupoid of units, the quotients by every
/// wide subgroupoid (when the groupoid has at most `max_enum` elements),
/// and any user-supplied morphisms with codomain Haar systems.
pub fn probe_norm(
    omega: &AlgebraElement<C64>,
    extra: &[(GroupoidMorphism, HaarSystem)],
    max_enum: usize,
) -> Result<f64, RepError> {
    let g = omega.haar.groupoid();
    let mut best = reduced_norm(omega)?;

    let ue = unit_pair(g)?;
    let ue_haar = HaarSystem::ones(ue.cod.clone())?;
    best = best.max(pi_h(&ue, omega, &ue_haar)?.operator_norm());

    match enumerate_wide_subgroupoids(g, max_enum) {
        Ok(subs) => {
            for sub in subs {
                let q = quotient_morphism(g, &sub)?;
                let haar = HaarSystem::ones(q.morphism.cod.clone())?;
                best = best.max(pi_h(&q.morphism, omega, &haar)?.operator_norm());
            }
        }
        Err(HomogError::GuardExceeded { .. }) => {}
        Err(e) => return Err(e.into()),
    }

    for (h, haar) in extra {
        best = best.max(pi_h(h, omega, haar)?.operator_norm());
    }
    Ok(best)
}
