//! Discrete Haar systems and the convolution *-algebra of a finite
//! groupoid.
//!
//! A Haar system is a pair of strictly positive rational weight functions
//! on the units: `c` gives the left-invariant fiber measure (the point `x`
//! weighs `c(e_r(x))` inside the left fiber through `x`; the induced right
//! system weighs `c(e_l(x))`), and `ν` is a measure on the unit space used
//! by the weighted l2 spaces and the GNS weight.
//!
//! Algebra elements are complex coefficient functions relative to a Haar
//! system; all operations that avoid square roots run in exact
//! complex-rational arithmetic, and the square-root paths (the
//! weight-transport factor, norms) run in double precision with a fixed
//! summation order so results are reproducible bit-for-bit.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::gpd::{DerivedMaps, FiniteGroupoid, GpdError};
use crate::mor::{GroupoidMorphism, MorError, MorphismMaps};
use crate::scalar::{rat_to_f64, C64, Coeff, Cq, Rat};

/// Errors from Haar-system construction and algebra operations.
#[derive(Debug, Error)]
pub enum AlgError {
    #[error("weight at unit {unit} is not strictly positive")]
    NonPositiveWeight { unit: String },
    #[error("no weight supplied for unit {unit}")]
    MissingWeight { unit: String },
    #[error("weight indexed by non-unit {name}")]
    NotAUnit { name: String },
    #[error("element weights are not left-invariant: {witness}")]
    NotLeftInvariant { witness: String },
    #[error("operands live over different Haar systems")]
    HaarMismatch,
    #[error("groupoid mismatch: {0}")]
    GroupoidMismatch(String),
    #[error("pair ({x}, {y}) is not in the transport domain: e_r(x) must be the unit-map image of e_l(y)")]
    NotFibered { x: String, y: String },
    #[error("coefficient vector has {got} entries for {expected} elements")]
    CoefShape { got: usize, expected: usize },
    #[error(transparent)]
    Groupoid(#[from] GpdError),
    #[error(transparent)]
    Morphism(#[from] MorError),
}

/// A discrete Haar system: a valid groupoid together with strictly
/// positive rational unit weights `c` (fiber measure) and `ν` (unit-space
/// measure).
#[derive(Debug, Clone)]
pub struct HaarSystem {
    g: FiniteGroupoid,
    derived: DerivedMaps,
    c: BTreeMap<usize, Rat>,
    nu: BTreeMap<usize, Rat>,
}

impl PartialEq for HaarSystem {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.c == other.c && self.nu == other.nu
    }
}

impl HaarSystem {
    /// Build a Haar system, validating the groupoid and checking that the
    /// weights are strictly positive and indexed exactly by the units.
    pub fn new(
        g: FiniteGroupoid,
        c: BTreeMap<usize, Rat>,
        nu: BTreeMap<usize, Rat>,
    ) -> Result<Self, AlgError> {
        let derived = g.derive()?;
        for weights in [&c, &nu] {
            for (&u, v) in weights {
                if !g.is_unit(u) {
                    return Err(AlgError::NotAUnit {
                        name: g.name(u).to_string(),
                    });
                }
                if !v.is_positive() {
                    return Err(AlgError::NonPositiveWeight {
                        unit: g.name(u).to_string(),
                    });
                }
            }
            for &u in &g.units {
                if !weights.contains_key(&u) {
                    return Err(AlgError::MissingWeight {
                        unit: g.name(u).to_string(),
                    });
                }
            }
        }
        Ok(Self { g, derived, c, nu })
    }

    /// The Haar system with all weights equal to one.
    pub fn ones(g: FiniteGroupoid) -> Result<Self, AlgError> {
        let c: BTreeMap<usize, Rat> = g.units.iter().map(|&u| (u, Rat::one())).collect();
        let nu = c.clone();
        Self::new(g, c, nu)
    }

    /// Build from per-element left-fiber weights: accepted only when the
    /// weights are left-invariant (the weight of a product `x·z` inside
    /// its left fiber equals the weight of `z` inside its own), in which
    /// case they are the pullback of a unit function `c`.
    pub fn from_element_weights(
        g: FiniteGroupoid,
        w: &[Rat],
        nu: BTreeMap<usize, Rat>,
    ) -> Result<Self, AlgError> {
        if w.len() != g.n {
            return Err(AlgError::CoefShape {
                got: w.len(),
                expected: g.n,
            });
        }
        for (&(_, z), &xz) in &g.prod {
            if w[xz] != w[z] {
                return Err(AlgError::NotLeftInvariant {
                    witness: format!(
                        "weight({}) = {} but weight({}) = {}",
                        g.name(xz),
                        w[xz],
                        g.name(z),
                        w[z]
                    ),
                });
            }
        }
        let c = g.units.iter().map(|&u| (u, w[u].clone())).collect();
        Self::new(g, c, nu)
    }

    #[must_use]
    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.g
    }

    #[must_use]
    pub fn derived(&self) -> &DerivedMaps {
        &self.derived
    }

    /// Fiber weight at a unit.
    #[must_use]
    pub fn c(&self, unit: usize) -> &Rat {
        &self.c[&unit]
    }

    /// Unit-space weight at a unit.
    #[must_use]
    pub fn nu(&self, unit: usize) -> &Rat {
        &self.nu[&unit]
    }

    #[must_use]
    pub fn c_map(&self) -> &BTreeMap<usize, Rat> {
        &self.c
    }

    #[must_use]
    pub fn nu_map(&self) -> &BTreeMap<usize, Rat> {
        &self.nu
    }

    /// Weight of `x` inside its left fiber: `c(e_r(x))`.
    #[must_use]
    pub fn left_weight(&self, x: usize) -> &Rat {
        self.c(self.derived.e_r[x])
    }

    /// Weight of `x` inside its right fiber: `c(e_l(x))`.
    #[must_use]
    pub fn right_weight(&self, x: usize) -> &Rat {
        self.c(self.derived.e_l[x])
    }
}

/// A coefficient function on a groupoid relative to a Haar system.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<C: Coeff> {
    pub haar: Arc<HaarSystem>,
    pub coef: Vec<C>,
}

impl<C: Coeff> AlgebraElement<C> {
    pub fn from_coef(haar: Arc<HaarSystem>, coef: Vec<C>) -> Result<Self, AlgError> {
        if coef.len() != haar.g.n {
            return Err(AlgError::CoefShape {
                got: coef.len(),
                expected: haar.g.n,
            });
        }
        Ok(Self { haar, coef })
    }

    #[must_use]
    pub fn zero(haar: Arc<HaarSystem>) -> Self {
        let n = haar.g.n;
        Self {
            haar,
            coef: vec![C::zero(); n],
        }
    }

    /// The indicator of a single element.
    #[must_use]
    pub fn delta(haar: Arc<HaarSystem>, x: usize) -> Self {
        let mut e = Self::zero(haar);
        e.coef[x] = C::one();
        e
    }

    /// The function that is one everywhere.
    #[must_use]
    pub fn all_ones(haar: Arc<HaarSystem>) -> Self {
        let n = haar.g.n;
        Self {
            haar,
            coef: vec![C::one(); n],
        }
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.coef.iter().all(Coeff::is_zero)
    }

    #[must_use]
    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            haar: self.haar.clone(),
            coef: self
                .coef
                .iter()
                .zip(&rhs.coef)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    #[must_use]
    pub fn scale(&self, s: &C) -> Self {
        Self {
            haar: self.haar.clone(),
            coef: self.coef.iter().map(|a| a.mul(s)).collect(),
        }
    }

    /// Convolution product.  For each element the sum runs over the left
    /// fiber through it, weighting each factor by its fiber mass:
    /// `(f1 * f2)(x) = Σ_{y ∈ F_l(e_l(x))} c(e_r(y)) f1(y) f2(s(y)·x)`.
    pub fn convolve(&self, rhs: &Self) -> Result<Self, AlgError> {
        if self.haar.as_ref() != rhs.haar.as_ref() {
            return Err(AlgError::HaarMismatch);
        }
        let g = &self.haar.g;
        let d = &self.haar.derived;
        let coef = (0..g.n)
            .map(|x| {
                let mut acc = C::zero();
                for &y in &d.left_fibers[&d.e_l[x]] {
                    let z = g
                        .mul(g.inv[y], x)
                        .expect("s(y) and x share a unit by construction");
                    let w = C::from_rat(self.haar.left_weight(y));
                    acc = acc.add(&w.mul(&self.coef[y]).mul(&rhs.coef[z]));
                }
                acc
            })
            .collect();
        Ok(Self {
            haar: self.haar.clone(),
            coef,
        })
    }

    /// The same product computed over right fibers:
    /// `(f1 * f2)(x) = Σ_{y ∈ F_r(e_r(x))} c(e_l(y)) f1(x·s(y)) f2(y)`.
    /// Used in tests to confirm the two fiber decompositions agree.
    pub fn convolve_right_fiber(&self, rhs: &Self) -> Result<Self, AlgError> {
        if self.haar.as_ref() != rhs.haar.as_ref() {
            return Err(AlgError::HaarMismatch);
        }
        let g = &self.haar.g;
        let d = &self.haar.derived;
        let coef = (0..g.n)
            .map(|x| {
                let mut acc = C::zero();
                for &y in &d.right_fibers[&d.e_r[x]] {
                    let z = g
                        .mul(x, g.inv[y])
                        .expect("x and s(y) share a unit by construction");
                    let w = C::from_rat(self.haar.right_weight(y));
                    acc = acc.add(&w.mul(&self.coef[z]).mul(&rhs.coef[y]));
                }
                acc
            })
            .collect();
        Ok(Self {
            haar: self.haar.clone(),
            coef,
        })
    }

    /// The involution: `f*(x) = conj(f(s(x)))`.
    #[must_use]
    pub fn star(&self) -> Self {
        let g = &self.haar.g;
        Self {
            haar: self.haar.clone(),
            coef: (0..g.n).map(|x| self.coef[g.inv[x]].conj()).collect(),
        }
    }

    /// The multiplicative unit: `1/c` on units, zero elsewhere.
    #[must_use]
    pub fn unit(haar: Arc<HaarSystem>) -> Self {
        let mut e = Self::zero(haar.clone());
        for &u in &haar.g.units {
            e.coef[u] = C::from_rat(&(Rat::one() / haar.c(u)));
        }
        e
    }

    /// The three algebra norms `(‖·‖_l, ‖·‖_r, ‖·‖)`: the maximal
    /// weighted l1 mass of a left fiber, of a right fiber, and their
    /// maximum.
    #[must_use]
    pub fn norms(&self) -> (f64, f64, f64) {
        let d = &self.haar.derived;
        let mut norm_l: f64 = 0.0;
        let mut norm_r: f64 = 0.0;
        for fiber in d.left_fibers.values() {
            let total: f64 = fiber
                .iter()
                .map(|&x| rat_to_f64(self.haar.left_weight(x)) * self.coef[x].abs())
                .sum();
            norm_l = norm_l.max(total);
        }
        for fiber in d.right_fibers.values() {
            let total: f64 = fiber
                .iter()
                .map(|&x| rat_to_f64(self.haar.right_weight(x)) * self.coef[x].abs())
                .sum();
            norm_r = norm_r.max(total);
        }
        (norm_l, norm_r, norm_l.max(norm_r))
    }

    /// The orbit-wise geometric norm: per orbit, collect the matrix
    /// indexed by unit pairs `(a, b)` whose entry is the weighted mass
    /// `sqrt(c(a)·c(b))·Σ|f(x)|` over the cell
    /// `{x : e_l(x) = a, e_r(x) = b}`, take its largest singular value,
    /// and maximize over orbits.
    ///
    /// A weighted Schur test with weights `sqrt(c)` bounds each orbit
    /// matrix by `sqrt(‖ω‖_l·‖ω‖_r)`, so the result never exceeds the
    /// algebra norm.  (The plain root-sum-of-squares of the same matrix
    /// does not obey that bound: on the two-point pair groupoid with
    /// flat weights, the sum of the two unit deltas would give `√2`
    /// against an algebra norm of `1`.)
    #[must_use]
    pub fn geometric_norm(&self) -> f64 {
        let d = &self.haar.derived;
        let mut best: f64 = 0.0;
        for orbit in &d.orbits {
            let units: Vec<usize> = orbit.iter().copied().collect();
            let k = units.len();
            let mut m = nalgebra::DMatrix::<f64>::zeros(k, k);
            for (i, &a) in units.iter().enumerate() {
                for (j, &b) in units.iter().enumerate() {
                    m[(i, j)] = d.left_fibers[&a]
                        .iter()
                        .filter(|&&x| d.e_r[x] == b)
                        .map(|&x| {
                            self.coef[x].abs()
                                * (rat_to_f64(self.haar.c(a)) * rat_to_f64(self.haar.c(b)))
                                    .sqrt()
                        })
                        .sum();
                }
            }
            best = best.max(m.singular_values().max());
        }
        best
    }

    /// Pointwise multiplication by a unit function pulled back through the
    /// left unit map: `(g·f)(x) = g(e_l(x))·f(x)`.
    pub fn unit_function_multiplier(
        &self,
        g_fn: &BTreeMap<usize, C>,
    ) -> Result<Self, AlgError> {
        let g = &self.haar.g;
        let d = &self.haar.derived;
        for &u in g_fn.keys() {
            if !g.is_unit(u) {
                return Err(AlgError::NotAUnit {
                    name: g.name(u).to_string(),
                });
            }
        }
        let coef = (0..g.n)
            .map(|x| {
                let factor = g_fn.get(&d.e_l[x]).cloned().unwrap_or_else(C::zero);
                factor.mul(&self.coef[x])
            })
            .collect();
        Ok(Self {
            haar: self.haar.clone(),
            coef,
        })
    }
}

impl AlgebraElement<Cq> {
    /// Lower an exact element to double precision.
    #[must_use]
    pub fn to_c64(&self) -> AlgebraElement<C64> {
        AlgebraElement {
            haar: self.haar.clone(),
            coef: self.coef.iter().map(crate::scalar::cq_to_c64).collect(),
        }
    }
}

impl AlgebraElement<C64> {
    /// Relative closeness of two floating elements.
    #[must_use]
    pub fn close_to(&self, rhs: &Self, tol: f64) -> bool {
        self.coef
            .iter()
            .zip(&rhs.coef)
            .all(|(a, b)| crate::close_c(*a, *b, tol))
    }
}

/// The transported product `m_h(x, y)`: the unique codomain element
/// through which the pair `(x, y)` of the transport domain multiplies.
pub fn transport_product(
    h: &GroupoidMorphism,
    maps: &MorphismMaps,
    x: usize,
    y: usize,
) -> Result<usize, AlgError> {
    let dd = h.dom.derive()?;
    let dc = h.cod.derive()?;
    let b = dc.e_l[y];
    if maps.f_h.get(&b) != Some(&dd.e_r[x]) {
        return Err(AlgError::NotFibered {
            x: h.dom.name(x).to_string(),
            y: h.cod.name(y).to_string(),
        });
    }
    let hr = maps.h_r[&(b, x)];
    Ok(h.cod.mul(hr, y).expect("fiber map lands composably"))
}

/// Squared weight-transport factor for a morphism, exact:
/// `t²(x, y) = c(e_l(x))·c'(e_l'(y)) / (c(e_r(x))·c'(e_l'(z)))` with
/// `z = m_h(x, y)`.  Returns the pair `(t², z)`.
pub fn t_factor_sq(
    h: &GroupoidMorphism,
    haar_dom: &HaarSystem,
    haar_cod: &HaarSystem,
    x: usize,
    y: usize,
) -> Result<(Rat, usize), AlgError> {
    if haar_dom.g != h.dom {
        return Err(AlgError::GroupoidMismatch(
            "domain Haar system attached to a different groupoid".into(),
        ));
    }
    if haar_cod.g != h.cod {
        return Err(AlgError::GroupoidMismatch(
            "codomain Haar system attached to a different groupoid".into(),
        ));
    }
    let maps = h.derive_maps()?;
    t_factor_sq_with(h, &maps, haar_dom, haar_cod, x, y)
}

/// Same as [`t_factor_sq`] with precomputed fiber maps (used in loops).
pub fn t_factor_sq_with(
    h: &GroupoidMorphism,
    maps: &MorphismMaps,
    haar_dom: &HaarSystem,
    haar_cod: &HaarSystem,
    x: usize,
    y: usize,
) -> Result<(Rat, usize), AlgError> {
    let dd = haar_dom.derived();
    let dc = haar_cod.derived();
    let b = dc.e_l[y];
    if maps.f_h.get(&b) != Some(&dd.e_r[x]) {
        return Err(AlgError::NotFibered {
            x: h.dom.name(x).to_string(),
            y: h.cod.name(y).to_string(),
        });
    }
    let z = h.cod.mul(maps.h_r[&(b, x)], y).expect("fiber map lands composably");
    let t_sq = haar_dom.c(dd.e_l[x]).clone() * haar_cod.c(b).clone()
        / (haar_dom.c(dd.e_r[x]).clone() * haar_cod.c(dc.e_l[z]).clone());
    Ok((t_sq, z))
}

/// The weight-transport factor itself, in double precision.
pub fn t_factor(
    h: &GroupoidMorphism,
    haar_dom: &HaarSystem,
    haar_cod: &HaarSystem,
    x: usize,
    y: usize,
) -> Result<f64, AlgError> {
    let (t_sq, _) = t_factor_sq(h, haar_dom, haar_cod, x, y)?;
    Ok(rat_to_f64(&t_sq).sqrt())
}

/// The action of a morphism on its codomain algebra:
/// `(ĥ(ω)ω')(z) = Σ_{x ∈ F_l(f_h(b))} c(e_r(x)) f(x) t_h(x, y) f'(y)` with
/// `b = e_l'(z)` and `y = s'(h_b^L(x))·z`.
pub fn hat_action(
    h: &GroupoidMorphism,
    omega: &AlgebraElement<C64>,
    omega2: &AlgebraElement<C64>,
) -> Result<AlgebraElement<C64>, AlgError> {
    if omega.haar.g != h.dom {
        return Err(AlgError::GroupoidMismatch(
            "first operand lives over a different groupoid than the morphism domain".into(),
        ));
    }
    if omega2.haar.g != h.cod {
        return Err(AlgError::GroupoidMismatch(
            "second operand lives over a different groupoid than the morphism codomain".into(),
        ));
    }
    let maps = h.derive_maps()?;
    let dd = omega.haar.derived();
    let dc = omega2.haar.derived();
    let cod = &h.cod;
    let coef = (0..cod.n)
        .map(|z| {
            let b = dc.e_l[z];
            let a = maps.f_h[&b];
            let mut acc = C64::new(0.0, 0.0);
            for &x in &dd.left_fibers[&a] {
                let w = maps.h_l[&(b, x)];
                let y = cod
                    .mul(cod.inv[w], z)
                    .expect("s'(h_b^L(x)) and z share a unit");
                let (t_sq, _) =
                    t_factor_sq_with(h, &maps, &omega.haar, &omega2.haar, x, y)
                        .expect("pair lies in the transport domain");
                let weight = rat_to_f64(omega.haar.left_weight(x));
                let t = rat_to_f64(&t_sq).sqrt();
                acc += weight * omega.coef[x] * t * omega2.coef[y];
            }
            acc
        })
        .collect();
    Ok(AlgebraElement {
        haar: omega2.haar.clone(),
        coef,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::{build_group, build_pair, GroupTable};
    use crate::mor::{identity_morphism, unit_pair};
    use crate::scalar::{cq, rat};

    fn p2_ones() -> Arc<HaarSystem> {
        Arc::new(HaarSystem::ones(build_pair(2)).unwrap())
    }

    /// The weighted fixture: pair groupoid on two points with fiber
    /// weights 1 and 4.
    fn p2_w() -> Arc<HaarSystem> {
        let g = build_pair(2);
        let u: Vec<usize> = g.units.iter().copied().collect();
        let c = [(u[0], rat(1, 1)), (u[1], rat(4, 1))].into_iter().collect();
        let nu = [(u[0], rat(1, 1)), (u[1], rat(1, 1))].into_iter().collect();
        Arc::new(HaarSystem::new(g, c, nu).unwrap())
    }

    fn idx(h: &HaarSystem, name: &str) -> usize {
        h.groupoid().index_of(name).unwrap()
    }

    #[test]
    fn pair_convolution_matches_matrix_product() {
        // With unit weights the pair-groupoid algebra is 2x2 matrices:
        // delta_(0,1) * delta_(1,0) = delta_(0,0).
        let h = p2_ones();
        let a = AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p0_1"));
        let b = AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p1_0"));
        let p = a.convolve(&b).unwrap();
        assert_eq!(p, AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p0_0")));
    }

    #[test]
    fn weighted_convolution_picks_up_fiber_mass() {
        // With c = (1, 4) the single surviving term carries weight 4.
        let h = p2_w();
        let a = AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p0_1"));
        let b = AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p1_0"));
        let p = a.convolve(&b).unwrap();
        let expected =
            AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p0_0")).scale(&cq(rat(4, 1), rat(0, 1)));
        assert_eq!(p, expected);
    }

    #[test]
    fn group_convolution() {
        let h = Arc::new(HaarSystem::ones(build_group(&GroupTable::cyclic(2))).unwrap());
        let dg = AlgebraElement::<Cq>::delta(h.clone(), 1);
        let p = dg.convolve(&dg).unwrap();
        assert_eq!(p, AlgebraElement::<Cq>::delta(h, 0));
    }

    #[test]
    fn right_fiber_form_agrees() {
        let h = p2_w();
        let a = AlgebraElement::<Cq>::from_coef(
            h.clone(),
            vec![
                cq(rat(1, 2), rat(1, 3)),
                cq(rat(-1, 1), rat(0, 1)),
                cq(rat(2, 5), rat(1, 7)),
                cq(rat(0, 1), rat(3, 2)),
            ],
        )
        .unwrap();
        let b = a.star();
        assert_eq!(a.convolve(&b).unwrap(), a.convolve_right_fiber(&b).unwrap());
    }

    #[test]
    fn star_is_involutive() {
        let h = p2_w();
        let a = AlgebraElement::<Cq>::from_coef(
            h,
            vec![
                cq(rat(1, 2), rat(1, 3)),
                cq(rat(-1, 4), rat(2, 1)),
                cq(rat(0, 1), rat(0, 1)),
                cq(rat(5, 6), rat(-1, 6)),
            ],
        )
        .unwrap();
        assert_eq!(a.star().star(), a);
        // delta at (0,1) stars to delta at (1,0).
        let d = AlgebraElement::<Cq>::delta(a.haar.clone(), idx(&a.haar, "p0_1"));
        assert_eq!(
            d.star(),
            AlgebraElement::<Cq>::delta(a.haar.clone(), idx(&a.haar, "p1_0"))
        );
    }

    #[test]
    fn unit_is_neutral() {
        let h = p2_w();
        let u = AlgebraElement::<Cq>::unit(h.clone());
        assert_eq!(u.star(), u);
        let d = AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p0_1"));
        assert_eq!(u.convolve(&d).unwrap(), d);
        assert_eq!(d.convolve(&u).unwrap(), d);
        // With c = (1, 4) the unit is delta_u0 + (1/4) delta_u1.
        let u0 = idx(&h, "p0_0");
        let u1 = idx(&h, "p1_1");
        assert_eq!(u.coef[u0], cq(rat(1, 1), rat(0, 1)));
        assert_eq!(u.coef[u1], cq(rat(1, 4), rat(0, 1)));
    }

    #[test]
    fn norms_on_all_ones() {
        let h = p2_ones();
        let a = AlgebraElement::<Cq>::all_ones(h);
        let (l, r, m) = a.norms();
        assert_eq!((l, r, m), (2.0, 2.0, 2.0));
        // Geometric norm: four unit-pair cells of mass one.
        assert!((a.geometric_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_norm_of_unit_supported_element_is_bounded() {
        // Supported on the two units of the flat pair groupoid: every
        // fiber carries mass one, and the orbit matrix is the identity.
        let h = p2_ones();
        let mut coef = vec![cq(rat(0, 1), rat(0, 1)); 4];
        for &u in &h.groupoid().units.clone() {
            coef[u] = cq(rat(1, 1), rat(0, 1));
        }
        let a = AlgebraElement::from_coef(h, coef).unwrap();
        let (_, _, n) = a.norms();
        assert!((a.geometric_norm() - 1.0).abs() < 1e-12);
        assert!(a.geometric_norm() <= n + 1e-12);
    }

    #[test]
    fn delta_norm_is_fiber_mass() {
        let h = p2_w();
        let d = AlgebraElement::<Cq>::delta(h.clone(), idx(&h, "p0_1"));
        let (l, _, _) = d.norms();
        assert_eq!(l, 4.0);
    }

    #[test]
    fn star_swaps_the_one_sided_norms() {
        let h = p2_w();
        let a = AlgebraElement::<Cq>::from_coef(
            h,
            vec![
                cq(rat(1, 2), rat(1, 3)),
                cq(rat(-1, 4), rat(2, 1)),
                cq(rat(7, 3), rat(0, 1)),
                cq(rat(5, 6), rat(-1, 6)),
            ],
        )
        .unwrap();
        let (l, r, _) = a.norms();
        let (sl, sr, _) = a.star().norms();
        assert!((sl - r).abs() < 1e-12 && (sr - l).abs() < 1e-12);
    }

    #[test]
    fn identity_transport_is_trivial() {
        let h = p2_w();
        let id = identity_morphism(h.groupoid()).unwrap();
        for x in 0..h.groupoid().n {
            for y in 0..h.groupoid().n {
                if let Ok((t_sq, z)) = t_factor_sq(&id, &h, &h, x, y) {
                    assert!(t_sq.is_one(), "transport along the identity must be one");
                    assert_eq!(Some(z), h.groupoid().mul(x, y));
                }
            }
        }
    }

    #[test]
    fn unit_pair_transport_reproduces_the_weight_ratio() {
        // Along the unit-pair morphism with the induced codomain weights
        // c'((a,a)) = c(a)²/ν(a), the transport of the element (0,1) of
        // the weighted fixture is 2.
        let h = p2_w();
        let e = unit_pair(h.groupoid()).unwrap();
        let cod = e.cod.clone();
        let mut c = BTreeMap::new();
        let mut nu = BTreeMap::new();
        let units: Vec<usize> = h.groupoid().units.iter().copied().collect();
        for (i, &u) in units.iter().enumerate() {
            let diag = cod.index_of(&format!("p{i}_{i}")).unwrap();
            c.insert(diag, h.c(u).clone() * h.c(u).clone() / h.nu(u).clone());
            nu.insert(diag, Rat::one());
        }
        let haar_cod = HaarSystem::new(cod, c, nu).unwrap();
        let x = idx(&h, "p0_1");
        // Any admissible y gives the same value.
        let dcod = haar_cod.derived();
        let maps = e.derive_maps().unwrap();
        for y in 0..haar_cod.groupoid().n {
            let b = dcod.e_l[y];
            if maps.f_h.get(&b) == Some(&h.derived().e_r[x]) {
                let t = t_factor(&e, &h, &haar_cod, x, y).unwrap();
                assert!((t - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hat_action_along_identity_is_convolution() {
        let h = p2_w();
        let id = identity_morphism(h.groupoid()).unwrap();
        let a = AlgebraElement::<Cq>::from_coef(
            h.clone(),
            vec![
                cq(rat(1, 2), rat(1, 3)),
                cq(rat(-1, 4), rat(2, 1)),
                cq(rat(7, 3), rat(0, 1)),
                cq(rat(5, 6), rat(-1, 6)),
            ],
        )
        .unwrap();
        let b = a.star();
        let exact = a.convolve(&b).unwrap().to_c64();
        let hat = hat_action(&id, &a.to_c64(), &b.to_c64()).unwrap();
        assert!(hat.close_to(&exact, 1e-12));
    }

    #[test]
    fn unit_function_multiplier_masks_rows() {
        let h = p2_ones();
        let a = AlgebraElement::<Cq>::all_ones(h.clone());
        let g = h.groupoid();
        let u0 = idx(&h, "p0_0");
        let mut mask = BTreeMap::new();
        mask.insert(u0, cq(rat(1, 1), rat(0, 1)));
        for &u in &g.units {
            mask.entry(u).or_insert_with(|| cq(rat(0, 1), rat(0, 1)));
        }
        let masked = a.unit_function_multiplier(&mask).unwrap();
        let d = h.derived();
        for x in 0..g.n {
            let expect_zero = d.e_l[x] != u0;
            assert_eq!(masked.coef[x].is_zero(), expect_zero);
        }
    }

    #[test]
    fn non_invariant_element_weights_rejected() {
        let g = build_pair(2);
        let nu: BTreeMap<usize, Rat> =
            g.units.iter().map(|&u| (u, Rat::one())).collect();
        // Weight depending on the left unit is not left-invariant.
        let w: Vec<Rat> = (0..g.n)
            .map(|x| {
                if g.name(x).starts_with("p0") {
                    rat(1, 1)
                } else {
                    rat(2, 1)
                }
            })
            .collect();
        assert!(matches!(
            HaarSystem::from_element_weights(g, &w, nu),
            Err(AlgError::NotLeftInvariant { .. })
        ));
    }

    #[test]
    fn invariant_element_weights_accepted() {
        let g = build_pair(2);
        let nu: BTreeMap<usize, Rat> =
            g.units.iter().map(|&u| (u, Rat::one())).collect();
        // Weight c(e_r(x)) with c = (1, 4): elements are (0,0),(0,1),(1,0),(1,1).
        let w = vec![rat(1, 1), rat(4, 1), rat(1, 1), rat(4, 1)];
        let h = HaarSystem::from_element_weights(g, &w, nu).unwrap();
        assert_eq!(*h.c(0), rat(1, 1));
        assert_eq!(*h.c(3), rat(4, 1));
    }

    #[test]
    fn zero_weight_rejected() {
        let g = build_pair(2);
        let mut c: BTreeMap<usize, Rat> =
            g.units.iter().map(|&u| (u, Rat::one())).collect();
        let nu = c.clone();
        c.insert(0, rat(0, 1));
        assert!(matches!(
            HaarSystem::new(g, c, nu),
            Err(AlgError::NonPositiveWeight { .. })
        ));
    }
}
