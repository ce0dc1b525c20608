//! Bisections acting as multipliers, the multiplicative cochain complex,
//! modular cocycles, one-parameter automorphism groups, and the canonical
//! weight with its KMS property.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::alg::{
    hat_action, t_factor_sq_with, transport_product, AlgError, AlgebraElement, HaarSystem,
};
use crate::gpd::{build_pair, FiniteGroupoid, GpdError, ValidationReport};
use crate::mor::{unit_pair, GroupoidMorphism, MorError};
use crate::rel::RelError;
use crate::rep::{pi_h, LinearOperator, RepError, WeightedL2};
use crate::scalar::{rat, rat_to_f64, C64, Rat};
use crate::close_c;

use num_traits::{One, Signed};

/// Errors from bisection and cochain operations.
#[derive(Debug, Error)]
pub enum HarmError {
    #[error("not a bisection: {0}")]
    NotBisection(String),
    #[error("size guard exceeded: {got} units, limit {limit}")]
    GuardExceeded { got: usize, limit: usize },
    #[error("not a cochain: {0}")]
    NotCochain(String),
    #[error("cochain degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("not a positive cocycle: {0}")]
    NotCocycle(String),
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Groupoid(#[from] GpdError),
    #[error(transparent)]
    Morphism(#[from] MorError),
    #[error(transparent)]
    Algebra(#[from] AlgError),
    #[error(transparent)]
    Representation(#[from] RepError),
    #[error(transparent)]
    Relation(#[from] RelError),
}

// ---------------------------------------------------------------------
// Bisections
// ---------------------------------------------------------------------

/// A subset of a groupoid whose left and right units each enumerate the
/// unit set exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    /// Member elements, ascending.
    pub elements: BTreeSet<usize>,
    /// Left unit → the member carrying it.
    by_left: BTreeMap<usize, usize>,
    /// Right unit → the member carrying it.
    by_right: BTreeMap<usize, usize>,
}

impl Bisection {
    /// Validate both equivalent descriptions: the unit restrictions are
    /// bijections, and the two-sided product with the inverse set is
    /// exactly the unit set.
    pub fn new(g: &FiniteGroupoid, elements: BTreeSet<usize>) -> Result<Self, HarmError> {
        let d = g.derive()?;
        let mut by_left = BTreeMap::new();
        let mut by_right = BTreeMap::new();
        for &x in &elements {
            if x >= g.n {
                return Err(HarmError::NotBisection(format!("index {x} out of bounds")));
            }
            if by_left.insert(d.e_l[x], x).is_some() {
                return Err(HarmError::NotBisection(format!(
                    "two members share the left unit {}",
                    g.name(d.e_l[x])
                )));
            }
            if by_right.insert(d.e_r[x], x).is_some() {
                return Err(HarmError::NotBisection(format!(
                    "two members share the right unit {}",
                    g.name(d.e_r[x])
                )));
            }
        }
        if by_left.len() != g.units.len() || by_right.len() != g.units.len() {
            return Err(HarmError::NotBisection(format!(
                "{} members cannot cover {} units on both sides",
                elements.len(),
                g.units.len()
            )));
        }
        // Second form: B·s(B) = s(B)·B = units, as product sets.
        let inv_set: BTreeSet<usize> = elements.iter().map(|&x| g.inv[x]).collect();
        for (lhs, rhs, label) in [
            (&elements, &inv_set, "B·s(B)"),
            (&inv_set, &elements, "s(B)·B"),
        ] {
            let mut prod_set = BTreeSet::new();
            for &x in lhs {
                for &y in rhs {
                    if let Some(z) = g.mul(x, y) {
                        prod_set.insert(z);
                    }
                }
            }
            if prod_set != g.units {
                return Err(HarmError::NotBisection(format!(
                    "{label} is not the unit set"
                )));
            }
        }
        Ok(Self {
            elements,
            by_left,
            by_right,
        })
    }

    /// The unit set itself, always a bisection.
    pub fn units(g: &FiniteGroupoid) -> Result<Self, HarmError> {
        Self::new(g, g.units.clone())
    }

    /// The member whose left unit is `a`.
    #[must_use]
    pub fn pick_by_left(&self, a: usize) -> usize {
        self.by_left[&a]
    }

    /// The member whose right unit is `a`.
    #[must_use]
    pub fn pick_by_right(&self, a: usize) -> usize {
        self.by_right[&a]
    }
}

/// Group product of two bisections: the set of composable products.
pub fn bisection_product(
    g: &FiniteGroupoid,
    b1: &Bisection,
    b2: &Bisection,
) -> Result<Bisection, HarmError> {
    let mut prod = BTreeSet::new();
    for &x in &b1.elements {
        for &y in &b2.elements {
            if let Some(z) = g.mul(x, y) {
                prod.insert(z);
            }
        }
    }
    Bisection::new(g, prod)
}

/// Group inverse of a bisection: the image under the involution.
pub fn bisection_inverse(g: &FiniteGroupoid, b: &Bisection) -> Result<Bisection, HarmError> {
    Bisection::new(g, b.elements.iter().map(|&x| g.inv[x]).collect())
}

/// Left translation by a bisection: the unique member composable into
/// `x` from the left, times `x`.
#[must_use]
pub fn act_left(g: &FiniteGroupoid, b: &Bisection, x: usize) -> usize {
    let d = g.derive().expect("translation requires a valid groupoid");
    let m = b.pick_by_right(d.e_l[x]);
    g.mul(m, x).expect("bisection member is composable")
}

/// Right translation by a bisection.
#[must_use]
pub fn act_right(g: &FiniteGroupoid, x: usize, b: &Bisection) -> usize {
    let d = g.derive().expect("translation requires a valid groupoid");
    let m = b.pick_by_left(d.e_r[x]);
    g.mul(x, m).expect("bisection member is composable")
}

/// All bisections of a groupoid (exhaustive; guarded by the unit count).
pub fn enumerate_bisections(
    g: &FiniteGroupoid,
    max_units: usize,
) -> Result<Vec<Bisection>, HarmError> {
    if g.units.len() > max_units {
        return Err(HarmError::GuardExceeded {
            got: g.units.len(),
            limit: max_units,
        });
    }
    let d = g.derive()?;
    let units: Vec<usize> = g.units.iter().copied().collect();
    let mut found = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used_right: BTreeSet<usize> = BTreeSet::new();

    fn recurse(
        g: &FiniteGroupoid,
        d: &crate::gpd::DerivedMaps,
        units: &[usize],
        depth: usize,
        chosen: &mut Vec<usize>,
        used_right: &mut BTreeSet<usize>,
        found: &mut Vec<Bisection>,
    ) {
        if depth == units.len() {
            let set: BTreeSet<usize> = chosen.iter().copied().collect();
            if let Ok(b) = Bisection::new(g, set) {
                found.push(b);
            }
            return;
        }
        for &x in &d.left_fibers[&units[depth]] {
            if used_right.insert(d.e_r[x]) {
                chosen.push(x);
                recurse(g, d, units, depth + 1, chosen, used_right, found);
                chosen.pop();
                used_right.remove(&d.e_r[x]);
            }
        }
    }

    recurse(
        g,
        &d,
        &units,
        0,
        &mut chosen,
        &mut used_right,
        &mut found,
    );
    Ok(found)
}

/// Image of a bisection under a morphism; a bisection of the codomain.
pub fn bisection_image(h: &GroupoidMorphism, b: &Bisection) -> Result<Bisection, HarmError> {
    Bisection::new(&h.cod, h.image(&b.elements))
}

/// The exact square of the weight-correction function of a bisection:
/// `b(z)² = c(e_l(B⁻¹z)) / c(e_l(z))`.  Depends on `z` only through its
/// left unit, so `b(xy) = b(x)` automatically.
pub fn bisection_weight_sq(haar: &HaarSystem, b: &Bisection, z: usize) -> Result<Rat, HarmError> {
    let g = haar.groupoid();
    let d = haar.derived();
    let binv = bisection_inverse(g, b)?;
    let pre = act_left(g, &binv, z);
    Ok(haar.c(d.e_l[pre]).clone() / haar.c(d.e_l[z]).clone())
}

/// Action of a bisection on the algebra:
/// `(Bf)(z) = f(B⁻¹z) · sqrt(c(e_l(B⁻¹z)) / c(e_l(z)))`.
pub fn act_on_algebra(
    b: &Bisection,
    omega: &AlgebraElement<C64>,
) -> Result<AlgebraElement<C64>, HarmError> {
    let haar = &omega.haar;
    let g = haar.groupoid();
    let binv = bisection_inverse(g, b)?;
    let coef = (0..g.n)
        .map(|z| {
            let pre = act_left(g, &binv, z);
            let w = rat_to_f64(&bisection_weight_sq(haar, b, z)?).sqrt();
            Ok(omega.coef[pre] * w)
        })
        .collect::<Result<Vec<_>, HarmError>>()?;
    Ok(AlgebraElement::from_coef(haar.clone(), coef).expect("shape preserved"))
}

/// The unitary implementing a bisection on the weighted ℓ² space of a
/// Haar system.
pub fn bisection_unitary(haar: &HaarSystem, b: &Bisection) -> Result<LinearOperator, HarmError> {
    let g = haar.groupoid();
    let binv = bisection_inverse(g, b)?;
    let mut matrix = DMatrix::from_element(g.n, g.n, C64::new(0.0, 0.0));
    for z in 0..g.n {
        let pre = act_left(g, &binv, z);
        let w = rat_to_f64(&bisection_weight_sq(haar, b, z)?).sqrt();
        matrix[(z, pre)] = C64::new(w, 0.0);
    }
    Ok(LinearOperator {
        space: WeightedL2::from_haar(haar),
        matrix,
    })
}

/// Verify the multiplier laws of a bisection against a morphism:
/// the translated transport product, the exact squared weight-transport
/// intertwining, the hat-action intertwining, the operator identity with
/// the induced unitary, and the hermitian-adjoint pair relation.
pub fn bisection_multiplier_checks(
    h: &GroupoidMorphism,
    haar_dom: &Arc<HaarSystem>,
    haar_cod: &Arc<HaarSystem>,
    b: &Bisection,
    tol: f64,
) -> Result<ValidationReport, HarmError> {
    let mut report = ValidationReport::new();
    if haar_dom.groupoid() != &h.dom || haar_cod.groupoid() != &h.cod {
        return Err(HarmError::Mismatch(
            "Haar systems must live on the morphism domain and codomain".into(),
        ));
    }
    let maps = h.derive_maps()?;
    let dd = haar_dom.derived();
    let dc = haar_cod.derived();
    let dom = &h.dom;
    let cod = &h.cod;
    let hb = bisection_image(h, b)?;

    // Exact laws over the whole transport domain.
    for y in 0..cod.n {
        let bu = dc.e_l[y];
        let a = maps.f_h[&bu];
        for &x in dd.right_fibers[&a].clone().iter() {
            let bx = act_left(dom, b, x);
            let z = transport_product(h, &maps, x, y)?;
            let z_translated = transport_product(h, &maps, bx, y)?;
            if z_translated != act_left(cod, &hb, z) {
                report.fail(format!(
                    "translated transport product differs at ({}, {}): {} vs {}",
                    dom.name(x),
                    cod.name(y),
                    cod.name(z_translated),
                    cod.name(act_left(cod, &hb, z))
                ));
            }
            let (t_sq, _) = t_factor_sq_with(h, &maps, haar_dom, haar_cod, x, y)?;
            let (t_sq_b, _) = t_factor_sq_with(h, &maps, haar_dom, haar_cod, bx, y)?;
            let lhs = bisection_weight_sq(haar_dom, b, bx)? * t_sq_b;
            let rhs =
                t_sq * bisection_weight_sq(haar_cod, &hb, act_left(cod, &hb, z))?;
            if lhs != rhs {
                report.fail(format!(
                    "squared transport intertwining fails at ({}, {}): {} vs {}",
                    dom.name(x),
                    cod.name(y),
                    lhs,
                    rhs
                ));
            }
        }
    }

    // Numeric laws on deterministic sample elements.
    let ramp = |haar: &Arc<HaarSystem>, shift: f64| {
        let n = haar.groupoid().n;
        AlgebraElement::from_coef(
            haar.clone(),
            (0..n)
                .map(|j| C64::new(1.0 + shift + j as f64 * 0.25, 0.5 - j as f64 * 0.125))
                .collect(),
        )
        .expect("shape by construction")
    };
    let w1 = ramp(haar_dom, 0.0);
    let w2 = ramp(haar_cod, 0.5);

    // Hat-action intertwining.
    let lhs = hat_action(h, &act_on_algebra(b, &w1)?, &w2)?;
    let rhs = act_on_algebra(&hb, &hat_action(h, &w1, &w2)?)?;
    if !lhs.close_to(&rhs, tol) {
        report.fail("hat-action does not intertwine the bisection translation".to_string());
    }

    // Operator identity with the induced unitary.
    let op_translated = pi_h(h, &act_on_algebra(b, &w1)?, haar_cod)?;
    let u = bisection_unitary(haar_cod, &hb)?;
    let composed = u.compose(&pi_h(h, &w1, haar_cod)?)?;
    if !op_translated.close_to(&composed, tol) {
        report.fail("operator identity with the induced unitary fails".to_string());
    }

    // Hermitian-adjoint pair: ω₁* ⋆ (Bω₂) = (s(B)ω₁)* ⋆ ω₂ on the domain.
    let w3 = ramp(haar_dom, -0.25);
    let sb = bisection_inverse(dom, b)?;
    let lhs = w1.star().convolve(&act_on_algebra(b, &w3)?)?;
    let rhs = act_on_algebra(&sb, &w1)?.star().convolve(&w3)?;
    if !lhs.close_to(&rhs, tol) {
        report.fail("hermitian-adjoint pair relation fails".to_string());
    }

    Ok(report)
}

// ---------------------------------------------------------------------
// Cochains
// ---------------------------------------------------------------------

/// A nonzero real stored exactly as a sign and a squared rational, so
/// products, quotients and integer powers of square roots stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainValue {
    pub sign: i8,
    /// The square of the magnitude; strictly positive.
    pub sq: Rat,
}

impl CochainValue {
    pub fn new(sign: i8, sq: Rat) -> Result<Self, HarmError> {
        if sign != 1 && sign != -1 {
            return Err(HarmError::NotCochain(format!("sign must be ±1, got {sign}")));
        }
        if !sq.is_positive() {
            return Err(HarmError::NotCochain(format!(
                "squared magnitude must be positive, got {sq}"
            )));
        }
        Ok(Self { sign, sq })
    }

    #[must_use]
    pub fn one() -> Self {
        Self {
            sign: 1,
            sq: Rat::one(),
        }
    }

    #[must_use]
    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.sq.is_one()
    }

    #[must_use]
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            sign: self.sign * rhs.sign,
            sq: self.sq.clone() * rhs.sq.clone(),
        }
    }

    #[must_use]
    pub fn inv(&self) -> Self {
        Self {
            sign: self.sign,
            sq: self.sq.recip(),
        }
    }

    /// Integer power (negative exponents allowed).
    #[must_use]
    pub fn powi(&self, k: i32) -> Self {
        Self {
            sign: if k % 2 == 0 { 1 } else { self.sign },
            sq: self.sq.pow(k),
        }
    }

    /// The value itself, `sign · sqrt(sq)`, in double precision.
    #[must_use]
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * rat_to_f64(&self.sq).sqrt()
    }
}

/// A multiplicative cochain: a nonvanishing real function on composable
/// strings, equal to one whenever some slot is a unit (positive degree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    /// Keyed by the composable string; degree 0 uses one-slot keys over
    /// the units.
    pub values: BTreeMap<Vec<usize>, CochainValue>,
}

/// All composable strings of a given length (degree 0 yields the units
/// as one-slot strings).
pub fn composable_strings(
    g: &FiniteGroupoid,
    degree: usize,
) -> Result<Vec<Vec<usize>>, HarmError> {
    let d = g.derive()?;
    if degree == 0 {
        return Ok(g.units.iter().map(|&u| vec![u]).collect());
    }
    let mut strings: Vec<Vec<usize>> = (0..g.n).map(|x| vec![x]).collect();
    for _ in 1..degree {
        let mut next = Vec::new();
        for s in &strings {
            let tail = *s.last().expect("nonempty");
            for &x in &d.left_fibers[&d.e_r[tail]] {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        strings = next;
    }
    Ok(strings)
}

impl Cochain {
    /// Validate domain exactness, nonvanishing, and the unit-slot
    /// normalization for positive degree.
    pub fn new(
        g: &FiniteGroupoid,
        degree: usize,
        values: BTreeMap<Vec<usize>, CochainValue>,
    ) -> Result<Self, HarmError> {
        let expected = composable_strings(g, degree)?;
        if values.len() != expected.len()
            || expected.iter().any(|s| !values.contains_key(s))
        {
            return Err(HarmError::NotCochain(format!(
                "domain must be exactly the {} composable strings of length {degree}",
                expected.len()
            )));
        }
        for (key, v) in &values {
            CochainValue::new(v.sign, v.sq.clone())?;
            if degree > 0 && key.iter().any(|&x| g.is_unit(x)) && !v.is_one() {
                return Err(HarmError::NotCochain(format!(
                    "string {key:?} has a unit slot but value ≠ 1"
                )));
            }
        }
        Ok(Self { degree, values })
    }

    /// The constant-one cochain of a given degree.
    pub fn constant_one(g: &FiniteGroupoid, degree: usize) -> Result<Self, HarmError> {
        let values = composable_strings(g, degree)?
            .into_iter()
            .map(|s| (s, CochainValue::one()))
            .collect();
        Self::new(g, degree, values)
    }

    #[must_use]
    pub fn is_one(&self) -> bool {
        self.values.values().all(CochainValue::is_one)
    }

    /// Pointwise product (degrees must match).
    pub fn mul(&self, rhs: &Self) -> Result<Self, HarmError> {
        if self.degree != rhs.degree {
            return Err(HarmError::DegreeMismatch {
                expected: self.degree,
                got: rhs.degree,
            });
        }
        let values = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), v.mul(&rhs.values[k])))
            .collect();
        Ok(Self {
            degree: self.degree,
            values,
        })
    }

    /// Pointwise inverse.
    #[must_use]
    pub fn invert(&self) -> Self {
        Self {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), v.inv()))
                .collect(),
        }
    }

    /// The coboundary: degree 0 maps to the left/right-unit quotient on
    /// elements; higher degrees use the alternating merge-and-drop
    /// product with exponents `(−1)^i`.
    pub fn delta(&self, g: &FiniteGroupoid) -> Result<Self, HarmError> {
        let d = g.derive()?;
        let n = self.degree;
        let mut values = BTreeMap::new();
        if n == 0 {
            for x in 0..g.n {
                let v = self.values[&vec![d.e_l[x]]].mul(&self.values[&vec![d.e_r[x]]].inv());
                values.insert(vec![x], v);
            }
            return Self::new(g, 1, values);
        }
        for s in composable_strings(g, n + 1)? {
            let mut v = self.values[&s[1..].to_vec()].clone();
            for i in 1..=n {
                let mut merged: Vec<usize> = Vec::with_capacity(n);
                merged.extend_from_slice(&s[..i - 1]);
                merged.push(g.mul(s[i - 1], s[i]).expect("consecutive slots compose"));
                merged.extend_from_slice(&s[i + 1..]);
                let exp = if i % 2 == 0 { 1 } else { -1 };
                v = v.mul(&self.values[&merged].powi(exp));
            }
            let exp = if (n + 1) % 2 == 0 { 1 } else { -1 };
            v = v.mul(&self.values[&s[..n].to_vec()].powi(exp));
            values.insert(s, v);
        }
        Self::new(g, n + 1, values)
    }
}

/// Whether a degree-1 cochain is a cocycle (its coboundary is constant
/// one; the unit normalization is already part of being a cochain).
pub fn is_cocycle(g: &FiniteGroupoid, sigma: &Cochain) -> Result<bool, HarmError> {
    if sigma.degree != 1 {
        return Err(HarmError::DegreeMismatch {
            expected: 1,
            got: sigma.degree,
        });
    }
    Ok(sigma.delta(g)?.is_one())
}

// ---------------------------------------------------------------------
// Modular cocycle
// ---------------------------------------------------------------------

/// The modular cocycle of a Haar system, stored exactly via its square:
/// `Δ(x)² = c(e_r(x))·ν(e_l(x)) / (c(e_l(x))·ν(e_r(x)))`.
pub fn modular(haar: &HaarSystem) -> Result<Cochain, HarmError> {
    let g = haar.groupoid();
    let d = haar.derived();
    let values = (0..g.n)
        .map(|x| {
            let sq = haar.c(d.e_r[x]).clone() * haar.nu(d.e_l[x]).clone()
                / (haar.c(d.e_l[x]).clone() * haar.nu(d.e_r[x]).clone());
            (vec![x], CochainValue { sign: 1, sq })
        })
        .collect();
    Cochain::new(g, 1, values)
}

/// The unit-pair morphism of a groupoid together with the codomain Haar
/// system under which its weight transport reproduces the modular
/// cocycle: `c'((a,a)) = c(a)²/ν(a)`, `ν' ≡ 1`.
pub fn modular_pair_haar(
    haar: &HaarSystem,
) -> Result<(GroupoidMorphism, HaarSystem), HarmError> {
    let g = haar.groupoid();
    let h = unit_pair(g)?;
    let units: Vec<usize> = g.units.iter().copied().collect();
    let k = units.len();
    let cod = build_pair(k);
    debug_assert_eq!(cod, h.cod);
    let mut c = BTreeMap::new();
    let mut nu = BTreeMap::new();
    for (i, &a) in units.iter().enumerate() {
        let diag = i * k + i;
        c.insert(diag, haar.c(a).clone() * haar.c(a).clone() / haar.nu(a).clone());
        nu.insert(diag, rat(1, 1));
    }
    let haar_cod = HaarSystem::new(cod, c, nu)?;
    Ok((h, haar_cod))
}

/// Cross-check the modular cocycle against the weight transport along
/// the unit-pair morphism, exactly in squared form.
pub fn modular_matches_transport(haar: &HaarSystem) -> Result<bool, HarmError> {
    let delta = modular(haar)?;
    let (h, haar_cod) = modular_pair_haar(haar)?;
    let maps = h.derive_maps()?;
    let dd = haar.derived();
    let dc = haar_cod.derived();
    for x in 0..haar.groupoid().n {
        for y in 0..h.cod.n {
            if maps.f_h.get(&dc.e_l[y]) != Some(&dd.e_r[x]) {
                continue;
            }
            let (t_sq, _) = t_factor_sq_with(&h, &maps, haar, &haar_cod, x, y)?;
            if t_sq != delta.values[&vec![x]].sq {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------
// One-parameter groups
// ---------------------------------------------------------------------

fn require_positive_cocycle(
    g: &FiniteGroupoid,
    sigma: &Cochain,
) -> Result<(), HarmError> {
    if sigma.degree != 1 {
        return Err(HarmError::DegreeMismatch {
            expected: 1,
            got: sigma.degree,
        });
    }
    if let Some((k, _)) = sigma.values.iter().find(|(_, v)| v.sign != 1) {
        return Err(HarmError::NotCocycle(format!(
            "negative value at {:?}",
            k
        )));
    }
    if !is_cocycle(g, sigma)? {
        return Err(HarmError::NotCocycle(
            "coboundary is not constant one".into(),
        ));
    }
    Ok(())
}

/// The one-parameter automorphism group of a positive cocycle:
/// `σ_t(f)(x) = σ(x)^{it}·f(x)`.
pub fn one_parameter_group(
    sigma: &Cochain,
    t: f64,
    omega: &AlgebraElement<C64>,
) -> Result<AlgebraElement<C64>, HarmError> {
    let g = omega.haar.groupoid();
    require_positive_cocycle(g, sigma)?;
    let coef = (0..g.n)
        .map(|x| {
            // σ(x)^{it} = exp(it·log σ(x)), with log σ = log(sq)/2.
            let log_sigma = rat_to_f64(&sigma.values[&vec![x]].sq).ln() / 2.0;
            omega.coef[x] * C64::new(0.0, t * log_sigma).exp()
        })
        .collect();
    Ok(AlgebraElement::from_coef(omega.haar.clone(), coef).expect("shape preserved"))
}

/// The analytic generator at the distinguished imaginary point:
/// `σ^{-1}·f`, cross-checked against the entire function `z ↦ σ^{iz}f`
/// evaluated at `z = i`.
pub fn analytic_generator(
    sigma: &Cochain,
    omega: &AlgebraElement<C64>,
) -> Result<AlgebraElement<C64>, HarmError> {
    let g = omega.haar.groupoid();
    require_positive_cocycle(g, sigma)?;
    let coef = (0..g.n)
        .map(|x| {
            let log_sigma = rat_to_f64(&sigma.values[&vec![x]].sq).ln() / 2.0;
            let direct = omega.coef[x] / sigma.values[&vec![x]].to_f64();
            // Continuation: exp(i·z·log σ) at z = i is exp(−log σ).
            let continued = omega.coef[x]
                * (C64::new(0.0, 1.0) * C64::new(0.0, 1.0) * log_sigma).exp();
            debug_assert!(close_c(direct, continued, 1e-9));
            direct
        })
        .collect();
    Ok(AlgebraElement::from_coef(omega.haar.clone(), coef).expect("shape preserved"))
}

// ---------------------------------------------------------------------
// The canonical weight and its KMS property
// ---------------------------------------------------------------------

/// The canonical weight: `φ(f) = Σ_{a ∈ units} ν(a)·f(a)`.
#[must_use]
pub fn weight_functional(omega: &AlgebraElement<C64>) -> C64 {
    let haar = &omega.haar;
    haar.groupoid()
        .units
        .iter()
        .map(|&a| rat_to_f64(haar.nu(a)) * omega.coef[a])
        .sum()
}

/// The GNS space of the weight: weighted ℓ² with `μ(x) = c(e_l(x))·ν(e_r(x))`.
#[must_use]
pub fn gns_space(haar: &HaarSystem) -> WeightedL2 {
    WeightedL2::from_haar(haar)
}

/// The GNS vector of an element (the coefficients, read in the GNS space).
#[must_use]
pub fn gns_vector(omega: &AlgebraElement<C64>) -> DVector<C64> {
    DVector::from_vec(omega.coef.clone())
}

/// The measure-corrected involution on the GNS space:
/// `(Sψ)(x) = Δ(x)·ψ(s(x))`, a unitary with `S² = 1`.
pub fn modular_conjugation(haar: &HaarSystem) -> Result<LinearOperator, HarmError> {
    let g = haar.groupoid();
    let delta = modular(haar)?;
    let mut matrix = DMatrix::from_element(g.n, g.n, C64::new(0.0, 0.0));
    for x in 0..g.n {
        matrix[(x, g.inv[x])] = C64::new(delta.values[&vec![x]].to_f64(), 0.0);
    }
    Ok(LinearOperator {
        space: gns_space(haar),
        matrix,
    })
}

/// Verify the KMS property of the canonical weight on a sample element:
/// invariance under the modular group, the half-shift isometry, and the
/// two-sided value identity with `σ_{i/2}(ω) = |Δ|^{-1}·ω`.
pub fn kms_check(
    haar: &Arc<HaarSystem>,
    omega: &AlgebraElement<C64>,
    tol: f64,
) -> Result<ValidationReport, HarmError> {
    let mut report = ValidationReport::new();
    if &omega.haar != haar {
        return Err(HarmError::Mismatch(
            "element attached to a different Haar system".into(),
        ));
    }
    let delta = modular(haar)?;
    let space = gns_space(haar);

    // Invariance: φ(σ_t(ω)) = φ(ω) for sample parameters.
    for t in [0.7, -1.3] {
        let moved = one_parameter_group(&delta, t, omega)?;
        if !close_c(weight_functional(&moved), weight_functional(omega), tol) {
            report.fail(format!("weight not invariant under the modular group at t = {t}"));
        }
    }

    // σ_{i/2}(ω) = |Δ|^{-1}·ω.
    let half = analytic_generator_sqrt(&delta, omega)?;

    // Isometry: ‖φ̂((σ_{i/2}ω)*)‖ = ‖φ̂(ω)‖.
    let lhs = space.norm(&gns_vector(&half.star()));
    let rhs = space.norm(&gns_vector(omega));
    if !crate::close(lhs, rhs, tol) {
        report.fail(format!(
            "half-shift star is not isometric: {lhs} vs {rhs}"
        ));
    }

    // Value identity: φ(ω*·ω) = φ(σ_{i/2}(ω)·σ_{i/2}(ω)*).
    let lhs = weight_functional(&omega.star().convolve(omega)?);
    let rhs = weight_functional(&half.convolve(&half.star())?);
    if !close_c(lhs, rhs, tol) {
        report.fail(format!("two-sided value identity fails: {lhs} vs {rhs}"));
    }

    // Positivity on this element.
    let val = weight_functional(&omega.star().convolve(omega)?);
    if val.re < -tol || val.im.abs() > tol * (1.0 + val.re.abs()) {
        report.fail(format!("weight of ω*ω is not nonnegative real: {val}"));
    }
    Ok(report)
}

/// `|σ|^{-1/2}`-scaling: the half-shift `ω ↦ σ^{-1/2}·ω` used by the KMS
/// identities (for the modular cocycle this is `|Δ|^{-1}·ω` applied with
/// `σ = Δ²`; equivalently multiply by `1/Δ(x)`).
pub fn analytic_generator_sqrt(
    sigma: &Cochain,
    omega: &AlgebraElement<C64>,
) -> Result<AlgebraElement<C64>, HarmError> {
    let g = omega.haar.groupoid();
    require_positive_cocycle(g, sigma)?;
    let coef = (0..g.n)
        .map(|x| omega.coef[x] / sigma.values[&vec![x]].to_f64())
        .collect();
    Ok(AlgebraElement::from_coef(omega.haar.clone(), coef).expect("shape preserved"))
}
