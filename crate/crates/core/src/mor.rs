//! Relational groupoid morphisms.
//!
//! A morphism from `Γ` to `Γ'` is a relation `h ⊆ Γ' × Γ` intertwining the
//! structure relations of the two groupoids: `h∘m = m'∘(h×h)` (with both
//! compositions simple), `h∘s = s'∘h` and `h∘e = e'`.  Validation is
//! relation-algebraic — the graphs are recomposed and compared — and the
//! derived unit and fiber maps are then re-verified as theorems rather than
//! assumed.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::gpd::{build_pair, FiniteGroupoid, GpdError, ValidationReport};
use crate::rel::{FiniteRelation, RelError};

/// Errors from morphism constructors and conversions.
#[derive(Debug, Error)]
pub enum MorError {
    #[error("invalid morphism:\n{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    Mismatch(String),
    #[error("mapping-pair condition ({condition}) fails: {witness}")]
    FgCondition { condition: char, witness: String },
    #[error("action law ({law}) fails: {witness}")]
    ActionLaw { law: char, witness: String },
    #[error(transparent)]
    Groupoid(#[from] GpdError),
    #[error(transparent)]
    Relation(#[from] RelError),
}

/// A validated relational morphism between finite groupoids.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidMorphism {
    pub dom: FiniteGroupoid,
    pub cod: FiniteGroupoid,
    /// Relation from `dom` to `cod`; pairs are target-first `(y, x)` with
    /// `y` in the codomain.
    pub graph: FiniteRelation,
}

/// The unit map and fiber maps extracted from a morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismMaps {
    /// `f_h`: codomain unit → domain unit.
    pub f_h: BTreeMap<usize, usize>,
    /// `h_r[(b, x)]`: for a codomain unit `b` and `x` in the domain right
    /// fiber over `f_h(b)`, the unique related element with right unit `b`.
    pub h_r: BTreeMap<(usize, usize), usize>,
    /// `h_l[(b, x)]`: left-fiber analogue.
    pub h_l: BTreeMap<(usize, usize), usize>,
}

/// Check the three structure-relation equalities and the two simplicity
/// conditions for a candidate morphism graph.
#[must_use]
pub fn validate_morphism(
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
    graph: &FiniteRelation,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    if graph.source_size() != dom.n || graph.target_size() != cod.n {
        report.fail(format!(
            "graph shape {}x{} does not match |dom| = {}, |cod| = {}",
            graph.target_size(),
            graph.source_size(),
            dom.n,
            cod.n
        ));
        return report;
    }
    let m = dom.mul_relation();
    let m2 = cod.mul_relation();

    // h∘m = m'∘(h×h), both sides simple.
    let hm = graph.compose(&m).expect("shape");
    let hh = graph.product(graph);
    let m2hh = m2.compose(&hh).expect("shape");
    if hm != m2hh {
        let witness = hm.pairs().symmetric_difference(m2hh.pairs()).next();
        report.fail(format!(
            "product intertwining fails: h∘m ≠ m'∘(h×h), first differing pair {witness:?}"
        ));
    }
    let (simple, witness) = graph.is_simple(&m).expect("shape");
    if !simple {
        report.fail(format!(
            "composition h∘m is not simple, witness {witness:?}"
        ));
    }
    let (simple, witness) = m2.is_simple(&hh).expect("shape");
    if !simple {
        report.fail(format!(
            "composition m'∘(h×h) is not simple, witness {witness:?}"
        ));
    }

    // h∘s = s'∘h.
    let hs = graph.compose(&dom.inv_relation()).expect("shape");
    let sh = cod.inv_relation().compose(graph).expect("shape");
    if hs != sh {
        let witness = hs.pairs().symmetric_difference(sh.pairs()).next();
        report.fail(format!(
            "involution intertwining fails: h∘s ≠ s'∘h, first differing pair {witness:?}"
        ));
    }

    // h∘e = e'.
    let he = graph.compose(&dom.unit_relation()).expect("shape");
    let e2 = cod.unit_relation();
    if he != e2 {
        let witness = he.pairs().symmetric_difference(e2.pairs()).next();
        report.fail(format!(
            "unit intertwining fails: h∘e ≠ e', first differing pair {witness:?}"
        ));
    }
    report
}

impl GroupoidMorphism {
    /// Build and validate a morphism.
    pub fn new(
        dom: FiniteGroupoid,
        cod: FiniteGroupoid,
        graph: FiniteRelation,
    ) -> Result<Self, MorError> {
        let report = validate_morphism(&dom, &cod, &graph);
        if !report.is_valid() {
            return Err(MorError::Invalid(report));
        }
        Ok(Self { dom, cod, graph })
    }

    /// Extract the unit map `f_h` and the right/left fiber maps, verifying
    /// totality and single-valuedness (which must hold for a validated
    /// morphism) and the agreement of the three descriptions of the
    /// unit-pair part of the graph.
    pub fn derive_maps(&self) -> Result<MorphismMaps, MorError> {
        let dd = self.dom.derive()?;
        let dc = self.cod.derive()?;

        // Unit-pair part of the graph, described three ways.
        let h0: BTreeSet<(usize, usize)> = self
            .graph
            .pairs()
            .iter()
            .filter(|&&(y, x)| self.cod.is_unit(y) && self.dom.is_unit(x))
            .copied()
            .collect();
        let via_r: BTreeSet<(usize, usize)> = self
            .graph
            .pairs()
            .iter()
            .map(|&(y, x)| (dc.e_r[y], dd.e_r[x]))
            .collect();
        let via_l: BTreeSet<(usize, usize)> = self
            .graph
            .pairs()
            .iter()
            .map(|&(y, x)| (dc.e_l[y], dd.e_l[x]))
            .collect();
        if via_r != h0 || via_l != h0 {
            return Err(MorError::Mismatch(
                "unit-pair part of the graph is not reproduced by the unit maps".into(),
            ));
        }

        let mut f_h: BTreeMap<usize, usize> = BTreeMap::new();
        for &(b, a) in &h0 {
            if let Some(&prev) = f_h.get(&b) {
                if prev != a {
                    return Err(MorError::Mismatch(format!(
                        "unit map not single-valued at {}",
                        self.cod.name(b)
                    )));
                }
            }
            f_h.insert(b, a);
        }
        for &b in &self.cod.units {
            if !f_h.contains_key(&b) {
                return Err(MorError::Mismatch(format!(
                    "unit map not total: no value at {}",
                    self.cod.name(b)
                )));
            }
        }

        let mut h_r = BTreeMap::new();
        let mut h_l = BTreeMap::new();
        for (&b, &a) in &f_h {
            for &x in &dd.right_fibers[&a] {
                let mut ys = self
                    .graph
                    .pairs()
                    .iter()
                    .filter(|&&(y, xx)| xx == x && dc.e_r[y] == b)
                    .map(|&(y, _)| y);
                let y = ys.next().ok_or_else(|| {
                    MorError::Mismatch(format!(
                        "right fiber map not total at ({}, {})",
                        self.cod.name(b),
                        self.dom.name(x)
                    ))
                })?;
                if ys.next().is_some() {
                    return Err(MorError::Mismatch(format!(
                        "right fiber map not single-valued at ({}, {})",
                        self.cod.name(b),
                        self.dom.name(x)
                    )));
                }
                h_r.insert((b, x), y);
            }
            for &x in &dd.left_fibers[&a] {
                let mut ys = self
                    .graph
                    .pairs()
                    .iter()
                    .filter(|&&(y, xx)| xx == x && dc.e_l[y] == b)
                    .map(|&(y, _)| y);
                let y = ys.next().ok_or_else(|| {
                    MorError::Mismatch(format!(
                        "left fiber map not total at ({}, {})",
                        self.cod.name(b),
                        self.dom.name(x)
                    ))
                })?;
                if ys.next().is_some() {
                    return Err(MorError::Mismatch(format!(
                        "left fiber map not single-valued at ({}, {})",
                        self.cod.name(b),
                        self.dom.name(x)
                    )));
                }
                h_l.insert((b, x), y);
            }
        }
        Ok(MorphismMaps { f_h, h_r, h_l })
    }

    /// Image of an element subset under the graph.
    #[must_use]
    pub fn image(&self, subset: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.graph.image(subset)
    }
}

/// Composition `k ∘ h` of morphisms `h : Γ → Γ'` and `k : Γ' → Γ''`.
pub fn compose_morphisms(
    k: &GroupoidMorphism,
    h: &GroupoidMorphism,
) -> Result<GroupoidMorphism, MorError> {
    if k.dom != h.cod {
        return Err(MorError::Mismatch(
            "codomain of the inner morphism differs from domain of the outer".into(),
        ));
    }
    let graph = k.graph.compose(&h.graph)?;
    let (simple, witness) = k.graph.is_simple(&h.graph)?;
    if !simple {
        return Err(MorError::Mismatch(format!(
            "composition of morphism graphs is not simple, witness {witness:?}"
        )));
    }
    GroupoidMorphism::new(h.dom.clone(), k.cod.clone(), graph)
}

/// The mapping-pair form of a morphism: a unit map `f` and a fibered map
/// `g` on `{(x, b) : e_r(x) = f(b)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgData {
    /// Codomain unit → domain unit.
    pub f: BTreeMap<usize, usize>,
    /// `(domain element, codomain unit)` → codomain element.
    pub g: BTreeMap<(usize, usize), usize>,
}

/// Extract the mapping-pair form: `f = f_h` and `g(x, b)` the right fiber
/// map applied to `x`.
pub fn to_fg(h: &GroupoidMorphism) -> Result<FgData, MorError> {
    let maps = h.derive_maps()?;
    let g = maps
        .h_r
        .iter()
        .map(|(&(b, x), &y)| ((x, b), y))
        .collect();
    Ok(FgData { f: maps.f_h, g })
}

/// Rebuild a morphism from its mapping-pair form, checking the four
/// characterizing conditions exhaustively; a violation is rejected naming
/// the condition and a witness.
pub fn from_fg(
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
    fg: &FgData,
) -> Result<GroupoidMorphism, MorError> {
    let dd = dom.derive()?;
    let dc = cod.derive()?;

    for &b in &cod.units {
        let a = *fg.f.get(&b).ok_or_else(|| MorError::FgCondition {
            condition: 'f',
            witness: format!("unit map undefined at {}", cod.name(b)),
        })?;
        if !dom.is_unit(a) {
            return Err(MorError::FgCondition {
                condition: 'f',
                witness: format!("f({}) = {} is not a unit", cod.name(b), dom.name(a)),
            });
        }
    }
    // Domain of g must be exactly the fibered set.
    for &b in &cod.units {
        let a = fg.f[&b];
        for &x in &dd.right_fibers[&a] {
            if !fg.g.contains_key(&(x, b)) {
                return Err(MorError::FgCondition {
                    condition: 'g',
                    witness: format!(
                        "g undefined at ({}, {})",
                        dom.name(x),
                        cod.name(b)
                    ),
                });
            }
        }
    }
    for &(x, b) in fg.g.keys() {
        if !cod.is_unit(b) || dd.e_r[x] != fg.f[&b] {
            return Err(MorError::FgCondition {
                condition: 'g',
                witness: format!(
                    "g defined outside the fibered set at ({}, {})",
                    dom.name(x),
                    cod.name(b)
                ),
            });
        }
    }

    // (a) The image of f is saturated: elements whose right unit lies in
    // f(E') have their left unit there too.
    let f_image: BTreeSet<usize> = fg.f.values().copied().collect();
    let saturation: BTreeSet<usize> = (0..dom.n)
        .filter(|&x| f_image.contains(&dd.e_r[x]))
        .map(|x| dd.e_l[x])
        .collect();
    if saturation != f_image {
        let witness = saturation.symmetric_difference(&f_image).next();
        return Err(MorError::FgCondition {
            condition: 'a',
            witness: format!(
                "unit-image saturation fails near {}",
                witness.map_or("?".to_string(), |&u| dom.name(u).to_string())
            ),
        });
    }

    // (b) g lands in the right fiber over b.
    for (&(x, b), &y) in &fg.g {
        if dc.e_r[y] != b {
            return Err(MorError::FgCondition {
                condition: 'b',
                witness: format!(
                    "right unit of g({}, {}) = {} is {}",
                    dom.name(x),
                    cod.name(b),
                    cod.name(y),
                    cod.name(dc.e_r[y])
                ),
            });
        }
    }

    // (c) g intertwines the involutions: s'(g(x, b)) = g(s(x), e_l'(g(x, b))).
    for (&(x, b), &y) in &fg.g {
        let b1 = dc.e_l[y];
        let sx = dom.inv[x];
        let Some(&gsx) = fg.g.get(&(sx, b1)) else {
            return Err(MorError::FgCondition {
                condition: 'c',
                witness: format!(
                    "({}, {}) escapes the fibered set",
                    dom.name(sx),
                    cod.name(b1)
                ),
            });
        };
        if cod.inv[y] != gsx {
            return Err(MorError::FgCondition {
                condition: 'c',
                witness: format!(
                    "s'(g({}, {})) ≠ g(s({}), ·)",
                    dom.name(x),
                    cod.name(b),
                    dom.name(x)
                ),
            });
        }
    }

    // (d) Cocycle law: g(x1·x, b) = g(x1, e_l'(g(x, b))) · g(x, b).
    for (&(x, b), &y) in &fg.g {
        let b1 = dc.e_l[y];
        for x1 in 0..dom.n {
            let Some(x1x) = dom.mul(x1, x) else { continue };
            let Some(&g1) = fg.g.get(&(x1, b1)) else {
                return Err(MorError::FgCondition {
                    condition: 'd',
                    witness: format!(
                        "({}, {}) escapes the fibered set",
                        dom.name(x1),
                        cod.name(b1)
                    ),
                });
            };
            let expected = cod.mul(g1, y).ok_or_else(|| MorError::FgCondition {
                condition: 'd',
                witness: format!(
                    "g({}, ·) and g({}, ·) are not composable",
                    dom.name(x1),
                    dom.name(x)
                ),
            })?;
            let got = *fg.g.get(&(x1x, b)).expect("x1·x stays in the right fiber");
            if got != expected {
                return Err(MorError::FgCondition {
                    condition: 'd',
                    witness: format!(
                        "g({}·{}, {}) = {} but the factored product is {}",
                        dom.name(x1),
                        dom.name(x),
                        cod.name(b),
                        cod.name(got),
                        cod.name(expected)
                    ),
                });
            }
        }
    }

    let graph = FiniteRelation::new(
        dom.n,
        cod.n,
        fg.g
            .iter()
            .map(|(&(x, _), &y)| (y, x))
            .collect::<BTreeSet<_>>(),
    )?;
    GroupoidMorphism::new(dom.clone(), cod.clone(), graph)
}

/// The factorization of a morphism through an intermediate groupoid whose
/// elements are the pairs of the fibered set.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// The intermediate groupoid on pairs `(x, b)` with `e_r(x) = f(b)`.
    pub mid: FiniteGroupoid,
    /// The surjective-leg morphism from the domain to the middle.
    pub k: GroupoidMorphism,
    /// The mapping-leg morphism from the middle to the codomain.
    pub l: GroupoidMorphism,
}

/// Factor `h = l ∘ k` through the fibered-pair groupoid.
pub fn factorize(h: &GroupoidMorphism) -> Result<Factorization, MorError> {
    let fg = to_fg(h)?;
    let dc = h.cod.derive()?;

    // Elements (x, b) in lexicographic order.
    let elements: Vec<(usize, usize)> = fg.g.keys().copied().collect();
    let index: BTreeMap<(usize, usize), usize> = elements
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let names = elements
        .iter()
        .map(|&(x, b)| format!("{}~{}", h.dom.name(x), h.cod.name(b)))
        .collect();
    let units: BTreeSet<usize> = elements
        .iter()
        .enumerate()
        .filter(|(_, &(x, _))| h.dom.is_unit(x))
        .map(|(i, _)| i)
        .collect();
    let inv: Vec<usize> = elements
        .iter()
        .map(|&(x, b)| {
            let y = fg.g[&(x, b)];
            index[&(h.dom.inv[x], dc.e_l[y])]
        })
        .collect();
    let mut prod = BTreeMap::new();
    for (i1, &(x1, b1)) in elements.iter().enumerate() {
        for (i2, &(x2, b2)) in elements.iter().enumerate() {
            if let Some(x1x2) = h.dom.mul(x1, x2) {
                if b1 == dc.e_l[fg.g[&(x2, b2)]] {
                    prod.insert((i1, i2), index[&(x1x2, b2)]);
                }
            }
        }
    }
    let mid = FiniteGroupoid::from_tables(names, units, inv, prod)?;
    let report = mid.validate();
    if !report.is_valid() {
        return Err(MorError::Invalid(report));
    }
    let k_graph = FiniteRelation::new(
        h.dom.n,
        mid.n,
        elements
            .iter()
            .enumerate()
            .map(|(i, &(x, _))| (i, x)),
    )?;
    let k = GroupoidMorphism::new(h.dom.clone(), mid.clone(), k_graph)?;
    let l_graph = FiniteRelation::new(
        mid.n,
        h.cod.n,
        elements
            .iter()
            .enumerate()
            .map(|(i, &(x, b))| (fg.g[&(x, b)], i)),
    )?;
    let l = GroupoidMorphism::new(mid.clone(), h.cod.clone(), l_graph)?;
    Ok(Factorization { mid, k, l })
}

/// A left action of a groupoid on a finite point set: an anchor map from
/// points to units and a partial action map defined exactly on
/// `{(x, y) : e_r(x) = μ(y)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidAction {
    pub g: FiniteGroupoid,
    pub points: usize,
    /// Anchor: point → unit.
    pub mu: Vec<usize>,
    /// `(element, point)` → point.
    pub phi: BTreeMap<(usize, usize), usize>,
}

/// Check the action laws: anchor compatibility, the composition law and
/// unit triviality, plus exactness of the domain of definition.
#[must_use]
pub fn validate_action(a: &GroupoidAction) -> ValidationReport {
    let mut report = ValidationReport::new();
    let d = match a.g.derive() {
        Ok(d) => d,
        Err(e) => {
            report.fail(format!("{e}"));
            return report;
        }
    };
    for x in 0..a.g.n {
        for y in 0..a.points {
            let should = d.e_r[x] == a.mu[y];
            let defined = a.phi.contains_key(&(x, y));
            if defined != should {
                report.fail(format!(
                    "action domain wrong at ({}, point {y}): defined = {defined}",
                    a.g.name(x)
                ));
            }
        }
    }
    for (&(x, y), &z) in &a.phi {
        if z >= a.points {
            report.fail(format!("action value out of bounds at ({}, point {y})", a.g.name(x)));
            continue;
        }
        if a.mu[z] != d.e_l[x] {
            report.fail(format!(
                "anchor law fails at ({}, point {y}): μ(φ) = {} ≠ e_l = {}",
                a.g.name(x),
                a.g.name(a.mu[z]),
                a.g.name(d.e_l[x])
            ));
        }
    }
    for (&(x2, y), &z2) in &a.phi {
        for x1 in 0..a.g.n {
            if let Some(x1x2) = a.g.mul(x1, x2) {
                let lhs = a.phi.get(&(x1x2, y));
                let rhs = a.phi.get(&(x1, z2));
                if lhs != rhs {
                    report.fail(format!(
                        "composition law fails at ({}, {}, point {y})",
                        a.g.name(x1),
                        a.g.name(x2)
                    ));
                }
            }
        }
    }
    for y in 0..a.points {
        if a.phi.get(&(a.mu[y], y)) != Some(&y) {
            report.fail(format!("unit triviality fails at point {y}"));
        }
    }
    report
}

/// Convert an action into a morphism to the pair groupoid on its points:
/// the graph relates `x` to the pair `(φ(x, y), y)` for every admissible
/// `(x, y)`.
pub fn action_to_morphism(a: &GroupoidAction) -> Result<GroupoidMorphism, MorError> {
    let report = validate_action(a);
    if !report.is_valid() {
        return Err(MorError::Invalid(report));
    }
    let cod = build_pair(a.points);
    let graph = FiniteRelation::new(
        a.g.n,
        cod.n,
        a.phi
            .iter()
            .map(|(&(x, y), &z)| (z * a.points + y, x))
            .collect::<BTreeSet<_>>(),
    )?;
    GroupoidMorphism::new(a.g.clone(), cod, graph)
}

/// If `g` is structurally the pair groupoid on `k` points (same indexing
/// as [`build_pair`]), return `k`.
#[must_use]
pub fn pair_groupoid_points(g: &FiniteGroupoid) -> Option<usize> {
    let k = g.units.len();
    if g.n != k * k {
        return None;
    }
    let reference = build_pair(k);
    (g.units == reference.units && g.inv == reference.inv && g.prod == reference.prod)
        .then_some(k)
}

/// Convert a morphism into a pair groupoid back into an action: the anchor
/// is the unit map on diagonal pairs, the action the left coordinate of
/// the right fiber map.
pub fn morphism_to_action(h: &GroupoidMorphism) -> Result<GroupoidAction, MorError> {
    let points = pair_groupoid_points(&h.cod).ok_or_else(|| {
        MorError::Mismatch("codomain is not a pair groupoid in canonical form".into())
    })?;
    let maps = h.derive_maps()?;
    let mu = (0..points)
        .map(|y| maps.f_h[&(y * points + y)])
        .collect();
    let phi = maps
        .h_r
        .iter()
        .map(|(&(b, x), &y_elt)| {
            let point = b / points;
            debug_assert_eq!(b % points, point);
            ((x, point), y_elt / points)
        })
        .collect();
    Ok(GroupoidAction {
        g: h.dom.clone(),
        points,
        mu,
        phi,
    })
}

/// The identity morphism.
pub fn identity_morphism(g: &FiniteGroupoid) -> Result<GroupoidMorphism, MorError> {
    GroupoidMorphism::new(g.clone(), g.clone(), FiniteRelation::identity(g.n))
}

/// The left-regular morphism into the pair groupoid on the elements:
/// `(x, y)` is related to `z` exactly when `x = z·y`.
pub fn left_regular(g: &FiniteGroupoid) -> Result<GroupoidMorphism, MorError> {
    let cod = build_pair(g.n);
    let graph = FiniteRelation::new(
        g.n,
        cod.n,
        g.prod.iter().map(|(&(z, y), &x)| (x * g.n + y, z)),
    )?;
    GroupoidMorphism::new(g.clone(), cod, graph)
}

/// The unit-pair morphism into the pair groupoid on the units, sending
/// each element to the pair of its left and right units.
pub fn unit_pair(g: &FiniteGroupoid) -> Result<GroupoidMorphism, MorError> {
    let d = g.derive()?;
    let units: Vec<usize> = g.units.iter().copied().collect();
    let pos: BTreeMap<usize, usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let k = units.len();
    let cod = build_pair(k);
    let graph = FiniteRelation::new(
        g.n,
        cod.n,
        (0..g.n).map(|x| (pos[&d.e_l[x]] * k + pos[&d.e_r[x]], x)),
    )?;
    GroupoidMorphism::new(g.clone(), cod, graph)
}

/// A morphism between set groupoids: the transposed graph of a map
/// `f : cod → dom`.
pub fn set_map(
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
    f: &[usize],
) -> Result<GroupoidMorphism, MorError> {
    if dom.units.len() != dom.n || cod.units.len() != cod.n {
        return Err(MorError::Mismatch(
            "set morphisms require groupoids whose elements are all units".into(),
        ));
    }
    if f.len() != cod.n || f.iter().any(|&x| x >= dom.n) {
        return Err(MorError::Mismatch("map has wrong shape".into()));
    }
    let graph = FiniteRelation::new(dom.n, cod.n, f.iter().enumerate().map(|(b, &x)| (b, x)))?;
    GroupoidMorphism::new(dom.clone(), cod.clone(), graph)
}

/// The inclusion morphism of a subgroupoid (given by its embedding into
/// the parent) — a morphism exactly when the subgroupoid is wide.
pub fn wide_inclusion(
    sub: &FiniteGroupoid,
    parent: &FiniteGroupoid,
    embed: &[usize],
) -> Result<GroupoidMorphism, MorError> {
    let graph = FiniteRelation::new(
        sub.n,
        parent.n,
        embed.iter().enumerate().map(|(x, &px)| (px, x)),
    )?;
    GroupoidMorphism::new(sub.clone(), parent.clone(), graph)
}

/// The transposed inclusion — a morphism exactly when the subgroupoid is
/// vertical (left-fiber saturated).
pub fn vertical_restriction(
    sub: &FiniteGroupoid,
    parent: &FiniteGroupoid,
    embed: &[usize],
) -> Result<GroupoidMorphism, MorError> {
    let graph = FiniteRelation::new(
        parent.n,
        sub.n,
        embed.iter().enumerate().map(|(x, &px)| (x, px)),
    )?;
    GroupoidMorphism::new(parent.clone(), sub.clone(), graph)
}
