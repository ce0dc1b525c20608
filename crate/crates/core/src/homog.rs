//! Double groups (exact factorizations), their groupoids, the
//! comultiplication morphism and the pentagon operator; subgroupoids with
//! wide/vertical classification and homogeneous-space quotient morphisms.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::gpd::{build_pair, build_product, FiniteGroupoid, GpdError, GroupTable};
use crate::mor::{GroupoidMorphism, MorError};
use crate::rel::{FiniteRelation, RelError};

/// Errors from double-group and subgroupoid construction.
#[derive(Debug, Error)]
pub enum HomogError {
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not an exact factorization: {0}")]
    NotExactFactorization(String),
    #[error("subset not closed as a subgroupoid: {0}")]
    NotClosed(String),
    #[error("subgroupoid is not wide: unit {0} missing")]
    NotWide(String),
    #[error("size guard exceeded: {got} elements, limit {limit}")]
    GuardExceeded { got: usize, limit: usize },
    #[error("pentagon operator is not a bijection at ({0}, {1})")]
    NotBijective(String, String),
    #[error(transparent)]
    Groupoid(#[from] GpdError),
    #[error(transparent)]
    Morphism(#[from] MorError),
    #[error(transparent)]
    Relation(#[from] RelError),
}

/// A group with two subgroups giving a unique (exact) factorization
/// `G = A·B`, together with the four decomposition maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleGroup {
    pub group: GroupTable,
    /// Elements of the first subgroup, ascending.
    pub a: Vec<usize>,
    /// Elements of the second subgroup, ascending.
    pub b: Vec<usize>,
    /// `g = a_l(g) · b_r(g)`.
    pub a_l: Vec<usize>,
    pub b_r: Vec<usize>,
    /// `g = b_l(g) · a_r(g)`.
    pub b_l: Vec<usize>,
    pub a_r: Vec<usize>,
}

fn check_subgroup(group: &GroupTable, set: &[usize], label: &str) -> Result<(), HomogError> {
    let e = group.identity().map_err(HomogError::Groupoid)?;
    let members: BTreeSet<usize> = set.iter().copied().collect();
    if !members.contains(&e) {
        return Err(HomogError::NotSubgroup(format!(
            "{label} does not contain the identity"
        )));
    }
    for &x in set {
        if x >= group.n {
            return Err(HomogError::NotSubgroup(format!(
                "{label} contains out-of-bounds index {x}"
            )));
        }
        if !members.contains(&group.inv(x)) {
            return Err(HomogError::NotSubgroup(format!(
                "{label} not closed under inversion at {}",
                group.names[x]
            )));
        }
        for &y in set {
            if !members.contains(&group.mul[x][y]) {
                return Err(HomogError::NotSubgroup(format!(
                    "{label} not closed under product at ({}, {})",
                    group.names[x], group.names[y]
                )));
            }
        }
    }
    Ok(())
}

/// Build a double group, rejecting non-subgroups, nontrivial
/// intersections and non-unique factorizations with a witness element.
pub fn build_double(
    group: GroupTable,
    a: &[usize],
    b: &[usize],
) -> Result<DoubleGroup, HomogError> {
    check_subgroup(&group, a, "first subgroup")?;
    check_subgroup(&group, b, "second subgroup")?;
    let e = group.identity().map_err(HomogError::Groupoid)?;
    let a_set: BTreeSet<usize> = a.iter().copied().collect();
    let b_set: BTreeSet<usize> = b.iter().copied().collect();
    if let Some(&x) = a_set.intersection(&b_set).find(|&&x| x != e) {
        return Err(HomogError::NotExactFactorization(format!(
            "subgroups intersect at {}",
            group.names[x]
        )));
    }
    if a_set.len() * b_set.len() != group.n {
        return Err(HomogError::NotExactFactorization(format!(
            "|A|·|B| = {} but |G| = {}",
            a_set.len() * b_set.len(),
            group.n
        )));
    }
    let mut a_l = vec![usize::MAX; group.n];
    let mut b_r = vec![usize::MAX; group.n];
    for &x in &a_set {
        for &y in &b_set {
            let g = group.mul[x][y];
            if a_l[g] != usize::MAX {
                return Err(HomogError::NotExactFactorization(format!(
                    "element {} factors twice as a·b",
                    group.names[g]
                )));
            }
            a_l[g] = x;
            b_r[g] = y;
        }
    }
    let mut b_l = vec![usize::MAX; group.n];
    let mut a_r = vec![usize::MAX; group.n];
    for &y in &b_set {
        for &x in &a_set {
            let g = group.mul[y][x];
            if b_l[g] != usize::MAX {
                return Err(HomogError::NotExactFactorization(format!(
                    "element {} factors twice as b·a",
                    group.names[g]
                )));
            }
            b_l[g] = y;
            a_r[g] = x;
        }
    }
    let mut sorted_a: Vec<usize> = a_set.into_iter().collect();
    let mut sorted_b: Vec<usize> = b_set.into_iter().collect();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    Ok(DoubleGroup {
        group,
        a: sorted_a,
        b: sorted_b,
        a_l,
        b_r,
        b_l,
        a_r,
    })
}

impl DoubleGroup {
    /// The groupoid on `G` whose units are the first subgroup: product
    /// `g1 ∘ g2 = g1·b_r(g2)` defined when `a_r(g1) = a_l(g2)`, inverse
    /// `g ↦ b_l(g)⁻¹·a_l(g)`.
    #[must_use]
    pub fn groupoid_a(&self) -> FiniteGroupoid {
        let g = &self.group;
        let mut prod = BTreeMap::new();
        for g1 in 0..g.n {
            for g2 in 0..g.n {
                if self.a_r[g1] == self.a_l[g2] {
                    prod.insert((g1, g2), g.mul[g1][self.b_r[g2]]);
                }
            }
        }
        let inv = (0..g.n)
            .map(|x| g.mul[g.inv(self.b_l[x])][self.a_l[x]])
            .collect();
        FiniteGroupoid {
            n: g.n,
            names: g.names.clone(),
            units: self.a.iter().copied().collect(),
            inv,
            prod,
        }
    }

    /// The mirror groupoid whose units are the second subgroup.
    #[must_use]
    pub fn groupoid_b(&self) -> FiniteGroupoid {
        let g = &self.group;
        let mut prod = BTreeMap::new();
        for g1 in 0..g.n {
            for g2 in 0..g.n {
                if self.b_r[g1] == self.b_l[g2] {
                    prod.insert((g1, g2), g.mul[g1][self.a_r[g2]]);
                }
            }
        }
        let inv = (0..g.n)
            .map(|x| g.mul[g.inv(self.a_l[x])][self.b_l[x]])
            .collect();
        FiniteGroupoid {
            n: g.n,
            names: g.names.clone(),
            units: self.b.iter().copied().collect(),
            inv,
            prod,
        }
    }
}

/// The comultiplication morphism: the transposed graph of the mirror
/// product, from the first groupoid into the **product** groupoid (not
/// the pair groupoid) of two copies of itself.
pub fn comultiplication(dg: &DoubleGroup) -> Result<GroupoidMorphism, HomogError> {
    let ga = dg.groupoid_a();
    let cod = build_product(&ga, &ga);
    let n = dg.group.n;
    let mut pairs = BTreeSet::new();
    for g1 in 0..n {
        for g2 in 0..n {
            if dg.b_r[g1] == dg.b_l[g2] {
                let product = dg.group.mul[g1][dg.a_r[g2]];
                pairs.insert((g1 * n + g2, product));
            }
        }
    }
    let graph = FiniteRelation::new(n, cod.n, pairs)?;
    Ok(GroupoidMorphism::new(ga, cod, graph)?)
}

/// Check coassociativity of the comultiplication as an exact relation
/// equality on triples.
pub fn coassociativity_holds(dg: &DoubleGroup) -> Result<bool, HomogError> {
    let comult = comultiplication(dg)?;
    let n = dg.group.n;
    let id = FiniteRelation::identity(n);
    let lhs = comult.graph.product(&id).compose(&comult.graph)?;
    let rhs = id.product(&comult.graph).compose(&comult.graph)?;
    Ok(lhs == rhs)
}

/// The pentagon operator and the result of verifying its defining
/// permutation identity on all triples.
#[derive(Debug, Clone)]
pub struct PentagonReport {
    /// `psi[x·n + y]` = image pair of `(x, y)`, encoded row-major.
    pub psi: Vec<usize>,
    pub triples_total: usize,
    pub triples_passed: usize,
    /// First failing triple, if any.
    pub witness: Option<(usize, usize, usize)>,
}

impl PentagonReport {
    #[must_use]
    pub fn holds(&self) -> bool {
        self.triples_passed == self.triples_total
    }
}

/// Build the pentagon operator `Ψ(x, y) = (x·a_l(y)⁻¹, b_r(x·a_l(y)⁻¹)·y)`
/// of a double group, verify bijectivity, and check the pentagon identity
/// `Ψ23 ∘ Ψ12 = Ψ12 ∘ Ψ13 ∘ Ψ23` pointwise over all triples.
pub fn pentagon(dg: &DoubleGroup) -> Result<PentagonReport, HomogError> {
    let g = &dg.group;
    let n = g.n;
    let mut psi = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            let x2 = g.mul[x][g.inv(dg.a_l[y])];
            let y2 = g.mul[dg.b_r[x2]][y];
            psi[x * n + y] = x2 * n + y2;
        }
    }
    // Bijectivity.
    let mut seen = vec![false; n * n];
    for (src, &dst) in psi.iter().enumerate() {
        if seen[dst] {
            let (x, y) = (src / n, src % n);
            return Err(HomogError::NotBijective(
                g.names[x].clone(),
                g.names[y].clone(),
            ));
        }
        seen[dst] = true;
    }

    let apply = |pair: usize| (psi[pair] / n, psi[pair] % n);
    let psi12 = |x: usize, y: usize, z: usize| {
        let (x2, y2) = apply(x * n + y);
        (x2, y2, z)
    };
    let psi13 = |x: usize, y: usize, z: usize| {
        let (x2, z2) = apply(x * n + z);
        (x2, y, z2)
    };
    let psi23 = |x: usize, y: usize, z: usize| {
        let (y2, z2) = apply(y * n + z);
        (x, y2, z2)
    };

    let mut passed = 0;
    let mut witness = None;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (ax, ay, az) = psi12(x, y, z);
                let lhs = psi23(ax, ay, az);
                let (bx, by, bz) = psi23(x, y, z);
                let (cx, cy, cz) = psi13(bx, by, bz);
                let rhs = psi12(cx, cy, cz);
                if lhs == rhs {
                    passed += 1;
                } else if witness.is_none() {
                    witness = Some((x, y, z));
                }
            }
        }
    }
    Ok(PentagonReport {
        psi,
        triples_total: n * n * n,
        triples_passed: passed,
        witness,
    })
}

/// A closed subset of a groupoid with the induced structure and its
/// classification flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgroupoid {
    /// Parent indices of the members, ascending.
    pub subset: Vec<usize>,
    /// The induced groupoid on the subset (reindexed `0..subset.len()`).
    pub groupoid: FiniteGroupoid,
    /// Contains every unit of the parent.
    pub wide: bool,
    /// Saturated under left fibers of the parent.
    pub vertical: bool,
}

/// Verify closure of a subset under the induced involution and product,
/// build the induced groupoid and classify it.
pub fn classify_subgroupoid(
    parent: &FiniteGroupoid,
    subset: &BTreeSet<usize>,
) -> Result<Subgroupoid, HomogError> {
    let d = parent.derive()?;
    for &x in subset {
        if x >= parent.n {
            return Err(HomogError::NotClosed(format!("index {x} out of bounds")));
        }
        if !subset.contains(&parent.inv[x]) {
            return Err(HomogError::NotClosed(format!(
                "inverse of {} escapes the subset",
                parent.name(x)
            )));
        }
    }
    for &x in subset {
        for &y in subset {
            if let Some(z) = parent.mul(x, y) {
                if !subset.contains(&z) {
                    return Err(HomogError::NotClosed(format!(
                        "product {}·{} = {} escapes the subset",
                        parent.name(x),
                        parent.name(y),
                        parent.name(z)
                    )));
                }
            }
        }
    }
    let members: Vec<usize> = subset.iter().copied().collect();
    let index: BTreeMap<usize, usize> = members
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i))
        .collect();
    let names = members.iter().map(|&x| parent.name(x).to_string()).collect();
    let units = members
        .iter()
        .enumerate()
        .filter(|(_, &x)| parent.is_unit(x))
        .map(|(i, _)| i)
        .collect();
    let inv = members.iter().map(|&x| index[&parent.inv[x]]).collect();
    let mut prod = BTreeMap::new();
    for &x in &members {
        for &y in &members {
            if let Some(z) = parent.mul(x, y) {
                prod.insert((index[&x], index[&y]), index[&z]);
            }
        }
    }
    let groupoid = FiniteGroupoid::from_tables(names, units, inv, prod)?;
    let report = groupoid.validate();
    if !report.is_valid() {
        return Err(HomogError::NotClosed(format!(
            "induced structure fails validation:\n{report}"
        )));
    }
    let wide = parent.units.iter().all(|u| subset.contains(u));
    let vertical = subset
        .iter()
        .all(|&x| d.left_fibers[&d.e_l[x]].iter().all(|y| subset.contains(y)));
    Ok(Subgroupoid {
        subset: members,
        groupoid,
        wide,
        vertical,
    })
}

/// Enumerate every wide subgroupoid of a parent with at most `limit`
/// elements (exhaustive over subsets of the non-units).
pub fn enumerate_wide_subgroupoids(
    parent: &FiniteGroupoid,
    limit: usize,
) -> Result<Vec<Subgroupoid>, HomogError> {
    if parent.n > limit {
        return Err(HomogError::GuardExceeded {
            got: parent.n,
            limit,
        });
    }
    let non_units: Vec<usize> = (0..parent.n).filter(|x| !parent.is_unit(*x)).collect();
    let mut found = Vec::new();
    for mask in 0..(1u64 << non_units.len()) {
        let mut subset: BTreeSet<usize> = parent.units.iter().copied().collect();
        for (i, &x) in non_units.iter().enumerate() {
            if mask & (1 << i) != 0 {
                subset.insert(x);
            }
        }
        if let Ok(sub) = classify_subgroupoid(parent, &subset) {
            debug_assert!(sub.wide);
            found.push(sub);
        }
    }
    Ok(found)
}

/// The homogeneous-space quotient by a wide subgroupoid.
#[derive(Debug, Clone)]
pub struct QuotientData {
    /// Equivalence classes of elements, each ascending, ordered by their
    /// least member.
    pub classes: Vec<Vec<usize>>,
    /// Class index of each parent element.
    pub class_of: Vec<usize>,
    /// Anchor of each class: the common left unit of its members.
    pub anchor: Vec<usize>,
    /// The induced morphism onto the pair groupoid of the classes.
    pub morphism: GroupoidMorphism,
}

/// Quotient a groupoid by a wide subgroupoid: elements are identified
/// when the inverse of one composes with the other into the subgroupoid,
/// and the translation action on classes yields a morphism to the pair
/// groupoid of the quotient set.
pub fn quotient_morphism(
    parent: &FiniteGroupoid,
    sub: &Subgroupoid,
) -> Result<QuotientData, HomogError> {
    if !sub.wide {
        let missing = parent
            .units
            .iter()
            .find(|u| !sub.subset.contains(u))
            .map_or_else(|| "?".to_string(), |&u| parent.name(u).to_string());
        return Err(HomogError::NotWide(missing));
    }
    let d = parent.derive()?;
    let members: BTreeSet<usize> = sub.subset.iter().copied().collect();
    let related = |x: usize, y: usize| -> bool {
        parent
            .mul(parent.inv[x], y)
            .is_some_and(|z| members.contains(&z))
    };
    let mut class_of = vec![usize::MAX; parent.n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..parent.n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = Vec::new();
        for y in x..parent.n {
            if class_of[y] == usize::MAX && related(x, y) {
                class_of[y] = id;
                class.push(y);
            }
        }
        classes.push(class);
    }
    // Anchor is well-defined: identified elements share their left unit.
    let anchor: Vec<usize> = classes.iter().map(|class| d.e_l[class[0]]).collect();
    for (i, class) in classes.iter().enumerate() {
        for &y in class {
            debug_assert_eq!(d.e_l[y], anchor[i]);
        }
    }

    let k = classes.len();
    let cod = build_pair(k);
    let mut pairs = BTreeSet::new();
    for x in 0..parent.n {
        for (yi, class) in classes.iter().enumerate() {
            if d.e_r[x] == anchor[yi] {
                let target = class_of[parent.mul(x, class[0]).expect("anchored")];
                pairs.insert((target * k + yi, x));
            }
        }
    }
    let graph = FiniteRelation::new(parent.n, cod.n, pairs)?;
    let morphism = GroupoidMorphism::new(parent.clone(), cod, graph)?;
    Ok(QuotientData {
        classes,
        class_of,
        anchor,
        morphism,
    })
}
