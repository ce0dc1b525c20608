//! Finite groupoids in relational form.
//!
//! A groupoid is stored as an element count, a unit subset, an involution
//! table and a partial product table.  Validation does **not** trust the
//! tables: it re-expresses them as relations and checks the relational
//! axioms (associativity, identity, inverse, strong positivity) by exact
//! relation algebra, so the relational definition — not the small-category
//! shortcut — is the ground truth being tested.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::rel::FiniteRelation;

/// Accumulated validation failures, each with a human-readable witness.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    failures: Vec<String>,
}

impl ValidationReport {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.failures.extend(other.failures);
    }

    #[must_use]
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    #[must_use]
    pub fn failures(&self) -> &[String] {
        &self.failures
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            write!(f, "valid")
        } else {
            for line in &self.failures {
                writeln!(f, "{line}")?;
            }
            Ok(())
        }
    }
}

/// Errors raised when an operation requires a valid groupoid (or valid
/// auxiliary data) and does not get one.
#[derive(Debug, Error)]
pub enum GpdError {
    #[error("invalid groupoid:\n{0}")]
    InvalidGroupoid(ValidationReport),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("malformed groupoid data: {0}")]
    Malformed(String),
}

/// A finite groupoid: elements `0..n`, a unit subset, an involution and a
/// partial product defined exactly on composable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub n: usize,
    /// Element names (whitespace-free, used at the I/O boundary).
    pub names: Vec<String>,
    pub units: BTreeSet<usize>,
    pub inv: Vec<usize>,
    pub prod: BTreeMap<(usize, usize), usize>,
}

/// Structure maps derived from a valid groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedMaps {
    /// Left unit of each element: `e_l[x] · x = x`.
    pub e_l: Vec<usize>,
    /// Right unit of each element: `x · e_r[x] = x`.
    pub e_r: Vec<usize>,
    /// `left_fibers[a]` = elements with left unit `a`, ascending.
    pub left_fibers: BTreeMap<usize, Vec<usize>>,
    /// `right_fibers[a]` = elements with right unit `a`, ascending.
    pub right_fibers: BTreeMap<usize, Vec<usize>>,
    /// Orbits: connected components of the unit set under the relation
    /// "some element has left unit here and right unit there", ascending.
    pub orbits: Vec<Vec<usize>>,
    /// `isotropy[a]` = elements with both units equal to `a`.
    pub isotropy: BTreeMap<usize, Vec<usize>>,
}

impl DerivedMaps {
    /// Index of the orbit containing unit `a`.
    #[must_use]
    pub fn orbit_of(&self, a: usize) -> usize {
        self.orbits
            .iter()
            .position(|orbit| orbit.contains(&a))
            .expect("unit belongs to some orbit")
    }
}

impl FiniteGroupoid {
    /// Construct from raw tables, checking only well-formedness (bounds);
    /// semantic validity is the job of [`FiniteGroupoid::validate`].
    pub fn from_tables(
        names: Vec<String>,
        units: BTreeSet<usize>,
        inv: Vec<usize>,
        prod: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self, GpdError> {
        let n = names.len();
        if inv.len() != n {
            return Err(GpdError::Malformed(format!(
                "involution table has {} entries for {} elements",
                inv.len(),
                n
            )));
        }
        for &u in &units {
            if u >= n {
                return Err(GpdError::Malformed(format!("unit index {u} out of bounds")));
            }
        }
        for (x, &y) in inv.iter().enumerate() {
            if y >= n {
                return Err(GpdError::Malformed(format!("inv({x}) = {y} out of bounds")));
            }
        }
        for (&(x, y), &z) in &prod {
            if x >= n || y >= n || z >= n {
                return Err(GpdError::Malformed(format!(
                    "product entry ({x}, {y}) -> {z} out of bounds"
                )));
            }
        }
        Ok(Self {
            n,
            names,
            units,
            inv,
            prod,
        })
    }

    #[must_use]
    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    /// Index of the element with the given name.
    #[must_use]
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[must_use]
    pub fn is_unit(&self, x: usize) -> bool {
        self.units.contains(&x)
    }

    /// The partial product.
    #[must_use]
    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        self.prod.get(&(x, y)).copied()
    }

    /// The multiplication relation `m : Γ² → Γ` with source pairs encoded
    /// row-major (`(x, y) ↦ x·n + y`).
    #[must_use]
    pub fn mul_relation(&self) -> FiniteRelation {
        FiniteRelation::new(
            self.n * self.n,
            self.n,
            self.prod.iter().map(|(&(x, y), &z)| (z, x * self.n + y)),
        )
        .expect("product table within bounds")
    }

    /// The identity relation `e : {*} → Γ` picking out the units.
    #[must_use]
    pub fn unit_relation(&self) -> FiniteRelation {
        FiniteRelation::new(1, self.n, self.units.iter().map(|&u| (u, 0)))
            .expect("units within bounds")
    }

    /// The involution relation `s : Γ → Γ`.
    #[must_use]
    pub fn inv_relation(&self) -> FiniteRelation {
        FiniteRelation::from_map(self.n, &self.inv).expect("involution within bounds")
    }

    /// The flip relation on `Γ²` swapping the factors.
    #[must_use]
    fn flip_relation(&self) -> FiniteRelation {
        let n = self.n;
        FiniteRelation::new(
            n * n,
            n * n,
            (0..n).flat_map(|x| (0..n).map(move |y| (y * n + x, x * n + y))),
        )
        .expect("flip within bounds")
    }

    /// Check the relational groupoid axioms and the table invariants.
    ///
    /// Every failure is reported with a witness; an empty report means the
    /// data is a groupoid.
    #[must_use]
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n = self.n;
        let m = self.mul_relation();
        let e = self.unit_relation();
        let s = self.inv_relation();
        let id = FiniteRelation::identity(n);

        // Involution is an involution and fixes units.
        for x in 0..n {
            if self.inv[self.inv[x]] != x {
                report.fail(format!(
                    "involution not involutive: s(s({})) = {}",
                    self.name(x),
                    self.name(self.inv[self.inv[x]])
                ));
            }
        }
        for &u in &self.units {
            if self.inv[u] != u {
                report.fail(format!(
                    "involution moves unit {} to {}",
                    self.name(u),
                    self.name(self.inv[u])
                ));
            }
        }

        // Associativity: m(m×id) = m(id×m) on Γ³ (row-major triples).
        let lhs = m.compose(&m.product(&id)).expect("shape");
        let rhs = m.compose(&id.product(&m)).expect("shape");
        if lhs != rhs {
            let diff = lhs
                .pairs()
                .symmetric_difference(rhs.pairs())
                .next()
                .copied();
            if let Some((w, t)) = diff {
                let (x, yz) = (t / (n * n), t % (n * n));
                let (y, z) = (yz / n, yz % n);
                report.fail(format!(
                    "associativity fails: triple ({}, {}, {}) yields {} on one side only",
                    self.name(x),
                    self.name(y),
                    self.name(z),
                    self.name(w)
                ));
            }
        }

        // Identity: m(e×id) = m(id×e) = id.
        let left_id = m.compose(&e.product(&id)).expect("shape");
        let right_id = m.compose(&id.product(&e)).expect("shape");
        if left_id != id {
            report.fail(format!(
                "left identity law fails: m(e×id) has {} pairs, expected the identity relation",
                left_id.pairs().len()
            ));
        }
        if right_id != id {
            report.fail(format!(
                "right identity law fails: m(id×e) has {} pairs, expected the identity relation",
                right_id.pairs().len()
            ));
        }

        // Inverse: s∘m = m∘(s×s)∘flip.
        let lhs = s.compose(&m).expect("shape");
        let rhs = m
            .compose(&s.product(&s).compose(&self.flip_relation()).expect("shape"))
            .expect("shape");
        if lhs != rhs {
            report.fail("inverse law fails: s∘m differs from m∘(s×s)∘flip".to_string());
        }

        // Strong positivity: m(s(x), x) is a nonempty subset of the units.
        for x in 0..n {
            match self.mul(self.inv[x], x) {
                None => report.fail(format!(
                    "strong positivity fails: s({})·{} undefined",
                    self.name(x),
                    self.name(x)
                )),
                Some(u) if !self.is_unit(u) => report.fail(format!(
                    "strong positivity fails: s({})·{} = {} is not a unit",
                    self.name(x),
                    self.name(x),
                    self.name(u)
                )),
                Some(_) => {}
            }
        }

        // Composability domain: prod(x, y) defined iff the right unit of x
        // equals the left unit of y (derivable only once positivity holds).
        if report.is_valid() {
            for x in 0..n {
                for y in 0..n {
                    let er_x = self.mul(self.inv[x], x).expect("positivity checked");
                    let el_y = self.mul(y, self.inv[y]).expect("positivity checked");
                    let defined = self.prod.contains_key(&(x, y));
                    if defined != (er_x == el_y) {
                        report.fail(format!(
                            "composability domain fails at ({}, {}): product {} but unit match {}",
                            self.name(x),
                            self.name(y),
                            if defined { "defined" } else { "undefined" },
                            er_x == el_y
                        ));
                    }
                }
            }
        }

        report
    }

    /// Compute the derived structure maps; rejects invalid groupoids.
    pub fn derive(&self) -> Result<DerivedMaps, GpdError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(GpdError::InvalidGroupoid(report));
        }
        let e_l: Vec<usize> = (0..self.n)
            .map(|x| self.mul(x, self.inv[x]).expect("validated"))
            .collect();
        let e_r: Vec<usize> = (0..self.n)
            .map(|x| self.mul(self.inv[x], x).expect("validated"))
            .collect();
        let mut left_fibers: BTreeMap<usize, Vec<usize>> =
            self.units.iter().map(|&u| (u, Vec::new())).collect();
        let mut right_fibers = left_fibers.clone();
        let mut isotropy: BTreeMap<usize, Vec<usize>> =
            self.units.iter().map(|&u| (u, Vec::new())).collect();
        for x in 0..self.n {
            left_fibers.get_mut(&e_l[x]).expect("unit").push(x);
            right_fibers.get_mut(&e_r[x]).expect("unit").push(x);
            if e_l[x] == e_r[x] {
                isotropy.get_mut(&e_l[x]).expect("unit").push(x);
            }
        }

        // Orbits: union-find over units joined by each element.
        let mut parent: BTreeMap<usize, usize> = self.units.iter().map(|&u| (u, u)).collect();
        fn find(parent: &mut BTreeMap<usize, usize>, u: usize) -> usize {
            let p = parent[&u];
            if p == u {
                u
            } else {
                let root = find(parent, p);
                parent.insert(u, root);
                root
            }
        }
        for x in 0..self.n {
            let a = find(&mut parent, e_l[x]);
            let b = find(&mut parent, e_r[x]);
            if a != b {
                parent.insert(a, b);
            }
        }
        let mut orbit_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &u in &self.units {
            let root = find(&mut parent, u);
            orbit_map.entry(root).or_default().push(u);
        }
        let orbits: Vec<Vec<usize>> = orbit_map.into_values().collect();

        Ok(DerivedMaps {
            e_l,
            e_r,
            left_fibers,
            right_fibers,
            orbits,
            isotropy,
        })
    }

    /// Structural consequences of the axioms, re-checked as theorems:
    /// unit products, "product hits a unit only at the inverse", and
    /// bijectivity of the left/right translations between fibers.
    #[must_use]
    pub fn check_consequences(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        // The product must be defined exactly on composable pairs
        // (matching right/left units).  The unit maps are recomputed
        // here from the unit action alone so this check also fires on
        // groupoids that fail other axioms.
        let unit_map = |left: bool| -> Option<Vec<usize>> {
            (0..self.n)
                .map(|x| {
                    let hits: Vec<usize> = self
                        .units
                        .iter()
                        .copied()
                        .filter(|&u| {
                            let p = if left { self.mul(u, x) } else { self.mul(x, u) };
                            p == Some(x)
                        })
                        .collect();
                    (hits.len() == 1).then(|| hits[0])
                })
                .collect()
        };
        if let (Some(e_l), Some(e_r)) = (unit_map(true), unit_map(false)) {
            for x in 0..self.n {
                for y in 0..self.n {
                    let composable = e_r[x] == e_l[y];
                    let defined = self.prod.contains_key(&(x, y));
                    if composable && !defined {
                        report.fail(format!(
                            "composability fails: {}·{} has matching units but no product",
                            self.name(x),
                            self.name(y)
                        ));
                    } else if !composable && defined {
                        report.fail(format!(
                            "composability fails: {}·{} is defined for a non-composable pair",
                            self.name(x),
                            self.name(y)
                        ));
                    }
                }
            }
        } else {
            report.fail("composability fails: an element lacks a unique left or right unit");
        }
        let d = match self.derive() {
            Ok(d) => d,
            Err(e) => {
                report.fail(format!("{e}"));
                return report;
            }
        };
        // Unit pairs compose iff equal, and then to themselves.
        for &a in &self.units {
            for &b in &self.units {
                let p = self.mul(a, b);
                if a == b {
                    if p != Some(a) {
                        report.fail(format!("unit product {0}·{0} ≠ {0}", self.name(a)));
                    }
                } else if p.is_some() {
                    report.fail(format!(
                        "distinct units {} and {} compose",
                        self.name(a),
                        self.name(b)
                    ));
                }
            }
        }
        // A product is a unit only for (x, s(x)).
        for (&(x, y), &z) in &self.prod {
            if self.is_unit(z) && y != self.inv[x] {
                report.fail(format!(
                    "{}·{} is a unit but {} ≠ s({})",
                    self.name(x),
                    self.name(y),
                    self.name(y),
                    self.name(x)
                ));
            }
        }
        // Left translation by x: F_l(e_r[x]) → F_l(e_l[x]) is a bijection;
        // right translation symmetric.
        for x in 0..self.n {
            let dom = &d.left_fibers[&d.e_r[x]];
            let image: BTreeSet<usize> = dom
                .iter()
                .filter_map(|&y| self.mul(x, y))
                .collect();
            if image.len() != dom.len()
                || !image.iter().all(|z| d.e_l[*z] == d.e_l[x])
            {
                report.fail(format!(
                    "left translation by {} is not a fiber bijection",
                    self.name(x)
                ));
            }
            let dom = &d.right_fibers[&d.e_l[x]];
            let image: BTreeSet<usize> = dom
                .iter()
                .filter_map(|&y| self.mul(y, x))
                .collect();
            if image.len() != dom.len()
                || !image.iter().all(|z| d.e_r[*z] == d.e_r[x])
            {
                report.fail(format!(
                    "right translation by {} is not a fiber bijection",
                    self.name(x)
                ));
            }
        }
        report
    }
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub n: usize,
    pub names: Vec<String>,
    /// `mul[x][y]` = product.
    pub mul: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Build and validate a group table; rejects non-groups with the
    /// failing law instance.
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, GpdError> {
        let n = names.len();
        if mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(GpdError::InvalidGroup("table is not n×n".into()));
        }
        if mul
            .iter()
            .flatten()
            .any(|&z| z >= n)
        {
            return Err(GpdError::InvalidGroup("table entry out of bounds".into()));
        }
        let table = Self { n, names, mul };
        let e = table.identity()?;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table.mul[table.mul[x][y]][z] != table.mul[x][table.mul[y][z]] {
                        return Err(GpdError::InvalidGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            table.names[x], table.names[y], table.names[z]
                        )));
                    }
                }
            }
        }
        for x in 0..n {
            if !(0..n).any(|y| table.mul[x][y] == e && table.mul[y][x] == e) {
                return Err(GpdError::InvalidGroup(format!(
                    "no inverse for {}",
                    table.names[x]
                )));
            }
        }
        Ok(table)
    }

    /// The identity element, or an error if none exists.
    pub fn identity(&self) -> Result<usize, GpdError> {
        (0..self.n)
            .find(|&e| (0..self.n).all(|x| self.mul[e][x] == x && self.mul[x][e] == x))
            .ok_or_else(|| GpdError::InvalidGroup("no identity element".into()))
    }

    /// Inverse of an element.
    #[must_use]
    pub fn inv(&self, x: usize) -> usize {
        let e = self.identity().expect("validated group");
        (0..self.n)
            .find(|&y| self.mul[x][y] == e)
            .expect("validated group")
    }

    /// The cyclic group of order `n` with elements `g0..g(n-1)`.
    #[must_use]
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| format!("g{i}")).collect();
        let mul = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        Self::new(names, mul).expect("cyclic group is a group")
    }

    /// The symmetric group on three letters; elements are listed as the
    /// identity, the three transpositions, then the two 3-cycles.
    #[must_use]
    pub fn s3() -> Self {
        // Permutations of {0,1,2} as images (p[0], p[1], p[2]).
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2], // e
            [1, 0, 2], // swap01
            [2, 1, 0], // swap02
            [0, 2, 1], // swap12
            [1, 2, 0], // cyc120 : 0→1→2→0
            [2, 0, 1], // cyc201 : 0→2→1→0
        ];
        let names = vec![
            "e".to_string(),
            "swap01".to_string(),
            "swap02".to_string(),
            "swap12".to_string(),
            "cyc120".to_string(),
            "cyc201".to_string(),
        ];
        let compose = |f: &[usize; 3], g: &[usize; 3]| [f[g[0]], f[g[1]], f[g[2]]];
        let mul = perms
            .iter()
            .map(|f| {
                perms
                    .iter()
                    .map(|g| {
                        let fg = compose(f, g);
                        perms.iter().position(|p| *p == fg).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Self::new(names, mul).expect("s3 is a group")
    }
}

/// The groupoid with `n` elements all of which are units (a set).
#[must_use]
pub fn build_set(n: usize) -> FiniteGroupoid {
    FiniteGroupoid {
        n,
        names: (0..n).map(|i| format!("u{i}")).collect(),
        units: (0..n).collect(),
        inv: (0..n).collect(),
        prod: (0..n).map(|i| ((i, i), i)).collect(),
    }
}

/// The pair groupoid on `n` points: elements `(i, j)` indexed row-major,
/// product `(i, k)·(k, j) = (i, j)`, inverse `(i, j) ↦ (j, i)`.
#[must_use]
pub fn build_pair(n: usize) -> FiniteGroupoid {
    let classes = vec![(0..n).collect::<Vec<usize>>()];
    build_equivalence(n, &classes).expect("single class is a partition")
}

/// The groupoid of an equivalence relation on `points` given as a
/// partition: elements are the related pairs `(i, j)`, product
/// `(i, k)·(k, j) = (i, j)`.
pub fn build_equivalence(
    points: usize,
    classes: &[Vec<usize>],
) -> Result<FiniteGroupoid, GpdError> {
    let mut seen = vec![false; points];
    for class in classes {
        for &p in class {
            if p >= points {
                return Err(GpdError::InvalidPartition(format!("point {p} out of bounds")));
            }
            if seen[p] {
                return Err(GpdError::InvalidPartition(format!("point {p} repeated")));
            }
            seen[p] = true;
        }
    }
    if let Some(p) = seen.iter().position(|&s| !s) {
        return Err(GpdError::InvalidPartition(format!("point {p} not covered")));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for class in classes {
        let mut sorted = class.clone();
        sorted.sort_unstable();
        for &i in &sorted {
            for &j in &sorted {
                pairs.push((i, j));
            }
        }
    }
    pairs.sort_unstable();
    let index: BTreeMap<(usize, usize), usize> = pairs
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k))
        .collect();
    let names = pairs.iter().map(|&(i, j)| format!("p{i}_{j}")).collect();
    let units = pairs
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| i == j)
        .map(|(k, _)| k)
        .collect();
    let inv = pairs.iter().map(|&(i, j)| index[&(j, i)]).collect();
    let mut prod = BTreeMap::new();
    for &(i, k) in &pairs {
        for &(k2, j) in &pairs {
            if k == k2 {
                if let Some(&z) = index.get(&(i, j)) {
                    prod.insert((index[&(i, k)], index[&(k2, j)]), z);
                }
            }
        }
    }
    Ok(FiniteGroupoid {
        n: pairs.len(),
        names,
        units,
        inv,
        prod,
    })
}

/// A group viewed as a groupoid with a single unit.
#[must_use]
pub fn build_group(table: &GroupTable) -> FiniteGroupoid {
    let e = table.identity().expect("validated group");
    let mut prod = BTreeMap::new();
    for x in 0..table.n {
        for y in 0..table.n {
            prod.insert((x, y), table.mul[x][y]);
        }
    }
    FiniteGroupoid {
        n: table.n,
        names: table.names.clone(),
        units: [e].into_iter().collect(),
        inv: (0..table.n).map(|x| table.inv(x)).collect(),
        prod,
    }
}

/// The transformation groupoid of a left group action on `points` points:
/// elements `(g, x)` indexed row-major, product
/// `(g1, g2·x)·(g2, x) = (g1 g2, x)`, inverse `(g, x) ↦ (g⁻¹, g·x)`.
///
/// `action[g][x]` is the image point; the action laws are checked and a
/// violation is rejected with the failing instance.
pub fn build_transformation(
    group: &GroupTable,
    action: &[Vec<usize>],
) -> Result<FiniteGroupoid, GpdError> {
    let e = group.identity()?;
    if action.len() != group.n {
        return Err(GpdError::InvalidAction("one row per group element required".into()));
    }
    let points = action.first().map_or(0, Vec::len);
    if action.iter().any(|row| row.len() != points)
        || action.iter().flatten().any(|&p| p >= points)
    {
        return Err(GpdError::InvalidAction("ragged or out-of-bounds action table".into()));
    }
    for x in 0..points {
        if action[e][x] != x {
            return Err(GpdError::InvalidAction(format!(
                "identity moves point {x} to {}",
                action[e][x]
            )));
        }
    }
    for g1 in 0..group.n {
        for g2 in 0..group.n {
            for x in 0..points {
                if action[group.mul[g1][g2]][x] != action[g1][action[g2][x]] {
                    return Err(GpdError::InvalidAction(format!(
                        "compatibility fails at ({}, {}, point {x})",
                        group.names[g1], group.names[g2]
                    )));
                }
            }
        }
    }
    let idx = |g: usize, x: usize| g * points + x;
    let names = (0..group.n)
        .flat_map(|g| (0..points).map(move |x| (g, x)))
        .map(|(g, x)| format!("{}_x{}", group.names[g], x))
        .collect();
    let units = (0..points).map(|x| idx(e, x)).collect();
    let inv = (0..group.n)
        .flat_map(|g| (0..points).map(move |x| (g, x)))
        .map(|(g, x)| idx(group.inv(g), action[g][x]))
        .collect();
    let mut prod = BTreeMap::new();
    for g1 in 0..group.n {
        for g2 in 0..group.n {
            for x in 0..points {
                // (g1, g2·x) · (g2, x) = (g1·g2, x)
                prod.insert(
                    (idx(g1, action[g2][x]), idx(g2, x)),
                    idx(group.mul[g1][g2], x),
                );
            }
        }
    }
    Ok(FiniteGroupoid {
        n: group.n * points,
        names,
        units,
        inv,
        prod,
    })
}

/// Cartesian product of two groupoids: elements `(x1, x2)` indexed
/// row-major, all structure componentwise.
#[must_use]
pub fn build_product(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> FiniteGroupoid {
    let idx = |x1: usize, x2: usize| x1 * g2.n + x2;
    let names = (0..g1.n)
        .flat_map(|x1| (0..g2.n).map(move |x2| (x1, x2)))
        .map(|(x1, x2)| format!("{}|{}", g1.names[x1], g2.names[x2]))
        .collect();
    let units = g1
        .units
        .iter()
        .flat_map(|&u1| g2.units.iter().map(move |&u2| idx(u1, u2)))
        .collect();
    let inv = (0..g1.n)
        .flat_map(|x1| (0..g2.n).map(move |x2| (x1, x2)))
        .map(|(x1, x2)| idx(g1.inv[x1], g2.inv[x2]))
        .collect();
    let mut prod = BTreeMap::new();
    for (&(x1, y1), &z1) in &g1.prod {
        for (&(x2, y2), &z2) in &g2.prod {
            prod.insert((idx(x1, x2), idx(y1, y2)), idx(z1, z2));
        }
    }
    FiniteGroupoid {
        n: g1.n * g2.n,
        names,
        units,
        inv,
        prod,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_is_valid() {
        let g = build_pair(2);
        assert_eq!(g.n, 4);
        assert_eq!(g.units.len(), 2);
        assert!(g.validate().is_valid());
        assert!(g.check_consequences().is_valid());
    }

    #[test]
    fn group_groupoid_is_valid() {
        let g = build_group(&GroupTable::cyclic(2));
        assert!(g.validate().is_valid());
        let d = g.derive().unwrap();
        assert_eq!(d.left_fibers[&0].len(), 2);
        assert_eq!(d.right_fibers[&0].len(), 2);
    }

    #[test]
    fn rewired_pair_groupoid_fails_validation() {
        // Rewire (0,1)·(1,0) to (1,1): associativity must break with a
        // witness.
        let mut g = build_pair(2);
        let x01 = g.index_of("p0_1").unwrap();
        let x10 = g.index_of("p1_0").unwrap();
        let x11 = g.index_of("p1_1").unwrap();
        g.prod.insert((x01, x10), x11);
        let report = g.validate();
        assert!(!report.is_valid());
        assert!(report
            .failures()
            .iter()
            .any(|f| f.contains("associativity") || f.contains("inverse")));
    }

    #[test]
    fn pair_fibers_have_size_two() {
        let g = build_pair(2);
        let d = g.derive().unwrap();
        for fiber in d.left_fibers.values() {
            assert_eq!(fiber.len(), 2);
        }
        assert_eq!(d.orbits.len(), 1);
    }

    #[test]
    fn transformation_groupoid_swap() {
        let z2 = GroupTable::cyclic(2);
        let action = vec![vec![0, 1], vec![1, 0]];
        let g = build_transformation(&z2, &action).unwrap();
        assert!(g.validate().is_valid());
        assert!(g.check_consequences().is_valid());
        // s(g, x) = (g⁻¹, g·x): the swap element over point 0 inverts to
        // the swap element over point 1.
        let gx0 = g.index_of("g1_x0").unwrap();
        let gx1 = g.index_of("g1_x1").unwrap();
        assert_eq!(g.inv[gx0], gx1);
    }

    #[test]
    fn invalid_action_rejected() {
        let z2 = GroupTable::cyclic(2);
        // Non-involutive "action" of the order-2 generator.
        let action = vec![vec![0, 1, 2], vec![1, 2, 0]];
        assert!(matches!(
            build_transformation(&z2, &action),
            Err(GpdError::InvalidAction(_))
        ));
    }

    #[test]
    fn product_counts_multiply() {
        let g = build_product(&build_group(&GroupTable::cyclic(2)), &build_pair(2));
        assert_eq!(g.n, 8);
        assert_eq!(g.units.len(), 2);
        assert!(g.validate().is_valid());
        assert!(g.check_consequences().is_valid());
    }

    #[test]
    fn equivalence_builder_validates_partition() {
        assert!(build_equivalence(3, &[vec![0, 1], vec![2]]).is_ok());
        assert!(build_equivalence(3, &[vec![0, 1]]).is_err());
        assert!(build_equivalence(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn set_builder_is_all_units() {
        let g = build_set(3);
        assert!(g.validate().is_valid());
        assert_eq!(g.units.len(), 3);
    }

    #[test]
    fn non_group_table_rejected() {
        // A table with no identity.
        let names = vec!["a".to_string(), "b".to_string()];
        let mul = vec![vec![1, 1], vec![1, 1]];
        assert!(matches!(
            GroupTable::new(names, mul),
            Err(GpdError::InvalidGroup(_))
        ));
    }

    #[test]
    fn s3_has_order_six() {
        let s3 = GroupTable::s3();
        assert_eq!(s3.n, 6);
        assert!(build_group(&s3).validate().is_valid());
    }
}
