//! Line-based ASCII file formats for every workbench object, with
//! deterministic (idempotent) serializers, plus the shared error type
//! carrying the process exit code.
//!
//! All formats resolve referenced paths relative to the file that
//! mentions them.  Rational numbers are accepted as `P/Q`, as integers,
//! or as decimals (converted exactly as printed); they are always
//! written back as `P` or `P/Q`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use gwb_core::alg::{AlgebraElement, HaarSystem};
use gwb_core::gpd::{FiniteGroupoid, GroupTable};
use gwb_core::harm::{Cochain, CochainValue};
use gwb_core::homog::{build_double, DoubleGroup};
use gwb_core::mor::{FgData, GroupoidMorphism};
use gwb_core::rel::FiniteRelation;
use gwb_core::rep::LinearOperator;
use gwb_core::scalar::{Cq, Rat, C64};

// ---------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------

/// A command failure, split by exit code: usage and syntax problems exit
/// with 2, checked semantic failures (a violated law, with a witness)
/// exit with 1.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input file: exit code 2.
    Syntax {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    /// Bad invocation or unreadable file: exit code 2.
    Usage(String),
    /// A checked invariant failed: exit code 1.
    Invalid(String),
}

impl CliError {
    #[must_use]
    pub fn code(&self) -> u8 {
        match self {
            CliError::Syntax { .. } | CliError::Usage(_) => 2,
            CliError::Invalid(_) => 1,
        }
    }

    pub fn syntax(path: &Path, line: usize, msg: impl Into<String>) -> Self {
        CliError::Syntax {
            path: path.to_path_buf(),
            line,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Syntax { path, line, msg } => {
                write!(f, "{}:{line}: syntax error: {msg}", path.display())
            }
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Invalid(msg) => write!(f, "invalid: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Checked (exit 1) wrapper for any core-library error.
pub fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

// ---------------------------------------------------------------------
// Numbers
// ---------------------------------------------------------------------

/// Parse a rational given as `P/Q`, an integer, or a decimal (converted
/// exactly as printed, so the core never sees floats).
pub fn parse_rat(tok: &str) -> Option<Rat> {
    if let Some((p, q)) = tok.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        let (sign, int) = match int.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int),
        };
        let int = if int.is_empty() { "0" } else { int };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let whole: BigInt = int.parse().ok()?;
        let frac_val: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().ok()?
        };
        let scale = BigInt::from(10u8).pow(u32::try_from(frac.len()).ok()?);
        let num = whole * &scale + frac_val;
        return Some(Rat::new(BigInt::from(sign) * num, scale));
    }
    let p: BigInt = tok.parse().ok()?;
    Some(Rat::from(p))
}

/// Canonical form: `P` for integers, `P/Q` otherwise.
#[must_use]
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Positional decimal with 12 significant digits.
#[must_use]
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.11}", if x == 0.0 { 0.0 } else { x });
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 40) as usize;
    format!("{x:.decimals$}")
}

/// A complex value as two 12-digit decimals.
#[must_use]
pub fn fmt_c(z: C64) -> String {
    format!("{} {}", fmt_sig(z.re), fmt_sig(z.im))
}

// ---------------------------------------------------------------------
// Low-level line handling
// ---------------------------------------------------------------------

struct Lines {
    path: PathBuf,
    /// `(line number, tokens)` for every non-blank body line.
    body: Vec<(usize, Vec<String>)>,
}

fn read_file(path: &Path, header: &str) -> Result<Lines, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (first_no, first) = lines
        .by_ref()
        .map(|(i, l)| (i + 1, l.trim()))
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| CliError::syntax(path, 1, format!("empty file, expected `{header}`")))?;
    if first != header {
        return Err(CliError::syntax(
            path,
            first_no,
            format!("expected header `{header}`, found `{first}`"),
        ));
    }
    let mut body = Vec::new();
    for (i, raw) in lines {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        body.push((i + 1, l.split_whitespace().map(str::to_string).collect()));
    }
    Ok(Lines {
        path: path.to_path_buf(),
        body,
    })
}

/// Resolve `reference` relative to the directory containing `base`.
fn resolve(base: &Path, reference: &str) -> PathBuf {
    let p = Path::new(reference);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or_else(|| Path::new(".")).join(p)
    }
}

/// How to mention `target` from a file written at `from`: just the file
/// name when both sit in the same directory, the full path otherwise.
#[must_use]
pub fn path_reference(from: &Path, target: &Path) -> String {
    if from.parent() == target.parent() {
        if let Some(name) = target.file_name() {
            return name.to_string_lossy().into_owned();
        }
    }
    target.display().to_string()
}

pub fn write_output(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------
// Groupoid files
// ---------------------------------------------------------------------

pub struct GroupoidFile {
    pub g: FiniteGroupoid,
    pub path: PathBuf,
}

/// Parse a groupoid file; checks well-formedness only (bounds, known
/// names).  Semantic validity is checked by the commands via
/// [`require_valid`].
pub fn parse_groupoid(path: &Path) -> Result<GroupoidFile, CliError> {
    let lines = read_file(path, "#groupoid v1")?;
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut units: BTreeSet<usize> = BTreeSet::new();
    let mut inv_pairs: Vec<(usize, usize, usize)> = Vec::new();
    let mut prod: BTreeMap<(usize, usize), usize> = BTreeMap::new();

    let look = |index: &BTreeMap<String, usize>, no: usize, name: &str| {
        index.get(name).copied().ok_or_else(|| {
            CliError::syntax(&lines.path, no, format!("unknown element `{name}`"))
        })
    };

    for (no, toks) in &lines.body {
        match (toks[0].as_str(), toks.len()) {
            ("element", 2) => {
                if index.contains_key(&toks[1]) {
                    return Err(CliError::syntax(
                        &lines.path,
                        *no,
                        format!("duplicate element `{}`", toks[1]),
                    ));
                }
                index.insert(toks[1].clone(), names.len());
                names.push(toks[1].clone());
            }
            ("unit", 2) => {
                units.insert(look(&index, *no, &toks[1])?);
            }
            ("inv", 3) => {
                inv_pairs.push((*no, look(&index, *no, &toks[1])?, look(&index, *no, &toks[2])?));
            }
            ("mul", 4) => {
                let x = look(&index, *no, &toks[1])?;
                let y = look(&index, *no, &toks[2])?;
                let z = look(&index, *no, &toks[3])?;
                if prod.insert((x, y), z).is_some() {
                    return Err(CliError::syntax(
                        &lines.path,
                        *no,
                        format!("duplicate product for ({}, {})", toks[1], toks[2]),
                    ));
                }
            }
            (kw, _) => {
                return Err(CliError::syntax(
                    &lines.path,
                    *no,
                    format!("unrecognized or malformed line starting with `{kw}`"),
                ));
            }
        }
    }

    let mut inv = vec![usize::MAX; names.len()];
    for (no, x, y) in inv_pairs {
        if inv[x] != usize::MAX {
            return Err(CliError::syntax(
                &lines.path,
                no,
                format!("duplicate involution entry for `{}`", names[x]),
            ));
        }
        inv[x] = y;
    }
    if let Some(x) = inv.iter().position(|&y| y == usize::MAX) {
        return Err(CliError::Invalid(format!(
            "involution: no `inv` line for element `{}`",
            names[x]
        )));
    }

    let g = FiniteGroupoid::from_tables(names, units, inv, prod).map_err(invalid)?;
    Ok(GroupoidFile {
        g,
        path: path.to_path_buf(),
    })
}

/// Reject a groupoid whose tables break any axiom or derived law,
/// reporting every violated law with a witness.
pub fn require_valid(g: &FiniteGroupoid) -> Result<(), CliError> {
    let mut report = g.validate();
    report.merge(g.check_consequences());
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Invalid(report.to_string()))
    }
}

#[must_use]
pub fn serialize_groupoid(g: &FiniteGroupoid) -> String {
    let mut out = String::from("#groupoid v1\n");
    for x in 0..g.n {
        out.push_str(&format!("element {}\n", g.name(x)));
    }
    for &u in &g.units {
        out.push_str(&format!("unit {}\n", g.name(u)));
    }
    for x in 0..g.n {
        out.push_str(&format!("inv {} {}\n", g.name(x), g.name(g.inv[x])));
    }
    for (&(x, y), &z) in &g.prod {
        out.push_str(&format!(
            "mul {} {} {}\n",
            g.name(x),
            g.name(y),
            g.name(z)
        ));
    }
    out
}

// ---------------------------------------------------------------------
// Haar files
// ---------------------------------------------------------------------

pub struct HaarFile {
    pub haar: Arc<HaarSystem>,
    pub path: PathBuf,
    pub groupoid_path: PathBuf,
}

pub fn parse_haar(path: &Path) -> Result<HaarFile, CliError> {
    let lines = read_file(path, "#haar v1")?;
    let mut groupoid_path: Option<PathBuf> = None;
    let mut raw: Vec<(usize, bool, String, Rat)> = Vec::new();
    for (no, toks) in &lines.body {
        match (toks[0].as_str(), toks.len()) {
            ("groupoid", 2) => groupoid_path = Some(resolve(&lines.path, &toks[1])),
            ("c" | "nu", 3) => {
                let r = parse_rat(&toks[2]).ok_or_else(|| {
                    CliError::syntax(&lines.path, *no, format!("bad rational `{}`", toks[2]))
                })?;
                raw.push((*no, toks[0] == "c", toks[1].clone(), r));
            }
            (kw, _) => {
                return Err(CliError::syntax(
                    &lines.path,
                    *no,
                    format!("unrecognized or malformed line starting with `{kw}`"),
                ));
            }
        }
    }
    let groupoid_path = groupoid_path
        .ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `groupoid PATH` line"))?;
    let gf = parse_groupoid(&groupoid_path)?;
    require_valid(&gf.g)?;
    let mut c: BTreeMap<usize, Rat> = BTreeMap::new();
    let mut nu: BTreeMap<usize, Rat> = BTreeMap::new();
    for (no, is_c, name, r) in raw {
        let u = gf.g.index_of(&name).ok_or_else(|| {
            CliError::syntax(&lines.path, no, format!("unknown element `{name}`"))
        })?;
        let map = if is_c { &mut c } else { &mut nu };
        if map.insert(u, r).is_some() {
            return Err(CliError::syntax(
                &lines.path,
                no,
                format!("duplicate weight for `{name}`"),
            ));
        }
    }
    let haar = HaarSystem::new(gf.g, c, nu).map_err(invalid)?;
    Ok(HaarFile {
        haar: Arc::new(haar),
        path: path.to_path_buf(),
        groupoid_path,
    })
}

// ---------------------------------------------------------------------
// Algebra-element files
// ---------------------------------------------------------------------

pub struct ElementFile {
    pub elt: AlgebraElement<Cq>,
    /// Path of the Haar file the element is declared over.
    pub over_path: PathBuf,
}

pub fn parse_element(path: &Path) -> Result<ElementFile, CliError> {
    let lines = read_file(path, "#elt v1")?;
    let mut over: Option<HaarFile> = None;
    let mut coefs: Vec<(usize, String, Rat, Rat)> = Vec::new();
    for (no, toks) in &lines.body {
        match (toks[0].as_str(), toks.len()) {
            ("over", 2) => over = Some(parse_haar(&resolve(&lines.path, &toks[1]))?),
            ("coef", 4) => {
                let re = parse_rat(&toks[2]).ok_or_else(|| {
                    CliError::syntax(&lines.path, *no, format!("bad number `{}`", toks[2]))
                })?;
                let im = parse_rat(&toks[3]).ok_or_else(|| {
                    CliError::syntax(&lines.path, *no, format!("bad number `{}`", toks[3]))
                })?;
                coefs.push((*no, toks[1].clone(), re, im));
            }
            (kw, _) => {
                return Err(CliError::syntax(
                    &lines.path,
                    *no,
                    format!("unrecognized or malformed line starting with `{kw}`"),
                ));
            }
        }
    }
    let over = over.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `over PATH` line"))?;
    let g = over.haar.groupoid().clone();
    let mut coef = vec![Cq::new(Rat::zero(), Rat::zero()); g.n];
    for (no, name, re, im) in coefs {
        let x = g.index_of(&name).ok_or_else(|| {
            CliError::syntax(&lines.path, no, format!("unknown element `{name}`"))
        })?;
        coef[x] = Cq::new(re, im);
    }
    let elt = AlgebraElement::from_coef(over.haar.clone(), coef).map_err(invalid)?;
    Ok(ElementFile {
        elt,
        over_path: over.path,
    })
}

#[must_use]
pub fn serialize_element_cq(elt: &AlgebraElement<Cq>, over_ref: &str) -> String {
    let g = elt.haar.groupoid();
    let mut out = format!("#elt v1\nover {over_ref}\n");
    for x in 0..g.n {
        let z = &elt.coef[x];
        if !z.re.is_zero() || !z.im.is_zero() {
            out.push_str(&format!(
                "coef {} {} {}\n",
                g.name(x),
                fmt_rat(&z.re),
                fmt_rat(&z.im)
            ));
        }
    }
    out
}

#[must_use]
pub fn serialize_element_c64(elt: &AlgebraElement<C64>, over_ref: &str) -> String {
    let g = elt.haar.groupoid();
    let mut out = format!("#elt v1\nover {over_ref}\n");
    for x in 0..g.n {
        let z = elt.coef[x];
        if z.re != 0.0 || z.im != 0.0 {
            out.push_str(&format!("coef {} {}\n", g.name(x), fmt_c(z)));
        }
    }
    out
}

/// Re-key `elt` to `haar` after checking that both Haar systems carry
/// the same groupoid and weights (elements from different files must
/// agree before they can be combined).
pub fn rekey_element(
    elt: &AlgebraElement<Cq>,
    haar: &Arc<HaarSystem>,
) -> Result<AlgebraElement<Cq>, CliError> {
    let same = elt.haar.groupoid() == haar.groupoid()
        && elt.haar.c_map() == haar.c_map()
        && elt.haar.nu_map() == haar.nu_map();
    if !same {
        return Err(CliError::Invalid(
            "operands live over different Haar systems".into(),
        ));
    }
    AlgebraElement::from_coef(haar.clone(), elt.coef.clone()).map_err(invalid)
}

// ---------------------------------------------------------------------
// Morphism files
// ---------------------------------------------------------------------

pub struct MorphismFile {
    pub h: GroupoidMorphism,
    pub dom_path: PathBuf,
    pub cod_path: PathBuf,
}

pub fn parse_morphism(path: &Path) -> Result<MorphismFile, CliError> {
    let lines = read_file(path, "#morphism v1")?;
    let mut dom: Option<GroupoidFile> = None;
    let mut cod: Option<GroupoidFile> = None;
    let mut raw_pairs: Vec<(usize, String, String)> = Vec::new();
    for (no, toks) in &lines.body {
        match (toks[0].as_str(), toks.len()) {
            ("dom", 2) => dom = Some(parse_groupoid(&resolve(&lines.path, &toks[1]))?),
            ("cod", 2) => cod = Some(parse_groupoid(&resolve(&lines.path, &toks[1]))?),
            ("pair", 3) => raw_pairs.push((*no, toks[1].clone(), toks[2].clone())),
            (kw, _) => {
                return Err(CliError::syntax(
                    &lines.path,
                    *no,
                    format!("unrecognized or malformed line starting with `{kw}`"),
                ));
            }
        }
    }
    let dom = dom.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `dom PATH` line"))?;
    let cod = cod.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `cod PATH` line"))?;
    require_valid(&dom.g)?;
    require_valid(&cod.g)?;
    let mut graph = BTreeSet::new();
    for (no, yname, xname) in raw_pairs {
        let y = cod.g.index_of(&yname).ok_or_else(|| {
            CliError::syntax(&lines.path, no, format!("unknown codomain element `{yname}`"))
        })?;
        let x = dom.g.index_of(&xname).ok_or_else(|| {
            CliError::syntax(&lines.path, no, format!("unknown domain element `{xname}`"))
        })?;
        graph.insert((y, x));
    }
    let rel = FiniteRelation::new(dom.g.n, cod.g.n, graph).map_err(invalid)?;
    let h = GroupoidMorphism::new(dom.g, cod.g, rel).map_err(invalid)?;
    Ok(MorphismFile {
        h,
        dom_path: dom.path,
        cod_path: cod.path,
    })
}

#[must_use]
pub fn serialize_morphism(h: &GroupoidMorphism, dom_ref: &str, cod_ref: &str) -> String {
    let mut out = format!("#morphism v1\ndom {dom_ref}\ncod {cod_ref}\n");
    for &(y, x) in h.graph.pairs() {
        out.push_str(&format!("pair {} {}\n", h.cod.name(y), h.dom.name(x)));
    }
    out
}

// ---------------------------------------------------------------------
// Mapping-pair (f, g) files
// ---------------------------------------------------------------------

pub struct FgFile {
    pub dom: GroupoidFile,
    pub cod: GroupoidFile,
    pub fg: FgData,
}

pub fn parse_fg(path: &Path) -> Result<FgFile, CliError> {
    let lines = read_file(path, "#fg v1")?;
    let mut dom: Option<GroupoidFile> = None;
    let mut cod: Option<GroupoidFile> = None;
    let mut raw: Vec<(usize, Vec<String>)> = Vec::new();
    for (no, toks) in &lines.body {
        match (toks[0].as_str(), toks.len()) {
            ("dom", 2) => dom = Some(parse_groupoid(&resolve(&lines.path, &toks[1]))?),
            ("cod", 2) => cod = Some(parse_groupoid(&resolve(&lines.path, &toks[1]))?),
            ("f", 3) | ("g", 4) => raw.push((*no, toks.clone())),
            (kw, _) => {
                return Err(CliError::syntax(
                    &lines.path,
                    *no,
                    format!("unrecognized or malformed line starting with `{kw}`"),
                ));
            }
        }
    }
    let dom = dom.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `dom PATH` line"))?;
    let cod = cod.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `cod PATH` line"))?;
    require_valid(&dom.g)?;
    require_valid(&cod.g)?;
    let mut f = BTreeMap::new();
    let mut gmap = BTreeMap::new();
    for (no, toks) in raw {
        let want = |gr: &FiniteGroupoid, name: &str| {
            gr.index_of(name).ok_or_else(|| {
                CliError::syntax(&lines.path, no, format!("unknown element `{name}`"))
            })
        };
        if toks[0] == "f" {
            f.insert(want(&cod.g, &toks[1])?, want(&dom.g, &toks[2])?);
        } else {
            gmap.insert(
                (want(&dom.g, &toks[1])?, want(&cod.g, &toks[2])?),
                want(&cod.g, &toks[3])?,
            );
        }
    }
    Ok(FgFile {
        dom,
        cod,
        fg: FgData { f, g: gmap },
    })
}

#[must_use]
pub fn serialize_fg(
    fg: &FgData,
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
    dom_ref: &str,
    cod_ref: &str,
) -> String {
    let mut out = format!("#fg v1\ndom {dom_ref}\ncod {cod_ref}\n");
    for (&a_cod, &a_dom) in &fg.f {
        out.push_str(&format!("f {} {}\n", cod.name(a_cod), dom.name(a_dom)));
    }
    for (&(x, b), &y) in &fg.g {
        out.push_str(&format!(
            "g {} {} {}\n",
            dom.name(x),
            cod.name(b),
            cod.name(y)
        ));
    }
    out
}

// ---------------------------------------------------------------------
// Cochain files
// ---------------------------------------------------------------------

pub struct CochainFile {
    pub cochain: Cochain,
    pub g: FiniteGroupoid,
    pub over_path: PathBuf,
}

/// Parse a cochain value token: `P/Q`, `-P/Q`, `sqrt(P/Q)`, or
/// `-sqrt(P/Q)`.
fn parse_cochain_value(tok: &str) -> Option<CochainValue> {
    let (sign, rest) = match tok.strip_prefix('-') {
        Some(rest) => (-1i8, rest),
        None => (1i8, tok),
    };
    let sq = if let Some(inner) = rest.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        parse_rat(inner)?
    } else {
        let r = parse_rat(rest)?;
        &r * &r
    };
    CochainValue::new(sign, sq).ok()
}

#[must_use]
fn fmt_cochain_value(v: &CochainValue) -> String {
    let sign = if v.sign < 0 { "-" } else { "" };
    // Print exactly-representable values as plain rationals.
    let num = v.sq.numer().abs();
    let den = v.sq.denom().abs();
    let (ns, ds) = (num.sqrt(), den.sqrt());
    if &ns * &ns == num && &ds * &ds == den {
        let root = Rat::new(ns, ds);
        format!("{sign}{}", fmt_rat(&root))
    } else {
        format!("{sign}sqrt({})", fmt_rat(&v.sq))
    }
}

pub fn parse_cochain(path: &Path) -> Result<CochainFile, CliError> {
    let lines = read_file(path, "#cochain v1")?;
    let mut over: Option<GroupoidFile> = None;
    let mut degree: Option<usize> = None;
    let mut raw: Vec<(usize, Vec<String>)> = Vec::new();
    for (no, toks) in &lines.body {
        match (toks[0].as_str(), toks.len()) {
            ("over", 2) => over = Some(parse_groupoid(&resolve(&lines.path, &toks[1]))?),
            ("deg", 2) => {
                degree = Some(toks[1].parse().map_err(|_| {
                    CliError::syntax(&lines.path, *no, format!("bad degree `{}`", toks[1]))
                })?);
            }
            ("val", _) => raw.push((*no, toks.clone())),
            (kw, _) => {
                return Err(CliError::syntax(
                    &lines.path,
                    *no,
                    format!("unrecognized or malformed line starting with `{kw}`"),
                ));
            }
        }
    }
    let over = over.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `over PATH` line"))?;
    let degree =
        degree.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `deg N` line"))?;
    require_valid(&over.g)?;
    let slots = degree.max(1);
    let mut values = BTreeMap::new();
    for (no, toks) in raw {
        if toks.len() != slots + 2 {
            return Err(CliError::syntax(
                &lines.path,
                no,
                format!("expected `val` with {slots} elements and one value"),
            ));
        }
        let mut key = Vec::with_capacity(slots);
        for name in &toks[1..=slots] {
            key.push(over.g.index_of(name).ok_or_else(|| {
                CliError::syntax(&lines.path, no, format!("unknown element `{name}`"))
            })?);
        }
        let v = parse_cochain_value(&toks[slots + 1]).ok_or_else(|| {
            CliError::syntax(
                &lines.path,
                no,
                format!("bad value `{}` (want P/Q or sqrt(P/Q), nonzero)", toks[slots + 1]),
            )
        })?;
        values.insert(key, v);
    }
    let cochain = Cochain::new(&over.g, degree, values).map_err(invalid)?;
    Ok(CochainFile {
        cochain,
        g: over.g,
        over_path: over.path,
    })
}

#[must_use]
pub fn serialize_cochain(cochain: &Cochain, g: &FiniteGroupoid, over_ref: &str) -> String {
    let mut out = format!("#cochain v1\nover {over_ref}\ndeg {}\n", cochain.degree);
    for (key, v) in &cochain.values {
        let names: Vec<&str> = key.iter().map(|&x| g.name(x)).collect();
        out.push_str(&format!(
            "val {} {}\n",
            names.join(" "),
            fmt_cochain_value(v)
        ));
    }
    out
}

// ---------------------------------------------------------------------
// Double-group files
// ---------------------------------------------------------------------

pub struct DoubleFile {
    pub dg: DoubleGroup,
}

pub fn parse_double(path: &Path) -> Result<DoubleFile, CliError> {
    let lines = read_file(path, "#double v1")?;
    let mut group: Option<GroupoidFile> = None;
    let mut suba: Option<(usize, Vec<String>)> = None;
    let mut subb: Option<(usize, Vec<String>)> = None;
    for (no, toks) in &lines.body {
        match (toks[0].as_str(), toks.len()) {
            ("group", 2) => group = Some(parse_groupoid(&resolve(&lines.path, &toks[1]))?),
            ("suba", n) if n >= 2 => suba = Some((*no, toks[1..].to_vec())),
            ("subb", n) if n >= 2 => subb = Some((*no, toks[1..].to_vec())),
            (kw, _) => {
                return Err(CliError::syntax(
                    &lines.path,
                    *no,
                    format!("unrecognized or malformed line starting with `{kw}`"),
                ));
            }
        }
    }
    let group =
        group.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `group PATH` line"))?;
    let (na, suba) =
        suba.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `suba ...` line"))?;
    let (nb, subb) =
        subb.ok_or_else(|| CliError::syntax(&lines.path, 1, "missing `subb ...` line"))?;
    require_valid(&group.g)?;
    let table = group_table_of(&group.g)?;
    let resolve_names = |no: usize, names: &[String]| -> Result<Vec<usize>, CliError> {
        names
            .iter()
            .map(|name| {
                group.g.index_of(name).ok_or_else(|| {
                    CliError::syntax(&lines.path, no, format!("unknown element `{name}`"))
                })
            })
            .collect()
    };
    let a = resolve_names(na, &suba)?;
    let b = resolve_names(nb, &subb)?;
    let dg = build_double(table, &a, &b).map_err(invalid)?;
    Ok(DoubleFile { dg })
}

/// Read off the group table of a one-unit groupoid.
pub fn group_table_of(g: &FiniteGroupoid) -> Result<GroupTable, CliError> {
    if g.units.len() != 1 {
        return Err(CliError::Invalid(format!(
            "a group must have exactly one unit, found {}",
            g.units.len()
        )));
    }
    let mut mul = vec![vec![0usize; g.n]; g.n];
    for x in 0..g.n {
        for y in 0..g.n {
            mul[x][y] = g.mul(x, y).ok_or_else(|| {
                CliError::Invalid(format!(
                    "group product must be total, missing {}·{}",
                    g.name(x),
                    g.name(y)
                ))
            })?;
        }
    }
    GroupTable::new(g.names.clone(), mul).map_err(invalid)
}

// ---------------------------------------------------------------------
// Matrix output
// ---------------------------------------------------------------------

/// Row-major text form of an operator on a weighted ℓ² space, with the
/// μ-weights header.
#[must_use]
pub fn serialize_operator(op: &LinearOperator) -> String {
    let g = &op.space.g;
    let mut out = format!("#matrix v1\ndim {}\n", g.n);
    for z in 0..g.n {
        out.push_str(&format!("mu {} {}\n", g.name(z), fmt_rat(&op.space.mu[z])));
    }
    for i in 0..g.n {
        for j in 0..g.n {
            out.push_str(&format!(
                "entry {} {} {}\n",
                g.name(i),
                g.name(j),
                fmt_c(op.matrix[(i, j)])
            ));
        }
    }
    out
}
