//! Command-line front end: every workbench operation behind a
//! deterministic text-file interface.
//!
//! Exit codes: 0 = success / all checks valid, 1 = a checked law failed
//! (the report names the law and a witness), 2 = usage or file-syntax
//! error.

mod files;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use gwb_core::alg::{hat_action, t_factor_sq, AlgebraElement, HaarSystem};
use gwb_core::gpd::{
    build_equivalence, build_group, build_pair, build_product, build_set, build_transformation,
    FiniteGroupoid, GroupTable,
};
use gwb_core::harm::{
    act_on_algebra, enumerate_bisections, is_cocycle, kms_check, modular,
    modular_matches_transport, one_parameter_group, weight_functional, Bisection,
};
use gwb_core::homog::{
    classify_subgroupoid, coassociativity_holds, comultiplication, enumerate_wide_subgroupoids,
    pentagon, quotient_morphism,
};
use gwb_core::mor::{compose_morphisms, factorize, from_fg, to_fg};
use gwb_core::rep::{pi_h, probe_norm, reduced_norm};
use gwb_core::scalar::rat_to_f64;

use files::{
    fmt_c, fmt_rat, fmt_sig, invalid, parse_cochain, parse_double, parse_element,
    parse_fg, parse_groupoid, parse_haar, parse_morphism, path_reference, rekey_element,
    require_valid, serialize_cochain, serialize_element_c64, serialize_element_cq, serialize_fg,
    serialize_groupoid, serialize_morphism, serialize_operator, write_output, CliError,
};

#[derive(Parser)]
#[command(
    name = "gwb",
    version,
    about = "Finite-groupoid convolution-algebra workbench"
)]
struct Cli {
    /// Numerical tolerance for approximate checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Size guard for exponential enumerations.
    #[arg(long, global = true, default_value_t = 12)]
    max_enum: usize,

    /// Write the primary output to this path (or path prefix for
    /// commands that produce several files).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Module,
}

#[derive(Subcommand)]
enum Module {
    /// Groupoids: validation, builders, derived maps.
    Gpd {
        #[command(subcommand)]
        cmd: GpdCmd,
    },
    /// Morphisms: validation, composition, factorization, mapping pairs.
    Mor {
        #[command(subcommand)]
        cmd: MorCmd,
    },
    /// The convolution *-algebra of a Haar system.
    Alg {
        #[command(subcommand)]
        cmd: AlgCmd,
    },
    /// Representations on weighted ℓ² spaces and operator norms.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// Bisections, cochains, the modular cocycle, and the KMS weight.
    Harm {
        #[command(subcommand)]
        cmd: HarmCmd,
    },
    /// Double groups, comultiplication, pentagon, subgroupoids, quotients.
    Homog {
        #[command(subcommand)]
        cmd: HomogCmd,
    },
}

#[derive(Subcommand)]
enum GpdCmd {
    /// Check every groupoid law and its derived consequences.
    Validate { file: PathBuf },
    /// Build a standard groupoid: pair N | set N | cyclic N | s3 |
    /// equivalence N CLASS... | transformation (cyclic N | s3) ROW... |
    /// product A.g B.g (classes and rows are comma-separated indices).
    Build {
        kind: String,
        args: Vec<String>,
    },
    /// Print the unit maps, fibers, orbits, and isotropy groups.
    Derive { file: PathBuf },
}

#[derive(Subcommand)]
enum MorCmd {
    /// Check the relation-graph laws of a morphism file.
    Validate { file: PathBuf },
    /// Compose two morphisms (the second applied after the first).
    Compose { first: PathBuf, second: PathBuf },
    /// Factor a morphism through its fibered-pair groupoid; writes
    /// `<out>.mid.g`, `<out>.k.m`, `<out>.l.m`.
    Factor { file: PathBuf },
    /// Export the mapping-pair (f, g) form of a morphism.
    Tofg { file: PathBuf },
    /// Rebuild a morphism from its mapping-pair (f, g) file.
    Fromfg { file: PathBuf },
}

#[derive(Subcommand)]
enum AlgCmd {
    /// Convolution of two elements over the same Haar system.
    Conv { first: PathBuf, second: PathBuf },
    /// The star (involution) of an element.
    Star { file: PathBuf },
    /// The unit element of a Haar system.
    Unit { haar: PathBuf },
    /// Left, right, max, and geometric norms of an element.
    Norm { file: PathBuf },
    /// Act by a domain element on a codomain element along a morphism.
    Hat {
        morphism: PathBuf,
        first: PathBuf,
        second: PathBuf,
    },
    /// The weight-transport factor t(x, y) along a morphism.
    Tfactor {
        morphism: PathBuf,
        haar_dom: PathBuf,
        haar_cod: PathBuf,
        x: String,
        y: String,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// The matrix of π_h(ω) on the codomain weighted ℓ² space.
    Pih {
        morphism: PathBuf,
        element: PathBuf,
        haar_cod: PathBuf,
    },
    /// The operator norm of π_h(ω).
    Norm {
        morphism: PathBuf,
        element: PathBuf,
        haar_cod: PathBuf,
    },
    /// The operator norm in the identity (regular) representation.
    Reduced {
        element: PathBuf,
        /// Re-read the element over this Haar system instead of the one
        /// named in its `over` line (the groupoid and weights must agree).
        #[arg(long)]
        haar: Option<PathBuf>,
    },
    /// The best norm over the canonical probe representations.
    Probe {
        element: PathBuf,
        /// Re-read the element over this Haar system instead of the one
        /// named in its `over` line (the groupoid and weights must agree).
        #[arg(long)]
        haar: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HarmCmd {
    /// Enumerate all bisections of a groupoid (guarded).
    Bisections { file: PathBuf },
    /// Act on an element by the bisection given as comma-separated names.
    Act { element: PathBuf, bisection: String },
    /// The coboundary of a cochain.
    Delta { file: PathBuf },
    /// The modular cocycle of a Haar system, with its exact checks.
    Modular { haar: PathBuf },
    /// The modular one-parameter group at a real time applied to an element.
    Sigma {
        haar: PathBuf,
        element: PathBuf,
        t: f64,
    },
    /// The canonical weight of an element.
    Weight { element: PathBuf },
    /// Check the KMS identities of the canonical weight on an element.
    Kms { haar: PathBuf, element: PathBuf },
}

#[derive(Subcommand)]
enum HomogCmd {
    /// Validate an exact factorization; writes `<out>.a.g` and
    /// `<out>.b.g` when --out is given.
    Double { file: PathBuf },
    /// The transposed-product comultiplication morphism; writes
    /// `<out>.dom.g`, `<out>.cod.g`, `<out>.m`.
    Comult { file: PathBuf },
    /// Verify that the pentagon operator is a bijection satisfying the
    /// pentagon equation, and that comultiplication is coassociative.
    Pentagon { file: PathBuf },
    /// Enumerate wide subgroupoids (guarded) with their classification.
    Subgpd { file: PathBuf },
    /// Quotient by the wide subgroupoid given as comma-separated names;
    /// writes `<out>.cod.g` and `<out>.m`.
    Quotient { file: PathBuf, subgroupoid: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}

/// Emit a serialized object: to `--out` when present, to stdout otherwise.
fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_output(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// How an output file (or stdout) should refer to an existing file.
fn ref_for(out: Option<&Path>, target: &Path) -> String {
    match out {
        Some(o) => path_reference(o, target),
        None => target.display().to_string(),
    }
}

fn need_out<'a>(out: Option<&'a Path>, what: &str) -> Result<&'a Path, CliError> {
    out.ok_or_else(|| CliError::Usage(format!("{what} requires --out PATH")))
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn parse_count(args: &[String], at: usize, what: &str) -> Result<usize, CliError> {
    args.get(at)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Usage(format!("expected a count for {what}")))
}

fn parse_index_rows(args: &[String]) -> Result<Vec<Vec<usize>>, CliError> {
    args.iter()
        .map(|row| {
            row.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("bad index list `{row}`")))
                })
                .collect()
        })
        .collect()
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match &cli.cmd {
        Module::Gpd { cmd } => run_gpd(cmd, out),
        Module::Mor { cmd } => run_mor(cmd, out),
        Module::Alg { cmd } => run_alg(cmd, out),
        Module::Rep { cmd } => run_rep(cmd, out, cli.max_enum),
        Module::Harm { cmd } => run_harm(cmd, out, cli.tol, cli.max_enum),
        Module::Homog { cmd } => run_homog(cmd, out, cli.max_enum),
    }
}

// ---------------------------------------------------------------------
// gpd
// ---------------------------------------------------------------------

fn run_gpd(cmd: &GpdCmd, out: Option<&Path>) -> Result<(), CliError> {
    match cmd {
        GpdCmd::Validate { file } => {
            let gf = parse_groupoid(file)?;
            let mut report = gf.g.validate();
            report.merge(gf.g.check_consequences());
            if report.is_valid() {
                println!("valid: {} elements, {} units", gf.g.n, gf.g.units.len());
                Ok(())
            } else {
                Err(CliError::Invalid(report.to_string()))
            }
        }
        GpdCmd::Build { kind, args } => {
            let g = build_groupoid(kind, args)?;
            require_valid(&g)?;
            emit(out, &serialize_groupoid(&g))
        }
        GpdCmd::Derive { file } => {
            let gf = parse_groupoid(file)?;
            require_valid(&gf.g)?;
            let g = &gf.g;
            let d = g.derive().map_err(invalid)?;
            for x in 0..g.n {
                println!("el {} {}", g.name(x), g.name(d.e_l[x]));
            }
            for x in 0..g.n {
                println!("er {} {}", g.name(x), g.name(d.e_r[x]));
            }
            for orbit in &d.orbits {
                let names: Vec<&str> = orbit.iter().map(|&u| g.name(u)).collect();
                println!("orbit {}", names.join(" "));
            }
            for (&u, iso) in &d.isotropy {
                let names: Vec<&str> = iso.iter().map(|&x| g.name(x)).collect();
                println!("isotropy {} {}", g.name(u), names.join(" "));
            }
            Ok(())
        }
    }
}

fn build_groupoid(kind: &str, args: &[String]) -> Result<FiniteGroupoid, CliError> {
    match kind {
        "pair" => Ok(build_pair(parse_count(args, 0, "pair")?)),
        "set" => Ok(build_set(parse_count(args, 0, "set")?)),
        "cyclic" => Ok(build_group(&GroupTable::cyclic(parse_count(
            args, 0, "cyclic",
        )?))),
        "s3" => Ok(build_group(&GroupTable::s3())),
        "equivalence" => {
            let points = parse_count(args, 0, "equivalence")?;
            let classes = parse_index_rows(&args[1..])?;
            build_equivalence(points, &classes).map_err(invalid)
        }
        "transformation" => {
            let (table, rest) = match args.first().map(String::as_str) {
                Some("cyclic") => (
                    GroupTable::cyclic(parse_count(args, 1, "cyclic")?),
                    &args[2..],
                ),
                Some("s3") => (GroupTable::s3(), &args[1..]),
                _ => {
                    return Err(CliError::Usage(
                        "transformation expects `cyclic N` or `s3` then one row per group element"
                            .into(),
                    ))
                }
            };
            let rows = parse_index_rows(rest)?;
            build_transformation(&table, &rows).map_err(invalid)
        }
        "product" => {
            if args.len() != 2 {
                return Err(CliError::Usage(
                    "product expects two groupoid files".into(),
                ));
            }
            let a = parse_groupoid(Path::new(&args[0]))?;
            let b = parse_groupoid(Path::new(&args[1]))?;
            require_valid(&a.g)?;
            require_valid(&b.g)?;
            Ok(build_product(&a.g, &b.g))
        }
        other => Err(CliError::Usage(format!(
            "unknown builder `{other}` (want pair, set, cyclic, s3, equivalence, transformation, product)"
        ))),
    }
}

// ---------------------------------------------------------------------
// mor
// ---------------------------------------------------------------------

fn run_mor(cmd: &MorCmd, out: Option<&Path>) -> Result<(), CliError> {
    match cmd {
        MorCmd::Validate { file } => {
            let mf = parse_morphism(file)?;
            mf.h.derive_maps().map_err(invalid)?;
            println!("valid morphism: {} pairs", mf.h.graph.pairs().len());
            Ok(())
        }
        MorCmd::Compose { first, second } => {
            let a = parse_morphism(first)?;
            let b = parse_morphism(second)?;
            let composed = compose_morphisms(&b.h, &a.h).map_err(invalid)?;
            let content = serialize_morphism(
                &composed,
                &ref_for(out, &a.dom_path),
                &ref_for(out, &b.cod_path),
            );
            emit(out, &content)
        }
        MorCmd::Factor { file } => {
            let base = need_out(out, "mor factor")?;
            let mf = parse_morphism(file)?;
            let f = factorize(&mf.h).map_err(invalid)?;
            let mid_path = with_suffix(base, ".mid.g");
            let k_path = with_suffix(base, ".k.m");
            let l_path = with_suffix(base, ".l.m");
            write_output(&mid_path, &serialize_groupoid(&f.mid))?;
            write_output(
                &k_path,
                &serialize_morphism(
                    &f.k,
                    &path_reference(&k_path, &mf.dom_path),
                    &path_reference(&k_path, &mid_path),
                ),
            )?;
            write_output(
                &l_path,
                &serialize_morphism(
                    &f.l,
                    &path_reference(&l_path, &mid_path),
                    &path_reference(&l_path, &mf.cod_path),
                ),
            )?;
            println!("factored through {} elements", f.mid.n);
            Ok(())
        }
        MorCmd::Tofg { file } => {
            let mf = parse_morphism(file)?;
            let fg = to_fg(&mf.h).map_err(invalid)?;
            let content = serialize_fg(
                &fg,
                &mf.h.dom,
                &mf.h.cod,
                &ref_for(out, &mf.dom_path),
                &ref_for(out, &mf.cod_path),
            );
            emit(out, &content)
        }
        MorCmd::Fromfg { file } => {
            let ff = parse_fg(file)?;
            let h = from_fg(&ff.dom.g, &ff.cod.g, &ff.fg).map_err(invalid)?;
            let content = serialize_morphism(
                &h,
                &ref_for(out, &ff.dom.path),
                &ref_for(out, &ff.cod.path),
            );
            emit(out, &content)
        }
    }
}

// ---------------------------------------------------------------------
// alg
// ---------------------------------------------------------------------

fn run_alg(cmd: &AlgCmd, out: Option<&Path>) -> Result<(), CliError> {
    match cmd {
        AlgCmd::Conv { first, second } => {
            let a = parse_element(first)?;
            let b = rekey_element(&parse_element(second)?.elt, &a.elt.haar)?;
            let c = a.elt.convolve(&b).map_err(invalid)?;
            emit(
                out,
                &serialize_element_cq(&c, &ref_for(out, &a.over_path)),
            )
        }
        AlgCmd::Star { file } => {
            let a = parse_element(file)?;
            emit(
                out,
                &serialize_element_cq(&a.elt.star(), &ref_for(out, &a.over_path)),
            )
        }
        AlgCmd::Unit { haar } => {
            let hf = parse_haar(haar)?;
            let u = AlgebraElement::unit(hf.haar.clone());
            emit(out, &serialize_element_cq(&u, &ref_for(out, &hf.path)))
        }
        AlgCmd::Norm { file } => {
            let a = parse_element(file)?;
            let e = a.elt.to_c64();
            let (l, r, m) = e.norms();
            println!("norm_l {}", fmt_sig(l));
            println!("norm_r {}", fmt_sig(r));
            println!("norm {}", fmt_sig(m));
            println!("norm_geom {}", fmt_sig(e.geometric_norm()));
            Ok(())
        }
        AlgCmd::Hat {
            morphism,
            first,
            second,
        } => {
            let mf = parse_morphism(morphism)?;
            let a = parse_element(first)?;
            let b = parse_element(second)?;
            let acted =
                hat_action(&mf.h, &a.elt.to_c64(), &b.elt.to_c64()).map_err(invalid)?;
            emit(
                out,
                &serialize_element_c64(&acted, &ref_for(out, &b.over_path)),
            )
        }
        AlgCmd::Tfactor {
            morphism,
            haar_dom,
            haar_cod,
            x,
            y,
        } => {
            let mf = parse_morphism(morphism)?;
            let hd = parse_haar(haar_dom)?;
            let hc = parse_haar(haar_cod)?;
            if hd.haar.groupoid() != &mf.h.dom || hc.haar.groupoid() != &mf.h.cod {
                return Err(CliError::Invalid(
                    "Haar systems must live over the morphism domain and codomain".into(),
                ));
            }
            let xi = mf.h.dom.index_of(x).ok_or_else(|| {
                CliError::Usage(format!("unknown domain element `{x}`"))
            })?;
            let yi = mf.h.cod.index_of(y).ok_or_else(|| {
                CliError::Usage(format!("unknown codomain element `{y}`"))
            })?;
            let (t_sq, z) =
                t_factor_sq(&mf.h, &hd.haar, &hc.haar, xi, yi).map_err(invalid)?;
            println!("t_sq {}", fmt_rat(&t_sq));
            println!("t {}", fmt_sig(rat_to_f64(&t_sq).sqrt()));
            println!("image {}", mf.h.cod.name(z));
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------
// rep
// ---------------------------------------------------------------------

/// Read an element, optionally re-keyed onto an explicitly given Haar
/// file (which must agree with the one the element is declared over).
fn load_element(
    element: &Path,
    haar: Option<&Path>,
) -> Result<AlgebraElement<gwb_core::scalar::Cq>, CliError> {
    let ef = parse_element(element)?;
    match haar {
        Some(path) => {
            let hf = parse_haar(path)?;
            rekey_element(&ef.elt, &hf.haar)
        }
        None => Ok(ef.elt),
    }
}

fn load_rep_operands(
    morphism: &Path,
    element: &Path,
    haar_cod: &Path,
) -> Result<(files::MorphismFile, AlgebraElement<gwb_core::scalar::C64>, Arc<HaarSystem>), CliError>
{
    let mf = parse_morphism(morphism)?;
    let ef = parse_element(element)?;
    let hc = parse_haar(haar_cod)?;
    Ok((mf, ef.elt.to_c64(), hc.haar))
}

fn run_rep(cmd: &RepCmd, out: Option<&Path>, max_enum: usize) -> Result<(), CliError> {
    match cmd {
        RepCmd::Pih {
            morphism,
            element,
            haar_cod,
        } => {
            let (mf, omega, hc) = load_rep_operands(morphism, element, haar_cod)?;
            let op = pi_h(&mf.h, &omega, &hc).map_err(invalid)?;
            emit(out, &serialize_operator(&op))?;
            println!("opnorm {}", fmt_sig(op.operator_norm()));
            Ok(())
        }
        RepCmd::Norm {
            morphism,
            element,
            haar_cod,
        } => {
            let (mf, omega, hc) = load_rep_operands(morphism, element, haar_cod)?;
            let op = pi_h(&mf.h, &omega, &hc).map_err(invalid)?;
            println!("{}", fmt_sig(op.operator_norm()));
            Ok(())
        }
        RepCmd::Reduced { element, haar } => {
            let elt = load_element(element, haar.as_deref())?;
            let n = reduced_norm(&elt.to_c64()).map_err(invalid)?;
            println!("{}", fmt_sig(n));
            Ok(())
        }
        RepCmd::Probe { element, haar } => {
            let elt = load_element(element, haar.as_deref())?;
            let n = probe_norm(&elt.to_c64(), &[], max_enum).map_err(invalid)?;
            println!("{}", fmt_sig(n));
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------
// harm
// ---------------------------------------------------------------------

fn bisection_from_names(g: &FiniteGroupoid, spec: &str) -> Result<Bisection, CliError> {
    let mut set = BTreeSet::new();
    for name in spec.split(',') {
        let x = g
            .index_of(name.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown element `{name}`")))?;
        set.insert(x);
    }
    Bisection::new(g, set).map_err(invalid)
}

fn run_harm(cmd: &HarmCmd, out: Option<&Path>, tol: f64, max_enum: usize) -> Result<(), CliError> {
    match cmd {
        HarmCmd::Bisections { file } => {
            let gf = parse_groupoid(file)?;
            require_valid(&gf.g)?;
            let all = enumerate_bisections(&gf.g, max_enum).map_err(invalid)?;
            println!("count {}", all.len());
            for b in &all {
                let names: Vec<&str> = b.elements.iter().map(|&x| gf.g.name(x)).collect();
                println!("bisection {}", names.join(","));
            }
            Ok(())
        }
        HarmCmd::Act { element, bisection } => {
            let ef = parse_element(element)?;
            let g = ef.elt.haar.groupoid().clone();
            let b = bisection_from_names(&g, bisection)?;
            let acted = act_on_algebra(&b, &ef.elt.to_c64()).map_err(invalid)?;
            emit(
                out,
                &serialize_element_c64(&acted, &ref_for(out, &ef.over_path)),
            )
        }
        HarmCmd::Delta { file } => {
            let cf = parse_cochain(file)?;
            let d = cf.cochain.delta(&cf.g).map_err(invalid)?;
            emit(
                out,
                &serialize_cochain(&d, &cf.g, &ref_for(out, &cf.over_path)),
            )
        }
        HarmCmd::Modular { haar } => {
            let hf = parse_haar(haar)?;
            let delta = modular(&hf.haar).map_err(invalid)?;
            let g = hf.haar.groupoid();
            if !is_cocycle(g, &delta).map_err(invalid)? {
                return Err(CliError::Invalid(
                    "the modular cochain is not a cocycle".into(),
                ));
            }
            if !modular_matches_transport(&hf.haar).map_err(invalid)? {
                return Err(CliError::Invalid(
                    "the modular cochain disagrees with the unit-pair weight transport".into(),
                ));
            }
            emit(
                out,
                &serialize_cochain(&delta, g, &ref_for(out, &hf.groupoid_path)),
            )
        }
        HarmCmd::Sigma { haar, element, t } => {
            let hf = parse_haar(haar)?;
            let ef = parse_element(element)?;
            let elt = rekey_element(&ef.elt, &hf.haar)?.to_c64();
            let delta = modular(&hf.haar).map_err(invalid)?;
            let moved = one_parameter_group(&delta, *t, &elt).map_err(invalid)?;
            emit(
                out,
                &serialize_element_c64(&moved, &ref_for(out, &ef.over_path)),
            )
        }
        HarmCmd::Weight { element } => {
            let ef = parse_element(element)?;
            println!("{}", fmt_c(weight_functional(&ef.elt.to_c64())));
            Ok(())
        }
        HarmCmd::Kms { haar, element } => {
            let hf = parse_haar(haar)?;
            let ef = parse_element(element)?;
            let elt = rekey_element(&ef.elt, &hf.haar)?.to_c64();
            let report = kms_check(&hf.haar, &elt, tol).map_err(invalid)?;
            if report.is_valid() {
                println!("kms verified");
                Ok(())
            } else {
                Err(CliError::Invalid(report.to_string()))
            }
        }
    }
}

// ---------------------------------------------------------------------
// homog
// ---------------------------------------------------------------------

fn run_homog(cmd: &HomogCmd, out: Option<&Path>, max_enum: usize) -> Result<(), CliError> {
    match cmd {
        HomogCmd::Double { file } => {
            let df = parse_double(file)?;
            println!(
                "double group: {} elements, |A| = {}, |B| = {}",
                df.dg.group.n,
                df.dg.a.len(),
                df.dg.b.len()
            );
            if let Some(base) = out {
                write_output(
                    &with_suffix(base, ".a.g"),
                    &serialize_groupoid(&df.dg.groupoid_a()),
                )?;
                write_output(
                    &with_suffix(base, ".b.g"),
                    &serialize_groupoid(&df.dg.groupoid_b()),
                )?;
            }
            Ok(())
        }
        HomogCmd::Comult { file } => {
            let base = need_out(out, "homog comult")?;
            let df = parse_double(file)?;
            let h = comultiplication(&df.dg).map_err(invalid)?;
            let dom_path = with_suffix(base, ".dom.g");
            let cod_path = with_suffix(base, ".cod.g");
            let m_path = with_suffix(base, ".m");
            write_output(&dom_path, &serialize_groupoid(&h.dom))?;
            write_output(&cod_path, &serialize_groupoid(&h.cod))?;
            write_output(
                &m_path,
                &serialize_morphism(
                    &h,
                    &path_reference(&m_path, &dom_path),
                    &path_reference(&m_path, &cod_path),
                ),
            )?;
            println!("comultiplication: {} pairs", h.graph.pairs().len());
            Ok(())
        }
        HomogCmd::Pentagon { file } => {
            let df = parse_double(file)?;
            let report = pentagon(&df.dg).map_err(invalid)?;
            if !report.holds() {
                return Err(CliError::Invalid(format!(
                    "pentagon fails: {}/{} triples, witness {:?}",
                    report.triples_passed, report.triples_total, report.witness
                )));
            }
            println!(
                "pentagon verified: {}/{} triples",
                report.triples_passed, report.triples_total
            );
            if coassociativity_holds(&df.dg).map_err(invalid)? {
                println!("coassociativity verified");
                Ok(())
            } else {
                Err(CliError::Invalid(
                    "comultiplication is not coassociative".into(),
                ))
            }
        }
        HomogCmd::Subgpd { file } => {
            let gf = parse_groupoid(file)?;
            require_valid(&gf.g)?;
            let subs = enumerate_wide_subgroupoids(&gf.g, max_enum).map_err(invalid)?;
            println!("count {}", subs.len());
            for sub in &subs {
                let names: Vec<&str> = sub.subset.iter().map(|&x| gf.g.name(x)).collect();
                println!(
                    "subgroupoid {} wide={} vertical={}",
                    names.join(","),
                    sub.wide,
                    sub.vertical
                );
            }
            Ok(())
        }
        HomogCmd::Quotient { file, subgroupoid } => {
            let base = need_out(out, "homog quotient")?;
            let gf = parse_groupoid(file)?;
            require_valid(&gf.g)?;
            let mut subset = BTreeSet::new();
            for name in subgroupoid.split(',') {
                subset.insert(gf.g.index_of(name.trim()).ok_or_else(|| {
                    CliError::Usage(format!("unknown element `{name}`"))
                })?);
            }
            let sub = classify_subgroupoid(&gf.g, &subset).map_err(invalid)?;
            let q = quotient_morphism(&gf.g, &sub).map_err(invalid)?;
            let cod_path = with_suffix(base, ".cod.g");
            let m_path = with_suffix(base, ".m");
            write_output(&cod_path, &serialize_groupoid(&q.morphism.cod))?;
            write_output(
                &m_path,
                &serialize_morphism(
                    &q.morphism,
                    &path_reference(&m_path, &gf.path),
                    &path_reference(&m_path, &cod_path),
                ),
            )?;
            for (k, class) in q.classes.iter().enumerate() {
                let names: Vec<&str> = class.iter().map(|&x| gf.g.name(x)).collect();
                println!("class {k} {}", names.join(","));
            }
            Ok(())
        }
    }
}
