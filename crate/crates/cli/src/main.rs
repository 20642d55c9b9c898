mod render;

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use latticelp::density::{
    default_schedule, diagonal_join, dsystem_check, dyadic_chain, generate_algebra, parse_set,
    DensityError, DensitySet,
};
use latticelp::framework::{
    check_mi_axioms, check_supports, counting_class_assumptions, lemma_premises_check, AxiomLine,
    Counting, CountingVariant, FilterInstance, FrameworkError, GroupModel, PowerSet, Subject,
};
use latticelp::lattice::{catalog, Lattice, LatticeError, LatticeFile};
use latticelp::lp::{
    build_projections, catalog_submeasure, check_contractivity, check_pythagoras, check_submeasure,
    derive_phistar, kernel_basis, verify_examples, Exponent, NormContext, NormError, Semantics,
    Submeasure,
};
use latticelp::morphisms::{
    check_embedding_isometry, find_algebrifications, uniqueness_probe, Embedding, EmbeddingFile,
    MorphismError,
};
use latticelp::quotient::{QuotientError, QuotientSpace};
use latticelp::rational::{format_rational, Rational};
use latticelp::sample::RANDOM_VECTORS;

/// Horizons reported for density sets.
const HORIZONS: [u64; 3] = [1_000, 10_000, 100_000];

/// Horizon used by `framework lemma`.
const LEMMA_HORIZON: u64 = 1_000_000;

/// Depth of the `dyadic` chain when none is given.
const DEFAULT_DYADIC_DEPTH: usize = 8;

#[derive(Parser)]
#[command(
    name = "latticelp",
    version,
    about = "L^p spaces over finite submeasured lattices and natural density"
)]
struct Cli {
    /// Emit JSON instead of the plain-text rendering.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice validation and the built-in catalog.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The L^p semi-norm and the structures built from it.
    #[command(subcommand)]
    Lp(LpCmd),
    /// Measure-preserving embeddings of Boolean algebras.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Search for measure algebras inducing the same L^p space.
    Algebrify {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long = "max-atoms")]
        max_atoms: usize,
    },
    /// Natural density of ultimately periodic sets.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Group-valued families along a filter.
    #[command(subcommand)]
    Framework(FrameworkCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Validate a lattice file and report its laws
    Check { file: PathBuf },
    /// Print a built-in lattice with its submeasure
    Catalog { name: String },
}

#[derive(Subcommand)]
enum LpCmd {
    /// Basis of X and its cone generators
    Basis { file: PathBuf },
    /// Norm of a vector given as coefficient*element terms
    Norm {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long, default_value = "disjoint")]
        semantics: Semantics,
    },
    /// Null vectors of the norm
    Kernel {
        file: PathBuf,
        #[arg(long)]
        p: String,
    },
    /// The induced submeasure on the lattice
    Phistar { file: PathBuf },
    /// Projections onto M and M⊥ for a vector
    Project {
        file: PathBuf,
        #[arg(long)]
        m: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        p: String,
    },
    /// Check the built-in worked examples
    VerifyExamples,
    /// Sampled Pythagoras identity for orthogonal parts
    Pythagoras {
        file: PathBuf,
        #[arg(long)]
        m: String,
        #[arg(long)]
        p: String,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Check an embedding file for isometry
    Check {
        file: PathBuf,
        #[arg(long)]
        p: String,
    },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Density and counts of a set expression
    Of { expr: String },
    /// Boolean algebra generated by set expressions
    Algebra {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Diagonal join of an increasing chain
    ChainJoin {
        chain: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        horizon: u64,
    },
}

#[derive(Subcommand)]
enum FrameworkCmd {
    /// Counting family axioms and group axioms
    Axioms {
        #[arg(long = "i-max")]
        i_max: u64,
    },
    /// Lemma premises and the join of a chain
    Lemma { chain: String },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Json(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error("{0}")]
    Input(String),
}

/// Variants that only wrap another module's error.
const WRAPPERS: [&str; 6] = [
    "Lattice",
    "Quotient",
    "Norm",
    "Morphism",
    "Density",
    "Framework",
];

/// Name of the innermost error variant, read off the `Debug` form.
fn variant<E: Debug>(e: &E) -> String {
    let text = format!("{e:?}");
    let mut rest = text.as_str();
    loop {
        let end = rest
            .find(|c: char| !c.is_alphanumeric() && c != '_')
            .unwrap_or(rest.len());
        let (name, tail) = rest.split_at(end);
        match tail.strip_prefix('(') {
            Some(inner) if WRAPPERS.contains(&name) => rest = inner,
            _ => return name.to_string(),
        }
    }
}

impl CliError {
    fn kind(&self) -> String {
        match self {
            CliError::Io { .. } => "Io".into(),
            CliError::Json(_) => "InvalidJson".into(),
            CliError::Input(_) => "InvalidInput".into(),
            CliError::Lattice(e) => variant(e),
            CliError::Quotient(e) => variant(e),
            CliError::Norm(e) => variant(e),
            CliError::Morphism(e) => variant(e),
            CliError::Density(e) => variant(e),
            CliError::Framework(e) => variant(e),
        }
    }
}

/// A finished command: its report and whether every check passed.
struct Outcome {
    report: Value,
    ok: bool,
}

impl Outcome {
    fn done(report: Value) -> Self {
        Outcome { report, ok: true }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))
}

fn load_lattice(path: &Path) -> Result<(LatticeFile, Lattice), CliError> {
    let file: LatticeFile = read_json(path)?;
    let lattice = Lattice::from_file(&file)?;
    Ok((file, lattice))
}

fn load_phi(path: &Path) -> Result<(Lattice, Submeasure), CliError> {
    let (file, lattice) = load_lattice(path)?;
    let values: BTreeMap<String, Rational> = file
        .phi
        .ok_or_else(|| CliError::Input(format!("{}: lattice file has no \"phi\"", path.display())))?
        .into_iter()
        .map(|(k, v)| (k, v.0))
        .collect();
    let phi = check_submeasure(&lattice, &values)?;
    Ok((lattice, phi))
}

fn context(path: &Path, p: &str, semantics: Semantics) -> Result<NormContext, CliError> {
    let (lattice, phi) = load_phi(path)?;
    let space = QuotientSpace::build(&lattice);
    Ok(NormContext::new(
        &space,
        &phi,
        Exponent::parse(p)?,
        semantics,
    )?)
}

fn coords(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn submeasure_json(phi: &Submeasure) -> Value {
    json!({"values": phi.to_map(), "flags": phi.flags()})
}

fn lattice_report(lattice: &Lattice) -> Value {
    let mut report = to_value(&lattice.analyze());
    if let Some(Value::Array(rows)) = report.get_mut("counterexamples") {
        for row in rows {
            if let Some(Value::Array(elems)) = row.get_mut("elements") {
                for e in elems.iter_mut() {
                    let i = e.as_u64().expect("element index") as usize;
                    *e = json!(lattice.name(i));
                }
            }
        }
    }
    report
}

fn lattice_cmd(cmd: LatticeCmd) -> Result<Outcome, CliError> {
    match cmd {
        LatticeCmd::Check { file } => {
            let (raw, lattice) = load_lattice(&file)?;
            let mut report = json!({"elements": lattice.len(), "report": lattice_report(&lattice)});
            if let Some(values) = raw.phi {
                let values = values.into_iter().map(|(k, v)| (k, v.0)).collect();
                report["phi"] = submeasure_json(&check_submeasure(&lattice, &values)?);
            }
            Ok(Outcome::done(report))
        }
        LatticeCmd::Catalog { name } => {
            let lattice = catalog(&name)?;
            let mut file = lattice.to_file();
            let phi = catalog_submeasure(&name)?.1;
            file.phi = Some(
                phi.to_map()
                    .into_iter()
                    .map(|(k, v)| {
                        (
                            k,
                            latticelp::rational::parse_rational(&v)
                                .expect("canonical")
                                .into(),
                        )
                    })
                    .collect(),
            );
            Ok(Outcome::done(
                json!({"name": name, "lattice": file, "report": lattice_report(&lattice)}),
            ))
        }
    }
}

fn lp_cmd(cmd: LpCmd, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        LpCmd::Basis { file } => {
            let (_, lattice) = load_lattice(&file)?;
            let space = QuotientSpace::build(&lattice);
            let images: BTreeMap<String, Vec<String>> = lattice
                .elements()
                .map(|e| (lattice.name(e).to_string(), coords(space.image(e))))
                .collect();
            let basis: Vec<&str> = space
                .basis_elements()
                .iter()
                .map(|&e| lattice.name(e))
                .collect();
            Ok(Outcome::done(json!({
                "ambient_dim": space.ambient_dim(),
                "x_dim": space.x_dim(),
                "basis": basis,
                "images": images,
                "cone_generators": space.cone_generators().len(),
            })))
        }
        LpCmd::Norm {
            file,
            p,
            vector,
            semantics,
        } => {
            let ctx = context(&file, &p, semantics)?;
            let x = ctx.space().parse_vector(&vector)?;
            let result = ctx.norm(&x)?;
            let mut report = result.to_json(ctx.lattice());
            report["p"] = json!(ctx.p().to_string());
            report["vector"] = json!(ctx.space().format_terms(&x.terms));
            Ok(Outcome::done(report))
        }
        LpCmd::Kernel { file, p } => {
            let ctx = context(&file, &p, Semantics::Disjoint)?;
            let basis: Vec<Vec<String>> = kernel_basis(&ctx)
                .iter()
                .map(|v| coords(&v.coords))
                .collect();
            Ok(Outcome::done(
                json!({"p": ctx.p().to_string(), "dimension": basis.len(), "basis": basis}),
            ))
        }
        LpCmd::Phistar { file } => {
            let ctx = context(&file, "1", Semantics::Disjoint)?;
            let star = derive_phistar(&ctx)?;
            Ok(Outcome::done(
                json!({"phi": submeasure_json(ctx.phi()), "phistar": submeasure_json(&star)}),
            ))
        }
        LpCmd::Project { file, m, vector, p } => {
            let ctx = context(&file, &p, Semantics::Disjoint)?;
            let l = ctx.lattice();
            let m = l.elem(&m)?;
            let pair = build_projections(ctx.space(), m)?;
            let x = ctx.space().parse_vector(&vector)?;
            let px = pair.apply_p(&x.coords);
            let qx = pair.apply_q(&x.coords);
            let norm = |v: &[Rational]| ctx.norm_coords(v).map(|r| r.to_json(l)["value"].clone());
            let basis: Vec<&str> = pair.basis.iter().map(|&e| l.name(e)).collect();
            Ok(Outcome::done(json!({
                "m": l.name(m),
                "p": ctx.p().to_string(),
                "basis": basis,
                "x": coords(&x.coords),
                "px": coords(&px),
                "qx": coords(&qx),
                "norm_x": norm(&x.coords)?,
                "norm_px": norm(&px)?,
                "norm_qx": norm(&qx)?,
            })))
        }
        LpCmd::VerifyExamples => {
            let checks = verify_examples(seed)?;
            let ok = checks.iter().all(|c| c.passed());
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({"example": c.name, "passed": c.passed(), "checks": c.checks, "failures": c.failures}))
                .collect();
            Ok(Outcome {
                report: json!({"examples": rows, "all_passed": ok}),
                ok,
            })
        }
        LpCmd::Pythagoras { file, m, p } => {
            let ctx = context(&file, &p, Semantics::Disjoint)?;
            let m = ctx.lattice().elem(&m)?;
            let pyth = check_pythagoras(&ctx, m, seed)?;
            let contr = check_contractivity(&ctx, m, seed)?;
            let ok = contr.passed() && (!pyth.hypothesis_holds || pyth.passed());
            Ok(Outcome {
                report: json!({"pythagoras": pyth, "contractivity": contr}),
                ok,
            })
        }
    }
}

fn embed_cmd(cmd: EmbedCmd, seed: u64) -> Result<Outcome, CliError> {
    let EmbedCmd::Check { file, p } = cmd;
    let raw: EmbeddingFile = read_json(&file)?;
    let embedding = Embedding::from_file(&raw)?;
    let report = check_embedding_isometry(&embedding, Exponent::parse(&p)?, RANDOM_VECTORS, seed)?;
    let ok = report.passed();
    Ok(Outcome {
        report: to_value(&report),
        ok,
    })
}

fn algebrify_cmd(file: &Path, p: &str, max_atoms: usize, seed: u64) -> Result<Outcome, CliError> {
    let ctx = context(file, p, Semantics::Disjoint)?;
    let found = find_algebrifications(&ctx, max_atoms, seed)?;
    let probe = uniqueness_probe(&found, ctx.p());
    let results: Vec<Value> = found.iter().map(|a| a.to_json(ctx.lattice())).collect();
    let ok = probe.passed();
    Ok(Outcome {
        report: json!({"p": ctx.p().to_string(), "algebrifications": results, "uniqueness": probe}),
        ok,
    })
}

fn density_json(set: &DensitySet) -> Result<Value, CliError> {
    let atoms = generate_algebra(std::slice::from_ref(set))?.to_json(&HORIZONS)["atoms"].take();
    let counts: Vec<Value> = HORIZONS.iter().map(|&h| json!([h, set.count(h)])).collect();
    let bounds: Vec<Value> = HORIZONS
        .iter()
        .map(|&h| json!([h, set.count_error_bound(h)]))
        .collect();
    Ok(json!({
        "set": set.label(),
        "density": format_rational(&set.density()),
        "horizon_counts": counts,
        "count_error_bounds": bounds,
        "atoms": atoms,
    }))
}

/// `dyadic`, `dyadic:N` or `EXPR; EXPR; …`.
fn parse_chain(text: &str, depth: Option<usize>) -> Result<Vec<Subject>, CliError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("dyadic") {
        let n = match rest.strip_prefix(':') {
            Some(n) => n
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad dyadic depth {n:?}")))?,
            None if rest.is_empty() => depth.unwrap_or(DEFAULT_DYADIC_DEPTH),
            None => return Err(CliError::Input(format!("unknown chain {text:?}"))),
        };
        return Ok(dyadic_chain(depth.unwrap_or(n))?
            .into_iter()
            .map(Subject::from)
            .collect());
    }
    let mut out = Vec::new();
    for piece in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        out.push(if piece == "BLOCKS" {
            Subject::doubling_blocks()
        } else {
            Subject::from(parse_set(piece)?)
        });
    }
    if out.is_empty() {
        return Err(CliError::Input("empty chain".into()));
    }
    if let Some(d) = depth {
        let last = out.last().cloned().expect("nonempty");
        out.resize(d.max(1), last);
        out.truncate(d.max(1));
    }
    Ok(out)
}

fn density_cmd(cmd: DensityCmd) -> Result<Outcome, CliError> {
    match cmd {
        DensityCmd::Of { expr } => Ok(Outcome::done(density_json(&parse_set(&expr)?)?)),
        DensityCmd::Algebra { exprs } => {
            let family = exprs
                .iter()
                .map(|e| parse_set(e))
                .collect::<Result<Vec<_>, _>>()?;
            let algebra = generate_algebra(&family)?;
            let mut report = algebra.to_json(&HORIZONS);
            let mut ok = true;
            if let Ok(members) = algebra.members() {
                let additivity = algebra.additivity_report()?;
                let sets: Vec<DensitySet> = members.into_iter().map(DensitySet::from).collect();
                let dsystem = dsystem_check(&sets)?;
                ok = additivity.passed() && dsystem.passed();
                report["additivity"] = to_value(&additivity);
                report["dsystem"] = to_value(&dsystem);
            }
            Ok(Outcome { report, ok })
        }
        DensityCmd::ChainJoin {
            chain,
            depth,
            horizon,
        } => {
            let chain: Vec<DensitySet> = parse_chain(&chain, Some(depth))?
                .into_iter()
                .map(|s| match s {
                    Subject::Set(set) => Ok(set),
                    other => Err(CliError::Input(format!(
                        "{} is not a density set",
                        other.name()
                    ))),
                })
                .collect::<Result<_, _>>()?;
            let join = diagonal_join(chain, &default_schedule(depth.saturating_sub(1)))?;
            let report = join.report(&[horizon], 50)?;
            let ok = report.passed();
            Ok(Outcome {
                report: to_value(&report),
                ok,
            })
        }
    }
}

fn lines_json(lines: &[AxiomLine]) -> Value {
    to_value(&lines)
}

fn framework_cmd(cmd: FrameworkCmd) -> Result<Outcome, CliError> {
    match cmd {
        FrameworkCmd::Axioms { i_max } => {
            let fragment = PowerSet::new(8);
            let mut ok = true;
            let mut models = Vec::new();
            for group in [GroupModel::Additive, GroupModel::Multiplicative] {
                let inst = FilterInstance::new(group, i_max);
                let samples: Vec<Rational> = (-4i64..=4)
                    .flat_map(|n| {
                        [
                            Rational::from_integer(n.into()),
                            Rational::new(n.into(), 3.into()),
                        ]
                    })
                    .collect();
                let group_lines = group.check_axioms(&samples, 16);
                let mut lines = check_mi_axioms(&inst, &fragment, &Counting::new(fragment));
                lines.extend(check_supports(&inst, &fragment, &Counting::new(fragment)));
                ok &= group_lines.iter().chain(&lines).all(AxiomLine::passed);
                let controls: Vec<Value> = [
                    CountingVariant::MaxInsteadOfSum,
                    CountingVariant::ShortSupport,
                ]
                .into_iter()
                .map(|variant| {
                    let broken = Counting::broken(fragment, variant);
                    let mut l = check_mi_axioms(&inst, &fragment, &broken);
                    l.extend(check_supports(&inst, &fragment, &broken));
                    let failed: Vec<&AxiomLine> = l.iter().filter(|x| !x.passed()).collect();
                    json!({"control": format!("{variant:?}"), "violated": failed})
                })
                .collect();
                models.push(json!({
                    "instance": {"group": group, "instance": "counting", "i_max": i_max, "filter": "cofinite"},
                    "group_axioms": lines_json(&group_lines),
                    "metadata": group.metadata().into_iter().collect::<BTreeMap<_, _>>(),
                    "family_axioms": lines_json(&lines),
                    "negative_controls": controls,
                }));
            }
            let algebra = generate_algebra(&[parse_set("AP(2,0)")?, parse_set("AP(3,0)")?])?;
            let family: Vec<DensitySet> = algebra
                .members()?
                .into_iter()
                .map(DensitySet::from)
                .collect();
            let class_lines = counting_class_assumptions(&family)?;
            ok &= class_lines.iter().all(AxiomLine::passed);
            Ok(Outcome {
                report: json!({"fragment": "P({1..8})", "models": models, "class_assumptions": lines_json(&class_lines)}),
                ok,
            })
        }
        FrameworkCmd::Lemma { chain } => {
            let chain = parse_chain(&chain, None)?;
            let inst = FilterInstance::new(GroupModel::Additive, 32);
            let report = lemma_premises_check(&inst, &chain, LEMMA_HORIZON)?;
            let ok = report.passed();
            Ok(Outcome {
                report: to_value(&report),
                ok,
            })
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::Lattice(cmd) => lattice_cmd(cmd),
        Command::Lp(cmd) => lp_cmd(cmd, seed),
        Command::Embed(cmd) => embed_cmd(cmd, seed),
        Command::Algebrify { file, p, max_atoms } => algebrify_cmd(&file, &p, max_atoms, seed),
        Command::Density(cmd) => density_cmd(cmd),
        Command::Framework(cmd) => framework_cmd(cmd),
    }
}

fn emit(value: &Value, json_mode: bool) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(value).expect("json"));
    } else {
        print!("{}", render::human(value));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.json;
    let seed = cli.seed;
    match run(cli) {
        Ok(Outcome { mut report, ok }) => {
            if let Value::Object(map) = &mut report {
                map.insert("seed".into(), json!(seed));
            }
            emit(&report, json_mode);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let report =
                json!({"error": {"kind": e.kind(), "message": e.to_string()}, "seed": seed});
            if json_mode {
                emit(&report, true);
            } else {
                eprintln!("error ({}): {e}", e.kind());
            }
            ExitCode::from(1)
        }
    }
}
