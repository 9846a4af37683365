//! `siegel`: command-line checks for cones, volume functions, residues and
//! period-domain computations.
//!
//! Exit codes: 0 when the checked property holds, 1 when it fails (the report
//! carries a witness), 2 on unreadable or invalid input.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use siegel_toroidal::catalog::{catalog_get, catalog_list};
use siegel_toroidal::cone::{
    edge_class, is_fan, is_regular, is_separable, lattice_volume, MarkedCone,
};
use siegel_toroidal::json::{ConeSpec, FanSpec, GroupSpec, JsonInt};
use siegel_toroidal::period::{
    block_volume_report, dual_filtration, filtration_from_tau, nilpotent_orbit_check,
    positive_cone_membership, real_matrix, riemann_report, siegel_membership, weight_filtration,
    ComplexMat, CuspNilpotent,
};
use siegel_toroidal::residue::{chi_descriptor, intersection_vanishing, residue_chain};
use siegel_toroidal::volume::{is_ke_point, pencil_volume, verify_ma_identity, volume_function, MaMode};
use siegel_toroidal::Error;

use config::{Output, RunConfig, CONFIG_ENV};

#[derive(Parser, Debug)]
#[command(name = "siegel", version, about = "Cone, volume-function and residue checks for Siegel toroidal compactifications")]
struct Cli {
    /// JSON run configuration (seed, trials, tol, threads, output).
    #[arg(long, env = CONFIG_ENV, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, value_enum, global = true)]
    output: Option<Output>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-cone checks.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Monge–Ampère identity for a top cone.
    #[command(subcommand)]
    Ma(MaCmd),
    /// Kähler–Einstein characteristic point test.
    #[command(subcommand)]
    Ke(KeCmd),
    /// Residue chain and integrand for the first `d` marked edges.
    Residue {
        source: String,
        #[arg(long)]
        d: usize,
    },
    /// Vanishing verdict for a product of boundary divisors.
    Intersect {
        source: String,
        /// Zero-based edge indices, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<usize>,
    },
    /// Fan checks.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Separability of a fan under a finite list of GL(g, Z) elements.
    Separable { fan: PathBuf, group: PathBuf },
    /// Period-domain checks.
    Hodge {
        #[arg(value_enum)]
        check: HodgeCheck,
        file: PathBuf,
    },
    /// Builtin cones.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand, Debug)]
enum ConeCmd {
    /// Marking invariants, regularity and edge classes.
    Check { source: String },
    /// Lattice volume and local volume function.
    Volume { source: String },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct MaModeArgs {
    #[arg(long)]
    symbolic: bool,
    #[arg(long)]
    randomized: bool,
}

#[derive(Subcommand, Debug)]
enum MaCmd {
    Verify {
        source: String,
        #[command(flatten)]
        mode: MaModeArgs,
    },
}

#[derive(Subcommand, Debug)]
enum KeCmd {
    Test { source: String },
}

#[derive(Subcommand, Debug)]
enum FanCmd {
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    List,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum HodgeCheck {
    Siegel,
    Riemann,
    PositiveCone,
    Weight,
    Orbit,
    BlockVolume,
}

/// Input problem: exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

struct Report {
    body: Value,
    pass: bool,
}

type CmdResult = Result<Report, InputError>;

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(InputError)
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .with_context(|| format!("{}: malformed JSON", path.display()))
        .map_err(InputError)
}

/// A catalog name, or a path to a cone JSON file.
fn load_cone(source: &str) -> Result<(String, MarkedCone), InputError> {
    let path = Path::new(source);
    if path.exists() {
        let spec: ConeSpec = parse(path)?;
        let cone = spec
            .to_cone()
            .with_context(|| format!("{}: invalid cone", path.display()))?;
        return Ok((spec.name.unwrap_or_else(|| source.to_string()), cone));
    }
    match catalog_get(source) {
        Ok(e) => Ok((e.name, e.cone)),
        Err(Error::UnknownCatalogEntry(_)) => Err(InputError(anyhow!(
            "{source}: no such file or catalog entry"
        ))),
        Err(e) => Err(e.into()),
    }
}

fn load_fan(path: &Path) -> Result<(Vec<String>, Vec<MarkedCone>), InputError> {
    let spec: FanSpec = parse(path)?;
    let names = spec
        .cones
        .iter()
        .enumerate()
        .map(|(i, c)| c.name.clone().unwrap_or_else(|| format!("cone{i}")))
        .collect();
    let cones = spec
        .to_cones()
        .with_context(|| format!("{}: invalid fan", path.display()))?;
    Ok((names, cones))
}

fn cone_check(source: &str) -> CmdResult {
    let (name, c) = load_cone(source)?;
    let simplicial = c.is_simplicial();
    let top = c.generators().len() == c.full_dim();
    let volume = if top && simplicial {
        Some(JsonInt(lattice_volume(&c)?))
    } else {
        None
    };
    let regular = if simplicial { Some(is_regular(&c)?) } else { None };
    let edges = c
        .generators()
        .iter()
        .enumerate()
        .map(|(i, m)| Ok(json!({"index": i, "label": c.label(i), "class": edge_class(m)?})))
        .collect::<Result<Vec<Value>, Error>>()?;
    Ok(Report {
        body: json!({
            "cone": name,
            "g": c.g(),
            "scale": JsonInt(c.scale().clone()),
            "simplicial": simplicial,
            "top_dimensional": top,
            "regular": regular,
            "volume": volume,
            "edges": edges,
        }),
        pass: simplicial,
    })
}

fn cone_volume(source: &str) -> CmdResult {
    let (name, c) = load_cone(source)?;
    match volume_function(&c) {
        Ok(v) => Ok(Report {
            body: json!({
                "cone": name,
                "volume": JsonInt(v.vol().clone()),
                "F": v.f(),
                "F_text": v.f().to_string(),
            }),
            pass: true,
        }),
        Err(e @ (Error::DegenerateCone | Error::DegeneratePencil)) => Ok(Report {
            body: json!({"cone": name, "volume": 0, "error": e.to_string()}),
            pass: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn ma_verify(source: &str, mode: &MaModeArgs, cfg: &RunConfig) -> CmdResult {
    let (name, c) = load_cone(source)?;
    let v = volume_function(&c)?;
    let mode = if mode.symbolic {
        MaMode::Symbolic
    } else {
        MaMode::Randomized
    };
    let r = verify_ma_identity(&v, mode, cfg.trials, cfg.seed)?;
    let mut body = serde_json::to_value(&r)?;
    body["cone"] = json!(name);
    Ok(Report { body, pass: r.holds })
}

fn ke_test(source: &str) -> CmdResult {
    let (name, c) = load_cone(source)?;
    let holds = is_ke_point(c.generators())?;
    Ok(Report {
        body: json!({
            "cone": name,
            "g": c.g(),
            "vol": JsonInt(pencil_volume(c.generators())),
            "ke_point": holds,
        }),
        pass: holds,
    })
}

fn residue(source: &str, d: usize) -> CmdResult {
    let (name, c) = load_cone(source)?;
    let v = volume_function(&c)?;
    let rc = residue_chain(&v, d)?;
    Ok(Report {
        body: json!({
            "cone": name,
            "d": d,
            "S": rc.s,
            "g_d": rc.gd,
            "chi": chi_descriptor(&rc),
        }),
        pass: true,
    })
}

fn intersect(source: &str, edges: &[usize]) -> CmdResult {
    let (name, c) = load_cone(source)?;
    let verdict = intersection_vanishing(&c, edges)?;
    Ok(Report {
        body: json!({"cone": name, "edges": edges, "verdict": verdict}),
        pass: true,
    })
}

fn fan_check(path: &Path) -> CmdResult {
    let (names, cones) = load_fan(path)?;
    let report = is_fan(&cones)?;
    let mut per_cone = cones
        .par_iter()
        .enumerate()
        .map(|(i, c)| -> Result<(String, usize, Value), Error> {
            let top = c.generators().len() == c.full_dim();
            let volume = if top { Some(JsonInt(lattice_volume(c)?)) } else { None };
            Ok((
                names[i].clone(),
                i,
                json!({"name": names[i], "index": i, "regular": is_regular(c)?, "volume": volume}),
            ))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    per_cone.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "first": names[v.first],
                "second": names[v.second],
                "detail": v.detail,
            })
        })
        .collect();
    Ok(Report {
        body: json!({
            "is_fan": report.is_fan,
            "violations": violations,
            "cones": per_cone.into_iter().map(|x| x.2).collect::<Vec<_>>(),
        }),
        pass: report.is_fan,
    })
}

fn separable(fan: &Path, group: &Path) -> CmdResult {
    let (names, cones) = load_fan(fan)?;
    let spec: GroupSpec = parse(group)?;
    let elements = spec
        .to_elements()
        .with_context(|| format!("{}: invalid group element", group.display()))?;
    let r = is_separable(&cones, &elements)?;
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| json!({"cone": names[v.cone], "element": v.element}))
        .collect();
    Ok(Report {
        body: json!({"separable": r.separable, "violations": violations}),
        pass: r.separable,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HodgeInput {
    tau: Option<ComplexMat>,
    #[serde(rename = "F")]
    f: Option<ComplexMat>,
    g: Option<usize>,
    k: Option<usize>,
    u: Option<Vec<Vec<f64>>>,
    tau_mid: Option<ComplexMat>,
    tau_prime: Option<ComplexMat>,
    z: Option<ComplexMat>,
    s: Option<ComplexMat>,
}

fn need<T>(v: Option<T>, field: &str) -> Result<T, InputError> {
    v.ok_or_else(|| InputError(anyhow!("missing field {field:?}")))
}

fn nilpotent(inp: &HodgeInput) -> Result<CuspNilpotent, InputError> {
    let g = need(inp.g, "g")?;
    let k = inp.k.unwrap_or(0);
    let u = real_matrix(need(inp.u.as_ref(), "u")?)?;
    Ok(CuspNilpotent::new(g, k, u)?)
}

fn hodge(check: HodgeCheck, path: &Path, tol: f64) -> CmdResult {
    let inp: HodgeInput = parse(path)?;
    let (body, pass) = match check {
        HodgeCheck::Siegel => {
            let ok = siegel_membership(&need(inp.tau, "tau")?, tol)?;
            (json!({"check": "siegel", "member": ok}), ok)
        }
        HodgeCheck::Riemann => {
            let f = match (inp.f, inp.tau) {
                (Some(f), _) => f,
                (None, Some(t)) => match filtration_from_tau(&t, tol) {
                    Ok(f) => f,
                    Err(e) => {
                        return Ok(Report {
                            body: json!({"check": "riemann", "holds": false, "error": e.to_string()}),
                            pass: false,
                        })
                    }
                },
                (None, None) => return Err(InputError(anyhow!("missing field \"F\" or \"tau\""))),
            };
            let r = riemann_report(&f, tol)?;
            (
                json!({"check": "riemann", "holds": r.holds, "isotropy_defect": r.isotropy_defect, "min_eigenvalue": r.min_eigenvalue}),
                r.holds,
            )
        }
        HodgeCheck::PositiveCone => {
            let ok = positive_cone_membership(&nilpotent(&inp)?, tol)?;
            (json!({"check": "positive-cone", "member": ok}), ok)
        }
        HodgeCheck::Weight => {
            let n = nilpotent(&inp)?;
            match weight_filtration(&n, tol) {
                Ok(w) => {
                    let ok = w.image_in_kernel;
                    let mut v = serde_json::to_value(&w)?;
                    v["check"] = json!("weight");
                    (v, ok)
                }
                Err(e @ Error::Precondition(_)) => (json!({"check": "weight", "error": e.to_string()}), false),
                Err(e) => return Err(e.into()),
            }
        }
        HodgeCheck::Orbit => {
            let n = nilpotent(&inp)?;
            let f = match inp.f {
                Some(f) => f,
                None => dual_filtration(n.g(), inp.tau_mid.as_ref())?,
            };
            match nilpotent_orbit_check(&f, &n, tol) {
                Ok(ok) => (json!({"check": "orbit", "holds": ok}), ok),
                Err(e @ Error::Precondition(_)) => (json!({"check": "orbit", "holds": false, "error": e.to_string()}), false),
                Err(e) => return Err(e.into()),
            }
        }
        HodgeCheck::BlockVolume => {
            let r = block_volume_report(
                &need(inp.tau_prime, "tau_prime")?,
                &need(inp.z, "z")?,
                &need(inp.s, "s")?,
                tol,
            )?;
            let ok = r.holds;
            let mut v = serde_json::to_value(&r)?;
            v["check"] = json!("block-volume");
            (v, ok)
        }
    };
    Ok(Report { body, pass })
}

fn catalog() -> CmdResult {
    let entries = catalog_list();
    Ok(Report {
        body: json!({"entries": entries}),
        pass: true,
    })
}

fn render(body: &Value, output: Output) -> String {
    match output {
        Output::Json => serde_json::to_string_pretty(body).expect("serialisable"),
        Output::Text => match body {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}: {s}"),
                    other => format!("{k}: {other}"),
                })
                .collect::<Vec<_>>()
                .join("\n"),
            other => other.to_string(),
        },
    }
}

fn resolve_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(o) = cli.output {
        cfg.output = o;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> CmdResult {
    match &cli.command {
        Command::Cone(ConeCmd::Check { source }) => cone_check(source),
        Command::Cone(ConeCmd::Volume { source }) => cone_volume(source),
        Command::Ma(MaCmd::Verify { source, mode }) => ma_verify(source, mode, cfg),
        Command::Ke(KeCmd::Test { source }) => ke_test(source),
        Command::Residue { source, d } => residue(source, *d),
        Command::Intersect { source, edges } => intersect(source, edges),
        Command::Fan(FanCmd::Check { file }) => fan_check(file),
        Command::Separable { fan, group } => separable(fan, group),
        Command::Hodge { check, file } => hodge(*check, file, cfg.tol),
        Command::Catalog(CatalogCmd::List) => catalog(),
    }
}

fn run(cli: &Cli) -> anyhow::Result<(Report, Output)> {
    let cfg = resolve_config(cli)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build_global()
        .context("starting worker pool")?;
    match dispatch(cli, &cfg) {
        Ok(r) => Ok((r, cfg.output)),
        Err(InputError(e)) => bail!(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, output)) => {
            println!("{}", render(&report.body, output));
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
