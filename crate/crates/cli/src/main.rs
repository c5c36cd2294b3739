//! `torsionlab`: compute analytic torsions, print character tables and run
//! the verification suites.
//!
//! Exit codes: 0 success, 1 failed verification, 2 bad arguments,
//! 3 computation error, 4 I/O error.

mod cache;
mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use torsionlab::groups::{build_group, inverse_mod, GroupSpec, PolytopeSymbol};
use torsionlab::torsion::{torsion_closed_form, torsion_lens, torsion_via_cyclic_decomposition};
use torsionlab::zetalab::{torsion_spectral, ZetaParams};
use torsionlab::{CharacterTable, Convention, FiniteSymmetryGroup, TorsionResult, TwistSpec};

use cache::TableCache;
use verify::Suite;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "torsionlab", version, about = "Analytic torsion of spherical space forms and tessellations of S^3")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Normalisation of ln T.
    #[arg(long, value_enum, default_value_t = ConventionArg::Paper, global = true)]
    convention: ConventionArg,
    /// Euler–Maclaurin correction terms (even, 2-12).
    #[arg(long, default_value_t = 12, global = true)]
    em_order: u32,
    /// Terms summed directly before asymptotics (>= 10).
    #[arg(long, default_value_t = 10, global = true)]
    cutoff: u32,
    /// Order of the binomial tail expansion (>= 2).
    #[arg(long, default_value_t = 8, global = true)]
    binom_trunc: u32,
    /// Cache directory (default: $TORSIONLAB_CACHE, then the user data directory).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write cached tables.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute ln T for a group and twist.
    Compute(ComputeArgs),
    /// Run a verification suite and print a report of residuals.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Print the character table of a group.
    Table(GroupArgs),
    /// Manage cached character tables.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long, value_enum, ignore_case = true)]
    group: GroupName,
    /// Order parameter for lens and binary-dihedral groups.
    #[arg(long)]
    q: Option<u32>,
    /// Lens parameters l1,l2 (default 1,1).
    #[arg(long, value_delimiter = ',')]
    l: Option<Vec<u32>>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// U(1) twist exponent for lens spaces.
    #[arg(long)]
    r: Option<u32>,
    /// Irrep label, or `all` for every irrep.
    #[arg(long)]
    twist: Option<String>,
    #[arg(long, value_enum, default_value_t = Route::Closed)]
    route: Route,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Paper,
    Doubled,
    Ray,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::PaperTable,
            ConventionArg::Doubled => Convention::Doubled,
            ConventionArg::Ray => Convention::Ray,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Closed,
    Spectral,
    Cyclic,
    Lens,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupName {
    Lens,
    BinaryDihedral,
    #[value(name = "Tprime")]
    Tprime,
    #[value(name = "Oprime")]
    Oprime,
    #[value(name = "Yprime")]
    Yprime,
    Poly333,
    Poly334,
    Poly343,
    Poly335,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    Clear,
    Warm,
}

/// Settings shared by every command.
struct RunConfig {
    params: ZetaParams,
    convention: Convention,
    format: Format,
    cache: TableCache,
}

impl GroupArgs {
    fn lens_l(&self) -> Result<[u32; 2], CliError> {
        match self.l.as_deref() {
            None => Ok([1, 1]),
            Some([a, b]) => Ok([*a, *b]),
            Some(other) => Err(CliError::Usage(format!("--l takes two values, got {}", other.len()))),
        }
    }

    fn spec(&self) -> Result<GroupSpec, CliError> {
        let need_q = || self.q.ok_or_else(|| CliError::Usage("this group needs --q".into()));
        if self.l.is_some() && self.group != GroupName::Lens {
            return Err(CliError::Usage("--l applies to lens groups only".into()));
        }
        let poly = |symbol| GroupSpec::PolytopeRotation { symbol };
        let spec = match self.group {
            GroupName::Lens => {
                let q = need_q()?;
                let [l1, l2] = self.lens_l()?;
                GroupSpec::Cyclic {
                    q,
                    nu1: inverse_mod(l1, q),
                    nu2: inverse_mod(l2, q),
                }
            }
            GroupName::BinaryDihedral => GroupSpec::BinaryDihedral { q: need_q()? },
            GroupName::Tprime => GroupSpec::BinaryTetrahedral,
            GroupName::Oprime => GroupSpec::BinaryOctahedral,
            GroupName::Yprime => GroupSpec::BinaryIcosahedral,
            GroupName::Poly333 => poly(PolytopeSymbol::P333),
            GroupName::Poly334 => poly(PolytopeSymbol::P334),
            GroupName::Poly343 => poly(PolytopeSymbol::P343),
            GroupName::Poly335 => poly(PolytopeSymbol::P335),
        };
        if self.q.is_some() && !matches!(self.group, GroupName::Lens | GroupName::BinaryDihedral) {
            return Err(CliError::Usage("--q applies to lens and binary-dihedral groups only".into()));
        }
        spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }
}

fn build(spec: GroupSpec) -> Result<FiniteSymmetryGroup, CliError> {
    build_group(spec).map_err(|e| CliError::Compute(e.to_string()))
}

fn compute_err(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn cmd_compute(args: &ComputeArgs, cfg: &RunConfig) -> Result<(Vec<TorsionResult>, bool), CliError> {
    let spec = args.group.spec()?;
    if args.r.is_some() && args.twist.is_some() {
        return Err(CliError::Usage("give either --r or --twist".into()));
    }
    if args.r.is_some() && args.group.group != GroupName::Lens {
        return Err(CliError::Usage("--r applies to lens groups only".into()));
    }
    let all = args.twist.as_deref() == Some("all");

    if args.route == Route::Lens {
        let GroupSpec::Cyclic { q, .. } = spec else {
            return Err(CliError::Usage("the lens route needs --group lens".into()));
        };
        let l = args.group.lens_l()?;
        let rs: Vec<u32> = if all {
            (0..q).collect()
        } else {
            vec![match (&args.r, &args.twist) {
                (Some(r), _) => *r,
                (None, None) => 0,
                (None, Some(t)) if t == "1" => 0,
                (None, Some(t)) => t
                    .strip_prefix("w^")
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| CliError::Usage(format!("lens twists are 1 or w^r, got {t:?}")))?,
            }]
        };
        let out = rs
            .par_iter()
            .map(|&r| torsion_lens(q, l, r, cfg.convention).map_err(compute_err))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((out, all));
    }

    let g = build(spec)?;
    let table = cfg.cache.table(&g)?;
    let twists: Vec<TwistSpec> = if all {
        table.irreps.iter().map(|c| TwistSpec::Irrep { label: c.label.clone() }).collect()
    } else {
        vec![match (&args.r, &args.twist) {
            (Some(0), _) | (None, None) => TwistSpec::Trivial,
            (Some(r), _) => TwistSpec::Irrep { label: format!("w^{r}") },
            (None, Some(t)) => {
                if table.get(t).is_none() {
                    return Err(CliError::Usage(format!(
                        "{spec} has no irrep {t:?}; labels: {}",
                        table.labels().join(" ")
                    )));
                }
                TwistSpec::Irrep { label: t.clone() }
            }
        }]
    };
    if args.route == Route::Cyclic && twists.iter().any(|t| !matches!(t, TwistSpec::Trivial)) {
        return Err(CliError::Usage("the cyclic route covers the trivial twist only".into()));
    }
    let out = twists
        .par_iter()
        .map(|tw| match args.route {
            Route::Closed => torsion_closed_form(&g, &table, tw, cfg.convention).map_err(compute_err),
            Route::Spectral => torsion_spectral(&g, &table, tw, cfg.convention, &cfg.params).map_err(compute_err),
            Route::Cyclic => torsion_via_cyclic_decomposition(&spec, tw, cfg.convention).map_err(compute_err),
            Route::Lens => unreachable!("handled above"),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((out, all))
}

fn result_line(r: &TorsionResult) -> String {
    let mut s = format!(
        "{} {} [{}, {}] lnT = {:.12} T = {:.10}",
        r.group, r.twist, r.convention, r.route, r.numeric, r.t
    );
    if let Some(surd) = &r.surd {
        let _ = write!(s, " surd = {surd}");
    }
    if let Some(v) = &r.log_value {
        let _ = write!(s, " exact = {v}");
    }
    s
}

fn fmt_value(re: f64, im: f64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

fn table_text(g: &FiniteSymmetryGroup, t: &CharacterTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} order {} classes {} irreps {}", g.spec, g.order(), t.classes.len(), t.irreps.len());
    let _ = writeln!(s, "classes (size, order, alpha, beta):");
    for (i, c) in t.classes.iter().enumerate() {
        let _ = writeln!(s, "  C{i}: {} {} {} {}", c.size, c.order, c.alpha, c.beta);
    }
    for chi in &t.irreps {
        let vals: Vec<String> = chi.cf.values.iter().map(|v| fmt_value(v.re, v.im)).collect();
        let _ = writeln!(s, "{:>6} dim {} fs {:+}: {}", chi.label, chi.dim, chi.fs_indicator, vals.join(" "));
    }
    let _ = write!(s, "sum dim^2 = {}", t.sum_dim_squares());
    s
}

#[derive(Serialize)]
struct TableDump<'a> {
    group: torsionlab::groups::GroupSummary,
    table: &'a CharacterTable,
}

fn print_json<T: Serialize>(v: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Compute(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let params = ZetaParams {
        em_order: cli.em_order,
        cutoff: cli.cutoff,
        binom_trunc: cli.binom_trunc,
    };
    params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = RunConfig {
        params,
        convention: cli.convention.into(),
        format: cli.format,
        cache: TableCache::resolve(cli.cache_dir, cli.no_cache),
    };
    match &cli.command {
        Command::Compute(args) => {
            let (results, many) = cmd_compute(args, &cfg)?;
            match cfg.format {
                Format::Json if many => print_json(&results)?,
                Format::Json => print_json(&results[0])?,
                Format::Text => results.iter().for_each(|r| println!("{}", result_line(r))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let report = verify::run(*suite, &cfg.cache, &cfg.params)?;
            match cfg.format {
                Format::Json => print_json(&report)?,
                Format::Text => {
                    for c in &report.checks {
                        let tol = c.tolerance.map(|t| format!("{t:.0e}")).unwrap_or_else(|| "report".into());
                        let note = c.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default();
                        println!(
                            "{} {}: {:.3e} [{tol}]{note}",
                            if c.pass { "PASS" } else { "FAIL" },
                            c.name,
                            c.residual
                        );
                    }
                    let failed = report.checks.iter().filter(|c| !c.pass).count();
                    println!("{}: {} checks, {failed} failed", report.suite, report.checks.len());
                }
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Table(args) => {
            let g = build(args.spec()?)?;
            let t = cfg.cache.table(&g)?;
            match cfg.format {
                Format::Json => print_json(&TableDump {
                    group: g.summary(),
                    table: &t,
                })?,
                Format::Text => println!("{}", table_text(&g, &t)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cache { action } => {
            let dir = cfg
                .cache
                .dir()
                .map(|d| d.display().to_string())
                .ok_or_else(|| CliError::Usage("caching is disabled".into()))?;
            match action {
                CacheAction::Clear => {
                    let n = cfg.cache.clear()?;
                    println!("removed {n} cached tables from {dir}");
                }
                CacheAction::Warm => {
                    let specs = [
                        GroupSpec::BinaryTetrahedral,
                        GroupSpec::BinaryOctahedral,
                        GroupSpec::BinaryIcosahedral,
                        GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P333 },
                        GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P334 },
                        GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P343 },
                        GroupSpec::PolytopeRotation { symbol: PolytopeSymbol::P335 },
                    ];
                    let done: Vec<String> = specs
                        .par_iter()
                        .map(|s| build(*s).and_then(|g| cfg.cache.table(&g)).map(|_| s.to_string()))
                        .collect::<Result<_, _>>()?;
                    println!("cached {} tables in {dir}: {}", done.len(), done.join(" "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("torsionlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
