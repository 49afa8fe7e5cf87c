//! `holomorph`: verify the exponent-twisting map on semidirect products,
//! search for parameter sets, and run the brute-force oracles.
//!
//! Exit codes: 0 confirmed, 1 refuted or over a cap, 2 bad input.
//! `HOLOMORPH_THREADS` sets the worker count (default: all cores).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use holomorph::group::{import_table, FiniteGroup, GroupTable};
use holomorph::hol::coset_order_in_t;
use holomorph::nilpotent::{build_heisenberg, Thm11Checker};
use holomorph::oracle::{brute_nhol, regular_subgroup_check, OracleError, DEFAULT_SCAN_CAP};
use holomorph::perm::inverse_map_perm;
use holomorph::pipeline::{run_verify, VerifyOptions};
use holomorph::recipe::recipe_search;
use holomorph::spec::SpecFile;

#[derive(Parser)]
#[command(name = "holomorph", version, about = "Multiple holomorphs of A x| C_d with coprime exponents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four hypotheses and the coset order of pi for a spec file
    Verify {
        #[arg(long)]
        spec: PathBuf,
        /// Skip Aut(G) enumeration and use the power-map criterion for condition (3)
        #[arg(long)]
        skip_aut: bool,
        /// Largest |G| for which Aut(G) is enumerated
        #[arg(long, default_value_t = holomorph::group::DEFAULT_SIZE_CAP)]
        aut_cap: usize,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List cyclic recipes A = C_q with a coset of order p^e
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        q_bound: u64,
        /// Write one spec file per hit into this directory
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Brute-force references for small groups
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Power maps x -> x^l on a p-group of small class
    Nilpotent {
        /// Built-in group; only "heisenberg" is available
        #[arg(long, conflicts_with = "table")]
        group: Option<String>,
        /// Multiplication table CSV
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
    },
    /// Validate a multiplication table CSV
    TableImport { file: PathBuf },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// T(G) = NHol(G)/Hol(G) by scanning identity-fixing permutations
    Nhol {
        #[command(flatten)]
        group: GroupArg,
        /// Largest number of permutations to scan
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        cap: u64,
    },
    /// Count regular subgroups with normalizer Hol(G) and compare with |T(G)|
    Regular {
        #[command(flatten)]
        group: GroupArg,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupArg {
    /// Multiplication table CSV
    #[arg(long)]
    table: Option<PathBuf>,
    /// Abelian group as comma-separated cyclic orders, e.g. "2,4"
    #[arg(long)]
    abelian: Option<String>,
}

enum Failure {
    Input(anyhow::Error),
    Refuted(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Verify { spec, skip_aut, aut_cap, out } => verify(&spec, skip_aut, aut_cap, out.as_deref()),
        Command::Search { p, e, q_bound, emit } => search(p, e, q_bound, emit.as_deref()),
        Command::Oracle { which: OracleCommand::Nhol { group, cap } } => oracle_nhol(&group, cap),
        Command::Oracle { which: OracleCommand::Regular { group } } => oracle_regular(&group),
        Command::Nilpotent { group, table, p, ell } => nilpotent(group.as_deref(), table.as_deref(), p, ell),
        Command::TableImport { file } => table_import(&file),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Refuted(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("HOLOMORPH_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("HOLOMORPH_THREADS must be a positive integer, got {value:?}"))?;
    if threads == 0 {
        return Err(anyhow!("HOLOMORPH_THREADS must be a positive integer, got 0"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn verify(spec_path: &Path, skip_aut: bool, aut_cap: usize, out: Option<&Path>) -> Outcome {
    let spec = SpecFile::load(spec_path)?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let group = spec.build(base)?;
    let report = run_verify(&group, VerifyOptions { skip_aut, aut_cap }).map_err(|e| Failure::Refuted(e.into()))?;
    let json = report.to_json();
    match out {
        Some(path) => {
            std::fs::write(path, &json).with_context(|| format!("cannot write {}", path.display()))?;
            println!(
                "|G| = {}, coset order {} (predicted {}), {}",
                report.group_order,
                show(report.coset_order_computed),
                show(report.coset_order_theoretical),
                if report.confirmed { "confirmed" } else { "not confirmed" }
            );
        }
        None => print!("{json}"),
    }
    if let Some(reason) = &report.failure {
        eprintln!("not confirmed: {reason}");
    }
    Ok(report.confirmed)
}

fn show(value: Option<u64>) -> String {
    value.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

fn search(p: u64, e: u32, q_bound: u64, emit: Option<&Path>) -> Outcome {
    let hits = recipe_search(p, e, q_bound)?;
    if let Some(dir) = emit {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    for recipe in &hits {
        let q = recipe.cyclic_factors[0];
        let f = &recipe.factors[0];
        println!(
            "A = C{q}, psi: a -> a^{}, p = {}, n = {}, m = {}: predicted coset order {}",
            f.ell,
            f.p,
            f.n,
            f.m,
            recipe.target_order()
        );
        if let Some(dir) = emit {
            let path = dir.join(format!("c{q}_p{p}_e{e}.json"));
            std::fs::write(&path, SpecFile::from(recipe).to_json())
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    if hits.is_empty() {
        println!("no prime q <= {q_bound} with {p}^{e} dividing q - 1");
    }
    Ok(true)
}

fn load_group(arg: &GroupArg) -> Result<GroupTable, Failure> {
    if let Some(path) = &arg.table {
        return Ok(import_table(path).with_context(|| format!("cannot import {}", path.display()))?);
    }
    let spec = arg.abelian.as_deref().unwrap_or_default();
    let factors = spec
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("cannot parse cyclic orders {spec:?}"))?;
    Ok(GroupTable::abelian(&factors)?)
}

fn capped(e: OracleError) -> Failure {
    match e {
        OracleError::ScanCapExceeded { .. } | OracleError::TooLarge { .. } => Failure::Refuted(e.into()),
        other => Failure::Input(other.into()),
    }
}

fn oracle_nhol(arg: &GroupArg, cap: u64) -> Outcome {
    let group = load_group(arg)?;
    let t = brute_nhol(&group, cap).map_err(capped)?;
    let spectrum: Vec<String> = t.order_spectrum().iter().map(|(o, c)| format!("{o}: {c}")).collect();
    println!("|G| = {}", group.order());
    println!("|Aut(G)| = {}", t.aut_order);
    println!("|T(G)| = {}", t.order());
    println!("element orders: {{{}}}", spectrum.join(", "));
    println!("elementary abelian 2-group: {}", if t.is_elementary_abelian_2() { "yes" } else { "no" });
    let inverse = coset_order_in_t(&inverse_map_perm(&group), &group, 2)?;
    println!("inverse map coset order: {inverse}");
    Ok(true)
}

fn oracle_regular(arg: &GroupArg) -> Outcome {
    let group = load_group(arg)?;
    let report = regular_subgroup_check(&group).map_err(capped)?;
    println!("regular subgroups isomorphic to G inside Hol(G): {}", report.regular_subgroups_in_hol);
    println!("with normalizer Hol(G): {}", report.count);
    println!("|T(G)| = {}", report.t_order);
    println!("lambda(G) and rho(G) among them: {}", report.contains_lambda && report.contains_rho);
    Ok(report.holds())
}

fn nilpotent(name: Option<&str>, table: Option<&Path>, p: u64, ell: i64) -> Outcome {
    let group = match (name, table) {
        (_, Some(path)) => import_table(path).with_context(|| format!("cannot import {}", path.display()))?,
        (Some("heisenberg"), None) => build_heisenberg(p)?,
        (Some(other), None) => return Err(Failure::Input(anyhow!("unknown group {other:?}; expected \"heisenberg\""))),
        (None, None) => return Err(Failure::Input(anyhow!("give --group heisenberg or --table FILE"))),
    };
    let checker = Thm11Checker::new(&group, p)?;
    let outcome = checker.check(ell)?;
    let data = checker.data();
    let value = serde_json::json!({
        "order": group.order(),
        "class": data.class,
        "center_order": data.center.len(),
        "r": data.r,
        "t": data.t,
        "outcome": outcome,
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    if !outcome.applicable {
        eprintln!("hypotheses do not hold: need class in 2..={} and l coprime to {p}", p.saturating_sub(1));
    }
    Ok(outcome.applicable && outcome.agrees())
}

fn table_import(path: &Path) -> Outcome {
    let group = import_table(path).with_context(|| format!("cannot import {}", path.display()))?;
    println!(
        "valid group table: order {}, exponent {}, {}",
        group.order(),
        group.exponent(),
        if group.is_abelian() { "abelian" } else { "nonabelian" }
    );
    Ok(true)
}
