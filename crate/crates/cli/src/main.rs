use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use xc01::constructions::{build_and_verify_nice_extension, fixpoint_upper_bounds};
use xc01::equivalence::{enumerate_01_classes, partition_affine_classes, CubeCatalog};
use xc01::exact_geometry::PolytopeData;
use xc01::lower_bounds::all_bounds;
use xc01::pipeline::{
    emit_report, run_full, verify_against_reference, vertex_counts, ReferenceTables, ReportFormat, RunOptions, RunOutput,
};
use xc01::{Error, VertexSet};

/// Exact extension complexities of 0/1-polytopes of dimension at most four.
#[derive(Parser, Debug)]
#[command(name = "xc01", version)]
struct Cli {
    /// Worker threads (default: all cores; 1 runs serially).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct DimArg {
    /// Cube dimension, 0 to 4.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(0..=4))]
    dim: u8,
}

#[derive(Args, Debug)]
struct IdArgs {
    /// Polytope ID: bit b(v) is set for every vertex v.
    #[arg(long)]
    id: u64,
    #[command(flatten)]
    dim: DimArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count full-dimensional 0/1-polytopes and their 0/1-equivalence classes.
    Enumerate {
        #[command(flatten)]
        dim: DimArg,
        /// Write the classes as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Affine equivalence classes of full-dimensional 0/1-polytopes.
    Classify {
        #[command(flatten)]
        dim: DimArg,
        /// Write the classes as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Slack matrix of a polytope as JSON.
    Slack(IdArgs),
    /// Fooling set number, rectangle covering number and refined rectangle covering number.
    Bounds(IdArgs),
    /// Upper bound with certificate, checked on an explicit extension.
    Xc(IdArgs),
    /// Full computation for every class up to the given dimension.
    RunAll {
        #[command(flatten)]
        dim: DimArg,
        /// Report format: csv, json or text.
        #[arg(long, default_value = "text")]
        format: String,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Save the complete run as JSON, for `verify --run`.
        #[arg(long)]
        save: Option<PathBuf>,
        /// Do not build and check the extensions.
        #[arg(long)]
        skip_certificates: bool,
    },
    /// Compare a run with the reference tables.
    Verify {
        #[command(flatten)]
        dim: DimArg,
        /// Saved run to check instead of computing one.
        #[arg(long)]
        run: Option<PathBuf>,
        /// Directory with counts.csv, low_dim.csv and dim4_classes.csv (default: bundled copies).
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Also list predecessor differences.
        #[arg(long)]
        warnings: bool,
    },
}

enum Failure {
    Mismatch(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistency(_) | Error::SizeLimit(_) | Error::CertificateInvalid { .. } | Error::Invariant { .. } => 2,
        _ => 3,
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn vertex_set(args: &IdArgs) -> Result<VertexSet, Error> {
    let v = VertexSet::from_id(args.id, args.dim.dim as usize)?;
    if v.is_empty() {
        return Err(Error::Usage("the empty set is not a polytope".into()));
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { dim, out } => {
            let n = dim.dim as usize;
            let classes = enumerate_01_classes(n, n)?;
            let polytopes: usize = classes.iter().map(|c| c.polytopes).sum();
            println!("dimension {n}: {polytopes} polytopes in {} 0/1-equivalence classes", classes.len());
            if let Some(p) = out {
                fs::write(p, serde_json::to_string_pretty(&classes).map_err(Error::from)?)?;
            }
        }
        Command::Classify { dim, out } => {
            let n = dim.dim as usize;
            let catalog = CubeCatalog::build(n)?;
            println!("vertices,polytopes,zero_one_classes,affine_classes");
            for row in vertex_counts(&catalog) {
                println!("{},{},{},{}", row.vertices, row.polytopes, row.zero_one_classes, row.affine_classes);
            }
            if let Some(p) = out {
                let classes = partition_affine_classes(&catalog.zero_one_by_dim[n])?;
                fs::write(p, serde_json::to_string_pretty(&classes).map_err(Error::from)?)?;
            }
        }
        Command::Slack(args) => {
            let data = PolytopeData::compute(&vertex_set(&args)?)?;
            println!("{}", serde_json::to_string(&data.slack).map_err(Error::from)?);
        }
        Command::Bounds(args) => {
            let data = PolytopeData::compute(&vertex_set(&args)?)?;
            let (omega, rc, rrc) = all_bounds(&data.slack)?;
            println!("{omega} {rc} {rrc}");
        }
        Command::Xc(args) => {
            let v = vertex_set(&args)?;
            let catalog = CubeCatalog::build(v.ambient_dim())?;
            let class = catalog.affine_class(&v)?;
            let upper = fixpoint_upper_bounds(&catalog)?;
            let report = build_and_verify_nice_extension(&catalog, &upper, class)?;
            let out = json!({
                "id": v.id(),
                "class": class,
                "xcs": report.bound,
                "certificate": upper.get(class),
                "extension": { "dim": report.dim, "vertices": report.n_vertices, "facets": report.n_facets },
            });
            println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
        }
        Command::RunAll { dim, format, report, save, skip_certificates } => {
            let format: ReportFormat = format.parse()?;
            let out = run_full(dim.dim as usize, &RunOptions { skip_certificates })?;
            if let Some(p) = save {
                fs::write(p, serde_json::to_string(&out).map_err(Error::from)?)?;
            }
            write_or_print(report.as_deref(), &emit_report(&out.records, format)?)?;
        }
        Command::Verify { dim, run, reference, warnings } => {
            let tables = match reference {
                Some(dir) => ReferenceTables::load(&dir)?,
                None => ReferenceTables::bundled()?,
            };
            let out: RunOutput = match run {
                Some(p) => {
                    let text = fs::read_to_string(&p)
                        .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                    serde_json::from_str(&text).map_err(Error::from)?
                }
                None => run_full(dim.dim as usize, &RunOptions::default())?,
            };
            let diff = verify_against_reference(&out, &tables);
            for e in &diff.errors {
                println!("error: {e}");
            }
            if warnings {
                for w in &diff.warnings {
                    println!("warning: {w}");
                }
            }
            println!(
                "{} records checked: {} mismatches, {} predecessor warnings",
                out.records.len(),
                diff.errors.len(),
                diff.warnings.len()
            );
            if !diff.is_clean() {
                return Err(Failure::Mismatch(format!("{} mismatches against the reference", diff.errors.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(3);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
