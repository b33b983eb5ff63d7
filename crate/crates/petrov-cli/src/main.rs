//! `petrov-lab`: classify pointwise 4-manifold curvature data against
//! deformation Hodge stars, decompose operators, hunt critical planes, and
//! run the invariant suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use petrov_core::format::CurvatureFile;
use petrov_core::pipeline::{
    classify_report, critical_planes_report, decompose_report, StarSelection,
};
use petrov_core::report::Report;
use petrov_core::sectional::Flavor;
use petrov_core::verification::{run_all, VerifyConfig};
use petrov_core::{batch, catalog, Error, Tolerances};

#[derive(Parser)]
#[command(
    name = "petrov-lab",
    version,
    about = "Curvature operators, deformation Hodge stars, and generalized Petrov types on 4-manifold frame data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify curvature files against the deformation stars.
    Classify(ClassifyArgs),
    /// Print commuting/anti-commuting parts, Weyl blocks, and component
    /// matrices.
    Decompose(DecomposeArgs),
    /// Multistart search for critical planes of a sectional-curvature
    /// flavor.
    CriticalPlanes(CriticalArgs),
    /// Run the built-in invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// List the built-in generators or emit one as a curvature file.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Which deformation star to test: riemannian, lorentzian, split, all.
    #[arg(long, default_value = "all")]
    star: String,
    /// Reject inputs whose first-Bianchi residual exceeds the tolerance.
    #[arg(long)]
    strict: bool,
    /// Emit machine-readable JSON instead of the text report.
    #[arg(long)]
    json: bool,
    /// Curvature files.
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json: bool,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct CriticalArgs {
    /// gsec, tsec, or ssec.
    #[arg(long, default_value = "gsec")]
    flavor: String,
    /// Number of random starts.
    #[arg(long, default_value_t = 32)]
    starts: usize,
    /// Seed for the start sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json: bool,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance count for the randomized checks (default: the pinned suite
    /// sizes).
    #[arg(long)]
    seeds: Option<usize>,
}

#[derive(Args)]
struct CatalogArgs {
    /// List the built-in generators.
    #[arg(long, conflicts_with = "emit")]
    list: bool,
    /// Emit NAME with the following parameters as a curvature file.
    #[arg(long, num_args = 1.., value_names = ["NAME", "PARAMS"])]
    emit: Option<Vec<String>>,
}

/// Exit codes: 0 success, 1 analysis error, 2 usage or parse error.
const EXIT_ANALYSIS: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerances::from_env();
    match cli.command {
        Command::Classify(args) => {
            let Some(selection) = StarSelection::parse(&args.star) else {
                eprintln!("error: unknown star kind '{}'", args.star);
                return ExitCode::from(EXIT_USAGE);
            };
            run_files(&args.files, args.json, |file| {
                classify_report(file, selection, &tol, args.strict)
            })
        }
        Command::Decompose(args) => run_files(&args.files, args.json, |file| {
            decompose_report(file, &tol, args.strict)
        }),
        Command::CriticalPlanes(args) => {
            let Some(flavor) = Flavor::parse(&args.flavor) else {
                eprintln!("error: unknown flavor '{}'", args.flavor);
                return ExitCode::from(EXIT_USAGE);
            };
            run_files(&args.files, args.json, |file| {
                critical_planes_report(file, flavor, args.starts, args.seed, &tol, args.strict)
            })
        }
        Command::Verify(args) => {
            let cfg = match args.seeds {
                Some(n) => VerifyConfig::scaled(n),
                None => VerifyConfig::default(),
            };
            let outcomes = run_all(&cfg);
            let mut failed = 0;
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                println!("{status}  {:<32} {}", o.name, o.detail);
                if !o.passed {
                    failed += 1;
                }
            }
            println!(
                "{} checks, {} passed, {} failed",
                outcomes.len(),
                outcomes.len() - failed,
                failed
            );
            if failed > 0 {
                ExitCode::from(EXIT_ANALYSIS)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Catalog(args) => run_catalog(args),
    }
}

/// Parses and analyzes the inputs, pipelines in parallel, output in input
/// order. Parse failures exit 2, analysis failures exit 1.
fn run_files<F>(files: &[PathBuf], json: bool, analyze: F) -> ExitCode
where
    F: Fn(&CurvatureFile) -> petrov_core::Result<Report> + Sync + Send,
{
    let mut parsed = Vec::new();
    for path in files {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        };
        match CurvatureFile::parse(&text, &path.display().to_string()) {
            Ok(f) => parsed.push((path.clone(), f)),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let results = batch::map(&parsed, |(path, file)| (path.clone(), analyze(file)));
    let mut code = ExitCode::SUCCESS;
    for (path, result) in results {
        match result {
            Ok(report) => {
                if json {
                    println!("{}", report.to_json_string());
                } else {
                    print!("# {}\n{}", path.display(), report.to_text());
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                code = ExitCode::from(EXIT_ANALYSIS);
            }
        }
    }
    code
}

fn run_catalog(args: CatalogArgs) -> ExitCode {
    if let Some(emit) = args.emit {
        let name = emit[0].as_str();
        let params: Vec<&str> = emit[1..].iter().map(|s| s.as_str()).collect();
        let Some(entry) = catalog::catalog().into_iter().find(|e| e.name == name) else {
            eprintln!("error: no generator named '{name}'");
            return ExitCode::from(EXIT_USAGE);
        };
        match (entry.build)(&params) {
            Ok(tensor) => {
                let mut metadata = vec![("name".to_string(), name.to_string())];
                if !params.is_empty() {
                    metadata.push(("params".to_string(), params.join(" ")));
                }
                let file = CurvatureFile::from_tensor(&tensor, metadata);
                print!("{}", file.serialize());
                ExitCode::SUCCESS
            }
            Err(Error::NotApplicable(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(EXIT_USAGE)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_ANALYSIS)
            }
        }
    } else {
        // Default to listing.
        for entry in catalog::catalog() {
            println!(
                "{:<28} {:<10} {}",
                entry.name, entry.params, entry.description
            );
        }
        ExitCode::SUCCESS
    }
}
