use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

mod commands;

/// Run settings shared by all subcommands. Each field can be set through
/// the environment; flags take precedence.
#[derive(Args, Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Seed for every randomized search.
    #[arg(long, global = true, env = "MWKNOT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Attempts allowed for center and specimen searches.
    #[arg(long = "retries", global = true, env = "MWKNOT_RETRIES", default_value_t = 64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub retry_budget: u64,
    /// Cells per side of each hyperbolicity raster chart.
    #[arg(long = "raster", global = true, env = "MWKNOT_RASTER", default_value_t = 256,
          value_parser = clap::value_parser!(u64).range(2..))]
    pub raster_resolution: u64,
    /// Largest crossing number for state-sum invariants.
    #[arg(long = "budget", global = true, env = "MWKNOT_BUDGET", default_value_t = 24,
          value_parser = clap::value_parser!(u64).range(1..=40))]
    pub invariant_budget: u64,
    /// Directory for SVG output.
    #[arg(long, global = true, env = "MWKNOT_OUTPUT_DIR", default_value = ".")]
    pub output_dir: PathBuf,
}

#[derive(Parser)]
#[command(name = "mwknot", version, about = "Exact tools for real rational space curves and their knot diagrams")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smoothness certificate and torsion sign profile.
    Inspect { curve: PathBuf },
    /// Encomplexed writhe from one or more centers.
    Writhe {
        curve: PathBuf,
        /// Projection center as comma-separated rationals.
        #[arg(long)]
        center: Option<String>,
        /// Number of random centers when no center is given.
        #[arg(long, default_value_t = 1)]
        centers: usize,
        /// Exit 1 unless |w| equals (d-1)(d-2)/2.
        #[arg(long)]
        expect_mw: bool,
    },
    /// Plane projection: double points and diagram SVG.
    Project {
        curve: PathBuf,
        #[arg(long)]
        center: Option<String>,
        #[arg(long, default_value = "projection.svg")]
        svg: String,
    },
    /// Hyperbolicity raster of a projection; optionally the hyperbolic lines.
    Hyp {
        curve: PathBuf,
        #[arg(long)]
        center: Option<String>,
        /// Also search for the two hyperbolic lines and their winding classes.
        #[arg(long)]
        lines: bool,
        /// Omit the raster rows from the JSON.
        #[arg(long)]
        summary_only: bool,
        #[arg(long, default_value = "hyp.svg")]
        svg: String,
    },
    /// Viewpoint region of given or random points.
    Classify {
        curve: PathBuf,
        #[arg(long)]
        point: Vec<String>,
        /// Number of random viewpoints when no point is given.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Torus link identification through the lifted diagram.
    Identify {
        curve: PathBuf,
        #[arg(long)]
        center: Option<String>,
    },
    /// Search for a verified maximally writhed specimen.
    Generate {
        #[arg(long)]
        degree: usize,
        /// Random centers used for verification.
        #[arg(long, default_value_t = 20)]
        centers: usize,
    },
    /// Verify or rewrite the shipped specimen corpus.
    Corpus {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
        /// Regenerate the specimen files instead of checking them.
        #[arg(long)]
        write: bool,
        #[arg(long, default_value_t = 20)]
        centers: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
        degrees: Vec<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Inspect { .. } => "inspect",
            Command::Writhe { .. } => "writhe",
            Command::Project { .. } => "project",
            Command::Hyp { .. } => "hyp",
            Command::Classify { .. } => "classify",
            Command::Identify { .. } => "identify",
            Command::Generate { .. } => "generate",
            Command::Corpus { .. } => "corpus",
        }
    }
}

/// Result of a subcommand: JSON payload, human summary, exit code.
pub struct Outcome {
    pub result: Value,
    pub summary: String,
    pub code: u8,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, kind: "input", message: message.into() }
    }
}

impl From<mwknot::Error> for Failure {
    fn from(e: mwknot::Error) -> Failure {
        use mwknot::Error as E;
        let (code, kind) = match &e {
            E::Parse(_)
            | E::InvalidParameters(_)
            | E::NotSmooth(_)
            | E::NotImmersed(_)
            | E::SelfIntersecting(_)
            | E::DegenerateParametrization(_)
            | E::ZeroPolynomial
            | E::PointOnCurve => (2, "input"),
            E::SearchFailed(_) => (3, "budget"),
            _ => (1, "verification"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let config = cli.config.clone();
    let base = json!({ "schema": 1, "command": name, "config": config });
    let (mut out, code) = match commands::run(cli.command, &cli.config) {
        Ok(o) => {
            eprintln!("{}", o.summary);
            let mut b = base;
            b["result"] = o.result;
            (b, o.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            let mut b = base;
            b["error"] = json!({ "kind": f.kind, "message": f.message });
            (b, f.code)
        }
    };
    out["exit_code"] = json!(code);
    let body = serde_json::to_string_pretty(&out).expect("report serializes");
    // a closed pipe is not an error of the run
    let _ = writeln!(std::io::stdout(), "{body}");
    ExitCode::from(code)
}
