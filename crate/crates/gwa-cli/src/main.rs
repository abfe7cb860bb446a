//! Batch front end: read a job file describing one algebra and a list of
//! analyses, run them, and emit a single JSON report on standard output.
//! Exit codes: 0 on success, 1 when some task failed, 2 on parse errors.

mod diagram;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use job::{JobSpec, RunOptions};

#[derive(Parser, Debug)]
#[command(
    name = "gwa",
    about = "Analyze free modules over generalized Weyl algebras F[h](sigma, a)"
)]
struct Args {
    /// Path to the JSON job file.
    #[arg(long)]
    job: PathBuf,

    /// Seed for the sampled oracle checks recorded in the report.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Directory to write diagram text files into.
    #[arg(long)]
    diagrams_dir: Option<PathBuf>,

    /// Guard on the number of irreducible factors of `a` for exhaustive
    /// divisor enumeration.
    #[arg(long, default_value_t = 16)]
    max_divisor_degree: u64,

    /// Color diagram markers with ANSI escapes.
    #[arg(long, default_value_t = false)]
    ansi: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.job) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {:?}: {err}", args.job);
            return ExitCode::from(2);
        }
    };
    let spec: JobSpec = match serde_json::from_str(&text) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("error: invalid job file: {err}");
            return ExitCode::from(2);
        }
    };
    let options = RunOptions {
        seed: args.seed,
        max_divisor_degree: args.max_divisor_degree,
        ansi: args.ansi,
        diagrams_dir: args.diagrams_dir,
    };
    let outcome = match job::run(&spec, &options) {
        Ok(outcome) => outcome,
        Err(err) => {
            // the algebra description itself was unusable
            eprintln!("error: invalid algebra description: {err}");
            return ExitCode::from(2);
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.report).expect("report serializes")
    );
    if outcome.failed_tasks > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
