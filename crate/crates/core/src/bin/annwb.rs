use std::path::PathBuf;
use std::process::ExitCode;

use annwb::cli::{run_text, RunOptions, CACHE_ENV};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "annwb", version, about = "Annihilator, local cohomology and sp-filtration workbench")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session file and print its report.
    Run {
        file: PathBuf,
        /// Graded window `a..b` for Čech computations.
        #[arg(long, value_parser = range, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        /// Cohomological range `a..b` for cohomology reports.
        #[arg(long, value_parser = range, allow_hyphen_values = true)]
        hrange: Option<(i64, i64)>,
        #[arg(long)]
        tmax: Option<u32>,
        /// Candidate budget for annihilator searches.
        #[arg(long)]
        budget: Option<usize>,
        /// Reduction step budget per command.
        #[arg(long)]
        steps: Option<usize>,
        /// Gröbner basis cache directory (overrides the environment variable).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

fn range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, found `{s}`"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let Args { cmd: Cmd::Run { file, window, hrange, tmax, budget, steps, cache_dir } } = Args::parse();
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            println!("ERROR = {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let cache_dir = cache_dir.or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let opts = RunOptions { window, hrange, tmax, budget, steps, cache_dir };
    let report = run_text(&text, &opts);
    print!("{}", report.text);
    ExitCode::from(report.exit_code() as u8)
}
