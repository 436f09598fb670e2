use std::process::ExitCode;

use clap::Parser;
use detsort_bench::{run, BenchArgs};

fn main() -> ExitCode {
    let args = BenchArgs::parse();
    let plan = match args.plan() {
        Ok(plan) => plan,
        Err(e) => e.exit(),
    };
    match run(&plan) {
        Ok(summary) if summary.all_ok() => ExitCode::SUCCESS,
        Ok(summary) => {
            let failed = summary.records.iter().filter(|r| !r.is_ok()).count();
            eprintln!("{failed} of {} runs failed", summary.records.len());
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
