//! Experiment harness for `detsort`: runtime against n, per-step breakdown,
//! and the sample-count sweep, written as CSV plus plot-ready TSV files.

pub mod args;
pub mod plot;
pub mod record;
pub mod runner;

use std::fs::File;
use std::io::{self, BufWriter};

use anyhow::Context;

pub use args::{BenchArgs, Mode, Plan};
pub use record::{BenchRecord, Verdict, CSV_HEADER};

/// Outcome of one harness invocation.
#[derive(Debug)]
pub struct Summary {
    pub records: Vec<BenchRecord>,
    pub plot_files: Vec<std::path::PathBuf>,
}

impl Summary {
    /// Every cell ran and none failed verification.
    pub fn all_ok(&self) -> bool {
        self.records.iter().all(BenchRecord::is_ok)
    }
}

fn dump_keys(plan: &Plan, path: &std::path::Path) -> anyhow::Result<()> {
    let args::Source::Generated(dists) = &plan.source else {
        anyhow::bail!("--dump-keys needs generated input");
    };
    let dist = dists.first().context("no distribution given")?;
    let n = plan.ns.first().copied().context("no key count given")?;
    let keys = detsort::generate(*dist, n, plan.seed);
    detsort::keyfile::write_keys(path, &keys).with_context(|| format!("writing {}", path.display()))
}

/// Runs the grid described by `plan`, writes the CSV and any plot data.
pub fn run(plan: &Plan) -> anyhow::Result<Summary> {
    if let Some(path) = &plan.dump_keys {
        dump_keys(plan, path)?;
        return Ok(Summary {
            records: Vec::new(),
            plot_files: Vec::new(),
        });
    }
    let records = runner::execute(plan)?;
    match &plan.output {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            record::write_csv(BufWriter::new(file), &records)?;
        }
        None => record::write_csv(io::stdout().lock(), &records)?,
    }
    let plot_files = match &plan.plot_dir {
        Some(dir) => plot::emit_plotdata(&records, plan.mode, dir)
            .with_context(|| format!("writing plot data to {}", dir.display()))?,
        None => Vec::new(),
    };
    Ok(Summary { records, plot_files })
}
