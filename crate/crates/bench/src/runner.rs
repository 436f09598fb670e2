use std::path::Path;

use anyhow::Context;
use detsort::{check, generate, keyfile, sort, Distribution, Key, SortConfig};

use crate::args::{Plan, Source};
use crate::record::{BenchRecord, Verdict};

/// Milliseconds rounded to microsecond resolution.
fn millis(d: std::time::Duration) -> f64 {
    (detsort::timing::millis(d) * 1e3).round() / 1e3
}

/// Rough peak footprint per key of a tagged run: input, two tagged
/// buffers, output keys and tags.
const BYTES_PER_KEY: usize = 4 + 2 * 16 + 4 + 8;

enum Input<'a> {
    Generated(Distribution),
    File(&'a str, &'a [Key]),
}

impl Input<'_> {
    fn name(&self) -> String {
        match self {
            Input::Generated(d) => d.name().to_string(),
            Input::File(name, _) => format!("file:{name}"),
        }
    }
}

fn reserve_check(n: usize) -> Result<(), String> {
    let bytes = n
        .checked_mul(BYTES_PER_KEY)
        .ok_or_else(|| format!("{n} keys overflow the address space"))?;
    let mut probe: Vec<u8> = Vec::new();
    probe
        .try_reserve_exact(bytes)
        .map_err(|e| format!("cannot reserve {bytes} bytes: {e}"))
}

struct Cell {
    n: usize,
    s: usize,
    seed: u64,
    trial: usize,
}

fn run_cell(plan: &Plan, input: &Input<'_>, cell: Cell) -> BenchRecord {
    let mut record = BenchRecord {
        n: cell.n,
        s: cell.s,
        sublist_capacity: plan.sublist_capacity,
        distribution: input.name(),
        seed: cell.seed,
        trial: cell.trial,
        workers: plan.workers,
        tagged: plan.tagged,
        local_sort_ms: 0.0,
        local_sampling_ms: 0.0,
        sample_sort_ms: 0.0,
        global_sampling_ms: 0.0,
        sample_indexing_ms: 0.0,
        prefix_sum_ms: 0.0,
        relocation_ms: 0.0,
        sublist_sort_ms: 0.0,
        total_ms: 0.0,
        verified: Verdict::Skipped,
        max_bucket: 0,
        error: String::new(),
    };
    if let Err(e) = reserve_check(cell.n) {
        record.error = e;
        return record;
    }

    let keys = match input {
        Input::Generated(d) => generate(*d, cell.n, cell.seed),
        Input::File(_, keys) => keys.to_vec(),
    };
    let config = SortConfig::new(cell.n)
        .with_samples(cell.s)
        .with_sublist_capacity(plan.sublist_capacity)
        .with_workers(plan.workers)
        .with_tagged(plan.tagged);

    // Timed region: the sort call only.
    let output = match sort(&keys, &config) {
        Ok(out) => out,
        Err(e) => {
            record.error = e.to_string();
            return record;
        }
    };
    let steps = output.timings.steps().map(millis);
    record.local_sort_ms = steps[0];
    record.local_sampling_ms = steps[1];
    record.sample_sort_ms = steps[2];
    record.global_sampling_ms = steps[3];
    record.sample_indexing_ms = steps[4];
    record.prefix_sum_ms = steps[5];
    record.relocation_ms = steps[6];
    record.sublist_sort_ms = steps[7];
    record.total_ms = millis(output.timings.total);
    record.max_bucket = output.trace.max_bucket();

    if plan.verify {
        let report = check(&keys, &output, &config);
        record.verified = if report.passed() { Verdict::Pass } else { Verdict::Fail };
        if !report.passed() {
            eprintln!("verification failed for n={} s={} {}:\n{report}", cell.n, cell.s, record.distribution);
        }
    }
    record
}

/// Executes every cell of the grid, in order distribution, n, s, trial.
/// Cells that cannot run are recorded with an error and the run continues.
pub fn execute(plan: &Plan) -> anyhow::Result<Vec<BenchRecord>> {
    let loaded;
    let inputs: Vec<Input<'_>> = match &plan.source {
        Source::Generated(dists) => dists.iter().map(|d| Input::Generated(*d)).collect(),
        Source::File(path) => {
            loaded = keyfile::read_keys(path).with_context(|| format!("reading {}", path.display()))?;
            let name = Path::new(path).file_name().and_then(|f| f.to_str()).unwrap_or("input");
            vec![Input::File(name, &loaded)]
        }
    };

    let mut records = Vec::new();
    for input in &inputs {
        let ns = match input {
            Input::File(_, keys) => vec![keys.len()],
            Input::Generated(_) => plan.ns.clone(),
        };
        for &n in &ns {
            for &s in &plan.ss {
                // Timing an empty buffer repeatedly tells nothing new.
                let trials = if n == 0 { 1 } else { plan.trials };
                for trial in 0..trials {
                    let seed = plan.seed.wrapping_add(trial as u64);
                    records.push(run_cell(plan, input, Cell { n, s, seed, trial }));
                }
            }
        }
    }
    Ok(records)
}
