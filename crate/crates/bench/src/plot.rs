//! Tab-separated plot data, one file per figure.
//!
//! | file          | columns                                                        |
//! |---------------|----------------------------------------------------------------|
//! | `scaling.tsv` | distribution, n, mean_total_ms, runs                           |
//! | `sweep_s.tsv` | distribution, n, s, mean_total_ms, runs                        |
//! | `steps.tsv`   | distribution, n, one `<step>_ms` column per step, total_ms, runs |
//!
//! Means are taken over the runs of a configuration that completed and did
//! not fail verification.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use detsort::STEP_NAMES;

use crate::args::Mode;
use crate::record::BenchRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Scaling,
    SweepS,
    Steps,
}

impl Figure {
    pub fn file_name(&self) -> &'static str {
        match self {
            Figure::Scaling => "scaling.tsv",
            Figure::SweepS => "sweep_s.tsv",
            Figure::Steps => "steps.tsv",
        }
    }

    pub fn for_mode(mode: Mode) -> &'static [Figure] {
        match mode {
            Mode::Sort => &[],
            Mode::Scale => &[Figure::Scaling],
            Mode::SweepS => &[Figure::SweepS],
            Mode::Steps => &[Figure::Steps, Figure::Scaling],
        }
    }

    pub fn header(&self) -> Vec<String> {
        let fixed = |cols: &[&str]| cols.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        match self {
            Figure::Scaling => fixed(&["distribution", "n", "mean_total_ms", "runs"]),
            Figure::SweepS => fixed(&["distribution", "n", "s", "mean_total_ms", "runs"]),
            Figure::Steps => {
                let mut cols = fixed(&["distribution", "n"]);
                cols.extend(STEP_NAMES.iter().map(|s| format!("{s}_ms")));
                cols.extend(fixed(&["total_ms", "runs"]));
                cols
            }
        }
    }
}

type GroupKey = (String, usize, usize);

/// Mean per-step and total milliseconds per (distribution, n, s).
fn group_means(records: &[BenchRecord]) -> BTreeMap<GroupKey, ([f64; 8], f64, usize)> {
    let mut groups: BTreeMap<GroupKey, ([f64; 8], f64, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        let entry = groups
            .entry((r.distribution.clone(), r.n, r.s))
            .or_insert(([0.0; 8], 0.0, 0));
        for (acc, v) in entry.0.iter_mut().zip(r.step_ms()) {
            *acc += v;
        }
        entry.1 += r.total_ms;
        entry.2 += 1;
    }
    for (steps, total, runs) in groups.values_mut() {
        let k = *runs as f64;
        steps.iter_mut().for_each(|v| *v /= k);
        *total /= k;
    }
    groups
}

pub fn render(figure: Figure, records: &[BenchRecord]) -> String {
    let mut out = figure.header().join("\t");
    out.push('\n');
    for ((dist, n, s), (steps, total, runs)) in group_means(records) {
        let row: Vec<String> = match figure {
            Figure::Scaling => vec![dist, n.to_string(), format!("{total:.4}"), runs.to_string()],
            Figure::SweepS => vec![
                dist,
                n.to_string(),
                s.to_string(),
                format!("{total:.4}"),
                runs.to_string(),
            ],
            Figure::Steps => {
                let mut row = vec![dist, n.to_string()];
                row.extend(steps.iter().map(|v| format!("{v:.4}")));
                row.push(format!("{total:.4}"));
                row.push(runs.to_string());
                row
            }
        };
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

/// Writes the figures belonging to `mode` into `dir`.
pub fn emit_plotdata(records: &[BenchRecord], mode: Mode, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    Figure::for_mode(mode)
        .iter()
        .map(|figure| {
            let path = dir.join(figure.file_name());
            fs::write(&path, render(*figure, records))?;
            Ok(path)
        })
        .collect()
}
