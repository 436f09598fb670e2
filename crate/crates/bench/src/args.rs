use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, ValueEnum};
use detsort::exec::WORKERS_ENV;
use detsort::Distribution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// One configuration, repeated `--trials` times.
    Sort,
    /// Total runtime as a function of n (`--n-list`).
    Scale,
    /// Total runtime as a function of s for a fixed n (`--s-list`).
    #[value(name = "sweep-s")]
    SweepS,
    /// Per-step breakdown as a function of n (`--n-list`).
    Steps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "detsort-bench",
    about = "Benchmark and verify the deterministic sample sort",
    version
)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "sort")]
    pub mode: Mode,

    /// Number of keys.
    #[arg(long, conflicts_with_all = ["n_list", "input"])]
    pub n: Option<usize>,

    /// Comma-separated key counts.
    #[arg(long, value_delimiter = ',', conflicts_with = "input")]
    pub n_list: Option<Vec<usize>>,

    /// Samples per sublist / number of buckets.
    #[arg(long, conflicts_with = "s_list")]
    pub s: Option<usize>,

    /// Comma-separated sample counts.
    #[arg(long, value_delimiter = ',')]
    pub s_list: Option<Vec<usize>>,

    #[arg(long, default_value_t = detsort::config::DEFAULT_SUBLIST_CAPACITY)]
    pub sublist_capacity: usize,

    /// Input distribution(s), comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "uniform", conflicts_with = "input")]
    pub dist: Vec<Distribution>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 5)]
    pub trials: usize,

    /// Worker threads; falls back to the environment, then to the number of
    /// available cores.
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    #[arg(long, value_enum, default_value = "on")]
    pub tagged: Switch,

    /// Sort keys from a raw little-endian u32 file instead of generating them.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// CSV destination (standard output when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Directory for per-figure tab-separated plot data.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,

    #[arg(long)]
    pub no_verify: bool,

    /// Write the generated keys of the first distribution, n and seed to
    /// this key file and exit without sorting.
    #[arg(long, conflicts_with = "input")]
    pub dump_keys: Option<PathBuf>,
}

/// Where the keys of every cell come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Generated(Vec<Distribution>),
    File(PathBuf),
}

/// Fully resolved experiment grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub mode: Mode,
    pub ns: Vec<usize>,
    pub ss: Vec<usize>,
    pub sublist_capacity: usize,
    pub source: Source,
    pub seed: u64,
    pub trials: usize,
    pub workers: usize,
    pub tagged: bool,
    pub verify: bool,
    pub output: Option<PathBuf>,
    pub plot_dir: Option<PathBuf>,
    pub dump_keys: Option<PathBuf>,
}

fn usage_error(msg: impl std::fmt::Display) -> clap::Error {
    BenchArgs::command().error(ErrorKind::ArgumentConflict, msg)
}

impl BenchArgs {
    /// Resolves defaults and rejects flag combinations that do not fit the
    /// selected mode.
    pub fn plan(&self) -> Result<Plan, clap::Error> {
        let ns = match (&self.n, &self.n_list, &self.input) {
            (Some(n), None, None) => vec![*n],
            (None, Some(list), None) => list.clone(),
            (None, None, Some(_)) => Vec::new(),
            (None, None, None) => vec![1 << 20],
            _ => return Err(usage_error("--n, --n-list and --input are mutually exclusive")),
        };
        let ss = match (&self.s, &self.s_list) {
            (Some(s), None) => vec![*s],
            (None, Some(list)) => list.clone(),
            _ => vec![detsort::config::DEFAULT_SAMPLES],
        };
        if ss.is_empty() || (self.input.is_none() && ns.is_empty()) {
            return Err(usage_error("empty value list"));
        }
        match self.mode {
            Mode::Sort if ns.len() > 1 || ss.len() > 1 => {
                return Err(usage_error("--mode sort takes a single --n and --s"));
            }
            Mode::Scale | Mode::Steps if ss.len() > 1 => {
                return Err(usage_error("--s-list is only valid with --mode sweep-s"));
            }
            Mode::SweepS if ns.len() > 1 => {
                return Err(usage_error("--mode sweep-s takes a single --n"));
            }
            _ => {}
        }
        if self.trials == 0 {
            return Err(usage_error("--trials must be at least 1"));
        }
        let workers = self
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
        for &s in &ss {
            let cfg = detsort::SortConfig::new(0)
                .with_samples(s)
                .with_sublist_capacity(self.sublist_capacity)
                .with_workers(workers);
            cfg.validate().map_err(usage_error)?;
        }
        let source = match &self.input {
            Some(path) => Source::File(path.clone()),
            None => Source::Generated(self.dist.clone()),
        };
        Ok(Plan {
            mode: self.mode,
            ns,
            ss,
            sublist_capacity: self.sublist_capacity,
            source,
            seed: self.seed,
            trials: self.trials,
            workers,
            tagged: self.tagged == Switch::On,
            verify: !self.no_verify,
            output: self.output.clone(),
            plot_dir: self.plot_dir.clone(),
            dump_keys: self.dump_keys.clone(),
        })
    }
}
