use std::time::Duration;

#[cfg(not(target_arch = "wasm32"))]
pub(crate) use std::time::Instant;
#[cfg(target_arch = "wasm32")]
pub(crate) use web_time::Instant;

/// Names of the timed pipeline steps, in execution order.
pub const STEP_NAMES: [&str; 8] = [
    "local_sort",
    "local_sampling",
    "sample_sort",
    "global_sampling",
    "sample_indexing",
    "prefix_sum",
    "relocation",
    "sublist_sort",
];

/// Wall-clock time spent in each step of one sort. `total` covers the whole
/// call including tagging and orchestration, so it is never smaller than the
/// sum of the steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepTimings {
    pub local_sort: Duration,
    pub local_sampling: Duration,
    pub sample_sort: Duration,
    pub global_sampling: Duration,
    pub sample_indexing: Duration,
    pub prefix_sum: Duration,
    pub relocation: Duration,
    pub sublist_sort: Duration,
    pub total: Duration,
}

impl StepTimings {
    /// Step durations in [`STEP_NAMES`] order.
    pub fn steps(&self) -> [Duration; 8] {
        [
            self.local_sort,
            self.local_sampling,
            self.sample_sort,
            self.global_sampling,
            self.sample_indexing,
            self.prefix_sum,
            self.relocation,
            self.sublist_sort,
        ]
    }

    pub fn step_sum(&self) -> Duration {
        self.steps().iter().sum()
    }
}

pub fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}
