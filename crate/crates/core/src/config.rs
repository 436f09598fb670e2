use thiserror::Error;

pub const DEFAULT_SUBLIST_CAPACITY: usize = 2048;
pub const DEFAULT_SAMPLES: usize = 64;
/// Padded length from which bitonic rounds are spread over the workers.
pub const DEFAULT_PARALLEL_THRESHOLD: usize = 8192;

/// How each final bucket is sorted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BucketSortStrategy {
    #[default]
    Bitonic,
    /// Standard library comparison sort; for measurement only.
    Sequential,
}

/// Order in which the global samples are located inside a sublist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchSchedule {
    /// Middle sample first, then the quarter points inside the two halves,
    /// and so on for log2(s) rounds.
    #[default]
    Bisection,
    /// Every sample searched over the whole sublist.
    Flat,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("sample count {0} must be a power of two >= 2")]
    Samples(usize),
    #[error("sublist capacity {capacity} must be a power of two >= 2 * samples ({samples})")]
    Capacity { capacity: usize, samples: usize },
    #[error("worker count must be at least 1")]
    Workers,
    #[error("parallel threshold must be at least 1")]
    Threshold,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortConfig {
    /// Number of items to sort.
    pub n: usize,
    /// Items per sublist (the local-sort unit).
    pub sublist_capacity: usize,
    /// Samples drawn per sublist, and number of global samples / buckets.
    pub samples: usize,
    pub workers: usize,
    /// Carry `(key, index)` pairs through the pipeline.
    pub tagged: bool,
    pub bucket_strategy: BucketSortStrategy,
    pub search_schedule: SearchSchedule,
    pub parallel_threshold: usize,
}

impl SortConfig {
    pub fn new(n: usize) -> Self {
        SortConfig {
            n,
            sublist_capacity: DEFAULT_SUBLIST_CAPACITY,
            samples: DEFAULT_SAMPLES,
            workers: 1,
            tagged: true,
            bucket_strategy: BucketSortStrategy::default(),
            search_schedule: SearchSchedule::default(),
            parallel_threshold: DEFAULT_PARALLEL_THRESHOLD,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_sublist_capacity(mut self, capacity: usize) -> Self {
        self.sublist_capacity = capacity;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_tagged(mut self, tagged: bool) -> Self {
        self.tagged = tagged;
        self
    }

    pub fn with_bucket_strategy(mut self, strategy: BucketSortStrategy) -> Self {
        self.bucket_strategy = strategy;
        self
    }

    pub fn with_search_schedule(mut self, schedule: SearchSchedule) -> Self {
        self.search_schedule = schedule;
        self
    }

    pub fn with_parallel_threshold(mut self, threshold: usize) -> Self {
        self.parallel_threshold = threshold;
        self
    }

    /// Number of sublists, `ceil(n / sublist_capacity)`.
    pub fn sublist_count(&self) -> usize {
        self.n.div_ceil(self.sublist_capacity)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.samples < 2 || !self.samples.is_power_of_two() {
            return Err(ConfigError::Samples(self.samples));
        }
        let capacity_ok = self.sublist_capacity.is_power_of_two()
            && self
                .samples
                .checked_mul(2)
                .is_some_and(|min| self.sublist_capacity >= min);
        if !capacity_ok {
            return Err(ConfigError::Capacity {
                capacity: self.sublist_capacity,
                samples: self.samples,
            });
        }
        if self.workers == 0 {
            return Err(ConfigError::Workers);
        }
        if self.parallel_threshold == 0 {
            return Err(ConfigError::Threshold);
        }
        Ok(())
    }
}
