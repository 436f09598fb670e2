//! Deterministic sample sort.
//!
//! A buffer is cut into fixed-size sublists that are sorted locally;
//! regularly spaced samples of the sorted sublists select `s` global
//! splitters; every sublist is partitioned by the splitters, the pieces are
//! moved to offsets computed by a column-major prefix sum, and the resulting
//! `s` buckets are sorted independently. Bucket sizes are bounded by `2n/s`
//! regardless of the input distribution.
//!
//! ```
//! use detsort::{sort, SortConfig};
//!
//! let keys = vec![5, 3, 3, 1];
//! let out = sort(&keys, &SortConfig::new(keys.len())).unwrap();
//! assert_eq!(out.keys, vec![1, 3, 3, 5]);
//! ```

pub mod bitonic;
pub mod config;
pub mod datagen;
pub mod exec;
pub mod item;
pub mod keyfile;
pub mod matrix;
pub mod pipeline;
pub mod timing;
pub mod verify;

pub use config::{BucketSortStrategy, ConfigError, SearchSchedule, SortConfig};
pub use datagen::{generate, Distribution};
pub use exec::{Executor, TaskRange};
pub use item::{Key, SortItem, TaggedItem};
pub use matrix::{BucketMatrix, OffsetMatrix};
pub use pipeline::{run_pipeline, sort, PipelineRun, PipelineTrace, SortError, SortOutput};
pub use timing::{StepTimings, STEP_NAMES};
pub use verify::{check, oracle_sort, VerifyReport};
