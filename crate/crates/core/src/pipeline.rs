//! The nine-step deterministic sample sort.
//!
//! 1. split the buffer into `m` sublists of `sublist_capacity` items,
//! 2. sort every sublist,
//! 3. take `s` equidistant samples from each sorted sublist,
//! 4. sort the `s·m` samples,
//! 5. take `s` equidistant global samples from them,
//! 6. locate the global samples in every sublist, giving bucket sizes `a_ij`,
//! 7. exclusive prefix sum of the `a_ij` in column-major order, giving the
//!    bucket start offsets `l_ij`,
//! 8. move every bucket `A_ij` to `l_ij`, so bucket `B_j` (all `A_ij` for
//!    one `j`) becomes a contiguous range,
//! 9. sort every `B_j`.
//!
//! Every step is a barrier-separated phase on an [`Executor`]. Because the
//! samples are taken from sorted sublists at regular positions, each `B_j`
//! holds at most `2n/s` items as long as all items are distinct, which the
//! tagged mode guarantees.


use thiserror::Error;

use crate::bitonic;
use crate::config::{BucketSortStrategy, ConfigError, SearchSchedule, SortConfig};
use crate::exec::{DisjointSlice, ExecError, Executor};
use crate::item::{tag_keys, Key, SortItem, TaggedItem};
use crate::matrix::{BucketMatrix, OffsetMatrix};
use crate::timing::{Instant, StepTimings};

#[derive(Debug, Error)]
pub enum SortError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("buffer holds {actual} keys but the configuration expects {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("inconsistent relocation plan: {0}")]
    Relocation(String),
}

/// Position of one sublist inside the working buffer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sublist {
    pub index: usize,
    pub start: usize,
    pub len: usize,
}

impl Sublist {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// Step 1. `ceil(n / capacity)` sublists, all full except possibly the last.
pub fn split(n: usize, capacity: usize) -> Vec<Sublist> {
    assert!(capacity > 0, "sublist capacity must be positive");
    (0..n.div_ceil(capacity))
        .map(|index| {
            let start = index * capacity;
            Sublist {
                index,
                start,
                len: capacity.min(n - start),
            }
        })
        .collect()
}

/// Step 2. Sorts every sublist independently, one task per sublist.
pub fn local_sort_all<T: SortItem>(buf: &mut [T], capacity: usize, exec: &Executor) {
    exec.for_each_chunk_mut(buf, capacity, |_, sublist| bitonic::sort_sequential(sublist));
}

/// Step 3 for one sorted sublist of length `L`: the last element of each of
/// `s` near-equal segments, i.e. index `(k + 1)·L/s − 1` for `k < s`. A
/// sublist shorter than `s` contributes all of its items followed by copies
/// of its maximum.
pub fn select_local_samples<T: Copy>(sublist: &[T], s: usize) -> Vec<T> {
    let len = sublist.len();
    assert!(len > 0, "cannot sample an empty sublist");
    if len >= s {
        (0..s).map(|k| sublist[(k + 1) * len / s - 1]).collect()
    } else {
        let max = sublist[len - 1];
        sublist
            .iter()
            .copied()
            .chain(std::iter::repeat(max))
            .take(s)
            .collect()
    }
}

/// Step 3 for all sublists; sample block `i` comes from sublist `i`.
pub fn gather_local_samples<T: SortItem>(buf: &[T], capacity: usize, s: usize, exec: &Executor) -> Vec<T> {
    let sublists = split(buf.len(), capacity);
    let Some(&first) = buf.first() else {
        return Vec::new();
    };
    let mut samples = vec![first; sublists.len() * s];
    exec.for_each_chunk_mut(&mut samples, s, |i, out| {
        out.copy_from_slice(&select_local_samples(&buf[sublists[i].range()], s));
    });
    samples
}

/// Step 4. Parallel bitonic sort of the pooled samples.
pub fn sort_samples<T: SortItem>(samples: &mut [T], exec: &Executor, parallel_threshold: usize) {
    bitonic::sort(samples, exec, parallel_threshold);
}

/// Step 5. With `m = sorted.len() / s`, picks indices `k·m + m − 1`.
pub fn select_global_samples<T: Copy>(sorted: &[T], s: usize) -> Vec<T> {
    assert!(s > 0 && sorted.len().is_multiple_of(s), "sample pool is not a multiple of s");
    let m = sorted.len() / s;
    assert!(m > 0, "empty sample pool");
    (0..s).map(|k| sorted[k * m + m - 1]).collect()
}

/// Global samples (1-based) searched in each bisection round: `s/2`, then
/// `s/4, 3s/4`, and so on, `log2(s)` rounds in total. Sample `s` itself is
/// never searched; the last bucket ends at the sublist end.
pub fn bisection_schedule(s: usize) -> Vec<Vec<usize>> {
    assert!(s.is_power_of_two());
    let rounds = s.trailing_zeros();
    (1..=rounds)
        .map(|r| {
            let half = s >> r;
            (half..s).step_by(2 * half).collect()
        })
        .collect()
}

/// Step 6 for one sorted sublist. Bucket `j` (1-based) holds the items `x`
/// with `g_{j-1} < x <= g_j`; the last bucket additionally takes every
/// `x > g_s`. Returns the `s` bucket sizes.
pub fn sample_index_sublist<T: Ord>(sublist: &[T], globals: &[T], schedule: SearchSchedule) -> Vec<usize> {
    let s = globals.len();
    assert!(s.is_power_of_two(), "global sample count must be a power of two");
    let len = sublist.len();
    // bound[j] = number of items <= g_j; bound[s] is pinned to the end.
    let mut bound = vec![0usize; s + 1];
    bound[s] = len;
    match schedule {
        SearchSchedule::Bisection => {
            let mut half = s / 2;
            while half >= 1 {
                for j in (half..s).step_by(2 * half) {
                    let (lo, hi) = (bound[j - half], bound[j + half]);
                    let sample = &globals[j - 1];
                    bound[j] = lo + sublist[lo..hi].partition_point(|x| x <= sample);
                }
                half /= 2;
            }
        }
        SearchSchedule::Flat => {
            for j in 1..s {
                let sample = &globals[j - 1];
                bound[j] = sublist.partition_point(|x| x <= sample);
            }
        }
    }
    bound.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Step 6 for all sublists, one task per sublist.
pub fn index_all<T: SortItem>(
    buf: &[T],
    capacity: usize,
    globals: &[T],
    schedule: SearchSchedule,
    exec: &Executor,
) -> BucketMatrix {
    let sublists = split(buf.len(), capacity);
    let rows = exec.map(sublists.len(), |i| sample_index_sublist(&buf[sublists[i].range()], globals, schedule));
    if rows.is_empty() {
        BucketMatrix::zeros(0, globals.len())
    } else {
        BucketMatrix::from_rows(rows)
    }
}

/// Step 7. Exclusive prefix sum of the bucket sizes taken column by column
/// (`a_11..a_m1, a_12..a_m2, …`), in three phases: column sums in parallel,
/// a scan of the `s` column sums, then a parallel per-column update.
pub fn compute_offsets(counts: &BucketMatrix, exec: &Executor) -> OffsetMatrix {
    let (m, s) = (counts.rows(), counts.cols());
    if m == 0 || s == 0 {
        return OffsetMatrix::from_column_major(m, s, Vec::new());
    }
    let column_sums = exec.map(s, |j| counts.column_sum(j));

    let mut column_starts = Vec::with_capacity(s);
    let mut running = 0usize;
    for sum in column_sums {
        column_starts.push(running);
        running += sum;
    }

    let mut offsets = vec![0usize; m * s];
    exec.for_each_chunk_mut(&mut offsets, m, |j, column| {
        let mut running = column_starts[j];
        for (i, slot) in column.iter_mut().enumerate() {
            *slot = running;
            running += counts.count(i, j);
        }
    });
    OffsetMatrix::from_column_major(m, s, offsets)
}

/// Start of every `B_j` plus the end of the buffer: `s + 1` entries.
pub fn bucket_boundaries(offsets: &OffsetMatrix, n: usize) -> Vec<usize> {
    let mut bounds: Vec<usize> = (0..offsets.cols()).map(|j| offsets.offset(0, j)).collect();
    bounds.push(n);
    bounds
}

fn check_relocation_plan(
    n: usize,
    capacity: usize,
    counts: &BucketMatrix,
    offsets: &OffsetMatrix,
) -> Result<(), SortError> {
    let sublists = split(n, capacity);
    if counts.rows() != sublists.len() || offsets.rows() != counts.rows() || offsets.cols() != counts.cols() {
        return Err(SortError::Relocation(format!(
            "matrix shapes {}x{} / {}x{} do not match {} sublists",
            counts.rows(),
            counts.cols(),
            offsets.rows(),
            offsets.cols(),
            sublists.len()
        )));
    }
    let mut spans = Vec::with_capacity(counts.rows() * counts.cols());
    for sub in &sublists {
        let row_total: usize = counts.row(sub.index).iter().sum();
        if row_total != sub.len {
            return Err(SortError::Relocation(format!(
                "row {} counts {row_total} items, sublist holds {}",
                sub.index, sub.len
            )));
        }
        for j in 0..counts.cols() {
            let len = counts.count(sub.index, j);
            if len > 0 {
                spans.push((offsets.offset(sub.index, j), len, sub.index, j));
            }
        }
    }
    spans.sort_unstable();
    let mut covered = 0usize;
    for (start, len, i, j) in spans {
        if start < covered {
            return Err(SortError::Relocation(format!(
                "bucket ({i}, {j}) at {start} overlaps the previous bucket ending at {covered}"
            )));
        }
        covered = start + len;
        if covered > n {
            return Err(SortError::Relocation(format!(
                "bucket ({i}, {j}) ends at {covered}, past the buffer end {n}"
            )));
        }
    }
    Ok(())
}

/// Step 8. Copies every bucket `A_ij` to `offsets(i, j)` in a new buffer, one
/// task per sublist. The plan is checked for overlaps and out-of-range
/// destinations before anything is written.
pub fn relocate<T: SortItem>(
    buf: &[T],
    capacity: usize,
    counts: &BucketMatrix,
    offsets: &OffsetMatrix,
    exec: &Executor,
) -> Result<Vec<T>, SortError> {
    let n = buf.len();
    check_relocation_plan(n, capacity, counts, offsets)?;
    let Some(&first) = buf.first() else {
        return Ok(Vec::new());
    };
    let sublists = split(n, capacity);
    let mut out = vec![first; n];
    {
        let checked = cfg!(debug_assertions) && n <= 1 << 16;
        let dest = if checked {
            DisjointSlice::with_write_check(&mut out)
        } else {
            DisjointSlice::new(&mut out)
        };
        exec.parallel_for(sublists.len(), |i| {
            let src = &buf[sublists[i].range()];
            let mut consumed = 0;
            for j in 0..counts.cols() {
                let len = counts.count(i, j);
                // SAFETY: destination ranges were verified pairwise disjoint.
                unsafe { dest.copy_from(offsets.offset(i, j), &src[consumed..consumed + len]) };
                consumed += len;
            }
        });
        if checked {
            assert_eq!(dest.first_unwritten(), None, "relocation left a gap");
        }
    }
    Ok(out)
}

/// Step 9. Sorts every bucket `buf[bounds[j]..bounds[j + 1]]`.
pub fn sublist_sort_all<T: SortItem>(
    buf: &mut [T],
    bounds: &[usize],
    strategy: BucketSortStrategy,
    exec: &Executor,
    parallel_threshold: usize,
) {
    let buckets = bounds.len().saturating_sub(1);
    // Spread a bucket's rounds over the pool only when there are fewer
    // buckets than workers.
    let sequential = Executor::sequential();
    let inner = if buckets < exec.workers() { exec } else { &sequential };
    exec.for_each_segment_mut(buf, bounds, |_, bucket| match strategy {
        BucketSortStrategy::Bitonic => bitonic::sort(bucket, inner, parallel_threshold),
        BucketSortStrategy::Sequential => bucket.sort_unstable(),
    });
}

/// Intermediate structure of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineTrace<T> {
    pub global_samples: Vec<T>,
    pub counts: Option<BucketMatrix>,
    pub offsets: Option<OffsetMatrix>,
    /// Bucket starts plus the buffer end. Buffers smaller than one sublist
    /// skip bucketing and report a single bucket.
    pub boundaries: Vec<usize>,
}

impl<T> PipelineTrace<T> {
    pub fn bucket_sizes(&self) -> Vec<usize> {
        self.boundaries.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_bucket(&self) -> usize {
        self.bucket_sizes().into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct PipelineRun<T> {
    pub items: Vec<T>,
    pub timings: StepTimings,
    pub trace: PipelineTrace<T>,
}

/// Runs steps 1–9 on `items` (config must already be validated).
pub fn run_pipeline<T: SortItem>(mut items: Vec<T>, config: &SortConfig, exec: &Executor) -> PipelineRun<T> {
    let started = Instant::now();
    let n = items.len();
    let capacity = config.sublist_capacity;
    let s = config.samples;
    let threshold = config.parallel_threshold;
    let mut timings = StepTimings::default();

    if n < capacity {
        let t = Instant::now();
        bitonic::sort(&mut items, exec, threshold);
        timings.local_sort = t.elapsed();
        timings.total = started.elapsed();
        return PipelineRun {
            items,
            timings,
            trace: PipelineTrace {
                global_samples: Vec::new(),
                counts: None,
                offsets: None,
                boundaries: vec![0, n],
            },
        };
    }

    let t = Instant::now();
    local_sort_all(&mut items, capacity, exec);
    timings.local_sort = t.elapsed();

    let t = Instant::now();
    let mut samples = gather_local_samples(&items, capacity, s, exec);
    timings.local_sampling = t.elapsed();

    let t = Instant::now();
    sort_samples(&mut samples, exec, threshold);
    timings.sample_sort = t.elapsed();

    let t = Instant::now();
    let global_samples = select_global_samples(&samples, s);
    timings.global_sampling = t.elapsed();

    let t = Instant::now();
    let counts = index_all(&items, capacity, &global_samples, config.search_schedule, exec);
    timings.sample_indexing = t.elapsed();

    let t = Instant::now();
    let offsets = compute_offsets(&counts, exec);
    timings.prefix_sum = t.elapsed();

    let t = Instant::now();
    let mut relocated = relocate(&items, capacity, &counts, &offsets, exec)
        .unwrap_or_else(|e| panic!("pipeline produced an invalid relocation plan: {e}"));
    timings.relocation = t.elapsed();
    drop(items);

    let boundaries = bucket_boundaries(&offsets, n);
    let t = Instant::now();
    sublist_sort_all(&mut relocated, &boundaries, config.bucket_strategy, exec, threshold);
    timings.sublist_sort = t.elapsed();

    timings.total = started.elapsed();
    PipelineRun {
        items: relocated,
        timings,
        trace: PipelineTrace {
            global_samples,
            counts: Some(counts),
            offsets: Some(offsets),
            boundaries,
        },
    }
}

/// Result of [`sort`].
#[derive(Clone, Debug)]
pub struct SortOutput {
    pub keys: Vec<Key>,
    /// Input position of every output key (tagged mode only).
    pub tags: Option<Vec<u64>>,
    pub timings: StepTimings,
    pub trace: PipelineTrace<Key>,
}

fn key_trace<T: SortItem>(trace: PipelineTrace<T>) -> PipelineTrace<Key> {
    PipelineTrace {
        global_samples: trace.global_samples.iter().map(SortItem::key).collect(),
        counts: trace.counts,
        offsets: trace.offsets,
        boundaries: trace.boundaries,
    }
}

/// Sorts `keys` with the deterministic sample sort described by `config`.
///
/// The output is identical for any worker count. In tagged mode (the
/// default) equal keys keep their input order.
pub fn sort(keys: &[Key], config: &SortConfig) -> Result<SortOutput, SortError> {
    config.validate()?;
    if keys.len() != config.n {
        return Err(SortError::LengthMismatch {
            expected: config.n,
            actual: keys.len(),
        });
    }
    let exec = Executor::new(config.workers)?;
    let started = Instant::now();
    let mut output = if config.tagged {
        let run = run_pipeline::<TaggedItem>(tag_keys(keys), config, &exec);
        let (keys, tags) = run.items.iter().map(|item| (item.key, item.tag)).unzip();
        SortOutput {
            keys,
            tags: Some(tags),
            timings: run.timings,
            trace: key_trace(run.trace),
        }
    } else {
        let run = run_pipeline::<Key>(keys.to_vec(), config, &exec);
        SortOutput {
            keys: run.items,
            tags: None,
            timings: run.timings,
            trace: run.trace,
        }
    };
    output.timings.total = started.elapsed();
    Ok(output)
}
