//! Fork-join execution backend.
//!
//! Every parallel phase of the pipeline goes through [`Executor`]: a domain
//! of `0..len` is cut into at most `workers` contiguous [`TaskRange`]s
//! (`len / workers` each, remainder to the last), one task runs per range,
//! and the call returns only once every task has finished. Tasks only write
//! to ranges handed to them up front, so results never depend on scheduling.

use std::marker::PhantomData;
use std::sync::atomic::{AtomicBool, Ordering};

use thiserror::Error;

/// Environment variable consulted by the command-line tools for the worker
/// count when no flag is given.
pub const WORKERS_ENV: &str = "DETSORT_WORKERS";

#[derive(Debug, Error)]
pub enum ExecError {
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("failed to start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Half-open index interval owned by one task of a phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaskRange {
    pub start: usize,
    pub end: usize,
}

impl TaskRange {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn iter(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

/// Static partition of `0..domain` into `min(workers, domain)` ranges.
pub fn partition(domain: usize, workers: usize) -> Vec<TaskRange> {
    let tasks = workers.max(1).min(domain);
    if tasks == 0 {
        return Vec::new();
    }
    let base = domain / tasks;
    (0..tasks)
        .map(|t| TaskRange {
            start: t * base,
            end: if t + 1 == tasks { domain } else { (t + 1) * base },
        })
        .collect()
}

pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok()
}

pub struct Executor {
    workers: usize,
    pool: Option<rayon::ThreadPool>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor").field("workers", &self.workers).finish()
    }
}

impl Executor {
    /// A pool of `workers` threads. One worker runs everything inline on the
    /// calling thread and never starts a pool.
    pub fn new(workers: usize) -> Result<Self, ExecError> {
        if workers == 0 {
            return Err(ExecError::NoWorkers);
        }
        let pool = if workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(|i| format!("detsort-worker-{i}"))
                    .build()?,
            )
        } else {
            None
        };
        Ok(Executor { workers, pool })
    }

    pub fn sequential() -> Self {
        Executor { workers: 1, pool: None }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn is_parallel(&self) -> bool {
        self.pool.is_some()
    }

    pub fn partition(&self, domain: usize) -> Vec<TaskRange> {
        partition(domain, self.workers)
    }

    /// Runs `body` once per task range and waits for all of them. A panic in
    /// any task is re-raised after the remaining tasks have finished.
    pub fn parallel_for_ranges<F>(&self, domain: usize, body: F)
    where
        F: Fn(TaskRange) + Sync,
    {
        let ranges = self.partition(domain);
        match &self.pool {
            Some(pool) if ranges.len() > 1 => pool.scope(|scope| {
                let body = &body;
                for range in ranges {
                    scope.spawn(move |_| body(range));
                }
            }),
            _ => ranges.into_iter().for_each(body),
        }
    }

    /// Invokes `body(i)` exactly once for every `i < domain`. With a single
    /// worker the order is `0..domain`.
    pub fn parallel_for<F>(&self, domain: usize, body: F)
    where
        F: Fn(usize) + Sync,
    {
        self.parallel_for_ranges(domain, |range| range.iter().for_each(&body));
    }

    /// Collects `f(i)` for `i < domain` in index order.
    pub fn map<R, F>(&self, domain: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        let mut out: Vec<Option<R>> = (0..domain).map(|_| None).collect();
        self.for_each_chunk_mut(&mut out, 1, |i, slot| slot[0] = Some(f(i)));
        out.into_iter()
            .map(|r| r.expect("every map slot is filled"))
            .collect()
    }

    /// Cuts `buf` into consecutive chunks of `chunk_len` (the last may be
    /// short) and calls `f(chunk_index, chunk)` for each.
    pub fn for_each_chunk_mut<T, F>(&self, buf: &mut [T], chunk_len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync,
    {
        assert!(chunk_len > 0, "chunk length must be positive");
        let len = buf.len();
        let chunks = len.div_ceil(chunk_len);
        let bounds: Vec<usize> = (0..=chunks).map(|c| (c * chunk_len).min(len)).collect();
        self.for_each_segment_mut(buf, &bounds, f);
    }

    /// Calls `f(j, &mut buf[bounds[j]..bounds[j + 1]])` for every segment.
    /// `bounds` must be non-decreasing and end at `buf.len()`.
    pub fn for_each_segment_mut<T, F>(&self, buf: &mut [T], bounds: &[usize], f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync,
    {
        let segments = bounds.len().saturating_sub(1);
        if segments == 0 {
            return;
        }
        assert_eq!(bounds[0], 0, "segments must start at 0");
        assert_eq!(bounds[segments], buf.len(), "segments must cover the buffer");
        assert!(bounds.windows(2).all(|w| w[0] <= w[1]), "segment bounds must be sorted");

        let ranges = self.partition(segments);
        let mut pieces = Vec::with_capacity(ranges.len());
        let mut rest = buf;
        let mut consumed = 0;
        for range in ranges {
            let (piece, tail) = rest.split_at_mut(bounds[range.end] - consumed);
            consumed = bounds[range.end];
            rest = tail;
            pieces.push((range, piece));
        }

        let run = |range: TaskRange, piece: &mut [T]| {
            let base = bounds[range.start];
            for j in range.iter() {
                f(j, &mut piece[bounds[j] - base..bounds[j + 1] - base]);
            }
        };
        match &self.pool {
            Some(pool) if pieces.len() > 1 => pool.scope(|scope| {
                let run = &run;
                for (range, piece) in pieces {
                    scope.spawn(move |_| run(range, piece));
                }
            }),
            _ => {
                for (range, piece) in pieces {
                    run(range, piece);
                }
            }
        }
    }
}

/// Shared view of a mutable slice for phases whose tasks write scattered but
/// pairwise disjoint index sets (compare-exchange rounds, bucket relocation).
///
/// Optionally records every write and panics on a second write to the same
/// index within the lifetime of the view.
pub struct DisjointSlice<'a, T> {
    ptr: *mut T,
    len: usize,
    written: Option<Vec<AtomicBool>>,
    _marker: PhantomData<&'a mut [T]>,
}

unsafe impl<T: Send> Send for DisjointSlice<'_, T> {}
unsafe impl<T: Send> Sync for DisjointSlice<'_, T> {}

impl<'a, T: Copy> DisjointSlice<'a, T> {
    pub fn new(slice: &'a mut [T]) -> Self {
        DisjointSlice {
            ptr: slice.as_mut_ptr(),
            len: slice.len(),
            written: None,
            _marker: PhantomData,
        }
    }

    /// Same as [`DisjointSlice::new`] with the write-set checker enabled.
    pub fn with_write_check(slice: &'a mut [T]) -> Self {
        let len = slice.len();
        let mut view = Self::new(slice);
        view.written = Some((0..len).map(|_| AtomicBool::new(false)).collect());
        view
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Records ownership of `i` for the checker without writing.
    #[inline]
    pub fn claim(&self, i: usize) {
        if let Some(written) = &self.written {
            assert!(
                !written[i].swap(true, Ordering::Relaxed),
                "index {i} touched by two tasks in one phase"
            );
        }
    }

    /// # Safety
    /// No other task may write index `i` during the current phase.
    #[inline]
    pub unsafe fn read(&self, i: usize) -> T {
        assert!(i < self.len, "index {i} out of bounds ({})", self.len);
        unsafe { *self.ptr.add(i) }
    }

    /// # Safety
    /// Index `i` must belong to the calling task alone for the current phase.
    #[inline]
    pub unsafe fn write(&self, i: usize, value: T) {
        assert!(i < self.len, "index {i} out of bounds ({})", self.len);
        self.claim(i);
        unsafe { *self.ptr.add(i) = value }
    }

    /// Same as `write` but without recording the index in the checker; for
    /// callers that already claimed it.
    ///
    /// # Safety
    /// As for [`DisjointSlice::write`].
    #[inline]
    pub unsafe fn write_claimed(&self, i: usize, value: T) {
        assert!(i < self.len, "index {i} out of bounds ({})", self.len);
        unsafe { *self.ptr.add(i) = value }
    }

    /// Copies `src` to `start..start + src.len()`.
    ///
    /// # Safety
    /// The destination range must belong to the calling task alone for the
    /// current phase.
    #[inline]
    pub unsafe fn copy_from(&self, start: usize, src: &[T]) {
        let end = start.checked_add(src.len()).expect("range overflow");
        assert!(end <= self.len, "range {start}..{end} out of bounds ({})", self.len);
        if self.written.is_some() {
            (start..end).for_each(|i| self.claim(i));
        }
        unsafe { std::ptr::copy_nonoverlapping(src.as_ptr(), self.ptr.add(start), src.len()) }
    }

    /// First index never written, when the checker is enabled.
    pub fn first_unwritten(&self) -> Option<usize> {
        self.written
            .as_ref()?
            .iter()
            .position(|w| !w.load(Ordering::Relaxed))
    }
}
