//! Bitonic sorting network.
//!
//! The network is the ascending-only form: the first round of every merge
//! stage pairs index `i` with its mirror in the block (`i ^ (block - 1)`),
//! the remaining rounds are ordinary half-cleaners (`i ^ distance`). Every
//! compare-exchange moves the smaller element to the lower index, so a
//! buffer of logical length `L` behaves as if it were padded to the next
//! power of two with `+inf`: a pair whose upper index is `>= L` is a no-op
//! and is simply skipped. Nothing is ever materialized past `L`.

use crate::exec::{DisjointSlice, Executor};

/// One barrier-separated compare-exchange round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Round {
    /// Size of the bitonic merge stage this round belongs to.
    pub stage: usize,
    /// Size of the independent blocks of this round; pairs never cross them.
    pub block: usize,
    /// Mirror round (first round of a stage) rather than a half-cleaner.
    pub flip: bool,
}

impl Round {
    /// Partner-index mask: the pair of `i` is `i ^ mask`.
    pub fn mask(&self) -> usize {
        if self.flip {
            self.block - 1
        } else {
            self.block / 2
        }
    }

    /// The `p`-th compare-exchange pair `(low, high)` of this round,
    /// `p < padded / 2`.
    #[inline]
    pub fn pair(&self, p: usize) -> (usize, usize) {
        let half = self.block / 2;
        let base = (p / half) * self.block;
        let t = p % half;
        let low = base + t;
        let high = if self.flip {
            base + self.block - 1 - t
        } else {
            base + half + t
        };
        (low, high)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkPlan {
    pub len: usize,
    pub padded: usize,
    pub rounds: Vec<Round>,
}

impl NetworkPlan {
    /// Compare-exchanges whose both ends fall inside the logical length.
    pub fn live_compare_exchanges(&self) -> u64 {
        self.rounds
            .iter()
            .map(|r| {
                (0..self.padded / 2)
                    .filter(|&p| r.pair(p).1 < self.len)
                    .count() as u64
            })
            .sum()
    }
}

pub fn padded_len(len: usize) -> usize {
    len.max(1).next_power_of_two()
}

fn rounds(padded: usize) -> impl Iterator<Item = Round> {
    let stages = std::iter::successors(Some(2usize), |&k| Some(k * 2)).take_while(move |&k| k <= padded);
    stages.flat_map(|stage| {
        let flip = std::iter::once(Round { stage, block: stage, flip: true });
        let cleaners = std::iter::successors(Some(stage / 2), |&b| Some(b / 2))
            .take_while(|&b| b >= 2)
            .map(move |block| Round { stage, block, flip: false });
        flip.chain(cleaners)
    })
}

pub fn plan(len: usize) -> NetworkPlan {
    let padded = padded_len(len);
    NetworkPlan {
        len,
        padded,
        rounds: rounds(padded).collect(),
    }
}

#[inline(always)]
fn compare_exchange<T: Copy, F: Fn(&T, &T) -> bool>(x: &mut T, y: &mut T, is_less: &F) {
    let (a, b) = (*x, *y);
    let swap = is_less(&b, &a);
    *x = if swap { b } else { a };
    *y = if swap { a } else { b };
}

fn run_round_sequential<T: Copy, F: Fn(&T, &T) -> bool>(buf: &mut [T], round: Round, is_less: &F) {
    let len = buf.len();
    let half = round.block / 2;
    for block in buf.chunks_mut(round.block) {
        if block.len() <= half {
            // Partners of the low half are all virtual.
            continue;
        }
        let (lo, hi) = block.split_at_mut(half);
        if round.flip {
            let skip = half - hi.len();
            for (x, y) in lo[skip..].iter_mut().zip(hi.iter_mut().rev()) {
                compare_exchange(x, y, is_less);
            }
        } else {
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                compare_exchange(x, y, is_less);
            }
        }
    }
    debug_assert!(buf.len() == len);
}

fn run_round_parallel<T, F>(buf: &mut [T], padded: usize, round: Round, is_less: &F, exec: &Executor)
where
    T: Copy + Send,
    F: Fn(&T, &T) -> bool + Sync,
{
    let len = buf.len();
    let check = cfg!(debug_assertions) && padded <= 4096;
    let view = if check {
        DisjointSlice::with_write_check(buf)
    } else {
        DisjointSlice::new(buf)
    };
    exec.parallel_for_ranges(padded / 2, |range| {
        for p in range.iter() {
            let (i, j) = round.pair(p);
            if j >= len {
                continue;
            }
            view.claim(i);
            view.claim(j);
            // SAFETY: pairs of one round are disjoint and each pair belongs
            // to exactly one task range.
            unsafe {
                let (a, b) = (view.read(i), view.read(j));
                if is_less(&b, &a) {
                    view.write_claimed(i, b);
                    view.write_claimed(j, a);
                }
            }
        }
    });
}

/// Sorts `buf` in place under the strict order `is_less`.
///
/// Rounds are spread over `exec` when it has more than one worker and the
/// padded length is at least `parallel_threshold`; otherwise the network
/// runs sequentially on the calling thread.
pub fn sort_by<T, F>(buf: &mut [T], is_less: &F, exec: &Executor, parallel_threshold: usize)
where
    T: Copy + Send,
    F: Fn(&T, &T) -> bool + Sync,
{
    let padded = padded_len(buf.len());
    if buf.len() < 2 {
        return;
    }
    if exec.is_parallel() && padded >= parallel_threshold {
        for round in rounds(padded) {
            run_round_parallel(buf, padded, round, is_less, exec);
        }
    } else {
        for round in rounds(padded) {
            run_round_sequential(buf, round, is_less);
        }
    }
}

pub fn sort<T>(buf: &mut [T], exec: &Executor, parallel_threshold: usize)
where
    T: Copy + Ord + Send,
{
    sort_by(buf, &|a: &T, b: &T| a < b, exec, parallel_threshold);
}

/// Single-threaded network sort.
pub fn sort_sequential<T: Copy + Ord + Send>(buf: &mut [T]) {
    sort(buf, &Executor::sequential(), usize::MAX);
}
