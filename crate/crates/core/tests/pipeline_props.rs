use detsort::bitonic;
use detsort::exec::Executor;
use detsort::pipeline::{self, compute_offsets};
use detsort::verify::Check;
use detsort::{check, generate, oracle_sort, sort, BucketMatrix, Distribution, SearchSchedule, SortConfig};
use proptest::prelude::*;

/// Sequential exclusive scan over a_11..a_m1, a_12..a_m2, … (column-major).
fn sequential_offsets(a: &BucketMatrix) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.rows() * a.cols());
    let mut running = 0;
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            out.push(running);
            running += a.count(i, j);
        }
    }
    out
}

fn config_strategy() -> impl Strategy<Value = (usize, usize)> {
    // (log2 samples, extra doublings of capacity over 2s)
    (1usize..=4, 0usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sorts_any_input_stably((log_s, extra) in config_strategy(),
                              keys in proptest::collection::vec(0u32..50, 0..700),
                              workers in 1usize..4) {
        let s = 1 << log_s;
        let cfg = SortConfig::new(keys.len())
            .with_samples(s)
            .with_sublist_capacity((2 * s) << extra)
            .with_workers(workers);
        let out = sort(&keys, &cfg).unwrap();
        prop_assert_eq!(&out.keys, &oracle_sort(&keys));
        let report = check(&keys, &out, &cfg);
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn bucket_bound_holds_for_ragged_lengths((log_s, extra) in config_strategy(),
                                             n in 1usize..3000,
                                             seed in 0u64..1000,
                                             dist in 0usize..8) {
        let s = 1 << log_s;
        let capacity = (2 * s) << extra;
        let keys = generate(Distribution::ALL[dist], n, seed);
        let cfg = SortConfig::new(n).with_samples(s).with_sublist_capacity(capacity);
        let out = sort(&keys, &cfg).unwrap();
        if n >= capacity {
            prop_assert!(out.trace.max_bucket() * s <= 2 * n,
                "max bucket {} exceeds 2n/s for n={} s={} cap={}", out.trace.max_bucket(), n, s, capacity);
        }
        prop_assert_eq!(out.keys, oracle_sort(&keys));
    }

    #[test]
    fn three_phase_scan_matches_sequential(m in 1usize..64, s in 1usize..32,
                                           cells in proptest::collection::vec(0usize..100, 64 * 32),
                                           workers in 1usize..5) {
        let rows: Vec<Vec<usize>> = (0..m).map(|i| cells[i * s..(i + 1) * s].to_vec()).collect();
        let a = BucketMatrix::from_rows(rows);
        let l = compute_offsets(&a, &Executor::new(workers).unwrap());
        prop_assert_eq!(l.as_column_major(), &sequential_offsets(&a)[..]);
        let last = l.offset(m - 1, s - 1) + a.count(m - 1, s - 1);
        prop_assert_eq!(last, a.total());
    }

    #[test]
    fn bisection_and_flat_agree(mut sub in proptest::collection::vec(0u32..40, 1..200),
                                mut globals in proptest::collection::vec(0u32..40, 8)) {
        sub.sort();
        globals.sort();
        let bis = pipeline::sample_index_sublist(&sub, &globals, SearchSchedule::Bisection);
        let flat = pipeline::sample_index_sublist(&sub, &globals, SearchSchedule::Flat);
        prop_assert_eq!(&bis, &flat);
        // Brute-force linear partition.
        let mut brute = vec![0usize; 8];
        for x in &sub {
            brute[globals.iter().position(|g| x <= g).unwrap_or(7)] += 1;
        }
        prop_assert_eq!(bis, brute);
    }

    #[test]
    fn bitonic_matches_oracle(keys in proptest::collection::vec(any::<u32>(), 0..600)) {
        let mut v = keys.clone();
        bitonic::sort_sequential(&mut v);
        prop_assert_eq!(v, oracle_sort(&keys));
    }
}

#[test]
fn uniform_64k_matches_reference() {
    let keys = generate(Distribution::Uniform, 65536, 0);
    let cfg = SortConfig::new(keys.len());
    let out = sort(&keys, &cfg).unwrap();
    assert_eq!(out.keys, oracle_sort(&keys));
    let sizes = out.trace.bucket_sizes();
    assert_eq!(sizes.len(), 64);
    assert_eq!(sizes.iter().sum::<usize>(), 65536);
    assert!(sizes.iter().all(|&b| b * 64 <= 2 * 65536));
}

#[test]
fn relocation_destinations_match_counts() {
    let exec = Executor::new(2).unwrap();
    for seed in 0..3 {
        let keys = generate(Distribution::Zipf, 65536, seed);
        let mut items = detsort::item::tag_keys(&keys);
        pipeline::local_sort_all(&mut items, 2048, &exec);
        let mut samples = pipeline::gather_local_samples(&items, 2048, 64, &exec);
        pipeline::sort_samples(&mut samples, &exec, 8192);
        let globals = pipeline::select_global_samples(&samples, 64);
        let counts = pipeline::index_all(&items, 2048, &globals, SearchSchedule::Bisection, &exec);
        let offsets = compute_offsets(&counts, &exec);
        let out = pipeline::relocate(&items, 2048, &counts, &offsets, &exec).unwrap();
        for i in 0..counts.rows() {
            let src = &items[i * 2048..(i + 1) * 2048];
            let mut consumed = 0;
            for j in 0..64 {
                let (l, a) = (offsets.offset(i, j), counts.count(i, j));
                assert_eq!(&out[l..l + a], &src[consumed..consumed + a]);
                consumed += a;
            }
        }
        let bounds = pipeline::bucket_boundaries(&offsets, keys.len());
        for j in 0..64 {
            let bucket = &out[bounds[j]..bounds[j + 1]];
            assert!(bucket.iter().all(|x| *x <= globals[j]));
            if j > 0 {
                assert!(bucket.iter().all(|x| *x > globals[j - 1]));
            }
        }
    }
}

#[test]
fn identical_across_workers_and_runs() {
    let keys = generate(Distribution::Staggered, 100_000, 4);
    let base = sort(&keys, &SortConfig::new(keys.len())).unwrap();
    for workers in [1, 2, 8] {
        for _ in 0..2 {
            let cfg = SortConfig::new(keys.len()).with_workers(workers).with_parallel_threshold(1024);
            let out = sort(&keys, &cfg).unwrap();
            assert_eq!(out.keys, base.keys);
            assert_eq!(out.tags, base.tags);
            assert_eq!(out.trace, base.trace);
        }
    }
}

#[test]
fn step_timings_are_consistent() {
    let keys = generate(Distribution::Uniform, 1 << 16, 1);
    let out = sort(&keys, &SortConfig::new(keys.len())).unwrap();
    assert!(out.timings.step_sum() <= out.timings.total);
}

#[test]
fn single_sublist_path_reports_one_bucket() {
    let keys = generate(Distribution::Reverse, 1000, 1);
    let cfg = SortConfig::new(1000);
    let out = sort(&keys, &cfg).unwrap();
    assert_eq!(out.trace.boundaries, vec![0, 1000]);
    assert!(out.trace.counts.is_none());
    assert_eq!(check(&keys, &out, &cfg).bucket_check, Check::NotApplicable);
}

#[test]
fn bucket_bound_exhaustive_small_configs() {
    for (s, capacity) in [(2usize, 4usize), (4, 8), (4, 16), (8, 16)] {
        for n in capacity..=40 * capacity {
            for seed in 0..4 {
                for dist in Distribution::ALL {
                    let keys = generate(dist, n, seed);
                    let cfg = SortConfig::new(n).with_samples(s).with_sublist_capacity(capacity);
                    let out = sort(&keys, &cfg).unwrap();
                    assert!(
                        out.trace.max_bucket() * s <= 2 * n,
                        "n={n} s={s} cap={capacity} {dist} seed {seed}: {:?}",
                        out.trace.bucket_sizes()
                    );
                }
            }
        }
    }
}
