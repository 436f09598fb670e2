//! Reference sort and result checker.

use std::collections::HashMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::config::SortConfig;
use crate::item::Key;
use crate::pipeline::{sort, SortOutput};

/// Sequential stable comparison sort; ground truth for every equivalence
/// check.
pub fn oracle_sort(keys: &[Key]) -> Vec<Key> {
    let mut out = keys.to_vec();
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail,
    NotApplicable,
}

impl Check {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    pub fn ok(&self) -> bool {
        *self != Check::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Pass => "pass",
            Check::Fail => "fail",
            Check::NotApplicable => "n/a",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub sorted: Check,
    pub permutation: Check,
    pub stability: Check,
    pub max_bucket: usize,
    /// `2n/s`, rounded down. Only meaningful when bucketing ran.
    pub bucket_bound: usize,
    pub bucket_check: Check,
    /// SHA-256 (hex) of the output keys followed by the bucket boundaries,
    /// all little-endian.
    pub digest: String,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.sorted.ok() && self.permutation.ok() && self.stability.ok() && self.bucket_check.ok()
    }

    /// Line-oriented `field: value` block.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sorted: {}", self.sorted)?;
        writeln!(f, "permutation: {}", self.permutation)?;
        writeln!(f, "stability: {}", self.stability)?;
        writeln!(f, "max_bucket: {}", self.max_bucket)?;
        writeln!(f, "bucket_bound: {}", self.bucket_bound)?;
        writeln!(f, "bucket_check: {}", self.bucket_check)?;
        writeln!(f, "digest: {}", self.digest)?;
        write!(f, "verdict: {}", if self.passed() { "pass" } else { "fail" })
    }
}

pub fn digest(keys: &[Key], boundaries: &[usize]) -> String {
    let mut hasher = Sha256::new();
    for k in keys {
        hasher.update(k.to_le_bytes());
    }
    for b in boundaries {
        hasher.update((*b as u64).to_le_bytes());
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn is_permutation(input: &[Key], output: &[Key]) -> bool {
    if input.len() != output.len() {
        return false;
    }
    let mut histogram: HashMap<Key, i64> = HashMap::new();
    for &k in input {
        *histogram.entry(k).or_default() += 1;
    }
    for &k in output {
        *histogram.entry(k).or_default() -= 1;
    }
    histogram.values().all(|&c| c == 0)
}

/// Tags must be a permutation of `0..n`, point back at an equal input key,
/// and increase within every run of equal keys.
fn is_stable(input: &[Key], keys: &[Key], tags: &[u64]) -> bool {
    let n = input.len();
    if tags.len() != n || keys.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for (&k, &t) in keys.iter().zip(tags) {
        let Ok(t) = usize::try_from(t) else { return false };
        if t >= n || std::mem::replace(&mut seen[t], true) || input[t] != k {
            return false;
        }
    }
    keys.windows(2)
        .zip(tags.windows(2))
        .all(|(k, t)| k[0] != k[1] || t[0] < t[1])
}

/// Checks one `sort` result against its input.
///
/// In raw mode, stability is judged on a shadow tagged run of the same
/// input, which must also produce the same key sequence.
pub fn check(input: &[Key], output: &SortOutput, config: &SortConfig) -> VerifyReport {
    let keys = &output.keys;
    let sorted = Check::from_bool(keys.windows(2).all(|w| w[0] <= w[1]));
    let permutation = Check::from_bool(is_permutation(input, keys));

    let stability = match &output.tags {
        Some(tags) => Check::from_bool(is_stable(input, keys, tags)),
        None => {
            let shadow_config = SortConfig {
                tagged: true,
                workers: 1,
                ..config.clone()
            };
            match sort(input, &shadow_config) {
                Ok(shadow) => Check::from_bool(
                    shadow.keys == *keys
                        && shadow
                            .tags
                            .as_deref()
                            .is_some_and(|tags| is_stable(input, &shadow.keys, tags)),
                ),
                Err(_) => Check::Fail,
            }
        }
    };

    let sizes = output.trace.bucket_sizes();
    let max_bucket = sizes.iter().copied().max().unwrap_or(0);
    let n = input.len();
    let bucketed = output.trace.counts.is_some();
    let bucket_bound = 2 * n / config.samples;
    let bucket_check = if !bucketed {
        Check::NotApplicable
    } else if !config.tagged {
        // Raw mode only guarantees the bound for distinct keys.
        let mut distinct = input.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == n {
            Check::from_bool(max_bucket * config.samples <= 2 * n)
        } else {
            Check::NotApplicable
        }
    } else {
        Check::from_bool(max_bucket * config.samples <= 2 * n)
    };

    VerifyReport {
        sorted,
        permutation,
        stability,
        max_bucket,
        bucket_bound,
        bucket_check,
        digest: digest(keys, &output.trace.boundaries),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate, Distribution};

    fn run(keys: &[Key], cfg: &SortConfig) -> SortOutput {
        sort(keys, cfg).unwrap()
    }

    fn small_config(n: usize) -> SortConfig {
        SortConfig::new(n).with_sublist_capacity(64).with_samples(8)
    }

    #[test]
    fn oracle_basics() {
        assert_eq!(oracle_sort(&[2, 1]), vec![1, 2]);
        assert_eq!(oracle_sort(&[]), Vec::<Key>::new());
    }

    #[test]
    fn correct_run_passes() {
        let input = generate(Distribution::Uniform, 1000, 3);
        let cfg = small_config(1000);
        let report = check(&input, &run(&input, &cfg), &cfg);
        assert!(report.passed(), "{report}");
        assert_eq!(report.bucket_check, Check::Pass);
        assert_eq!(report.bucket_bound, 250);
    }

    #[test]
    fn detects_injected_faults() {
        let input = generate(Distribution::Zipf, 1000, 5);
        let cfg = small_config(1000);
        let good = run(&input, &cfg);

        let mut mutated = good.clone();
        mutated.keys[500] = mutated.keys[500].wrapping_add(1);
        // Keep it sorted where possible so only the multiset check trips.
        if mutated.keys[500] > mutated.keys[501] {
            mutated.keys[500] = mutated.keys[501];
        }
        assert_eq!(check(&input, &mutated, &cfg).permutation, Check::Fail);

        let mut dropped = good.clone();
        dropped.keys.pop();
        dropped.tags.as_mut().unwrap().pop();
        assert_eq!(check(&input, &dropped, &cfg).permutation, Check::Fail);

        let gap = good.keys.windows(2).rposition(|w| w[0] < w[1]).unwrap();
        let mut duplicated = good.clone();
        duplicated.keys[gap + 1] = duplicated.keys[gap];
        assert_eq!(check(&input, &duplicated, &cfg).permutation, Check::Fail);

        let first_gap = good.keys.windows(2).position(|w| w[0] < w[1]).unwrap();
        let mut unsorted = good.clone();
        unsorted.keys.swap(first_gap, first_gap + 1);
        unsorted.tags.as_mut().unwrap().swap(first_gap, first_gap + 1);
        let report = check(&input, &unsorted, &cfg);
        assert_eq!(report.sorted, Check::Fail);
        assert_eq!(report.permutation, Check::Pass);
        assert!(!report.passed());
    }

    #[test]
    fn detects_instability() {
        let input = vec![3u32; 200];
        let cfg = small_config(200);
        let mut out = run(&input, &cfg);
        assert!(check(&input, &out, &cfg).passed());
        out.tags.as_mut().unwrap().swap(10, 11);
        let report = check(&input, &out, &cfg);
        assert_eq!(report.stability, Check::Fail);
        assert_eq!(report.sorted, Check::Pass);
    }

    #[test]
    fn raw_mode_uses_shadow_run() {
        let input = generate(Distribution::BucketKiller, 1000, 2);
        let cfg = small_config(1000).with_tagged(false);
        let report = check(&input, &run(&input, &cfg), &cfg);
        assert_eq!(report.stability, Check::Pass);
        assert_eq!(report.bucket_check, Check::NotApplicable);
    }

    #[test]
    fn bucket_killer_stays_bounded() {
        let input = generate(Distribution::BucketKiller, 4096, 0);
        let cfg = small_config(4096);
        let report = check(&input, &run(&input, &cfg), &cfg);
        assert_eq!(report.bucket_check, Check::Pass);
        assert!(report.max_bucket <= 2 * 4096 / 8);
    }

    #[test]
    fn report_text_block() {
        let input = vec![1u32, 0];
        let cfg = SortConfig::new(2);
        let text = check(&input, &run(&input, &cfg), &cfg).to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "sorted: pass");
        assert_eq!(lines[5], "bucket_check: n/a");
        assert!(lines[6].starts_with("digest: ") && lines[6].len() == 8 + 64);
        assert_eq!(lines[7], "verdict: pass");
    }
}
