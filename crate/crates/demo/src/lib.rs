//! Browser bindings for `detsort`. Each exported function returns a JSON
//! string; the page in `www/` draws it.
//!
//! The plain Rust functions (`*_json`) carry the logic so they can be tested
//! natively; the `#[wasm_bindgen]` wrappers only convert errors.

use detsort::{bitonic, check, generate, sort, Distribution, SortConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest key count the page may request.
pub const MAX_KEYS: usize = 1 << 22;
/// Largest network drawn by `bitonic_network`.
pub const MAX_NETWORK: usize = 64;
/// Largest sublist count for which `offset_matrix` returns the matrices.
pub const MAX_MATRIX_ROWS: usize = 64;

#[derive(Serialize)]
pub struct BucketProfile {
    pub distribution: &'static str,
    pub n: usize,
    pub s: usize,
    pub sublist_capacity: usize,
    pub sublists: usize,
    pub bucket_sizes: Vec<usize>,
    pub bound: usize,
    pub max_bucket: usize,
    pub global_samples: Vec<u32>,
    pub steps_ms: Vec<(&'static str, f64)>,
    pub total_ms: f64,
    pub verified: bool,
    pub report: String,
}

#[derive(Serialize)]
pub struct NetworkRound {
    pub stage: usize,
    pub block: usize,
    pub flip: bool,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Serialize)]
pub struct Network {
    pub len: usize,
    pub padded: usize,
    pub compare_exchanges: u64,
    pub rounds: Vec<NetworkRound>,
}

#[derive(Serialize)]
pub struct Matrices {
    pub rows: usize,
    pub cols: usize,
    pub counts: Vec<Vec<usize>>,
    pub offsets: Vec<Vec<usize>>,
    pub boundaries: Vec<usize>,
}

fn config(n: usize, s: usize, capacity: usize, tagged: bool) -> Result<SortConfig, String> {
    if n > MAX_KEYS {
        return Err(format!("n is limited to {MAX_KEYS} in the browser"));
    }
    let cfg = SortConfig::new(n)
        .with_samples(s)
        .with_sublist_capacity(capacity)
        .with_tagged(tagged);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn distribution(name: &str) -> Result<Distribution, String> {
    name.parse().map_err(|e: detsort::datagen::UnknownDistribution| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Sorts generated keys and reports bucket sizes against the `2n/s` bound.
pub fn bucket_profile_json(
    dist: &str,
    n: usize,
    s: usize,
    capacity: usize,
    seed: u64,
    tagged: bool,
) -> Result<String, String> {
    let dist = distribution(dist)?;
    let cfg = config(n, s, capacity, tagged)?;
    let keys = generate(dist, n, seed);
    let out = sort(&keys, &cfg).map_err(|e| e.to_string())?;
    let report = check(&keys, &out, &cfg);
    let steps_ms = detsort::STEP_NAMES
        .iter()
        .zip(out.timings.steps())
        .map(|(name, d)| (*name, detsort::timing::millis(d)))
        .collect();
    to_json(&BucketProfile {
        distribution: dist.name(),
        n,
        s,
        sublist_capacity: capacity,
        sublists: cfg.sublist_count(),
        bucket_sizes: out.trace.bucket_sizes(),
        bound: 2 * n / s,
        max_bucket: out.trace.max_bucket(),
        global_samples: out.trace.global_samples.clone(),
        steps_ms,
        total_ms: detsort::timing::millis(out.timings.total),
        verified: report.passed(),
        report: report.to_text(),
    })
}

/// The compare-exchange rounds of the network for `len` elements. Pairs
/// that touch the virtual padding are left out.
pub fn bitonic_network_json(len: usize) -> Result<String, String> {
    if len > MAX_NETWORK {
        return Err(format!("networks are drawn up to {MAX_NETWORK} wires"));
    }
    let plan = bitonic::plan(len);
    let rounds = plan
        .rounds
        .iter()
        .map(|r| NetworkRound {
            stage: r.stage,
            block: r.block,
            flip: r.flip,
            pairs: (0..plan.padded / 2).map(|p| r.pair(p)).filter(|&(_, hi)| hi < len).collect(),
        })
        .collect();
    to_json(&Network {
        len,
        padded: plan.padded,
        compare_exchanges: plan.live_compare_exchanges(),
        rounds,
    })
}

/// Per-sublist bucket counts and their column-major exclusive scan.
pub fn offset_matrix_json(dist: &str, n: usize, s: usize, capacity: usize, seed: u64) -> Result<String, String> {
    let dist = distribution(dist)?;
    let cfg = config(n, s, capacity, true)?;
    if cfg.sublist_count() > MAX_MATRIX_ROWS {
        return Err(format!("at most {MAX_MATRIX_ROWS} sublists can be shown"));
    }
    let out = sort(&generate(dist, n, seed), &cfg).map_err(|e| e.to_string())?;
    let (Some(counts), Some(offsets)) = (&out.trace.counts, &out.trace.offsets) else {
        return Err("n is below one sublist; no buckets were formed".into());
    };
    to_json(&Matrices {
        rows: counts.rows(),
        cols: counts.cols(),
        counts: (0..counts.rows()).map(|i| counts.row(i).to_vec()).collect(),
        offsets: (0..offsets.rows())
            .map(|i| (0..offsets.cols()).map(|j| offsets.offset(i, j)).collect())
            .collect(),
        boundaries: out.trace.boundaries.clone(),
    })
}

#[wasm_bindgen]
pub fn bucket_profile(dist: &str, n: usize, s: usize, capacity: usize, seed: u32, tagged: bool) -> Result<String, JsValue> {
    bucket_profile_json(dist, n, s, capacity, u64::from(seed), tagged).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bitonic_network(len: usize) -> Result<String, JsValue> {
    bitonic_network_json(len).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn offset_matrix(dist: &str, n: usize, s: usize, capacity: usize, seed: u32) -> Result<String, JsValue> {
    offset_matrix_json(dist, n, s, capacity, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}

/// Distribution names accepted by the other functions, as a JSON array.
#[wasm_bindgen]
pub fn distributions() -> String {
    let names: Vec<&str> = Distribution::ALL.iter().map(|d| d.name()).collect();
    serde_json::to_string(&names).unwrap_or_default()
}
