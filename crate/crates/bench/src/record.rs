use std::io;

use serde::{Deserialize, Serialize};

/// Fixed CSV header, in column order.
pub const CSV_HEADER: [&str; 20] = [
    "n",
    "s",
    "sublist_capacity",
    "distribution",
    "seed",
    "trial",
    "workers",
    "tagged",
    "local_sort_ms",
    "local_sampling_ms",
    "sample_sort_ms",
    "global_sampling_ms",
    "sample_indexing_ms",
    "prefix_sum_ms",
    "relocation_ms",
    "sublist_sort_ms",
    "total_ms",
    "verified",
    "max_bucket",
    "error",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// One timed run of one grid cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub s: usize,
    pub sublist_capacity: usize,
    pub distribution: String,
    /// Seed the keys were generated from (base seed + trial).
    pub seed: u64,
    pub trial: usize,
    pub workers: usize,
    pub tagged: bool,
    pub local_sort_ms: f64,
    pub local_sampling_ms: f64,
    pub sample_sort_ms: f64,
    pub global_sampling_ms: f64,
    pub sample_indexing_ms: f64,
    pub prefix_sum_ms: f64,
    pub relocation_ms: f64,
    pub sublist_sort_ms: f64,
    pub total_ms: f64,
    pub verified: Verdict,
    pub max_bucket: usize,
    /// Empty unless the cell could not be run.
    pub error: String,
}

impl BenchRecord {
    pub fn step_ms(&self) -> [f64; 8] {
        [
            self.local_sort_ms,
            self.local_sampling_ms,
            self.sample_sort_ms,
            self.global_sampling_ms,
            self.sample_indexing_ms,
            self.prefix_sum_ms,
            self.relocation_ms,
            self.sublist_sort_ms,
        ]
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_empty() && self.verified != Verdict::Fail
    }
}

pub fn write_csv<W: io::Write>(out: W, records: &[BenchRecord]) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> csv::Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BenchRecord {
        BenchRecord {
            n: 1024,
            s: 64,
            sublist_capacity: 2048,
            distribution: "bucket-killer".into(),
            seed: 3,
            trial: 1,
            workers: 2,
            tagged: true,
            local_sort_ms: 1.25,
            local_sampling_ms: 0.0,
            sample_sort_ms: 0.5,
            global_sampling_ms: 0.001,
            sample_indexing_ms: 0.2,
            prefix_sum_ms: 0.01,
            relocation_ms: 0.3,
            sublist_sort_ms: 2.0,
            total_ms: 4.5,
            verified: Verdict::Pass,
            max_bucket: 40,
            error: String::new(),
        }
    }

    #[test]
    fn header_matches_serialized_fields() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[sample()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert!(lines.next().unwrap().starts_with("1024,64,2048,bucket-killer,3,1,2,true,1.25,"));
    }

    #[test]
    fn records_round_trip() {
        let mut failed = sample();
        failed.verified = Verdict::Fail;
        failed.error = "allocation of 12 bytes, failed".into();
        let records = vec![sample(), failed];
        let mut buf = Vec::new();
        write_csv(&mut buf, &records).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), records);
    }
}
