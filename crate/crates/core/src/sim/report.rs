use super::{BerRecord, CdiResults, CsiResults, SkippedPair};
use crate::Result;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

/// Shortest text that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Sorted distinct values with the fraction of samples at or below each.
pub fn empirical_cdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, x) in v.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *x => last.1 = f,
            _ => out.push((*x, f)),
        }
    }
    out
}

/// Tab-separated table with a header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.header.join("\t"));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join("\t"));
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(self.render().as_bytes())?;
        f.flush()?;
        Ok(())
    }

    /// One row per measured pair and block length.
    pub fn ber_records(records: &[BerRecord]) -> Self {
        let mut t = Self::new(&[
            "pair_id",
            "h_id",
            "g_id",
            "n",
            "N",
            "k_bob",
            "k_eve",
            "secret_bits",
            "bob_errors",
            "eve_errors",
            "bob_ber",
            "eve_ber",
            "secrecy_rate",
            "c_s",
            "c_b",
            "c_e",
            "p_u",
        ]);
        for r in records {
            t.push(vec![
                r.pair_id.to_string(),
                r.h_id.to_string(),
                r.g_id.to_string(),
                r.n.to_string(),
                (1u64 << r.n).to_string(),
                r.k_bob.to_string(),
                r.k_eve.to_string(),
                r.secret_bits.to_string(),
                r.bob_errors.to_string(),
                r.eve_errors.to_string(),
                fmt_f64(r.bob_ber),
                fmt_f64(r.eve_ber),
                fmt_f64(r.secrecy_rate),
                fmt_f64(r.c_s),
                fmt_f64(r.c_b),
                fmt_f64(r.c_e),
                fmt_f64(r.p_u),
            ]);
        }
        t
    }

    pub fn skipped(skipped: &[SkippedPair]) -> Self {
        let mut t = Self::new(&["pair_id", "n", "reason"]);
        for s in skipped {
            t.push(vec![
                s.pair_id.to_string(),
                s.n.map(|n| n.to_string()).unwrap_or_default(),
                s.reason.replace(['\t', '\n'], " "),
            ]);
        }
        t
    }

    /// Mean BERs per block length.
    pub fn csi_summary(results: &CsiResults) -> Self {
        let mut t = Self::new(&[
            "n",
            "N",
            "pairs_measured",
            "pairs_skipped",
            "secret_bits",
            "mean_bob_ber",
            "mean_eve_ber",
            "mean_secrecy_rate",
        ]);
        for r in &results.summary {
            t.push(vec![
                r.n.to_string(),
                (1u64 << r.n).to_string(),
                r.pairs_measured.to_string(),
                r.pairs_skipped.to_string(),
                r.secret_bits.to_string(),
                fmt_f64(r.mean_bob_ber),
                fmt_f64(r.mean_eve_ber),
                fmt_f64(r.mean_secrecy_rate),
            ]);
        }
        t
    }

    /// Empirical CDF points of both receivers' BER (`series` is `bob` or `eve`).
    pub fn cdi_summary(results: &CdiResults) -> Self {
        let mut t = Self::new(&["series", "ber", "cdf"]);
        for (name, cdf) in [("bob", &results.bob_cdf), ("eve", &results.eve_cdf)] {
            for &(x, f) in cdf.iter() {
                t.push(vec![name.to_string(), fmt_f64(x), fmt_f64(f)]);
            }
        }
        t
    }
}
