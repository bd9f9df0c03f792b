//! Construction cache: a self-describing JSON record that reproduces a
//! [`PolarConstruction`] exactly, including every binary64 reliability.

use super::construct::{ConstructionMethod, PolarConstruction};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::{Read, Write};

pub const RECORD_FORMAT: &str = "anpolar-construction/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionRecord {
    pub format: String,
    pub n: u32,
    pub snr: f64,
    /// `"mc"` or `"ga"`.
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub reliability: Vec<f64>,
    /// `ln` of each reliability; `null` stands for `-inf`.
    pub log_reliability: Vec<Option<f64>>,
    pub info_set: Vec<usize>,
}

impl From<&PolarConstruction> for ConstructionRecord {
    fn from(c: &PolarConstruction) -> Self {
        Self {
            format: RECORD_FORMAT.to_string(),
            n: c.n(),
            snr: c.snr(),
            method: c.method().name().to_string(),
            num_samples: match c.method() {
                ConstructionMethod::MonteCarlo { num_samples, .. } => Some(num_samples),
                ConstructionMethod::GaussianApproximation => None,
            },
            seed: match c.method() {
                ConstructionMethod::MonteCarlo { seed, .. } => Some(seed),
                ConstructionMethod::GaussianApproximation => None,
            },
            reliability: c.reliability().to_vec(),
            log_reliability: c
                .log_reliability()
                .iter()
                .map(|&l| if l.is_finite() { Some(l) } else { None })
                .collect(),
            info_set: c.info_set().to_vec(),
        }
    }
}

impl ConstructionRecord {
    pub fn into_construction(self) -> Result<PolarConstruction> {
        if self.format != RECORD_FORMAT {
            return Err(Error::Record(format!("unknown format `{}`", self.format)));
        }
        let method = self.method()?;
        let log_rel = self
            .log_reliability
            .iter()
            .map(|l| l.unwrap_or(f64::NEG_INFINITY))
            .collect();
        let c = PolarConstruction::from_parts(self.n, self.snr, method, self.reliability, log_rel)?;
        let k = self.info_set.len();
        let selected = c.select_info_set(k)?;
        if selected.info_set() != self.info_set.as_slice() {
            // A threshold-selected set need not be the top-k by rank.
            let len = c.block_length();
            if self.info_set.iter().any(|&i| i >= len) || self.info_set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Record("info_set must be sorted, unique and in range".into()));
            }
            return Ok(c.with_info_set(self.info_set));
        }
        Ok(selected)
    }

    pub fn method(&self) -> Result<ConstructionMethod> {
        match (self.method.as_str(), self.num_samples, self.seed) {
            ("ga", None, None) => Ok(ConstructionMethod::GaussianApproximation),
            ("mc", Some(num_samples), Some(seed)) => Ok(ConstructionMethod::MonteCarlo { num_samples, seed }),
            (m, _, _) => Err(Error::Record(format!(
                "method `{m}` with num_samples {:?} and seed {:?} is not a valid combination",
                self.num_samples, self.seed
            ))),
        }
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        Ok(serde_json::from_reader(r)?)
    }

    /// SHA-256 over the block length, method and the exact bits of every
    /// reliability value.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.n.to_le_bytes());
        h.update(self.snr.to_bits().to_le_bytes());
        h.update(self.method.as_bytes());
        for v in [self.num_samples, self.seed].into_iter().flatten() {
            h.update(v.to_le_bytes());
        }
        for r in &self.reliability {
            h.update(r.to_bits().to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
