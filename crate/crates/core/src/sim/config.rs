use crate::polar::{construct_ga, construct_mc, PolarConstruction};
use crate::Result;
use serde::{Deserialize, Serialize};

/// How the experiments construct polar codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionChoice {
    /// Gaussian approximation.
    #[default]
    Ga,
    /// Genie-aided Monte-Carlo with `mc_samples` blocks.
    Mc,
}

fn default_scale() -> f64 {
    1.0
}

fn default_mc_samples() -> u64 {
    20_000
}

/// Known-eavesdropper-CSI experiment: one power optimisation and one code per
/// channel pair and block length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsiExperimentConfig {
    pub n_a: usize,
    pub p_t: f64,
    pub sigma_b_sq: f64,
    pub sigma_e_sq: f64,
    /// Back-off below Bob's capacity.
    pub delta: f64,
    /// Block lengths as exponents of two.
    pub n_exponents: Vec<u32>,
    pub num_pairs: usize,
    /// Secret bits sent per pair and block length (rounded up to whole blocks).
    pub bits_per_pair: usize,
    #[serde(default = "default_scale")]
    pub fading_scale: f64,
    #[serde(default)]
    pub construction: ConstructionChoice,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
    #[serde(skip)]
    pub seed: u64,
}

/// Distribution-only experiment: codes are designed per legitimate channel
/// against the `p0`-quantile eavesdropper, then tested on random draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdiExperimentConfig {
    pub n_a: usize,
    pub p_t: f64,
    pub sigma_b_sq: f64,
    /// Eve's noise in the simulated channel; the design ignores it.
    pub sigma_e_sq: f64,
    pub p0: f64,
    pub delta: f64,
    pub n_exponent: u32,
    pub num_h: usize,
    pub num_g_per_h: usize,
    pub eta_samples: usize,
    pub bits_per_pair: usize,
    #[serde(default = "default_scale")]
    pub fading_scale: f64,
    #[serde(default)]
    pub construction: ConstructionChoice,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
    #[serde(skip)]
    pub seed: u64,
}

struct Problems(Vec<String>);

impl Problems {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }
}

fn common(p: &mut Problems, n_a: usize, p_t: f64, sigma_b_sq: f64, sigma_e_sq: f64, delta: f64, scale: f64) {
    p.check(n_a >= 2, || format!("n_a: need at least 2 antennas, got {n_a}"));
    p.check(p_t > 0.0 && p_t.is_finite(), || format!("p_t: must be > 0, got {p_t}"));
    p.check(sigma_b_sq > 0.0 && sigma_b_sq.is_finite(), || {
        format!("sigma_b_sq: must be > 0, got {sigma_b_sq}")
    });
    p.check(sigma_e_sq >= 0.0 && sigma_e_sq.is_finite(), || {
        format!("sigma_e_sq: must be >= 0, got {sigma_e_sq}")
    });
    p.check(delta > 0.0 && delta < 1.0, || format!("delta: must lie in (0, 1), got {delta}"));
    p.check(scale > 0.0 && scale.is_finite(), || format!("fading_scale: must be > 0, got {scale}"));
}

fn exponent_ok(n: u32) -> bool {
    (1..=16).contains(&n)
}

impl CsiExperimentConfig {
    /// Every problem with the configuration, in field order.
    pub fn validate(&self) -> Vec<String> {
        let mut p = Problems(Vec::new());
        common(&mut p, self.n_a, self.p_t, self.sigma_b_sq, self.sigma_e_sq, self.delta, self.fading_scale);
        p.check(!self.n_exponents.is_empty(), || "n_exponents: must not be empty".into());
        for &n in &self.n_exponents {
            p.check(exponent_ok(n), || format!("n_exponents: {n} outside 1..=16"));
        }
        p.check(self.num_pairs > 0, || "num_pairs: must be positive".into());
        p.check(self.bits_per_pair > 0, || "bits_per_pair: must be positive".into());
        p.check(self.construction != ConstructionChoice::Mc || self.mc_samples > 0, || {
            "mc_samples: must be positive".into()
        });
        p.0
    }
}

impl CdiExperimentConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut p = Problems(Vec::new());
        common(&mut p, self.n_a, self.p_t, self.sigma_b_sq, self.sigma_e_sq, self.delta, self.fading_scale);
        p.check(self.p0 > 0.0 && self.p0 < 1.0, || format!("p0: must lie in (0, 1), got {}", self.p0));
        p.check(exponent_ok(self.n_exponent), || {
            format!("n_exponent: {} outside 1..=16", self.n_exponent)
        });
        p.check(self.num_h > 0, || "num_h: must be positive".into());
        p.check(self.num_g_per_h > 0, || "num_g_per_h: must be positive".into());
        p.check(self.eta_samples >= 10_000, || {
            format!("eta_samples: need at least 10000, got {}", self.eta_samples)
        });
        p.check(self.bits_per_pair > 0, || "bits_per_pair: must be positive".into());
        p.check(self.construction != ConstructionChoice::Mc || self.mc_samples > 0, || {
            "mc_samples: must be positive".into()
        });
        p.0
    }
}

pub(crate) fn construct(choice: ConstructionChoice, snr: f64, n: u32, mc_samples: u64, seed: u64) -> Result<PolarConstruction> {
    match choice {
        ConstructionChoice::Ga => construct_ga(snr, n),
        ConstructionChoice::Mc => construct_mc(snr, n, mc_samples, seed),
    }
}

/// `round(len * rate)` clamped to `[lo, len - 1]`.
pub(crate) fn rate_to_k(rate: f64, len: usize, lo: usize) -> usize {
    let k = (len as f64 * rate).round();
    let k = if k.is_finite() && k > 0.0 { k as usize } else { 0 };
    k.clamp(lo, len - 1)
}
