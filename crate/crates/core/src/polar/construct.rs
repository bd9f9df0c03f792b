//! Ranking of synthesized bit-channels for a binary-input AWGN channel.
//!
//! Both constructions take the channel SNR `P_u |gain|^2 / sigma^2` of the
//! equivalent scalar channel and report, per index, an error proxy
//! (smaller is better).

use super::decode::{channel_llr, ScDecoder};
use super::transform::log2_len;
use crate::capacity::{ln_q, q_function};
use crate::rng;
use crate::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::cmp::Ordering;

/// How a construction was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionMethod {
    /// Genie-aided SC error frequencies over `num_samples` all-zero blocks.
    MonteCarlo { num_samples: u64, seed: u64 },
    /// Gaussian-approximation density evolution.
    GaussianApproximation,
}

impl ConstructionMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionMethod::MonteCarlo { .. } => "mc",
            ConstructionMethod::GaussianApproximation => "ga",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarConstruction {
    n: u32,
    snr: f64,
    method: ConstructionMethod,
    reliability: Vec<f64>,
    /// Natural log of `reliability`, kept separately so rankings survive
    /// underflow of the error proxy at high SNR.
    log_reliability: Vec<f64>,
    info_set: Vec<usize>,
}

impl PolarConstruction {
    pub(crate) fn from_parts(
        n: u32,
        snr: f64,
        method: ConstructionMethod,
        reliability: Vec<f64>,
        log_reliability: Vec<f64>,
    ) -> Result<Self> {
        let len = 1usize << n;
        if reliability.len() != len || log_reliability.len() != len {
            return Err(Error::LengthMismatch {
                what: "reliability vector",
                expected: len,
                actual: reliability.len().min(log_reliability.len()),
            });
        }
        Ok(Self {
            n,
            snr,
            method,
            reliability,
            log_reliability,
            info_set: Vec::new(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn block_length(&self) -> usize {
        1 << self.n
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn method(&self) -> ConstructionMethod {
        self.method
    }

    pub fn reliability(&self) -> &[f64] {
        &self.reliability
    }

    pub fn log_reliability(&self) -> &[f64] {
        &self.log_reliability
    }

    /// Sorted ascending.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// All indices from best to worst; ties go to the smaller index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.block_length()).collect();
        idx.sort_by(|&a, &b| self.compare(a, b));
        idx
    }

    pub(crate) fn compare(&self, a: usize, b: usize) -> Ordering {
        self.log_reliability[a]
            .total_cmp(&self.log_reliability[b])
            .then(a.cmp(&b))
    }

    /// Keep the `k` best indices as the information set.
    pub fn select_info_set(&self, k: usize) -> Result<Self> {
        let len = self.block_length();
        if k > len {
            return Err(Error::invalid("k", format!("{k} exceeds block length {len}")));
        }
        let mut info: Vec<usize> = self.ranking().into_iter().take(k).collect();
        info.sort_unstable();
        Ok(Self {
            info_set: info,
            ..self.clone()
        })
    }

    pub(crate) fn with_info_set(&self, info_set: Vec<usize>) -> Self {
        Self {
            info_set,
            ..self.clone()
        }
    }

    /// Keep every index whose error proxy is at most `threshold`.
    pub fn select_by_threshold(&self, threshold: f64) -> Self {
        let info = (0..self.block_length())
            .filter(|&i| self.reliability[i] <= threshold)
            .collect();
        Self {
            info_set: info,
            ..self.clone()
        }
    }

    /// Frozen pattern for the decoder: `Some(0)` off the information set.
    pub fn frozen_pattern(&self) -> Vec<Option<u8>> {
        let mut pattern = vec![Some(0); self.block_length()];
        for &i in &self.info_set {
            pattern[i] = None;
        }
        pattern
    }
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr >= 0.0 && snr.is_finite()) {
        return Err(Error::invalid("snr", format!("must be finite and >= 0, got {snr}")));
    }
    Ok(())
}

fn check_n(n: u32) -> Result<()> {
    if !(1..=24).contains(&n) {
        return Err(Error::invalid("n", format!("must lie in 1..=24, got {n}")));
    }
    Ok(())
}

// Chung's approximation of phi(m) = 1 - E[tanh(L/2)], L ~ N(m, 2m). The two
// branches cross at PHI_SWITCH, which keeps phi continuous and decreasing.
const PHI_SWITCH: f64 = 6.177_975_866_159_401;

// The small-m branch exceeds phi = 1 near zero. Below PHI_TANGENT it is
// replaced by the line through the origin tangent to it there.
const PHI_TANGENT: f64 = 0.289_112_852_962_878_25;

fn ln_phi_chung_small(m: f64) -> f64 {
    -0.4527 * m.powf(0.86) + 0.0218
}

fn ln_phi(m: f64) -> f64 {
    if m <= 0.0 {
        0.0
    } else if m < PHI_TANGENT {
        m * ln_phi_chung_small(PHI_TANGENT) / PHI_TANGENT
    } else if m < PHI_SWITCH {
        ln_phi_chung_small(m)
    } else {
        0.5 * (std::f64::consts::PI / m).ln() - 0.25 * m + (1.0 - 10.0 / (7.0 * m)).ln()
    }
}

/// Inverse of `ln_phi` by bisection; `target <= 0`.
fn inv_ln_phi(target: f64) -> f64 {
    if target >= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while ln_phi(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ln_phi(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean LLR of the worse (check-node) child channel.
fn ga_minus(m: f64) -> f64 {
    if m <= 0.0 {
        return 0.0;
    }
    // 1 - (1 - phi)^2 = phi (2 - phi)
    let lp = ln_phi(m);
    inv_ln_phi(lp + (-lp.exp_m1()).ln_1p())
}

/// Per-index mean LLRs under the Gaussian approximation.
pub fn ga_means(snr: f64, n: u32) -> Result<Vec<f64>> {
    check_snr(snr)?;
    check_n(n)?;
    let mut means = vec![2.0 * snr];
    for _ in 0..n {
        let mut next = Vec::with_capacity(means.len() * 2);
        for &m in &means {
            next.push(ga_minus(m));
            next.push(2.0 * m);
        }
        means = next;
    }
    Ok(means)
}

/// Gaussian-approximation construction; error proxy `Q(sqrt(m / 2))`.
pub fn construct_ga(snr: f64, n: u32) -> Result<PolarConstruction> {
    let means = ga_means(snr, n)?;
    let reliability = means.iter().map(|&m| q_function((m / 2.0).sqrt())).collect();
    let log_reliability = means.iter().map(|&m| ln_q((m / 2.0).sqrt())).collect();
    PolarConstruction::from_parts(n, snr, ConstructionMethod::GaussianApproximation, reliability, log_reliability)
}

/// Samples handled by one RNG stream; fixed so results do not depend on the
/// number of worker threads.
const MC_CHUNK: u64 = 256;

/// Monte-Carlo construction by genie-aided SC decoding of the all-zero
/// codeword. A decision LLR of exactly zero counts as half an error.
pub fn construct_mc(snr: f64, n: u32, num_samples: u64, seed: u64) -> Result<PolarConstruction> {
    check_snr(snr)?;
    check_n(n)?;
    if num_samples == 0 {
        return Err(Error::invalid("num_samples", "must be positive"));
    }
    let len = 1usize << n;
    log2_len(len)?;
    let amplitude = snr.sqrt();
    let chunks = num_samples.div_ceil(MC_CHUNK);

    // Error counts are kept in half-units so the reduction is exact.
    let half_errors = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng::stream(seed, &[0x6d63, c]);
            let mut decoder = ScDecoder::new(len).expect("power of two");
            let mut counts = vec![0u64; len];
            let mut llrs = vec![0.0; len];
            let samples = MC_CHUNK.min(num_samples - c * MC_CHUNK);
            for _ in 0..samples {
                for l in llrs.iter_mut() {
                    let noise: f64 = rng.sample(StandardNormal);
                    *l = channel_llr(amplitude + noise, 1.0, amplitude, 1.0);
                }
                decoder
                    .decode_with(&llrs, |i, l| {
                        if l < 0.0 {
                            counts[i] += 2;
                        } else if l == 0.0 {
                            counts[i] += 1;
                        }
                        0
                    })
                    .expect("length checked");
            }
            counts
        })
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let total = 2.0 * num_samples as f64;
    let reliability: Vec<f64> = half_errors.iter().map(|&c| c as f64 / total).collect();
    let log_reliability = reliability.iter().map(|r| r.ln()).collect();
    PolarConstruction::from_parts(
        n,
        snr,
        ConstructionMethod::MonteCarlo { num_samples, seed },
        reliability,
        log_reliability,
    )
}
