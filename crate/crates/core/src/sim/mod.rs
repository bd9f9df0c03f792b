//! Fading Monte-Carlo experiments.
//!
//! Random streams are keyed by (experiment seed, stream tag, pair/block ids)
//! so every experiment is a pure function of its configuration and seed,
//! independent of the rayon pool size.

mod cdi;
mod config;
mod csi;
mod eta;
mod fading;
mod report;

pub use cdi::{run_cdi_experiment, CdiDesign, CdiResults};
pub use config::{CdiExperimentConfig, ConstructionChoice, CsiExperimentConfig};
pub use csi::{run_csi_experiment, run_csi_pair, CsiPairDesign, CsiResults, CsiSummaryRow};
pub use eta::{estimate_eta_quantile, eta_of};
pub use fading::{sample_rayleigh_vector, FadingModel};
pub use report::{empirical_cdf, fmt_f64, TsvTable};

use crate::polar::{channel_llr, ScDecoder};
use crate::precoding::PrecodingBasis;
use crate::rng;
use crate::wiretap::{secure_decode_with, secure_encode_into, WiretapPartition};
use crate::Result;
use rand::Rng;
use rand_distr::StandardNormal;

pub(crate) mod tags {
    pub const CHANNEL: u64 = 1;
    pub const TRANSMIT: u64 = 2;
    pub const ETA: u64 = 3;
    pub const CONSTRUCT: u64 = 4;
    pub const EVE_CHANNEL: u64 = 5;
}

/// One bit-error-rate measurement on a (legitimate, eavesdropper) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub pair_id: usize,
    /// Legitimate-channel index (equals `pair_id` in the CSI experiment).
    pub h_id: usize,
    /// Eavesdropper draw for this `h_id` (0 in the CSI experiment).
    pub g_id: usize,
    pub n: u32,
    pub k_bob: usize,
    pub k_eve: usize,
    pub secret_bits: usize,
    pub bob_errors: usize,
    pub eve_errors: usize,
    pub bob_ber: f64,
    pub eve_ber: f64,
    pub secrecy_rate: f64,
    pub c_s: f64,
    pub c_b: f64,
    pub c_e: f64,
    pub p_u: f64,
}

/// A pair (or pair and block length) that produced no measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPair {
    pub pair_id: usize,
    pub n: Option<u32>,
    pub reason: String,
}

/// Everything the transmitter and both receivers need for one pair.
#[derive(Debug, Clone)]
pub(crate) struct Link<'a> {
    pub basis: &'a PrecodingBasis,
    pub h: &'a [f64],
    pub g: &'a [f64],
    pub p_u: f64,
    pub p_v: f64,
    pub sigma_b_sq: f64,
    pub sigma_e_sq: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct ErrorCounts {
    pub bits: usize,
    pub bob: usize,
    pub eve: usize,
}

/// Send `ceil(bits / |G|)` blocks of fresh secret and random bits through
/// the precoded channel and count secret-bit errors at both receivers.
///
/// Bob's observation is `h^T (p u + Z v) + n_B`; Eve's is
/// `g^T (p u + Z v) + n_E`, with a fresh `v ~ N(0, P_v I)` per symbol. Eve
/// knows her effective gain and total noise variance but not `v`.
pub(crate) fn transmit(
    link: &Link<'_>,
    partition: &WiretapPartition,
    bits: usize,
    seed: u64,
    stream_tags: &[u64],
) -> Result<ErrorCounts> {
    let len = partition.block_length();
    let n_a = link.basis.n_a();
    let secret_len = partition.secret_len();
    let blocks = bits.div_ceil(secret_len.max(1));

    let sqrt_pu = link.p_u.sqrt();
    let sd_v = link.p_v.sqrt();
    let sd_b = link.sigma_b_sq.sqrt();
    let sd_e = link.sigma_e_sq.sqrt();
    let bob_gain = link.basis.project_p(link.h);
    let eve_gain = link.basis.project_p(link.g);
    let eve_an: f64 = link.basis.project_z(link.g).iter().map(|x| x * x).sum();
    let eve_noise = link.p_v * eve_an + link.sigma_e_sq;

    let mut decoder = ScDecoder::new(len)?;
    let mut x = vec![0u8; len];
    let mut u_hat = vec![0u8; len];
    let mut y = vec![0.0; len];
    let mut z = vec![0.0; len];
    let mut tx = vec![0.0; n_a];
    let mut v = vec![0.0; n_a - 1];
    let mut secret = vec![0u8; secret_len];
    let mut random = vec![0u8; partition.random_len()];
    let mut tags = stream_tags.to_vec();
    tags.push(0);

    let mut counts = ErrorCounts::default();
    for b in 0..blocks {
        *tags.last_mut().unwrap() = b as u64;
        let mut rng = rng::stream(seed, &tags);
        secret.iter_mut().for_each(|s| *s = rng.gen_range(0..2));
        random.iter_mut().for_each(|r| *r = rng.gen_range(0..2));
        secure_encode_into(&secret, &random, partition, &mut x)?;

        for i in 0..len {
            let u = if x[i] == 0 { sqrt_pu } else { -sqrt_pu };
            for vj in v.iter_mut() {
                *vj = sd_v * rng.sample::<f64, _>(StandardNormal);
            }
            link.basis.transmit_into(u, &v, &mut tx);
            let n_b: f64 = rng.sample(StandardNormal);
            let n_e: f64 = rng.sample(StandardNormal);
            let rx_b = dot(link.h, &tx) + sd_b * n_b;
            let rx_e = dot(link.g, &tx) + sd_e * n_e;
            y[i] = channel_llr(rx_b, bob_gain, sqrt_pu, link.sigma_b_sq);
            z[i] = channel_llr(rx_e, eve_gain, sqrt_pu, eve_noise);
        }

        let bob = secure_decode_with(&mut decoder, &y, partition, &mut u_hat)?;
        counts.bob += bob.secret.iter().zip(&secret).filter(|(a, b)| a != b).count();
        let eve = secure_decode_with(&mut decoder, &z, partition, &mut u_hat)?;
        counts.eve += eve.secret.iter().zip(&secret).filter(|(a, b)| a != b).count();
        counts.bits += secret_len;
    }
    Ok(counts)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Run `f` on a pool of `workers` threads, or on the global pool.
pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| crate::Error::invalid("workers", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
