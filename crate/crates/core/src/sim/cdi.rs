use super::config::{construct, rate_to_k, CdiExperimentConfig};
use super::eta::estimate_eta_quantile;
use super::fading::{sample_rayleigh_vector, FadingModel};
use super::report::empirical_cdf;
use super::{tags, transmit, with_workers, BerRecord, Link, SkippedPair};
use crate::capacity::{optimize_power_allocation, PowerOptimum, PowerProblem};
use crate::precoding::{orthonormal_decomposition, ChannelGains, PrecodingBasis};
use crate::rng;
use crate::wiretap::{build_partition, WiretapPartition};
use crate::{Error, Result};
use rand::RngCore;
use rayon::prelude::*;

/// Code designed for one legitimate channel against the `p0`-quantile
/// eavesdropper.
#[derive(Debug, Clone)]
pub struct CdiDesign {
    pub h_id: usize,
    pub h: Vec<f64>,
    pub eta0: f64,
    pub basis: PrecodingBasis,
    pub optimum: PowerOptimum,
    pub k_bob: usize,
    pub k_eve: usize,
    pub partition: WiretapPartition,
}

impl CdiDesign {
    /// Optimise power with the noiseless worst-case eavesdropper
    /// `SNR_E = P_u eta0 / P_v` and build the partition.
    pub fn new(h_id: usize, h: Vec<f64>, config: &CdiExperimentConfig) -> Result<Self> {
        let skip = |reason: String| Error::SkippedPair { pair_id: h_id, reason };
        let basis = orthonormal_decomposition(&h)?;
        let model = FadingModel::SignedRayleigh {
            scale: config.fading_scale,
        };
        let mut eta_rng = rng::stream(config.seed, &[tags::ETA, h_id as u64]);
        let eta0 = estimate_eta_quantile(&model, &basis, config.p0, config.eta_samples, &mut eta_rng)?;

        let bob_gain = basis.project_p(&h).powi(2);
        let problem = PowerProblem {
            gains: ChannelGains {
                bob_gain,
                eve_gain: eta0,
                eve_an_gain: 1.0,
            },
            sigma_b_sq: config.sigma_b_sq,
            sigma_e_sq: 0.0,
            p_t: config.p_t,
            n_a: config.n_a,
        };
        let optimum = optimize_power_allocation(&problem)?;
        if !optimum.feasible {
            return Err(skip(format!("zero secrecy capacity against eta0 = {eta0:.4}")));
        }
        let op = &optimum.operating_point;
        let n = config.n_exponent;
        let len = 1usize << n;
        let k_bob = rate_to_k(op.c_b - config.delta, len, 1);
        let k_eve = rate_to_k(op.c_e, len, 0);
        if k_eve >= k_bob {
            return Err(skip(format!("no secret positions (k_bob = {k_bob}, k_eve = {k_eve})")));
        }
        let seed = |who: u64| rng::stream(config.seed, &[tags::CONSTRUCT, h_id as u64, who]).next_u64();
        let bob = construct(config.construction, op.snr_bob, n, config.mc_samples, seed(0))?;
        let eve = construct(config.construction, op.snr_eve, n, config.mc_samples, seed(1))?;
        let partition = build_partition(&bob, &eve, k_bob, k_eve)?;
        Ok(Self {
            h_id,
            h,
            eta0,
            basis,
            optimum,
            k_bob,
            k_eve,
            partition,
        })
    }

    /// Transmit over one eavesdropper draw with Eve's true noise.
    fn measure(&self, g_id: usize, g: &[f64], config: &CdiExperimentConfig) -> Result<BerRecord> {
        let op = &self.optimum.operating_point;
        let link = Link {
            basis: &self.basis,
            h: &self.h,
            g,
            p_u: op.p_u,
            p_v: op.p_v,
            sigma_b_sq: config.sigma_b_sq,
            sigma_e_sq: config.sigma_e_sq,
        };
        let counts = transmit(
            &link,
            &self.partition,
            config.bits_per_pair,
            config.seed,
            &[tags::TRANSMIT, self.h_id as u64, g_id as u64],
        )?;
        Ok(BerRecord {
            pair_id: self.h_id * config.num_g_per_h + g_id,
            h_id: self.h_id,
            g_id,
            n: config.n_exponent,
            k_bob: self.k_bob,
            k_eve: self.k_eve,
            secret_bits: counts.bits,
            bob_errors: counts.bob,
            eve_errors: counts.eve,
            bob_ber: counts.bob as f64 / counts.bits as f64,
            eve_ber: counts.eve as f64 / counts.bits as f64,
            secrecy_rate: self.partition.secrecy_rate(),
            c_s: self.optimum.c_s_max,
            c_b: op.c_b,
            c_e: op.c_e,
            p_u: op.p_u,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CdiResults {
    /// One entry per legitimate channel that produced a code, by `h_id`.
    pub designs: Vec<CdiDesign>,
    pub records: Vec<BerRecord>,
    pub skipped: Vec<SkippedPair>,
    /// `(ber, F(ber))` steps over all records.
    pub bob_cdf: Vec<(f64, f64)>,
    pub eve_cdf: Vec<(f64, f64)>,
}

impl CdiResults {
    pub fn mean_bob_ber(&self) -> f64 {
        mean(self.records.iter().map(|r| r.bob_ber))
    }

    pub fn mean_eve_ber(&self) -> f64 {
        mean(self.records.iter().map(|r| r.eve_ber))
    }
}

fn mean(it: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = it.len();
    if n == 0 {
        f64::NAN
    } else {
        it.sum::<f64>() / n as f64
    }
}

pub(crate) fn draw_h(config: &CdiExperimentConfig, h_id: usize) -> Result<Vec<f64>> {
    let mut r = rng::stream(config.seed, &[tags::CHANNEL, h_id as u64]);
    sample_rayleigh_vector(config.n_a, config.fading_scale, &mut r)
}

pub(crate) fn draw_g(config: &CdiExperimentConfig, h_id: usize, g_id: usize) -> Result<Vec<f64>> {
    let mut r = rng::stream(config.seed, &[tags::EVE_CHANNEL, h_id as u64, g_id as u64]);
    sample_rayleigh_vector(config.n_a, config.fading_scale, &mut r)
}

type PerH = std::result::Result<(CdiDesign, Vec<BerRecord>), SkippedPair>;

/// Design one code per legitimate channel and test it on `num_g_per_h`
/// eavesdropper draws.
pub fn run_cdi_experiment(config: &CdiExperimentConfig, workers: Option<usize>) -> Result<CdiResults> {
    let problems = config.validate();
    if !problems.is_empty() {
        return Err(Error::invalid("config", problems.join("; ")));
    }
    let per_h: Vec<PerH> = with_workers(workers, || {
        (0..config.num_h)
            .into_par_iter()
            .map(|h_id| -> Result<PerH> {
                let h = draw_h(config, h_id)?;
                let design = match CdiDesign::new(h_id, h, config) {
                    Ok(d) => d,
                    Err(Error::SkippedPair { reason, .. }) => {
                        return Ok(Err(SkippedPair {
                            pair_id: h_id,
                            n: Some(config.n_exponent),
                            reason,
                        }))
                    }
                    Err(e) => return Err(e),
                };
                let records = (0..config.num_g_per_h)
                    .into_par_iter()
                    .map(|g_id| design.measure(g_id, &draw_g(config, h_id, g_id)?, config))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Ok((design, records)))
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut designs = Vec::new();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for item in per_h {
        match item {
            Ok((d, r)) => {
                designs.push(d);
                records.extend(r);
            }
            Err(s) => skipped.push(s),
        }
    }
    let bob: Vec<f64> = records.iter().map(|r| r.bob_ber).collect();
    let eve: Vec<f64> = records.iter().map(|r| r.eve_ber).collect();
    Ok(CdiResults {
        designs,
        bob_cdf: empirical_cdf(&bob),
        eve_cdf: empirical_cdf(&eve),
        records,
        skipped,
    })
}
