use super::config::{construct, rate_to_k, CsiExperimentConfig};
use super::fading::sample_rayleigh_vector;
use super::{tags, transmit, with_workers, BerRecord, Link, SkippedPair};
use crate::capacity::{optimize_power_allocation, PowerOptimum, PowerProblem};
use crate::precoding::{orthonormal_decomposition, ChannelRealization, PrecodingBasis};
use crate::rng;
use crate::wiretap::build_partition;
use crate::{Error, Result};
use rand::RngCore;
use rayon::prelude::*;

/// Power split and capacities chosen for one channel pair.
#[derive(Debug, Clone)]
pub struct CsiPairDesign {
    pub pair_id: usize,
    pub basis: PrecodingBasis,
    pub optimum: PowerOptimum,
}

impl CsiPairDesign {
    /// Optimise the power split for a pair; `SkippedPair` when no split
    /// gives a positive secrecy capacity.
    pub fn new(pair_id: usize, chan: &ChannelRealization, p_t: f64) -> Result<Self> {
        let basis = orthonormal_decomposition(chan.h())?;
        let problem = PowerProblem {
            gains: basis.gains(chan.h(), chan.g()),
            sigma_b_sq: chan.sigma_b_sq(),
            sigma_e_sq: chan.sigma_e_sq(),
            p_t,
            n_a: chan.n_a(),
        };
        let optimum = optimize_power_allocation(&problem)?;
        if !optimum.feasible {
            return Err(Error::SkippedPair {
                pair_id,
                reason: format!("zero secrecy capacity (best C_B - C_E = {:.3e})", optimum.c_s_raw),
            });
        }
        Ok(Self { pair_id, basis, optimum })
    }
}

/// Build the code for block length `2^n` and measure both BERs.
///
/// Bob's code has rate `C_B - delta`, Eve's `C_E`, both at the optimal power
/// split; `SkippedPair` when the rounded rates leave no secret positions.
pub fn run_csi_pair(
    design: &CsiPairDesign,
    chan: &ChannelRealization,
    n: u32,
    config: &CsiExperimentConfig,
) -> Result<BerRecord> {
    let op = &design.optimum.operating_point;
    let len = 1usize << n;
    let k_bob = rate_to_k(op.c_b - config.delta, len, 1);
    let k_eve = rate_to_k(op.c_e, len, 0);
    if k_eve >= k_bob {
        return Err(Error::SkippedPair {
            pair_id: design.pair_id,
            reason: format!("no secret positions at N = {len} (k_bob = {k_bob}, k_eve = {k_eve})"),
        });
    }
    let construction_seed =
        |who: u64| rng::stream(config.seed, &[tags::CONSTRUCT, design.pair_id as u64, n as u64, who]).next_u64();
    let bob = construct(config.construction, op.snr_bob, n, config.mc_samples, construction_seed(0))?;
    let eve = construct(config.construction, op.snr_eve, n, config.mc_samples, construction_seed(1))?;
    let partition = build_partition(&bob, &eve, k_bob, k_eve)?;

    let link = Link {
        basis: &design.basis,
        h: chan.h(),
        g: chan.g(),
        p_u: op.p_u,
        p_v: op.p_v,
        sigma_b_sq: chan.sigma_b_sq(),
        sigma_e_sq: chan.sigma_e_sq(),
    };
    let counts = transmit(
        &link,
        &partition,
        config.bits_per_pair,
        config.seed,
        &[tags::TRANSMIT, design.pair_id as u64, n as u64],
    )?;
    Ok(BerRecord {
        pair_id: design.pair_id,
        h_id: design.pair_id,
        g_id: 0,
        n,
        k_bob,
        k_eve,
        secret_bits: counts.bits,
        bob_errors: counts.bob,
        eve_errors: counts.eve,
        bob_ber: counts.bob as f64 / counts.bits as f64,
        eve_ber: counts.eve as f64 / counts.bits as f64,
        secrecy_rate: partition.secrecy_rate(),
        c_s: design.optimum.c_s_max,
        c_b: op.c_b,
        c_e: op.c_e,
        p_u: op.p_u,
    })
}

/// Mean BERs at one block length.
#[derive(Debug, Clone, PartialEq)]
pub struct CsiSummaryRow {
    pub n: u32,
    pub pairs_measured: usize,
    pub pairs_skipped: usize,
    pub mean_bob_ber: f64,
    pub mean_eve_ber: f64,
    pub mean_secrecy_rate: f64,
    pub secret_bits: usize,
}

#[derive(Debug, Clone)]
pub struct CsiResults {
    pub records: Vec<BerRecord>,
    pub skipped: Vec<SkippedPair>,
    pub summary: Vec<CsiSummaryRow>,
}

/// Draw the pair's channel from its own stream.
pub(crate) fn draw_pair(config: &CsiExperimentConfig, pair_id: usize) -> Result<ChannelRealization> {
    let mut r = rng::stream(config.seed, &[tags::CHANNEL, pair_id as u64]);
    let h = sample_rayleigh_vector(config.n_a, config.fading_scale, &mut r)?;
    let g = sample_rayleigh_vector(config.n_a, config.fading_scale, &mut r)?;
    ChannelRealization::new(h, g, config.sigma_b_sq, config.sigma_e_sq)
}

enum PairOutcome {
    Measured(BerRecord),
    Skipped(SkippedPair),
}

fn skipped_or(err: Error, pair_id: usize, n: Option<u32>) -> Result<PairOutcome> {
    match err {
        Error::SkippedPair { reason, .. } => Ok(PairOutcome::Skipped(SkippedPair { pair_id, n, reason })),
        other => Err(other),
    }
}

/// Run every pair at every block length. `workers = None` uses the global
/// rayon pool; results do not depend on the worker count.
pub fn run_csi_experiment(config: &CsiExperimentConfig, workers: Option<usize>) -> Result<CsiResults> {
    let problems = config.validate();
    if !problems.is_empty() {
        return Err(Error::invalid("config", problems.join("; ")));
    }
    let outcomes: Vec<Vec<PairOutcome>> = with_workers(workers, || {
        (0..config.num_pairs)
            .into_par_iter()
            .map(|pair_id| -> Result<Vec<PairOutcome>> {
                let chan = draw_pair(config, pair_id)?;
                let design = match CsiPairDesign::new(pair_id, &chan, config.p_t) {
                    Ok(d) => d,
                    Err(e) => return skipped_or(e, pair_id, None).map(|o| vec![o]),
                };
                config
                    .n_exponents
                    .par_iter()
                    .map(|&n| match run_csi_pair(&design, &chan, n, config) {
                        Ok(rec) => Ok(PairOutcome::Measured(rec)),
                        Err(e) => skipped_or(e, pair_id, Some(n)),
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes.into_iter().flatten() {
        match o {
            PairOutcome::Measured(r) => records.push(r),
            PairOutcome::Skipped(s) => skipped.push(s),
        }
    }

    let summary = config
        .n_exponents
        .iter()
        .map(|&n| {
            let rows: Vec<&BerRecord> = records.iter().filter(|r| r.n == n).collect();
            let count = rows.len();
            let mean = |f: fn(&BerRecord) -> f64| {
                if count == 0 {
                    f64::NAN
                } else {
                    rows.iter().map(|r| f(r)).sum::<f64>() / count as f64
                }
            };
            CsiSummaryRow {
                n,
                pairs_measured: count,
                pairs_skipped: config.num_pairs - count,
                mean_bob_ber: mean(|r| r.bob_ber),
                mean_eve_ber: mean(|r| r.eve_ber),
                mean_secrecy_rate: mean(|r| r.secrecy_rate),
                secret_bits: rows.iter().map(|r| r.secret_bits).sum(),
            }
        })
        .collect();

    Ok(CsiResults {
        records,
        skipped,
        summary,
    })
}
