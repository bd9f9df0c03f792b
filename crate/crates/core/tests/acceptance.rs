//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use anpolar::capacity::{
    bi_awgn_capacity, bi_awgn_capacity_quadrature, f_series, optimize_power_allocation, PowerProblem,
};
use anpolar::polar::{channel_llr, construct_ga, polar_transform, ScDecoder};
use anpolar::precoding::orthonormal_decomposition;
use anpolar::rng;
use anpolar::sim::{
    run_cdi_experiment, run_csi_experiment, sample_rayleigh_vector, CdiExperimentConfig, ConstructionChoice,
    CsiExperimentConfig,
};
use rand::Rng;
use rand_distr::StandardNormal;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
}

impl Suite {
    fn run(&mut self, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.1?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL  {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn capacity_engine() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for beta in [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0] {
        let series = 1.0 - f_series(beta, 5).map_err(|e| e.to_string())?;
        let quad = bi_awgn_capacity_quadrature(beta).map_err(|e| e.to_string())?;
        let err = (series - quad).abs();
        worst = worst.max(err);
        parts.push(format!("{beta}:{err:.1e}"));
    }
    let c0 = 1.0 - f_series(0.0, 5).map_err(|e| e.to_string())?;
    ensure(
        worst <= 1e-6 && c0.abs() <= 1e-9,
        format!("max |series - quadrature| = {worst:.2e} [{}], C(0) = {c0:.2e}", parts.join(" ")),
    )
}

fn truncation_stability() -> Outcome {
    let v: Vec<f64> = [3, 4, 5].iter().map(|&m| f_series(3.0, m).unwrap()).collect();
    let spread = v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread <= 1e-9, format!("F(3) for 3,4,5 terms = {v:?}, spread {spread:.2e}"))
}

fn precoding_invariants() -> Outcome {
    let mut r = rng::stream(101, &[]);
    let dims = [2usize, 3, 4, 8];
    let mut worst = [0.0f64; 5];
    for trial in 0..1000 {
        let n_a = dims[trial % dims.len()];
        let h: Vec<f64> = (0..n_a).map(|_| r.sample::<f64, _>(StandardNormal) * 3.0).collect();
        let basis = orthonormal_decomposition(&h).map_err(|e| e.to_string())?;
        let hn = h.iter().map(|x| x * x).sum::<f64>().sqrt();
        let p = basis.p();
        let z: Vec<&[f64]> = basis.z_columns().collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        worst[0] = worst[0].max((dot(p, p).sqrt() - 1.0).abs());
        for (j, zj) in z.iter().enumerate() {
            worst[1] = worst[1].max(dot(&h, zj).abs() / hn);
            worst[3] = worst[3].max(dot(p, zj).abs());
            for (k, zk) in z.iter().enumerate() {
                let want = if j == k { 1.0 } else { 0.0 };
                worst[2] = worst[2].max((dot(zj, zk) - want).abs());
            }
        }
        // Bob's observation minus the signal term leaves only his noise.
        let u = if trial % 2 == 0 { 1.7 } else { -1.7 };
        let v: Vec<f64> = (0..n_a - 1).map(|_| 5.0 * r.sample::<f64, _>(StandardNormal)).collect();
        let mut tx = vec![0.0; n_a];
        basis.transmit_into(u, &v, &mut tx);
        let noise: f64 = r.sample(StandardNormal);
        let y = dot(&h, &tx) + noise;
        worst[4] = worst[4].max((y - (dot(&h, p) * u + noise)).abs());
    }
    ensure(
        worst[0] <= 1e-12 && worst[1] <= 1e-10 && worst[2] <= 1e-10 && worst[3] <= 1e-10 && worst[4] <= 1e-10,
        format!(
            "1000 draws: |‖p‖-1| {:.1e}, h^T Z/‖h‖ {:.1e}, Z^T Z - I {:.1e}, p^T Z {:.1e}, AN leakage {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn power_optimizer() -> Outcome {
    // Pairs drawn like the capacity-sweep examples: two antennas, signed
    // Rayleigh gains, noise variances log-uniform on [0.1, 10].
    let mut r = rng::stream(7, &[2]);
    let (mut interior, mut boundary, mut infeasible, mut converted) = (0, 0, 0, 0);
    let mut worst_gap: f64 = f64::MIN;
    for pair in 0..50 {
        let n_a = 2;
        let h = sample_rayleigh_vector(n_a, 1.0, &mut r).unwrap();
        let g = sample_rayleigh_vector(n_a, 1.0, &mut r).unwrap();
        let log_uniform = |r: &mut rng::StreamRng| (0.1f64.ln() + (10.0f64.ln() - 0.1f64.ln()) * r.gen::<f64>()).exp();
        let sigma_b_sq = log_uniform(&mut r);
        let sigma_e_sq = log_uniform(&mut r);
        let basis = orthonormal_decomposition(&h).map_err(|e| e.to_string())?;
        let problem = |p_t| PowerProblem {
            gains: basis.gains(&h, &g),
            sigma_b_sq,
            sigma_e_sq,
            p_t,
            n_a,
        };
        let p10 = problem(10.0);
        let opt10 = optimize_power_allocation(&p10).map_err(|e| e.to_string())?;
        // P_u = 0 sends nothing and scores exactly zero; the raw curve is
        // compared on P_u > 0 and the clamped optimum against the full grid.
        let grid_raw = (1..=10_000)
            .map(|j| p10.evaluate(10.0 * j as f64 / 10_000.0).unwrap().c_s())
            .fold(f64::MIN, f64::max);
        let grid_best = grid_raw.max(0.0);
        worst_gap = worst_gap.max(grid_raw - opt10.c_s_raw).max(grid_best - opt10.c_s_max);
        if opt10.c_s_max < grid_best - 1e-6 || opt10.c_s_raw < grid_raw - 1e-6 {
            return Err(format!(
                "pair {pair}: optimum {} (raw {}) below grid {} (raw {})",
                opt10.c_s_max, opt10.c_s_raw, grid_best, grid_raw
            ));
        }
        let opt20 = optimize_power_allocation(&problem(20.0)).map_err(|e| e.to_string())?;
        if opt20.c_s_max < opt10.c_s_max {
            return Err(format!("pair {pair}: C_S* fell from {} to {}", opt10.c_s_max, opt20.c_s_max));
        }
        if !opt10.feasible {
            infeasible += 1;
            converted += usize::from(opt20.feasible);
        } else if opt10.p_u_opt >= 10.0 * (1.0 - 1e-6) {
            boundary += 1;
        } else {
            interior += 1;
        }
    }
    ensure(
        interior >= 1 && boundary >= 1 && infeasible >= 1 && converted >= 1,
        format!(
            "50 pairs at P_t = 10: {interior} interior, {boundary} boundary, {infeasible} infeasible \
             ({converted} feasible at P_t = 20); grid best - optimum <= {worst_gap:.1e}"
        ),
    )
}

fn polar_core() -> Outcome {
    for word in 0u16..256 {
        let u: Vec<u8> = (0..8).map(|i| ((word >> i) & 1) as u8).collect();
        if polar_transform(&polar_transform(&u).unwrap()).unwrap() != u {
            return Err(format!("involution fails at N = 8 for {u:?}"));
        }
    }
    let mut r = rng::stream(11, &[]);
    for _ in 0..200 {
        let u: Vec<u8> = (0..1024).map(|_| r.gen_range(0..2)).collect();
        if polar_transform(&polar_transform(&u).unwrap()).unwrap() != u {
            return Err("involution fails at N = 1024".into());
        }
    }

    // Rate C - 0.11 at the amplitude SNR where C = 0.5.
    let (mut lo, mut hi) = (0.0, 4.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if bi_awgn_capacity(mid).unwrap() < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta: f64 = 0.5 * (lo + hi);
    let n = 11;
    let len = 1usize << n;
    let k = (len as f64 * (bi_awgn_capacity(beta).unwrap() - 0.11)).round() as usize;
    let code = construct_ga(beta * beta, n).unwrap().select_info_set(k).unwrap();
    let frozen = code.frozen_pattern();
    let mut decoder = ScDecoder::new(len).unwrap();
    let mut out = vec![0u8; len];

    let random_word = |r: &mut rng::StreamRng| -> Vec<u8> {
        frozen.iter().map(|f| f.unwrap_or_else(|| r.gen_range(0..2))).collect()
    };
    for _ in 0..20 {
        let u = random_word(&mut r);
        let x = polar_transform(&u).unwrap();
        let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { 50.0 } else { -50.0 }).collect();
        decoder.decode_into(&llrs, &frozen, &mut out).unwrap();
        if out != u {
            return Err("noiseless round trip failed".into());
        }
    }

    let trials = 500;
    let mut block_errors = 0;
    for _ in 0..trials {
        let u = random_word(&mut r);
        let x = polar_transform(&u).unwrap();
        let llrs: Vec<f64> = x
            .iter()
            .map(|&b| {
                let s = if b == 0 { beta } else { -beta };
                channel_llr(s + r.sample::<f64, _>(StandardNormal), 1.0, beta, 1.0)
            })
            .collect();
        decoder.decode_into(&llrs, &frozen, &mut out).unwrap();
        block_errors += usize::from(out != u);
    }
    let bler = block_errors as f64 / trials as f64;
    ensure(
        bler < 0.05,
        format!("involution and round trip exact; N = 2048, beta = {beta:.4}, k = {k}: BLER {bler:.3} over {trials}"),
    )
}

fn degradation_nesting() -> Outcome {
    let betas = [0.5, 1.0, 1.5, 2.0];
    let codes: Vec<_> = betas.iter().map(|b: &f64| construct_ga(b * b, 10).unwrap()).collect();
    let mut checked = 0;
    for t in [0.3, 1e-1, 1e-2, 1e-3, 1e-5, 1e-8] {
        for w in codes.windows(2) {
            let worse = w[0].select_by_threshold(t);
            let better = w[1].select_by_threshold(t);
            if !worse.info_set().iter().all(|i| better.info_set().binary_search(i).is_ok()) {
                return Err(format!("threshold {t}: set at SNR {} not inside set at SNR {}", w[0].snr(), w[1].snr()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} adjacent (beta, threshold) pairs nested at N = 1024"))
}

fn csi_config(seed: u64) -> CsiExperimentConfig {
    CsiExperimentConfig {
        n_a: 4,
        p_t: 3.0,
        sigma_b_sq: 1.0,
        sigma_e_sq: 1.0,
        delta: 0.11,
        n_exponents: vec![6, 8, 10, 11],
        num_pairs: 20,
        bits_per_pair: 1000,
        fading_scale: 1.0,
        construction: ConstructionChoice::Ga,
        mc_samples: 20_000,
        seed,
    }
}

fn cdi_config(seed: u64) -> CdiExperimentConfig {
    CdiExperimentConfig {
        n_a: 4,
        p_t: 5.0,
        sigma_b_sq: 1.0,
        sigma_e_sq: 1.0,
        p0: 0.85,
        delta: 0.14,
        n_exponent: 12,
        num_h: 10,
        num_g_per_h: 10,
        eta_samples: 100_000,
        bits_per_pair: 1000,
        fading_scale: 1.0,
        construction: ConstructionChoice::Ga,
        mc_samples: 20_000,
        seed,
    }
}

fn csi_experiment() -> Outcome {
    let res = run_csi_experiment(&csi_config(1), None).map_err(|e| e.to_string())?;
    let rows = &res.summary;
    let eve_ok = rows.iter().all(|r| (0.45..=0.55).contains(&r.mean_eve_ber));
    let bob: Vec<f64> = rows.iter().filter(|r| r.n >= 8).map(|r| r.mean_bob_ber).collect();
    // A measured BER of zero is the estimator's floor: consecutive zeros
    // count as decreasing, but the end point must be below the start.
    let decreasing = bob.windows(2).all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0)) && bob[bob.len() - 1] < bob[0];
    let last = rows.iter().find(|r| r.n == 11).map(|r| r.mean_bob_ber).unwrap_or(f64::NAN);
    let table: Vec<String> = rows
        .iter()
        .map(|r| format!("N=2^{}: bob {:.2e} eve {:.4}", r.n, r.mean_bob_ber, r.mean_eve_ber))
        .collect();
    ensure(
        eve_ok && decreasing && last <= 1e-2,
        format!("{}; {} pairs skipped", table.join(", "), res.skipped.len()),
    )
}

fn cdi_experiment() -> Outcome {
    let res = run_cdi_experiment(&cdi_config(1), None).map_err(|e| e.to_string())?;
    let bob = res.mean_bob_ber();
    let eve = res.mean_eve_ber();
    let zero = res.records.iter().filter(|r| r.bob_errors == 0).count();
    let total = res.records.len();
    ensure(
        (0.47..=0.53).contains(&eve) && bob <= 2e-2 && 2 * zero > total,
        format!(
            "{total} pairs: Eve mean {eve:.4}, Bob mean {bob:.2e}, {zero} pairs with zero Bob errors; {} channels skipped",
            res.skipped.len()
        ),
    )
}

fn reproducibility() -> Outcome {
    let csi = CsiExperimentConfig {
        num_pairs: 8,
        n_exponents: vec![6, 9],
        ..csi_config(5)
    };
    let cdi = CdiExperimentConfig {
        num_h: 4,
        num_g_per_h: 4,
        n_exponent: 9,
        eta_samples: 20_000,
        ..cdi_config(5)
    };
    // What a manifest stores: the configuration as text and the seed.
    let reload_csi = |c: &CsiExperimentConfig| {
        let mut back: CsiExperimentConfig = serde_json::from_str(&serde_json::to_string(c).unwrap()).unwrap();
        back.seed = c.seed;
        back
    };
    let reload_cdi = |c: &CdiExperimentConfig| {
        let mut back: CdiExperimentConfig = serde_json::from_str(&serde_json::to_string(c).unwrap()).unwrap();
        back.seed = c.seed;
        back
    };
    let base_csi = run_csi_experiment(&csi, Some(1)).map_err(|e| e.to_string())?;
    let base_cdi = run_cdi_experiment(&cdi, Some(1)).map_err(|e| e.to_string())?;
    for workers in [1, 2, 8] {
        let a = run_csi_experiment(&reload_csi(&csi), Some(workers)).map_err(|e| e.to_string())?;
        if a.records != base_csi.records || a.skipped != base_csi.skipped || a.summary != base_csi.summary {
            return Err(format!("CSI results differ with {workers} workers"));
        }
        let b = run_cdi_experiment(&reload_cdi(&cdi), Some(workers)).map_err(|e| e.to_string())?;
        if b.records != base_cdi.records || b.skipped != base_cdi.skipped {
            return Err(format!("CDI results differ with {workers} workers"));
        }
    }
    Ok(format!(
        "CSI ({} records) and CDI ({} records) identical for 1, 2 and 8 workers after a config round trip",
        base_csi.records.len(),
        base_cdi.records.len()
    ))
}

fn not_reproducible_disclosure() -> Outcome {
    // Point values hinge on the channel draws: a different seed moves them
    // while the aggregate criteria above are what is checked.
    let small = |seed| CsiExperimentConfig {
        num_pairs: 4,
        n_exponents: vec![7],
        bits_per_pair: 300,
        ..csi_config(seed)
    };
    let a = run_csi_experiment(&small(1), None).map_err(|e| e.to_string())?;
    let b = run_csi_experiment(&small(2), None).map_err(|e| e.to_string())?;
    let cs = |r: &anpolar::sim::CsiResults| r.records.iter().map(|x| x.c_s).collect::<Vec<_>>();
    ensure(
        cs(&a) != cs(&b),
        "exact capacity curves and per-length BERs depend on unpublished channel draws (seed 1 vs 2 differ); \
         only qualitative and aggregate behaviour is compared"
            .into(),
    )
}

fn main() {
    let mut suite = Suite { failed: 0 };
    let s = Duration::from_secs;
    suite.run("capacity engine correctness", s(1), capacity_engine);
    suite.run("series truncation stability", s(1), truncation_stability);
    suite.run("precoding invariants", s(5), precoding_invariants);
    suite.run("power optimizer", s(30), power_optimizer);
    suite.run("polar core", s(120), polar_core);
    suite.run("degradation nesting", s(10), degradation_nesting);
    suite.run("CSI experiment (scaled)", s(600), csi_experiment);
    suite.run("CDI experiment (scaled)", s(900), cdi_experiment);
    suite.run("reproducibility", s(900), reproducibility);
    suite.run("not-reproducible disclosure", s(60), not_reproducible_disclosure);
    println!("acceptance: {} failed", suite.failed);
    if suite.failed > 0 {
        std::process::exit(1);
    }
}
