use crate::config::{self, CapacitySweepConfig, PairSpec};
use crate::manifest::RunRecorder;
use crate::{config_err, runtime, CliError, Common, Method};
use anpolar::capacity::{optimize_power_allocation, PowerOptimum, PowerProblem};
use anpolar::polar::{construct_ga, construct_mc, ConstructionRecord};
use anpolar::precoding::{orthonormal_decomposition, ChannelRealization, PrecodingBasis};
use anpolar::rng;
use anpolar::sim::{
    fmt_f64, run_cdi_experiment, run_csi_experiment, sample_rayleigh_vector, CdiExperimentConfig,
    CsiExperimentConfig, TsvTable,
};
use rand::Rng;
use std::path::PathBuf;

const DEFAULT_OUT: &str = "anpolar-out";
/// Stream tag for capacity-sweep channel draws.
const SWEEP_TAG: u64 = 101;

fn out_dir(common: &Common) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn require_config(common: &Common, command: &str) -> Result<PathBuf, CliError> {
    common
        .config
        .clone()
        .ok_or_else(|| config_err(format!("{command} needs --config PATH")))
}

fn require_seed(seed: Option<u64>, why: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| config_err(format!("--seed is required {why}")))
}

fn check_problems(problems: Vec<String>) -> Result<(), CliError> {
    if problems.is_empty() {
        Ok(())
    } else {
        Err(config_err(format!("\n  {}", problems.join("\n  "))))
    }
}

fn write_table(rec: &mut RunRecorder, name: &str, table: &TsvTable) -> Result<(), CliError> {
    let path = rec.path(name);
    table.write(&path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    rec.add_output(name);
    Ok(())
}

fn join(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",")
}

struct Pair {
    chan: ChannelRealization,
    basis: PrecodingBasis,
}

fn pair_from_spec(i: usize, s: &PairSpec) -> Result<Pair, CliError> {
    let chan = ChannelRealization::new(s.h.clone(), s.g.clone(), s.sigma_b_sq, s.sigma_e_sq)
        .map_err(|e| config_err(format!("pairs[{i}]: {e}")))?;
    let basis = orthonormal_decomposition(chan.h()).map_err(|e| config_err(format!("pairs[{i}]: {e}")))?;
    Ok(Pair { chan, basis })
}

fn problem(pair: &Pair, p_t: f64) -> PowerProblem {
    PowerProblem {
        gains: pair.basis.gains(pair.chan.h(), pair.chan.g()),
        sigma_b_sq: pair.chan.sigma_b_sq(),
        sigma_e_sq: pair.chan.sigma_e_sq(),
        p_t,
        n_a: pair.chan.n_a(),
    }
}

fn regime(opt: &PowerOptimum, p_t: f64) -> &'static str {
    if !opt.feasible {
        "infeasible"
    } else if opt.p_u_opt >= p_t * (1.0 - 1e-6) {
        "boundary"
    } else {
        "interior"
    }
}

pub fn capacity_sweep(common: &Common) -> Result<(), CliError> {
    let path = require_config(common, "capacity-sweep")?;
    let loaded = config::load::<CapacitySweepConfig>(&path, "capacity-sweep")?;
    let cfg = loaded.config;
    check_problems(cfg.validate())?;
    let seed = config::resolve_seed(common.seed, loaded.seed);
    let mut specs = cfg.pairs.clone();
    if cfg.random_pairs > 0 {
        let seed = require_seed(seed, "when random_pairs > 0")?;
        let n_a = cfg.n_a.unwrap_or(2);
        let (lo, hi) = (cfg.sigma_sq_min.ln(), cfg.sigma_sq_max.ln());
        for i in 0..cfg.random_pairs {
            let mut r = rng::stream(seed, &[SWEEP_TAG, i as u64]);
            let h = sample_rayleigh_vector(n_a, cfg.fading_scale, &mut r).map_err(runtime)?;
            let g = sample_rayleigh_vector(n_a, cfg.fading_scale, &mut r).map_err(runtime)?;
            let mut log_uniform = || (lo + (hi - lo) * r.gen::<f64>()).exp();
            let sigma_b_sq = log_uniform();
            let sigma_e_sq = log_uniform();
            specs.push(PairSpec {
                h,
                g,
                sigma_b_sq,
                sigma_e_sq,
            });
        }
    }
    let pairs = specs
        .iter()
        .enumerate()
        .map(|(i, s)| pair_from_spec(i, s))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rec = RunRecorder::start(&out_dir(common), "capacity-sweep", &cfg, seed, common.workers)?;
    let mut curve = TsvTable::new(&["pair_id", "p_u", "p_v", "snr_bob", "snr_eve", "c_b", "c_e", "c_s"]);
    let mut summary = TsvTable::new(&[
        "pair_id",
        "n_a",
        "h",
        "g",
        "sigma_b_sq",
        "sigma_e_sq",
        "p_t",
        "p_u_opt",
        "p_v_opt",
        "c_s_max",
        "c_s_raw",
        "feasible",
        "regime",
    ]);
    for (id, pair) in pairs.iter().enumerate() {
        let prob = problem(pair, cfg.p_t);
        for j in 0..=cfg.grid_points {
            let p_u = cfg.p_t * j as f64 / cfg.grid_points as f64;
            let op = prob.evaluate(p_u).map_err(runtime)?;
            curve.push(vec![
                id.to_string(),
                fmt_f64(op.p_u),
                fmt_f64(op.p_v),
                fmt_f64(op.snr_bob),
                fmt_f64(op.snr_eve),
                fmt_f64(op.c_b),
                fmt_f64(op.c_e),
                fmt_f64(op.c_s()),
            ]);
        }
        let opt = optimize_power_allocation(&prob).map_err(runtime)?;
        summary.push(vec![
            id.to_string(),
            pair.chan.n_a().to_string(),
            join(pair.chan.h()),
            join(pair.chan.g()),
            fmt_f64(pair.chan.sigma_b_sq()),
            fmt_f64(pair.chan.sigma_e_sq()),
            fmt_f64(cfg.p_t),
            fmt_f64(opt.p_u_opt),
            fmt_f64(opt.p_v_opt),
            fmt_f64(opt.c_s_max),
            fmt_f64(opt.c_s_raw),
            opt.feasible.to_string(),
            regime(&opt, cfg.p_t).to_string(),
        ]);
    }
    write_table(&mut rec, "results.tsv", &curve)?;
    write_table(&mut rec, "summary.tsv", &summary)?;
    rec.finish()
}

pub fn power_opt(common: &Common, inline: config::InlinePair) -> Result<(), CliError> {
    let cfg = inline.resolve(common.config.as_deref())?;
    if !(cfg.p_t > 0.0 && cfg.p_t.is_finite()) {
        return Err(config_err(format!("p_t: must be > 0, got {}", cfg.p_t)));
    }
    let pair = pair_from_spec(
        0,
        &PairSpec {
            h: cfg.h.clone(),
            g: cfg.g.clone(),
            sigma_b_sq: cfg.sigma_b_sq,
            sigma_e_sq: cfg.sigma_e_sq,
        },
    )?;
    let opt = optimize_power_allocation(&problem(&pair, cfg.p_t)).map_err(runtime)?;
    let op = &opt.operating_point;
    let mut table = TsvTable::new(&[
        "p_u_opt", "p_v_opt", "c_s_max", "c_s_raw", "feasible", "regime", "snr_bob", "snr_eve", "c_b", "c_e",
    ]);
    table.push(vec![
        fmt_f64(opt.p_u_opt),
        fmt_f64(opt.p_v_opt),
        fmt_f64(opt.c_s_max),
        fmt_f64(opt.c_s_raw),
        opt.feasible.to_string(),
        regime(&opt, cfg.p_t).to_string(),
        fmt_f64(op.snr_bob),
        fmt_f64(op.snr_eve),
        fmt_f64(op.c_b),
        fmt_f64(op.c_e),
    ]);
    print!("{}", table.render());
    if let Some(dir) = &common.out {
        let mut rec = RunRecorder::start(dir, "power-opt", &cfg, common.seed, common.workers)?;
        write_table(&mut rec, "results.tsv", &table)?;
        rec.finish()?;
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct ConstructArgs {
    n: u32,
    snr: f64,
    method: &'static str,
    samples: Option<u64>,
    k: Option<usize>,
}

pub fn construct(
    common: &Common,
    n: u32,
    snr: f64,
    method: Method,
    samples: u64,
    k: Option<usize>,
) -> Result<(), CliError> {
    if !(1..=24).contains(&n) {
        return Err(config_err(format!("n: must lie in 1..=24, got {n}")));
    }
    if !(snr >= 0.0 && snr.is_finite()) {
        return Err(config_err(format!("snr: must be finite and >= 0, got {snr}")));
    }
    if let Some(k) = k {
        if k > 1usize << n {
            return Err(config_err(format!("k: {k} exceeds block length {}", 1usize << n)));
        }
    }
    let args = ConstructArgs {
        n,
        snr,
        method: match method {
            Method::Mc => "mc",
            Method::Ga => "ga",
        },
        samples: (method == Method::Mc).then_some(samples),
        k,
    };
    let seed = match method {
        Method::Mc => {
            if samples == 0 {
                return Err(config_err("samples: must be positive"));
            }
            Some(require_seed(common.seed, "for --method mc")?)
        }
        Method::Ga => common.seed,
    };
    let mut rec = RunRecorder::start(&out_dir(common), "construct", &args, seed, common.workers)?;
    let build = || match (method, seed) {
        (Method::Mc, Some(seed)) => construct_mc(snr, n, samples, seed),
        _ => construct_ga(snr, n),
    };
    let code = match common.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(runtime)?
            .install(build),
        None => build(),
    }
    .map_err(runtime)?;
    let code = match k {
        Some(k) => code.select_info_set(k).map_err(runtime)?,
        None => code,
    };
    let record = ConstructionRecord::from(&code);
    let name = "construction.json";
    let file = std::fs::File::create(rec.path(name)).map_err(runtime)?;
    record.write_json(std::io::BufWriter::new(file)).map_err(runtime)?;
    rec.add_output(name);
    println!("{}", record.fingerprint());
    rec.finish()
}

fn load_experiment<T: serde::de::DeserializeOwned>(common: &Common, command: &str) -> Result<(T, u64), CliError> {
    let path = require_config(common, command)?;
    let loaded = config::load::<T>(&path, command)?;
    let seed = require_seed(
        config::resolve_seed(common.seed, loaded.seed),
        "for experiments (or pass a manifest that records one)",
    )?;
    Ok((loaded.config, seed))
}

pub fn simulate_csi(common: &Common) -> Result<(), CliError> {
    let (mut cfg, seed): (CsiExperimentConfig, u64) = load_experiment(common, "simulate-csi")?;
    cfg.seed = seed;
    check_problems(cfg.validate())?;
    let mut rec = RunRecorder::start(&out_dir(common), "simulate-csi", &cfg, Some(seed), common.workers)?;
    let res = run_csi_experiment(&cfg, common.workers).map_err(runtime)?;
    write_table(&mut rec, "results.tsv", &TsvTable::ber_records(&res.records))?;
    write_table(&mut rec, "summary.tsv", &TsvTable::csi_summary(&res))?;
    write_table(&mut rec, "skipped.tsv", &TsvTable::skipped(&res.skipped))?;
    for row in &res.summary {
        println!(
            "N = {:>5}: pairs {:>3}, Bob BER {:.3e}, Eve BER {:.4}",
            1u64 << row.n,
            row.pairs_measured,
            row.mean_bob_ber,
            row.mean_eve_ber
        );
    }
    rec.finish()
}

pub fn simulate_cdi(common: &Common) -> Result<(), CliError> {
    let (mut cfg, seed): (CdiExperimentConfig, u64) = load_experiment(common, "simulate-cdi")?;
    cfg.seed = seed;
    check_problems(cfg.validate())?;
    let mut rec = RunRecorder::start(&out_dir(common), "simulate-cdi", &cfg, Some(seed), common.workers)?;
    let res = run_cdi_experiment(&cfg, common.workers).map_err(runtime)?;
    write_table(&mut rec, "results.tsv", &TsvTable::ber_records(&res.records))?;
    write_table(&mut rec, "summary.tsv", &TsvTable::cdi_summary(&res))?;
    write_table(&mut rec, "skipped.tsv", &TsvTable::skipped(&res.skipped))?;
    let mut designs = TsvTable::new(&["h_id", "h", "eta0", "p_u", "p_v", "c_b", "c_e", "c_s", "k_bob", "k_eve"]);
    for d in &res.designs {
        let op = &d.optimum.operating_point;
        designs.push(vec![
            d.h_id.to_string(),
            join(&d.h),
            fmt_f64(d.eta0),
            fmt_f64(op.p_u),
            fmt_f64(op.p_v),
            fmt_f64(op.c_b),
            fmt_f64(op.c_e),
            fmt_f64(d.optimum.c_s_max),
            d.k_bob.to_string(),
            d.k_eve.to_string(),
        ]);
    }
    write_table(&mut rec, "designs.tsv", &designs)?;
    println!(
        "{} pairs: Bob BER {:.3e}, Eve BER {:.4}",
        res.records.len(),
        res.mean_bob_ber(),
        res.mean_eve_ber()
    );
    rec.finish()
}
