use crate::manifest::Manifest;
use crate::{config_err, CliError};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A configuration as loaded, plus the seed a manifest carried.
pub struct Loaded<T> {
    pub config: T,
    pub seed: Option<u64>,
}

/// Read a TOML configuration, or the configuration stored in a manifest
/// (`.json`) written by an earlier run of `command`.
pub fn load<T: DeserializeOwned>(path: &Path, command: &str) -> Result<Loaded<T>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        if manifest.command != command {
            return Err(config_err(format!(
                "{}: manifest is for `{}`, not `{command}`",
                path.display(),
                manifest.command
            )));
        }
        let config = serde_json::from_value(manifest.config)
            .map_err(|e| config_err(format!("{}: config: {e}", path.display())))?;
        return Ok(Loaded {
            config,
            seed: manifest.seed,
        });
    }
    let config = toml::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    Ok(Loaded { config, seed: None })
}

/// Command-line seed first, then the manifest's.
pub fn resolve_seed(flag: Option<u64>, loaded: Option<u64>) -> Option<u64> {
    flag.or(loaded)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub h: Vec<f64>,
    pub g: Vec<f64>,
    pub sigma_b_sq: f64,
    pub sigma_e_sq: f64,
}

fn default_grid() -> usize {
    1000
}

fn one() -> f64 {
    1.0
}

/// Channel pairs listed explicitly and/or drawn at random.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacitySweepConfig {
    pub p_t: f64,
    /// Grid intervals on `[0, p_t]`.
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default)]
    pub pairs: Vec<PairSpec>,
    /// Extra pairs drawn with signed-Rayleigh gains.
    #[serde(default)]
    pub random_pairs: usize,
    /// Antennas of the random pairs.
    #[serde(default)]
    pub n_a: Option<usize>,
    /// Noise variances of random pairs are log-uniform on this range.
    #[serde(default = "one")]
    pub sigma_sq_min: f64,
    #[serde(default = "one")]
    pub sigma_sq_max: f64,
    #[serde(default = "one")]
    pub fading_scale: f64,
}

impl CapacitySweepConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut p = Vec::new();
        if !(self.p_t > 0.0 && self.p_t.is_finite()) {
            p.push(format!("p_t: must be > 0, got {}", self.p_t));
        }
        if self.grid_points == 0 {
            p.push("grid_points: must be positive".into());
        }
        if self.pairs.is_empty() && self.random_pairs == 0 {
            p.push("pairs: give at least one pair or set random_pairs".into());
        }
        if self.random_pairs > 0 {
            match self.n_a {
                Some(n) if n >= 2 => {}
                _ => p.push("n_a: random pairs need n_a >= 2".into()),
            }
            let ok = self.sigma_sq_min > 0.0 && self.sigma_sq_min <= self.sigma_sq_max && self.sigma_sq_max.is_finite();
            if !ok {
                p.push(format!(
                    "sigma_sq_min, sigma_sq_max: need 0 < min <= max, got [{}, {}]",
                    self.sigma_sq_min, self.sigma_sq_max
                ));
            }
            if !(self.fading_scale > 0.0 && self.fading_scale.is_finite()) {
                p.push(format!("fading_scale: must be > 0, got {}", self.fading_scale));
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerOptConfig {
    pub h: Vec<f64>,
    pub g: Vec<f64>,
    pub sigma_b_sq: f64,
    pub sigma_e_sq: f64,
    pub p_t: f64,
}

/// `power-opt` values given as flags; they override the file.
#[derive(Debug, Default)]
pub struct InlinePair {
    pub h: Option<Vec<f64>>,
    pub g: Option<Vec<f64>>,
    pub sigma_b_sq: Option<f64>,
    pub sigma_e_sq: Option<f64>,
    pub p_t: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialPowerOpt {
    h: Option<Vec<f64>>,
    g: Option<Vec<f64>>,
    sigma_b_sq: Option<f64>,
    sigma_e_sq: Option<f64>,
    p_t: Option<f64>,
}

impl InlinePair {
    pub fn resolve(self, file: Option<&Path>) -> Result<PowerOptConfig, CliError> {
        let base: PartialPowerOpt = match file {
            Some(path) => load(path, "power-opt")?.config,
            None => PartialPowerOpt::default(),
        };
        let missing = |name: &str| config_err(format!("{name}: missing (pass --{} or set it in --config)", name.replace('_', "-")));
        Ok(PowerOptConfig {
            h: self.h.or(base.h).ok_or_else(|| missing("h"))?,
            g: self.g.or(base.g).ok_or_else(|| missing("g"))?,
            sigma_b_sq: self.sigma_b_sq.or(base.sigma_b_sq).ok_or_else(|| missing("sigma_b_sq"))?,
            sigma_e_sq: self.sigma_e_sq.or(base.sigma_e_sq).ok_or_else(|| missing("sigma_e_sq"))?,
            p_t: self.p_t.or(base.p_t).ok_or_else(|| missing("p_t"))?,
        })
    }
}
