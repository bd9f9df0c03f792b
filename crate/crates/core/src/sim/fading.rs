use crate::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Distribution of the per-antenna channel gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    /// Rayleigh magnitude times an independent fair sign.
    SignedRayleigh { scale: f64 },
    /// Zero-mean Gaussian entries (an isotropic vector).
    Gaussian { std_dev: f64 },
}

impl FadingModel {
    pub fn sample<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Result<Vec<f64>> {
        match *self {
            FadingModel::SignedRayleigh { scale } => sample_rayleigh_vector(dim, scale, rng),
            FadingModel::Gaussian { std_dev } => {
                if !(std_dev > 0.0) {
                    return Err(Error::invalid("std_dev", "must be > 0"));
                }
                Ok((0..dim).map(|_| std_dev * rng.sample::<f64, _>(StandardNormal)).collect())
            }
        }
    }
}

/// Entries are `scale * sqrt(-2 ln U)` with a uniform random sign; exact
/// zeros are redrawn.
pub fn sample_rayleigh_vector<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid("scale", format!("must be > 0, got {scale}")));
    }
    let mut out = Vec::with_capacity(dim);
    while out.len() < dim {
        // gen::<f64>() lies in [0, 1); 1 - u lies in (0, 1].
        let u = 1.0 - rng.gen::<f64>();
        let magnitude = scale * (-2.0 * u.ln()).sqrt();
        if magnitude == 0.0 {
            continue;
        }
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        out.push(sign * magnitude);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn rayleigh_mean_magnitude() {
        let mut r = rng::stream(1, &[]);
        let v = sample_rayleigh_vector(1_000_000, 2.0, &mut r).unwrap();
        let mean = v.iter().map(|x| x.abs()).sum::<f64>() / v.len() as f64;
        let want = 2.0 * (std::f64::consts::PI / 2.0).sqrt();
        assert!((mean - want).abs() / want < 0.01);
        assert!(v.iter().all(|&x| x != 0.0));
        let positive = v.iter().filter(|&&x| x > 0.0).count() as f64 / v.len() as f64;
        assert!((positive - 0.5).abs() < 0.005);
    }

    #[test]
    fn seeded() {
        let a = sample_rayleigh_vector(8, 1.0, &mut rng::stream(5, &[1])).unwrap();
        let b = sample_rayleigh_vector(8, 1.0, &mut rng::stream(5, &[1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(sample_rayleigh_vector(2, 0.0, &mut rng::stream(0, &[])).is_err());
    }
}
