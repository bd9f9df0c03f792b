use super::fading::FadingModel;
use crate::precoding::PrecodingBasis;
use crate::{Error, Result};
use rand::Rng;

/// `|g^T p|^2 / ||g^T Z||^2`, or `None` when `g` has no null-space part.
pub fn eta_of(basis: &PrecodingBasis, g: &[f64]) -> Option<f64> {
    let gp = basis.project_p(g);
    let gz: f64 = basis.project_z(g).iter().map(|x| x * x).sum();
    if gz > 0.0 {
        Some(gp * gp / gz)
    } else {
        None
    }
}

/// Empirical `p0`-quantile of `eta` over `eta_samples` eavesdropper draws.
///
/// Draws with `||g^T Z|| = 0` are redrawn; more than 0.1% of them is an
/// error. The quantile is the smallest sample whose empirical CDF reaches
/// `p0`.
pub fn estimate_eta_quantile<R: Rng + ?Sized>(
    model: &FadingModel,
    basis: &PrecodingBasis,
    p0: f64,
    eta_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::invalid("p0", format!("must lie in (0, 1), got {p0}")));
    }
    if eta_samples == 0 {
        return Err(Error::invalid("eta_samples", "must be positive"));
    }
    let limit = eta_samples / 1000;
    let mut degenerate = 0;
    let mut etas = Vec::with_capacity(eta_samples);
    while etas.len() < eta_samples {
        let g = model.sample(basis.n_a(), rng)?;
        match eta_of(basis, &g) {
            Some(e) => etas.push(e),
            None => {
                degenerate += 1;
                if degenerate > limit {
                    return Err(Error::DegenerateSample {
                        degenerate,
                        total: etas.len() + degenerate,
                    });
                }
            }
        }
    }
    etas.sort_by(f64::total_cmp);
    let rank = ((p0 * eta_samples as f64).ceil() as usize).clamp(1, eta_samples);
    Ok(etas[rank - 1])
}
