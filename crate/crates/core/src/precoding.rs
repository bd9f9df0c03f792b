//! Artificial-noise precoding for a real MISO channel.
//!
//! The transmitter sends `x = p*u + Z*v`, where `p` is the unit vector along
//! the legitimate channel `h` and the columns of `Z` span the null space of
//! `h^T`. Bob never sees the artificial noise `v`; Eve generally does.
//!
//! `Z` is not unique. Only its column span matters, so callers (and tests)
//! should rely on the basis invariants rather than on particular entries.

use crate::{Error, Result};

/// One fading draw: legitimate and eavesdropper channel vectors plus the
/// receivers' noise variances (linear scale).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    h: Vec<f64>,
    g: Vec<f64>,
    sigma_b_sq: f64,
    sigma_e_sq: f64,
}

impl ChannelRealization {
    /// `sigma_e_sq = 0` is allowed and models a noiseless eavesdropper.
    pub fn new(h: Vec<f64>, g: Vec<f64>, sigma_b_sq: f64, sigma_e_sq: f64) -> Result<Self> {
        if h.len() < 2 {
            return Err(Error::TooFewAntennas(h.len()));
        }
        if g.len() != h.len() {
            return Err(Error::DimensionMismatch {
                expected: h.len(),
                actual: g.len(),
            });
        }
        if h.iter().chain(&g).any(|x| !x.is_finite()) {
            return Err(Error::invalid("channel", "entries must be finite"));
        }
        let norm = norm2(&h);
        if norm < ZERO_CHANNEL_TOL {
            return Err(Error::ZeroChannel(norm));
        }
        if !(sigma_b_sq > 0.0 && sigma_b_sq.is_finite()) {
            return Err(Error::invalid("sigma_b_sq", format!("must be > 0, got {sigma_b_sq}")));
        }
        if !(sigma_e_sq >= 0.0 && sigma_e_sq.is_finite()) {
            return Err(Error::invalid("sigma_e_sq", format!("must be >= 0, got {sigma_e_sq}")));
        }
        Ok(Self {
            h,
            g,
            sigma_b_sq,
            sigma_e_sq,
        })
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn sigma_b_sq(&self) -> f64 {
        self.sigma_b_sq
    }

    pub fn sigma_e_sq(&self) -> f64 {
        self.sigma_e_sq
    }

    pub fn n_a(&self) -> usize {
        self.h.len()
    }
}

const ZERO_CHANNEL_TOL: f64 = 1e-12;

/// Signal/noise power split satisfying `p_u + (n_a - 1) * p_v = p_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    pub p_u: f64,
    pub p_v: f64,
    pub p_t: f64,
    pub n_a: usize,
}

impl PowerAllocation {
    /// Spend `p_u` on the signal and spread the rest evenly over the
    /// `n_a - 1` artificial-noise dimensions.
    pub fn from_signal_power(p_u: f64, p_t: f64, n_a: usize) -> Result<Self> {
        if !(p_t > 0.0 && p_t.is_finite()) {
            return Err(Error::InvalidBudget(p_t));
        }
        if n_a < 2 {
            return Err(Error::TooFewAntennas(n_a));
        }
        if !(p_u > 0.0 && p_u <= p_t * (1.0 + 1e-12)) {
            return Err(Error::invalid("p_u", format!("must lie in (0, {p_t}], got {p_u}")));
        }
        let p_u = p_u.min(p_t);
        let p_v = (p_t - p_u) / (n_a - 1) as f64;
        Ok(Self { p_u, p_v, p_t, n_a })
    }

    /// Residual of the power equality; zero for a well-formed allocation.
    pub fn constraint_residual(&self) -> f64 {
        self.p_u + (self.n_a - 1) as f64 * self.p_v - self.p_t
    }
}

/// Effective scalar gains after precoding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGains {
    /// `|h^T p|^2`
    pub bob_gain: f64,
    /// `|g^T p|^2`
    pub eve_gain: f64,
    /// `||g^T Z||^2`
    pub eve_an_gain: f64,
}

/// Orthonormal basis `[p, Z]` adapted to a legitimate channel vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecodingBasis {
    p: Vec<f64>,
    /// Column-major, `n_a` rows by `n_a - 1` columns.
    z: Vec<f64>,
}

impl PrecodingBasis {
    pub fn n_a(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Column `j` of `Z`, `0 <= j < n_a - 1`.
    pub fn z_column(&self, j: usize) -> &[f64] {
        let n = self.n_a();
        &self.z[j * n..(j + 1) * n]
    }

    pub fn z_columns(&self) -> impl Iterator<Item = &[f64]> {
        self.z.chunks_exact(self.n_a())
    }

    /// `a^T p`
    pub fn project_p(&self, a: &[f64]) -> f64 {
        dot(a, &self.p)
    }

    /// `a^T Z`, one entry per null-space column.
    pub fn project_z(&self, a: &[f64]) -> Vec<f64> {
        self.z_columns().map(|c| dot(a, c)).collect()
    }

    pub fn gains(&self, h: &[f64], g: &[f64]) -> ChannelGains {
        let hp = self.project_p(h);
        let gp = self.project_p(g);
        ChannelGains {
            bob_gain: hp * hp,
            eve_gain: gp * gp,
            eve_an_gain: self.project_z(g).iter().map(|x| x * x).sum(),
        }
    }

    /// Transmit vector `p*u + Z*v` into `out`.
    pub fn transmit_into(&self, u: f64, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len() + 1, self.n_a());
        for (o, p) in out.iter_mut().zip(&self.p) {
            *o = p * u;
        }
        for (col, &vj) in self.z_columns().zip(v) {
            for (o, z) in out.iter_mut().zip(col) {
                *o += z * vj;
            }
        }
    }
}

/// Complete `h / ||h||` to an orthonormal basis with a Householder reflector.
///
/// The reflector `H = I - 2 w w^T / ||w||^2` with `w = p + sign(p_0) e_0` maps
/// `e_0` onto `-sign(p_0) p`, so its remaining columns are an orthonormal
/// basis of the null space of `h^T`. `p` is returned as `h / ||h||` exactly,
/// which makes `h^T p = ||h|| > 0`.
pub fn orthonormal_decomposition(h: &[f64]) -> Result<PrecodingBasis> {
    let n = h.len();
    if n < 2 {
        return Err(Error::TooFewAntennas(n));
    }
    let norm = norm2(h);
    if !(norm >= ZERO_CHANNEL_TOL) {
        return Err(Error::ZeroChannel(norm));
    }
    let p: Vec<f64> = h.iter().map(|x| x / norm).collect();

    let sign = if p[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut w = p.clone();
    w[0] += sign;
    let w_sq: f64 = w.iter().map(|x| x * x).sum();

    let mut z = Vec::with_capacity(n * (n - 1));
    for j in 1..n {
        let scale = 2.0 * w[j] / w_sq;
        for (i, wi) in w.iter().enumerate() {
            let identity = if i == j { 1.0 } else { 0.0 };
            z.push(identity - scale * wi);
        }
    }
    Ok(PrecodingBasis { p, z })
}

/// Bob's SNR, `P_u |h^T p|^2 / sigma_B^2`.
pub fn snr_bob(basis: &PrecodingBasis, chan: &ChannelRealization, alloc: &PowerAllocation) -> f64 {
    let hp = basis.project_p(chan.h());
    alloc.p_u * hp * hp / chan.sigma_b_sq()
}

/// Eve's SNR with the artificial noise folded into her noise floor,
/// `P_u |g^T p|^2 / (P_v ||g^T Z||^2 + sigma_E^2)`.
pub fn snr_eve(basis: &PrecodingBasis, chan: &ChannelRealization, alloc: &PowerAllocation) -> Result<f64> {
    eve_snr_from_gains(&basis.gains(chan.h(), chan.g()), alloc, chan.sigma_e_sq())
}

/// Eve's SNR when her thermal noise is dropped (noiseless eavesdropper).
pub fn snr_eve_worst_case(basis: &PrecodingBasis, g: &[f64], alloc: &PowerAllocation) -> Result<f64> {
    if g.len() != basis.n_a() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_a(),
            actual: g.len(),
        });
    }
    eve_snr_from_gains(&basis.gains(&basis.p, g), alloc, 0.0)
}

fn eve_snr_from_gains(gains: &ChannelGains, alloc: &PowerAllocation, sigma_e_sq: f64) -> Result<f64> {
    let denom = alloc.p_v * gains.eve_an_gain + sigma_e_sq;
    if denom < 1e-15 {
        return Err(Error::DegenerateDenominator(denom));
    }
    Ok(alloc.p_u * gains.eve_gain / denom)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}
