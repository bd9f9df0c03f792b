//! Binary-input AWGN capacity, instantaneous secrecy capacity and the
//! signal/artificial-noise power split that maximises it.
//!
//! Capacities are expressed through the amplitude SNR `beta = sqrt(SNR)` and
//! the loss function `F(beta) = 1 - C(beta)`:
//!
//! ```text
//! F(x) = 1/ln2 * [ 2x e^{-x^2/2} / sqrt(2 pi) - (2x^2 - 1) Q(x)
//!                  + sum_{i>=1} (-1)^{i-1} / (i(i+1)) * e^{2i(i+1)x^2} Q((2i+1)x) ]
//! ```
//!
//! The series terms only decay like `i^-3` (like `i^-2` at `x = 0`), so a
//! handful of terms leaves an error around `1e-2` at low SNR. [`f_series`]
//! is the plain truncated sum; [`f_loss`] sums the same terms with an
//! alternating-series accelerator and is what the rest of the crate uses.
//! [`bi_awgn_capacity_quadrature`] integrates the capacity directly and is
//! kept independent of both as a cross-check.

use crate::precoding::ChannelGains;
use crate::quadrature;
use crate::{Error, Result};
use std::f64::consts::{LN_2, PI, SQRT_2};

/// Default truncation for [`f_series`].
pub const DEFAULT_MAX_TERMS: usize = 5;

/// Terms fed to the accelerator in [`f_loss`]; error is about `5.8^-n`.
const ACCELERATED_TERMS: usize = 24;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Upper tail of the standard normal distribution.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `ln Q(x)`, finite for every finite `x`.
///
/// Above the point where `erfc` starts to lose relative precision the
/// Mills ratio `Q(x) / phi(x)` is taken from its continued fraction.
pub fn ln_q(x: f64) -> f64 {
    if x < 20.0 {
        return q_function(x).ln();
    }
    ln_q_tail(x)
}

fn ln_q_tail(x: f64) -> f64 {
    -0.5 * x * x - 0.5 * (2.0 * PI).ln() + mills_ratio_cf(x).ln()
}

/// `Q(x) / phi(x)` for large `x` by the Laplace continued fraction
/// `1 / (x + 1/(x + 2/(x + 3/(x + ...))))`, evaluated bottom-up.
fn mills_ratio_cf(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=60).rev() {
        tail = x + k as f64 / tail;
    }
    1.0 / tail
}

/// `e^{2i(i+1)x^2} Q((2i+1)x)` evaluated in the log domain.
fn series_term(x: f64, i: usize) -> f64 {
    let i = i as f64;
    (2.0 * i * (i + 1.0) * x * x + ln_q((2.0 * i + 1.0) * x)).exp()
}

fn leading_part(x: f64) -> f64 {
    2.0 * x * (-0.5 * x * x).exp() * FRAC_1_SQRT_2PI - (2.0 * x * x - 1.0) * q_function(x)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::invalid("beta", format!("must be >= 0, got {beta}")));
    }
    Ok(())
}

/// Truncated series for `F(beta)` using `max_terms` terms of the sum.
pub fn f_series(beta: f64, max_terms: usize) -> Result<f64> {
    check_beta(beta)?;
    if max_terms == 0 {
        return Err(Error::invalid("max_terms", "must be >= 1"));
    }
    if beta.is_infinite() {
        return Ok(0.0);
    }
    let mut sum = leading_part(beta);
    for i in 1..=max_terms {
        let t = series_term(beta, i);
        if !t.is_finite() {
            return Err(Error::NonConvergent { beta, term: i });
        }
        let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * t / (i * (i + 1)) as f64;
    }
    Ok(sum / LN_2)
}

/// `F(beta)` to near machine precision.
///
/// The series terms `T_i / (i(i+1))` are moments of a positive measure on
/// `[0, 1]`, so the Cohen-Rodriguez Villegas-Zagier acceleration for
/// alternating sums applies with geometric convergence.
pub fn f_loss(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta.is_infinite() {
        return Ok(0.0);
    }
    let n = ACCELERATED_TERMS;
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..n {
        let i = k + 1;
        let a = series_term(beta, i) / (i * (i + 1)) as f64;
        if !a.is_finite() {
            return Err(Error::NonConvergent { beta, term: i });
        }
        c = b - c;
        sum += c * a;
        let (kf, nf) = (k as f64, n as f64);
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    let value = (leading_part(beta) + sum / d) / LN_2;
    Ok(value.clamp(0.0, 1.0))
}

/// Binary-input AWGN capacity `1 - F(beta)` in bits per channel use.
pub fn bi_awgn_capacity(beta: f64) -> Result<f64> {
    Ok(1.0 - f_loss(beta)?)
}

/// Binary-input AWGN capacity by direct numerical integration of
/// `1 - E[log2(1 + exp(-2 beta Y))]`, `Y ~ N(beta, 1)`.
pub fn bi_awgn_capacity_quadrature(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    if beta.is_infinite() {
        return Ok(1.0);
    }
    let integrand = |y: f64| {
        let t = -2.0 * beta * y;
        // log(1 + e^t) without overflow
        let softplus = if t > 0.0 { t + (-t).exp().ln_1p() } else { t.exp().ln_1p() };
        (-0.5 * (y - beta).powi(2)).exp() * FRAC_1_SQRT_2PI * softplus / LN_2
    };
    let loss = quadrature::integrate(integrand, beta - 10.0, beta + 10.0, 1e-9)?;
    Ok((1.0 - loss).clamp(0.0, 1.0))
}

/// Instantaneous secrecy capacity `F(beta_eve) - F(beta_bob)`; negative when
/// the eavesdropper's channel is the better one.
pub fn secrecy_capacity(beta_bob: f64, beta_eve: f64) -> Result<f64> {
    Ok(f_loss(beta_eve)? - f_loss(beta_bob)?)
}

/// Receiver noise and budget for a power-allocation problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerProblem {
    pub gains: ChannelGains,
    pub sigma_b_sq: f64,
    /// Zero models a noiseless eavesdropper.
    pub sigma_e_sq: f64,
    pub p_t: f64,
    pub n_a: usize,
}

/// Capacities at one signal power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub p_u: f64,
    pub p_v: f64,
    pub snr_bob: f64,
    /// Infinite when a noiseless eavesdropper is not jammed at all.
    pub snr_eve: f64,
    pub c_b: f64,
    pub c_e: f64,
}

impl OperatingPoint {
    pub fn c_s(&self) -> f64 {
        self.c_b - self.c_e
    }
}

impl PowerProblem {
    fn validate(&self) -> Result<()> {
        if !(self.p_t > 0.0 && self.p_t.is_finite()) {
            return Err(Error::InvalidBudget(self.p_t));
        }
        if self.n_a < 2 {
            return Err(Error::TooFewAntennas(self.n_a));
        }
        if !(self.sigma_b_sq > 0.0) {
            return Err(Error::invalid("sigma_b_sq", "must be > 0"));
        }
        if !(self.sigma_e_sq >= 0.0) {
            return Err(Error::invalid("sigma_e_sq", "must be >= 0"));
        }
        let ChannelGains {
            bob_gain,
            eve_gain,
            eve_an_gain,
        } = self.gains;
        if [bob_gain, eve_gain, eve_an_gain].iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return Err(Error::invalid("gains", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Capacities when `p_u` goes to the signal and the remainder of the
    /// budget to artificial noise.
    pub fn evaluate(&self, p_u: f64) -> Result<OperatingPoint> {
        let p_v = ((self.p_t - p_u) / (self.n_a - 1) as f64).max(0.0);
        let snr_bob = p_u * self.gains.bob_gain / self.sigma_b_sq;
        let signal_eve = p_u * self.gains.eve_gain;
        let noise_eve = p_v * self.gains.eve_an_gain + self.sigma_e_sq;
        let snr_eve = if signal_eve == 0.0 {
            0.0
        } else if noise_eve <= 0.0 {
            f64::INFINITY
        } else {
            signal_eve / noise_eve
        };
        Ok(OperatingPoint {
            p_u,
            p_v,
            snr_bob,
            snr_eve,
            c_b: bi_awgn_capacity(snr_bob.sqrt())?,
            c_e: bi_awgn_capacity(snr_eve.sqrt())?,
        })
    }

    fn secrecy_at(&self, p_u: f64) -> f64 {
        self.evaluate(p_u).map_or(f64::NEG_INFINITY, |op| op.c_s())
    }
}

/// Result of [`optimize_power_allocation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptimum {
    pub p_u_opt: f64,
    pub p_v_opt: f64,
    /// Clamped at zero.
    pub c_s_max: f64,
    /// False when no signal power yields a positive secrecy capacity.
    pub feasible: bool,
    /// Unclamped `C_B - C_E` at `p_u_opt`.
    pub c_s_raw: f64,
    pub operating_point: OperatingPoint,
}

const GRID_POINTS: usize = 1000;

/// Maximise `C_B - C_E` over `P_u in (0, P_t]` with
/// `P_v = (P_t - P_u) / (N_A - 1)`.
///
/// The objective is smooth but not known to be unimodal, so a uniform grid
/// locates the best bracket and golden-section search refines it to
/// `1e-6 * P_t`.
pub fn optimize_power_allocation(problem: &PowerProblem) -> Result<PowerOptimum> {
    problem.validate()?;
    let p_t = problem.p_t;
    let step = p_t / GRID_POINTS as f64;

    let mut best_j = 1;
    let mut best_val = f64::NEG_INFINITY;
    for j in 1..=GRID_POINTS {
        let v = problem.secrecy_at(step * j as f64);
        if v > best_val {
            best_val = v;
            best_j = j;
        }
    }
    let mut best_pu = step * best_j as f64;

    let lo = step * (best_j - 1) as f64;
    let hi = (step * (best_j + 1) as f64).min(p_t);
    let (x, v) = golden_section_max(|x| problem.secrecy_at(x), lo, hi, 1e-6 * p_t);
    if v > best_val && x > 0.0 {
        best_val = v;
        best_pu = x;
    }

    let op = problem.evaluate(best_pu)?;
    let feasible = best_val > 0.0;
    Ok(PowerOptimum {
        p_u_opt: best_pu,
        p_v_opt: op.p_v,
        c_s_max: if feasible { best_val } else { 0.0 },
        feasible,
        c_s_raw: best_val,
        operating_point: op,
    })
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}
