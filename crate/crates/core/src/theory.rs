//! Closed-form predictions for the MRC beam.
//!
//! Everything here depends on the array geometry only through a single
//! number, the *array parameter* `s`: the mean squared cross gain
//! `E[|F_m(k_1)|²]` between the conjugate beams of two independent random
//! directions. With `M̄ = M - 1` other paths, the leakage into any path
//! direction is modeled as complex Gaussian with variance `M̄ s`, which gives
//!
//! ```text
//! P_ineff(z) = exp(-z² / (M̄ s))          P_ineff = M̄ s / (1 + M̄ s)
//! C_eff      = M / (1 + M̄ s)
//! Γ_mrc      = N (2 + M̄ s) / σ₀²
//! Γ_single   = N (ln M + γ + M̄ s) / σ₀²   (or H_M in place of ln M + γ)
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{AntennaArray, FieldOfView};
use crate::montecarlo::trial_rng;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Samples per independent RNG stream when estimating the array parameter.
const ESTIMATE_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayParameterEstimate {
    pub s: f64,
    pub samples: usize,
    pub stderr: f64,
}

/// Monte Carlo estimate of `s = E[|(1/N) Σ_n exp(j(φ_{n,k_1} - φ_{n,k_m}))|²]`
/// with `k_1`, `k_m` drawn independently from `fov`.
///
/// Samples are split into fixed-size chunks, each with its own RNG stream
/// derived from `seed`, and reduced in chunk order, so the result does not
/// depend on the number of worker threads.
pub fn estimate_array_parameter(
    array: &AntennaArray,
    fov: &FieldOfView,
    samples: usize,
    seed: u64,
) -> Result<ArrayParameterEstimate> {
    if samples == 0 {
        return invalid("array parameter estimation needs at least one sample");
    }
    let chunks = samples.div_ceil(ESTIMATE_CHUNK);
    let inv_n = 1.0 / array.len() as f64;
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = trial_rng(seed, chunk as u64);
            let count = ESTIMATE_CHUNK.min(samples - chunk * ESTIMATE_CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                let k1 = fov.sample(&mut rng);
                let km = fov.sample(&mut rng);
                let (a, b) = (k1.vector(), km.vector());
                let diff = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
                let (mut re, mut im) = (0.0, 0.0);
                for p in array.positions() {
                    let phi = 2.0
                        * std::f64::consts::PI
                        * (p[0] * diff[0] + p[1] * diff[1] + p[2] * diff[2]);
                    let (s, c) = phi.sin_cos();
                    re += c;
                    im += s;
                }
                let g = (re * re + im * im) * inv_n * inv_n;
                sum += g;
                sum_sq += g * g;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partial
        .iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = sum / n;
    let stderr = if samples > 1 {
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(ArrayParameterEstimate {
        s: mean,
        samples,
        stderr,
    })
}

/// Probability that a path of amplitude `z` is ineffective, i.e. that the
/// Gaussian leakage of the other `m_paths - 1` paths exceeds it.
pub fn p_ineff_conditional(z: f64, m_paths: usize, s: f64) -> Result<f64> {
    if z < 0.0 || z.is_nan() {
        return invalid(format!("amplitude must be non-negative, got {z}"));
    }
    if m_paths <= 1 {
        return Ok(0.0);
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let var = (m_paths - 1) as f64 * s;
    if var <= 0.0 {
        return Ok(0.0);
    }
    Ok((-z * z / var).exp())
}

/// `P_ineff = M̄ s / (1 + M̄ s)`: the conditional probability averaged over
/// a Rayleigh amplitude of unit power.
pub fn p_ineff(m_paths: usize, s: f64) -> f64 {
    let leak = m_paths.saturating_sub(1) as f64 * s;
    leak / (1.0 + leak)
}

/// Expected number of effective paths, `M (1 - P_ineff) = M / (1 + M̄ s)`.
pub fn effective_count(m_paths: usize, s: f64) -> f64 {
    m_paths as f64 / (1.0 + m_paths.saturating_sub(1) as f64 * s)
}

/// Average-signal over average-noise SNR (linear) of the wideband MRC beam.
pub fn snr_mrc_theory(n_elements: usize, m_paths: usize, s: f64, sigma0: f64) -> f64 {
    let leak = m_paths.saturating_sub(1) as f64 * s;
    n_elements as f64 * (2.0 + leak) / (sigma0 * sigma0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicMode {
    /// `ln M + γ`.
    #[default]
    ApproxLogGamma,
    /// `H_M = Σ_{k=1}^{M} 1/k`.
    ExactHarmonic,
}

/// Expected maximum of `m` unit-mean exponential variables under `mode`.
fn max_exponential_mean(m_paths: usize, mode: HarmonicMode) -> f64 {
    match mode {
        HarmonicMode::ApproxLogGamma => (m_paths as f64).ln() + EULER_GAMMA,
        HarmonicMode::ExactHarmonic => harmonic_sum(m_paths),
    }
}

/// SNR (linear) of a single conjugate beam aimed at the strongest path.
pub fn snr_single_theory(
    n_elements: usize,
    m_paths: usize,
    s: f64,
    sigma0: f64,
    mode: HarmonicMode,
) -> f64 {
    let leak = m_paths.saturating_sub(1) as f64 * s;
    n_elements as f64 * (max_exponential_mean(m_paths, mode) + leak) / (sigma0 * sigma0)
}

/// `Γ_single / Γ_mrc`; independent of `N` and `σ₀`, tends to one as `M` grows.
pub fn snr_ratio_theory(m_paths: usize, s: f64, mode: HarmonicMode) -> f64 {
    let leak = m_paths.saturating_sub(1) as f64 * s;
    (max_exponential_mean(m_paths, mode) + leak) / (2.0 + leak)
}

fn harmonic_sum(m: usize) -> f64 {
    // Smallest terms first.
    (1..=m).rev().map(|k| 1.0 / k as f64).sum()
}

pub fn harmonic_number(m: usize) -> Result<f64> {
    if m == 0 {
        return invalid("harmonic number is defined for m >= 1");
    }
    Ok(harmonic_sum(m))
}

pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryQuantity {
    Pineff,
    Ceff,
    SnrMrcDb,
    SnrSingleDb,
    SnrRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryCurvePoint {
    pub m_paths: usize,
    pub value: f64,
    pub quantity: TheoryQuantity,
}

/// Evaluates one closed-form quantity over a list of path counts.
pub fn theory_curve(
    quantity: TheoryQuantity,
    m_values: &[usize],
    n_elements: usize,
    s: f64,
    sigma0: f64,
    mode: HarmonicMode,
) -> Vec<TheoryCurvePoint> {
    m_values
        .iter()
        .map(|&m| {
            let value = match quantity {
                TheoryQuantity::Pineff => p_ineff(m, s),
                TheoryQuantity::Ceff => effective_count(m, s),
                TheoryQuantity::SnrMrcDb => to_db(snr_mrc_theory(n_elements, m, s, sigma0)),
                TheoryQuantity::SnrSingleDb => {
                    to_db(snr_single_theory(n_elements, m, s, sigma0, mode))
                }
                TheoryQuantity::SnrRatio => snr_ratio_theory(m, s, mode),
            };
            TheoryCurvePoint {
                m_paths: m,
                value,
                quantity,
            }
        })
        .collect()
}
