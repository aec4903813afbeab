//! Seeded Monte Carlo experiments.
//!
//! Every trial owns an RNG stream derived from `(seed, m, trial)`, trials run
//! in parallel and results are reduced in trial order. Output is therefore
//! bit-identical for any number of worker threads, and running `2T` trials
//! reproduces the first `T` trials of a smaller run exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beam::{mrc_weights, noise_power, path_gains, strongest_path_weights, BeamWeights};
use crate::channel::ChannelRealization;
use crate::error::{invalid, Error, Result};
use crate::geometry::{AntennaArray, FieldOfView};
use crate::theory::{
    effective_count, estimate_array_parameter, p_ineff, snr_mrc_theory, snr_single_theory, to_db,
    ArrayParameterEstimate, HarmonicMode,
};

pub type TrialRng = ChaCha8Rng;

/// Deterministic RNG stream `index` of `seed`. Distinct indices select
/// distinct ChaCha streams, so trials never share random draws.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stream index of trial `trial` at path count `m_paths`. Array-parameter
/// estimation uses indices below 2^32, which never collide with these.
pub fn stream_index(m_paths: usize, trial: usize) -> u64 {
    ((m_paths as u64) << 32) | trial as u64
}

fn default_rows() -> usize {
    1
}
fn default_spacing() -> f64 {
    0.5
}
fn default_fov_deg() -> f64 {
    180.0
}
fn default_trials() -> usize {
    1000
}
fn default_delay_max() -> f64 {
    100e-9
}
fn default_bandwidth() -> f64 {
    1e9
}
fn default_freq_points() -> usize {
    1024
}
fn default_sigma0() -> f64 {
    1.0
}
fn default_samples() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_elements: usize,
    /// Rows of elements along z; 1 gives a ULA along x.
    #[serde(default = "default_rows")]
    pub rows: usize,
    #[serde(default = "default_spacing")]
    pub spacing_wavelengths: f64,
    /// Total field of view in degrees, centered on broadside.
    #[serde(default = "default_fov_deg")]
    pub fov_deg: f64,
    pub m_values: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Maximum path delay in seconds.
    #[serde(default = "default_delay_max")]
    pub delay_max: f64,
    /// Hz.
    #[serde(default = "default_bandwidth")]
    pub bandwidth: f64,
    #[serde(default = "default_freq_points")]
    pub freq_points: usize,
    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
    pub seed: u64,
    /// Samples for the array-parameter estimate behind the theory columns.
    #[serde(default = "default_samples")]
    pub array_param_samples: usize,
    /// Uses this array parameter instead of estimating it.
    #[serde(default)]
    pub array_parameter: Option<f64>,
    #[serde(default)]
    pub harmonic_mode: HarmonicMode,
    /// Worker threads; `None` uses the global pool. Never affects results.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(n_elements: usize, m_values: Vec<usize>, seed: u64) -> Self {
        Self {
            n_elements,
            rows: default_rows(),
            spacing_wavelengths: default_spacing(),
            fov_deg: default_fov_deg(),
            m_values,
            trials: default_trials(),
            delay_max: default_delay_max(),
            bandwidth: default_bandwidth(),
            freq_points: default_freq_points(),
            sigma0: default_sigma0(),
            seed,
            array_param_samples: default_samples(),
            array_parameter: None,
            harmonic_mode: HarmonicMode::default(),
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 || self.rows == 0 {
            return invalid("n_elements and rows must be at least 1");
        }
        if self.trials == 0 {
            return invalid("trials must be at least 1");
        }
        if self.freq_points < 2 {
            return invalid("freq_points must be at least 2");
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return invalid("bandwidth must be positive");
        }
        if !(self.delay_max > 0.0 && self.delay_max.is_finite()) {
            return invalid("delay_max must be positive");
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return invalid("sigma0 must be positive");
        }
        if !(self.fov_deg >= 0.0 && self.fov_deg <= 180.0) {
            return invalid("fov_deg must lie in [0, 180]");
        }
        if self.m_values.contains(&0) {
            return invalid("path counts must be at least 1");
        }
        if self.array_param_samples == 0 {
            return invalid("array_param_samples must be at least 1");
        }
        if self.workers == Some(0) {
            return invalid("workers must be at least 1");
        }
        Ok(())
    }

    pub fn array(&self) -> Result<AntennaArray> {
        AntennaArray::planar_xz(self.n_elements, self.rows, self.spacing_wavelengths)
    }

    pub fn fov(&self) -> Result<FieldOfView> {
        FieldOfView::from_total_degrees(self.fov_deg)
    }

    /// Runs `f` inside a pool of `workers` threads (or the global pool).
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }

    /// The configured array parameter, or a fresh estimate.
    pub fn resolve_array_parameter(&self) -> Result<ArrayParameterEstimate> {
        if let Some(s) = self.array_parameter {
            return Ok(ArrayParameterEstimate {
                s,
                samples: 0,
                stderr: 0.0,
            });
        }
        let array = self.array()?;
        let fov = self.fov()?;
        self.install(|| {
            estimate_array_parameter(&array, &fov, self.array_param_samples, self.seed)
        })?
    }
}

/// Mean of `|H(f)|²` through `weights` over `freq_points` evenly spaced
/// frequencies spanning `[-bandwidth/2, +bandwidth/2]`.
pub fn band_average_gain(
    weights: &BeamWeights,
    channel: &ChannelRealization,
    array: &AntennaArray,
    bandwidth: f64,
    freq_points: usize,
) -> Result<f64> {
    if freq_points == 0 {
        return invalid("freq_points must be at least 1");
    }
    let gains = path_gains(weights, channel, array)?;
    if freq_points == 1 {
        let h: num_complex::Complex64 = gains.iter().sum();
        return Ok(h.norm_sqr());
    }
    let f0 = -bandwidth / 2.0;
    let df = bandwidth / (freq_points - 1) as f64;
    // Per-path phasor exp(-j2πfτ) advanced by a fixed rotation each step.
    let mut phasors: Vec<_> = gains
        .iter()
        .zip(channel.components())
        .map(|(g, c)| (g * c.delay_phasor(f0), c.delay_phasor(df)))
        .collect();
    let mut acc = 0.0;
    for _ in 0..freq_points {
        let mut h = num_complex::Complex64::new(0.0, 0.0);
        for (p, step) in phasors.iter_mut() {
            h += *p;
            *p *= *step;
        }
        acc += h.norm_sqr();
    }
    Ok(acc / freq_points as f64)
}

/// Wideband SNR of `weights` on `channel`: band-averaged gain over noise power.
pub fn band_average_snr(
    weights: &BeamWeights,
    channel: &ChannelRealization,
    array: &AntennaArray,
    cfg: &ExperimentConfig,
) -> Result<f64> {
    let gain = band_average_gain(weights, channel, array, cfg.bandwidth, cfg.freq_points)?;
    Ok(gain / noise_power(weights, cfg.sigma0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectivenessTrial {
    pub ineffective_fraction: f64,
    pub effective_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrTrial {
    pub mrc: f64,
    pub single: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockageTrial {
    pub blocked: usize,
    pub mrc: f64,
    pub single: f64,
}

fn sample_trial_channel(
    cfg: &ExperimentConfig,
    fov: &FieldOfView,
    m_paths: usize,
    rng: &mut TrialRng,
) -> Result<ChannelRealization> {
    ChannelRealization::sample(m_paths, fov, cfg.delay_max, rng)
}

pub fn effectiveness_trial(
    cfg: &ExperimentConfig,
    m_paths: usize,
    trial: usize,
) -> Result<EffectivenessTrial> {
    let array = cfg.array()?;
    let fov = cfg.fov()?;
    let mut rng = trial_rng(cfg.seed, stream_index(m_paths, trial));
    let channel = sample_trial_channel(cfg, &fov, m_paths, &mut rng)?;
    let report = crate::beam::classify_effectiveness(&channel, &array);
    Ok(EffectivenessTrial {
        ineffective_fraction: report.ineffective_fraction(),
        effective_count: report.effective_count(),
    })
}

pub fn snr_trial(cfg: &ExperimentConfig, m_paths: usize, trial: usize) -> Result<SnrTrial> {
    let array = cfg.array()?;
    let fov = cfg.fov()?;
    let mut rng = trial_rng(cfg.seed, stream_index(m_paths, trial));
    let channel = sample_trial_channel(cfg, &fov, m_paths, &mut rng)?;
    let mrc = mrc_weights(&channel, &array);
    let single = strongest_path_weights(&channel, &array);
    Ok(SnrTrial {
        mrc: band_average_snr(&mrc, &channel, &array, cfg)?,
        single: band_average_snr(&single, &channel, &array, cfg)?,
    })
}

/// Designs both beams on the full channel, then evaluates them after one
/// uniformly chosen path is removed. Beams are not redesigned.
pub fn blockage_trial(
    cfg: &ExperimentConfig,
    m_paths: usize,
    trial: usize,
) -> Result<BlockageTrial> {
    if m_paths < 2 {
        return invalid("blockage needs at least two paths");
    }
    let array = cfg.array()?;
    let fov = cfg.fov()?;
    let mut rng = trial_rng(cfg.seed, stream_index(m_paths, trial));
    let channel = sample_trial_channel(cfg, &fov, m_paths, &mut rng)?;
    let mrc = mrc_weights(&channel, &array);
    let single = strongest_path_weights(&channel, &array);
    let blocked = rng.random_range(0..m_paths);
    let blocked_channel = channel.remove_component(blocked)?;
    Ok(BlockageTrial {
        blocked,
        mrc: band_average_snr(&mrc, &blocked_channel, &array, cfg)?,
        single: band_average_snr(&single, &blocked_channel, &array, cfg)?,
    })
}

/// Runs `trial_fn` for trials `0..cfg.trials` in parallel, in trial order.
pub fn collect_trials<T, F>(cfg: &ExperimentConfig, m_paths: usize, trial_fn: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&ExperimentConfig, usize, usize) -> Result<T> + Sync,
{
    cfg.validate()?;
    cfg.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| trial_fn(cfg, m_paths, t))
            .collect::<Result<Vec<T>>>()
    })?
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Linear-interpolated quantile (`p` in `[0, 1]`) of an ascending slice.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        len => {
            let pos = p.clamp(0.0, 1.0) * (len - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(len - 1);
            let frac = pos - lo as f64;
            sorted[lo] + (sorted[hi] - sorted[lo]) * frac
        }
    }
}

fn sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectivenessPoint {
    pub m_paths: usize,
    pub trials: usize,
    pub theory_p_ineff: f64,
    pub p_ineff: f64,
    pub p_ineff_stderr: f64,
    pub theory_count: f64,
    pub mean_count: f64,
    pub count_stderr: f64,
    pub median_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrPoint {
    pub m_paths: usize,
    pub trials: usize,
    pub mrc_theory_db: f64,
    pub mrc_sim_db: f64,
    /// Standard error of the mean linear SNR.
    pub mrc_sim_stderr: f64,
    pub single_theory_db: f64,
    pub single_sim_db: f64,
    pub single_sim_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockagePoint {
    pub m_paths: usize,
    pub trials: usize,
    /// Post-blockage SNRs in dB, ascending.
    pub mrc_snr_db: Vec<f64>,
    pub single_snr_db: Vec<f64>,
}

impl BlockagePoint {
    pub fn mrc_percentile_db(&self, percent: f64) -> f64 {
        quantile(&self.mrc_snr_db, percent / 100.0)
    }

    pub fn single_percentile_db(&self, percent: f64) -> f64 {
        quantile(&self.single_snr_db, percent / 100.0)
    }
}

/// Per-`M` results of an experiment, plus the array parameter behind any
/// theory columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult<P> {
    pub array_parameter: Option<ArrayParameterEstimate>,
    pub points: Vec<P>,
}

/// Fraction of ineffective paths and number of effective paths per `M`.
pub fn run_effectiveness_sweep(cfg: &ExperimentConfig) -> Result<SweepResult<EffectivenessPoint>> {
    cfg.validate()?;
    let estimate = cfg.resolve_array_parameter()?;
    let points = cfg
        .m_values
        .iter()
        .map(|&m| {
            let trials = collect_trials(cfg, m, effectiveness_trial)?;
            let fractions: Vec<f64> = trials.iter().map(|t| t.ineffective_fraction).collect();
            let counts: Vec<f64> = trials.iter().map(|t| t.effective_count as f64).collect();
            let (p, p_se) = mean_stderr(&fractions);
            let (count, count_se) = mean_stderr(&counts);
            Ok(EffectivenessPoint {
                m_paths: m,
                trials: trials.len(),
                theory_p_ineff: p_ineff(m, estimate.s),
                p_ineff: p,
                p_ineff_stderr: p_se,
                theory_count: effective_count(m, estimate.s),
                mean_count: count,
                count_stderr: count_se,
                median_count: quantile(&sorted(counts), 0.5),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        array_parameter: Some(estimate),
        points,
    })
}

/// Band-averaged SNR of the MRC and strongest-path beams per `M`. Linear
/// SNRs are averaged over trials before conversion to dB.
pub fn run_snr_sweep(cfg: &ExperimentConfig) -> Result<SweepResult<SnrPoint>> {
    cfg.validate()?;
    let estimate = cfg.resolve_array_parameter()?;
    let points = cfg
        .m_values
        .iter()
        .map(|&m| {
            let trials = collect_trials(cfg, m, snr_trial)?;
            let mrc: Vec<f64> = trials.iter().map(|t| t.mrc).collect();
            let single: Vec<f64> = trials.iter().map(|t| t.single).collect();
            let (mrc_mean, mrc_se) = mean_stderr(&mrc);
            let (single_mean, single_se) = mean_stderr(&single);
            Ok(SnrPoint {
                m_paths: m,
                trials: trials.len(),
                mrc_theory_db: to_db(snr_mrc_theory(cfg.n_elements, m, estimate.s, cfg.sigma0)),
                mrc_sim_db: to_db(mrc_mean),
                mrc_sim_stderr: mrc_se,
                single_theory_db: to_db(snr_single_theory(
                    cfg.n_elements,
                    m,
                    estimate.s,
                    cfg.sigma0,
                    cfg.harmonic_mode,
                )),
                single_sim_db: to_db(single_mean),
                single_sim_stderr: single_se,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        array_parameter: Some(estimate),
        points,
    })
}

/// Post-blockage SNR samples of both beams for each `M` (each must be ≥ 2).
pub fn run_blockage_experiment(cfg: &ExperimentConfig) -> Result<SweepResult<BlockagePoint>> {
    cfg.validate()?;
    if let Some(&m) = cfg.m_values.iter().find(|&&m| m < 2) {
        return invalid(format!("blockage needs at least two paths, got M = {m}"));
    }
    let points = cfg
        .m_values
        .iter()
        .map(|&m| {
            let trials = collect_trials(cfg, m, blockage_trial)?;
            Ok(BlockagePoint {
                m_paths: m,
                trials: trials.len(),
                mrc_snr_db: sorted(trials.iter().map(|t| to_db(t.mrc)).collect()),
                single_snr_db: sorted(trials.iter().map(|t| to_db(t.single)).collect()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        array_parameter: None,
        points,
    })
}
