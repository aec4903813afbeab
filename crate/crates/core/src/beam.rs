//! Beam weights, array factors and the per-path view of the MRC pattern.
//!
//! The MRC weights `β_n = conj(H_n(0)) / N` produce the array factor
//!
//! ```text
//! F(r) = Σ_n β_n exp(j φ_{n,r}) = Σ_m conj(α_m) F_m(r),
//! F_m(r) = (1/N) Σ_n exp(-j φ_{n,k_m}) exp(j φ_{n,r}),
//! ```
//!
//! so the MRC beam is a superposition of conjugate beams, one per path, each
//! peaking at unit gain in the direction of its own path. At the direction of
//! path `h` the gain splits into `conj(α_h)` plus the leakage `X_h` of every
//! other path; the path is *effective* when `|α_h| ≥ |X_h|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::error::{invalid, Result};
use crate::geometry::{AntennaArray, Direction, FieldOfView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamKind {
    Mrc,
    SingleDirection,
    Custom,
}

impl BeamKind {
    pub fn label(&self) -> &'static str {
        match self {
            BeamKind::Mrc => "mrc",
            BeamKind::SingleDirection => "single",
            BeamKind::Custom => "custom",
        }
    }
}

/// One complex coefficient per array element. Weights are not normalized;
/// every SNR divides by [`noise_power`] so the scale cancels.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamWeights {
    coefficients: Vec<Complex64>,
    kind: BeamKind,
}

impl BeamWeights {
    pub fn new(coefficients: Vec<Complex64>, kind: BeamKind) -> Self {
        Self { coefficients, kind }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn kind(&self) -> BeamKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn squared_norm(&self) -> f64 {
        self.coefficients.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|b| b * factor).collect(),
            kind: self.kind,
        }
    }

    fn check_len(&self, array: &AntennaArray) -> Result<()> {
        if self.len() != array.len() {
            return invalid(format!(
                "{} beam weights for an array of {} elements",
                self.len(),
                array.len()
            ));
        }
        Ok(())
    }
}

/// MRC weights designed at the band center: `β_n = conj(H_n(0)) / N`.
pub fn mrc_weights(channel: &ChannelRealization, array: &AntennaArray) -> BeamWeights {
    let inv_n = 1.0 / array.len() as f64;
    let coefficients = channel
        .per_antenna_response(array, 0.0)
        .into_iter()
        .map(|h| h.conj() * inv_n)
        .collect();
    BeamWeights::new(coefficients, BeamKind::Mrc)
}

/// Conjugate steering beam towards `k`: `β_n = exp(-j φ_{n,k}) / N`.
pub fn single_direction_weights(array: &AntennaArray, k: &Direction) -> BeamWeights {
    let inv_n = 1.0 / array.len() as f64;
    let coefficients = array
        .phases(k)
        .map(|phi| Complex64::cis(-phi) * inv_n)
        .collect();
    BeamWeights::new(coefficients, BeamKind::SingleDirection)
}

/// Index of the path with the largest `|α|`; ties go to the lowest index.
pub fn strongest_component(channel: &ChannelRealization) -> usize {
    let mut best = 0;
    let mut best_amp = f64::NEG_INFINITY;
    for (i, c) in channel.components().iter().enumerate() {
        let amp = c.alpha.norm();
        if amp > best_amp {
            best = i;
            best_amp = amp;
        }
    }
    best
}

/// Single-direction beam aimed at the strongest path of `channel`.
pub fn strongest_path_weights(channel: &ChannelRealization, array: &AntennaArray) -> BeamWeights {
    let h = strongest_component(channel);
    single_direction_weights(array, &channel.components()[h].direction)
}

/// `F(r) = Σ_n β_n exp(j φ_{n,r})`.
pub fn array_factor(
    weights: &BeamWeights,
    array: &AntennaArray,
    r: &Direction,
) -> Result<Complex64> {
    weights.check_len(array)?;
    Ok(weights
        .coefficients
        .iter()
        .zip(array.phases(r))
        .map(|(b, phi)| b * Complex64::cis(phi))
        .sum())
}

/// Conjugate beam of a single path: `F_m(r) = (1/N) Σ_n exp(j (φ_{n,r} - φ_{n,k_m}))`.
/// Its modulus never exceeds one and equals one at `r = k_m`.
pub fn component_array_factor(array: &AntennaArray, k_m: &Direction, r: &Direction) -> Complex64 {
    let sum: Complex64 = array
        .phases(r)
        .zip(array.phases(k_m))
        .map(|(pr, pk)| Complex64::cis(pr - pk))
        .sum();
    sum / array.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionTerm {
    pub index: usize,
    /// `conj(α_m)`.
    pub weight: Complex64,
    /// `F_m(r)`.
    pub gain: Complex64,
}

impl DecompositionTerm {
    pub fn value(&self) -> Complex64 {
        self.weight * self.gain
    }
}

/// The MRC array factor at one probe direction split into per-path terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
    pub probe: Direction,
}

impl Decomposition {
    /// `Σ_m conj(α_m) F_m(r)`; equals the MRC array factor at the probe.
    pub fn total(&self) -> Complex64 {
        self.terms.iter().map(DecompositionTerm::value).sum()
    }
}

pub fn decompose(
    channel: &ChannelRealization,
    array: &AntennaArray,
    r: &Direction,
) -> Decomposition {
    let terms = channel
        .components()
        .iter()
        .enumerate()
        .map(|(index, c)| DecompositionTerm {
            index,
            weight: c.alpha.conj(),
            gain: component_array_factor(array, &c.direction, r),
        })
        .collect();
    Decomposition { terms, probe: *r }
}

/// Leakage of every other path into the direction of path `h`:
/// `X_h = Σ_{m≠h} conj(α_m) F_m(k_h)`.
pub fn interference_term(
    channel: &ChannelRealization,
    array: &AntennaArray,
    h: usize,
) -> Result<Complex64> {
    let k_h = channel.component(h)?.direction;
    Ok(channel
        .components()
        .iter()
        .enumerate()
        .filter(|&(m, _)| m != h)
        .map(|(_, c)| c.alpha.conj() * component_array_factor(array, &c.direction, &k_h))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentEffectiveness {
    pub amplitude: f64,
    pub interference: f64,
    pub effective: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectivenessReport {
    pub components: Vec<ComponentEffectiveness>,
}

impl EffectivenessReport {
    pub fn effective_count(&self) -> usize {
        self.components.iter().filter(|c| c.effective).count()
    }

    pub fn ineffective_count(&self) -> usize {
        self.components.len() - self.effective_count()
    }

    pub fn ineffective_fraction(&self) -> f64 {
        self.ineffective_count() as f64 / self.components.len() as f64
    }
}

/// Flags each path as effective when `|α_h| ≥ |X_h|` (equality counts as effective).
pub fn classify_effectiveness(
    channel: &ChannelRealization,
    array: &AntennaArray,
) -> EffectivenessReport {
    let inv_n = 1.0 / array.len() as f64;
    let steering: Vec<Vec<Complex64>> = channel
        .components()
        .iter()
        .map(|c| array.steering_vector(&c.direction))
        .collect();
    let components = channel
        .components()
        .iter()
        .enumerate()
        .map(|(h, ch)| {
            let x: Complex64 = channel
                .components()
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != h)
                .map(|(m, cm)| {
                    // F_m(k_h) = (1/N) Σ_n conj(a_m[n]) a_h[n]
                    let gain: Complex64 = steering[m]
                        .iter()
                        .zip(&steering[h])
                        .map(|(am, ah)| am.conj() * ah)
                        .sum();
                    cm.alpha.conj() * gain * inv_n
                })
                .sum();
            let amplitude = ch.alpha.norm();
            let interference = x.norm();
            ComponentEffectiveness {
                amplitude,
                interference,
                effective: amplitude >= interference,
            }
        })
        .collect();
    EffectivenessReport { components }
}

/// Complex gain each path sees through the beam:
/// `g_m = α_m Σ_n w_n exp(j φ_{n,k_m})`, so that `H(f) = Σ_m g_m exp(-j 2π f τ_m)`.
pub fn path_gains(
    weights: &BeamWeights,
    channel: &ChannelRealization,
    array: &AntennaArray,
) -> Result<Vec<Complex64>> {
    weights.check_len(array)?;
    Ok(channel
        .components()
        .iter()
        .map(|c| {
            let af: Complex64 = weights
                .coefficients
                .iter()
                .zip(array.phases(&c.direction))
                .map(|(w, phi)| w * Complex64::cis(phi))
                .sum();
            c.alpha * af
        })
        .collect())
}

/// Beamformed response `Σ_n w_n H_n(f)`.
pub fn combined_response(
    weights: &BeamWeights,
    channel: &ChannelRealization,
    array: &AntennaArray,
    f: f64,
) -> Result<Complex64> {
    let gains = path_gains(weights, channel, array)?;
    Ok(gains
        .iter()
        .zip(channel.components())
        .map(|(g, c)| g * c.delay_phasor(f))
        .sum())
}

/// Noise power after combining: `σ₀² Σ_n |w_n|²`.
pub fn noise_power(weights: &BeamWeights, sigma0: f64) -> f64 {
    sigma0 * sigma0 * weights.squared_norm()
}

/// Narrowband SNR at baseband frequency `f`.
pub fn snr_at(
    weights: &BeamWeights,
    channel: &ChannelRealization,
    array: &AntennaArray,
    sigma0: f64,
    f: f64,
) -> Result<f64> {
    let h = combined_response(weights, channel, array, f)?;
    Ok(h.norm_sqr() / noise_power(weights, sigma0))
}

/// Power floor used when converting pattern nulls to dB.
pub const GAIN_FLOOR_DB: f64 = -300.0;

pub fn power_db(power: f64) -> f64 {
    if power > 0.0 {
        (10.0 * power.log10()).max(GAIN_FLOOR_DB)
    } else {
        GAIN_FLOOR_DB
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternSample {
    pub theta_deg: f64,
    pub gain_db: f64,
}

/// `|F(r(θ))|²` in dB for θ from -90° to +90° in steps of `grid_deg`, where
/// `r(θ)` sweeps the plane of `fov` (boresight to scan axis).
pub fn beam_pattern(
    weights: &BeamWeights,
    array: &AntennaArray,
    fov: &FieldOfView,
    grid_deg: f64,
) -> Result<Vec<PatternSample>> {
    if !(grid_deg > 0.0 && grid_deg.is_finite()) {
        return invalid(format!(
            "angular grid step must be positive, got {grid_deg}"
        ));
    }
    weights.check_len(array)?;
    let steps = (180.0 / grid_deg + 1e-9).floor() as usize;
    (0..=steps)
        .map(|i| {
            let theta_deg = -90.0 + i as f64 * grid_deg;
            let r = fov.direction_at(theta_deg.to_radians());
            let gain = array_factor(weights, array, &r)?.norm_sqr();
            Ok(PatternSample {
                theta_deg,
                gain_db: power_db(gain),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::MultipathComponent;
    use crate::montecarlo::trial_rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_path(alpha: Complex64, k: Direction) -> ChannelRealization {
        ChannelRealization::new(vec![MultipathComponent::new(alpha, k, 20e-9).unwrap()]).unwrap()
    }

    fn random_channel(seed: u64, m: usize) -> ChannelRealization {
        let fov = FieldOfView::from_total_degrees(180.0).unwrap();
        ChannelRealization::sample(m, &fov, 100e-9, &mut trial_rng(seed, 0)).unwrap()
    }

    #[test]
    fn mrc_single_element_single_path() {
        let array = AntennaArray::ula(1, 0.5).unwrap();
        let w = mrc_weights(&one_path(c(2.0, 0.0), Direction::x()), &array);
        assert_eq!(w.coefficients(), &[c(2.0, -0.0)]);
        assert_eq!(w.kind(), BeamKind::Mrc);
    }

    #[test]
    fn mrc_single_path_is_scaled_single_direction_beam() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let k = Direction::from_broadside_angle(0.4);
        let alpha = c(0.8, -0.6);
        let mrc = mrc_weights(&one_path(alpha, k), &array);
        let single = single_direction_weights(&array, &k);
        for (m, s) in mrc.coefficients().iter().zip(single.coefficients()) {
            assert!((m - alpha.conj() * s).norm() < 1e-12);
        }
    }

    #[test]
    fn mrc_matches_termwise_reconstruction() {
        let array = AntennaArray::ula(6, 0.5).unwrap();
        let ch = random_channel(41, 7);
        let w = mrc_weights(&ch, &array);
        for (n, p) in array.positions().iter().enumerate() {
            let mut expected = c(0.0, 0.0);
            for comp in ch.components() {
                let k = comp.direction.vector();
                let phi = 2.0 * PI * (p[0] * k[0] + p[1] * k[1] + p[2] * k[2]);
                expected += comp.alpha.conj() * Complex64::cis(-phi) / 6.0;
            }
            assert!((w.coefficients()[n] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn single_direction_weights_properties() {
        let one = AntennaArray::ula(1, 0.5).unwrap();
        assert_eq!(
            single_direction_weights(&one, &Direction::x()).coefficients(),
            &[c(1.0, 0.0)]
        );
        for n in [1usize, 2, 8, 32] {
            let array = AntennaArray::ula(n, 0.5).unwrap();
            let k = Direction::from_broadside_angle(-0.7);
            let w = single_direction_weights(&array, &k);
            assert!(w
                .coefficients()
                .iter()
                .all(|b| (b.norm() - 1.0 / n as f64).abs() < 1e-15));
            assert!((w.squared_norm() - 1.0 / n as f64).abs() < 1e-14);
            assert!((array_factor(&w, &array, &k).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn strongest_component_rules() {
        let mk = |amps: &[f64]| {
            ChannelRealization::new(
                amps.iter()
                    .map(|&a| MultipathComponent::new(c(0.0, a), Direction::x(), 0.0).unwrap())
                    .collect(),
            )
            .unwrap()
        };
        assert_eq!(strongest_component(&mk(&[0.5, 1.5, 1.0])), 1);
        assert_eq!(strongest_component(&mk(&[0.5])), 0);
        assert_eq!(strongest_component(&mk(&[1.0, 1.0, 1.0])), 0);
    }

    #[test]
    fn array_factor_length_mismatch() {
        let array = AntennaArray::ula(4, 0.5).unwrap();
        let w = BeamWeights::new(vec![c(1.0, 0.0); 3], BeamKind::Custom);
        assert!(array_factor(&w, &array, &Direction::y()).is_err());
        assert!(combined_response(&w, &random_channel(1, 2), &array, 0.0).is_err());
    }

    #[test]
    fn array_factor_single_path_mrc() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let k = Direction::from_broadside_angle(0.9);
        let alpha = c(-0.3, 1.1);
        let w = mrc_weights(&one_path(alpha, k), &array);
        assert!((array_factor(&w, &array, &k).unwrap() - alpha.conj()).norm() < 1e-12);
    }

    #[test]
    fn component_array_factor_examples() {
        let array = AntennaArray::ula(2, 0.5).unwrap();
        let f = component_array_factor(&array, &Direction::y(), &Direction::x());
        assert!(f.norm() < 1e-12);
        let single = AntennaArray::ula(1, 0.5).unwrap();
        for theta in [-1.2, 0.0, 0.5] {
            let r = Direction::from_broadside_angle(theta);
            let g = component_array_factor(&single, &Direction::x(), &r);
            assert!((g - c(1.0, 0.0)).norm() < 1e-15);
        }
        let big = AntennaArray::ula(16, 0.5).unwrap();
        let k = Direction::from_broadside_angle(0.3);
        assert!((component_array_factor(&big, &k, &k) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn decomposition_matches_array_factor() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let ch = random_channel(77, 6);
        let w = mrc_weights(&ch, &array);
        for step in 0..50 {
            let r = Direction::from_broadside_angle(-1.5 + step as f64 * 0.06);
            let d = decompose(&ch, &array, &r);
            assert_eq!(d.terms.len(), 6);
            let direct = array_factor(&w, &array, &r).unwrap();
            assert!((d.total() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn single_path_decomposition() {
        let array = AntennaArray::ula(4, 0.5).unwrap();
        let alpha = c(0.25, 0.5);
        let k = Direction::from_broadside_angle(0.2);
        let r = Direction::from_broadside_angle(-0.6);
        let d = decompose(&one_path(alpha, k), &array, &r);
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0].weight, alpha.conj());
        assert!((d.terms[0].gain - component_array_factor(&array, &k, &r)).norm() < 1e-15);
    }

    #[test]
    fn interference_identity_and_edge_cases() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let lone = one_path(c(1.0, 1.0), Direction::y());
        assert_eq!(interference_term(&lone, &array, 0).unwrap(), c(0.0, 0.0));
        assert!(interference_term(&lone, &array, 1).is_err());

        let ch = random_channel(5, 9);
        let w = mrc_weights(&ch, &array);
        let report = classify_effectiveness(&ch, &array);
        for (h, comp) in ch.components().iter().enumerate() {
            let x = interference_term(&ch, &array, h).unwrap();
            let f = array_factor(&w, &array, &comp.direction).unwrap();
            assert!((f - comp.alpha.conj() - x).norm() < 1e-12);
            assert!((report.components[h].interference - x.norm()).abs() < 1e-12);
            assert_eq!(
                report.components[h].effective,
                comp.alpha.norm() >= x.norm()
            );
        }
    }

    #[test]
    fn lone_path_is_effective() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let report = classify_effectiveness(&one_path(c(0.01, 0.0), Direction::y()), &array);
        assert_eq!(report.effective_count(), 1);
        assert_eq!(report.ineffective_fraction(), 0.0);
    }

    #[test]
    fn equality_counts_as_effective() {
        // Two coincident paths of equal amplitude: |X_h| = |α_h| for both.
        let array = AntennaArray::ula(4, 0.5).unwrap();
        let k = Direction::from_broadside_angle(0.3);
        let ch = ChannelRealization::new(vec![
            MultipathComponent::new(c(1.0, 0.0), k, 0.0).unwrap(),
            MultipathComponent::new(c(0.0, 1.0), k, 0.0).unwrap(),
        ])
        .unwrap();
        let report = classify_effectiveness(&ch, &array);
        assert!(report.components.iter().all(|c| c.effective));
    }

    #[test]
    fn combined_response_examples() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let ch = random_channel(90, 5);
        let w = mrc_weights(&ch, &array);
        let h0 = ch.per_antenna_response(&array, 0.0);
        let expected: f64 = h0.iter().map(|h| h.norm_sqr()).sum::<f64>() / 8.0;
        let got = combined_response(&w, &ch, &array, 0.0).unwrap();
        assert!((got.re - expected).abs() < 1e-12 && got.im.abs() < 1e-12);

        // Direct per-antenna sum at an off-center frequency.
        let f = 2.3e8;
        let hf = ch.per_antenna_response(&array, f);
        let direct: Complex64 = w.coefficients().iter().zip(&hf).map(|(a, b)| a * b).sum();
        assert!((combined_response(&w, &ch, &array, f).unwrap() - direct).norm() < 1e-12);

        let alpha = c(0.6, -0.9);
        let k = Direction::from_broadside_angle(-0.25);
        let lone = one_path(alpha, k);
        let sw = single_direction_weights(&array, &k);
        for f in [-5e8, 0.0, 1e8, 4.9e8] {
            let r = combined_response(&sw, &lone, &array, f).unwrap();
            let want = alpha * lone.components()[0].delay_phasor(f);
            assert!((r - want).norm() < 1e-12);
            assert!((r.norm() - alpha.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn blocked_response_subtracts_path_contribution() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let ch = random_channel(91, 6);
        let w = mrc_weights(&ch, &array);
        let blocked = ch.remove_component(2).unwrap();
        let path = ChannelRealization::new(vec![ch.components()[2]]).unwrap();
        for f in [-3e8, 0.0, 2e8] {
            let before = combined_response(&w, &ch, &array, f).unwrap();
            let after = combined_response(&w, &blocked, &array, f).unwrap();
            let lost = combined_response(&w, &path, &array, f).unwrap();
            assert!((after - (before - lost)).norm() < 1e-12);
        }
    }

    #[test]
    fn noise_power_examples() {
        let array = AntennaArray::ula(16, 0.5).unwrap();
        let w = single_direction_weights(&array, &Direction::y());
        assert!((noise_power(&w, 1.0) - 1.0 / 16.0).abs() < 1e-15);
        assert!((noise_power(&w, 2.0) - 4.0 / 16.0).abs() < 1e-15);
        let zero = BeamWeights::new(vec![c(0.0, 0.0); 4], BeamKind::Custom);
        assert_eq!(noise_power(&zero, 3.0), 0.0);
    }

    #[test]
    fn mrc_noise_power_averages_to_m_over_n() {
        let (n, m) = (8usize, 5usize);
        let array = AntennaArray::ula(n, 0.5).unwrap();
        let fov = FieldOfView::from_total_degrees(180.0).unwrap();
        let trials = 10_000u64;
        let samples: Vec<f64> = (0..trials)
            .map(|t| {
                let ch =
                    ChannelRealization::sample(m, &fov, 100e-9, &mut trial_rng(17, t)).unwrap();
                noise_power(&mrc_weights(&ch, &array), 1.0)
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / trials as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        let target = m as f64 / n as f64;
        assert!(
            (mean - target).abs() < 4.0 * se,
            "mean {mean} target {target} se {se}"
        );
    }

    #[test]
    fn snr_is_invariant_to_weight_scaling() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let ch = random_channel(3, 4);
        let w = mrc_weights(&ch, &array);
        let scaled = w.scaled(c(-3.0, 7.5));
        for f in [0.0, 1.3e8] {
            let a = snr_at(&w, &ch, &array, 1.0, f).unwrap();
            let b = snr_at(&scaled, &ch, &array, 1.0, f).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn beam_pattern_grid() {
        let array = AntennaArray::ula(8, 0.5).unwrap();
        let fov = FieldOfView::from_total_degrees(180.0).unwrap();
        let w = single_direction_weights(&array, &Direction::y());
        let pattern = beam_pattern(&w, &array, &fov, 0.5).unwrap();
        assert_eq!(pattern.len(), 361);
        assert_eq!(pattern[0].theta_deg, -90.0);
        assert_eq!(pattern[360].theta_deg, 90.0);
        let peak = pattern.iter().find(|p| p.theta_deg == 0.0).unwrap();
        assert!(peak.gain_db.abs() < 1e-9);
        assert!(pattern
            .iter()
            .all(|p| p.gain_db.is_finite() && p.gain_db <= 1e-9));
        assert!(beam_pattern(&w, &array, &fov, 0.0).is_err());
    }
}
