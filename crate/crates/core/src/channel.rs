//! Multipath channels made of plane waves.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{AntennaArray, Direction, FieldOfView};

/// One plane wave: complex amplitude, arrival direction and delay in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipathComponent {
    pub alpha: Complex64,
    pub direction: Direction,
    pub delay: f64,
}

impl MultipathComponent {
    pub fn new(alpha: Complex64, direction: Direction, delay: f64) -> Result<Self> {
        if !(delay >= 0.0 && delay.is_finite()) {
            return invalid(format!(
                "path delay must be finite and non-negative, got {delay}"
            ));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return invalid("path amplitude must be finite");
        }
        Ok(Self {
            alpha,
            direction,
            delay,
        })
    }

    /// `exp(-j 2π f τ)`.
    #[inline]
    pub fn delay_phasor(&self, f: f64) -> Complex64 {
        Complex64::cis(-2.0 * PI * f * self.delay)
    }

    /// Contribution of this path to each antenna at baseband frequency `f`.
    pub fn response(&self, array: &AntennaArray, f: f64) -> Vec<Complex64> {
        let scale = self.alpha * self.delay_phasor(f);
        array
            .phases(&self.direction)
            .map(|phi| scale * Complex64::cis(phi))
            .collect()
    }
}

/// An ordered, non-empty list of multipath components. The index of each
/// component is stable and used to refer to it (e.g. when blocking a path).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRecord", into = "ChannelRecord")]
pub struct ChannelRealization {
    components: Vec<MultipathComponent>,
}

impl ChannelRealization {
    pub fn new(components: Vec<MultipathComponent>) -> Result<Self> {
        if components.is_empty() {
            return invalid("a channel needs at least one multipath component");
        }
        Ok(Self { components })
    }

    /// Draws `m_paths` independent components: `CN(0, 1)` amplitudes,
    /// directions from `fov`, delays uniform in `[0, delay_max]`.
    pub fn sample<R: Rng + ?Sized>(
        m_paths: usize,
        fov: &FieldOfView,
        delay_max: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if m_paths == 0 {
            return invalid("m_paths must be at least 1");
        }
        if !(delay_max > 0.0 && delay_max.is_finite()) {
            return invalid(format!("delay_max must be positive, got {delay_max}"));
        }
        let components = (0..m_paths)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let alpha = Complex64::new(re, im) * FRAC_1_SQRT_2;
                let direction = fov.sample(rng);
                let delay = delay_max * rng.random::<f64>();
                MultipathComponent {
                    alpha,
                    direction,
                    delay,
                }
            })
            .collect();
        Ok(Self { components })
    }

    /// Four-path example channel with fixed 3-D directions and amplitudes
    /// 0.5, 1, 1.5 and a free fourth amplitude; all delays are zero. Used to
    /// show a weak path gaining or losing its own lobe in the MRC pattern.
    pub fn four_path_example(alpha_4: f64) -> Self {
        let s3 = 1.0 / 3f64.sqrt();
        let s2 = FRAC_1_SQRT_2;
        let paths = [
            ([-1.0, 0.0, 0.0], 0.5),
            ([s3, -s3, -s3], 1.0),
            ([-s2, 0.0, s2], 1.5),
            ([-s3, -(2.0f64 / 3.0).sqrt(), 0.0], alpha_4),
        ];
        let components = paths
            .iter()
            .map(|&(k, a)| MultipathComponent {
                alpha: Complex64::new(a, 0.0),
                direction: Direction::new(k).expect("fixed unit vectors"),
                delay: 0.0,
            })
            .collect();
        Self { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[MultipathComponent] {
        &self.components
    }

    pub fn component(&self, index: usize) -> Result<&MultipathComponent> {
        self.components.get(index).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "component index {index} out of range for channel of {}",
                self.len()
            ))
        })
    }

    /// `H_n(f) = Σ_m α_m exp(j φ_{n,k_m}) exp(-j 2π f τ_m)` for every antenna.
    pub fn per_antenna_response(&self, array: &AntennaArray, f: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); array.len()];
        for c in &self.components {
            let scale = c.alpha * c.delay_phasor(f);
            for (h, phi) in out.iter_mut().zip(array.phases(&c.direction)) {
                *h += scale * Complex64::cis(phi);
            }
        }
        out
    }

    /// Channel with component `index` removed (a blocked path). The remaining
    /// components keep their relative order.
    pub fn remove_component(&self, index: usize) -> Result<Self> {
        if index >= self.len() {
            return invalid(format!(
                "component index {index} out of range for channel of {}",
                self.len()
            ));
        }
        if self.len() == 1 {
            return invalid("cannot remove the only component of a channel");
        }
        let mut components = self.components.clone();
        components.remove(index);
        Ok(Self { components })
    }

    /// Inverse of [`remove_component`](Self::remove_component).
    pub fn insert_component(&self, index: usize, component: MultipathComponent) -> Result<Self> {
        if index > self.len() {
            return invalid(format!(
                "insert position {index} out of range for channel of {}",
                self.len()
            ));
        }
        let mut components = self.components.clone();
        components.insert(index, component);
        Ok(Self { components })
    }

    /// Same channel with the amplitude of one component replaced.
    pub fn with_amplitude(&self, index: usize, alpha: Complex64) -> Result<Self> {
        self.component(index)?;
        let mut components = self.components.clone();
        components[index].alpha = alpha;
        Ok(Self { components })
    }

    /// Pretty JSON terminated by a newline.
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// On-disk form of a channel: `{components: [{re, im, kx, ky, kz, delay_ns}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub components: Vec<ComponentRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub re: f64,
    pub im: f64,
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
    pub delay_ns: f64,
}

impl From<ChannelRealization> for ChannelRecord {
    fn from(ch: ChannelRealization) -> Self {
        let components = ch
            .components
            .iter()
            .map(|c| {
                let k = c.direction.vector();
                ComponentRecord {
                    re: c.alpha.re,
                    im: c.alpha.im,
                    kx: k[0],
                    ky: k[1],
                    kz: k[2],
                    delay_ns: c.delay * 1e9,
                }
            })
            .collect();
        Self { components }
    }
}

impl TryFrom<ChannelRecord> for ChannelRealization {
    type Error = Error;

    fn try_from(rec: ChannelRecord) -> Result<Self> {
        let components = rec
            .components
            .into_iter()
            .map(|c| {
                MultipathComponent::new(
                    Complex64::new(c.re, c.im),
                    Direction::from_unit([c.kx, c.ky, c.kz])
                        .or_else(|_| Direction::new([c.kx, c.ky, c.kz]))?,
                    c.delay_ns / 1e9,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        ChannelRealization::new(components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::trial_rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_path_at_origin() {
        let array = AntennaArray::new(vec![[0.0, 0.0, 0.0]]).unwrap();
        let alpha = c(0.3, -1.2);
        let ch =
            ChannelRealization::new(vec![
                MultipathComponent::new(alpha, Direction::x(), 40e-9).unwrap()
            ])
            .unwrap();
        let h = ch.per_antenna_response(&array, 0.0);
        assert_eq!(h, vec![alpha]);
    }

    #[test]
    fn center_frequency_ignores_delays() {
        let mut rng = trial_rng(3, 0);
        let fov = FieldOfView::from_total_degrees(180.0).unwrap();
        let array = AntennaArray::ula(4, 0.5).unwrap();
        let ch = ChannelRealization::sample(5, &fov, 100e-9, &mut rng).unwrap();
        let zero_delay = ChannelRealization::new(
            ch.components()
                .iter()
                .map(|c| MultipathComponent { delay: 0.0, ..*c })
                .collect(),
        )
        .unwrap();
        let a = ch.per_antenna_response(&array, 0.0);
        let b = zero_delay.per_antenna_response(&array, 0.0);
        let b2 = zero_delay.per_antenna_response(&array, 3e8);
        for ((x, y), z) in a.iter().zip(&b).zip(&b2) {
            assert!((x - y).norm() < 1e-12);
            assert!((y - z).norm() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_matches_hand_expansion() {
        let array = AntennaArray::ula(2, 0.5).unwrap();
        let k1 = Direction::from_broadside_angle(0.3);
        let k2 = Direction::from_broadside_angle(-1.1);
        let (a1, a2) = (c(0.7, 0.2), c(-0.4, 1.3));
        let (t1, t2) = (12e-9, 71e-9);
        let f = 10e6;
        let ch = ChannelRealization::new(vec![
            MultipathComponent::new(a1, k1, t1).unwrap(),
            MultipathComponent::new(a2, k2, t2).unwrap(),
        ])
        .unwrap();
        let h = ch.per_antenna_response(&array, f);
        // Element 0 sits at the origin; element 1 at x = 0.5 wavelengths.
        let d1 = Complex64::cis(-2.0 * PI * f * t1);
        let d2 = Complex64::cis(-2.0 * PI * f * t2);
        let h0 = a1 * d1 + a2 * d2;
        let h1 = a1 * Complex64::cis(PI * 0.3f64.sin()) * d1
            + a2 * Complex64::cis(PI * (-1.1f64).sin()) * d2;
        assert!((h[0] - h0).norm() < 1e-12);
        assert!((h[1] - h1).norm() < 1e-12);
    }

    #[test]
    fn sampling_moments() {
        let mut rng = trial_rng(2024, 0);
        let fov = FieldOfView::from_total_degrees(180.0).unwrap();
        let n = 100_000;
        let alphas: Vec<Complex64> = (0..n)
            .map(|_| {
                ChannelRealization::sample(1, &fov, 100e-9, &mut rng)
                    .unwrap()
                    .components()[0]
                    .alpha
            })
            .collect();
        let check = |values: Vec<f64>, target: f64| {
            let mean = values.iter().sum::<f64>() / n as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            assert!(
                (mean - target).abs() <= 3.0 * se,
                "mean {mean} target {target} se {se}"
            );
        };
        check(alphas.iter().map(|a| a.re).collect(), 0.0);
        check(alphas.iter().map(|a| a.im).collect(), 0.0);
        check(alphas.iter().map(|a| a.norm_sqr()).collect(), 1.0);
        check(alphas.iter().map(|a| a.norm_sqr().powi(2)).collect(), 2.0);
    }

    #[test]
    fn sampled_delays_within_bounds() {
        let mut rng = trial_rng(5, 1);
        let fov = FieldOfView::from_total_degrees(180.0).unwrap();
        let ch = ChannelRealization::sample(10_000, &fov, 100e-9, &mut rng).unwrap();
        assert!(ch
            .components()
            .iter()
            .all(|c| (0.0..=100e-9).contains(&c.delay)));
        assert!(ChannelRealization::sample(0, &fov, 100e-9, &mut rng).is_err());
        assert!(ChannelRealization::sample(3, &fov, 0.0, &mut rng).is_err());
    }

    #[test]
    fn remove_component_examples() {
        let mut rng = trial_rng(8, 0);
        let fov = FieldOfView::from_total_degrees(180.0).unwrap();
        let array = AntennaArray::ula(3, 0.5).unwrap();
        let ch = ChannelRealization::sample(2, &fov, 100e-9, &mut rng).unwrap();
        let reduced = ch.remove_component(1).unwrap();
        assert_eq!(reduced.components(), &ch.components()[..1]);

        let removed = ch.components()[1];
        let restored = reduced.insert_component(1, removed).unwrap();
        for f in [-4e8, 0.0, 1.7e8] {
            let full = ch.per_antenna_response(&array, f);
            let part = reduced.per_antenna_response(&array, f);
            let path = removed.response(&array, f);
            let back = restored.per_antenna_response(&array, f);
            for n in 0..array.len() {
                assert!((full[n] - path[n] - part[n]).norm() < 1e-12);
                assert!((back[n] - full[n]).norm() < 1e-12);
            }
        }

        assert!(ch.remove_component(2).is_err());
        let single = ch.remove_component(0).unwrap();
        assert!(single.remove_component(0).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let ch = ChannelRealization::new(vec![MultipathComponent::new(
            c(1.5, -0.25),
            Direction::x(),
            37.5e-9,
        )
        .unwrap()])
        .unwrap();
        let text = ch.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rec = &value["components"][0];
        assert_eq!(rec["re"], 1.5);
        assert_eq!(rec["im"], -0.25);
        assert_eq!(rec["kx"], 1.0);
        assert_eq!(rec["ky"], 0.0);
        assert_eq!(rec["kz"], 0.0);
        assert!((rec["delay_ns"].as_f64().unwrap() - 37.5).abs() < 1e-9);

        let back = ChannelRealization::from_json(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert!((back.components()[0].delay - 37.5e-9).abs() < 1e-18);

        assert!(ChannelRealization::from_json(r#"{"components": []}"#).is_err());
        assert!(ChannelRealization::from_json(
            r#"{"components": [{"re":1,"im":0,"kx":0,"ky":0,"kz":0,"delay_ns":1}]}"#
        )
        .is_err());
    }
}
