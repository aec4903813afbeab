//! Array geometry and plane-wave phases.
//!
//! Positions are stored in units of the carrier wavelength. A plane wave
//! arriving from unit direction `k` is observed by the element at `A` with
//! phase `2π A·k` relative to the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const UNIT_TOLERANCE: f64 = 1e-12;

pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// A unit vector in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec3", into = "Vec3")]
pub struct Direction(Vec3);

impl Direction {
    /// Normalizes `v` to unit length. Zero or non-finite vectors are rejected.
    pub fn new(v: Vec3) -> Result<Self> {
        let n = norm(&v);
        if !n.is_finite() || n == 0.0 {
            return invalid(format!("cannot normalize direction {v:?}"));
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Accepts `v` only if it already has unit norm (within 1e-12).
    pub fn from_unit(v: Vec3) -> Result<Self> {
        let n = norm(&v);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOLERANCE {
            return invalid(format!("direction {v:?} is not a unit vector (norm {n})"));
        }
        Ok(Self(v))
    }

    /// Direction in the x-y plane at angle `theta` (radians) from broadside (+y)
    /// towards +x. This is the angle convention used for ULAs laid out along x.
    pub fn from_broadside_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self([s, c, 0.0])
    }

    pub fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn vector(&self) -> &Vec3 {
        &self.0
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        dot(&self.0, &other.0)
    }

    /// Angle between two directions in radians.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

impl TryFrom<Vec3> for Direction {
    type Error = crate::Error;

    fn try_from(v: Vec3) -> Result<Self> {
        Direction::new(v)
    }
}

impl From<Direction> for Vec3 {
    fn from(d: Direction) -> Vec3 {
        d.0
    }
}

/// Element positions of an arbitrary antenna array, in wavelengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntennaArray {
    positions: Vec<Vec3>,
}

impl AntennaArray {
    pub fn new(positions: Vec<Vec3>) -> Result<Self> {
        if positions.is_empty() {
            return invalid("an antenna array needs at least one element");
        }
        if positions.iter().flatten().any(|c| !c.is_finite()) {
            return invalid("antenna positions must be finite");
        }
        Ok(Self { positions })
    }

    /// Uniform linear array along +x starting at the origin; broadside is +y.
    pub fn ula(n_elements: usize, spacing_wavelengths: f64) -> Result<Self> {
        if n_elements == 0 {
            return invalid("a ULA needs at least one element");
        }
        if !(spacing_wavelengths > 0.0 && spacing_wavelengths.is_finite()) {
            return invalid(format!(
                "ULA spacing must be positive, got {spacing_wavelengths}"
            ));
        }
        let positions = (0..n_elements)
            .map(|i| [i as f64 * spacing_wavelengths, 0.0, 0.0])
            .collect();
        Ok(Self { positions })
    }

    /// Uniform rectangular array in the x-z plane: `n_x` columns along +x and
    /// `n_z` rows along +z, both with the same spacing. `n_z = 1` is a ULA.
    pub fn planar_xz(n_x: usize, n_z: usize, spacing_wavelengths: f64) -> Result<Self> {
        let row = Self::ula(n_x, spacing_wavelengths)?;
        if n_z == 0 {
            return invalid("a planar array needs at least one row");
        }
        let positions = (0..n_z)
            .flat_map(|r| {
                let z = r as f64 * spacing_wavelengths;
                row.positions.iter().map(move |p| [p[0], p[1], z])
            })
            .collect();
        Ok(Self { positions })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    /// Returns a copy with every element shifted by `offset` wavelengths.
    pub fn translated(&self, offset: Vec3) -> Self {
        let positions = self
            .positions
            .iter()
            .map(|p| [p[0] + offset[0], p[1] + offset[1], p[2] + offset[2]])
            .collect();
        Self { positions }
    }

    /// Phase in radians observed by element `n` for a plane wave from `k`.
    pub fn element_phase(&self, n: usize, k: &Direction) -> Result<f64> {
        match self.positions.get(n) {
            Some(p) => Ok(phase(p, k)),
            None => invalid(format!(
                "element index {n} out of range for array of {}",
                self.len()
            )),
        }
    }

    /// Per-element phases `2π A_n·k`.
    pub fn phases<'a>(&'a self, k: &'a Direction) -> impl Iterator<Item = f64> + 'a {
        self.positions.iter().map(move |p| phase(p, k))
    }

    /// Unit-modulus phasors `exp(j φ_n)`.
    pub fn steering_vector(&self, k: &Direction) -> Vec<Complex64> {
        self.phases(k).map(Complex64::cis).collect()
    }
}

#[inline]
fn phase(position: &Vec3, k: &Direction) -> f64 {
    2.0 * PI * dot(position, &k.0)
}

/// Angular sector from which arrival directions are drawn.
///
/// Directions are `cos θ · boresight + sin θ · scan_axis` with θ uniform in
/// `[-half_angle, half_angle]`, i.e. the sector lies in the plane spanned by
/// the boresight and the scan axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldOfView {
    half_angle: f64,
    boresight: Direction,
    scan_axis: Direction,
}

impl FieldOfView {
    pub fn new(half_angle: f64, boresight: Direction, scan_axis: Direction) -> Result<Self> {
        if !(0.0..=PI / 2.0).contains(&half_angle) {
            return invalid(format!(
                "field-of-view half angle must lie in [0, π/2], got {half_angle}"
            ));
        }
        if boresight.dot(&scan_axis).abs() > 1e-9 {
            return invalid("scan axis must be orthogonal to the boresight");
        }
        Ok(Self {
            half_angle,
            boresight,
            scan_axis,
        })
    }

    /// Sector centered on broadside (+y) of an x-axis ULA, scanning towards +x.
    pub fn broadside(half_angle: f64) -> Result<Self> {
        Self::new(half_angle, Direction::y(), Direction::x())
    }

    /// Broadside sector given its total width in degrees (180° = full half-plane).
    pub fn from_total_degrees(total_deg: f64) -> Result<Self> {
        Self::broadside((total_deg / 2.0).to_radians())
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn total_degrees(&self) -> f64 {
        2.0 * self.half_angle.to_degrees()
    }

    pub fn boresight(&self) -> Direction {
        self.boresight
    }

    pub fn scan_axis(&self) -> Direction {
        self.scan_axis
    }

    /// Direction at in-plane angle `theta` from the boresight.
    pub fn direction_at(&self, theta: f64) -> Direction {
        let (s, c) = theta.sin_cos();
        let b = self.boresight.vector();
        let a = self.scan_axis.vector();
        // Both inputs are orthonormal, so the combination is already unit norm.
        Direction([
            c * b[0] + s * a[0],
            c * b[1] + s * a[1],
            c * b[2] + s * a[2],
        ])
    }

    pub fn contains(&self, k: &Direction) -> bool {
        self.boresight.angle_to(k) <= self.half_angle + 1e-12
    }

    /// Draws a direction with in-plane angle uniform in `[-half_angle, half_angle]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Direction {
        let u: f64 = rng.random();
        self.direction_at(self.half_angle * (2.0 * u - 1.0))
    }
}
