//! Maximal-ratio-combining (MRC) beams on arbitrary antenna arrays.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: arrays, unit directions, fields of view and plane-wave phases.
//! - [`channel`]: multipath channel realizations and per-antenna frequency responses.
//! - [`beam`]: MRC and single-direction weights, array factors, the per-path
//!   decomposition of the MRC pattern and component effectiveness.
//! - [`theory`]: closed-form predictions (array parameter, ineffectiveness
//!   probability, effective component count, wideband SNR).
//! - [`montecarlo`]: seeded, parallel experiments that reproduce the numerical curves.
//! - [`output`]: CSV/JSON serialization of experiment results.
//!
//! All array positions are expressed in carrier wavelengths, so the phase
//! of a plane wave arriving from unit direction `k` at element `A` is `2π A·k`.

pub mod beam;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod output;
pub mod theory;

pub use beam::{BeamKind, BeamWeights, Decomposition, EffectivenessReport};
pub use channel::{ChannelRealization, MultipathComponent};
pub use error::{Error, Result};
pub use geometry::{AntennaArray, Direction, FieldOfView};
pub use montecarlo::{ExperimentConfig, SweepResult};
pub use theory::{ArrayParameterEstimate, HarmonicMode};

pub use num_complex::Complex64;
