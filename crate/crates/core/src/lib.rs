//! Secret-key rates over a free-space optical link with a finite-aperture,
//! movable eavesdropper.
//!
//! The pipeline runs from Gaussian beam optics ([`beam`]) through scalar
//! diffraction of the cropped beam ([`diffraction`]) to wiretap-channel
//! parameters ([`channel`]), key-rate bounds and protocol rates ([`rates`]),
//! and geometry sweeps and optimizations ([`sweep`]). [`harness`] holds the
//! file-producing front end used by the `fso-keyrate` binary.

pub mod beam;
pub mod bessel;
pub mod channel;
pub mod diffraction;
pub mod error;
pub mod harness;
pub mod optimize;
pub mod quadrature;
pub mod rates;
pub mod sweep;

pub use error::{Error, Result};
