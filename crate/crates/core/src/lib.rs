//! Evanescent TE10 modes in a cut-off rectangular waveguide.
//!
//! * [`mode`]: geometry, dispersion below cutoff, barrier scattering coefficients.
//! * [`fields`]: interior fields, Poynting flux, energy densities, average
//!   energy velocity and subluminality sweeps.
//! * [`specfun`]: Bessel and Hankel functions of orders 0–2.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration.
//! * [`propagator`]: two-point correlation function of evanescent photons.

#![allow(clippy::excessive_precision)]

pub mod compensated;
pub mod error;
pub mod fields;
pub mod mode;
pub mod propagator;
pub mod quadrature;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
pub use fields::{Density, EnergyTransport, EvanescentField, FieldIntegrals, FieldSample, SweepReport};
pub use mode::{LogPolar, ModeState, ScatterCoeffs, WaveguideConfig};
pub use propagator::{CorrelationValue, Direction, FitReport, FitWindow, SpacetimeSeparation};
pub use units::UnitSystem;
