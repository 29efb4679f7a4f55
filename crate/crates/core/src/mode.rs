//! Waveguide geometry, TE10 dispersion below cutoff, and the scattering
//! coefficients of a cut-off section acting as a photonic barrier.
//!
//! The guide has cross section `a × b` on `0 ≤ z ≤ L` and is treated as
//! unbounded (exterior cutoff ≈ 0) outside it, so an incident TE10 wave at
//! `0 < ω < ω_c` tunnels through the section as a superposition of growing
//! and decaying evanescent modes `A e^{βz} + B e^{−βz}`.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// Cross-section and barrier length of the cut-off section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideConfig {
    /// Broad-wall width.
    pub a: f64,
    /// Narrow-wall height.
    pub b: f64,
    /// Length of the cut-off section.
    pub length: f64,
    pub units: UnitSystem,
}

impl WaveguideConfig {
    pub fn new(a: f64, b: f64, length: f64, units: UnitSystem) -> Result<Self> {
        let finite = a.is_finite() && b.is_finite() && length.is_finite();
        if !finite || a <= 0.0 || b <= 0.0 || length <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "a, b and L must be positive and finite (a = {a}, b = {b}, L = {length})"
            )));
        }
        if a <= b {
            return Err(Error::InvalidGeometry(format!(
                "broad wall must exceed narrow wall (a = {a}, b = {b})"
            )));
        }
        Ok(WaveguideConfig {
            a,
            b,
            length,
            units,
        })
    }

    /// Normalized guide with `k_c = 1`: `a = π`, `b = aspect·π` and `L = k_c L`.
    pub fn normalized(kc_length: f64, aspect: f64) -> Result<Self> {
        WaveguideConfig::new(PI, aspect * PI, kc_length, UnitSystem::normalized())
    }

    /// Same cross section with a different barrier length.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        WaveguideConfig::new(self.a, self.b, length, self.units)
    }

    /// TE10 cutoff `ω_c = cπ/a`.
    pub fn cutoff_frequency(&self) -> f64 {
        self.units.c * PI / self.a
    }

    pub fn cutoff_wavenumber(&self) -> f64 {
        PI / self.a
    }

    /// Dimensionless barrier strength `k_c L`.
    pub fn kc_length(&self) -> f64 {
        self.cutoff_wavenumber() * self.length
    }

    pub fn mode(&self, omega: f64) -> Result<ModeState> {
        ModeState::new(self, omega)
    }

    /// Mode at `fraction · ω_c`.
    pub fn mode_at_fraction(&self, fraction: f64) -> Result<ModeState> {
        ModeState::new(self, fraction * self.cutoff_frequency())
    }
}

/// One evanescent operating point: `k = ω/c`, `k_c = π/a` and the decay
/// constant `β = √(k_c² − k²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub omega: f64,
    pub k: f64,
    pub k_c: f64,
    pub beta: f64,
    pub config: WaveguideConfig,
}

impl ModeState {
    pub fn new(config: &WaveguideConfig, omega: f64) -> Result<Self> {
        let cutoff = config.cutoff_frequency();
        if !(omega > 0.0 && omega < cutoff) {
            return Err(Error::NotEvanescent { omega, cutoff });
        }
        let k = omega / config.units.c;
        let k_c = config.cutoff_wavenumber();
        // (k_c - k)(k_c + k) keeps β accurate close to cutoff.
        let beta = ((k_c - k) * (k_c + k)).sqrt();
        Ok(ModeState {
            omega,
            k,
            k_c,
            beta,
            config: *config,
        })
    }

    pub fn omega_fraction(&self) -> f64 {
        self.omega / self.config.cutoff_frequency()
    }

    pub fn scatter(&self) -> ScatterCoeffs {
        ScatterCoeffs::new(self)
    }
}

/// Complex number stored as `exp(ln_mag + i·phase)`.
///
/// Amplitudes of the growing/decaying modes span `e^{±βL}`, which leaves the
/// f64 range for long barriers; keeping the logarithm lets products such as
/// `A e^{βz}` be formed before exponentiating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPolar {
    pub ln_mag: f64,
    pub phase: f64,
}

impl LogPolar {
    pub fn new(ln_mag: f64, phase: f64) -> Self {
        LogPolar { ln_mag, phase }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.ln_mag.exp(), self.phase)
    }

    /// Multiply by the positive real `e^{ln_factor}`.
    pub fn scale_exp(self, ln_factor: f64) -> Self {
        LogPolar::new(self.ln_mag + ln_factor, self.phase)
    }

    pub fn abs(self) -> f64 {
        self.ln_mag.exp()
    }

    /// Phase reduced to (−π, π].
    pub fn arg(self) -> f64 {
        let wrapped = (self.phase + PI).rem_euclid(2.0 * PI) - PI;
        if wrapped == -PI {
            PI
        } else {
            wrapped
        }
    }
}

/// Transmission amplitude `T` and interior mode amplitudes `A`, `B` of a
/// barrier of length `L`, plus `|R|²`.
///
/// With `r = k/β`,
///
/// ```text
/// T = −2i r e^{−ikL} / [(1 − r²) sinh βL − 2i r cosh βL]
/// A = (T/2)(1 + i r) e^{ikL − βL}
/// B = (T/2)(1 − i r) e^{ikL + βL}
/// ```
///
/// The denominator is factored as `(e^{βL}/2)·[(1 − r²)(1 − q) − 2ir(1 + q)]`
/// with `q = e^{−2βL}`, which is overflow-free for every `βL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterCoeffs {
    pub length: f64,
    pub beta: f64,
    pub k: f64,
    pub t: LogPolar,
    pub a: LogPolar,
    pub b: LogPolar,
    /// `|T|²`; underflows to zero for very opaque barriers.
    pub t2: f64,
    /// `|R|² = 1 − |T|²`.
    pub r2: f64,
}

impl ScatterCoeffs {
    pub fn new(mode: &ModeState) -> Self {
        let length = mode.config.length;
        let (k, beta) = (mode.k, mode.beta);
        let r = k / beta;
        let x = beta * length;
        let q = (-2.0 * x).exp();
        let one_minus_q = -(-2.0 * x).exp_m1();
        let reduced = Complex64::new((1.0 - r * r) * one_minus_q, -2.0 * r * (1.0 + q));
        let reduced_norm2 = reduced.norm_sqr();

        let ln_t = (4.0 * r).ln() - x - 0.5 * reduced_norm2.ln();
        let arg_t = -FRAC_PI_2 - k * length - reduced.arg();
        let t = LogPolar::new(ln_t, arg_t);

        let ln_half_side = ln_t - LN_2 + 0.5 * r.mul_add(r, 1.0).ln();
        let a = LogPolar::new(ln_half_side - x, arg_t + r.atan() + k * length);
        let b = LogPolar::new(ln_half_side + x, arg_t - r.atan() + k * length);

        let t2 = (2.0 * ln_t).exp();
        // (1 + r²)²(1 − q)² / |D|², arranged so it cannot exceed 1
        let side = (1.0 + r * r) * one_minus_q;
        let r2 = 1.0 / (1.0 + 16.0 * r * r * q / (side * side));

        ScatterCoeffs {
            length,
            beta,
            k,
            t,
            a,
            b,
            t2,
            r2,
        }
    }

    pub fn transmission(&self) -> Complex64 {
        self.t.to_complex()
    }

    pub fn forward(&self) -> Complex64 {
        self.a.to_complex()
    }

    pub fn backward(&self) -> Complex64 {
        self.b.to_complex()
    }

    /// `A e^{βz} + B e^{−βz}`: the axial profile shared by `E_y` and `H_z`.
    pub fn interior_sum(&self, z: f64) -> Complex64 {
        self.a.scale_exp(self.beta * z).to_complex() + self.b.scale_exp(-self.beta * z).to_complex()
    }

    /// `−A e^{βz} + B e^{−βz}`: the axial profile of `H_x`.
    pub fn interior_difference(&self, z: f64) -> Complex64 {
        -self.a.scale_exp(self.beta * z).to_complex() + self.b.scale_exp(-self.beta * z).to_complex()
    }

    /// Transmitted wave `T e^{ikz}` for `z > L`.
    pub fn transmitted(&self, z: f64) -> Complex64 {
        LogPolar::new(self.t.ln_mag, self.t.phase + self.k * z).to_complex()
    }
}
