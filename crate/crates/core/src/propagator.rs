//! Two-point correlation function of evanescent photons in the cut-off
//! guide, in natural units (ħ = c = 1), between the origin and `(t, 0, 0, z)`:
//!
//! ```text
//! G(t, z) = (1/16π³) ∫₀^{ω_c} dβ √(ω_c² − β²) exp(−i √(ω_c² − β²) t − β z)
//! ```
//!
//! The integral, evaluated by quadrature after `β = ω_c sin φ`, is the
//! reference. A Hankel-function closed form and two asymptotic decay laws
//! are evaluated against it and the differences reported.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::integrate_oscillatory;
use crate::specfun::hankel2;

/// Threshold below which `|t² − z²|` (relative to `t² + z²`) counts as lightlike.
pub const LIGHTLIKE_TOLERANCE: f64 = 1e-12;

/// Default RMS residual (in `ln|G|`) above which a decay fit is rejected.
pub const DEFAULT_FIT_RESIDUAL: f64 = 1e-2;

fn prefactor() -> f64 {
    1.0 / (16.0 * PI * PI * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    Timelike,
    Spacelike,
    Lightlike,
}

/// Separation `(t, z)` from the origin, with `t, z ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeSeparation {
    pub t: f64,
    pub z: f64,
    /// `t² − z²`
    pub interval2: f64,
}

impl SpacetimeSeparation {
    pub fn new(t: f64, z: f64) -> Result<Self> {
        for (what, v) in [("t", t), ("z", z)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::OutOfDomain {
                    what,
                    value: v,
                    range: "[0, ∞)".into(),
                });
            }
        }
        Ok(SpacetimeSeparation {
            t,
            z,
            interval2: (t - z) * (t + z),
        })
    }

    pub fn kind(&self) -> IntervalKind {
        let scale = (self.t * self.t + self.z * self.z).max(f64::MIN_POSITIVE);
        if self.interval2.abs() <= LIGHTLIKE_TOLERANCE * scale {
            IntervalKind::Lightlike
        } else if self.interval2 > 0.0 {
            IntervalKind::Timelike
        } else {
            IntervalKind::Spacelike
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Quadrature,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed_form",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationValue {
    pub g: Complex64,
    pub method: Method,
    /// Absolute error estimate; zero for the closed form.
    pub est_error: f64,
}

fn check_cutoff(omega_c: f64) -> Result<()> {
    if !(omega_c > 0.0 && omega_c.is_finite()) {
        return Err(Error::OutOfDomain {
            what: "cutoff frequency",
            value: omega_c,
            range: "(0, ∞)".into(),
        });
    }
    Ok(())
}

/// `G(t, z)` by quadrature to absolute tolerance `tol`.
///
/// After `β = ω_c sin φ` the integrand is
/// `ω_c² cos²φ · exp(−i ω_c t cos φ − ω_c z sin φ)` on `[0, π/2]`, smooth at
/// both ends, with phase rate at most `ω_c t`.
pub fn correlation_quadrature(sep: &SpacetimeSeparation, omega_c: f64, tol: f64) -> Result<CorrelationValue> {
    check_cutoff(omega_c)?;
    let scale = prefactor();
    let (wt, wz) = (omega_c * sep.t, omega_c * sep.z);
    let w2 = omega_c * omega_c;
    let q = integrate_oscillatory(
        |phi| {
            let (sin, cos) = phi.sin_cos();
            Complex64::from_polar(w2 * cos * cos * (-wz * sin).exp(), -wt * cos)
        },
        wt,
        0.0,
        FRAC_PI_2,
        tol / scale,
    )?;
    Ok(CorrelationValue {
        g: q.value * scale,
        method: Method::Quadrature,
        est_error: q.est_error * scale,
    })
}

/// The Hankel closed form
/// `G = ω_c / (32π² s) · [H⁽²⁾₁(ω_c s) − t H⁽²⁾₂(ω_c s)]`, `s = √(t² − z²)`,
/// evaluated literally. Timelike separations only.
pub fn correlation_closed_form(sep: &SpacetimeSeparation, omega_c: f64) -> Result<CorrelationValue> {
    check_cutoff(omega_c)?;
    if sep.kind() != IntervalKind::Timelike {
        return Err(Error::OutOfDomain {
            what: "t² − z²",
            value: sep.interval2,
            range: "(0, ∞) (timelike only)".into(),
        });
    }
    let s = sep.interval2.sqrt();
    let arg = omega_c * s;
    let g = omega_c / (32.0 * PI * PI * s) * (hankel2(1, arg)? - sep.t * hankel2(2, arg)?);
    Ok(CorrelationValue {
        g,
        method: Method::ClosedForm,
        est_error: 0.0,
    })
}

/// Closed form against quadrature at one timelike point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormDiscrepancy {
    pub sep: SpacetimeSeparation,
    pub closed_form: Complex64,
    pub quadrature: CorrelationValue,
    pub abs_difference: f64,
    /// `|closed form| / |quadrature|`
    pub magnitude_ratio: f64,
}

pub fn closed_form_discrepancy(sep: &SpacetimeSeparation, omega_c: f64, tol: f64) -> Result<ClosedFormDiscrepancy> {
    let closed = correlation_closed_form(sep, omega_c)?;
    let quad = correlation_quadrature(sep, omega_c, tol)?;
    Ok(ClosedFormDiscrepancy {
        sep: *sep,
        closed_form: closed.g,
        quadrature: quad,
        abs_difference: (closed.g - quad.g).norm(),
        magnitude_ratio: closed.g.norm() / quad.g.norm(),
    })
}

/// Axis along which a decay law is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `z = 0`, varying `t`.
    Timelike,
    /// `t = 0`, varying `z`.
    Spacelike,
}

impl Direction {
    /// Claimed `(exponent, rate/ω_c)` of `|G| ~ s^p e^{−μ s}` on this axis.
    pub fn claimed(self) -> (f64, f64) {
        match self {
            Direction::Timelike => (-0.5, 0.0),
            Direction::Spacelike => (-1.5, 1.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Timelike => "timelike",
            Direction::Spacelike => "spacelike",
        }
    }

    fn separation(self, s: f64) -> Result<SpacetimeSeparation> {
        match self {
            Direction::Timelike => SpacetimeSeparation::new(s, 0.0),
            Direction::Spacelike => SpacetimeSeparation::new(0.0, s),
        }
    }
}

/// Log-spaced sample window `[start, end]` along one axis, in units of `1/ω_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

impl FitWindow {
    pub fn points(&self) -> Vec<f64> {
        let n = self.samples;
        if n == 1 {
            return vec![self.start];
        }
        let (lo, hi) = (self.start.ln(), self.end.ln());
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }
}

/// Least-squares fit `ln|G| = c + p ln s − μ s`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub direction: Direction,
    pub window: FitWindow,
    pub exponent: f64,
    /// `μ`, in units of `ω_c`.
    pub rate_over_omega_c: f64,
    pub intercept: f64,
    /// RMS residual in `ln|G|`.
    pub residual: f64,
    pub claimed_exponent: f64,
    pub claimed_rate_over_omega_c: f64,
    /// `(ω_c s, |G|)` samples used for the fit.
    pub samples: Vec<(f64, f64)>,
}

impl FitReport {
    /// Whether the fit lands within the given bands of the claimed law.
    pub fn agrees_with_claim(&self, exponent_band: f64, rate_band: f64) -> bool {
        (self.exponent - self.claimed_exponent).abs() <= exponent_band
            && (self.rate_over_omega_c - self.claimed_rate_over_omega_c).abs() <= rate_band
    }
}

/// Fit `|G| ~ s^p e^{−μ s}` to quadrature values over a window.
pub fn asymptotic_fit(
    omega_c: f64,
    direction: Direction,
    window: FitWindow,
    tol: f64,
    max_residual: f64,
) -> Result<FitReport> {
    check_cutoff(omega_c)?;
    if window.samples < 4 {
        return Err(Error::IllConditionedFit(format!(
            "{} samples cannot determine three parameters with a residual",
            window.samples
        )));
    }
    if !(window.start > 0.0 && window.end > window.start && window.end.is_finite()) {
        return Err(Error::IllConditionedFit(format!(
            "window [{}, {}] must satisfy 0 < start < end",
            window.start, window.end
        )));
    }
    let scaled = window.points();
    let mut samples = Vec::with_capacity(scaled.len());
    for &s in &scaled {
        let sep = direction.separation(s / omega_c)?;
        let g = correlation_quadrature(&sep, omega_c, tol)?;
        samples.push((s, g.g.norm()));
    }

    let n = samples.len();
    let design = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => 1.0,
        1 => samples[i].0.ln(),
        _ => -samples[i].0,
    });
    let target = DVector::from_iterator(n, samples.iter().map(|&(_, g)| g.ln()));
    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(&target, 1e-14)
        .map_err(|e| Error::IllConditionedFit(e.to_string()))?;
    let resid = &design * &coef - &target;
    let residual = (resid.norm_squared() / n as f64).sqrt();
    if residual.is_nan() || residual > max_residual {
        return Err(Error::IllConditionedFit(format!(
            "RMS residual {residual:e} exceeds {max_residual:e}"
        )));
    }
    let (claimed_exponent, claimed_rate) = direction.claimed();
    Ok(FitReport {
        direction,
        window,
        exponent: coef[1],
        rate_over_omega_c: coef[2],
        intercept: coef[0],
        residual,
        claimed_exponent,
        claimed_rate_over_omega_c: claimed_rate,
        samples,
    })
}

/// Effective rest mass `ħω_c/c²` of guided photons.
pub fn effective_mass(omega_c: f64, hbar: f64, c: f64) -> f64 {
    hbar * omega_c / (c * c)
}

/// Whether a spacelike separation lies within one effective Compton
/// wavelength `ħ/(mc) = c/ω_c`: `0 < z² − t² ≤ (1/ω_c)²` with `c = 1`.
pub fn compton_reach(sep: &SpacetimeSeparation, omega_c: f64) -> bool {
    let reach = 1.0 / omega_c;
    let spatial = -sep.interval2;
    spatial > 0.0 && spatial <= reach * reach
}
