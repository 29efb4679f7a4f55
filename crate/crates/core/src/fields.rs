//! Evanescent TE10 fields inside the barrier, their Poynting flux and
//! energy densities, and the average energy velocity `v̄ = P_z / W`.
//!
//! Inside `0 < z < L` (time factor `e^{−iωt}`):
//!
//! ```text
//! E_y = (i H₀ ω μ₀ / k_c) sin(k_c x) [ A e^{βz} + B e^{−βz}]
//! H_x = (H₀ β / k_c)      sin(k_c x) [−A e^{βz} + B e^{−βz}]
//! H_z =  H₀               cos(k_c x) [ A e^{βz} + B e^{−βz}]
//! ```
//!
//! Two energy densities are carried side by side: the full one, and a
//! variant that drops the `H_z` term (only the components that enter `S_z`).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::compensated::{ComplexDd, DoubleDouble};
use crate::error::{Error, Result};
use crate::mode::{ModeState, ScatterCoeffs, WaveguideConfig};
use crate::quadrature::gauss_legendre;
use crate::units::UnitSystem;

/// Relative slack allowed above `c` before a sweep point counts as superluminal.
pub const SUBLUMINAL_SLACK: f64 = 1e-9;

/// Which energy density defines `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Density {
    /// `w = ¼(ε₀|E_y|² + μ₀|H_x|² + μ₀|H_z|²)`
    Full,
    /// `w = ¼(ε₀|E_y|² + μ₀|H_x|²)`
    Variant,
}

impl Density {
    pub const ALL: [Density; 2] = [Density::Full, Density::Variant];

    pub fn as_str(self) -> &'static str {
        match self {
            Density::Full => "full",
            Density::Variant => "variant",
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Density {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Density::Full),
            "variant" => Ok(Density::Variant),
            other => Err(format!("unknown density '{other}' (expected full or variant)")),
        }
    }
}

/// Complex field components at one point `(x, z, t)` inside the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub x: f64,
    pub z: f64,
    pub t: f64,
    pub e_y: Complex64,
    pub h_x: Complex64,
    pub h_z: Complex64,
    pub units: UnitSystem,
}

/// Pointwise time-averaged flux and energy densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDensities {
    pub s_z: f64,
    pub w: f64,
    pub w_variant: f64,
}

impl FieldSample {
    pub fn densities(&self) -> EnergyDensities {
        let u = &self.units;
        let s_z = 0.5 * (-self.e_y * self.h_x.conj()).re;
        let electric = u.eps0 * self.e_y.norm_sqr();
        let transverse = u.mu0 * self.h_x.norm_sqr();
        let axial = u.mu0 * self.h_z.norm_sqr();
        EnergyDensities {
            s_z,
            w: 0.25 * (electric + transverse + axial),
            w_variant: 0.25 * (electric + transverse),
        }
    }
}

/// Cross-section integrated power, line energy densities and the average
/// energy velocities that follow from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTransport {
    pub z: f64,
    pub power: f64,
    pub energy_full: f64,
    pub energy_variant: f64,
    pub v_full: f64,
    pub v_variant: f64,
    pub c: f64,
}

impl EnergyTransport {
    pub fn energy(&self, density: Density) -> f64 {
        match density {
            Density::Full => self.energy_full,
            Density::Variant => self.energy_variant,
        }
    }

    pub fn velocity(&self, density: Density) -> f64 {
        match density {
            Density::Full => self.v_full,
            Density::Variant => self.v_variant,
        }
    }

    /// `v̄ / c`.
    pub fn velocity_ratio(&self, density: Density) -> f64 {
        self.velocity(density) / self.c
    }
}

/// Field-integrated `P_z` and `W` from direct quadrature over the cross
/// section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldIntegrals {
    pub z: f64,
    pub power: f64,
    pub energy_full: f64,
    pub energy_variant: f64,
}

impl FieldIntegrals {
    pub fn velocity(&self, density: Density) -> f64 {
        match density {
            Density::Full => self.power / self.energy_full,
            Density::Variant => self.power / self.energy_variant,
        }
    }
}

/// The evanescent field of one mode in one barrier, with amplitude `H₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvanescentField {
    pub mode: ModeState,
    pub coeffs: ScatterCoeffs,
    pub h0: f64,
}

impl EvanescentField {
    pub fn new(mode: ModeState) -> Self {
        EvanescentField {
            coeffs: mode.scatter(),
            mode,
            h0: 1.0,
        }
    }

    pub fn from_parts(mode: ModeState, coeffs: ScatterCoeffs) -> Self {
        EvanescentField { mode, coeffs, h0: 1.0 }
    }

    pub fn with_amplitude(mut self, h0: f64) -> Self {
        self.h0 = h0;
        self
    }

    fn config(&self) -> &WaveguideConfig {
        &self.mode.config
    }

    fn check_z(&self, z: f64) -> Result<()> {
        let length = self.config().length;
        if !(z > 0.0 && z < length) {
            return Err(Error::OutOfDomain {
                what: "z",
                value: z,
                range: format!("(0, {length})"),
            });
        }
        Ok(())
    }

    fn electric_prefactor(&self) -> f64 {
        self.h0 * self.mode.omega * self.config().units.mu0 / self.mode.k_c
    }

    /// Field components at `(x, z, t)`, `0 ≤ x ≤ a`, `0 < z < L`.
    pub fn sample(&self, x: f64, z: f64, t: f64) -> Result<FieldSample> {
        let a = self.config().a;
        if !(0.0..=a).contains(&x) {
            return Err(Error::OutOfDomain {
                what: "x",
                value: x,
                range: format!("[0, {a}]"),
            });
        }
        self.check_z(z)?;
        let m = &self.mode;
        let (sin, cos) = (m.k_c * x).sin_cos();
        let time = Complex64::from_polar(1.0, -m.omega * t);
        let sum = self.coeffs.interior_sum(z) * time;
        let diff = self.coeffs.interior_difference(z) * time;
        Ok(FieldSample {
            x,
            z,
            t,
            e_y: Complex64::i() * self.electric_prefactor() * sin * sum,
            h_x: self.h0 * m.beta / m.k_c * sin * diff,
            h_z: self.h0 * cos * sum,
            units: self.config().units,
        })
    }

    /// Closed-form cross-section integrals and average energy velocities at `z`.
    pub fn transport(&self, z: f64) -> Result<EnergyTransport> {
        self.check_z(z)?;
        let m = &self.mode;
        let cfg = self.config();
        let (k2, kc2) = (m.k * m.k, m.k_c * m.k_c);
        let c = cfg.units.c;
        let (full, variant) = self.brackets(z);
        let common = self.coeffs.t2 * self.h0 * self.h0 * cfg.a * cfg.b * cfg.units.mu0;
        Ok(EnergyTransport {
            z,
            power: common * c * k2 / (4.0 * kc2),
            energy_full: common / 8.0 * full,
            energy_variant: common / 16.0 * variant,
            v_full: c * 2.0 * k2 / kc2 / full,
            v_variant: c * 4.0 * k2 / kc2 / variant,
            c,
        })
    }

    /// Bracketed `z`-profiles of the full and variant line energy densities:
    ///
    /// ```text
    /// full    = (k_c²/β²) cosh 2β(z−L) + k²(β² − k²)/(k_c² β²)
    /// variant = (k_c²/β²) cosh 2β(z−L) − (β² − k²)²/(k_c² β²)
    /// ```
    fn brackets(&self, z: f64) -> (f64, f64) {
        let m = &self.mode;
        let (k2, kc2, b2) = (m.k * m.k, m.k_c * m.k_c, m.beta * m.beta);
        let growth = kc2 / b2 * (2.0 * m.beta * (z - self.config().length)).cosh();
        let split = b2 - k2;
        (growth + k2 * split / (kc2 * b2), growth - split * split / (kc2 * b2))
    }

    /// Variant velocity with the constant term of the bracket taken with a
    /// `+` sign. Disagrees with the field integrals unless `β = k`; kept so
    /// the discrepancy can be reported.
    pub fn variant_velocity_plus_constant(&self, z: f64) -> Result<f64> {
        self.check_z(z)?;
        let m = &self.mode;
        let (k2, kc2, b2) = (m.k * m.k, m.k_c * m.k_c, m.beta * m.beta);
        let growth = kc2 / b2 * (2.0 * m.beta * (z - self.config().length)).cosh();
        let split = b2 - k2;
        let bracket = growth + split * split / (kc2 * b2);
        Ok(self.config().units.c * 4.0 * k2 / kc2 / bracket)
    }

    /// `P_z` and `W` by Gauss–Legendre quadrature of the sampled fields over
    /// `0 ≤ x ≤ a` (the fields do not depend on `y`, which contributes `b`).
    ///
    /// Fields and densities are formed in double-double arithmetic so the
    /// small in-phase part of `E_y H_x*` survives.
    pub fn field_integrals(&self, z: f64, nodes: usize) -> Result<FieldIntegrals> {
        self.check_z(z)?;
        let m = &self.mode;
        let cfg = self.config();
        let u = &cfg.units;
        let (xs, ws) = gauss_legendre(nodes);
        let half_width = 0.5 * cfg.a;

        let grow = ComplexDd::from(self.coeffs.a.scale_exp(m.beta * z).to_complex());
        let decay = ComplexDd::from(self.coeffs.b.scale_exp(-m.beta * z).to_complex());
        let sum = grow + decay;
        let diff = decay - grow;

        let mut power = DoubleDouble::ZERO;
        let mut full = DoubleDouble::ZERO;
        let mut variant = DoubleDouble::ZERO;
        let quarter = DoubleDouble::new(0.25);
        for (&node, &weight) in xs.iter().zip(&ws) {
            let x = half_width * (node + 1.0);
            let (sin, cos) = (m.k_c * x).sin_cos();
            let e_y = sum.scale(self.electric_prefactor() * sin).mul_i();
            let h_x = diff.scale(self.h0 * m.beta / m.k_c * sin);
            let h_z = sum.scale(self.h0 * cos);

            let s_z = (-(e_y * h_x.conj())).re * DoubleDouble::new(0.5);
            let electric = e_y.norm_sqr() * DoubleDouble::new(u.eps0);
            let transverse = h_x.norm_sqr() * DoubleDouble::new(u.mu0);
            let axial = h_z.norm_sqr() * DoubleDouble::new(u.mu0);
            let w_var = (electric + transverse) * quarter;
            let w_full = w_var + axial * quarter;

            let weight = DoubleDouble::new(weight * half_width * cfg.b);
            power = power + s_z * weight;
            full = full + w_full * weight;
            variant = variant + w_var * weight;
        }
        Ok(FieldIntegrals {
            z,
            power: power.to_f64(),
            energy_full: full.to_f64(),
            energy_variant: variant.to_f64(),
        })
    }
}

/// One point of a velocity sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub omega: f64,
    pub z: f64,
    pub v_over_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub density: Density,
    /// Row-major in (ω, z) grid order.
    pub points: Vec<SweepPoint>,
    pub max_ratio: f64,
    pub argmax: SweepPoint,
    pub pass: bool,
}

/// Evaluate `|v̄|/c` over an `ω × z` grid and certify `max ≤ 1 + 1e−9`.
pub fn subluminality_sweep(
    config: &WaveguideConfig,
    omega_grid: &[f64],
    z_grid: &[f64],
    density: Density,
) -> Result<SweepReport> {
    if omega_grid.is_empty() {
        return Err(Error::EmptyGrid("omega"));
    }
    if z_grid.is_empty() {
        return Err(Error::EmptyGrid("z"));
    }
    let rows: Vec<Vec<SweepPoint>> = omega_grid
        .par_iter()
        .map(|&omega| {
            let field = EvanescentField::new(config.mode(omega)?);
            z_grid
                .iter()
                .map(|&z| {
                    let tr = field.transport(z)?;
                    Ok(SweepPoint {
                        omega,
                        z,
                        v_over_c: tr.velocity_ratio(density).abs(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<SweepPoint> = rows.into_iter().flatten().collect();
    let argmax = points
        .iter()
        .copied()
        .reduce(|best, p| if p.v_over_c > best.v_over_c { p } else { best })
        .expect("grid is non-empty");
    Ok(SweepReport {
        density,
        max_ratio: argmax.v_over_c,
        pass: argmax.v_over_c <= 1.0 + SUBLUMINAL_SLACK,
        argmax,
        points,
    })
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                let s = i as f64 / (count - 1) as f64;
                lo + (hi - lo) * s
            })
            .collect(),
    }
}
