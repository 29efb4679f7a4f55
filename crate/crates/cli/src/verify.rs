//! Every acceptance invariant evaluated against the configured grids, one
//! row per check. Claims that are known not to hold are measured and
//! listed as `reported` without affecting the outcome.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use evanescent::fields::{linspace, subluminality_sweep};
use evanescent::propagator::{asymptotic_fit, closed_form_discrepancy, correlation_quadrature, Direction, SpacetimeSeparation};
use evanescent::quadrature::integrate_real;
use evanescent::specfun::{bessel_j, bessel_y, compare_integral_rep, hankel2, wronskian};
use evanescent::{Density, EvanescentField, Result, UnitSystem, WaveguideConfig};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::commands::fit_value;
use crate::config::Plan;
use crate::report::{Table, Value};

/// Field-integration nodes per transverse integral.
pub const ORACLE_NODES: usize = 64;
/// Points `ω_c z ∈ [1, 50]` where the spacelike correlation must stand
/// clear of its error estimate.
pub const SPACELIKE_SAMPLES: usize = 50;
/// Offset of the "just inside the exit" anchor, as a fraction of `L`.
pub const EXIT_OFFSET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Reported => "reported",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    AtMost,
    Reported,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    relation: Relation,
}

impl Check {
    fn at_most(id: &str, name: &str, measured: f64, threshold: f64) -> Self {
        Check {
            id: id.into(),
            name: name.into(),
            measured,
            threshold,
            relation: Relation::AtMost,
        }
    }

    /// Measured against a claimed value; never fails the run.
    fn reported(id: &str, name: &str, measured: f64, claimed: f64) -> Self {
        Check {
            id: id.into(),
            name: name.into(),
            measured,
            threshold: claimed,
            relation: Relation::Reported,
        }
    }

    pub fn status(&self) -> Status {
        match self.relation {
            Relation::Reported => Status::Reported,
            Relation::AtMost if self.measured <= self.threshold => Status::Pass,
            Relation::AtMost => Status::Fail,
        }
    }

    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::AtMost => self.threshold - self.measured,
            Relation::Reported => self.measured - self.threshold,
        }
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v > m || v.is_nan() { v } else { m })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn pairs(plan: &Plan) -> Vec<(&WaveguideConfig, f64)> {
    plan.guides
        .iter()
        .flat_map(|g| plan.fractions.iter().map(move |&f| (g, f)))
        .collect()
}

/// Per `(guide, ω)`: unitarity defect, continuity defect, power spread,
/// worst closed-form/oracle mismatch.
fn barrier_checks(plan: &Plan) -> Result<Vec<Check>> {
    let i = Complex64::i();
    let per_pair = pairs(plan)
        .par_iter()
        .map(|&(g, frac)| {
            let mode = g.mode_at_fraction(frac)?;
            let s = mode.scatter();
            let unitarity = (s.t2 + s.r2 - 1.0).abs();

            let l = g.length;
            let exterior = s.transmitted(l);
            let ext_slope = i * mode.k * exterior;
            let continuity = rel_c(s.interior_sum(l), exterior).max(rel_c(-mode.beta * s.interior_difference(l), ext_slope));

            let field = EvanescentField::new(mode).with_amplitude(plan.h0);
            let mut powers = Vec::with_capacity(plan.z_fractions.len());
            let mut mismatch: f64 = 0.0;
            for &zf in &plan.z_fractions {
                let z = zf * l;
                let oracle = field.field_integrals(z, ORACLE_NODES)?;
                let closed = field.transport(z)?;
                powers.push(oracle.power);
                for d in Density::ALL {
                    mismatch = mismatch.max(rel(closed.velocity(d), oracle.velocity(d)));
                }
            }
            let (lo, hi) = powers
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
            Ok([unitarity, continuity, (hi - lo) / hi.abs(), mismatch])
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = |k: usize| max_of(per_pair.iter().map(|v| v[k]));
    Ok(vec![
        Check::at_most("1", "unitarity |R|^2+|T|^2-1", worst(0), 1e-12),
        Check::at_most("2", "continuity of E_y and dE_y/dz at z=L (relative)", worst(1), 1e-10),
        Check::at_most("3", "field-integrated power spread across z (relative)", worst(2), 1e-10),
        Check::at_most("4", "closed-form velocity vs field integration (relative)", worst(3), 1e-10),
    ])
}

fn rel_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn subluminality_checks(plan: &Plan) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (id, d) in [("5a", Density::Full), ("5b", Density::Variant)] {
        let mut max: f64 = 0.0;
        for g in &plan.guides {
            let omegas: Vec<f64> = plan.fractions.iter().map(|f| f * g.cutoff_frequency()).collect();
            let zs: Vec<f64> = plan.z_fractions.iter().map(|f| f * g.length).collect();
            max = max.max(subluminality_sweep(g, &omegas, &zs, d)?.max_ratio);
        }
        checks.push(Check::at_most(id, &format!("max |v_bar|/c, {} density", d.as_str()), max, 1.0 + 1e-9));
    }

    let mut full: f64 = 0.0;
    let mut variant: f64 = 0.0;
    let mut plus: f64 = 0.0;
    for g in &plan.guides {
        let z = g.length * (1.0 - EXIT_OFFSET);
        let tr = EvanescentField::new(g.mode_at_fraction(FRAC_1_SQRT_2)?).transport(z)?;
        full = full.max((tr.velocity_ratio(Density::Full) - 0.5).abs());
        variant = variant.max((tr.velocity_ratio(Density::Variant) - 1.0).abs());
        for &frac in &plan.fractions {
            let field = EvanescentField::new(g.mode_at_fraction(frac)?);
            let tr = field.transport(z)?;
            plus = plus.max((field.variant_velocity_plus_constant(z)? / tr.c - tr.velocity_ratio(Density::Variant)).abs());
        }
    }
    checks.push(Check::at_most("5c", "|v_bar/c - 1/2| at k^2=k_c^2/2, z=L-, full density", full, 1e-6));
    checks.push(Check::at_most("5d", "|v_bar/c - 1| at k^2=k_c^2/2, z=L-, variant density", variant, 1e-6));
    checks.push(Check::reported(
        "5e",
        "variant v_bar/c at z=L-: + constant term vs field-consistent form, max difference",
        plus,
        0.0,
    ));
    Ok(checks)
}

fn propagator_checks(plan: &Plan, meta: &mut Vec<(String, Value)>) -> Result<Vec<Check>> {
    let p = &plan.propagator;
    let mut checks = Vec::new();

    let origin = correlation_quadrature(&SpacetimeSeparation::new(0.0, 0.0)?, 1.0, p.tol)?;
    let reference = 1.0 / (64.0 * PI * PI);
    checks.push(Check::at_most("6", "G(0,0) vs omega_c^2/(64 pi^2) (relative)", rel(origin.g.re, reference).max(origin.g.im.abs() / reference), 1e-8));

    let spacelike = linspace(1.0, 50.0, SPACELIKE_SAMPLES)
        .par_iter()
        .map(|&z| correlation_quadrature(&SpacetimeSeparation::new(0.0, z)?, 1.0, p.tol))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::at_most(
        "7",
        "max est_error/|G(0,z)| for omega_c z in [1, 50]",
        max_of(spacelike.iter().map(|g| g.est_error / g.g.norm())),
        0.1,
    ));
    let rises = spacelike.windows(2).filter(|w| w[1].g.norm() >= w[0].g.norm()).count();
    checks.push(Check::at_most("m5", "non-decreasing steps of |G(0,z)| on omega_c z in [1, 50]", rises as f64, 0.0));

    let timelike = asymptotic_fit(1.0, Direction::Timelike, p.timelike, p.tol, p.fit_residual)?;
    checks.push(Check::at_most("8a", "timelike fit |p + 1/2|", (timelike.exponent + 0.5).abs(), 0.05));
    checks.push(Check::at_most("8b", "timelike fit |mu|/omega_c", timelike.rate_over_omega_c.abs(), 0.01));

    let space = asymptotic_fit(1.0, Direction::Spacelike, p.spacelike, p.tol, p.fit_residual)?;
    checks.push(Check::at_most("9a", "spacelike fit RMS residual in ln|G|", space.residual, p.fit_residual));
    checks.push(Check::reported("9b", "spacelike fit exponent p (claimed -3/2)", space.exponent, space.claimed_exponent));
    checks.push(Check::reported(
        "9c",
        "spacelike fit rate mu/omega_c (claimed 1)",
        space.rate_over_omega_c,
        space.claimed_rate_over_omega_c,
    ));
    meta.push((
        "fit".into(),
        Value::map([("timelike", fit_value(&timelike)), ("spacelike", fit_value(&space))]),
    ));

    let closed = p
        .closed_form_points
        .par_iter()
        .map(|&t| closed_form_discrepancy(&SpacetimeSeparation::new(t, 0.0)?, 1.0, p.tol))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::reported(
        "r1",
        "Hankel closed form: max ||G_closed|/|G_quad| - 1| over timelike points",
        max_of(closed.iter().map(|d| (d.magnitude_ratio - 1.0).abs())),
        0.0,
    ));
    Ok(checks)
}

fn specfun_checks(plan: &Plan) -> Result<Vec<Check>> {
    let xs = linspace(0.1, 20.0, 400);
    let mut wr: f64 = 0.0;
    let mut rec: f64 = 0.0;
    for &x in &xs {
        for n in 0..3 {
            wr = wr.max((wronskian(n, x)? - 2.0 / (PI * x)).abs());
        }
        for f in [bessel_j, bessel_y] {
            let (lhs, rhs) = (f(0, x)? + f(2, x)?, 2.0 / x * f(1, x)?);
            rec = rec.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
        let h = [hankel2(0, x)?, hankel2(1, x)?, hankel2(2, x)?];
        rec = rec.max((h[2] - (2.0 / x * h[1] - h[0])).norm() / h[2].norm().max(1.0));
    }

    let tol = plan.propagator.tol;
    let reps = linspace(0.1, 20.0, 60)
        .par_iter()
        .map(|&r| compare_integral_rep(r, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        Check::at_most("10a", "Wronskian J_n Y_n' - J_n' Y_n - 2/(pi x), n=0..2, x in [0.1, 20]", wr, 1e-10),
        Check::at_most("10b", "three-term recurrence for J, Y, H2 (scaled), x in [0.1, 20]", rec, 1e-10),
        Check::at_most(
            "10c",
            "integral representation real part vs J0, r in [0.1, 20]",
            max_of(reps.iter().map(|c| c.real_mismatch)),
            tol,
        ),
        Check::reported(
            "10d",
            "integral representation imaginary part vs -Y0, max mismatch",
            max_of(reps.iter().map(|c| c.imag_mismatch)),
            0.0,
        ),
    ])
}

fn module_checks(plan: &Plan) -> Result<Vec<Check>> {
    let si = UnitSystem::si();
    let quad = integrate_real(f64::cos, 0.0, FRAC_PI_2, 1e-13)?;

    let mut amplitude: f64 = 0.0;
    let mut monotone_breaks = 0usize;
    let mut sorted: Vec<&WaveguideConfig> = plan.guides.iter().collect();
    sorted.sort_by(|a, b| a.length.total_cmp(&b.length));
    for &frac in &plan.fractions {
        let mut last = f64::INFINITY;
        for g in &sorted {
            let mode = g.mode_at_fraction(frac)?;
            let t2 = mode.scatter().t2;
            if t2 > last {
                monotone_breaks += 1;
            }
            last = t2;
            let unit = EvanescentField::new(mode);
            let scaled = unit.with_amplitude(plan.h0 * 37.5);
            for &zf in &plan.z_fractions {
                let (a, b) = (unit.transport(zf * g.length)?, scaled.transport(zf * g.length)?);
                for d in Density::ALL {
                    amplitude = amplitude.max(rel(b.velocity(d), a.velocity(d)));
                }
            }
        }
    }
    Ok(vec![
        Check::at_most("m1", "SI units: |mu0 eps0 c^2 - 1|", (si.mu0 * si.eps0 * si.c * si.c - 1.0).abs(), 1e-15),
        Check::at_most("m2", "quadrature of cos on [0, pi/2] minus 1", (quad.value.re - 1.0).abs(), 1e-12),
        Check::at_most("m3", "steps where |T|^2 grows with barrier length", monotone_breaks as f64, 0.0),
        Check::at_most("m4", "v_bar change under H0 rescaling (relative)", amplitude, 1e-12),
    ])
}

/// Runs every check; the flag is true when none failed.
pub fn verify(plan: &Plan) -> Result<(Table, bool)> {
    let mut meta = Vec::new();
    let mut checks = barrier_checks(plan)?;
    checks.extend(subluminality_checks(plan)?);
    checks.extend(propagator_checks(plan, &mut meta)?);
    checks.extend(specfun_checks(plan)?);
    checks.extend(module_checks(plan)?);

    let mut table = Table::new(&["id", "check", "measured", "threshold", "margin", "status"]);
    table.meta("command", "verify");
    table.meta("kc_l", Value::from(plan.guides.iter().map(|g| g.kc_length()).collect::<Vec<_>>()));
    table.meta("frequency_points", plan.fractions.len());
    table.meta("z_points", plan.z_fractions.len());
    table.meta("tol", plan.propagator.tol);
    for c in &checks {
        table.push(vec![
            c.id.as_str().into(),
            c.name.as_str().into(),
            c.measured.into(),
            c.threshold.into(),
            c.margin().into(),
            c.status().as_str().into(),
        ]);
    }
    let failed = checks.iter().filter(|c| c.status() == Status::Fail).count();
    let reported = checks.iter().filter(|c| c.status() == Status::Reported).count();
    table.meta("checks", checks.len());
    table.meta("failed", failed);
    table.meta("reported", reported);
    table.meta("pass", failed == 0);
    table.meta.extend(meta);
    Ok((table, failed == 0))
}
