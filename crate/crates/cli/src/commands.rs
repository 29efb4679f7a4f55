use std::f64::consts::PI;

use evanescent::fields::subluminality_sweep;
use evanescent::propagator::{
    asymptotic_fit, closed_form_discrepancy, correlation_quadrature, Direction, FitReport, SpacetimeSeparation,
};
use evanescent::{EvanescentField, Result, WaveguideConfig};
use rayon::prelude::*;

use crate::config::{Plan, UnitChoice};
use crate::report::{Table, Value};

fn common_meta(table: &mut Table, command: &str, plan: &Plan) {
    table.meta("command", command);
    table.meta(
        "unit_system",
        match plan.unit_system {
            UnitChoice::Normalized => "normalized",
            UnitChoice::Si => "si",
        },
    );
    table.meta("aspect_b_over_a", plan.aspect);
}

/// Every `(guide, ω/ω_c)` pair, guide-major.
fn guide_frequency_pairs(plan: &Plan) -> Vec<(&WaveguideConfig, f64)> {
    plan.guides
        .iter()
        .flat_map(|g| plan.fractions.iter().map(move |&f| (g, f)))
        .collect()
}

pub fn scatter(plan: &Plan) -> Result<Table> {
    let mut table = Table::new(&["kc_l", "omega_over_omega_c", "t2", "r2", "arg_t_rad", "unitarity"]);
    common_meta(&mut table, "scatter", plan);
    let rows = guide_frequency_pairs(plan)
        .par_iter()
        .map(|&(g, frac)| {
            let s = g.mode_at_fraction(frac)?.scatter();
            Ok(vec![
                g.kc_length().into(),
                frac.into(),
                s.t2.into(),
                s.r2.into(),
                s.t.arg().into(),
                (s.t2 + s.r2).into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn velocity(plan: &Plan) -> Result<Table> {
    let mut table = Table::new(&["kc_l", "omega_over_omega_c", "z_over_l", "v_bar_over_c"]);
    common_meta(&mut table, "velocity", plan);
    table.meta("density", plan.density.as_str());
    let mut best: Option<(f64, f64, f64, f64)> = None;
    let mut pass = true;
    for g in &plan.guides {
        let omegas: Vec<f64> = plan.fractions.iter().map(|f| f * g.cutoff_frequency()).collect();
        let zs: Vec<f64> = plan.z_fractions.iter().map(|f| f * g.length).collect();
        let report = subluminality_sweep(g, &omegas, &zs, plan.density)?;
        pass &= report.pass;
        let nz = zs.len();
        for (i, p) in report.points.iter().enumerate() {
            let (frac, zf) = (plan.fractions[i / nz], plan.z_fractions[i % nz]);
            table.push(vec![g.kc_length().into(), frac.into(), zf.into(), p.v_over_c.into()]);
            if best.is_none_or(|b| p.v_over_c > b.3) {
                best = Some((g.kc_length(), frac, zf, p.v_over_c));
            }
        }
    }
    let (kc_l, frac, zf, max) = best.expect("grids are non-empty");
    table.meta(
        "summary",
        Value::map([
            ("max_v_bar_over_c", max.into()),
            (
                "argmax",
                Value::map([
                    ("kc_l", kc_l.into()),
                    ("omega_over_omega_c", frac.into()),
                    ("z_over_l", zf.into()),
                ]),
            ),
            ("bound", (1.0 + evanescent::fields::SUBLUMINAL_SLACK).into()),
            ("pass", pass.into()),
        ]),
    );
    Ok(table)
}

pub fn fields(plan: &Plan) -> Result<Table> {
    let mut table = Table::new(&[
        "kc_l",
        "omega_over_omega_c",
        "z_over_l",
        "e_y_re",
        "e_y_im",
        "h_x_re",
        "h_x_im",
        "h_z_re",
        "h_z_im",
        "s_z",
        "w_full",
        "w_variant",
    ]);
    common_meta(&mut table, "fields", plan);
    table.meta("h0", plan.h0);
    table.meta("x_over_a", 0.5);
    table.meta("t", 0.0);
    let rows = guide_frequency_pairs(plan)
        .par_iter()
        .map(|&(g, frac)| {
            let field = EvanescentField::new(g.mode_at_fraction(frac)?).with_amplitude(plan.h0);
            plan.z_fractions
                .iter()
                .map(|&zf| {
                    let s = field.sample(g.a / 2.0, zf * g.length, 0.0)?;
                    let d = s.densities();
                    Ok(vec![
                        g.kc_length().into(),
                        frac.into(),
                        zf.into(),
                        s.e_y.re.into(),
                        s.e_y.im.into(),
                        s.h_x.re.into(),
                        s.h_x.im.into(),
                        s.h_z.re.into(),
                        s.h_z.im.into(),
                        d.s_z.into(),
                        d.w.into(),
                        d.w_variant.into(),
                    ])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok(table)
}

pub fn fit_value(fit: &FitReport) -> Value {
    Value::map([
        ("exponent", fit.exponent.into()),
        ("rate_over_omega_c", fit.rate_over_omega_c.into()),
        ("intercept", fit.intercept.into()),
        ("residual", fit.residual.into()),
        ("claimed_exponent", fit.claimed_exponent.into()),
        ("claimed_rate_over_omega_c", fit.claimed_rate_over_omega_c.into()),
        ("window_start", fit.window.start.into()),
        ("window_end", fit.window.end.into()),
        ("window_samples", fit.window.samples.into()),
    ])
}

/// `G` along the t-axis and z-axis (in units of `ω_c²`, with `ω_c = 1`),
/// fits of both decay laws, and the closed form against quadrature.
pub fn propagator(plan: &Plan) -> Result<Table> {
    let p = &plan.propagator;
    let mut table = Table::new(&["axis", "s_omega_c", "g_re", "g_im", "g_abs", "g_arg_rad", "est_error"]);
    common_meta(&mut table, "propagator", plan);
    table.meta("omega_c", 1.0);
    table.meta("tol", p.tol);
    table.meta("g_origin_reference", 1.0 / (64.0 * PI * PI));

    let jobs: Vec<(&str, f64)> = p
        .t_axis
        .iter()
        .map(|&s| ("t", s))
        .chain(p.z_axis.iter().map(|&s| ("z", s)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(axis, s)| {
            let sep = match axis {
                "t" => SpacetimeSeparation::new(s, 0.0)?,
                _ => SpacetimeSeparation::new(0.0, s)?,
            };
            let g = correlation_quadrature(&sep, 1.0, p.tol)?;
            Ok(vec![
                axis.into(),
                s.into(),
                g.g.re.into(),
                g.g.im.into(),
                g.g.norm().into(),
                g.g.arg().into(),
                g.est_error.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.into_iter().for_each(|r| table.push(r));

    let timelike = asymptotic_fit(1.0, Direction::Timelike, p.timelike, p.tol, p.fit_residual)?;
    let spacelike = asymptotic_fit(1.0, Direction::Spacelike, p.spacelike, p.tol, p.fit_residual)?;
    table.meta(
        "fit",
        Value::map([("timelike", fit_value(&timelike)), ("spacelike", fit_value(&spacelike))]),
    );

    let discrepancies = p
        .closed_form_points
        .par_iter()
        .map(|&t| closed_form_discrepancy(&SpacetimeSeparation::new(t, 0.0)?, 1.0, p.tol))
        .collect::<Result<Vec<_>>>()?;
    table.meta(
        "closed_form",
        Value::List(
            discrepancies
                .iter()
                .map(|d| {
                    Value::map([
                        ("t_omega_c", d.sep.t.into()),
                        ("closed_re", d.closed_form.re.into()),
                        ("closed_im", d.closed_form.im.into()),
                        ("quadrature_re", d.quadrature.g.re.into()),
                        ("quadrature_im", d.quadrature.g.im.into()),
                        ("abs_difference", d.abs_difference.into()),
                        ("magnitude_ratio", d.magnitude_ratio.into()),
                    ])
                })
                .collect(),
        ),
    );
    Ok(table)
}
