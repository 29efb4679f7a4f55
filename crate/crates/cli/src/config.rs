//! Run configuration: a JSON file with defaults for every field, resolved
//! into normalized-unit grids before anything is computed.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use evanescent::fields::linspace;
use evanescent::propagator::{FitWindow, DEFAULT_FIT_RESIDUAL};
use evanescent::{Density, WaveguideConfig};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "`{}`: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitChoice {
    #[default]
    Normalized,
    Si,
}

/// Evenly spaced grid, or an explicit list of values when `values` is set.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub count: Option<usize>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub values: Option<Vec<f64>>,
}

impl GridSpec {
    fn range(count: usize, min: f64, max: f64) -> Self {
        GridSpec {
            count: Some(count),
            min: Some(min),
            max: Some(max),
            values: None,
        }
    }

    /// Expand against `default`, checking every value lies in `[lo, hi]`
    /// (open ends where `open` says so).
    fn resolve(&self, path: &str, default: &GridSpec, lo: f64, hi: f64, open: (bool, bool)) -> Result<Vec<f64>, ConfigError> {
        let interval = format!(
            "{}{lo}, {hi}{}",
            if open.0 { '(' } else { '[' },
            if open.1 { ')' } else { ']' }
        );
        let inside = |v: f64| {
            v.is_finite()
                && if open.0 { v > lo } else { v >= lo }
                && if open.1 { v < hi } else { v <= hi }
        };
        if let Some(values) = &self.values {
            if self.count.is_some() || self.min.is_some() || self.max.is_some() {
                return Err(ConfigError::at(path, "give either `values` or `count`/`min`/`max`, not both"));
            }
            if values.is_empty() {
                return Err(ConfigError::at(format!("{path}.values"), "grid is empty"));
            }
            for (i, &v) in values.iter().enumerate() {
                if !inside(v) {
                    return Err(ConfigError::at(format!("{path}.values[{i}]"), format!("{v} is outside {interval}")));
                }
            }
            return Ok(values.clone());
        }
        let count = self.count.or(default.count).unwrap_or(0);
        let min = self.min.or(default.min).unwrap_or(lo);
        let max = self.max.or(default.max).unwrap_or(hi);
        if count == 0 {
            return Err(ConfigError::at(format!("{path}.count"), "grid is empty"));
        }
        for (field, v) in [("min", min), ("max", max)] {
            if !inside(v) {
                return Err(ConfigError::at(format!("{path}.{field}"), format!("{v} is outside {interval}")));
            }
        }
        if min > max {
            return Err(ConfigError::at(path, format!("min {min} exceeds max {max}")));
        }
        if count > 1 && min == max {
            return Err(ConfigError::at(path, "min equals max with more than one point"));
        }
        Ok(linspace(min, max, count))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// `k_c L` values (normalized units).
    pub kc_l: Option<Vec<f64>>,
    /// `b/a` (normalized units).
    pub aspect: Option<f64>,
    /// Broad wall in metres (SI).
    pub a: Option<f64>,
    /// Narrow wall in metres (SI).
    pub b: Option<f64>,
    /// Barrier lengths in metres (SI).
    pub length: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagatorSpec {
    /// `ω_c t` samples at `z = 0`.
    pub t_axis: Option<GridSpec>,
    /// `ω_c z` samples at `t = 0`.
    pub z_axis: Option<GridSpec>,
    /// Absolute quadrature tolerance on `G / ω_c²`.
    pub tol: Option<f64>,
    pub timelike_window: Option<WindowSpec>,
    pub spacelike_window: Option<WindowSpec>,
    pub fit_residual: Option<f64>,
    /// `ω_c t` values (with `z = 0`) where the Hankel closed form is compared.
    pub closed_form_points: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub unit_system: UnitChoice,
    #[serde(default)]
    pub geometry: Geometry,
    /// `ω/ω_c` grid.
    #[serde(default)]
    pub frequency: GridSpec,
    /// `z/L` grid.
    #[serde(default)]
    pub z: GridSpec,
    pub density: Option<String>,
    pub h0: Option<f64>,
    #[serde(default)]
    pub propagator: PropagatorSpec,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Command-line values that win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub density: Option<Density>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PropagatorPlan {
    pub t_axis: Vec<f64>,
    pub z_axis: Vec<f64>,
    pub tol: f64,
    pub timelike: FitWindow,
    pub spacelike: FitWindow,
    pub fit_residual: f64,
    pub closed_form_points: Vec<f64>,
}

/// A validated configuration. Every waveguide is in normalized units
/// (`k_c = 1`, `c = 1`), so `ω_c = 1` and lengths are `k_c L`.
#[derive(Debug, Clone)]
pub struct Plan {
    pub unit_system: UnitChoice,
    pub aspect: f64,
    pub guides: Vec<WaveguideConfig>,
    pub fractions: Vec<f64>,
    pub z_fractions: Vec<f64>,
    pub density: Density,
    pub h0: f64,
    pub propagator: PropagatorPlan,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_KC_L: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];
pub const DEFAULT_ASPECT: f64 = 0.5;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_CLOSED_FORM_POINTS: [f64; 5] = [2.0, 5.0, 10.0, 20.0, 50.0];

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError::at(
                if path == "." { String::new() } else { path },
                format!("{inner}"),
            )
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::at("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|mut e| {
            e.message = format!("{}: {}", path.display(), e.message);
            e
        })
    }

    pub fn resolve(&self, overrides: &Overrides) -> Result<Plan, ConfigError> {
        let (aspect, kc_ls) = self.resolve_geometry()?;
        let guides = kc_ls
            .iter()
            .enumerate()
            .map(|(i, &kc_l)| {
                WaveguideConfig::normalized(kc_l, aspect)
                    .map_err(|e| ConfigError::at(format!("geometry.kc_l[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let fractions = self
            .frequency
            .resolve("frequency", &GridSpec::range(100, 0.01, 0.99), 0.0, 1.0, (true, true))
            .map_err(|mut e| {
                e.message.push_str(" (ω/ω_c must lie strictly inside (0, 1) for an evanescent mode)");
                e
            })?;
        let z_fractions = self
            .z
            .resolve("z", &GridSpec::range(20, 0.01, 0.99), 0.0, 1.0, (true, true))?;

        let density = match (overrides.density, &self.density) {
            (Some(d), _) => d,
            (None, Some(s)) => Density::from_str(s).map_err(|_| ConfigError::at("density", format!("`{s}` is not one of full, variant")))?,
            (None, None) => Density::Full,
        };

        let h0 = self.h0.unwrap_or(1.0);
        if !(h0.is_finite() && h0 != 0.0) {
            return Err(ConfigError::at("h0", format!("{h0} must be finite and nonzero")));
        }

        Ok(Plan {
            unit_system: self.unit_system,
            aspect,
            guides,
            fractions,
            z_fractions,
            density,
            h0,
            propagator: self.resolve_propagator(overrides.tol)?,
            format: overrides.format.or(self.format).unwrap_or_default(),
            out: overrides.out.clone().or_else(|| self.out.clone()),
        })
    }

    fn resolve_geometry(&self) -> Result<(f64, Vec<f64>), ConfigError> {
        let g = &self.geometry;
        let positive = |path: String, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(ConfigError::at(path, format!("{v} must be positive and finite")))
            }
        };
        match self.unit_system {
            UnitChoice::Normalized => {
                for (field, set) in [("a", g.a.is_some()), ("b", g.b.is_some()), ("length", g.length.is_some())] {
                    if set {
                        return Err(ConfigError::at(
                            format!("geometry.{field}"),
                            "SI dimensions need \"unit_system\": \"si\"",
                        ));
                    }
                }
                let aspect = g.aspect.unwrap_or(DEFAULT_ASPECT);
                if !(aspect > 0.0 && aspect < 1.0) {
                    return Err(ConfigError::at("geometry.aspect", format!("{aspect} is outside (0, 1); the guide needs a > b > 0")));
                }
                let kc_l = g.kc_l.clone().unwrap_or_else(|| DEFAULT_KC_L.to_vec());
                if kc_l.is_empty() {
                    return Err(ConfigError::at("geometry.kc_l", "no barrier lengths given"));
                }
                for (i, &v) in kc_l.iter().enumerate() {
                    positive(format!("geometry.kc_l[{i}]"), v)?;
                }
                Ok((aspect, kc_l))
            }
            UnitChoice::Si => {
                for (field, set) in [("kc_l", g.kc_l.is_some()), ("aspect", g.aspect.is_some())] {
                    if set {
                        return Err(ConfigError::at(
                            format!("geometry.{field}"),
                            "normalized geometry cannot be mixed with \"unit_system\": \"si\"",
                        ));
                    }
                }
                let a = positive("geometry.a".into(), g.a.ok_or_else(|| ConfigError::at("geometry.a", "required for SI geometry"))?)?;
                let b = positive("geometry.b".into(), g.b.ok_or_else(|| ConfigError::at("geometry.b", "required for SI geometry"))?)?;
                if b >= a {
                    return Err(ConfigError::at("geometry.b", format!("{b} must be smaller than a = {a}")));
                }
                let lengths = g
                    .length
                    .clone()
                    .ok_or_else(|| ConfigError::at("geometry.length", "required for SI geometry"))?;
                if lengths.is_empty() {
                    return Err(ConfigError::at("geometry.length", "no barrier lengths given"));
                }
                let kc_l = lengths
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| positive(format!("geometry.length[{i}]"), l).map(|l| PI * l / a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((b / a, kc_l))
            }
        }
    }

    fn resolve_propagator(&self, tol_override: Option<f64>) -> Result<PropagatorPlan, ConfigError> {
        let p = &self.propagator;
        let t_axis = p
            .t_axis
            .clone()
            .unwrap_or_default()
            .resolve("propagator.t_axis", &GridSpec::range(51, 0.0, 50.0), 0.0, f64::MAX, (false, false))?;
        let z_axis = p
            .z_axis
            .clone()
            .unwrap_or_default()
            .resolve("propagator.z_axis", &GridSpec::range(51, 0.0, 50.0), 0.0, f64::MAX, (false, false))?;

        let (tol, tol_path) = match tol_override {
            Some(t) => (t, "--tol"),
            None => (p.tol.unwrap_or(DEFAULT_TOL), "propagator.tol"),
        };
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ConfigError::at(tol_path, format!("{tol} must be positive and finite")));
        }

        let window = |path: &str, spec: Option<WindowSpec>| -> Result<FitWindow, ConfigError> {
            let w = spec.unwrap_or(WindowSpec {
                start: 50.0,
                end: 500.0,
                samples: 16,
            });
            if !(w.start > 0.0 && w.end > w.start && w.end.is_finite()) {
                return Err(ConfigError::at(path, format!("window [{}, {}] must satisfy 0 < start < end", w.start, w.end)));
            }
            if w.samples < 4 {
                return Err(ConfigError::at(format!("{path}.samples"), "a three-parameter fit with a residual needs at least 4 samples"));
            }
            Ok(FitWindow {
                start: w.start,
                end: w.end,
                samples: w.samples,
            })
        };

        let fit_residual = p.fit_residual.unwrap_or(DEFAULT_FIT_RESIDUAL);
        if !(fit_residual > 0.0 && fit_residual.is_finite()) {
            return Err(ConfigError::at("propagator.fit_residual", format!("{fit_residual} must be positive and finite")));
        }

        let closed_form_points = p
            .closed_form_points
            .clone()
            .unwrap_or_else(|| DEFAULT_CLOSED_FORM_POINTS.to_vec());
        for (i, &t) in closed_form_points.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ConfigError::at(
                    format!("propagator.closed_form_points[{i}]"),
                    format!("{t} must be positive (the closed form needs a timelike separation)"),
                ));
            }
        }

        Ok(PropagatorPlan {
            t_axis,
            z_axis,
            tol,
            timelike: window("propagator.timelike_window", p.timelike_window)?,
            spacelike: window("propagator.spacelike_window", p.spacelike_window)?,
            fit_residual,
            closed_form_points,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(json: &str) -> Result<Plan, ConfigError> {
        RunConfig::from_json(json)?.resolve(&Overrides::default())
    }

    #[test]
    fn defaults() {
        let p = plan("{}").unwrap();
        assert_eq!(p.guides.len(), 5);
        assert_eq!(p.fractions.len(), 100);
        assert_eq!((p.fractions[0], p.fractions[99]), (0.01, 0.99));
        assert_eq!(p.z_fractions.len(), 20);
        assert_eq!(p.density, Density::Full);
        assert_eq!(p.format, Format::Csv);
        assert_eq!(p.propagator.tol, DEFAULT_TOL);
        assert_eq!(p.propagator.t_axis[0], 0.0);
    }

    #[test]
    fn flags_win() {
        let cfg = RunConfig::from_json(r#"{"format": "csv", "density": "full", "propagator": {"tol": 1e-9}}"#).unwrap();
        let p = cfg
            .resolve(&Overrides {
                format: Some(Format::Json),
                density: Some(Density::Variant),
                tol: Some(1e-11),
                out: Some("x.json".into()),
            })
            .unwrap();
        assert_eq!(p.format, Format::Json);
        assert_eq!(p.density, Density::Variant);
        assert_eq!(p.propagator.tol, 1e-11);
        assert_eq!(p.out, Some(PathBuf::from("x.json")));
    }

    #[test]
    fn frequency_at_or_above_cutoff_names_field() {
        let e = plan(r#"{"frequency": {"count": 3, "min": 0.5, "max": 1.0}}"#).unwrap_err();
        assert_eq!(e.path, "frequency.max");
        let e = plan(r#"{"frequency": {"values": [0.2, 1.5]}}"#).unwrap_err();
        assert_eq!(e.path, "frequency.values[1]");
    }

    #[test]
    fn empty_grids_rejected() {
        assert_eq!(plan(r#"{"frequency": {"count": 0}}"#).unwrap_err().path, "frequency.count");
        assert_eq!(plan(r#"{"z": {"values": []}}"#).unwrap_err().path, "z.values");
        assert_eq!(plan(r#"{"geometry": {"kc_l": []}}"#).unwrap_err().path, "geometry.kc_l");
    }

    #[test]
    fn parse_errors_carry_path_and_position() {
        let e = plan(r#"{"frequency": {"count": "ten"}}"#).unwrap_err();
        assert_eq!(e.path, "frequency.count");
        assert!(e.message.contains("line 1"), "{}", e.message);
        let e = plan("{\n  \"frequncy\": {}\n}").unwrap_err();
        assert!(e.message.contains("unknown field"), "{}", e.message);
        assert!(e.message.contains("line 2"), "{}", e.message);
    }

    #[test]
    fn si_geometry_converts_once() {
        let p = plan(r#"{"unit_system": "si", "geometry": {"a": 0.02286, "b": 0.01016, "length": [0.01, 0.05]}}"#).unwrap();
        assert!((p.guides[0].kc_length() - PI * 0.01 / 0.02286).abs() < 1e-15);
        assert!((p.aspect - 0.01016 / 0.02286).abs() < 1e-15);
        assert_eq!(plan(r#"{"unit_system": "si", "geometry": {"a": 1, "b": 2, "length": [1]}}"#).unwrap_err().path, "geometry.b");
        assert_eq!(plan(r#"{"geometry": {"a": 1}}"#).unwrap_err().path, "geometry.a");
    }

    #[test]
    fn bad_scalars_rejected() {
        assert_eq!(plan(r#"{"density": "partial"}"#).unwrap_err().path, "density");
        assert_eq!(plan(r#"{"h0": 0}"#).unwrap_err().path, "h0");
        assert_eq!(plan(r#"{"propagator": {"tol": -1}}"#).unwrap_err().path, "propagator.tol");
        assert_eq!(
            plan(r#"{"propagator": {"timelike_window": {"start": 50, "end": 500, "samples": 3}}}"#).unwrap_err().path,
            "propagator.timelike_window.samples"
        );
        assert_eq!(plan(r#"{"propagator": {"closed_form_points": [0]}}"#).unwrap_err().path, "propagator.closed_form_points[0]");
    }
}
