//! TOML run configuration.
//!
//! Lengths are given in nm and frequencies in eV; everything is converted to
//! SI at this boundary.
//!
//! ```toml
//! scenario = "rho-scan"
//! output = "rho_scan.csv"
//!
//! [scene]
//! L_nm = 250
//!
//! [scene.lower]
//! period_nm = 100
//! gap_fraction = 0.5
//! depth_nm = 100
//! material = "silicon"
//!
//! [scene.upper]
//! same_as = "lower"
//!
//! [sweep]
//! axis = "period_nm"
//! values = [50, 100, 200]
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::constants::EV_TO_RAD_PER_S;
use crate::grating::LayerSolver;
use crate::materials::{MaterialModel, Oscillator, PermittivityTable};
use crate::scene::{AxisNodes, GratingSpec, NumericsSpec, SceneSpec};

const NM: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("bad override '{0}': expected key=value")]
    Override(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Lifshitz,
    GratingForce,
    RhoScan,
    Chan,
    Convergence,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Lifshitz => "lifshitz",
            Scenario::GratingForce => "grating-force",
            Scenario::RhoScan => "rho-scan",
            Scenario::Chan => "chan",
            Scenario::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub materials: BTreeMap<String, MaterialConfig>,
    pub scene: SceneConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    pub sweep: Option<SweepConfig>,
    pub chan: Option<ChanConfig>,
    pub convergence: Option<ConvergenceConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub preset: Option<String>,
    pub model: Option<String>,
    pub omega_p_ev: Option<f64>,
    pub eps_static: Option<f64>,
    pub eps_inf: Option<f64>,
    pub omega0_ev: Option<f64>,
    #[serde(default)]
    pub oscillators: Vec<OscillatorConfig>,
    pub path: Option<PathBuf>,
    pub static_limit: Option<f64>,
    #[serde(default)]
    pub vacuum_tail: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    pub strength: f64,
    pub omega0_ev: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    #[serde(rename = "L_nm")]
    pub distance_nm: Option<f64>,
    /// Width of the vacuum slit, `L - a_low - a_up`.
    pub sep_nm: Option<f64>,
    pub lower: SurfaceConfig,
    pub upper: SurfaceConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    /// Copies the other surface ("lower" or "upper"); other keys override.
    pub same_as: Option<String>,
    pub period_nm: Option<f64>,
    pub gap_nm: Option<f64>,
    pub gap_fraction: Option<f64>,
    pub depth_nm: Option<f64>,
    /// Shorthand for identical bar and substrate materials.
    pub material: Option<String>,
    pub bar: Option<String>,
    pub substrate: Option<String>,
    pub shift_nm: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(rename = "N")]
    pub truncation: usize,
    pub xi_nodes: usize,
    pub kz_nodes: usize,
    pub kx_nodes: usize,
    pub xi_scale_per_nm: Option<f64>,
    pub kz_scale_per_nm: Option<f64>,
    pub fd_step: f64,
    pub tolerance: f64,
    pub check_spectral_radius: bool,
    /// Verify every pressure against a finite difference of the energy.
    pub check_derivative: bool,
    /// Truncation used for the per-row convergence delta; default N - 2.
    pub reference_n: Option<usize>,
    pub lifshitz_nodes: usize,
    /// "auto", "modal" or "sliced".
    pub solver: String,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        let n = NumericsSpec::default();
        Self {
            truncation: n.truncation,
            xi_nodes: n.xi.nodes,
            kz_nodes: n.kz.nodes,
            kx_nodes: n.kx_nodes,
            xi_scale_per_nm: None,
            kz_scale_per_nm: None,
            fd_step: n.fd_step,
            tolerance: n.tolerance,
            check_spectral_radius: n.check_spectral_radius,
            check_derivative: false,
            reference_n: None,
            lifshitz_nodes: 48,
            solver: "auto".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "period_nm")]
    Period,
    #[serde(rename = "L_nm")]
    Distance,
    #[serde(rename = "sep_nm")]
    Separation,
    #[serde(rename = "depth_nm")]
    Depth,
    N,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Option<Vec<f64>>,
    pub range: Option<RangeConfig>,
    /// Per-point truncation, parallel to the sweep values.
    #[serde(rename = "N")]
    pub truncation: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub start: f64,
    pub stop: f64,
    pub step: Option<f64>,
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChanConfig {
    pub sphere_radius_um: f64,
}

impl Default for ChanConfig {
    fn default() -> Self {
        Self { sphere_radius_um: 50.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub axes: Vec<String>,
    pub steps: usize,
}

/// Reads a config file and applies `key=value` overrides (dotted keys, TOML values).
pub fn load(path: &Path, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut cfg = parse(&text, overrides)?;
    if let Some(dir) = path.parent() {
        for m in cfg.materials.values_mut() {
            if let Some(p) = &m.path {
                if p.is_relative() {
                    m.path = Some(dir.join(p));
                }
            }
        }
    }
    Ok(cfg)
}

pub fn parse(text: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    table
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), ConfigError> {
    let (key, raw) = spec.split_once('=').ok_or_else(|| ConfigError::Override(spec.into()))?;
    let (key, raw) = (key.trim(), raw.trim());
    if key.is_empty() {
        return Err(ConfigError::Override(spec.into()));
    }
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut node = table;
    for part in &parts[..parts.len() - 1] {
        let entry = node
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Invalid(format!("override '{key}': '{part}' is not a table")))?;
    }
    node.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

impl MaterialConfig {
    fn build(&self, name: &str) -> Result<MaterialModel, ConfigError> {
        let bad = |m: &str| ConfigError::Invalid(format!("material '{name}': {m}"));
        let ev = |v: f64| v * EV_TO_RAD_PER_S;
        if let Some(p) = &self.preset {
            return MaterialModel::preset(p).ok_or_else(|| bad(&format!("unknown preset '{p}'")));
        }
        let model = self.model.as_deref().ok_or_else(|| bad("needs 'preset' or 'model'"))?;
        let m = match model {
            "vacuum" => MaterialModel::Vacuum,
            "plasma" => MaterialModel::Plasma {
                omega_p: ev(self.omega_p_ev.ok_or_else(|| bad("plasma needs omega_p_ev"))?),
            },
            "single-oscillator" => MaterialModel::single_oscillator(
                self.eps_static.ok_or_else(|| bad("needs eps_static"))?,
                self.eps_inf.ok_or_else(|| bad("needs eps_inf"))?,
                ev(self.omega0_ev.ok_or_else(|| bad("needs omega0_ev"))?),
            ),
            "drude-lorentz" => MaterialModel::DrudeLorentz {
                eps_inf: self.eps_inf.unwrap_or(1.0),
                oscillators: self
                    .oscillators
                    .iter()
                    .map(|o| Oscillator {
                        strength: o.strength,
                        omega0: ev(o.omega0_ev),
                    })
                    .collect(),
            },
            "table" => {
                let path = self.path.as_ref().ok_or_else(|| bad("table needs 'path'"))?;
                let t = PermittivityTable::from_path(path)
                    .and_then(|t| t.with_asymptotes(self.static_limit, self.vacuum_tail))
                    .map_err(|e| bad(&e.to_string()))?;
                MaterialModel::Table(Arc::new(t))
            }
            other => return Err(bad(&format!("unknown model '{other}'"))),
        };
        m.validate().map_err(|e| bad(&e.to_string()))?;
        Ok(m)
    }
}

impl RunConfig {
    pub fn material(&self, name: &str) -> Result<MaterialModel, ConfigError> {
        match self.materials.get(name) {
            Some(m) => m.build(name),
            None => MaterialModel::preset(name)
                .ok_or_else(|| ConfigError::Invalid(format!("unknown material '{name}'"))),
        }
    }

    fn surface(&self, which: &str) -> Result<SurfaceConfig, ConfigError> {
        let (own, other, other_name) = match which {
            "lower" => (&self.scene.lower, &self.scene.upper, "upper"),
            _ => (&self.scene.upper, &self.scene.lower, "lower"),
        };
        match own.same_as.as_deref() {
            None => Ok(own.clone()),
            Some(n) if n == other_name => {
                if other.same_as.is_some() {
                    return Err(ConfigError::Invalid("both surfaces use same_as".into()));
                }
                Ok(SurfaceConfig {
                    same_as: None,
                    period_nm: own.period_nm.or(other.period_nm),
                    gap_nm: own.gap_nm.or(if own.gap_fraction.is_some() { None } else { other.gap_nm }),
                    gap_fraction: own.gap_fraction.or(if own.gap_nm.is_some() { None } else { other.gap_fraction }),
                    depth_nm: own.depth_nm.or(other.depth_nm),
                    material: own.material.clone().or(other.material.clone()),
                    bar: own.bar.clone().or(other.bar.clone()),
                    substrate: own.substrate.clone().or(other.substrate.clone()),
                    shift_nm: own.shift_nm.or(other.shift_nm),
                })
            }
            Some(n) => Err(ConfigError::Invalid(format!("scene.{which}.same_as = '{n}' must name the other surface"))),
        }
    }

    fn grating(&self, which: &str, s: &SurfaceConfig, fallback_period: Option<f64>) -> Result<GratingSpec, ConfigError> {
        let bad = |m: String| ConfigError::Invalid(format!("scene.{which}: {m}"));
        let depth = s.depth_nm.unwrap_or(0.0) * NM;
        let substrate_name = s.substrate.as_ref().or(s.material.as_ref()).ok_or_else(|| bad("needs 'material' or 'substrate'".into()))?;
        let substrate = self.material(substrate_name)?;
        let bar = match s.bar.as_ref().or(s.material.as_ref()) {
            Some(n) => self.material(n)?,
            None => substrate.clone(),
        };
        let period = s
            .period_nm
            .map(|p| p * NM)
            .or(fallback_period)
            .ok_or_else(|| bad("needs 'period_nm'".into()))?;
        let gap = match (s.gap_nm, s.gap_fraction) {
            (Some(_), Some(_)) => return Err(bad("give either gap_nm or gap_fraction".into())),
            (Some(g), None) => g * NM,
            (None, Some(f)) => f * period,
            (None, None) if depth == 0.0 => period,
            (None, None) => return Err(bad("needs gap_nm or gap_fraction".into())),
        };
        Ok(GratingSpec::lamellar(period, gap, depth, bar, substrate).with_shift(s.shift_nm.unwrap_or(0.0) * NM))
    }

    /// The configured scene before any sweep is applied.
    pub fn base_scene(&self) -> Result<SceneSpec, ConfigError> {
        let (lo, up) = (self.surface("lower")?, self.surface("upper")?);
        let period = lo.period_nm.or(up.period_nm).map(|p| p * NM);
        let lower = self.grating("lower", &lo, period)?;
        let upper = self.grating("upper", &up, period)?;
        let distance = match (self.scene.distance_nm, self.scene.sep_nm) {
            (Some(l), None) => l * NM,
            (None, Some(s)) => s * NM + lower.depth + upper.depth,
            (Some(_), Some(_)) => return Err(ConfigError::Invalid("scene: give either L_nm or sep_nm".into())),
            (None, None) => return Err(ConfigError::Invalid("scene: needs L_nm or sep_nm".into())),
        };
        Ok(SceneSpec::new(lower, upper, distance))
    }

    pub fn numerics_spec(&self) -> Result<NumericsSpec, ConfigError> {
        let n = &self.numerics;
        let solver = match n.solver.as_str() {
            "auto" => LayerSolver::Auto,
            "modal" => LayerSolver::Modal,
            "sliced" => LayerSolver::Sliced,
            other => return Err(ConfigError::Invalid(format!("numerics.solver: unknown solver '{other}'"))),
        };
        Ok(NumericsSpec {
            truncation: n.truncation,
            xi: AxisNodes {
                nodes: n.xi_nodes,
                scale: n.xi_scale_per_nm.map(|s| s / NM),
            },
            kz: AxisNodes {
                nodes: n.kz_nodes,
                scale: n.kz_scale_per_nm.map(|s| s / NM),
            },
            kx_nodes: n.kx_nodes,
            fd_step: n.fd_step,
            tolerance: n.tolerance,
            check_spectral_radius: n.check_spectral_radius,
            solver,
        })
    }

    /// Sweep values in config units; a single point when no sweep is given.
    pub fn sweep_values(&self) -> Result<Vec<f64>, ConfigError> {
        let Some(s) = &self.sweep else {
            return Ok(vec![f64::NAN]);
        };
        let values = match (&s.values, &s.range) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => r.expand()?,
            _ => return Err(ConfigError::Invalid("sweep: give exactly one of 'values' or 'range'".into())),
        };
        if values.is_empty() {
            return Err(ConfigError::Invalid("sweep has no points".into()));
        }
        if let Some(t) = &s.truncation {
            if t.len() != values.len() {
                return Err(ConfigError::Invalid(format!(
                    "sweep.N has {} entries for {} sweep values",
                    t.len(),
                    values.len()
                )));
            }
        }
        Ok(values)
    }

    /// Scene and numerics for sweep point `i` with value `v`.
    pub fn point(&self, i: usize, v: f64) -> Result<(SceneSpec, NumericsSpec), ConfigError> {
        let mut scene = self.base_scene()?;
        let mut numerics = self.numerics_spec()?;
        if let Some(s) = &self.sweep {
            if let Some(t) = &s.truncation {
                numerics.truncation = t[i];
            }
            match s.axis {
                SweepAxis::Distance => scene.distance = v * NM,
                SweepAxis::Separation => scene.distance = v * NM + scene.lower.depth + scene.upper.depth,
                SweepAxis::N => {
                    if v < 1.0 || v.fract() != 0.0 {
                        return Err(ConfigError::Invalid(format!("sweep value {v} is not a valid truncation")));
                    }
                    numerics.truncation = v as usize;
                }
                SweepAxis::Period => {
                    let (lo, up) = (self.surface("lower")?, self.surface("upper")?);
                    for (g, c) in [(&mut scene.lower, lo), (&mut scene.upper, up)] {
                        let old = g.period;
                        g.period = v * NM;
                        g.gap = match (c.gap_fraction, c.gap_nm, c.depth_nm.unwrap_or(0.0)) {
                            (Some(f), _, _) => f * g.period,
                            (None, None, 0.0) => g.period,
                            _ => g.gap,
                        };
                        g.lateral_shift *= g.period / old;
                    }
                }
                SweepAxis::Depth => {
                    let sep = scene.min_gap();
                    for g in [&mut scene.lower, &mut scene.upper] {
                        if g.depth > 0.0 {
                            g.depth = v * NM;
                        }
                    }
                    if self.scene.sep_nm.is_some() {
                        scene.distance = sep + scene.lower.depth + scene.upper.depth;
                    }
                }
            }
        }
        Ok((scene, numerics))
    }

    pub fn sphere_radius(&self) -> f64 {
        self.chan.unwrap_or_default().sphere_radius_um * 1e-6
    }
}

impl RangeConfig {
    fn expand(&self) -> Result<Vec<f64>, ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(format!("sweep.range: {m}")));
        match (self.step, self.count) {
            (Some(step), None) => {
                if !(step > 0.0) || self.stop < self.start {
                    return bad("needs step > 0 and stop ≥ start");
                }
                let n = ((self.stop - self.start) / step + 1e-9).floor() as usize;
                Ok((0..=n).map(|i| self.start + i as f64 * step).collect())
            }
            (None, Some(count)) => match count {
                0 => bad("count must be positive"),
                1 => Ok(vec![self.start]),
                _ => Ok((0..count)
                    .map(|i| self.start + (self.stop - self.start) * i as f64 / (count - 1) as f64)
                    .collect()),
            },
            _ => bad("give exactly one of 'step' or 'count'"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        scenario = "rho-scan"
        [scene]
        L_nm = 250
        [scene.lower]
        period_nm = 100
        gap_fraction = 0.5
        depth_nm = 100
        material = "silicon"
        [scene.upper]
        same_as = "lower"
        [sweep]
        axis = "period_nm"
        values = [50, 100, 200]
    "#;

    #[test]
    fn parses_fig2_style_config() {
        let c = parse(BASE, &[]).unwrap();
        assert_eq!(c.scenario, Scenario::RhoScan);
        let s = c.base_scene().unwrap();
        assert_eq!(s.lower, s.upper);
        assert!((s.min_gap() - 50e-9).abs() < 1e-18);
        let (p, _) = c.point(2, 200.0).unwrap();
        assert!((p.lower.period - 200e-9).abs() < 1e-18);
        assert!((p.lower.gap - 100e-9).abs() < 1e-18);
        assert_eq!(c.sweep_values().unwrap(), vec![50.0, 100.0, 200.0]);
    }

    #[test]
    fn overrides_use_dotted_keys() {
        let c = parse(BASE, &["numerics.N=11".into(), "scene.L_nm = 300".into(), "sweep.values=[75]".into()]).unwrap();
        assert_eq!(c.numerics.truncation, 11);
        assert!((c.base_scene().unwrap().distance - 300e-9).abs() < 1e-18);
        assert_eq!(c.sweep_values().unwrap(), vec![75.0]);
        assert!(matches!(parse(BASE, &["novalue".into()]), Err(ConfigError::Override(_))));
    }

    #[test]
    fn chan_separation_and_custom_materials() {
        let text = r#"
            scenario = "chan"
            [materials.au]
            model = "plasma"
            omega_p_ev = 9.0
            [scene]
            sep_nm = 150
            [scene.lower]
            period_nm = 400
            gap_nm = 196
            depth_nm = 980
            material = "si"
            [scene.upper]
            material = "au"
            [sweep]
            axis = "sep_nm"
            range = { start = 150, stop = 250, step = 50 }
        "#;
        let c = parse(text, &[]).unwrap();
        assert_eq!(c.sweep_values().unwrap(), vec![150.0, 200.0, 250.0]);
        let (s, _) = c.point(1, 200.0).unwrap();
        assert!((s.distance - 1180e-9).abs() < 1e-15);
        assert!(s.upper.is_flat());
        assert_eq!(s.upper.substrate, MaterialModel::gold());
        assert!((c.sphere_radius() - 50e-6).abs() < 1e-18);
    }

    #[test]
    fn rejects_unknown_material_and_keys() {
        let t = BASE.replace("material = \"silicon\"", "material = \"unobtainium\"");
        assert!(matches!(parse(&t, &[]).unwrap().base_scene(), Err(ConfigError::Invalid(_))));
        assert!(matches!(parse(&format!("{BASE}\nbogus = 1"), &[]), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn range_with_count() {
        let r = RangeConfig {
            start: 1.0,
            stop: 2.0,
            step: None,
            count: Some(3),
        };
        assert_eq!(r.expand().unwrap(), vec![1.0, 1.5, 2.0]);
    }
}
