//! Scenario dispatch and CSV output for the command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{ConfigError, RunConfig, Scenario};
use crate::engine::{CasimirEngine, ConvergenceAxis, EngineError, ForceResult};
use crate::lifshitz::{lifshitz, sphere_gradient, LifshitzError, LifshitzQuadrature, Plate};
use crate::scene::{GratingSpec, NumericsSpec, ProfileKind, SceneSpec};

const NM: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error("point {point}: {source}")]
    Engine { point: String, source: EngineError },
    #[error("point {point}: {source}")]
    Lifshitz { point: String, source: LifshitzError },
}

impl RunError {
    /// 2 for configuration and I/O problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Output { .. } => 2,
            RunError::Engine {
                source: EngineError::Scene(_),
                ..
            } => 2,
            RunError::Engine { .. } | RunError::Lifshitz { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the config's `output`.
    pub output: Option<PathBuf>,
    pub quiet: bool,
}

/// A CSV table kept in memory until the whole scenario has succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn write_to<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn num(x: f64) -> String {
    format!("{x:.10e}")
}

fn status(delta: f64, tolerance: f64) -> String {
    if delta <= tolerance { "ok" } else { "unconverged" }.to_string()
}

/// Runs the configured scenario and writes its CSV.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<Table, RunError> {
    let table = compute(cfg, opts.quiet)?;
    let path = opts
        .output
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.scenario.name())));
    write_csv(&table, &path)?;
    if !opts.quiet {
        eprintln!("wrote {} rows to {}", table.rows.len(), path.display());
    }
    Ok(table)
}

pub fn write_csv(table: &Table, path: &Path) -> Result<(), RunError> {
    let io = |source| RunError::Output {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io)?;
    table.write_to(std::io::BufWriter::new(file)).map_err(|e| io(e.into()))
}

/// Evaluates every sweep point without touching the file system.
pub fn compute(cfg: &RunConfig, quiet: bool) -> Result<Table, RunError> {
    let values = cfg.sweep_values()?;
    let mut points = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let (scene, numerics) = cfg.point(i, v)?;
        numerics.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        points.push((scene, numerics));
    }
    match cfg.scenario {
        Scenario::Lifshitz => lifshitz_table(cfg, &points, quiet),
        Scenario::GratingForce | Scenario::RhoScan => grating_table(cfg, &points, quiet),
        Scenario::Chan => chan_table(cfg, &points, quiet),
        Scenario::Convergence => convergence_table(cfg, &points, quiet),
    }
}

fn label(scene: &SceneSpec) -> String {
    format!(
        "d = {:.1} nm, L = {:.1} nm",
        scene.lower.period / NM,
        scene.distance / NM
    )
}

/// A flat profile as a plate, and how far its surface sits above the substrate.
fn as_plate(g: &GratingSpec) -> Option<(Plate, f64)> {
    match g.kind() {
        ProfileKind::Bare => Some((Plate::HalfSpace(g.substrate.clone()), 0.0)),
        ProfileKind::Slab if g.bar == g.substrate => Some((Plate::HalfSpace(g.substrate.clone()), g.depth)),
        ProfileKind::Slab => Some((
            Plate::SlabOnSubstrate {
                slab: g.bar.clone(),
                thickness: g.depth,
                substrate: g.substrate.clone(),
            },
            g.depth,
        )),
        ProfileKind::Lamellar => None,
    }
}

fn lifshitz_table(cfg: &RunConfig, points: &[(SceneSpec, NumericsSpec)], quiet: bool) -> Result<Table, RunError> {
    let mut t = Table::new(&["L_nm", "E_J_m2", "P_Nm2", "conv_delta", "status"]);
    let quad = LifshitzQuadrature {
        nodes: cfg.numerics.lifshitz_nodes,
        scale: None,
        tolerance: f64::INFINITY,
    };
    for (scene, _) in points {
        let (Some((p1, h1)), Some((p2, h2))) = (as_plate(&scene.lower), as_plate(&scene.upper)) else {
            return Err(ConfigError::Invalid("the lifshitz scenario needs flat surfaces".into()).into());
        };
        let gap = scene.distance - h1 - h2;
        let r = lifshitz(gap, &p1, &p2, &quad).map_err(|source| RunError::Lifshitz {
            point: label(scene),
            source,
        })?;
        let st = status(r.conv_delta, cfg.numerics.tolerance);
        if !quiet {
            println!(
                "L = {:.1} nm  E/A = {:.6e} J/m²  P = {:.6e} N/m²  delta = {:.1e}  {st}",
                scene.distance / NM,
                r.energy_per_area,
                r.pressure,
                r.conv_delta
            );
        }
        t.rows.push(vec![
            num(scene.distance / NM),
            num(r.energy_per_area),
            num(r.pressure),
            num(r.conv_delta),
            st,
        ]);
    }
    Ok(t)
}

struct GratingPoint {
    force: ForceResult,
    conv_delta: f64,
}

/// Pressure at N plus the relative change from the reference truncation.
fn grating_point(cfg: &RunConfig, scene: &SceneSpec, numerics: &NumericsSpec) -> Result<GratingPoint, RunError> {
    let wrap = |source| RunError::Engine {
        point: label(scene),
        source,
    };
    let engine = CasimirEngine::new(scene, numerics).map_err(wrap)?;
    let force = if cfg.numerics.check_derivative {
        engine.pressure_checked()
    } else {
        engine.pressure()
    }
    .map_err(wrap)?;
    let n_ref = cfg
        .numerics
        .reference_n
        .unwrap_or(numerics.truncation.saturating_sub(2))
        .max(1);
    let conv_delta = if n_ref >= numerics.truncation || force.pressure == 0.0 {
        0.0
    } else {
        let coarse = CasimirEngine::new(scene, &numerics.clone().with_truncation(n_ref))
            .and_then(|e| e.energy())
            .map_err(wrap)?;
        ((force.pressure - coarse.pressure) / force.pressure).abs()
    };
    Ok(GratingPoint { force, conv_delta })
}

fn grating_table(cfg: &RunConfig, points: &[(SceneSpec, NumericsSpec)], quiet: bool) -> Result<Table, RunError> {
    let mut t = Table::new(&[
        "d_nm", "L_nm", "a_nm", "d1_nm", "F_exact_Nm2", "F_pfa_Nm2", "rho", "conv_delta", "status",
    ]);
    for (scene, numerics) in points {
        let p = grating_point(cfg, scene, numerics)?;
        let st = status(p.conv_delta, cfg.numerics.tolerance);
        let g = &scene.lower;
        if !quiet {
            println!(
                "d = {:.1} nm  L = {:.1} nm  N = {}  F = {:.6e} N/m²  F_pfa = {:.6e} N/m²  rho = {:.5}  delta = {:.1e}  {st}",
                g.period / NM,
                scene.distance / NM,
                numerics.truncation,
                -p.force.pressure,
                -p.force.pfa_pressure,
                p.force.rho,
                p.conv_delta
            );
        }
        t.rows.push(vec![
            num(g.period / NM),
            num(scene.distance / NM),
            num(g.depth / NM),
            num(g.gap / NM),
            num(-p.force.pressure),
            num(-p.force.pfa_pressure),
            num(p.force.rho),
            num(p.conv_delta),
            st,
        ]);
    }
    Ok(t)
}

fn chan_table(cfg: &RunConfig, points: &[(SceneSpec, NumericsSpec)], quiet: bool) -> Result<Table, RunError> {
    let mut t = Table::new(&["sep_nm", "F_pp_Nm2", "F_grad_pN_per_um", "rho", "conv_delta", "status"]);
    let radius = cfg.sphere_radius();
    for (scene, numerics) in points {
        let p = grating_point(cfg, scene, numerics)?;
        let st = status(p.conv_delta, cfg.numerics.tolerance);
        let f_pp = -p.force.pressure;
        // N/m per m of separation → pN/µm
        let grad = sphere_gradient(f_pp, radius) * 1e6;
        let sep = scene.min_gap() / NM;
        if !quiet {
            println!(
                "sep = {sep:.1} nm  N = {}  F_pp = {f_pp:.6e} N/m²  F' = {grad:.4} pN/µm  rho = {:.5}  delta = {:.1e}  {st}",
                numerics.truncation, p.force.rho, p.conv_delta
            );
        }
        t.rows.push(vec![num(sep), num(f_pp), num(grad), num(p.force.rho), num(p.conv_delta), st]);
    }
    Ok(t)
}

fn convergence_table(cfg: &RunConfig, points: &[(SceneSpec, NumericsSpec)], quiet: bool) -> Result<Table, RunError> {
    let c = cfg
        .convergence
        .as_ref()
        .ok_or_else(|| ConfigError::Invalid("the convergence scenario needs a [convergence] block".into()))?;
    let axes = c
        .axes
        .iter()
        .map(|a| a.parse::<ConvergenceAxis>().map_err(ConfigError::Invalid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["axis", "setting", "E_J_m2", "P_Nm2", "rel_delta", "status"]);
    for (scene, numerics) in points {
        for &axis in &axes {
            let rows = CasimirEngine::new(scene, numerics)
                .and_then(|e| e.convergence_scan(axis, c.steps))
                .map_err(|source| RunError::Engine {
                    point: label(scene),
                    source,
                })?;
            for r in rows {
                // the first row has no predecessor to compare with
                let st = if r.rel_delta.is_nan() {
                    "reference".to_string()
                } else {
                    status(r.rel_delta, cfg.numerics.tolerance)
                };
                if !quiet {
                    println!(
                        "{} = {}  E/A = {:.8e} J/m²  rel_delta = {:.2e}  {st}",
                        axis.name(),
                        r.setting,
                        r.energy_per_area,
                        r.rel_delta
                    );
                }
                t.rows.push(vec![
                    axis.name().to_string(),
                    r.setting.to_string(),
                    num(r.energy_per_area),
                    num(r.pressure),
                    num(r.rel_delta),
                    st,
                ]);
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;

    #[test]
    fn vacuum_lifshitz_is_zero() {
        let cfg = parse(
            r#"
            scenario = "lifshitz"
            [scene]
            L_nm = 100
            [scene.lower]
            period_nm = 100
            material = "vacuum"
            [scene.upper]
            same_as = "lower"
            [sweep]
            axis = "L_nm"
            values = [100, 200]
        "#,
            &[],
        )
        .unwrap();
        let t = compute(&cfg, true).unwrap();
        assert_eq!(t.header, ["L_nm", "E_J_m2", "P_Nm2", "conv_delta", "status"]);
        assert_eq!(t.rows.len(), 2);
        for r in &t.rows {
            assert_eq!(r[2], num(0.0));
            assert_eq!(r[4], "ok");
        }
    }

    #[test]
    fn lamellar_lifshitz_is_a_config_error() {
        let cfg = parse(
            r#"
            scenario = "lifshitz"
            [scene]
            L_nm = 250
            [scene.lower]
            period_nm = 100
            gap_fraction = 0.5
            depth_nm = 50
            material = "si"
            [scene.upper]
            same_as = "lower"
        "#,
            &[],
        )
        .unwrap();
        assert_eq!(compute(&cfg, true).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn slab_plate_offsets_the_gap() {
        let g = GratingSpec::lamellar(1e-7, 0.0, 2e-8, crate::materials::MaterialModel::silicon(), crate::materials::MaterialModel::gold());
        let (p, h) = as_plate(&g).unwrap();
        assert!(matches!(p, Plate::SlabOnSubstrate { .. }));
        assert_eq!(h, 2e-8);
    }

    #[test]
    fn number_format_is_fixed() {
        assert_eq!(num(-1.5e-3), "-1.5000000000e-3");
        assert_eq!(status(2e-3, 1e-3), "unconverged");
        assert_eq!(status(f64::NAN, 1e-3), "unconverged");
    }
}
