//! Casimir energy and pressure between two gratings from the round-trip log-determinant.
//!
//! ```text
//! E/A = ħc/(2π)³ ∫₀^∞ dξ ∫ dk_z ∫_BZ dk_x  ln det(I - R₁ K S Φ R₂ Φ⁻¹ S K)
//! ```
//!
//! `R₁`, `R₂` are referenced to the bar tops, so `K` spans the vacuum slit
//! `w = L - a₁ - a₂`. `S` flips `H_z` for the mirrored upper grating and `Φ`
//! carries the relative lateral shift. The k_z integral is folded onto
//! (0, ∞); k_x runs over the centred zone (-π/d, π/d] and is folded for
//! mirror-symmetric scenes.

use std::f64::consts::PI;

use faer::linalg::solvers::DenseSolveCore;
use faer::{c64, Mat};
use rayon::prelude::*;
use thiserror::Error;

use crate::constants::HBAR_C;
use crate::grating::{propagation_k, reflection_matrix_with, upper_reflection, GratingError, SpectralPoint};
use crate::lifshitz::{pfa_force_gratings, LifshitzError, LifshitzQuadrature};
use crate::linalg::{log_det, CMat};
use crate::quadrature::GaussLegendre;
use crate::scene::{validate_scene, GratingSpec, NumericsSpec, SceneError, SceneSpec, ValidatedScene};

/// Nodes whose slowest round-trip factor `e^{-2γ₀w}` falls below this are skipped.
const NEGLIGIBLE_ROUND_TRIP: f64 = 1e-20;
/// Analytic and finite-difference pressures must agree to this relative level.
const DERIVATIVE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Lifshitz(#[from] LifshitzError),
    #[error("grating solver failed at ξ = {xi:e}, k_x = {kx:e}, k_z = {kz:e} rad/m: {source}")]
    Grating {
        source: GratingError,
        xi: f64,
        kx: f64,
        kz: f64,
    },
    #[error("det(I - R₁R₂up) not positive (phase {phase:e}) at ξ = {xi:e}, k_x = {kx:e}, k_z = {kz:e} rad/m")]
    NonPositiveDeterminant { xi: f64, kx: f64, kz: f64, phase: f64 },
    #[error("round-trip spectral radius {radius} ≥ 1 at ξ = {xi:e}, k_x = {kx:e}, k_z = {kz:e} rad/m")]
    SpectralRadius { xi: f64, kx: f64, kz: f64, radius: f64 },
    #[error("analytic pressure {analytic:e} and finite difference {finite_difference:e} disagree (relative {relative:e})")]
    DerivativeMismatch {
        analytic: f64,
        finite_difference: f64,
        relative: f64,
    },
}

/// Log-determinant at one node and its derivative with respect to the slit width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandValue {
    /// `ln |det(I - A)|`, never positive for passive media.
    pub value: f64,
    /// Phase of the determinant.
    pub phase: f64,
    /// `∂/∂w ln det(I - A)`.
    pub derivative: f64,
}

impl IntegrandValue {
    const ZERO: IntegrandValue = IntegrandValue {
        value: 0.0,
        phase: 0.0,
        derivative: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub xi: f64,
    pub kx: f64,
    pub kz: f64,
    pub weight: f64,
}

/// Product Gauss–Legendre grid over (ξ, k_z, k_x); weights include the symmetry folds.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    pub nodes: Vec<QuadratureNode>,
    pub kx_folded: bool,
}

impl QuadratureGrid {
    /// `gap` sets the default scale of the semi-infinite maps.
    pub fn new(numerics: &NumericsSpec, period: f64, gap: f64, fold_kx: bool) -> Self {
        let xi = GaussLegendre::new(numerics.xi.nodes).semi_infinite(numerics.xi.scale.unwrap_or(1.0 / gap));
        let kz = GaussLegendre::new(numerics.kz.nodes).semi_infinite(numerics.kz.scale.unwrap_or(1.0 / gap));
        // k_x = 0 is a kink of the central order at small ξ and k_z, so it is
        // kept at a panel end.
        let zone = PI / period;
        let half = GaussLegendre::new((numerics.kx_nodes / 2).max(1));
        let mut kx = half.interval(0.0, zone);
        if !fold_kx {
            kx.extend(half.interval(-zone, 0.0));
        }
        let kx_factor = if fold_kx { 2.0 } else { 1.0 };
        let mut nodes = Vec::with_capacity(xi.len() * kz.len() * kx.len());
        for &(x, wx) in &xi {
            for &(z, wz) in &kz {
                for &(k, wk) in &kx {
                    nodes.push(QuadratureNode {
                        xi: x,
                        kx: k,
                        kz: z,
                        weight: wx * wz * wk * 2.0 * kx_factor,
                    });
                }
            }
        }
        Self { nodes, kx_folded: fold_kx }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Counters collected while integrating.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub truncation: usize,
    pub nodes: usize,
    pub skipped_nodes: usize,
    /// Largest `|arg det| / |ln|det||` over the evaluated nodes.
    pub max_phase_ratio: f64,
    /// Nodes where the phase ratio exceeds 10⁻⁸.
    pub flagged_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResult {
    pub energy_per_area: f64,
    /// `-∂(E/A)/∂L` from the differentiated integrand.
    pub pressure: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceResult {
    /// J/m².
    pub energy_per_area: f64,
    /// N/m², negative for attraction.
    pub pressure: f64,
    /// Richardson-extrapolated central difference of the energy, when requested.
    pub fd_pressure: Option<f64>,
    pub pfa_pressure: f64,
    pub rho: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceAxis {
    Truncation,
    Xi,
    Kz,
    Kx,
}

impl ConvergenceAxis {
    pub fn name(&self) -> &'static str {
        match self {
            ConvergenceAxis::Truncation => "N",
            ConvergenceAxis::Xi => "xi_nodes",
            ConvergenceAxis::Kz => "kz_nodes",
            ConvergenceAxis::Kx => "kx_nodes",
        }
    }

    fn setting(&self, n: &NumericsSpec) -> usize {
        match self {
            ConvergenceAxis::Truncation => n.truncation,
            ConvergenceAxis::Xi => n.xi.nodes,
            ConvergenceAxis::Kz => n.kz.nodes,
            ConvergenceAxis::Kx => n.kx_nodes,
        }
    }

    /// N grows by 2, node counts double.
    fn refine(&self, n: &NumericsSpec) -> NumericsSpec {
        let mut m = n.clone();
        match self {
            ConvergenceAxis::Truncation => m.truncation += 2,
            ConvergenceAxis::Xi => m.xi.nodes *= 2,
            ConvergenceAxis::Kz => m.kz.nodes *= 2,
            ConvergenceAxis::Kx => m.kx_nodes *= 2,
        }
        m
    }
}

impl std::str::FromStr for ConvergenceAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" | "truncation" => Ok(Self::Truncation),
            "xi" | "xi_nodes" | "quad_xi" => Ok(Self::Xi),
            "kz" | "kz_nodes" | "quad_kz" => Ok(Self::Kz),
            "kx" | "kx_nodes" | "quad_kx" => Ok(Self::Kx),
            other => Err(format!("unknown convergence axis '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub setting: usize,
    pub energy_per_area: f64,
    pub pressure: f64,
    /// Relative energy change from the previous row; NaN on the first.
    pub rel_delta: f64,
}

/// A validated scene together with its numerics, ready to integrate.
#[derive(Debug, Clone)]
pub struct CasimirEngine {
    scene: ValidatedScene,
    numerics: NumericsSpec,
    lower: GratingSpec,
    upper: GratingSpec,
    identical: bool,
}

impl CasimirEngine {
    pub fn new(scene: &SceneSpec, numerics: &NumericsSpec) -> Result<Self, EngineError> {
        let validated = validate_scene(scene, numerics)?;
        let centred = |g: &GratingSpec| GratingSpec {
            period: validated.period(),
            lateral_shift: 0.0,
            ..g.clone()
        };
        let lower = centred(&scene.lower);
        let upper = centred(&scene.upper);
        Ok(Self {
            identical: lower == upper,
            scene: validated,
            numerics: numerics.clone(),
            lower,
            upper,
        })
    }

    pub fn scene(&self) -> &ValidatedScene {
        &self.scene
    }

    pub fn numerics(&self) -> &NumericsSpec {
        &self.numerics
    }

    pub fn period(&self) -> f64 {
        self.scene.period()
    }

    /// Mirror symmetry x → -x of the pair, which makes the integrand even in k_x.
    pub fn kx_symmetric(&self) -> bool {
        let d = self.period();
        let s = self.scene.relative_shift();
        s.min(d - s) < 1e-12 * d || (s - 0.5 * d).abs() < 1e-12 * d
    }

    pub fn grid(&self) -> QuadratureGrid {
        QuadratureGrid::new(&self.numerics, self.period(), self.scene.min_gap(), self.kx_symmetric())
    }

    /// Integrand at one node for the scene's own slit width.
    pub fn integrand(&self, xi: f64, kx: f64, kz: f64) -> Result<IntegrandValue, EngineError> {
        self.integrand_at_gap(xi, kx, kz, self.scene.min_gap())
    }

    fn integrand_at_gap(&self, xi: f64, kx: f64, kz: f64, gap: f64) -> Result<IntegrandValue, EngineError> {
        let point = SpectralPoint::new(xi, kx, kz, self.period(), self.numerics.truncation).centred();
        let k = propagation_k(&point, gap);
        let gamma0 = (xi * xi + kz * kz + point.kx * point.kx).sqrt();
        if (-2.0 * gamma0 * gap).exp() < NEGLIGIBLE_ROUND_TRIP {
            return Ok(IntegrandValue::ZERO);
        }
        let wrap = |source| EngineError::Grating { source, xi, kx, kz };
        let r1 = reflection_matrix_with(&self.lower, point, self.numerics.solver).map_err(wrap)?.matrix;
        let r2 = if self.identical {
            r1.clone()
        } else {
            reflection_matrix_with(&self.upper, point, self.numerics.solver).map_err(wrap)?.matrix
        };
        let r_up = upper_reflection(&r2, &k, self.scene.relative_shift(), &point).map_err(wrap)?;
        let a = &r1 * &r_up;
        let n = a.nrows();
        if self.numerics.check_spectral_radius {
            let radius = a
                .eigenvalues()
                .map_err(|e| wrap(GratingError::Eigen(format!("{e:?}"))))?
                .iter()
                .fold(0.0f64, |m, z| m.max(z.norm()));
            if radius >= 1.0 {
                return Err(EngineError::SpectralRadius { xi, kx, kz, radius });
            }
        }
        let m: CMat = Mat::from_fn(n, n, |i, j| if i == j { c64::new(1.0, 0.0) - a[(i, j)] } else { -a[(i, j)] });
        let lu = m.partial_piv_lu();
        let (value, phase) = log_det(&lu);
        if phase.abs() > 0.5 * PI {
            return Err(EngineError::NonPositiveDeterminant { xi, kx, kz, phase });
        }
        // ∂_w ln det(I - A) = tr(X R₁ Γ R_up) + tr(X Γ) - tr(Γ),  X = (I - A)⁻¹
        let x = lu.inverse();
        let y = &x * &r1;
        let mut derivative = 0.0;
        for i in 0..n {
            let g = k.gammas[i];
            let mut diag = c64::new(0.0, 0.0);
            for j in 0..n {
                diag += r_up[(i, j)] * y[(j, i)];
            }
            derivative += g * (diag.re + x[(i, i)].re - 1.0);
        }
        Ok(IntegrandValue {
            value,
            phase,
            derivative,
        })
    }

    fn integrate(&self, grid: &QuadratureGrid, gap: f64) -> Result<EnergyResult, EngineError> {
        let values: Vec<Result<IntegrandValue, EngineError>> = grid
            .nodes
            .par_iter()
            .map(|n| self.integrand_at_gap(n.xi, n.kx, n.kz, gap))
            .collect();
        let mut energy = 0.0;
        let mut dedw = 0.0;
        let mut diag = Diagnostics {
            truncation: self.numerics.truncation,
            nodes: grid.len(),
            ..Diagnostics::default()
        };
        for (node, v) in grid.nodes.iter().zip(values) {
            let v = v?;
            if v == IntegrandValue::ZERO {
                diag.skipped_nodes += 1;
                continue;
            }
            energy += node.weight * v.value;
            dedw += node.weight * v.derivative;
            if v.value != 0.0 {
                let ratio = v.phase.abs() / v.value.abs();
                diag.max_phase_ratio = diag.max_phase_ratio.max(ratio);
                if ratio > 1e-8 {
                    diag.flagged_nodes += 1;
                }
            }
        }
        let pref = HBAR_C / (8.0 * PI * PI * PI);
        Ok(EnergyResult {
            energy_per_area: pref * energy,
            pressure: -pref * dedw,
            diagnostics: diag,
        })
    }

    /// Energy per area and analytic pressure.
    pub fn energy(&self) -> Result<EnergyResult, EngineError> {
        self.integrate(&self.grid(), self.scene.min_gap())
    }

    /// Energy per area at another slit width on the same quadrature grid.
    pub fn energy_at_gap(&self, gap: f64) -> Result<EnergyResult, EngineError> {
        self.integrate(&self.grid(), gap)
    }

    /// Richardson-extrapolated central difference `-∂(E/A)/∂L` with step `fd_step·w`.
    pub fn finite_difference_pressure(&self) -> Result<f64, EngineError> {
        let grid = self.grid();
        let w = self.scene.min_gap();
        let h = self.numerics.fd_step * w;
        let e = |g: f64| self.integrate(&grid, g).map(|r| r.energy_per_area);
        let d1 = (e(w + h)? - e(w - h)?) / (2.0 * h);
        let d2 = (e(w + 2.0 * h)? - e(w - 2.0 * h)?) / (4.0 * h);
        Ok(-(4.0 * d1 - d2) / 3.0)
    }

    fn pfa(&self) -> Result<f64, EngineError> {
        Ok(pfa_force_gratings(&self.scene, &LifshitzQuadrature::default())?.pressure)
    }

    /// Energy, analytic pressure, PFA baseline and ρ.
    pub fn pressure(&self) -> Result<ForceResult, EngineError> {
        let r = self.energy()?;
        let pfa = self.pfa()?;
        Ok(ForceResult {
            energy_per_area: r.energy_per_area,
            pressure: r.pressure,
            fd_pressure: None,
            pfa_pressure: pfa,
            rho: r.pressure / pfa,
            diagnostics: r.diagnostics,
        })
    }

    /// As [`pressure`](Self::pressure), also verifying the derivative by finite differences.
    pub fn pressure_checked(&self) -> Result<ForceResult, EngineError> {
        let mut r = self.pressure()?;
        let fd = self.finite_difference_pressure()?;
        let relative = ((r.pressure - fd) / fd).abs();
        if !(relative <= DERIVATIVE_TOLERANCE) {
            return Err(EngineError::DerivativeMismatch {
                analytic: r.pressure,
                finite_difference: fd,
                relative,
            });
        }
        r.fd_pressure = Some(fd);
        Ok(r)
    }

    /// Refines one numerical axis `steps` times and records the relative energy deltas.
    pub fn convergence_scan(&self, axis: ConvergenceAxis, steps: usize) -> Result<Vec<ConvergenceRow>, EngineError> {
        let mut numerics = self.numerics.clone();
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(steps + 1);
        for _ in 0..=steps {
            let engine = Self::new(self.scene.scene(), &numerics)?;
            let r = engine.energy()?;
            let rel_delta = match rows.last() {
                None => f64::NAN,
                Some(prev) if r.energy_per_area == 0.0 => (prev.energy_per_area - r.energy_per_area).abs(),
                Some(prev) => ((r.energy_per_area - prev.energy_per_area) / r.energy_per_area).abs(),
            };
            rows.push(ConvergenceRow {
                setting: axis.setting(&numerics),
                energy_per_area: r.energy_per_area,
                pressure: r.pressure,
                rel_delta,
            });
            numerics = axis.refine(&numerics);
        }
        Ok(rows)
    }
}

pub fn logdet_integrand(
    scene: &SceneSpec,
    numerics: &NumericsSpec,
    xi: f64,
    kx: f64,
    kz: f64,
) -> Result<IntegrandValue, EngineError> {
    CasimirEngine::new(scene, numerics)?.integrand(xi, kx, kz)
}

pub fn energy_per_area(scene: &SceneSpec, numerics: &NumericsSpec) -> Result<f64, EngineError> {
    Ok(CasimirEngine::new(scene, numerics)?.energy()?.energy_per_area)
}

pub fn pressure(scene: &SceneSpec, numerics: &NumericsSpec) -> Result<ForceResult, EngineError> {
    CasimirEngine::new(scene, numerics)?.pressure()
}

pub fn rho(scene: &SceneSpec, numerics: &NumericsSpec) -> Result<f64, EngineError> {
    Ok(CasimirEngine::new(scene, numerics)?.pressure()?.rho)
}

pub fn convergence_scan(
    scene: &SceneSpec,
    numerics: &NumericsSpec,
    axis: ConvergenceAxis,
    steps: usize,
) -> Result<Vec<ConvergenceRow>, EngineError> {
    CasimirEngine::new(scene, numerics)?.convergence_scan(axis, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifshitz::{fresnel, integrand as lifshitz_integrand, lifshitz_pressure};
    use crate::materials::MaterialModel;

    const NM: f64 = 1e-9;

    fn si() -> MaterialModel {
        MaterialModel::silicon()
    }

    fn small() -> NumericsSpec {
        let mut n = NumericsSpec::default().with_truncation(3);
        n.xi.nodes = 12;
        n.kz.nodes = 8;
        n.kx_nodes = 4;
        n
    }

    fn grating_scene() -> SceneSpec {
        let g = GratingSpec::homogeneous(100.0 * NM, 50.0 * NM, 100.0 * NM, si());
        SceneSpec::new(g.clone(), g, 250.0 * NM)
    }

    #[test]
    fn flat_integrand_is_lifshitz_sum_over_orders() {
        let d = 300.0 * NM;
        let lo = GratingSpec::plane(si(), d);
        let up = GratingSpec::plane(MaterialModel::gold(), d);
        let l = 120.0 * NM;
        let scene = SceneSpec::new(lo, up, l);
        let n = small();
        let engine = CasimirEngine::new(&scene, &n).unwrap();
        let (xi, kx, kz) = (4e6, 2.1e6, 7e6);
        let v = engine.integrand(xi, kx, kz).unwrap();
        let p = SpectralPoint::new(xi, kx, kz, d, n.truncation);
        let (e1, e2) = (
            si().permittivity_at_wavenumber(xi).unwrap(),
            MaterialModel::gold().permittivity_at_wavenumber(xi).unwrap(),
        );
        let mut expect = 0.0;
        for a in p.alphas() {
            let k = (a * a + kz * kz).sqrt();
            let kappa = (xi * xi + k * k).sqrt();
            expect += lifshitz_integrand(fresnel(xi, k, e1).unwrap(), fresnel(xi, k, e2).unwrap(), kappa, l);
        }
        assert!((v.value - expect).abs() < 1e-12 * expect.abs(), "{} vs {expect}", v.value);
        assert!(v.phase.abs() < 1e-12);
    }

    #[test]
    fn vacuum_scene_is_exactly_zero() {
        let g = GratingSpec::homogeneous(100.0 * NM, 50.0 * NM, 40.0 * NM, MaterialModel::Vacuum);
        let scene = SceneSpec::new(g.clone(), g, 250.0 * NM);
        let e = CasimirEngine::new(&scene, &small()).unwrap().energy().unwrap();
        assert_eq!(e.energy_per_area, 0.0);
        assert_eq!(e.pressure, 0.0);
    }

    #[test]
    fn integrand_symmetries() {
        let engine = CasimirEngine::new(&grating_scene(), &small()).unwrap();
        let d = engine.period();
        let (xi, kx, kz) = (9e6, 0.23 * 2.0 * PI / d, 1.3e7);
        let base = engine.integrand(xi, kx, kz).unwrap().value;
        assert!(base < 0.0);
        let kz_flip = engine.integrand(xi, kx, -kz).unwrap().value;
        let zone = engine.integrand(xi, 2.0 * PI / d - kx, kz).unwrap().value;
        assert!((base - kz_flip).abs() <= 1e-10 * base.abs());
        assert!((base - zone).abs() <= 1e-10 * base.abs());
    }

    #[test]
    fn exchange_symmetry() {
        let lo = GratingSpec::homogeneous(100.0 * NM, 50.0 * NM, 60.0 * NM, si());
        let up = GratingSpec::homogeneous(100.0 * NM, 30.0 * NM, 40.0 * NM, si());
        let scene = SceneSpec::new(lo, up, 200.0 * NM);
        let a = energy_per_area(&scene, &small()).unwrap();
        let b = energy_per_area(&scene.swapped(), &small()).unwrap();
        assert!(a < 0.0);
        assert!((a - b).abs() <= 1e-10 * a.abs(), "{a} vs {b}");
    }

    #[test]
    fn analytic_derivative_matches_difference_quotient() {
        let engine = CasimirEngine::new(&grating_scene(), &small()).unwrap();
        let r = engine.pressure_checked().unwrap();
        let fd = r.fd_pressure.unwrap();
        assert!(r.pressure < 0.0);
        assert!(((r.pressure - fd) / fd).abs() < 1e-6, "{} vs {fd}", r.pressure);
    }

    #[test]
    fn flat_plates_reproduce_lifshitz() {
        let d = 200.0 * NM;
        let l = 250.0 * NM;
        let scene = SceneSpec::new(GratingSpec::plane(si(), d), GratingSpec::plane(si(), d), l);
        let r = pressure(&scene, &NumericsSpec::default().with_truncation(5)).unwrap();
        let exact = lifshitz_pressure(l, &si(), &si()).unwrap().pressure;
        assert!(((r.pressure - exact) / exact).abs() < 1e-3, "{} vs {exact}", r.pressure);
        assert!((r.rho - 1.0).abs() < 1e-3);
    }

    #[test]
    fn energy_decreases_in_magnitude_with_distance() {
        let n = small();
        let near = energy_per_area(&grating_scene(), &n).unwrap();
        let far = energy_per_area(&grating_scene().at_distance(300.0 * NM), &n).unwrap();
        assert!(near < far && far < 0.0);
    }

    #[test]
    fn shifted_scene_is_symmetric_under_reflection_of_the_shift() {
        let d = 100.0 * NM;
        let lo = GratingSpec::homogeneous(d, 50.0 * NM, 60.0 * NM, si());
        let up = lo.clone().with_shift(0.3 * d);
        let scene = SceneSpec::new(lo.clone(), up, 200.0 * NM);
        let mirrored = SceneSpec::new(lo.clone(), lo.with_shift(0.7 * d), 200.0 * NM);
        let a = energy_per_area(&scene, &small()).unwrap();
        let b = energy_per_area(&mirrored, &small()).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.abs(), "{a} vs {b}");
    }

    #[test]
    fn convergence_scan_on_vacuum_is_zero() {
        let g = GratingSpec::plane(MaterialModel::Vacuum, 100.0 * NM);
        let scene = SceneSpec::new(g.clone(), g, 100.0 * NM);
        let rows = convergence_scan(&scene, &small(), ConvergenceAxis::Truncation, 2).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].rel_delta, 0.0);
        assert_eq!(rows[2].setting, 7);
    }
}
