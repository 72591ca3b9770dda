//! Geometry and numerics description of a two-grating scene.
//!
//! The lower grating occupies `y < a_low` with its gaps' bottom at `y = 0`;
//! the upper grating is the same kind of profile turned upside down with its
//! gaps' bottom at `y = L`. All lengths are in meters.

use thiserror::Error;

use crate::grating::LayerSolver;
use crate::materials::{MaterialError, MaterialModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryParam {
    Gap,
    Shift,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("grating period must be positive, got {0:e} m")]
    NonPositivePeriod(f64),
    #[error("vacuum slit is not positive: L = {distance:e} m <= a_low + a_up = {depths:e} m")]
    SlitNonPositive { distance: f64, depths: f64 },
    #[error("gratings have different periods ({lower:e} m vs {upper:e} m)")]
    PeriodMismatch { lower: f64, upper: f64 },
    #[error("{param:?} = {value:e} m out of range for period {period:e} m")]
    GapOutOfRange {
        param: GeometryParam,
        value: f64,
        period: f64,
    },
    #[error("corrugation depth must be non-negative, got {0:e} m")]
    NegativeDepth(f64),
    #[error("invalid numerics: {0}")]
    InvalidNumerics(String),
    #[error(transparent)]
    Material(#[from] MaterialError),
}

/// Lamellar grating: bars of width `period - gap` and height `depth`
/// standing on a semi-infinite substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct GratingSpec {
    pub period: f64,
    /// Width of the vacuum gap between bars (d₁).
    pub gap: f64,
    pub depth: f64,
    pub bar: MaterialModel,
    pub substrate: MaterialModel,
    /// Lateral offset of the profile; the bar is centred at `x = -shift`.
    pub lateral_shift: f64,
}

/// What a grating reduces to for the scattering calculation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Flat substrate surface (possibly recessed below the reference plane).
    Bare,
    /// Uniform slab of the bar material on the substrate.
    Slab,
    Lamellar,
}

impl GratingSpec {
    pub fn lamellar(
        period: f64,
        gap: f64,
        depth: f64,
        bar: MaterialModel,
        substrate: MaterialModel,
    ) -> Self {
        Self {
            period,
            gap,
            depth,
            bar,
            substrate,
            lateral_shift: 0.0,
        }
    }

    /// Same material for bars and substrate.
    pub fn homogeneous(period: f64, gap: f64, depth: f64, material: MaterialModel) -> Self {
        Self::lamellar(period, gap, depth, material.clone(), material)
    }

    /// A flat surface. The period only fixes the Brillouin zone.
    pub fn plane(material: MaterialModel, period: f64) -> Self {
        Self::lamellar(period, period, 0.0, MaterialModel::Vacuum, material)
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.lateral_shift = shift;
        self
    }

    /// Bar filling fraction `(d - d₁)/d`.
    pub fn fill_fraction(&self) -> f64 {
        (self.period - self.gap) / self.period
    }

    pub fn kind(&self) -> ProfileKind {
        if self.depth == 0.0 || self.gap >= self.period || self.bar.is_vacuum() {
            ProfileKind::Bare
        } else if self.gap == 0.0 {
            ProfileKind::Slab
        } else {
            ProfileKind::Lamellar
        }
    }

    pub fn is_flat(&self) -> bool {
        self.kind() != ProfileKind::Lamellar
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(SceneError::NonPositivePeriod(self.period));
        }
        if !(self.gap >= 0.0 && self.gap <= self.period) {
            return Err(SceneError::GapOutOfRange {
                param: GeometryParam::Gap,
                value: self.gap,
                period: self.period,
            });
        }
        if !(self.lateral_shift >= 0.0 && self.lateral_shift < self.period) {
            return Err(SceneError::GapOutOfRange {
                param: GeometryParam::Shift,
                value: self.lateral_shift,
                period: self.period,
            });
        }
        if !(self.depth >= 0.0 && self.depth.is_finite()) {
            return Err(SceneError::NegativeDepth(self.depth));
        }
        self.bar.validate()?;
        self.substrate.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub lower: GratingSpec,
    pub upper: GratingSpec,
    /// Distance between the gap bottoms of the two gratings (L).
    pub distance: f64,
}

impl SceneSpec {
    pub fn new(lower: GratingSpec, upper: GratingSpec, distance: f64) -> Self {
        Self {
            lower,
            upper,
            distance,
        }
    }

    /// The scene with the two gratings exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            lower: self.upper.clone(),
            upper: self.lower.clone(),
            distance: self.distance,
        }
    }

    /// Same scene at another distance L.
    pub fn at_distance(&self, distance: f64) -> Self {
        Self {
            distance,
            ..self.clone()
        }
    }

    /// Width of the vacuum slit between the bar tops, `L - a_low - a_up`.
    pub fn min_gap(&self) -> f64 {
        self.distance - self.lower.depth - self.upper.depth
    }
}

/// Node count plus optional scale for a semi-infinite variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisNodes {
    pub nodes: usize,
    /// Scale of the `t/(1-t)` map in rad/m; `None` means 1/(minimal gap).
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericsSpec {
    /// Rayleigh orders m = -N..=N.
    pub truncation: usize,
    pub xi: AxisNodes,
    pub kz: AxisNodes,
    /// Nodes over the full Brillouin zone (0, 2π/d).
    pub kx_nodes: usize,
    /// Finite-difference step relative to the minimal gap.
    pub fd_step: f64,
    /// Tolerance used to flag convergence deltas.
    pub tolerance: f64,
    /// Evaluate the round-trip spectral radius at every node (expensive).
    pub check_spectral_radius: bool,
    pub solver: LayerSolver,
}

impl Default for NumericsSpec {
    fn default() -> Self {
        Self {
            truncation: 8,
            xi: AxisNodes {
                nodes: 40,
                scale: None,
            },
            kz: AxisNodes {
                nodes: 24,
                scale: None,
            },
            kx_nodes: 16,
            fd_step: 1e-2,
            tolerance: 1e-3,
            check_spectral_radius: false,
            solver: LayerSolver::Auto,
        }
    }
}

impl NumericsSpec {
    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = n;
        self
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        let bad = |m: String| Err(SceneError::InvalidNumerics(m));
        if self.truncation < 1 {
            return bad("truncation N must be at least 1".into());
        }
        if self.xi.nodes < 2 || self.kz.nodes < 2 || self.kx_nodes < 2 {
            return bad("every quadrature axis needs at least 2 nodes".into());
        }
        for s in [self.xi.scale, self.kz.scale].into_iter().flatten() {
            if !(s > 0.0 && s.is_finite()) {
                return bad(format!("quadrature scale {s} must be positive"));
            }
        }
        if !(self.fd_step > 0.0 && self.fd_step < 0.5) {
            return bad(format!("fd_step {} must lie in (0, 0.5)", self.fd_step));
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive".into());
        }
        Ok(())
    }
}

/// A scene that passed validation, with derived quantities attached.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedScene {
    scene: SceneSpec,
    min_gap: f64,
    period: f64,
    lower_fill: f64,
    upper_fill: f64,
}

impl ValidatedScene {
    pub fn scene(&self) -> &SceneSpec {
        &self.scene
    }

    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Common period; a flat partner adopts the other grating's period.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn lower_fill(&self) -> f64 {
        self.lower_fill
    }

    pub fn upper_fill(&self) -> f64 {
        self.upper_fill
    }

    /// Lateral shift of the upper profile relative to the lower one, in [0, d).
    pub fn relative_shift(&self) -> f64 {
        let d = self.period;
        (self.scene.upper.lateral_shift - self.scene.lower.lateral_shift).rem_euclid(d)
    }

    pub fn into_scene(self) -> SceneSpec {
        self.scene
    }
}

pub fn validate_scene(
    scene: &SceneSpec,
    numerics: &NumericsSpec,
) -> Result<ValidatedScene, SceneError> {
    scene.lower.validate()?;
    scene.upper.validate()?;
    numerics.validate()?;
    let (dl, du) = (scene.lower.period, scene.upper.period);
    let period = match (scene.lower.is_flat(), scene.upper.is_flat()) {
        (false, true) => dl,
        (true, false) => du,
        _ => {
            if (dl - du).abs() > 1e-12 * dl.max(du) {
                return Err(SceneError::PeriodMismatch {
                    lower: dl,
                    upper: du,
                });
            }
            dl
        }
    };
    let depths = scene.lower.depth + scene.upper.depth;
    if !(scene.distance > depths) {
        return Err(SceneError::SlitNonPositive {
            distance: scene.distance,
            depths,
        });
    }
    Ok(ValidatedScene {
        scene: scene.clone(),
        min_gap: scene.min_gap(),
        period,
        lower_fill: scene.lower.fill_fraction(),
        upper_fill: scene.upper.fill_fraction(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const NM: f64 = 1e-9;

    fn si() -> MaterialModel {
        MaterialModel::silicon()
    }

    #[test]
    fn identical_deep_gratings_violate_slit() {
        let g = GratingSpec::homogeneous(400.0 * NM, 196.0 * NM, 980.0 * NM, si());
        let scene = SceneSpec::new(g.clone(), g.clone(), 1900.0 * NM);
        assert!(matches!(
            validate_scene(&scene, &NumericsSpec::default()),
            Err(SceneError::SlitNonPositive { .. })
        ));
        // 2a = 1.96 µm leaves a 240 nm slit at L = 2.2 µm
        let wide = SceneSpec::new(g.clone(), g, 2200.0 * NM);
        let v = validate_scene(&wide, &NumericsSpec::default()).unwrap();
        assert!((v.min_gap() - 240.0 * NM).abs() < 1e-15);
    }

    #[test]
    fn grating_against_plane_minimal_gap() {
        let g = GratingSpec::homogeneous(100.0 * NM, 50.0 * NM, 100.0 * NM, si());
        let plane = GratingSpec::plane(si(), 100.0 * NM);
        let scene = SceneSpec::new(g, plane, 250.0 * NM);
        let v = validate_scene(&scene, &NumericsSpec::default()).unwrap();
        assert_eq!(v.min_gap(), 250.0 * NM - 100.0 * NM);
        assert!((v.min_gap() - 150.0 * NM).abs() < 1e-20);
        assert_eq!(v.lower_fill(), 0.5);
        assert_eq!(v.upper_fill(), 0.0);
    }

    #[test]
    fn shift_equal_to_period_is_rejected() {
        let d = 100.0 * NM;
        let g = GratingSpec::homogeneous(d, 50.0 * NM, 10.0 * NM, si());
        let scene = SceneSpec::new(g.clone(), g.with_shift(d), 250.0 * NM);
        assert!(matches!(
            validate_scene(&scene, &NumericsSpec::default()),
            Err(SceneError::GapOutOfRange {
                param: GeometryParam::Shift,
                ..
            })
        ));
    }

    #[test]
    fn other_rejections() {
        let n = NumericsSpec::default();
        let g = GratingSpec::homogeneous(100.0 * NM, 50.0 * NM, 10.0 * NM, si());
        let mut bad = g.clone();
        bad.period = 0.0;
        assert!(matches!(
            validate_scene(&SceneSpec::new(bad, g.clone(), 1e-6), &n),
            Err(SceneError::NonPositivePeriod(_))
        ));
        let mut bad = g.clone();
        bad.gap = 120.0 * NM;
        assert!(matches!(
            validate_scene(&SceneSpec::new(bad, g.clone(), 1e-6), &n),
            Err(SceneError::GapOutOfRange {
                param: GeometryParam::Gap,
                ..
            })
        ));
        let mut other = g.clone();
        other.period = 200.0 * NM;
        assert!(matches!(
            validate_scene(&SceneSpec::new(g.clone(), other, 1e-6), &n),
            Err(SceneError::PeriodMismatch { .. })
        ));
        let scene = SceneSpec::new(g.clone(), g.clone(), 1e-6);
        assert!(validate_scene(&scene, &n.clone().with_truncation(0)).is_err());
    }

    #[test]
    fn validation_is_idempotent() {
        let g = GratingSpec::homogeneous(100.0 * NM, 50.0 * NM, 100.0 * NM, si()).with_shift(20.0 * NM);
        let scene = SceneSpec::new(g.clone(), g, 250.0 * NM);
        let n = NumericsSpec::default();
        let once = validate_scene(&scene, &n).unwrap();
        let twice = validate_scene(once.scene(), &n).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn profile_kinds() {
        let d = 100.0 * NM;
        assert_eq!(GratingSpec::plane(si(), d).kind(), ProfileKind::Bare);
        assert_eq!(GratingSpec::homogeneous(d, 0.0, 10.0 * NM, si()).kind(), ProfileKind::Slab);
        assert_eq!(GratingSpec::homogeneous(d, d, 10.0 * NM, si()).kind(), ProfileKind::Bare);
        assert_eq!(
            GratingSpec::lamellar(d, 40.0 * NM, 10.0 * NM, MaterialModel::Vacuum, si()).kind(),
            ProfileKind::Bare
        );
        assert_eq!(GratingSpec::homogeneous(d, 40.0 * NM, 10.0 * NM, si()).kind(), ProfileKind::Lamellar);
    }
}
