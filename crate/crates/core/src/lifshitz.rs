//! Plane–plane Casimir interaction and the proximity-force baseline.
//!
//! Energy per area between two flat plates at distance L:
//!
//! ```text
//! E/A = ħc/(4π²) ∫₀^∞ dξ ∫₀^∞ k dk Σ_p ln(1 - r₁ᵖ r₂ᵖ e^{-2κL}),   κ = √(ξ² + k²)
//! ```
//!
//! with ξ the imaginary wavenumber in rad/m. The pressure is obtained from
//! the L-derivative of the integrand, not by differencing energies.

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::HBAR_C;
use crate::materials::{MaterialError, MaterialModel};
use crate::quadrature::GaussLegendre;
use crate::scene::{ProfileKind, SceneError, SceneSpec, ValidatedScene};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LifshitzError {
    #[error("distance must be positive, got {0:e} m")]
    NonPositiveDistance(f64),
    #[error("reflection coefficients undefined at ξ = k = 0")]
    DegenerateMomentum,
    #[error("quadrature not converged: node doubling changed the result by {delta:e} (tolerance {tolerance:e})")]
    QuadratureNotConverged { delta: f64, tolerance: f64 },
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

/// TE and TM reflection amplitudes on the imaginary axis.
///
/// TE refers to the tangential electric field, TM to the tangential
/// magnetic field, so a perfect mirror has `r_te = -1`, `r_tm = +1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub r_te: f64,
    pub r_tm: f64,
}

impl FresnelPair {
    pub const ZERO: FresnelPair = FresnelPair { r_te: 0.0, r_tm: 0.0 };
}

/// Vacuum → medium ε reflection at imaginary wavenumber `xi` and in-plane momentum `k_par`.
pub fn fresnel(xi: f64, k_par: f64, eps: f64) -> Result<FresnelPair, LifshitzError> {
    interface(xi, k_par, 1.0, eps)
}

/// Reflection at a planar interface from medium `eps_i` onto medium `eps_j`.
pub fn interface(xi: f64, k_par: f64, eps_i: f64, eps_j: f64) -> Result<FresnelPair, LifshitzError> {
    if xi == 0.0 && k_par == 0.0 {
        return Err(LifshitzError::DegenerateMomentum);
    }
    let k2 = k_par * k_par;
    let gi = (eps_i * xi * xi + k2).sqrt();
    let gj = (eps_j * xi * xi + k2).sqrt();
    Ok(FresnelPair {
        r_te: (gi - gj) / (gi + gj),
        r_tm: (eps_j * gi - eps_i * gj) / (eps_j * gi + eps_i * gj),
    })
}

/// A flat mirror bounding the vacuum slit.
#[derive(Debug, Clone, PartialEq)]
pub enum Plate {
    HalfSpace(MaterialModel),
    /// Slab of finite thickness on a semi-infinite substrate; the slab faces the slit.
    SlabOnSubstrate {
        slab: MaterialModel,
        thickness: f64,
        substrate: MaterialModel,
    },
}

/// Permittivities of a plate at one frequency.
#[derive(Debug, Clone, Copy)]
pub enum PlateResponse {
    HalfSpace(f64),
    Slab { slab: f64, thickness: f64, substrate: f64 },
}

impl Plate {
    pub fn response(&self, xi: f64) -> Result<PlateResponse, MaterialError> {
        Ok(match self {
            Plate::HalfSpace(m) => PlateResponse::HalfSpace(m.permittivity_at_wavenumber(xi)?),
            Plate::SlabOnSubstrate {
                slab,
                thickness,
                substrate,
            } => PlateResponse::Slab {
                slab: slab.permittivity_at_wavenumber(xi)?,
                thickness: *thickness,
                substrate: substrate.permittivity_at_wavenumber(xi)?,
            },
        })
    }

    fn is_vacuum(&self) -> bool {
        match self {
            Plate::HalfSpace(m) => m.is_vacuum(),
            Plate::SlabOnSubstrate { slab, substrate, .. } => slab.is_vacuum() && substrate.is_vacuum(),
        }
    }
}

impl PlateResponse {
    pub fn reflection(&self, xi: f64, k_par: f64) -> Result<FresnelPair, LifshitzError> {
        match *self {
            PlateResponse::HalfSpace(eps) => fresnel(xi, k_par, eps),
            PlateResponse::Slab {
                slab,
                thickness,
                substrate,
            } => slab_reflection(xi, k_par, slab, thickness, substrate),
        }
    }
}

/// Reflection of a slab (`eps_slab`, thickness `t`) on a substrate, referenced to the slab top.
pub fn slab_reflection(
    xi: f64,
    k_par: f64,
    eps_slab: f64,
    t: f64,
    eps_sub: f64,
) -> Result<FresnelPair, LifshitzError> {
    let top = interface(xi, k_par, 1.0, eps_slab)?;
    let bottom = interface(xi, k_par, eps_slab, eps_sub)?;
    let g1 = (eps_slab * xi * xi + k_par * k_par).sqrt();
    let e = (-2.0 * g1 * t).exp();
    let combine = |r01: f64, r12: f64| (r01 + r12 * e) / (1.0 + r01 * r12 * e);
    Ok(FresnelPair {
        r_te: combine(top.r_te, bottom.r_te),
        r_tm: combine(top.r_tm, bottom.r_tm),
    })
}

/// Node counts for the polar (κ, v) product rule; the result is accepted only if
/// doubling both counts moves the pressure by less than `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifshitzQuadrature {
    pub nodes: usize,
    /// Scale of the semi-infinite map in rad/m; `None` means 1/L.
    pub scale: Option<f64>,
    pub tolerance: f64,
}

impl Default for LifshitzQuadrature {
    fn default() -> Self {
        Self {
            nodes: 48,
            scale: None,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifshitzResult {
    /// J/m².
    pub energy_per_area: f64,
    /// N/m², negative for attraction.
    pub pressure: f64,
    /// Relative change of the pressure under node doubling.
    pub conv_delta: f64,
}

/// ln(1 - x) and its L-derivative for a single polarization term.
#[inline]
fn term(r1: f64, r2: f64, kappa: f64, l: f64) -> (f64, f64) {
    let x = r1 * r2 * (-2.0 * kappa * l).exp();
    ((-x).ln_1p(), 2.0 * kappa * x / (1.0 - x))
}

/// Value of `Σ_p ln(1 - r₁ᵖ r₂ᵖ e^{-2κL})` at one (ξ, k) point.
pub fn integrand(r1: FresnelPair, r2: FresnelPair, kappa: f64, l: f64) -> f64 {
    term(r1.r_te, r2.r_te, kappa, l).0 + term(r1.r_tm, r2.r_tm, kappa, l).0
}

/// Polar product rule: κ on (0, ∞) mapped with `scale`, and ξ = κv, k = κ√(1 - v²)
/// with v = t², so `dξ k dk = 2t κ² dκ dt`. The quadratic map resolves the
/// TE crossover at ξ ≈ k/√ε for strongly reflecting plates.
fn integrate(
    l: f64,
    p1: &Plate,
    p2: &Plate,
    nodes: usize,
    scale: f64,
) -> Result<(f64, f64), LifshitzError> {
    let gl = GaussLegendre::new(nodes);
    let radial = gl.semi_infinite(scale);
    let angular = gl.interval(0.0, 1.0);
    let mut energy = 0.0;
    let mut dedl = 0.0;
    for &(t, wt) in &angular {
        let v = t * t;
        let sin = (1.0 - v * v).sqrt();
        for &(kappa, wk) in &radial {
            let (xi, k) = (kappa * v, kappa * sin);
            let (a, b) = (p1.response(xi)?, p2.response(xi)?);
            let (r1, r2) = (a.reflection(xi, k)?, b.reflection(xi, k)?);
            let (e_te, d_te) = term(r1.r_te, r2.r_te, kappa, l);
            let (e_tm, d_tm) = term(r1.r_tm, r2.r_tm, kappa, l);
            let w = 2.0 * t * wt * wk * kappa * kappa;
            energy += w * (e_te + e_tm);
            dedl += w * (d_te + d_tm);
        }
    }
    let pref = HBAR_C / (4.0 * PI * PI);
    Ok((pref * energy, -pref * dedl))
}

/// Energy and pressure between two flat plates separated by vacuum gap `l`.
pub fn lifshitz(
    l: f64,
    p1: &Plate,
    p2: &Plate,
    quad: &LifshitzQuadrature,
) -> Result<LifshitzResult, LifshitzError> {
    if !(l > 0.0) {
        return Err(LifshitzError::NonPositiveDistance(l));
    }
    if p1.is_vacuum() || p2.is_vacuum() {
        return Ok(LifshitzResult {
            energy_per_area: 0.0,
            pressure: 0.0,
            conv_delta: 0.0,
        });
    }
    let scale = quad.scale.unwrap_or(1.0 / l);
    let (e1, p_1) = integrate(l, p1, p2, quad.nodes, scale)?;
    let (e2, p_2) = integrate(l, p1, p2, 2 * quad.nodes, scale)?;
    let delta = ((p_2 - p_1) / p_2).abs().max(((e2 - e1) / e2).abs());
    if delta > quad.tolerance {
        return Err(LifshitzError::QuadratureNotConverged {
            delta,
            tolerance: quad.tolerance,
        });
    }
    Ok(LifshitzResult {
        energy_per_area: e2,
        pressure: p_2,
        conv_delta: delta,
    })
}

/// Half-space convenience wrapper with the default quadrature.
pub fn lifshitz_pressure(
    l: f64,
    m1: &MaterialModel,
    m2: &MaterialModel,
) -> Result<LifshitzResult, LifshitzError> {
    lifshitz(
        l,
        &Plate::HalfSpace(m1.clone()),
        &Plate::HalfSpace(m2.clone()),
        &LifshitzQuadrature::default(),
    )
}

/// One facing pair of flat regions in the proximity-force estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct PfaPatch {
    /// Area fraction of the unit cell.
    pub weight: f64,
    pub distance: f64,
    pub lower: MaterialModel,
    pub upper: MaterialModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PfaEstimate {
    pub pressure: f64,
    pub energy_per_area: f64,
    pub patches: Vec<PfaPatch>,
    /// Largest quadrature delta among the plane–plane evaluations.
    pub conv_delta: f64,
}

/// Length of the overlap of two arcs of a circle of circumference `d`.
fn arc_overlap(c1: f64, w1: f64, c2: f64, w2: f64, d: f64) -> f64 {
    (-2..=2)
        .map(|k| {
            let c = c2 + k as f64 * d;
            let lo = (c1 - 0.5 * w1).max(c - 0.5 * w2);
            let hi = (c1 + 0.5 * w1).min(c + 0.5 * w2);
            (hi - lo).max(0.0)
        })
        .sum()
}

/// Area-weighted facing regions of two lamellar gratings.
///
/// Bars face bars at `L - a₁ - a₂`, bars face gaps at `L - a₁` or `L - a₂`, gaps
/// face gaps at `L`. For equal depths and `d₁ = d/2` aligned profiles this is
/// `½ (F(L - 2a) + F(L))`.
pub fn pfa_patches(scene: &ValidatedScene) -> Vec<PfaPatch> {
    let s = scene.scene();
    let (lo, up) = (&s.lower, &s.upper);
    let bar_fraction = |g: &crate::scene::GratingSpec| match g.kind() {
        ProfileKind::Bare => 0.0,
        ProfileKind::Slab => 1.0,
        ProfileKind::Lamellar => g.fill_fraction(),
    };
    let (f1, f2) = (bar_fraction(lo), bar_fraction(up));
    let d = scene.period();
    // lower bar centred at -s_low, upper at -s_up
    let bb = arc_overlap(-lo.lateral_shift, f1 * d, -up.lateral_shift, f2 * d, d) / d;
    let bb = bb.min(f1).min(f2);
    let l = s.distance;
    let candidates = [
        (bb, l - lo.depth - up.depth, &lo.bar, &up.bar),
        (f1 - bb, l - lo.depth, &lo.bar, &up.substrate),
        (f2 - bb, l - up.depth, &lo.substrate, &up.bar),
        (1.0 - f1 - f2 + bb, l, &lo.substrate, &up.substrate),
    ];
    candidates
        .into_iter()
        .filter(|(w, ..)| *w > 1e-15)
        .map(|(weight, distance, a, b)| PfaPatch {
            weight,
            distance,
            lower: a.clone(),
            upper: b.clone(),
        })
        .collect()
}

/// Proximity-force pressure for a two-grating scene.
pub fn pfa_force_gratings(
    scene: &ValidatedScene,
    quad: &LifshitzQuadrature,
) -> Result<PfaEstimate, LifshitzError> {
    let patches = pfa_patches(scene);
    let mut pressure = 0.0;
    let mut energy = 0.0;
    let mut conv_delta: f64 = 0.0;
    for p in &patches {
        if !(p.distance > 0.0) {
            return Err(SceneError::SlitNonPositive {
                distance: scene.scene().distance,
                depths: scene.scene().distance - p.distance,
            }
            .into());
        }
        let r = lifshitz(
            p.distance,
            &Plate::HalfSpace(p.lower.clone()),
            &Plate::HalfSpace(p.upper.clone()),
            quad,
        )?;
        pressure += p.weight * r.pressure;
        energy += p.weight * r.energy_per_area;
        conv_delta = conv_delta.max(r.conv_delta);
    }
    Ok(PfaEstimate {
        pressure,
        energy_per_area: energy,
        patches,
        conv_delta,
    })
}

/// Convenience: validate and evaluate the PFA for a raw scene.
pub fn pfa_for_scene(scene: &SceneSpec, quad: &LifshitzQuadrature) -> Result<PfaEstimate, LifshitzError> {
    let v = crate::scene::validate_scene(scene, &crate::scene::NumericsSpec::default())?;
    pfa_force_gratings(&v, quad)
}

/// Sphere–plate force gradient from the plane–plane force per area, `2πR·F_PP`.
pub fn sphere_gradient(f_pp: f64, radius: f64) -> f64 {
    2.0 * PI * radius * f_pp
}
