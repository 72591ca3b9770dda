//! Fourier modal solver for a single lamellar grating on the imaginary frequency axis.
//!
//! Fields are expanded in Rayleigh orders `α_m = k_x + 2πm/d`, `m = -N..=N`.
//! The tangential amplitudes inside the corrugation obey `∂A/∂y = M A` with
//! `A = (E_z, E_x, H_z, H_x)`; matching the layer modes to the substrate below
//! and to vacuum above yields the reflection matrix in the `(E_z, H_z)` basis.
//!
//! Conventions: Maxwell's curl equations at `ω = iξ` read `∇×E = -ξH` and
//! `∇×H = ξεE`, so all wavenumbers are real and every order is evanescent with
//! decay constant `γ_m = √(εξ² + k_z² + α_m²)`.

mod modal;
mod propagation;
mod reflection;
mod sliced;
mod toeplitz;

use thiserror::Error;

use crate::materials::MaterialError;

pub use modal::{build_m, LayerModes, PropagationMatrix};
pub use propagation::{parity_flip, propagation_k, shift_phases, upper_reflection, Propagation};
pub use reflection::{
    plane_reflection_matrix, reflection_matrix, reflection_matrix_with, slab_reflection_matrix,
    uniform_modes, LayerSolver, ReflectionMatrix,
};
pub use toeplitz::{fourier_lamellar, ToeplitzPermittivity};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GratingError {
    #[error("Toeplitz permittivity matrix is singular at truncation N = {0}")]
    SingularToeplitz(usize),
    #[error("mode matching is ill-conditioned (pivot ratio {0:e})")]
    IllConditionedMatching(f64),
    #[error("imaginary frequency must be positive, got {0:e} rad/m")]
    NonPositiveFrequency(f64),
    #[error("lateral shift {shift:e} m outside [0, {period:e}] m")]
    ShiftOutOfRange { shift: f64, period: f64 },
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
    #[error(transparent)]
    Material(#[from] MaterialError),
}

/// One sample of the integration domain: imaginary wavenumber ξ, Bloch
/// wavenumber k_x, and out-of-plane k_z, all in rad/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub xi: f64,
    pub kx: f64,
    pub kz: f64,
    pub period: f64,
    pub truncation: usize,
}

impl SpectralPoint {
    pub fn new(xi: f64, kx: f64, kz: f64, period: f64, truncation: usize) -> Self {
        Self {
            xi,
            kx,
            kz,
            period,
            truncation,
        }
    }

    /// Number of Rayleigh orders, 2N + 1.
    pub fn orders(&self) -> usize {
        2 * self.truncation + 1
    }

    pub fn order_index(&self, i: usize) -> i64 {
        i as i64 - self.truncation as i64
    }

    pub fn alphas(&self) -> Vec<f64> {
        let g = 2.0 * std::f64::consts::PI / self.period;
        (0..self.orders())
            .map(|i| self.kx + g * self.order_index(i) as f64)
            .collect()
    }

    /// Decay constants `√(εξ² + k_z² + α_m²)` in a uniform medium.
    pub fn gammas(&self, eps: f64) -> Vec<f64> {
        let base = eps * self.xi * self.xi + self.kz * self.kz;
        self.alphas().iter().map(|a| (base + a * a).sqrt()).collect()
    }

    /// Same point with k_x folded into the centred zone (-π/d, π/d].
    pub fn centred(&self) -> Self {
        let g = 2.0 * std::f64::consts::PI / self.period;
        let mut kx = self.kx - g * (self.kx / g).round();
        if kx <= -0.5 * g {
            kx += g;
        }
        Self { kx, ..*self }
    }

    fn check(&self) -> Result<(), GratingError> {
        if self.xi > 0.0 && self.xi.is_finite() {
            Ok(())
        } else {
            Err(GratingError::NonPositiveFrequency(self.xi))
        }
    }
}
