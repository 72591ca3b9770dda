//! Vacuum propagation between the gratings and the mirrored upper-grating response.

use std::f64::consts::PI;

use faer::{c64, Mat};

use super::{GratingError, SpectralPoint};
use crate::linalg::{scale_cols, scale_rows, CMat};

/// Diagonal vacuum translation over a gap, in the `(E_z, H_z)` basis.
#[derive(Debug, Clone)]
pub struct Propagation {
    /// `e^{-γ_m L}` for each order, repeated over both field blocks.
    pub diag: Vec<c64>,
    /// Vacuum decay constants `γ_m`, repeated likewise.
    pub gammas: Vec<f64>,
}

impl Propagation {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_matrix(&self) -> CMat {
        let n = self.diag.len();
        Mat::from_fn(n, n, |i, j| if i == j { self.diag[i] } else { c64::new(0.0, 0.0) })
    }

    /// `K · m`
    pub fn left(&self, m: &CMat) -> CMat {
        scale_rows(&self.diag, m.as_ref())
    }

    /// `m · K`
    pub fn right(&self, m: &CMat) -> CMat {
        scale_cols(m.as_ref(), &self.diag)
    }
}

/// `K(L) = diag(e^{-γ_m L})` for both polarization blocks.
pub fn propagation_k(point: &SpectralPoint, distance: f64) -> Propagation {
    let g = point.gammas(1.0);
    let gammas: Vec<f64> = g.iter().chain(&g).copied().collect();
    let diag = gammas.iter().map(|&g| c64::new((-g * distance).exp(), 0.0)).collect();
    Propagation { diag, gammas }
}

/// `diag(1, …, 1, -1, …, -1)`: reflecting y → -y flips the sign of `H_z`.
pub fn parity_flip(orders: usize) -> Vec<c64> {
    (0..2 * orders)
        .map(|i| c64::new(if i < orders { 1.0 } else { -1.0 }, 0.0))
        .collect()
}

/// Phases `e^{i2πm s/d}` for both blocks, which move a profile by `-s` along x.
pub fn shift_phases(point: &SpectralPoint, shift: f64) -> Vec<c64> {
    let n = point.orders();
    (0..2 * n)
        .map(|i| {
            let m = point.order_index(i % n) as f64;
            c64::from_polar(1.0, 2.0 * PI * m * shift / point.period)
        })
        .collect()
}

/// Reflection of the upper grating seen from below, `K S Φ R₂ Φ⁻¹ S K`,
/// where `R₂` is computed for the grating facing up in its own frame.
pub fn upper_reflection(r2: &CMat, k: &Propagation, shift: f64, point: &SpectralPoint) -> Result<CMat, GratingError> {
    if !(0.0..=point.period).contains(&shift) {
        return Err(GratingError::ShiftOutOfRange {
            shift,
            period: point.period,
        });
    }
    let s = parity_flip(point.orders());
    let phi = shift_phases(point, shift);
    let left: Vec<c64> = (0..s.len()).map(|i| k.diag[i] * s[i] * phi[i]).collect();
    let right: Vec<c64> = (0..s.len()).map(|i| k.diag[i] * s[i] * phi[i].conj()).collect();
    Ok(scale_cols(scale_rows(&left, r2.as_ref()).as_ref(), &right))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_order_at_normal_incidence() {
        // γ₀ = ξ at k_x = k_z = 0; ξL = π gives e^{-π}
        let p = SpectralPoint::new(PI / 1e-7, 0.0, 0.0, 5e-7, 3);
        let k = propagation_k(&p, 1e-7);
        assert!((k.diag[3].re - (-PI).exp()).abs() < 1e-15);
        assert!((k.diag[3].re - 0.0432139).abs() < 1e-7);
        assert_eq!(k.dim(), 14);
    }

    #[test]
    fn higher_orders_decay_faster() {
        let p = SpectralPoint::new(1e6, 1e5, 2e5, 1e-7, 4);
        let k = propagation_k(&p, 5e-8);
        let c = 4;
        for i in 0..p.orders() {
            assert!(k.diag[i].re <= k.diag[c].re);
            assert!(k.diag[i].re > 0.0 && k.diag[i].im == 0.0);
        }
    }

    #[test]
    fn full_period_shift_is_identity() {
        let p = SpectralPoint::new(1e7, 0.0, 0.0, 2e-7, 3);
        for z in shift_phases(&p, 2e-7) {
            assert!((z - c64::new(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_shift_beyond_period() {
        let p = SpectralPoint::new(1e7, 0.0, 0.0, 2e-7, 1);
        let k = propagation_k(&p, 1e-7);
        let r = Mat::identity(6, 6);
        assert!(matches!(
            upper_reflection(&r, &k, 3e-7, &p),
            Err(GratingError::ShiftOutOfRange { .. })
        ));
        assert!(upper_reflection(&r, &k, -1e-9, &p).is_err());
        assert!(upper_reflection(&r, &k, 1e-7, &p).is_ok());
    }
}
