use std::f64::consts::PI;

use faer::{c64, Mat};

use crate::linalg::CMat;

/// Toeplitz matrices of the Fourier coefficients of ε(x) and 1/ε(x) over one period.
#[derive(Debug, Clone)]
pub struct ToeplitzPermittivity {
    /// `⟦ε⟧_{mn} = ε̂_{m-n}`
    pub eps: CMat,
    /// `⟦1/ε⟧_{mn}`
    pub inv_eps: CMat,
    pub truncation: usize,
}

/// Fourier coefficient m of a unit-height bar of fraction `fill` centred at `centre·d`.
fn bar_coefficient(m: i64, fill: f64, centre: f64) -> c64 {
    if m == 0 {
        return c64::new(fill, 0.0);
    }
    let mf = m as f64;
    let amp = (PI * mf * fill).sin() / (PI * mf);
    let phase = -2.0 * PI * mf * centre;
    c64::from_polar(amp, phase)
}

fn toeplitz(background: f64, contrast: f64, fill: f64, centre: f64, truncation: usize) -> CMat {
    let n = 2 * truncation + 1;
    let coeffs: Vec<c64> = (-(2 * truncation as i64)..=2 * truncation as i64)
        .map(|m| {
            let c = contrast * bar_coefficient(m, fill, centre);
            if m == 0 {
                c + background
            } else {
                c
            }
        })
        .collect();
    let offset = 2 * truncation as i64;
    Mat::from_fn(n, n, |i, j| coeffs[(i as i64 - j as i64 + offset) as usize])
}

/// Permittivity profile of a lamellar layer: bars of `eps_bar` filling the
/// fraction `fill` of the period, vacuum elsewhere. The bar is centred at
/// `x = centre · d` (use 0 for the symmetric, real-valued case).
pub fn fourier_lamellar(eps_bar: f64, fill: f64, truncation: usize, centre: f64) -> ToeplitzPermittivity {
    let fill = fill.clamp(0.0, 1.0);
    ToeplitzPermittivity {
        eps: toeplitz(1.0, eps_bar - 1.0, fill, centre, truncation),
        inv_eps: toeplitz(1.0, 1.0 / eps_bar - 1.0, fill, centre, truncation),
        truncation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_scaled_identity(m: &CMat, v: f64) {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let expect = if i == j { v } else { 0.0 };
                assert!((m[(i, j)] - c64::new(expect, 0.0)).norm() < 1e-15, "({i},{j}) {:?}", m[(i, j)]);
            }
        }
    }

    #[test]
    fn uniform_limits() {
        let full = fourier_lamellar(5.0, 1.0, 4, 0.0);
        assert_scaled_identity(&full.eps, 5.0);
        assert_scaled_identity(&full.inv_eps, 0.2);
        let empty = fourier_lamellar(5.0, 0.0, 4, 0.0);
        assert_scaled_identity(&empty.eps, 1.0);
        assert_scaled_identity(&empty.inv_eps, 1.0);
    }

    #[test]
    fn first_harmonic_of_half_filled_bar() {
        let t = fourier_lamellar(5.0, 0.5, 3, 0.0);
        // row m=1, column n=0 holds ε̂₁
        let c1 = t.eps[(4, 3)];
        assert!((c1.re - 4.0 / PI).abs() < 1e-15 && c1.im == 0.0);
        assert!((c1.re - 1.27324).abs() < 1e-5);
        assert!((t.eps[(3, 3)].re - 3.0).abs() < 1e-15);
        // even harmonics vanish at half filling
        assert!(t.eps[(5, 3)].norm() < 1e-15);
    }

    #[test]
    fn centred_bar_is_real_symmetric_and_shift_is_a_similarity() {
        let t = fourier_lamellar(11.0, 0.3, 5, 0.0);
        let n = t.eps.nrows();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(t.eps[(i, j)].im, 0.0);
                assert_eq!(t.eps[(i, j)], t.eps[(j, i)]);
            }
        }
        let c = 0.17;
        let s = fourier_lamellar(11.0, 0.3, 5, c);
        for i in 0..n {
            for j in 0..n {
                // Hermitian
                assert!((s.eps[(i, j)] - s.eps[(j, i)].conj()).norm() < 1e-15);
                let (mi, mj) = (i as f64 - 5.0, j as f64 - 5.0);
                let ph = c64::from_polar(1.0, -2.0 * PI * (mi - mj) * c);
                assert!((s.eps[(i, j)] - ph * t.eps[(i, j)]).norm() < 1e-14);
            }
        }
    }
}
