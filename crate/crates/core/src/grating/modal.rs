//! The first-order modal system inside the corrugation and its eigenmodes.
//!
//! Eliminating `E_y` and `H_y` from the curl equations gives
//!
//! ```text
//! ∂/∂y (E_z, E_x) = B (H_z, H_x),     ∂/∂y (H_z, H_x) = C (E_z, E_x)
//! ```
//!
//! with `εE_y` and `εE_z` factorized by the Laurent rule (`⟦ε⟧`) and `εE_x`,
//! discontinuous across the bar walls, by the inverse rule (`⟦1/ε⟧⁻¹`).
//! The product `Q = BC` is block upper triangular,
//!
//! ```text
//! Q = | ξ²⟦ε⟧ + K_x² + k_z²      k_z (⟦ε⟧⁻¹ K_x A - K_x) |
//!     | 0                        (K_x ⟦ε⟧⁻¹ K_x + ξ²) A + k_z² |,   A = ⟦1/ε⟧⁻¹
//! ```
//!
//! so the `2(2N+1)` eigenvalues split into an `E_z` family from a Hermitian
//! matrix and an `E_x` family from a product of two Hermitian positive
//! definite matrices. The full `8N+4` spectrum of `M = [[0, B], [C, 0]]` is `±√λ`.

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::{c64, Mat, Side};

use super::toeplitz::ToeplitzPermittivity;
use super::{GratingError, SpectralPoint};
use crate::linalg::{blocks, pivot_ratio, real_diag, zeros, CMat};

/// Relative eigenvalue gap below which a TE/TM pair counts as degenerate.
const DEGENERACY_GAP: f64 = 1e-10;
/// Largest admissible coupling coefficient in the eigenvector basis.
const MAX_COUPLING: f64 = 1e8;

/// `M` of `∂A/∂y = M A` for `A = (E_z, E_x, H_z, H_x)`, dimension `8N + 4`.
#[derive(Debug, Clone)]
pub struct PropagationMatrix {
    pub m: CMat,
    pub point: SpectralPoint,
}

impl PropagationMatrix {
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn eigenvalues(&self) -> Result<Vec<c64>, GratingError> {
        self.m
            .eigenvalues()
            .map_err(|e| GratingError::Eigen(format!("{e:?}")))
    }
}

/// Factorized Toeplitz operators at one spectral point.
pub(crate) struct LayerOperators {
    pub point: SpectralPoint,
    pub alphas: Vec<f64>,
    pub eps: CMat,
    /// `⟦ε⟧⁻¹`
    pub eps_inv: CMat,
    /// `⟦1/ε⟧⁻¹`
    pub inverse_rule: CMat,
}

fn inverse(m: &CMat, truncation: usize) -> Result<CMat, GratingError> {
    let lu = m.partial_piv_lu();
    if pivot_ratio(&lu) < 1e-14 {
        return Err(GratingError::SingularToeplitz(truncation));
    }
    Ok(lu.inverse())
}

fn hermitian_part(m: &CMat) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

impl LayerOperators {
    pub fn new(toeplitz: &ToeplitzPermittivity, point: SpectralPoint) -> Result<Self, GratingError> {
        point.check()?;
        let n = point.truncation;
        Ok(Self {
            alphas: point.alphas(),
            eps: toeplitz.eps.clone(),
            eps_inv: inverse(&toeplitz.eps, n)?,
            inverse_rule: hermitian_part(&inverse(&toeplitz.inv_eps, n)?),
            point,
        })
    }

    fn kx(&self) -> CMat {
        real_diag(&self.alphas)
    }

    /// Maps `(H_z, H_x)` to `∂_y (E_z, E_x)`.
    pub fn b(&self) -> CMat {
        let SpectralPoint { xi, kz, .. } = self.point;
        let n = self.alphas.len();
        let kx = self.kx();
        let p = &self.eps_inv;
        let pkx = p * &kx;
        let kxp = &kx * p;
        let kxpkx = &kx * &pkx;
        let b11 = Mat::from_fn(n, n, |i, j| pkx[(i, j)] * (kz / xi));
        let b12 = Mat::from_fn(n, n, |i, j| {
            -p[(i, j)] * (kz * kz / xi) - if i == j { c64::new(xi, 0.0) } else { c64::new(0.0, 0.0) }
        });
        let b21 = Mat::from_fn(n, n, |i, j| {
            kxpkx[(i, j)] / xi + if i == j { c64::new(xi, 0.0) } else { c64::new(0.0, 0.0) }
        });
        let b22 = Mat::from_fn(n, n, |i, j| -kxp[(i, j)] * (kz / xi));
        blocks(b11.as_ref(), b12.as_ref(), b21.as_ref(), b22.as_ref())
    }

    /// Maps `(E_z, E_x)` to `∂_y (H_z, H_x)`.
    pub fn c(&self) -> CMat {
        let SpectralPoint { xi, kz, .. } = self.point;
        let n = self.alphas.len();
        let a = &self.alphas;
        let diag = |i: usize, j: usize, v: f64| if i == j { c64::new(v, 0.0) } else { c64::new(0.0, 0.0) };
        let c11 = Mat::from_fn(n, n, |i, j| diag(i, j, -kz * a[i] / xi));
        let c12 = Mat::from_fn(n, n, |i, j| self.inverse_rule[(i, j)] * xi + diag(i, j, kz * kz / xi));
        let c21 = Mat::from_fn(n, n, |i, j| -self.eps[(i, j)] * xi - diag(i, j, a[i] * a[i] / xi));
        let c22 = Mat::from_fn(n, n, |i, j| diag(i, j, kz * a[i] / xi));
        blocks(c11.as_ref(), c12.as_ref(), c21.as_ref(), c22.as_ref())
    }
}

/// Builds the `8N+4` square matrix of the modal system.
pub fn build_m(toeplitz: &ToeplitzPermittivity, point: SpectralPoint) -> Result<PropagationMatrix, GratingError> {
    let ops = LayerOperators::new(toeplitz, point)?;
    let (b, c) = (ops.b(), ops.c());
    let z = zeros(b.nrows(), b.ncols());
    Ok(PropagationMatrix {
        m: blocks(z.as_ref(), b.as_ref(), c.as_ref(), z.as_ref()),
        point,
    })
}

/// Eigenmodes of the corrugation layer: `e = W e^{±q y}`, `h = ±V e^{±q y}`.
#[derive(Debug, Clone)]
pub struct LayerModes {
    /// Columns are the `(E_z, E_x)` profiles of each mode.
    pub w: CMat,
    /// Matching `(H_z, H_x)` profiles for the mode growing with y: `V = C W q⁻¹`.
    pub v: CMat,
    /// Decay constants, all with positive real part.
    pub q: Vec<c64>,
}

impl LayerModes {
    /// Returns `Ok(None)` when a TE/TM pair is degenerate and genuinely coupled,
    /// which makes the eigenvector basis unusable.
    pub(crate) fn solve(ops: &LayerOperators) -> Result<Option<Self>, GratingError> {
        let SpectralPoint { xi, kz, .. } = ops.point;
        let n = ops.alphas.len();
        let eig_err = |e| GratingError::Eigen(format!("{e:?}"));

        // E_z family
        let q11 = Mat::from_fn(n, n, |i, j| {
            let d = if i == j { ops.alphas[i] * ops.alphas[i] + kz * kz } else { 0.0 };
            ops.eps[(i, j)] * (xi * xi) + c64::new(d, 0.0)
        });
        let e1 = hermitian_part(&q11).self_adjoint_eigen(Side::Lower).map_err(eig_err)?;
        let w1 = e1.U().to_owned();
        let lam1: Vec<f64> = e1.S().column_vector().iter().map(|z| z.re).collect();

        // E_x family: S·A with S, A Hermitian positive definite, via A = L Lᴴ
        let kx = real_diag(&ops.alphas);
        let kpk = &kx * &ops.eps_inv * &kx;
        let s = hermitian_part(&Mat::from_fn(n, n, |i, j| {
            let v = kpk[(i, j)];
            v + if i == j { c64::new(xi * xi, 0.0) } else { c64::new(0.0, 0.0) }
        }));
        let llt = ops
            .inverse_rule
            .llt(Side::Lower)
            .map_err(|e| GratingError::Eigen(format!("inverse-rule matrix not positive definite: {e:?}")))?;
        let l = llt.L().to_owned();
        let h = hermitian_part(&(l.adjoint() * &s * &l));
        let e2 = h.self_adjoint_eigen(Side::Lower).map_err(eig_err)?;
        let u2 = e2.U().to_owned();
        let lam2: Vec<f64> = e2.S().column_vector().iter().map(|z| z.re + kz * kz).collect();
        // L⁻ᴴ U₂ = A⁻¹ L U₂
        let w2 = llt.solve(&(&l * &u2));

        let scale = lam1.iter().chain(&lam2).fold(0.0f64, |a, &b| a.max(b.abs()));
        if lam1.iter().chain(&lam2).any(|&l| !(l > 0.0)) {
            return Err(GratingError::Eigen("non-positive layer eigenvalue".into()));
        }

        // Coupling block: Λ₁Y - YΛ₂ = -W₁ᴴ Q₁₂ W₂
        let mut w12 = zeros(n, n);
        if kz != 0.0 {
            let pka = &ops.eps_inv * &kx * &ops.inverse_rule;
            let q12 = Mat::from_fn(n, n, |i, j| {
                let v = pka[(i, j)];
                (v - if i == j { c64::new(ops.alphas[i], 0.0) } else { c64::new(0.0, 0.0) }) * kz
            });
            let g = w1.adjoint() * &q12 * &w2;
            let mut y = zeros(n, n);
            for j in 0..n {
                let col_norm = (0..n).map(|i| w2[(i, j)].norm_sqr()).sum::<f64>().sqrt();
                for i in 0..n {
                    let gap = lam1[i] - lam2[j];
                    let gij = g[(i, j)];
                    if gap.abs() <= DEGENERACY_GAP * scale {
                        if gij.norm() <= DEGENERACY_GAP * scale * col_norm.max(1.0) {
                            continue;
                        }
                        return Ok(None);
                    }
                    let v = -gij / gap;
                    if v.norm() > MAX_COUPLING * col_norm.max(1.0) {
                        return Ok(None);
                    }
                    y[(i, j)] = v;
                }
            }
            w12 = &w1 * &y;
        }

        let w = blocks(w1.as_ref(), w12.as_ref(), zeros(n, n).as_ref(), w2.as_ref());
        let q: Vec<c64> = lam1.iter().chain(&lam2).map(|&l| c64::new(l.sqrt(), 0.0)).collect();
        let inv_q: Vec<c64> = q.iter().map(|z| z.inv()).collect();
        let v = crate::linalg::scale_cols((ops.c() * &w).as_ref(), &inv_q);
        Ok(Some(Self { w, v, q }))
    }
}
