//! Reflection matrices of single gratings and flat surfaces.
//!
//! Amplitude vectors hold the `E_z` coefficients of all orders followed by the
//! `H_z` coefficients. In a uniform medium a mode `e^{σγy}` with unit `E_z`
//! or unit `H_z` has the tangential profile below (`D = ξ²ε + k_z²`):
//!
//! ```text
//!          unit E_z        unit H_z
//! E_z      1               0
//! E_x      k_z α / D       σ γ ξ / D
//! H_z      0               1
//! H_x     -σ γ ξ ε / D     k_z α / D
//! ```
//!
//! Incoming waves are `σ = +1` (decaying towards the surface from above) and
//! outgoing ones `σ = -1`; both are referenced to the grating top.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef};

use super::modal::{LayerModes, LayerOperators};
use super::sliced;
use super::toeplitz::fourier_lamellar;
use super::{GratingError, SpectralPoint};
use crate::lifshitz::{self, FresnelPair};
use crate::linalg::{blocks, pivot_ratio, scale_rows, zeros, CMat};
use crate::materials::MaterialModel;
use crate::scene::{GratingSpec, ProfileKind};

/// Reflection matrix in the `(E_z, H_z)` amplitude basis, dimension `2(2N+1)`.
#[derive(Debug, Clone)]
pub struct ReflectionMatrix {
    pub matrix: CMat,
    pub point: SpectralPoint,
    /// Height of the reference plane above the substrate surface.
    pub reference_height: f64,
}

impl ReflectionMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Block `(out, in)` with 0 = E_z, 1 = H_z.
    pub fn block(&self, out: usize, inc: usize) -> MatRef<'_, c64> {
        let n = self.point.orders();
        self.matrix.as_ref().submatrix(out * n, inc * n, n, n)
    }

    /// The same response referenced to the plane at `height`.
    pub fn rereferenced(&self, height: f64) -> Self {
        let g = self.point.gammas(1.0);
        let d: Vec<c64> = g
            .iter()
            .chain(&g)
            .map(|&g| c64::new((g * (self.reference_height - height)).exp(), 0.0))
            .collect();
        let m = scale_rows(&d, self.matrix.as_ref());
        Self {
            matrix: crate::linalg::scale_cols(m.as_ref(), &d),
            point: self.point,
            reference_height: height,
        }
    }
}

/// How the corrugated layer is propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayerSolver {
    /// Analytic for flat profiles, eigenmodes otherwise, slicing if the modes degenerate.
    #[default]
    Auto,
    Modal,
    Sliced,
}

/// Tangential profiles `(E, H)` of the uniform-medium modes travelling as `e^{σγy}`.
pub fn uniform_modes(point: &SpectralPoint, eps: f64, sigma: f64) -> (CMat, CMat) {
    let n = point.orders();
    let SpectralPoint { xi, kz, .. } = *point;
    let alphas = point.alphas();
    let gammas = point.gammas(eps);
    let d = xi * xi * eps + kz * kz;
    let diag = |f: &dyn Fn(usize) -> f64| {
        Mat::from_fn(n, n, |i, j| if i == j { c64::new(f(i), 0.0) } else { c64::new(0.0, 0.0) })
    };
    let one = diag(&|_| 1.0);
    let zero = zeros(n, n);
    let mix = diag(&|i| kz * alphas[i] / d);
    let e_from_h = diag(&|i| sigma * gammas[i] * xi / d);
    let h_from_e = diag(&|i| -sigma * gammas[i] * xi * eps / d);
    let e = blocks(one.as_ref(), zero.as_ref(), mix.as_ref(), e_from_h.as_ref());
    let h = blocks(zero.as_ref(), one.as_ref(), h_from_e.as_ref(), mix.as_ref());
    (e, h)
}

/// `H E⁻¹` of the modes decaying into a substrate below (`σ = +1`).
fn substrate_admittance(point: &SpectralPoint, eps: f64) -> CMat {
    let n = point.orders();
    let SpectralPoint { xi, kz, .. } = *point;
    let alphas = point.alphas();
    let gammas = point.gammas(eps);
    let mut y = zeros(2 * n, 2 * n);
    for i in 0..n {
        let (a, g) = (alphas[i], gammas[i]);
        let s = 1.0 / (g * xi);
        y[(i, i)] = c64::new(-kz * a * s, 0.0);
        y[(i, n + i)] = c64::new((xi * xi * eps + kz * kz) * s, 0.0);
        y[(n + i, i)] = c64::new(-(xi * xi * eps + a * a) * s, 0.0);
        y[(n + i, n + i)] = c64::new(kz * a * s, 0.0);
    }
    y
}

/// `a · b⁻¹`
pub(crate) fn right_divide(a: &CMat, b: &CMat) -> Result<CMat, GratingError> {
    let bt = b.transpose().to_owned();
    let lu = bt.partial_piv_lu();
    let ratio = pivot_ratio(&lu);
    if ratio < 1e-15 {
        return Err(GratingError::IllConditionedMatching(ratio));
    }
    Ok(lu.solve(a.transpose().to_owned()).transpose().to_owned())
}

/// Vacuum above a surface with tangential admittance `y` (`h = y e`) at the reference plane.
fn reflection_from_admittance(point: &SpectralPoint, y: &CMat) -> Result<CMat, GratingError> {
    let (e_in, h_in) = uniform_modes(point, 1.0, 1.0);
    let (e_out, h_out) = uniform_modes(point, 1.0, -1.0);
    let lhs = y * &e_out - &h_out;
    let rhs = &h_in - y * &e_in;
    let lu = lhs.partial_piv_lu();
    let ratio = pivot_ratio(&lu);
    if ratio < 1e-15 {
        return Err(GratingError::IllConditionedMatching(ratio));
    }
    Ok(lu.solve(&rhs))
}

/// Admittance at the top of the layer from its eigenmodes and the substrate admittance.
fn modal_admittance(modes: &LayerModes, y_sub: &CMat, depth: f64) -> Result<CMat, GratingError> {
    let LayerModes { w, v, q } = modes;
    let x: Vec<c64> = q.iter().map(|q| (-q * depth).exp()).collect();
    let ysw = y_sub * w;
    let lu = (&ysw + v).partial_piv_lu();
    let ratio = pivot_ratio(&lu);
    if ratio < 1e-15 {
        return Err(GratingError::IllConditionedMatching(ratio));
    }
    let f = lu.solve(v - &ysw);
    let xfx = Mat::from_fn(f.nrows(), f.ncols(), |i, j| x[i] * f[(i, j)] * x[j]);
    let u = w + w * &xfx;
    let z = v - v * &xfx;
    right_divide(&z, &u)
}

/// Reflection matrix of a grating, referenced to its top plane.
pub fn reflection_matrix(grating: &GratingSpec, point: SpectralPoint) -> Result<ReflectionMatrix, GratingError> {
    reflection_matrix_with(grating, point, LayerSolver::Auto)
}

pub fn reflection_matrix_with(
    grating: &GratingSpec,
    point: SpectralPoint,
    solver: LayerSolver,
) -> Result<ReflectionMatrix, GratingError> {
    if !(point.xi > 0.0 && point.xi.is_finite()) {
        return Err(GratingError::NonPositiveFrequency(point.xi));
    }
    if solver == LayerSolver::Auto {
        match grating.kind() {
            ProfileKind::Bare => {
                let mut r = plane_reflection_matrix(&grating.substrate, point)?;
                if grating.depth > 0.0 {
                    r = r.rereferenced(grating.depth);
                }
                return Ok(r);
            }
            ProfileKind::Slab => {
                return slab_reflection_matrix(&grating.bar, grating.depth, &grating.substrate, point);
            }
            ProfileKind::Lamellar => {}
        }
    }
    let eps_sub = grating.substrate.permittivity_at_wavenumber(point.xi)?;
    let y_sub = substrate_admittance(&point, eps_sub);
    let y_top = if grating.depth > 0.0 {
        let eps_bar = grating.bar.permittivity_at_wavenumber(point.xi)?;
        let centre = -grating.lateral_shift / grating.period;
        let toeplitz = fourier_lamellar(eps_bar, grating.fill_fraction(), point.truncation, centre);
        let ops = LayerOperators::new(&toeplitz, point)?;
        let modes = match solver {
            LayerSolver::Sliced => None,
            _ => LayerModes::solve(&ops)?,
        };
        match modes {
            Some(m) => modal_admittance(&m, &y_sub, grating.depth)?,
            None => sliced::top_admittance(&ops, eps_bar.max(1.0), grating.depth, &y_sub)?,
        }
    } else {
        y_sub
    };
    Ok(ReflectionMatrix {
        matrix: reflection_from_admittance(&point, &y_top)?,
        point,
        reference_height: grating.depth,
    })
}

/// Per-order map from `(E_z, H_z)` amplitudes to (TE, TM) amplitudes and back.
/// Returns the 2×2 matrix for direction `sigma`, rows `(E_z, H_z)`, columns (TE, TM).
fn polarization_basis(alpha: f64, kz: f64, gamma: f64, xi: f64, sigma: f64) -> [[f64; 2]; 2] {
    let k = (alpha * alpha + kz * kz).sqrt();
    let (c, s) = if k == 0.0 { (1.0, 0.0) } else { (alpha / k, kz / k) };
    let g = gamma / xi;
    [[-c, -sigma * g * s], [sigma * g * s, -c]]
}

fn flat_matrix(point: SpectralPoint, reference_height: f64, coeffs: impl Fn(f64) -> Result<FresnelPair, GratingError>) -> Result<ReflectionMatrix, GratingError> {
    let n = point.orders();
    let alphas = point.alphas();
    let gammas = point.gammas(1.0);
    let mut m = zeros(2 * n, 2 * n);
    for i in 0..n {
        let (a, g) = (alphas[i], gammas[i]);
        let k_par = (a * a + point.kz * point.kz).sqrt();
        let r = coeffs(k_par)?;
        let p_out = polarization_basis(a, point.kz, g, point.xi, -1.0);
        let p_in = polarization_basis(a, point.kz, g, point.xi, 1.0);
        let det = p_in[0][0] * p_in[1][1] - p_in[0][1] * p_in[1][0];
        let inv = [[p_in[1][1] / det, -p_in[0][1] / det], [-p_in[1][0] / det, p_in[0][0] / det]];
        let d = [r.r_te, r.r_tm];
        for (row, out) in [(0, i), (1, n + i)] {
            for (col, inc) in [(0, i), (1, n + i)] {
                let v: f64 = (0..2).map(|p| p_out[row][p] * d[p] * inv[p][col]).sum();
                m[(out, inc)] = c64::new(v, 0.0);
            }
        }
    }
    Ok(ReflectionMatrix {
        matrix: m,
        point,
        reference_height,
    })
}

/// Reflection matrix of a flat half-space: Fresnel coefficients, rotated into the `(E_z, H_z)` basis.
pub fn plane_reflection_matrix(material: &MaterialModel, point: SpectralPoint) -> Result<ReflectionMatrix, GratingError> {
    if !(point.xi > 0.0 && point.xi.is_finite()) {
        return Err(GratingError::NonPositiveFrequency(point.xi));
    }
    let eps = material.permittivity_at_wavenumber(point.xi)?;
    flat_matrix(point, 0.0, |k| fresnel(point.xi, k, eps))
}

/// Reflection matrix of a uniform slab on a substrate, referenced to the slab top.
pub fn slab_reflection_matrix(
    slab: &MaterialModel,
    thickness: f64,
    substrate: &MaterialModel,
    point: SpectralPoint,
) -> Result<ReflectionMatrix, GratingError> {
    if !(point.xi > 0.0 && point.xi.is_finite()) {
        return Err(GratingError::NonPositiveFrequency(point.xi));
    }
    let e1 = slab.permittivity_at_wavenumber(point.xi)?;
    let e2 = substrate.permittivity_at_wavenumber(point.xi)?;
    flat_matrix(point, thickness, |k| {
        lifshitz::slab_reflection(point.xi, k, e1, thickness, e2).map_err(|_| GratingError::NonPositiveFrequency(point.xi))
    })
}

fn fresnel(xi: f64, k: f64, eps: f64) -> Result<FresnelPair, GratingError> {
    lifshitz::fresnel(xi, k, eps).map_err(|_| GratingError::NonPositiveFrequency(xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn silicon() -> MaterialModel {
        MaterialModel::silicon()
    }

    fn assert_close(a: &CMat, b: &CMat, tol: f64) {
        let scale = max_abs(b.as_ref()).max(1e-300);
        let diff = max_abs((a - b).as_ref());
        assert!(diff <= tol * scale, "difference {diff:e} relative {:e}", diff / scale);
    }

    fn point(n: usize) -> SpectralPoint {
        SpectralPoint::new(8e6, 3e6, 5e6, 4e-7, n)
    }

    #[test]
    fn uniform_modes_are_eigenvectors_of_m() {
        let n = 2;
        let p = point(n);
        let eps = 4.5;
        let t = fourier_lamellar(eps, 1.0, n, 0.0);
        let m = super::super::build_m(&t, p).unwrap().m;
        let gammas = p.gammas(eps);
        for sigma in [1.0, -1.0] {
            let (e, h) = uniform_modes(&p, eps, sigma);
            let stacked = Mat::from_fn(4 * (2 * n + 1), 2 * (2 * n + 1), |i, j| {
                if i < 2 * (2 * n + 1) {
                    e[(i, j)]
                } else {
                    h[(i - 2 * (2 * n + 1), j)]
                }
            });
            let lhs = &m * &stacked;
            for j in 0..stacked.ncols() {
                let g = sigma * gammas[j % (2 * n + 1)];
                for i in 0..stacked.nrows() {
                    let r = (lhs[(i, j)] - stacked[(i, j)] * g).norm();
                    assert!(r < 1e-9 * g.abs(), "σ={sigma} ({i},{j}) residual {r:e}");
                }
            }
        }
    }

    #[test]
    fn bare_surface_matches_fresnel_matrix() {
        for kz in [0.0, 5e6] {
            let p = SpectralPoint { kz, ..point(3) };
            let g = GratingSpec::plane(silicon(), p.period);
            let modal = reflection_matrix_with(&g, p, LayerSolver::Modal).unwrap();
            let analytic = plane_reflection_matrix(&silicon(), p).unwrap();
            assert_close(&modal.matrix, &analytic.matrix, 1e-10);
        }
    }

    #[test]
    fn normal_plane_decouples_polarizations() {
        let p = SpectralPoint { kz: 0.0, ..point(3) };
        let r = plane_reflection_matrix(&silicon(), p).unwrap();
        assert!(max_abs(r.block(0, 1)) == 0.0 && max_abs(r.block(1, 0)) == 0.0);
        let eps = silicon().permittivity_at_wavenumber(p.xi).unwrap();
        for (i, a) in p.alphas().iter().enumerate() {
            let f = lifshitz::fresnel(p.xi, a.abs(), eps).unwrap();
            assert!((r.block(0, 0)[(i, i)].re - f.r_te).abs() < 1e-14);
            assert!((r.block(1, 1)[(i, i)].re - f.r_tm).abs() < 1e-14);
        }
    }

    #[test]
    fn filled_corrugation_equals_plane() {
        let p = point(4);
        let g = GratingSpec::homogeneous(p.period, 0.0, 6e-8, silicon());
        let modal = reflection_matrix_with(&g, p, LayerSolver::Modal).unwrap();
        let analytic = plane_reflection_matrix(&silicon(), p).unwrap();
        assert_close(&modal.matrix, &analytic.matrix, 1e-8);
    }

    #[test]
    fn empty_corrugation_is_recessed_plane() {
        let p = point(4);
        let mut g = GratingSpec::homogeneous(p.period, p.period, 6e-8, silicon());
        g.bar = silicon();
        let modal = reflection_matrix_with(&g, p, LayerSolver::Modal).unwrap();
        let analytic = plane_reflection_matrix(&silicon(), p).unwrap().rereferenced(6e-8);
        assert_close(&modal.matrix, &analytic.matrix, 1e-8);
    }

    #[test]
    fn slab_limit_matches_thin_film() {
        let p = point(3);
        let gold = MaterialModel::gold();
        let g = GratingSpec::lamellar(p.period, 0.0, 4e-8, silicon(), gold.clone());
        let modal = reflection_matrix_with(&g, p, LayerSolver::Modal).unwrap();
        let analytic = slab_reflection_matrix(&silicon(), 4e-8, &gold, p).unwrap();
        assert_close(&modal.matrix, &analytic.matrix, 1e-8);
    }

    #[test]
    fn vacuum_bars_reflect_like_recessed_substrate() {
        let p = point(3);
        let g = GratingSpec::lamellar(p.period, 1.5e-7, 5e-8, MaterialModel::Vacuum, silicon());
        let modal = reflection_matrix_with(&g, p, LayerSolver::Modal).unwrap();
        let analytic = reflection_matrix(&g, p).unwrap();
        assert_close(&modal.matrix, &analytic.matrix, 1e-8);
    }

    #[test]
    fn sliced_and_modal_agree() {
        let p = point(3);
        let g = GratingSpec::homogeneous(p.period, 2e-7, 8e-8, silicon());
        let modal = reflection_matrix_with(&g, p, LayerSolver::Modal).unwrap();
        let sliced = reflection_matrix_with(&g, p, LayerSolver::Sliced).unwrap();
        assert_close(&modal.matrix, &sliced.matrix, 1e-7);
    }

    #[test]
    fn lateral_shift_is_a_phase_similarity() {
        let p = point(3);
        let g = GratingSpec::homogeneous(p.period, 1.6e-7, 8e-8, silicon());
        let s = 0.13 * p.period;
        let r0 = reflection_matrix(&g, p).unwrap();
        let rs = reflection_matrix(&g.clone().with_shift(s), p).unwrap();
        let phi = super::super::shift_phases(&p, s);
        let expect = Mat::from_fn(r0.dim(), r0.dim(), |i, j| phi[i] * r0.matrix[(i, j)] * phi[j].conj());
        assert_close(&rs.matrix, &expect, 1e-9);
    }

    #[test]
    fn rejects_non_positive_frequency() {
        let g = GratingSpec::homogeneous(4e-7, 2e-7, 8e-8, silicon());
        let p = SpectralPoint { xi: 0.0, ..point(2) };
        assert!(matches!(reflection_matrix(&g, p), Err(GratingError::NonPositiveFrequency(_))));
    }
}
