//! Layer propagation by repeated matrix exponentials, for points where the
//! eigenmode basis of the corrugation is unusable.

use super::modal::LayerOperators;
use super::reflection::right_divide;
use super::GratingError;
use crate::linalg::{blocks, expm, zeros, CMat};

/// Largest `q δ` allowed within one slice.
const MAX_SLICE_EXPONENT: f64 = 2.0;

/// Carries the admittance `h = Y e` from the substrate up through a layer of thickness `depth`.
pub(crate) fn top_admittance(ops: &LayerOperators, eps_max: f64, depth: f64, y_sub: &CMat) -> Result<CMat, GratingError> {
    let p = ops.point;
    let alpha_max = ops.alphas.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let q_max = (eps_max * p.xi * p.xi + p.kz * p.kz + alpha_max * alpha_max).sqrt();
    let slices = ((q_max * depth / MAX_SLICE_EXPONENT).ceil() as usize).max(1);
    let delta = depth / slices as f64;

    let (b, c) = (ops.b(), ops.c());
    let n = b.nrows();
    let z = zeros(n, n);
    let m = blocks(z.as_ref(), b.as_ref(), c.as_ref(), z.as_ref()) * faer::Scale(faer::c64::new(delta, 0.0));
    let t = expm(m.as_ref());
    let t11 = t.as_ref().submatrix(0, 0, n, n);
    let t12 = t.as_ref().submatrix(0, n, n, n);
    let t21 = t.as_ref().submatrix(n, 0, n, n);
    let t22 = t.as_ref().submatrix(n, n, n, n);

    let mut y = y_sub.clone();
    for _ in 0..slices {
        let num = t21 + t22 * &y;
        let den = t11 + t12 * &y;
        y = right_divide(&num, &den)?;
    }
    Ok(y)
}
