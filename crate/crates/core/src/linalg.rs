//! Small dense helpers on top of faer.

use faer::linalg::solvers::PartialPivLu;
use faer::{c64, Mat, MatRef};

pub type CMat = Mat<c64>;

pub fn zeros(r: usize, c: usize) -> CMat {
    Mat::zeros(r, c)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn real_diag(d: &[f64]) -> CMat {
    let n = d.len();
    Mat::from_fn(n, n, |i, j| if i == j { c64::new(d[i], 0.0) } else { c64::new(0.0, 0.0) })
}

/// `diag(d) · m`
pub fn scale_rows(d: &[c64], m: MatRef<'_, c64>) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)])
}

/// `m · diag(d)`
pub fn scale_cols(m: MatRef<'_, c64>, d: &[c64]) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[j])
}

/// Assemble a 2×2 block matrix from equally sized square blocks.
pub fn blocks(b11: MatRef<'_, c64>, b12: MatRef<'_, c64>, b21: MatRef<'_, c64>, b22: MatRef<'_, c64>) -> CMat {
    let n = b11.nrows();
    Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => b11[(i, j)],
        (true, false) => b12[(i, j - n)],
        (false, true) => b21[(i - n, j)],
        (false, false) => b22[(i - n, j - n)],
    })
}

pub fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut v: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            v = v.max(m[(i, j)].norm());
        }
    }
    v
}

pub fn norm1(m: MatRef<'_, c64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Ratio of the smallest to the largest pivot magnitude; a cheap conditioning proxy.
pub fn pivot_ratio(lu: &PartialPivLu<c64>) -> f64 {
    let u = lu.U();
    let n = u.nrows().min(u.ncols());
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let a = u[(i, i)].norm();
        lo = lo.min(a);
        hi = hi.max(a);
    }
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}

/// Complex logarithm of the determinant of an LU-factorized matrix.
///
/// Returns (ln|det|, arg det) with the phase wrapped to (-π, π].
pub fn log_det(lu: &PartialPivLu<c64>) -> (f64, f64) {
    let u = lu.U();
    let n = u.nrows();
    let mut log_abs = 0.0;
    let mut phase = 0.0;
    for i in 0..n {
        let z = u[(i, i)];
        log_abs += z.norm().ln();
        phase += z.arg();
    }
    let (fwd, _) = lu.P().arrays();
    if permutation_is_odd(fwd) {
        phase += std::f64::consts::PI;
    }
    (log_abs, wrap_phase(phase))
}

fn wrap_phase(p: f64) -> f64 {
    use std::f64::consts::PI;
    let w = (p + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

/// Matrix exponential by scaling and squaring with a degree-16 Taylor core.
pub fn expm(a: MatRef<'_, c64>) -> CMat {
    let n = a.nrows();
    let norm = norm1(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let a_s = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);
    // Horner form of Σ A^k / k!
    let mut acc = identity(n);
    for k in (1..=16).rev() {
        let mut next = &a_s * &acc;
        let inv_k = 1.0 / k as f64;
        for j in 0..n {
            for i in 0..n {
                next[(i, j)] *= inv_k;
            }
            next[(j, j)] += c64::new(1.0, 0.0);
        }
        acc = next;
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_det_matches_determinant() {
        let m = Mat::from_fn(5, 5, |i, j| {
            c64::new(((i * 7 + j * 3) % 5) as f64 - 1.5, ((i + 2 * j) % 3) as f64 * 0.3)
        });
        let det = m.as_ref().determinant();
        let (la, ph) = log_det(&m.partial_piv_lu());
        assert!((la - det.norm().ln()).abs() < 1e-12);
        assert!((ph - det.arg()).abs() < 1e-12);
    }

    #[test]
    fn log_det_sign_from_permutation() {
        // det = -1 via a single row swap
        let m = Mat::from_fn(2, 2, |i, j| if i != j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) });
        let (la, ph) = log_det(&m.partial_piv_lu());
        assert!(la.abs() < 1e-15);
        assert!((ph.abs() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn expm_of_diagonal_and_rotation() {
        let d = real_diag(&[0.3, -2.0, 5.0]);
        let e = expm(d.as_ref());
        for (i, v) in [0.3f64, -2.0, 5.0].iter().enumerate() {
            assert!((e[(i, i)].re - v.exp()).abs() < 1e-13 * v.exp());
        }
        let t = 2.5;
        let rot = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c64::new(-t, 0.0),
            (1, 0) => c64::new(t, 0.0),
            _ => c64::new(0.0, 0.0),
        });
        let e = expm(rot.as_ref());
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-13);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-13);
    }
}
