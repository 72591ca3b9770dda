//! The modal solver applied to flat profiles reproduces Fresnel-based reflection matrices.

use casimir_gratings::grating::{plane_reflection_matrix, reflection_matrix_with, LayerSolver, SpectralPoint};
use casimir_gratings::materials::MaterialModel;
use casimir_gratings::scene::GratingSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let si = MaterialModel::silicon();
    let d = 400e-9;
    let a = 80e-9;
    let point = SpectralPoint::new(2e7, 3e6, 5e6, d, 5);
    let plane = plane_reflection_matrix(&si, point)?;
    let cases = [
        ("filled corrugation", GratingSpec::homogeneous(d, 0.0, a, si.clone()), plane.clone()),
        ("empty corrugation", GratingSpec::homogeneous(d, d, a, si.clone()), plane.rereferenced(a)),
    ];
    for (name, grating, exact) in cases {
        let r = reflection_matrix_with(&grating, point, LayerSolver::Modal)?;
        let n = r.dim();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                err = err.max((r.matrix[(i, j)] - exact.matrix[(i, j)]).norm());
            }
        }
        println!("{name}: max |R_modal - R_fresnel| = {err:.2e}");
    }
    Ok(())
}
