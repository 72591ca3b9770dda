//! Deep silicon grating against a gold plate, converted to a sphere force gradient.

use casimir_gratings::engine::CasimirEngine;
use casimir_gratings::lifshitz::sphere_gradient;
use casimir_gratings::materials::MaterialModel;
use casimir_gratings::scene::{GratingSpec, NumericsSpec, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let depth = 980e-9;
    let grating = GratingSpec::homogeneous(400e-9, 196e-9, depth, MaterialModel::silicon());
    let plate = GratingSpec::plane(MaterialModel::gold(), 400e-9);
    let numerics = NumericsSpec::default().with_truncation(13);
    for sep_nm in [150.0, 200.0, 250.0] {
        let scene = SceneSpec::new(grating.clone(), plate.clone(), sep_nm * 1e-9 + depth);
        let r = CasimirEngine::new(&scene, &numerics)?.pressure()?;
        let f_pp = -r.pressure;
        println!(
            "sep = {sep_nm} nm  F_pp = {f_pp:.4} N/m²  F' = {:.2} pN/µm  rho = {:.3}",
            sphere_gradient(f_pp, 50e-6) * 1e6,
            r.rho
        );
    }
    Ok(())
}
