//! Exact force over the proximity-force estimate for two silicon gratings at L = 250 nm.

use casimir_gratings::engine::CasimirEngine;
use casimir_gratings::materials::MaterialModel;
use casimir_gratings::scene::{GratingSpec, NumericsSpec, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let si = MaterialModel::silicon();
    for (d_nm, n) in [(30.0, 5), (50.0, 7), (100.0, 9), (200.0, 11), (400.0, 15)] {
        let d = d_nm * 1e-9;
        let g = GratingSpec::homogeneous(d, 0.5 * d, 100e-9, si.clone());
        let scene = SceneSpec::new(g.clone(), g, 250e-9);
        let r = CasimirEngine::new(&scene, &NumericsSpec::default().with_truncation(n))?.pressure()?;
        println!(
            "d = {d_nm:>5} nm  N = {n:>2}  F = {:.5e} N/m²  F_pfa = {:.5e} N/m²  rho = {:.4}",
            -r.pressure, -r.pfa_pressure, r.rho
        );
    }
    Ok(())
}
