//! Flat silicon plates through the grating engine and through the Lifshitz formula.

use casimir_gratings::engine::pressure;
use casimir_gratings::lifshitz::lifshitz_pressure;
use casimir_gratings::materials::MaterialModel;
use casimir_gratings::scene::{GratingSpec, NumericsSpec, SceneSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let si = MaterialModel::silicon();
    let d = 200e-9;
    let numerics = NumericsSpec::default().with_truncation(5);
    for l_nm in [150.0, 250.0, 500.0] {
        let l = l_nm * 1e-9;
        let scene = SceneSpec::new(GratingSpec::plane(si.clone(), d), GratingSpec::plane(si.clone(), d), l);
        let engine = pressure(&scene, &numerics)?;
        let exact = lifshitz_pressure(l, &si, &si)?;
        println!(
            "L = {l_nm} nm: engine {:.8e} N/m², Lifshitz {:.8e} N/m², relative {:.1e}",
            engine.pressure,
            exact.pressure,
            ((engine.pressure - exact.pressure) / exact.pressure).abs()
        );
    }
    Ok(())
}
