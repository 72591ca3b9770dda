//! Lifshitz pressure for ε = 10⁸ plates against the perfect-mirror result.

use casimir_gratings::constants::ideal_casimir_pressure;
use casimir_gratings::lifshitz::lifshitz_pressure;
use casimir_gratings::materials::MaterialModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mirror = MaterialModel::DrudeLorentz {
        eps_inf: 1e8,
        oscillators: vec![],
    };
    println!("{:>8} {:>14} {:>14} {:>10}", "L (µm)", "P (N/m²)", "ideal", "ratio");
    for l_um in [0.1, 0.3, 1.0, 3.0, 10.0] {
        let l = l_um * 1e-6;
        let p = lifshitz_pressure(l, &mirror, &mirror)?.pressure;
        let ideal = ideal_casimir_pressure(l);
        println!("{l_um:>8} {p:>14.6e} {ideal:>14.6e} {:>10.6}", p / ideal);
    }
    Ok(())
}
