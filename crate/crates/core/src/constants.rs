//! Physical constants (CODATA 2018 exact / recommended values).

/// Read-only bundle of the constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light in vacuum, m/s.
    pub c: f64,
    /// Angular frequency corresponding to a photon energy of 1 eV, rad/s.
    pub ev_to_rad_per_s: f64,
}

pub const HBAR: f64 = 1.054_571_817e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge, C.
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const EV_TO_RAD_PER_S: f64 = ELEMENTARY_CHARGE / HBAR;

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    c: SPEED_OF_LIGHT,
    ev_to_rad_per_s: EV_TO_RAD_PER_S,
};

/// ħc in J·m.
pub const HBAR_C: f64 = HBAR * SPEED_OF_LIGHT;

/// Pressure between two perfect mirrors at separation `l` (m), negative = attractive.
pub fn ideal_casimir_pressure(l: f64) -> f64 {
    -std::f64::consts::PI.powi(2) * HBAR_C / (240.0 * l.powi(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_conversion() {
        assert!((EV_TO_RAD_PER_S / 1.519_267_448_8e15 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ideal_pressure_at_one_micron() {
        // ~1.3 mPa
        let p = ideal_casimir_pressure(1e-6);
        assert!((p + 1.3002e-3).abs() < 1e-6, "{p}");
    }
}
