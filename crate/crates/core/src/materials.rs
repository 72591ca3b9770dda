//! Dielectric response on the imaginary frequency axis.
//!
//! Every model returns the real permittivity ε(iξ) for an imaginary
//! angular frequency ξ given in rad/s. On this axis causal, passive media
//! have ε real, at least one, and non-increasing in ξ.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::constants::{EV_TO_RAD_PER_S, SPEED_OF_LIGHT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("plasma model diverges at zero frequency")]
    PlasmaAtZeroFrequency,
    #[error("negative imaginary frequency {0} rad/s")]
    NegativeFrequency(f64),
    #[error("frequency {xi:e} rad/s outside tabulated range [{min:e}, {max:e}] and no asymptote declared")]
    TableOutOfRange { xi: f64, min: f64, max: f64 },
    #[error("invalid permittivity table: {0}")]
    InvalidTable(String),
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
}

/// One Lorentz oscillator term `strength · ω₀² / (ω₀² + ξ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub strength: f64,
    /// Resonance frequency, rad/s.
    pub omega0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    Vacuum,
    /// Lossless plasma model `1 + ω_p²/ξ²`, ω_p in rad/s.
    Plasma { omega_p: f64 },
    /// `ε_∞ + Σ_k s_k ω_k² / (ω_k² + ξ²)`.
    DrudeLorentz { eps_inf: f64, oscillators: Vec<Oscillator> },
    Table(Arc<PermittivityTable>),
}

impl MaterialModel {
    /// Gold as a plasma with ω_p = 9 eV.
    pub fn gold() -> Self {
        MaterialModel::Plasma {
            omega_p: 9.0 * EV_TO_RAD_PER_S,
        }
    }

    /// Intrinsic silicon, single-oscillator Drude–Lorentz form with
    /// ε₀ = 11.87, ε_∞ = 1.035, ω₀ = 4.34 eV.
    pub fn silicon() -> Self {
        Self::single_oscillator(11.87, 1.035, 4.34 * EV_TO_RAD_PER_S)
    }

    pub fn single_oscillator(eps_static: f64, eps_inf: f64, omega0: f64) -> Self {
        MaterialModel::DrudeLorentz {
            eps_inf,
            oscillators: vec![Oscillator {
                strength: eps_static - eps_inf,
                omega0,
            }],
        }
    }

    /// Named presets accepted by configuration files.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "vacuum" => Some(MaterialModel::Vacuum),
            "gold" | "au" => Some(Self::gold()),
            "silicon" | "si" => Some(Self::silicon()),
            _ => None,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        match self {
            MaterialModel::Vacuum => true,
            MaterialModel::Plasma { omega_p } => *omega_p == 0.0,
            MaterialModel::DrudeLorentz { eps_inf, oscillators } => {
                *eps_inf == 1.0 && oscillators.iter().all(|o| o.strength == 0.0)
            }
            MaterialModel::Table(_) => false,
        }
    }

    pub fn validate(&self) -> Result<(), MaterialError> {
        match self {
            MaterialModel::Vacuum => Ok(()),
            MaterialModel::Plasma { omega_p } => {
                if omega_p.is_finite() && *omega_p >= 0.0 {
                    Ok(())
                } else {
                    Err(MaterialError::InvalidParameter(format!("omega_p = {omega_p}")))
                }
            }
            MaterialModel::DrudeLorentz { eps_inf, oscillators } => {
                if !(eps_inf.is_finite() && *eps_inf >= 1.0) {
                    return Err(MaterialError::InvalidParameter(format!("eps_inf = {eps_inf} < 1")));
                }
                for o in oscillators {
                    if !(o.strength >= 0.0 && o.omega0 > 0.0) {
                        return Err(MaterialError::InvalidParameter(format!("{o:?}")));
                    }
                }
                Ok(())
            }
            MaterialModel::Table(_) => Ok(()),
        }
    }

    /// ε(iξ) with ξ in rad/s.
    pub fn permittivity(&self, xi: f64) -> Result<f64, MaterialError> {
        if xi < 0.0 {
            return Err(MaterialError::NegativeFrequency(xi));
        }
        match self {
            MaterialModel::Vacuum => Ok(1.0),
            MaterialModel::Plasma { omega_p } => {
                if xi == 0.0 {
                    if *omega_p == 0.0 {
                        return Ok(1.0);
                    }
                    return Err(MaterialError::PlasmaAtZeroFrequency);
                }
                Ok(1.0 + (omega_p / xi).powi(2))
            }
            MaterialModel::DrudeLorentz { eps_inf, oscillators } => Ok(oscillators
                .iter()
                .fold(*eps_inf, |acc, o| {
                    let w2 = o.omega0 * o.omega0;
                    acc + o.strength * w2 / (w2 + xi * xi)
                })),
            MaterialModel::Table(t) => t.evaluate(xi),
        }
    }

    /// ε evaluated at a reduced imaginary frequency in rad/m (ξ/c).
    pub fn permittivity_at_wavenumber(&self, xi_per_m: f64) -> Result<f64, MaterialError> {
        self.permittivity(xi_per_m * SPEED_OF_LIGHT)
    }
}

impl fmt::Display for MaterialModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaterialModel::Vacuum => write!(f, "vacuum"),
            MaterialModel::Plasma { omega_p } => {
                write!(f, "plasma(ω_p = {:.4} eV)", omega_p / EV_TO_RAD_PER_S)
            }
            MaterialModel::DrudeLorentz { eps_inf, oscillators } => {
                write!(f, "drude-lorentz(ε_∞ = {eps_inf}, {} oscillator(s))", oscillators.len())
            }
            MaterialModel::Table(t) => write!(f, "table({} points)", t.xi.len()),
        }
    }
}

/// Tabulated ε(iξ), interpolated linearly in log ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct PermittivityTable {
    xi: Vec<f64>,
    eps: Vec<f64>,
    /// Declared static permittivity; enables evaluation below the first sample.
    pub static_limit: Option<f64>,
    /// Declares ε → 1 above the last sample with a ξ⁻² tail.
    pub vacuum_tail: bool,
}

impl PermittivityTable {
    pub fn new(xi: Vec<f64>, eps: Vec<f64>) -> Result<Self, MaterialError> {
        if xi.len() != eps.len() {
            return Err(MaterialError::InvalidTable("column length mismatch".into()));
        }
        if xi.len() < 2 {
            return Err(MaterialError::InvalidTable("need at least two samples".into()));
        }
        if xi[0] <= 0.0 {
            return Err(MaterialError::InvalidTable("frequencies must be positive".into()));
        }
        for w in xi.windows(2) {
            if w[1] <= w[0] {
                return Err(MaterialError::InvalidTable(format!(
                    "frequencies not strictly increasing at {:e}",
                    w[1]
                )));
            }
        }
        for (i, &e) in eps.iter().enumerate() {
            if !(e >= 1.0) {
                return Err(MaterialError::InvalidTable(format!("ε = {e} < 1 at row {i}")));
            }
        }
        for w in eps.windows(2) {
            if w[1] > w[0] {
                return Err(MaterialError::InvalidTable(
                    "ε(iξ) must be non-increasing in ξ".into(),
                ));
            }
        }
        Ok(Self {
            xi,
            eps,
            static_limit: None,
            vacuum_tail: false,
        })
    }

    pub fn with_asymptotes(
        mut self,
        static_limit: Option<f64>,
        vacuum_tail: bool,
    ) -> Result<Self, MaterialError> {
        if let Some(e0) = static_limit {
            if e0 < self.eps[0] {
                return Err(MaterialError::InvalidTable(format!(
                    "static limit {e0} below first tabulated value {}",
                    self.eps[0]
                )));
            }
        }
        self.static_limit = static_limit;
        self.vacuum_tail = vacuum_tail;
        Ok(self)
    }

    /// Parses the two-column text format: `ξ[rad/s] ε`, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, MaterialError> {
        let mut xi = Vec::new();
        let mut eps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(MaterialError::InvalidTable(format!(
                    "line {}: expected 2 columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    MaterialError::InvalidTable(format!("line {}: {e}", lineno + 1))
                })
            };
            xi.push(parse(cols[0])?);
            eps.push(parse(cols[1])?);
        }
        Self::new(xi, eps)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, MaterialError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            MaterialError::InvalidTable(format!("{}: {e}", path.as_ref().display()))
        })?;
        Self::parse(&text)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xi[0], *self.xi.last().unwrap())
    }

    fn evaluate(&self, xi: f64) -> Result<f64, MaterialError> {
        let (min, max) = self.range();
        if xi < min {
            return match self.static_limit {
                // linear in ξ between (0, ε₀) and the first sample
                Some(e0) => Ok(e0 + (self.eps[0] - e0) * xi / min),
                None => Err(MaterialError::TableOutOfRange { xi, min, max }),
            };
        }
        if xi > max {
            let last = *self.eps.last().unwrap();
            return if self.vacuum_tail {
                Ok(1.0 + (last - 1.0) * (max / xi).powi(2))
            } else {
                Err(MaterialError::TableOutOfRange { xi, min, max })
            };
        }
        let j = self.xi.partition_point(|&x| x <= xi).clamp(1, self.xi.len() - 1);
        let (x0, x1) = (self.xi[j - 1].ln(), self.xi[j].ln());
        let t = (xi.ln() - x0) / (x1 - x0);
        Ok(self.eps[j - 1] + t * (self.eps[j] - self.eps[j - 1]))
    }
}
