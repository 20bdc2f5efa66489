//! Polarizability unit conversions.
//!
//! Internally every polarizability is an SI quantity (C·m²/V). Line lists and
//! the clock literature quote "volume" polarizabilities in Å³ or a0³, related
//! to SI by α_SI = 4πε0 · α_vol. Conversions happen only at I/O boundaries.

use crate::constants::CONSTANTS;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PolarizabilityUnit {
    /// Cubic ångström volume polarizability
    CubicAngstrom,
    /// Cubic Bohr radius volume polarizability
    CubicBohr,
    /// SI polarizability, C·m²/V
    Si,
}

impl PolarizabilityUnit {
    pub fn parse(s: &str) -> Result<Self, UnitError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a3" | "angstrom3" | "ang3" | "a^3" | "å3" | "å^3" => Ok(Self::CubicAngstrom),
            "a03" | "a0^3" | "bohr3" | "au" => Ok(Self::CubicBohr),
            "si" | "cm2/v" | "c·m²/v" => Ok(Self::Si),
            other => Err(UnitError::UnknownUnit(other.to_string())),
        }
    }

    /// Factor converting one unit of `self` to SI C·m²/V.
    fn to_si_factor(self) -> f64 {
        let four_pi_eps0 = 4.0 * std::f64::consts::PI * CONSTANTS.vacuum_permittivity;
        match self {
            // 1 Å³ = 1e-30 m³ of volume polarizability
            Self::CubicAngstrom => four_pi_eps0 * 1e-30,
            Self::CubicBohr => four_pi_eps0 * CONSTANTS.bohr_radius.powi(3),
            Self::Si => 1.0,
        }
    }
}

impl fmt::Display for PolarizabilityUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CubicAngstrom => write!(f, "Å³"),
            Self::CubicBohr => write!(f, "a0³"),
            Self::Si => write!(f, "C·m²/V"),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum UnitError {
    #[error("unknown polarizability unit `{0}`")]
    UnknownUnit(String),
}

/// Exact linear conversion between polarizability units.
///
/// Round-trips to 1e-12 relative by construction (two exact multiplies).
pub fn convert_polarizability(value: f64, from: PolarizabilityUnit, to: PolarizabilityUnit) -> f64 {
    if from == to {
        return value;
    }
    value * from.to_si_factor() / to.to_si_factor()
}

/// String-keyed variant for CLI use.
pub fn convert_polarizability_str(value: f64, from: &str, to: &str) -> Result<f64, UnitError> {
    Ok(convert_polarizability(
        value,
        PolarizabilityUnit::parse(from)?,
        PolarizabilityUnit::parse(to)?,
    ))
}

/// Convenience: Å³ → SI C·m²/V.
pub fn a3_to_si(alpha_a3: f64) -> f64 {
    convert_polarizability(
        alpha_a3,
        PolarizabilityUnit::CubicAngstrom,
        PolarizabilityUnit::Si,
    )
}

/// Convenience: SI C·m²/V → Å³.
pub fn si_to_a3(alpha_si: f64) -> f64 {
    convert_polarizability(
        alpha_si,
        PolarizabilityUnit::Si,
        PolarizabilityUnit::CubicAngstrom,
    )
}
