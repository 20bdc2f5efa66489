//! Physical constants (CODATA 2018) and the unit conversions derived from them.
//!
//! Everything downstream works in SI. The only non-SI quantity kept around is
//! the reduced dipole matrix element, which is stored in atomic units (e·a0)
//! because that is how line lists tabulate it.

/// Fundamental constants in SI units.
///
/// Bundled as a struct rather than free consts so that computations can carry
/// an explicit, swappable constant set (useful for sensitivity checks in tests).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhysConstants {
    /// Planck constant h, J·s
    pub planck_h: f64,
    /// Reduced Planck constant ħ = h/2π, J·s
    pub hbar: f64,
    /// Speed of light in vacuum, m/s
    pub c: f64,
    /// Boltzmann constant, J/K
    pub k_b: f64,
    /// Bohr magneton, J/T
    pub bohr_magneton: f64,
    /// Elementary charge, C
    pub elementary_charge: f64,
    /// Bohr radius, m
    pub bohr_radius: f64,
    /// Vacuum permittivity ε0, C/(V·m)
    pub vacuum_permittivity: f64,
    /// Mass of ¹³³Cs, kg
    pub cs_mass: f64,
    /// Mass of ⁸⁷Rb, kg
    pub rb87_mass: f64,
}

impl PhysConstants {
    pub const fn codata2018() -> Self {
        PhysConstants {
            planck_h: 6.626_070_15e-34,
            hbar: 1.054_571_817_646_156e-34,
            c: 299_792_458.0,
            k_b: 1.380_649e-23,
            bohr_magneton: 9.274_010_078_3e-24,
            elementary_charge: 1.602_176_634e-19,
            bohr_radius: 5.291_772_109_03e-11,
            vacuum_permittivity: 8.854_187_812_8e-12,
            cs_mass: 2.206_946_95e-25,
            rb87_mass: 1.443_162_90e-25,
        }
    }

    /// Reduced dipole matrix element unit e·a0 in SI (C·m).
    pub fn ea0(&self) -> f64 {
        self.elementary_charge * self.bohr_radius
    }

    /// Photon recoil energy h²/(2mλ²) in J for an atom of mass `m` absorbing
    /// at vacuum wavelength `lambda_m`.
    pub fn recoil_energy(&self, mass_kg: f64, lambda_m: f64) -> f64 {
        self.planck_h * self.planck_h / (2.0 * mass_kg * lambda_m * lambda_m)
    }

    /// Check internal consistency; returns a list of violated invariants.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let fields = [
            ("planck_h", self.planck_h),
            ("hbar", self.hbar),
            ("c", self.c),
            ("k_b", self.k_b),
            ("bohr_magneton", self.bohr_magneton),
            ("elementary_charge", self.elementary_charge),
            ("bohr_radius", self.bohr_radius),
            ("vacuum_permittivity", self.vacuum_permittivity),
            ("cs_mass", self.cs_mass),
            ("rb87_mass", self.rb87_mass),
        ];
        for (name, v) in fields {
            if !(v > 0.0) {
                problems.push(format!("{name} must be strictly positive, got {v}"));
            }
        }
        let hbar_expect = self.planck_h / (2.0 * std::f64::consts::PI);
        if (self.hbar - hbar_expect).abs() > 1e-12 * hbar_expect {
            problems.push(format!(
                "hbar inconsistent with h/2π: {} vs {}",
                self.hbar, hbar_expect
            ));
        }
        problems
    }
}

impl Default for PhysConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

/// The default constant set used throughout the crate.
pub const CONSTANTS: PhysConstants = PhysConstants::codata2018();
