//! Dataset validation. Errors make a dataset unusable; notes are
//! informational (consistency of the bundled hyperfine constants with the
//! known Cs 5d₅/₂ splitting, missing B constants, and the like).

use super::{AtomicDataset, LevelId, Species};
use crate::angular::HalfInt;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum ValidationIssue {
    Error(String),
    Note(String),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    /// Usable means no errors; notes are allowed.
    pub fn is_usable(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &str> {
        self.issues.iter().filter_map(|i| match i {
            ValidationIssue::Error(s) => Some(s.as_str()),
            _ => None,
        })
    }

    pub fn notes(&self) -> impl Iterator<Item = &str> {
        self.issues.iter().filter_map(|i| match i {
            ValidationIssue::Note(s) => Some(s.as_str()),
            _ => None,
        })
    }

    fn error(&mut self, msg: String) {
        self.issues.push(ValidationIssue::Error(msg));
    }

    fn note(&mut self, msg: String) {
        self.issues.push(ValidationIssue::Note(msg));
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for issue in &self.issues {
            match issue {
                ValidationIssue::Error(s) => writeln!(f, "error: {s}")?,
                ValidationIssue::Note(s) => writeln!(f, "note: {s}")?,
            }
        }
        Ok(())
    }
}

/// Expected Cs 5d5/2 f=6 ↔ f=5 hyperfine splitting (MHz) used as a
/// consistency anchor for bundled constants.
const CS_5D52_SPLITTING_MHZ: f64 = 127.0;
const CS_5D52_SPLITTING_TOL_MHZ: f64 = 3.0;

/// Validate a dataset; the report lists every violated invariant. Validation
/// is idempotent and read-only.
pub fn validate_dataset(ds: &AtomicDataset) -> ValidationReport {
    let mut report = ValidationReport::default();

    if ds.nuclear_spin != ds.species.nuclear_spin() {
        report.error(format!(
            "nuclear spin {} does not match species {} (expected {})",
            ds.nuclear_spin,
            ds.species,
            ds.species.nuclear_spin()
        ));
    }
    if ds.core_polarizability_a03 < 0.0 {
        report.error(format!(
            "core polarizability must be ≥ 0, got {}",
            ds.core_polarizability_a03
        ));
    }

    for t in &ds.transitions {
        if t.wavelength_nm <= 0.0 {
            report.error(format!(
                "{} → {}: wavelength must be positive",
                t.lower.key(),
                t.upper.key()
            ));
        }
        if t.dipole_ea0 < 0.0 {
            report.error(format!(
                "{} → {}: matrix element must be ≥ 0",
                t.lower.key(),
                t.upper.key()
            ));
        }
    }

    // Duplicate / contradictory ordering of the same unordered pair.
    for (i, t) in ds.transitions.iter().enumerate() {
        for u in &ds.transitions[i + 1..] {
            let same = (t.lower == u.lower && t.upper == u.upper)
                || (t.lower == u.upper && t.upper == u.lower);
            if same {
                report.error(format!(
                    "duplicate transition between {} and {}",
                    t.lower.key(),
                    t.upper.key()
                ));
            }
        }
    }

    let clock_upper = ds.species.clock_upper_level();
    if !ds.lifetimes.contains_key(clock_upper) {
        report.error(format!(
            "missing lifetime for clock upper level {clock_upper}"
        ));
    }
    for (level, tau) in &ds.lifetimes {
        if *tau <= 0.0 {
            report.error(format!("lifetime of {level} must be positive, got {tau}"));
        }
    }

    for (level, hf) in &ds.hyperfine {
        let parsed = LevelId::parse_key(ds.species, level);
        match parsed {
            None => report.error(format!(
                "hyperfine row references unparseable level `{level}`"
            )),
            Some(l) => {
                if l.j == HalfInt::from_twice(1) && hf.b_mhz != 0.0 {
                    report.error(format!(
                        "level {level} has j = 1/2 but nonzero quadrupole constant B"
                    ));
                }
            }
        }
    }

    // Consistency note: bundled Cs 5d5/2 constants against the known
    // f=6 ↔ f=5 splitting.
    if ds.species == Species::Cs {
        let level = LevelId::parse_key(Species::Cs, "5d5/2").unwrap();
        match ds.hyperfine_for(&level) {
            Some(hf) => {
                let e6 = ds
                    .hyperfine_energy_hz(&level, HalfInt::from_int(6))
                    .unwrap();
                let e5 = ds
                    .hyperfine_energy_hz(&level, HalfInt::from_int(5))
                    .unwrap();
                let split_mhz = (e6 - e5).abs() / 1e6;
                if (split_mhz - CS_5D52_SPLITTING_MHZ).abs() <= CS_5D52_SPLITTING_TOL_MHZ {
                    report.note(format!(
                        "5d5/2 hyperfine constants (A = {} MHz) give |Δ65| = {split_mhz:.1} MHz, \
                         consistent with the known 127 MHz splitting",
                        hf.a_mhz
                    ));
                } else {
                    report.note(format!(
                        "5d5/2 hyperfine constants give |Δ65| = {split_mhz:.1} MHz, which \
                         deviates from the known 127 ± {CS_5D52_SPLITTING_TOL_MHZ} MHz"
                    ));
                }
                if hf.b_mhz == 0.0 {
                    report.note("5d5/2 quadrupole constant B not provided, using 0".into());
                }
            }
            None => report.note("no 5d5/2 hyperfine constants; Zeeman maps unavailable".into()),
        }
    }

    report
}
