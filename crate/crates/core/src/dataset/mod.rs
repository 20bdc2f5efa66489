//! Atomic-structure dataset: levels, E1 transitions with reduced matrix
//! elements, hyperfine constants, and lifetimes.
//!
//! The bundled line lists are transcribed from public sources; every row
//! carries a source tag so provenance stays auditable. Files are line-oriented
//! text with typed sections (see `data/cs.dataset` for the grammar by
//! example); a JSON mirror of the same structure loads interchangeably.

use crate::angular::HalfInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

mod parse;
mod validate;

pub use validate::{validate_dataset, ValidationIssue, ValidationReport};

/// Bundled Cs dataset, transitions up to n = 12.
pub const CS_DATASET: &str = include_str!("../../data/cs.dataset");
/// Bundled Cs dataset truncated at n ≤ 9, for convergence checks.
pub const CS_DATASET_N9: &str = include_str!("../../data/cs_n9.dataset");
/// Bundled Rb-87 dataset (stability-comparison grade).
pub const RB87_DATASET: &str = include_str!("../../data/rb87.dataset");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    Cs,
    Rb87,
}

impl Species {
    /// Nuclear spin I.
    pub fn nuclear_spin(self) -> HalfInt {
        match self {
            Species::Cs => HalfInt::from_twice(7),
            Species::Rb87 => HalfInt::from_twice(3),
        }
    }

    pub fn mass_kg(self) -> f64 {
        match self {
            Species::Cs => crate::constants::CONSTANTS.cs_mass,
            Species::Rb87 => crate::constants::CONSTANTS.rb87_mass,
        }
    }

    /// Upper clock level whose lifetime must be present in a usable dataset.
    pub fn clock_upper_level(self) -> &'static str {
        match self {
            Species::Cs => "5d5/2",
            Species::Rb87 => "4d5/2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "Cs" | "cs" | "Cs133" | "133Cs" => Some(Species::Cs),
            "Rb87" | "rb87" | "87Rb" => Some(Species::Rb87),
            _ => None,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::Cs => write!(f, "Cs"),
            Species::Rb87 => write!(f, "Rb87"),
        }
    }
}

/// Identity of an atomic level. Transitions reference fine-structure levels
/// (no f, m); hyperfine-resolved operations attach f and m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelId {
    pub species: Species,
    /// Configuration label, e.g. "6s", "6p", "5d".
    pub configuration: String,
    pub j: HalfInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<HalfInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<HalfInt>,
}

impl LevelId {
    pub fn fine(species: Species, configuration: &str, j: HalfInt) -> Self {
        LevelId {
            species,
            configuration: configuration.to_string(),
            j,
            f: None,
            m: None,
        }
    }

    pub fn with_hyperfine(&self, f: HalfInt, m: HalfInt) -> Self {
        let mut l = self.clone();
        l.f = Some(f);
        l.m = Some(m);
        l
    }

    /// Orbital angular momentum l decoded from the configuration letter.
    pub fn orbital_l(&self) -> Option<u32> {
        let letter = self
            .configuration
            .chars()
            .find(|c| c.is_ascii_alphabetic())?;
        match letter.to_ascii_lowercase() {
            's' => Some(0),
            'p' => Some(1),
            'd' => Some(2),
            'f' => Some(3),
            'g' => Some(4),
            _ => None,
        }
    }

    /// Landé g_j in the LS limit with s = 1/2 (electron g taken as exactly 2,
    /// matching the g_f = 1/4, 1/2 values used for the clock levels).
    pub fn lande_gj(&self) -> Option<f64> {
        let l = self.orbital_l()? as f64;
        let j = self.j.value();
        let s = 0.5;
        Some(1.0 + (j * (j + 1.0) + s * (s + 1.0) - l * (l + 1.0)) / (2.0 * j * (j + 1.0)))
    }

    /// Key "6s1/2" used in dataset files and maps.
    pub fn key(&self) -> String {
        format!("{}{}", self.configuration, self.j)
    }

    /// Consistency of the optional hyperfine labels against I and j.
    pub fn hyperfine_consistent(&self) -> bool {
        let i = self.species.nuclear_spin();
        match (self.f, self.m) {
            (None, None) => true,
            (None, Some(_)) => false,
            (Some(f), m) => {
                let min = (self.j - i).abs();
                let max = self.j + i;
                if f < min || f > max || !f.same_parity(max) {
                    return false;
                }
                match m {
                    None => true,
                    Some(m) => m.abs() <= f && m.same_parity(f),
                }
            }
        }
    }

    /// Parse "6s1/2" / "5d5/2" style keys.
    pub fn parse_key(species: Species, key: &str) -> Option<Self> {
        let key = key.trim();
        let letter_pos = key.find(|c: char| c.is_ascii_alphabetic())?;
        let config_end = letter_pos + 1;
        let (config, j_str) = key.split_at(config_end);
        let j = HalfInt::parse(j_str)?;
        if j.is_negative() {
            return None;
        }
        Some(LevelId::fine(species, config, j))
    }
}

impl fmt::Display for LevelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.configuration, self.j)?;
        if let Some(ff) = self.f {
            write!(f, ",f={ff}")?;
        }
        if let Some(m) = self.m {
            write!(f, ",m={m}")?;
        }
        Ok(())
    }
}

/// One E1 transition between fine-structure levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    /// Lower-energy level.
    pub lower: LevelId,
    /// Upper-energy level.
    pub upper: LevelId,
    /// Vacuum wavelength, nm.
    pub wavelength_nm: f64,
    /// Reduced dipole matrix element |⟨upper‖d‖lower⟩|, atomic units e·a0.
    pub dipole_ea0: f64,
    /// Provenance tag, free text.
    pub source: String,
}

impl TransitionRecord {
    /// Transition angular frequency, rad/s.
    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * crate::constants::CONSTANTS.c / (self.wavelength_nm * 1e-9)
    }
}

/// Hyperfine structure constants of one level, MHz.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperfineConstants {
    /// Magnetic-dipole constant A.
    pub a_mhz: f64,
    /// Electric-quadrupole constant B (zero for j = 1/2).
    pub b_mhz: f64,
}

/// Complete dataset for one species.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicDataset {
    pub species: Species,
    /// Nuclear spin I (redundant with species, kept explicit in the file).
    pub nuclear_spin: HalfInt,
    /// Core polarizability correction, a0³.
    pub core_polarizability_a03: f64,
    /// Hyperfine constants keyed by level ("6s1/2").
    pub hyperfine: BTreeMap<String, HyperfineConstants>,
    /// Radiative lifetimes in seconds keyed by level.
    pub lifetimes: BTreeMap<String, f64>,
    pub transitions: Vec<TransitionRecord>,
}

impl AtomicDataset {
    /// All transitions touching `level`, with the signed transition angular
    /// frequency ω_k (positive when the partner lies above `level`).
    pub fn partners_of<'a>(
        &'a self,
        level: &'a LevelId,
    ) -> impl Iterator<Item = (&'a TransitionRecord, f64, &'a LevelId)> + 'a {
        self.transitions.iter().filter_map(move |t| {
            if t.lower.configuration == level.configuration && t.lower.j == level.j {
                Some((t, t.omega(), &t.upper))
            } else if t.upper.configuration == level.configuration && t.upper.j == level.j {
                Some((t, -t.omega(), &t.lower))
            } else {
                None
            }
        })
    }

    pub fn hyperfine_for(&self, level: &LevelId) -> Option<HyperfineConstants> {
        self.hyperfine.get(&level.key()).copied()
    }

    pub fn lifetime_for(&self, level: &LevelId) -> Option<f64> {
        self.lifetimes.get(&level.key()).copied()
    }

    /// Hyperfine level energy offset E_hf(f) in Hz from the A, B constants:
    /// E = (A/2)K + B[3K(K+1)/2 − 2I(I+1)j(j+1)] / [2I(2I−1)·2j(2j−1)]
    /// with K = f(f+1) − I(I+1) − j(j+1).
    pub fn hyperfine_energy_hz(&self, level: &LevelId, f: HalfInt) -> Option<f64> {
        let hf = self.hyperfine_for(level)?;
        let i = self.nuclear_spin.value();
        let j = level.j.value();
        let fv = f.value();
        let k = fv * (fv + 1.0) - i * (i + 1.0) - j * (j + 1.0);
        let mut e = 0.5 * hf.a_mhz * 1e6 * k;
        let denom = 2.0 * i * (2.0 * i - 1.0) * 2.0 * j * (2.0 * j - 1.0);
        if denom != 0.0 && hf.b_mhz != 0.0 {
            e += hf.b_mhz * 1e6 * (1.5 * k * (k + 1.0) - 2.0 * i * (i + 1.0) * j * (j + 1.0))
                / denom;
        }
        Some(e)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("dataset file not found: {0}")]
    MissingFile(String),
    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error("duplicate transition between {0} and {1}")]
    DuplicateTransition(String, String),
    #[error("missing lifetime for level {0}")]
    MissingLifetime(String),
    #[error("dataset failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("JSON dataset error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error reading dataset: {0}")]
    Io(#[from] std::io::Error),
}

/// Load a dataset from a file path. `.json` files are parsed as the JSON
/// mirror, anything else as the line-oriented text format. The returned
/// dataset has passed validation.
pub fn load_dataset(path: &Path) -> Result<AtomicDataset, DatasetError> {
    if !path.exists() {
        return Err(DatasetError::MissingFile(path.display().to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        let ds: AtomicDataset = serde_json::from_str(&text)?;
        finish_load(ds)
    } else {
        load_dataset_str(&text)
    }
}

/// Load from already-read text in the line-oriented format.
pub fn load_dataset_str(text: &str) -> Result<AtomicDataset, DatasetError> {
    let ds = parse::parse_text(text)?;
    finish_load(ds)
}

/// The bundled dataset for a species (full truncation).
pub fn bundled(species: Species) -> AtomicDataset {
    let text = match species {
        Species::Cs => CS_DATASET,
        Species::Rb87 => RB87_DATASET,
    };
    load_dataset_str(text).expect("bundled dataset must validate")
}

fn finish_load(ds: AtomicDataset) -> Result<AtomicDataset, DatasetError> {
    // Surface the two targeted failures as their own variants, everything
    // else through the report.
    for t in &ds.transitions {
        let n = ds
            .transitions
            .iter()
            .filter(|u| {
                (u.lower == t.lower && u.upper == t.upper)
                    || (u.lower == t.upper && u.upper == t.lower)
            })
            .count();
        if n > 1 {
            return Err(DatasetError::DuplicateTransition(
                t.lower.key(),
                t.upper.key(),
            ));
        }
    }
    let clock_upper = ds.species.clock_upper_level();
    if !ds.lifetimes.contains_key(clock_upper) {
        return Err(DatasetError::MissingLifetime(clock_upper.to_string()));
    }
    let report = validate_dataset(&ds);
    if !report.is_usable() {
        return Err(DatasetError::Invalid(report));
    }
    Ok(ds)
}
