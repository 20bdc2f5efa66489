//! Parser for the line-oriented dataset format.
//!
//! Sections are introduced by `[name]`; records are comma-separated fields,
//! one per line; `#` starts a comment. Sections: `species` (key, value rows),
//! `hyperfine` (level, A_MHz, B_MHz), `lifetimes` (level, tau_s),
//! `transitions` (lower, upper, wavelength_nm, dipole_ea0, source).

use super::{AtomicDataset, DatasetError, HyperfineConstants, LevelId, Species, TransitionRecord};
use crate::angular::HalfInt;
use std::collections::BTreeMap;

#[derive(PartialEq)]
enum Section {
    None,
    Species,
    Hyperfine,
    Lifetimes,
    Transitions,
}

pub fn parse_text(text: &str) -> Result<AtomicDataset, DatasetError> {
    let err = |line: usize, message: String| DatasetError::ParseError { line, message };

    let mut section = Section::None;
    let mut species: Option<Species> = None;
    let mut nuclear_spin: Option<HalfInt> = None;
    let mut core_pol: Option<f64> = None;
    let mut hyperfine = BTreeMap::new();
    let mut lifetimes = BTreeMap::new();
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();

    let mut saw_anything = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        saw_anything = true;
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name.trim() {
                "species" => Section::Species,
                "hyperfine" => Section::Hyperfine,
                "lifetimes" => Section::Lifetimes,
                "transitions" => Section::Transitions,
                other => return Err(err(lineno, format!("unknown section [{other}]"))),
            };
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
        match section {
            Section::None => {
                return Err(err(lineno, "record outside of any [section]".into()));
            }
            Section::Species => {
                if fields.len() != 2 {
                    return Err(err(lineno, "species rows are `key, value`".into()));
                }
                match fields[0].as_str() {
                    "name" => {
                        species = Some(Species::parse(&fields[1]).ok_or_else(|| {
                            err(lineno, format!("unknown species `{}`", fields[1]))
                        })?);
                    }
                    "nuclear_spin" => {
                        nuclear_spin = Some(HalfInt::parse(&fields[1]).ok_or_else(|| {
                            err(lineno, format!("bad nuclear spin `{}`", fields[1]))
                        })?);
                    }
                    "core_polarizability_a03" => {
                        core_pol = Some(parse_f64(&fields[1], lineno)?);
                    }
                    other => return Err(err(lineno, format!("unknown species key `{other}`"))),
                }
            }
            Section::Hyperfine => {
                if fields.len() != 3 {
                    return Err(err(
                        lineno,
                        "hyperfine rows are `level, A_MHz, B_MHz`".into(),
                    ));
                }
                hyperfine.insert(
                    fields[0].clone(),
                    HyperfineConstants {
                        a_mhz: parse_f64(&fields[1], lineno)?,
                        b_mhz: parse_f64(&fields[2], lineno)?,
                    },
                );
            }
            Section::Lifetimes => {
                if fields.len() != 2 {
                    return Err(err(lineno, "lifetime rows are `level, tau_s`".into()));
                }
                lifetimes.insert(fields[0].clone(), parse_f64(&fields[1], lineno)?);
            }
            Section::Transitions => {
                rows.push((lineno, fields));
            }
        }
    }

    if !saw_anything {
        return Err(err(1, "empty dataset file".into()));
    }
    let species = species.ok_or_else(|| err(1, "missing `name` in [species]".into()))?;
    let nuclear_spin =
        nuclear_spin.ok_or_else(|| err(1, "missing `nuclear_spin` in [species]".into()))?;
    let core_polarizability_a03 =
        core_pol.ok_or_else(|| err(1, "missing `core_polarizability_a03` in [species]".into()))?;

    let mut transitions = Vec::with_capacity(rows.len());
    for (lineno, fields) in rows {
        if fields.len() != 5 {
            return Err(err(
                lineno,
                "transition rows are `lower, upper, wavelength_nm, dipole_ea0, source`".into(),
            ));
        }
        let lower = LevelId::parse_key(species, &fields[0])
            .ok_or_else(|| err(lineno, format!("bad level `{}`", fields[0])))?;
        let upper = LevelId::parse_key(species, &fields[1])
            .ok_or_else(|| err(lineno, format!("bad level `{}`", fields[1])))?;
        let wavelength_nm = parse_f64(&fields[2], lineno)?;
        let dipole_ea0 = parse_f64(&fields[3], lineno)?;
        if wavelength_nm <= 0.0 {
            return Err(err(
                lineno,
                format!("wavelength must be > 0, got {wavelength_nm}"),
            ));
        }
        if dipole_ea0 < 0.0 {
            return Err(err(
                lineno,
                format!("matrix element must be ≥ 0, got {dipole_ea0}"),
            ));
        }
        transitions.push(TransitionRecord {
            lower,
            upper,
            wavelength_nm,
            dipole_ea0,
            source: fields[4].clone(),
        });
    }

    Ok(AtomicDataset {
        species,
        nuclear_spin,
        core_polarizability_a03,
        hyperfine,
        lifetimes,
        transitions,
    })
}

fn parse_f64(s: &str, lineno: usize) -> Result<f64, DatasetError> {
    s.parse::<f64>().map_err(|_| DatasetError::ParseError {
        line: lineno,
        message: format!("bad number `{s}`"),
    })
}
