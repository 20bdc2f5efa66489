//! Dynamic and static polarizabilities.
//!
//! Scalar α0 and tensor α2 come from the standard sum over E1 transitions in
//! the fine-structure basis:
//!
//!   α0(ω) = (2/(3ħ(2j+1))) Σ_k |⟨k‖d‖j⟩|² ω_k/(ω_k² − ω²)
//!
//! with signed ω_k (negative for partners below the level). The tensor part
//! uses the rank-2 recoupling weight, evaluated through the exact 6j symbols
//! of the [`crate::angular`] module. Hyperfine-resolved values map (α0, α2)
//! of the fine-structure level onto an (f, m) state; magic wavelengths are
//! sign changes of the differential polarizability of a clock-state pair.
//!
//! Dispersion is real-valued (no linewidths in denominators); a configurable
//! exclusion zone around every dataset resonance keeps evaluations away from
//! the poles.

use crate::angular::{wigner6j, HalfInt};
use crate::constants::CONSTANTS;
use crate::dataset::{AtomicDataset, LevelId};
use crate::units::si_to_a3;
use serde::{Deserialize, Serialize};

/// Default half-width of the resonance exclusion zone, nm.
pub const DEFAULT_EXCLUSION_NM: f64 = 0.01;

/// Probe wavelength: a finite vacuum wavelength or the static (ω → 0) limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Probe {
    Static,
    Nm(f64),
}

impl Probe {
    fn omega(self) -> f64 {
        match self {
            Probe::Static => 0.0,
            Probe::Nm(nm) => 2.0 * std::f64::consts::PI * CONSTANTS.c / (nm * 1e-9),
        }
    }
}

/// Fine-structure polarizability of one level at one wavelength, Å³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizabilityRecord {
    pub level: LevelId,
    pub probe: Probe,
    /// Scalar polarizability, Å³.
    pub alpha0_a3: f64,
    /// Tensor polarizability, Å³ (exactly 0 for j ≤ 1/2).
    pub alpha2_a3: f64,
    /// Whether the core correction is folded into alpha0.
    pub core_included: bool,
}

/// Hyperfine/Zeeman-resolved polarizability, Å³.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperfinePolarizability {
    pub f: HalfInt,
    pub m: HalfInt,
    pub probe: Probe,
    pub alpha_a3: f64,
}

/// A root of the differential polarizability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicPoint {
    pub wavelength_nm: f64,
    /// dΔα/dν at the root, Å³ per MHz of trap-laser detuning.
    pub slope_a3_per_mhz: f64,
    /// Grid cell that bracketed the sign change.
    pub bracket_nm: (f64, f64),
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum PolarizabilityError {
    #[error(
        "wavelength {wavelength_nm} nm is within {half_width_nm} nm of the {transition} resonance"
    )]
    TooCloseToResonance {
        wavelength_nm: f64,
        half_width_nm: f64,
        transition: String,
    },
    #[error("dataset has no E1 transitions for level {0}")]
    EmptyDataset(String),
    #[error("invalid hyperfine quantum number f = {f} for j = {j}, I = {i}")]
    InvalidF { f: HalfInt, j: HalfInt, i: HalfInt },
    #[error("invalid m = {m} for f = {f}")]
    InvalidM { m: HalfInt, f: HalfInt },
    #[error("scan window is empty or inverted: [{0}, {1}] nm")]
    EmptyWindow(f64, f64),
    #[error("negative temperature {0} K")]
    NegativeTemperature(f64),
    #[error(transparent)]
    Angular(#[from] crate::angular::AngularError),
}

/// Scalar + tensor polarizability of a fine-structure level.
///
/// The core correction is added to the scalar part of s-ground states only.
pub fn dynamic_polarizability(
    ds: &AtomicDataset,
    level: &LevelId,
    probe: Probe,
) -> Result<PolarizabilityRecord, PolarizabilityError> {
    dynamic_polarizability_with_exclusion(ds, level, probe, DEFAULT_EXCLUSION_NM)
}

pub fn dynamic_polarizability_with_exclusion(
    ds: &AtomicDataset,
    level: &LevelId,
    probe: Probe,
    exclusion_nm: f64,
) -> Result<PolarizabilityRecord, PolarizabilityError> {
    let partners: Vec<_> = ds.partners_of(level).collect();
    if partners.is_empty() {
        return Err(PolarizabilityError::EmptyDataset(level.key()));
    }
    if let Probe::Nm(nm) = probe {
        for (t, _, _) in &partners {
            if (t.wavelength_nm - nm).abs() < exclusion_nm {
                return Err(PolarizabilityError::TooCloseToResonance {
                    wavelength_nm: nm,
                    half_width_nm: exclusion_nm,
                    transition: format!("{} → {}", t.lower.key(), t.upper.key()),
                });
            }
        }
    }

    let omega = probe.omega();
    let ea0 = CONSTANTS.ea0();
    let j = level.j;
    let two_j = j.twice();

    let mut alpha0_si = 0.0;
    let mut alpha2_si = 0.0;
    for (t, omega_k, partner) in &partners {
        let d2 = (t.dipole_ea0 * ea0).powi(2);
        let disp = omega_k / (omega_k * omega_k - omega * omega);
        alpha0_si += 2.0 / (3.0 * CONSTANTS.hbar * (two_j as f64 + 1.0)) * d2 * disp;
        if two_j >= 2 {
            let w = tensor_weight(j, partner.j);
            alpha2_si += 2.0 / CONSTANTS.hbar * w * d2 * disp;
        }
    }

    let mut alpha0_a3 = si_to_a3(alpha0_si);
    let alpha2_a3 = if two_j >= 2 { si_to_a3(alpha2_si) } else { 0.0 };

    // Core correction: scalar part of the s-state ground level.
    let core_included = level.orbital_l() == Some(0);
    if core_included {
        alpha0_a3 += crate::units::convert_polarizability(
            ds.core_polarizability_a03,
            crate::units::PolarizabilityUnit::CubicBohr,
            crate::units::PolarizabilityUnit::CubicAngstrom,
        );
    }

    Ok(PolarizabilityRecord {
        level: level.clone(),
        probe,
        alpha0_a3,
        alpha2_a3,
        core_included,
    })
}

/// Rank-2 recoupling weight for a j → j' term of the tensor polarizability:
///   w(j, j') = 2 √(5j(2j−1)/(6(j+1)(2j+1)(2j+3))) (−1)^(j+j') {j 1 j'; 1 j 2}
/// so that α2 = (2/ħ) Σ w · |d|² · ω_k/(ω_k²−ω²). The normalization is fixed
/// by the m-resolved decomposition α(j,m) = α0 + α2·(3m²−j(j+1))/(j(2j−1)),
/// which the test suite checks against the squared-3j sum directly.
fn tensor_weight(j: HalfInt, j_partner: HalfInt) -> f64 {
    let jv = j.value();
    let prefactor = (5.0 * jv * (2.0 * jv - 1.0)
        / (6.0 * (jv + 1.0) * (2.0 * jv + 1.0) * (2.0 * jv + 3.0)))
        .sqrt();
    let six_j = wigner6j(
        j,
        HalfInt::from_int(1),
        j_partner,
        HalfInt::from_int(1),
        j,
        HalfInt::from_int(2),
    )
    .expect("valid 6j arguments")
    .to_f64();
    let exp = ((j + j_partner).twice()) / 2;
    let sign = if exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    2.0 * prefactor * sign * six_j
}

/// Map a fine-structure record onto a hyperfine Zeeman state:
///   α(f, m) = α0 + [(3m² − f(f+1)) / (f(2f−1))] · α2^(f)
/// with α2^(f) = α2 · [3K(K−1) − 4f(f+1)j(j+1)] / [(2f+3)(2f+2)j(2j−1)] and
/// K = f(f+1) + j(j+1) − I(I+1).
pub fn hyperfine_polarizability(
    rec: &PolarizabilityRecord,
    nuclear_spin: HalfInt,
    f: HalfInt,
    m: HalfInt,
) -> Result<HyperfinePolarizability, PolarizabilityError> {
    let j = rec.level.j;
    let min_f = (j - nuclear_spin).abs();
    let max_f = j + nuclear_spin;
    if f < min_f || f > max_f || !f.same_parity(max_f) {
        return Err(PolarizabilityError::InvalidF {
            f,
            j,
            i: nuclear_spin,
        });
    }
    if m.abs() > f || !m.same_parity(f) {
        return Err(PolarizabilityError::InvalidM { m, f });
    }

    let alpha2_f = rec.alpha2_a3 * hyperfine_tensor_factor(j, nuclear_spin, f);
    let fv = f.value();
    let mv = m.value();
    let angular = if fv >= 1.0 {
        (3.0 * mv * mv - fv * (fv + 1.0)) / (fv * (2.0 * fv - 1.0))
    } else {
        0.0
    };
    Ok(HyperfinePolarizability {
        f,
        m,
        probe: rec.probe,
        alpha_a3: rec.alpha0_a3 + angular * alpha2_f,
    })
}

/// The recoupling factor α2^(f)/α2^(j).
pub fn hyperfine_tensor_factor(j: HalfInt, nuclear_spin: HalfInt, f: HalfInt) -> f64 {
    let jv = j.value();
    let iv = nuclear_spin.value();
    let fv = f.value();
    if jv < 1.0 || fv < 1.0 {
        return 0.0;
    }
    let k = fv * (fv + 1.0) + jv * (jv + 1.0) - iv * (iv + 1.0);
    (3.0 * k * (k - 1.0) - 4.0 * fv * (fv + 1.0) * jv * (jv + 1.0))
        / ((2.0 * fv + 3.0) * (2.0 * fv + 2.0) * jv * (2.0 * jv - 1.0))
}

/// A hyperfine-resolved clock state for magic-wavelength searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperfineState {
    pub level: LevelId,
    pub f: HalfInt,
    pub m: HalfInt,
}

/// Differential polarizability α_e(f,m) − α_g at one wavelength, Å³.
pub fn differential_polarizability(
    ds: &AtomicDataset,
    ground: &LevelId,
    excited: &HyperfineState,
    probe: Probe,
    exclusion_nm: f64,
) -> Result<f64, PolarizabilityError> {
    let g = dynamic_polarizability_with_exclusion(ds, ground, probe, exclusion_nm)?;
    let e = dynamic_polarizability_with_exclusion(ds, &excited.level, probe, exclusion_nm)?;
    let eh = hyperfine_polarizability(&e, ds.nuclear_spin, excited.f, excited.m)?;
    Ok(eh.alpha_a3 - g.alpha0_a3)
}

/// One row of a wavelength scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub wavelength_nm: f64,
    pub alpha0_ground_a3: f64,
    pub alpha0_excited_a3: f64,
    pub alpha2_excited_a3: f64,
    pub delta_alpha_a3: f64,
}

/// Scan the differential polarizability over a window, skipping exclusion
/// zones around dataset resonances. Rows come out in ascending wavelength.
pub fn scan(
    ds: &AtomicDataset,
    ground: &LevelId,
    excited: &HyperfineState,
    window_nm: (f64, f64),
    step_nm: f64,
    exclusion_nm: f64,
) -> Result<Vec<ScanRow>, PolarizabilityError> {
    if !(window_nm.0 < window_nm.1) || step_nm <= 0.0 {
        return Err(PolarizabilityError::EmptyWindow(window_nm.0, window_nm.1));
    }
    let mut rows = Vec::new();
    let n = ((window_nm.1 - window_nm.0) / step_nm).round() as usize;
    for i in 0..=n {
        let nm = window_nm.0 + i as f64 * step_nm;
        if nm > window_nm.1 + 1e-12 {
            break;
        }
        let g = match dynamic_polarizability_with_exclusion(ds, ground, Probe::Nm(nm), exclusion_nm)
        {
            Ok(g) => g,
            Err(PolarizabilityError::TooCloseToResonance { .. }) => continue,
            Err(e) => return Err(e),
        };
        let e = match dynamic_polarizability_with_exclusion(
            ds,
            &excited.level,
            Probe::Nm(nm),
            exclusion_nm,
        ) {
            Ok(e) => e,
            Err(PolarizabilityError::TooCloseToResonance { .. }) => continue,
            Err(e) => return Err(e),
        };
        let eh = hyperfine_polarizability(&e, ds.nuclear_spin, excited.f, excited.m)?;
        rows.push(ScanRow {
            wavelength_nm: nm,
            alpha0_ground_a3: g.alpha0_a3,
            alpha0_excited_a3: e.alpha0_a3,
            alpha2_excited_a3: e.alpha2_a3,
            delta_alpha_a3: eh.alpha_a3 - g.alpha0_a3,
        });
    }
    Ok(rows)
}

/// Magic-wavelength search: every sign change of Δα(λ) on the grid is refined
/// by bisection until |Δα| < 1e-6 Å³; each root carries the differential
/// slope in Å³/MHz from a central difference.
///
/// ```
/// use clockdesign_core::angular::HalfInt;
/// use clockdesign_core::dataset::{bundled, Species};
/// use clockdesign_core::polarizability::{find_magic_wavelengths, HyperfineState};
/// use clockdesign_core::LevelId;
///
/// let ds = bundled(Species::Cs);
/// let ground = LevelId::parse_key(Species::Cs, "6s1/2").unwrap();
/// let excited = HyperfineState {
///     level: LevelId::parse_key(Species::Cs, "5d5/2").unwrap(),
///     f: HalfInt::from_int(6),
///     m: HalfInt::from_int(6),
/// };
/// let roots = find_magic_wavelengths(&ds, &ground, &excited, (795.0, 810.0), 0.05).unwrap();
/// assert!((roots[0].wavelength_nm - 803.3).abs() < 0.5);
/// ```
pub fn find_magic_wavelengths(
    ds: &AtomicDataset,
    ground: &LevelId,
    excited: &HyperfineState,
    window_nm: (f64, f64),
    step_nm: f64,
) -> Result<Vec<MagicPoint>, PolarizabilityError> {
    find_magic_wavelengths_with_exclusion(
        ds,
        ground,
        excited,
        window_nm,
        step_nm,
        DEFAULT_EXCLUSION_NM,
    )
}

pub fn find_magic_wavelengths_with_exclusion(
    ds: &AtomicDataset,
    ground: &LevelId,
    excited: &HyperfineState,
    window_nm: (f64, f64),
    step_nm: f64,
    exclusion_nm: f64,
) -> Result<Vec<MagicPoint>, PolarizabilityError> {
    let delta = |nm: f64| -> Result<Option<f64>, PolarizabilityError> {
        match differential_polarizability(ds, ground, excited, Probe::Nm(nm), exclusion_nm) {
            Ok(v) => Ok(Some(v)),
            Err(PolarizabilityError::TooCloseToResonance { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let rows = scan(ds, ground, excited, window_nm, step_nm, exclusion_nm)?;
    if rows.is_empty() {
        return Err(PolarizabilityError::EmptyWindow(window_nm.0, window_nm.1));
    }

    let mut roots = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        // A grid gap (> 1.5 step) means an exclusion zone separates the two
        // points; a sign change across it belongs to the resonance, not to a
        // physical root.
        if b.wavelength_nm - a.wavelength_nm > 1.5 * step_nm {
            continue;
        }
        if a.delta_alpha_a3 == 0.0 {
            continue; // exact grid hit handled by the bisection of the next cell
        }
        if a.delta_alpha_a3 * b.delta_alpha_a3 > 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (a.wavelength_nm, b.wavelength_nm);
        let mut f_lo = a.delta_alpha_a3;
        let mut root = 0.5 * (lo + hi);
        for _ in 0..200 {
            root = 0.5 * (lo + hi);
            let f_mid = match delta(root)? {
                Some(v) => v,
                None => break,
            };
            if f_mid.abs() < 1e-6 {
                break;
            }
            if f_lo * f_mid <= 0.0 {
                hi = root;
            } else {
                lo = root;
                f_lo = f_mid;
            }
        }
        let slope = match slope_a3_per_mhz(&|nm| delta(nm), root, step_nm)? {
            Some(s) => s,
            None => continue,
        };
        roots.push(MagicPoint {
            wavelength_nm: root,
            slope_a3_per_mhz: slope,
            bracket_nm: (a.wavelength_nm, b.wavelength_nm),
        });
    }
    Ok(roots)
}

/// Central-difference slope of Δα with respect to trap-laser frequency,
/// Å³/MHz, evaluated at `nm`.
fn slope_a3_per_mhz(
    delta: &dyn Fn(f64) -> Result<Option<f64>, PolarizabilityError>,
    nm: f64,
    step_nm: f64,
) -> Result<Option<f64>, PolarizabilityError> {
    let h = (step_nm * 1e-3).max(1e-6);
    let (lo, hi) = (delta(nm - h)?, delta(nm + h)?);
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(None),
    };
    let d_per_nm = (hi - lo) / (2.0 * h);
    // dν/dλ = −c/λ², in MHz per nm.
    let dnu_per_dnm = -CONSTANTS.c / (nm * 1e-9 * nm * 1e-9) * 1e-9 / 1e6;
    Ok(Some(d_per_nm / dnu_per_dnm))
}

/// Blackbody shift and temperature sensitivity from reference shifts at
/// 300 K: shift(T) = Δν₃₀₀·(T/300)⁴, dν/dT = 4Δν₃₀₀T³/300⁴.
pub fn bbr_shift(
    shift_ground_300k_hz: f64,
    shift_excited_300k_hz: f64,
    temperature_k: f64,
) -> Result<BbrShift, PolarizabilityError> {
    if temperature_k < 0.0 {
        return Err(PolarizabilityError::NegativeTemperature(temperature_k));
    }
    let dnu300 = shift_excited_300k_hz - shift_ground_300k_hz;
    let x = temperature_k / 300.0;
    Ok(BbrShift {
        differential_hz: dnu300 * x.powi(4),
        sensitivity_hz_per_k: 4.0 * dnu300 * temperature_k.powi(3) / 300.0f64.powi(4),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BbrShift {
    pub differential_hz: f64,
    pub sensitivity_hz_per_k: f64,
}

/// CSV export of a scan (Fig.-style data): one row per grid point.
pub fn scan_to_csv(rows: &[ScanRow]) -> String {
    let mut out =
        String::from("wavelength_nm,alpha0_ground,alpha0_excited,alpha2_excited,delta_alpha\n");
    for r in rows {
        out.push_str(&format!(
            "{:.6},{:.6e},{:.6e},{:.6e},{:.6e}\n",
            r.wavelength_nm,
            r.alpha0_ground_a3,
            r.alpha0_excited_a3,
            r.alpha2_excited_a3,
            r.delta_alpha_a3
        ));
    }
    out
}
