//! Systematic-shift error budget: sensitivity coefficients β_i = dν/da_i for
//! the five environmental parameters, the aggregated shift δν = Σ β_i δa_i,
//! and the inversion δa_i = ν_c·δt_i/(β_i·τ) to environmental-control
//! requirements for a timing target.

use crate::constants::CONSTANTS;
use serde::{Deserialize, Serialize};

/// One budget row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRow {
    pub name: String,
    /// Sensitivity coefficient, Hz per `unit`.
    pub beta_hz_per_unit: f64,
    /// Environmental-parameter unit label.
    pub unit: String,
    /// β/ν_c, per `unit`.
    pub fractional_per_unit: f64,
    /// Assumed environmental stability δa, in `unit` (optional).
    pub delta_a: Option<f64>,
    /// Required stability for the timing target, in `unit` (optional).
    pub requirement: Option<f64>,
}

/// Timing target: δt of accumulated time error after integration τ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingTarget {
    pub delta_t_s: f64,
    pub tau_s: f64,
}

impl TimingTarget {
    /// 1 ns at 30 days.
    pub fn one_ns_at_30_days() -> Self {
        TimingTarget {
            delta_t_s: 1e-9,
            tau_s: 30.0 * 86400.0,
        }
    }
}

/// Allocation of the timing budget across rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AllocationPolicy {
    /// Each row alone may exhaust the full δt (per-row table convention).
    FullBudgetPerRow,
    /// δt split evenly across the n rows.
    EqualSplit,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SystematicsError {
    #[error("row `{0}` has zero sensitivity; requirement undefined")]
    ZeroSensitivity(String),
    #[error("row `{0}` is missing its δa value")]
    MissingDeltaA(String),
    #[error("invalid timing target (δt and τ must be > 0)")]
    BadTarget,
    #[error("missing model input: {0}")]
    MissingModelInput(String),
}

/// Model inputs for the sensitivity coefficients. Reference values follow
/// the published operating point; the lattice slope and probe differential
/// polarizability may instead come straight out of the polarizability
/// module's scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityInputs {
    pub nu_c_hz: f64,
    /// Differential polarizability at the probe wavelength, Å³.
    pub probe_delta_alpha_a3: f64,
    /// Probe saturation intensity, W/m².
    pub probe_sat_intensity_w_m2: f64,
    /// Differential-polarizability slope at the magic point, Å³/MHz.
    pub lattice_slope_a3_per_mhz: f64,
    /// Scalar polarizability magnitude at the trap wavelength, Å³.
    pub lattice_alpha0_a3: f64,
    /// Atomic temperature entering the lattice-detuning chain, K.
    pub temperature_k: f64,
    /// Calibrated dc-field coefficient, Hz/(V/m). Quadratic Stark response
    /// has no field-free linear term, so this row is an input.
    pub dc_beta_hz_per_v_m: f64,
    /// Blackbody temperature sensitivity dν/dT at the operating point, Hz/K
    /// (from `polarizability::bbr_shift`).
    pub bbr_sensitivity_hz_per_k: f64,
}

/// Build the five budget rows in table order: probe power, lattice
/// frequency, magnetic field variation, dc electric field, blackbody.
pub fn sensitivity_coefficients(
    inp: &SensitivityInputs,
) -> Result<Vec<BudgetRow>, SystematicsError> {
    if !(inp.nu_c_hz > 0.0) {
        return Err(SystematicsError::MissingModelInput("nu_c_hz".into()));
    }
    if !(inp.lattice_alpha0_a3.abs() > 0.0) {
        return Err(SystematicsError::MissingModelInput(
            "lattice_alpha0_a3".into(),
        ));
    }
    if !(inp.probe_sat_intensity_w_m2 > 0.0) {
        return Err(SystematicsError::MissingModelInput(
            "probe_sat_intensity_w_m2".into(),
        ));
    }

    let mut rows = Vec::with_capacity(5);
    let row = |name: &str, beta: f64, unit: &str| BudgetRow {
        name: name.to_string(),
        beta_hz_per_unit: beta,
        unit: unit.to_string(),
        fractional_per_unit: beta / inp.nu_c_hz,
        delta_a: None,
        requirement: None,
    };

    // Probe power: differential Stark shift at unit saturation intensity,
    // δν = 2π·Δα·I/(h·c), taken per 1 % power change.
    let probe_shift_hz = 2.0
        * std::f64::consts::PI
        * inp.probe_delta_alpha_a3
        * 1e-30
        * inp.probe_sat_intensity_w_m2
        / (CONSTANTS.planck_h * CONSTANTS.c);
    rows.push(row("probe beam power", probe_shift_hz / 100.0, "%"));

    // Lattice laser frequency: trap-depth-averaged differential shift,
    // β = (dΔα/dν / |α0|) · kB·T/h per MHz of lattice detuning.
    let kbt_over_h = CONSTANTS.k_b * inp.temperature_k / CONSTANTS.planck_h;
    let lattice_beta =
        inp.lattice_slope_a3_per_mhz.abs() / inp.lattice_alpha0_a3.abs() * kbt_over_h;
    rows.push(row("lattice laser frequency", lattice_beta, "MHz"));

    // Magnetic field spatial variation: β = μB/(2πħ) per tesla, tabulated
    // per 1e-7 T.
    let magnetic_beta_per_t =
        CONSTANTS.bohr_magneton / (2.0 * std::f64::consts::PI * CONSTANTS.hbar);
    rows.push(row(
        "magnetic field spatial variation",
        magnetic_beta_per_t * 1e-7,
        "1e-7 T",
    ));

    rows.push(row("dc electric field", inp.dc_beta_hz_per_v_m, "V/m"));
    rows.push(row(
        "blackbody radiation",
        inp.bbr_sensitivity_hz_per_k,
        "K",
    ));
    Ok(rows)
}

/// Aggregated shift for rows carrying δa values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetTotal {
    /// Signed linear sum Σ β_i·δa_i, Hz.
    pub linear_hz: f64,
    /// Worst case Σ |β_i·δa_i|, Hz.
    pub worst_case_hz: f64,
    /// Quadrature √Σ (β_i·δa_i)², Hz.
    pub quadrature_hz: f64,
    /// linear_hz / ν_c.
    pub fractional: f64,
}

pub fn budget(rows: &[BudgetRow], nu_c_hz: f64) -> Result<BudgetTotal, SystematicsError> {
    let mut linear = 0.0;
    let mut worst = 0.0;
    let mut quad = 0.0;
    for r in rows {
        let da = r
            .delta_a
            .ok_or_else(|| SystematicsError::MissingDeltaA(r.name.clone()))?;
        let term = r.beta_hz_per_unit * da;
        linear += term;
        worst += term.abs();
        quad += term * term;
    }
    Ok(BudgetTotal {
        linear_hz: linear,
        worst_case_hz: worst,
        quadrature_hz: quad.sqrt(),
        fractional: linear / nu_c_hz,
    })
}

/// Fill the requirement column: δa_i = ν_c·δt_i/(|β_i|·τ) with δt_i = δt
/// (full-budget-per-row) or δt/n (equal split).
pub fn requirements(
    rows: &mut [BudgetRow],
    nu_c_hz: f64,
    target: TimingTarget,
    policy: AllocationPolicy,
) -> Result<(), SystematicsError> {
    if !(target.delta_t_s > 0.0 && target.tau_s > 0.0) {
        return Err(SystematicsError::BadTarget);
    }
    let n = rows.len() as f64;
    for r in rows.iter_mut() {
        if r.beta_hz_per_unit == 0.0 {
            return Err(SystematicsError::ZeroSensitivity(r.name.clone()));
        }
        let dt_i = match policy {
            AllocationPolicy::FullBudgetPerRow => target.delta_t_s,
            AllocationPolicy::EqualSplit => target.delta_t_s / n,
        };
        r.requirement = Some(nu_c_hz * dt_i / (r.beta_hz_per_unit.abs() * target.tau_s));
    }
    Ok(())
}

/// Fractional frequency precision implied by a timing target: δt/τ.
pub fn fractional_target(target: TimingTarget) -> Result<f64, SystematicsError> {
    if target.delta_t_s < 0.0 || !(target.tau_s > 0.0) {
        return Err(SystematicsError::BadTarget);
    }
    Ok(target.delta_t_s / target.tau_s)
}

/// CSV export in table row order: name, beta, unit, fractional, requirement.
pub fn rows_to_csv(rows: &[BudgetRow]) -> String {
    let mut out = String::from("name,beta,unit,fractional,requirement\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:.6e},{},{:.6e},{}\n",
            r.name,
            r.beta_hz_per_unit,
            r.unit,
            r.fractional_per_unit,
            r.requirement.map_or(String::new(), |v| format!("{v:.6e}")),
        ));
    }
    out
}

pub fn rows_to_json(rows: &[BudgetRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

/// Reference inputs for the Cs operating point (documented in the scenario
/// files; the scan-derived slope may be substituted by callers).
pub fn cs_reference_inputs() -> SensitivityInputs {
    SensitivityInputs {
        nu_c_hz: 4.376e14,
        probe_delta_alpha_a3: -57.5,
        probe_sat_intensity_w_m2: 5700.0, // 570 mW/cm²
        lattice_slope_a3_per_mhz: 1.4e-4,
        lattice_alpha0_a3: -374.0,
        temperature_k: 1e-6,
        dc_beta_hz_per_v_m: -4.7,
        bbr_sensitivity_hz_per_k: 4.0 * 8.904 / 300.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<BudgetRow> {
        sensitivity_coefficients(&cs_reference_inputs()).unwrap()
    }

    #[test]
    fn magnetic_row_anchor() {
        let rows = rows();
        let b = &rows[2];
        assert!(
            (b.beta_hz_per_unit - 1400.0).abs() / 1400.0 < 0.01,
            "β_B = {} Hz per 1e-7 T",
            b.beta_hz_per_unit
        );
        assert!((b.fractional_per_unit - 3.2e-12).abs() / 3.2e-12 < 0.01);
    }

    #[test]
    fn lattice_row_chain() {
        // 1.4e-4 Å³/MHz at T = 1 μK with |α0| = 374 Å³ → 0.0078 Hz/MHz.
        let rows = rows();
        let b = &rows[1];
        assert!(
            (b.beta_hz_per_unit - 0.0078).abs() / 0.0078 < 0.10,
            "β_lattice = {} Hz/MHz",
            b.beta_hz_per_unit
        );
    }

    #[test]
    fn blackbody_row_anchor() {
        let rows = rows();
        let b = &rows[4];
        assert!(
            (b.beta_hz_per_unit - 0.12).abs() / 0.12 < 0.02,
            "β_BBR = {}",
            b.beta_hz_per_unit
        );
    }

    #[test]
    fn probe_row_reproduces_published_fraction() {
        // Direct chain: 2π·|Δα|·I_sat/(hc)/100 ≈ 0.104 Hz/%, within 10% of the
        // published 0.11 Hz/% (fractional 2.4e-16/%).
        let rows = rows();
        let b = &rows[0];
        assert!(
            (b.beta_hz_per_unit.abs() - 0.11).abs() / 0.11 < 0.10,
            "β_probe = {} Hz/%",
            b.beta_hz_per_unit
        );
        assert!((b.fractional_per_unit.abs() - 2.4e-16).abs() / 2.4e-16 < 0.05);
    }

    #[test]
    fn requirement_column_reproduces_published_table() {
        let mut r = rows();
        requirements(
            &mut r,
            4.376e14,
            TimingTarget::one_ns_at_30_days(),
            AllocationPolicy::FullBudgetPerRow,
        )
        .unwrap();
        let req: Vec<f64> = r.iter().map(|x| x.requirement.unwrap()).collect();
        let expect = [1.6, 21.6, 1.2e-4, 0.036, 1.4]; // %, MHz, (1e-7 T) = 12 pT, V/m, K
        for (i, (got, want)) in req.iter().zip(expect).enumerate() {
            assert!(
                (got - want).abs() / want < 0.05,
                "row {i}: requirement {got} vs {want}"
            );
        }
    }

    #[test]
    fn fractional_target_anchors() {
        let f = fractional_target(TimingTarget::one_ns_at_30_days()).unwrap();
        assert!((f - 3.9e-16).abs() / 3.9e-16 < 0.02, "δt/τ = {f}");
        assert_eq!(
            fractional_target(TimingTarget {
                delta_t_s: 0.0,
                tau_s: 1.0
            })
            .unwrap(),
            0.0
        );
        let day = fractional_target(TimingTarget {
            delta_t_s: 1e-9,
            tau_s: 86400.0,
        })
        .unwrap();
        assert!((day - 1.157e-14).abs() / 1.157e-14 < 0.01);
    }

    #[test]
    fn budget_zero_and_single_row() {
        let mut r = rows();
        for row in r.iter_mut() {
            row.delta_a = Some(0.0);
        }
        let t = budget(&r, 4.376e14).unwrap();
        assert_eq!(t.linear_hz, 0.0);
        assert_eq!(t.worst_case_hz, 0.0);

        let mut single = vec![r[2].clone()];
        single[0].delta_a = Some(0.5);
        let t = budget(&single, 4.376e14).unwrap();
        assert!((t.linear_hz - single[0].beta_hz_per_unit * 0.5).abs() < 1e-12);
    }

    #[test]
    fn budget_linearity() {
        let mut r = rows();
        for (k, row) in r.iter_mut().enumerate() {
            row.delta_a = Some(0.1 * (k as f64 + 1.0));
        }
        let t1 = budget(&r, 4.376e14).unwrap();
        for row in r.iter_mut() {
            row.delta_a = Some(row.delta_a.unwrap() * 3.0);
        }
        let t3 = budget(&r, 4.376e14).unwrap();
        assert!((t3.linear_hz - 3.0 * t1.linear_hz).abs() < 1e-9 * t1.linear_hz.abs());
        assert!((t3.worst_case_hz - 3.0 * t1.worst_case_hz).abs() < 1e-9 * t1.worst_case_hz);
    }

    #[test]
    fn requirements_budget_round_trip() {
        // δa = δa_req under full-per-row allocation → each row's timing
        // contribution equals δt, total (worst-case) timing = 5δt.
        let target = TimingTarget::one_ns_at_30_days();
        let nu_c = 4.376e14;
        let mut r = rows();
        requirements(&mut r, nu_c, target, AllocationPolicy::FullBudgetPerRow).unwrap();
        for row in r.iter_mut() {
            row.delta_a = row.requirement;
        }
        let t = budget(&r, nu_c).unwrap();
        let per_row_dt = |shift_hz: f64| shift_hz / nu_c * target.tau_s;
        for row in &r {
            let dt = per_row_dt((row.beta_hz_per_unit * row.delta_a.unwrap()).abs());
            assert!(
                (dt - target.delta_t_s).abs() / target.delta_t_s < 1e-9,
                "row {} timing {dt}",
                row.name
            );
        }
        let total_dt = per_row_dt(t.worst_case_hz);
        assert!((total_dt - 5.0 * target.delta_t_s).abs() / target.delta_t_s < 1e-9);
    }

    #[test]
    fn equal_split_tightens_by_n() {
        let target = TimingTarget::one_ns_at_30_days();
        let mut full = rows();
        requirements(
            &mut full,
            4.376e14,
            target,
            AllocationPolicy::FullBudgetPerRow,
        )
        .unwrap();
        let mut split = rows();
        requirements(&mut split, 4.376e14, target, AllocationPolicy::EqualSplit).unwrap();
        for (f, s) in full.iter().zip(&split) {
            assert!(
                (s.requirement.unwrap() * 5.0 - f.requirement.unwrap()).abs()
                    < 1e-12 * f.requirement.unwrap()
            );
        }
    }

    #[test]
    fn requirement_monotone_in_beta() {
        let target = TimingTarget::one_ns_at_30_days();
        let mut r = rows();
        r[0].beta_hz_per_unit *= 100.0;
        let mut big = r.clone();
        requirements(
            &mut big,
            4.376e14,
            target,
            AllocationPolicy::FullBudgetPerRow,
        )
        .unwrap();
        let mut small = rows();
        requirements(
            &mut small,
            4.376e14,
            target,
            AllocationPolicy::FullBudgetPerRow,
        )
        .unwrap();
        assert!(big[0].requirement.unwrap() < small[0].requirement.unwrap());
    }

    #[test]
    fn zero_sensitivity_rejected() {
        let mut r = rows();
        r[0].beta_hz_per_unit = 0.0;
        assert!(matches!(
            requirements(
                &mut r,
                4.376e14,
                TimingTarget::one_ns_at_30_days(),
                AllocationPolicy::FullBudgetPerRow
            ),
            Err(SystematicsError::ZeroSensitivity(_))
        ));
    }

    #[test]
    fn fractional_column_consistent() {
        for r in rows() {
            assert!(
                (r.fractional_per_unit - r.beta_hz_per_unit / 4.376e14).abs()
                    <= 1e-12 * r.fractional_per_unit.abs(),
            );
        }
    }

    #[test]
    fn csv_is_stable_and_ordered() {
        let mut r = rows();
        requirements(
            &mut r,
            4.376e14,
            TimingTarget::one_ns_at_30_days(),
            AllocationPolicy::FullBudgetPerRow,
        )
        .unwrap();
        let a = rows_to_csv(&r);
        let b = rows_to_csv(&r);
        assert_eq!(a, b);
        let names: Vec<&str> = a
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect();
        assert_eq!(
            names,
            vec![
                "probe beam power",
                "lattice laser frequency",
                "magnetic field spatial variation",
                "dc electric field",
                "blackbody radiation"
            ]
        );
    }
}
