//! Projected dark-lattice geometry, trap depth, 1D-lattice sideband
//! structure, and clock-transition depumping.
//!
//! The intensity model is deliberately simple: the projected array is a
//! uniform background P/w² with full-contrast holes, and the 1D cavity
//! lattice is a standing wave whose single-direction circulating intensity
//! is buildup·P/area (peak 4× that from counter-propagating interference).
//! Dipole potentials use the time-averaged-field convention
//! U = 2π·α_vol·I/c, which reproduces the published 18 μK projected-trap
//! depth for α0 = −374 Å³ at 2 W over (250 μm)².

use crate::constants::CONSTANTS;
use serde::{Deserialize, Serialize};

/// Geometry and drive parameters of the trap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// Projected-array period d, μm.
    pub period_um: f64,
    /// Trap-light vacuum wavelength λ, μm.
    pub trap_wavelength_um: f64,
    /// Cubic trapping-region side w, μm.
    pub region_um: f64,
    /// Projected-lattice optical power, W.
    pub projected_power_w: f64,
    /// 1D-lattice input power, W.
    pub onedim_power_w: f64,
    /// Cavity power build-up factor of the 1D lattice.
    pub buildup: f64,
    /// Single-atom filling fraction, 0..=1.
    pub fill_fraction: f64,
    /// Probe (clock) vacuum wavelength, nm.
    pub probe_wavelength_nm: f64,
    /// Atom mass, kg.
    pub atom_mass_kg: f64,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum LatticeError {
    #[error("array period {period_um} μm is below the trap wavelength {wavelength_um} μm")]
    SubwavelengthPeriod { period_um: f64, wavelength_um: f64 },
    #[error("beam area must be positive")]
    ZeroArea,
    #[error("cavity build-up and 1D power must be positive")]
    ZeroBuildup,
    #[error("invalid config: {0}")]
    BadConfig(String),
}

impl LatticeConfig {
    pub fn validate(&self) -> Result<(), LatticeError> {
        if !(0.0..=1.0).contains(&self.fill_fraction) {
            return Err(LatticeError::BadConfig(format!(
                "fill fraction {} outside [0, 1]",
                self.fill_fraction
            )));
        }
        if self.projected_power_w < 0.0 || self.onedim_power_w < 0.0 {
            return Err(LatticeError::BadConfig("powers must be ≥ 0".into()));
        }
        if self.period_um <= 0.0 || self.trap_wavelength_um <= 0.0 || self.region_um <= 0.0 {
            return Err(LatticeError::BadConfig("lengths must be positive".into()));
        }
        Ok(())
    }

    /// Paraxial validity of the projected-array model requires d > λ/2.
    pub fn paraxial_valid(&self) -> bool {
        self.period_um > self.trap_wavelength_um / 2.0
    }

    pub fn area_m2(&self) -> f64 {
        (self.region_um * 1e-6).powi(2)
    }
}

/// Axial self-imaging period of the projected array:
/// L_T = λ / (1 − √(1 − λ²/d²)).
pub fn talbot_length_um(trap_wavelength_um: f64, period_um: f64) -> Result<f64, LatticeError> {
    if period_um < trap_wavelength_um {
        return Err(LatticeError::SubwavelengthPeriod {
            period_um,
            wavelength_um: trap_wavelength_um,
        });
    }
    let ratio = trap_wavelength_um / period_um;
    Ok(trap_wavelength_um / (1.0 - (1.0 - ratio * ratio).sqrt()))
}

/// Trap-site count and loaded atom number:
/// sites = w³/(d²·L_T), N_a = fill·sites.
pub fn lattice_geometry(cfg: &LatticeConfig) -> Result<SiteCount, LatticeError> {
    cfg.validate()?;
    let lt = talbot_length_um(cfg.trap_wavelength_um, cfg.period_um)?;
    let sites = cfg.region_um.powi(3) / (cfg.period_um.powi(2) * lt);
    Ok(SiteCount {
        talbot_length_um: lt,
        sites,
        atom_number: cfg.fill_fraction * sites,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteCount {
    pub talbot_length_um: f64,
    pub sites: f64,
    pub atom_number: f64,
}

/// Dipole potential depth for intensity I = P/area:
/// U = 2π·|α_vol|·I/c, reported in μK and in recoil units of the trap light.
///
/// `alpha0_a3 < 0` is the dark-trap case; a positive α requires `bright`.
pub fn trap_depth(
    alpha0_a3: f64,
    power_w: f64,
    area_m2: f64,
    trap_wavelength_um: f64,
    atom_mass_kg: f64,
    bright: bool,
) -> Result<TrapDepth, LatticeError> {
    if area_m2 <= 0.0 {
        return Err(LatticeError::ZeroArea);
    }
    if alpha0_a3 > 0.0 && !bright {
        return Err(LatticeError::BadConfig(
            "positive polarizability needs the bright-trap flag".into(),
        ));
    }
    let intensity = power_w / area_m2;
    let depth_j = dipole_potential_j(alpha0_a3.abs(), intensity);
    let e_rec = CONSTANTS.recoil_energy(atom_mass_kg, trap_wavelength_um * 1e-6);
    Ok(TrapDepth {
        depth_uk: depth_j / CONSTANTS.k_b * 1e6,
        depth_recoils: depth_j / e_rec,
        recoil_uk: e_rec / CONSTANTS.k_b * 1e6,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapDepth {
    pub depth_uk: f64,
    pub depth_recoils: f64,
    pub recoil_uk: f64,
}

/// U = 2π·α_vol·I/c for α_vol in Å³ and I in W/m², in joules.
fn dipole_potential_j(alpha_a3: f64, intensity_w_m2: f64) -> f64 {
    2.0 * std::f64::consts::PI * alpha_a3 * 1e-30 * intensity_w_m2 / CONSTANTS.c
}

/// Axial sideband structure of the 1D standing-wave lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidebandStructure {
    /// Axial vibrational frequency, Hz.
    pub nu_vib_hz: f64,
    /// Lamb–Dicke parameter of the probe, η = k_probe·√(ħ/(2m·ω_vib)).
    pub lamb_dicke: f64,
    /// Relative absorption of the first vibrational sideband,
    /// 1/(1 + (2ν_vib/Δν_sat)²).
    pub relative_sideband: f64,
    /// Standing-wave peak depth, μK.
    pub axial_depth_uk: f64,
    /// Absorption spectrum samples (detuning Hz, relative absorption).
    pub spectrum: Vec<(f64, f64)>,
}

/// Harmonic expansion of the standing-wave potential
/// U(z) = U0·sin²(kz): ω_vib = k·√(2U0/m) with k = 2π/λ_trap and
/// U0 = 2π·|α|·(4·buildup·P/area)/c. The sideband weight follows the
/// resolved-sideband Lorentzian model with the saturation-broadened
/// linewidth Δν_sat, and the exported spectrum is
/// carrier + two symmetric sidebands (red/blue equal weight).
pub fn axial_sidebands(
    cfg: &LatticeConfig,
    alpha0_a3: f64,
    sat_linewidth_hz: f64,
) -> Result<SidebandStructure, LatticeError> {
    cfg.validate()?;
    if cfg.buildup <= 0.0 || cfg.onedim_power_w <= 0.0 {
        return Err(LatticeError::ZeroBuildup);
    }
    let area = cfg.area_m2();
    if area <= 0.0 {
        return Err(LatticeError::ZeroArea);
    }
    // Circulating single-direction intensity, standing-wave peak is 4×.
    let circulating = cfg.buildup * cfg.onedim_power_w / area;
    let u0 = dipole_potential_j(alpha0_a3.abs(), 4.0 * circulating);
    let k_trap = 2.0 * std::f64::consts::PI / (cfg.trap_wavelength_um * 1e-6);
    let omega_vib = k_trap * (2.0 * u0 / cfg.atom_mass_kg).sqrt();
    let nu_vib_hz = omega_vib / (2.0 * std::f64::consts::PI);

    let k_probe = 2.0 * std::f64::consts::PI / (cfg.probe_wavelength_nm * 1e-9);
    let lamb_dicke = k_probe * (CONSTANTS.hbar / (2.0 * cfg.atom_mass_kg * omega_vib)).sqrt();

    let w = 1.0 / (1.0 + (2.0 * nu_vib_hz / sat_linewidth_hz).powi(2));

    // Spectrum over ±1.5 ν_vib: carrier plus first red/blue sidebands.
    let span = 1.5 * nu_vib_hz;
    let n = 600;
    let lorentz = |delta: f64| 1.0 / (1.0 + (2.0 * delta / sat_linewidth_hz).powi(2));
    let spectrum = (0..=n)
        .map(|i| {
            let delta = -span + 2.0 * span * i as f64 / n as f64;
            let s =
                lorentz(delta) + w * lorentz(delta - nu_vib_hz) + w * lorentz(delta + nu_vib_hz);
            (delta, s)
        })
        .collect();

    Ok(SidebandStructure {
        nu_vib_hz,
        lamb_dicke,
        relative_sideband: w,
        axial_depth_uk: u0 / CONSTANTS.k_b * 1e6,
        spectrum,
    })
}

/// CSV export of the sideband spectrum.
pub fn spectrum_to_csv(s: &SidebandStructure) -> String {
    let mut out = String::from("detuning_Hz,relative_absorption\n");
    for (d, a) in &s.spectrum {
        out.push_str(&format!("{:.3},{:.6e}\n", d, a));
    }
    out
}

/// Off-resonant depumping through the neighboring excited hyperfine level:
/// γ_dp/γ = (1/2) / (2/s + 4Δ²/γ²), generalizing the unit-saturation form.
///
/// `branching` multiplies the rate for an explicit branching fraction into
/// the ground f=3 level; the defining ratio is reported unscaled.
pub fn depumping(
    saturation: f64,
    delta_rad_s: f64,
    gamma_rad_s: f64,
    branching: f64,
) -> DepumpingRate {
    let x = delta_rad_s / gamma_rad_s;
    let ratio = 0.5 / (2.0 / saturation + 4.0 * x * x);
    DepumpingRate {
        ratio,
        rate_s: ratio * gamma_rad_s * branching,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepumpingRate {
    /// γ_dp/γ.
    pub ratio: f64,
    /// Absolute depumping rate, s⁻¹.
    pub rate_s: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline() -> LatticeConfig {
        LatticeConfig {
            period_um: 0.9,
            trap_wavelength_um: 0.803,
            region_um: 250.0,
            projected_power_w: 2.0,
            onedim_power_w: 2.2,
            buildup: 50.0,
            fill_fraction: 0.5,
            probe_wavelength_nm: 685.0,
            atom_mass_kg: CONSTANTS.cs_mass,
        }
    }

    #[test]
    fn talbot_length_anchor() {
        let lt = talbot_length_um(0.803, 0.9).unwrap();
        assert!((lt - 1.46).abs() / 1.46 < 0.01, "L_T = {lt} μm");
    }

    #[test]
    fn talbot_equal_period_equals_wavelength() {
        let lt = talbot_length_um(0.8, 0.8).unwrap();
        assert!((lt - 0.8).abs() < 1e-12);
    }

    #[test]
    fn talbot_large_period_asymptote() {
        // Series oracle: L_T → 2d²/λ for d ≫ λ, within 1% at d = 20λ.
        let lambda = 0.803;
        let d = 20.0 * lambda;
        let lt = talbot_length_um(lambda, d).unwrap();
        let asymptote = 2.0 * d * d / lambda;
        assert!((lt - asymptote).abs() / asymptote < 0.01);
    }

    #[test]
    fn subwavelength_period_rejected() {
        assert!(matches!(
            talbot_length_um(0.9, 0.8),
            Err(LatticeError::SubwavelengthPeriod { .. })
        ));
    }

    #[test]
    fn geometry_anchors() {
        let g = lattice_geometry(&baseline()).unwrap();
        assert!(
            (g.sites - 1.3e7).abs() / 1.3e7 < 0.02,
            "sites = {}",
            g.sites
        );
        assert!(
            (g.atom_number - 6.6e6).abs() / 6.6e6 < 0.02,
            "N_a = {}",
            g.atom_number
        );
    }

    #[test]
    fn zero_fill_zero_atoms() {
        let mut cfg = baseline();
        cfg.fill_fraction = 0.0;
        assert_eq!(lattice_geometry(&cfg).unwrap().atom_number, 0.0);
    }

    #[test]
    fn site_count_scaling_exact() {
        let base = lattice_geometry(&baseline()).unwrap();
        let mut big = baseline();
        big.region_um *= 2.0;
        let scaled = lattice_geometry(&big).unwrap();
        assert!((scaled.sites / base.sites - 8.0).abs() < 1e-12);
        // and ∝ 1/d² L_T(d): halving d only through the explicit formula
        let lt = base.talbot_length_um;
        let expect = baseline().region_um.powi(3) / (0.9f64.powi(2) * lt);
        assert!((base.sites - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn trap_depth_anchor() {
        let d = trap_depth(
            -374.0,
            2.0,
            (250e-6f64).powi(2),
            0.803,
            CONSTANTS.cs_mass,
            false,
        )
        .unwrap();
        assert!(
            (d.depth_uk - 18.0).abs() / 18.0 < 0.05,
            "depth = {} μK",
            d.depth_uk
        );
        // Recoil unit anchor: 0.112 μK at 803 nm.
        assert!((d.recoil_uk - 0.112).abs() < 0.001);
        // "About 145" recoils in the source; the formula chain gives ≈160.
        assert!(d.depth_recoils > 140.0 && d.depth_recoils < 175.0);
    }

    #[test]
    fn zero_power_zero_depth() {
        let d = trap_depth(-374.0, 0.0, 1e-8, 0.803, CONSTANTS.cs_mass, false).unwrap();
        assert_eq!(d.depth_uk, 0.0);
    }

    #[test]
    fn depth_monotone_in_power() {
        let mut prev = -1.0;
        for p in [0.5, 1.0, 2.0] {
            let d = trap_depth(-374.0, p, 1e-8, 0.803, CONSTANTS.cs_mass, false).unwrap();
            assert!(d.depth_uk > prev);
            prev = d.depth_uk;
        }
    }

    #[test]
    fn bright_trap_needs_flag() {
        assert!(trap_depth(59.4, 1.0, 1e-8, 1.064, CONSTANTS.cs_mass, false).is_err());
        assert!(trap_depth(59.4, 1.0, 1e-8, 1.064, CONSTANTS.cs_mass, true).is_ok());
    }

    #[test]
    fn sideband_dual_route_oracle() {
        // ν_vib from ω = k√(2U0/m) must equal the recoil-unit route
        // ν = 2·ν_rec·√(U0/E_rec).
        let s = axial_sidebands(&baseline(), -374.0, 1.758e5).unwrap();
        let u0 = s.axial_depth_uk * 1e-6 * CONSTANTS.k_b;
        let e_rec = CONSTANTS.recoil_energy(CONSTANTS.cs_mass, 0.803e-6);
        let nu_rec = e_rec / CONSTANTS.planck_h;
        let route2 = 2.0 * nu_rec * (u0 / e_rec).sqrt();
        assert!(
            (s.nu_vib_hz - route2).abs() / route2 < 1e-12,
            "{} vs {}",
            s.nu_vib_hz,
            route2
        );
    }

    #[test]
    fn lamb_dicke_oscillator_length_oracle() {
        // η² = ħk²/(2mω), evaluated at the published 1.05 MHz value (≈0.055).
        let k = 2.0 * std::f64::consts::PI / 685e-9;
        let omega = 2.0 * std::f64::consts::PI * 1.05e6;
        let eta = k * (CONSTANTS.hbar / (2.0 * CONSTANTS.cs_mass * omega)).sqrt();
        assert!((eta - 0.0552).abs() < 0.0005, "η = {eta}");
        // And the same expression through the recoil form √(ν_rec/ν_vib).
        let nu_rec = CONSTANTS.recoil_energy(CONSTANTS.cs_mass, 685e-9) / CONSTANTS.planck_h;
        let eta2 = (nu_rec / 1.05e6).sqrt();
        assert!((eta - eta2).abs() < 1e-12);
    }

    #[test]
    fn carrier_absorption_is_unity() {
        let s = axial_sidebands(&baseline(), -374.0, 1.758e5).unwrap();
        let at_zero = s
            .spectrum
            .iter()
            .min_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap())
            .unwrap();
        assert!((at_zero.1 - 1.0).abs() < 1e-3, "S(0) = {}", at_zero.1);
    }

    #[test]
    fn spectrum_symmetric_and_finite() {
        let s = axial_sidebands(&baseline(), -374.0, 1.758e5).unwrap();
        let n = s.spectrum.len();
        for k in 0..n / 2 {
            let (dl, al) = s.spectrum[k];
            let (dr, ar) = s.spectrum[n - 1 - k];
            assert!((dl + dr).abs() < 1.0);
            assert!((al - ar).abs() < 1e-9, "asymmetry at {dl} Hz");
        }
        let integral: f64 = s.spectrum.iter().map(|(_, a)| a).sum();
        assert!(integral.is_finite());
    }

    #[test]
    fn vibration_frequency_scales_with_sqrt_intensity() {
        let s1 = axial_sidebands(&baseline(), -374.0, 1.758e5).unwrap();
        let mut cfg = baseline();
        cfg.onedim_power_w *= 4.0;
        let s2 = axial_sidebands(&cfg, -374.0, 1.758e5).unwrap();
        assert!((s2.nu_vib_hz / s1.nu_vib_hz - 2.0).abs() < 1e-9);
        // η ∝ ν_vib^(−1/2)
        assert!((s1.lamb_dicke / s2.lamb_dicke - 2.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn zero_buildup_rejected() {
        let mut cfg = baseline();
        cfg.buildup = 0.0;
        assert!(matches!(
            axial_sidebands(&cfg, -374.0, 1.758e5),
            Err(LatticeError::ZeroBuildup)
        ));
    }

    #[test]
    fn depumping_anchor() {
        // s = 1, Δ65 = 2π × 127 MHz, γ = 1/1.28 μs.
        let gamma = 1.0 / 1.28e-6;
        let delta = 2.0 * std::f64::consts::PI * 127e6;
        let d = depumping(1.0, delta, gamma, 1.0);
        assert!(
            (d.ratio - 1.2e-7).abs() / 1.2e-7 < 0.05,
            "ratio = {}",
            d.ratio
        );
        // rate = ratio·γ ≈ 0.094 s⁻¹ with unit branching.
        assert!((d.rate_s - 0.094).abs() < 0.002, "rate = {}", d.rate_s);
    }

    #[test]
    fn depumping_vanishes_at_large_splitting() {
        let gamma = 1.0 / 1.28e-6;
        let d = depumping(1.0, 1e15, gamma, 1.0);
        assert!(d.ratio < 1e-12);
    }

    #[test]
    fn depumping_branching_scales_rate_only() {
        let gamma = 1.0 / 1.28e-6;
        let delta = 2.0 * std::f64::consts::PI * 127e6;
        let a = depumping(1.0, delta, gamma, 1.0);
        let b = depumping(1.0, delta, gamma, 0.05);
        assert_eq!(a.ratio, b.ratio);
        assert!((b.rate_s / a.rate_s - 0.05).abs() < 1e-12);
    }
}
