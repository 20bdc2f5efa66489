//! Scenario configuration: a TOML file selecting the dataset and every
//! module's parameters. Unknown keys are rejected. Two scenarios ship with
//! the binary (`cs-baseline`, `rb-comparison`); `--config` loads any file
//! with the same schema.

use anyhow::{bail, Context, Result};
use clockdesign_core::dataset::{self, AtomicDataset, Species};
use clockdesign_core::locksim::{MagneticNoise, SimConfig};
use clockdesign_core::stability::ClockParams;
use clockdesign_core::systematics::TimingTarget;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const CS_BASELINE: &str = include_str!("../scenarios/cs-baseline.toml");
pub const RB_COMPARISON: &str = include_str!("../scenarios/rb-comparison.toml");

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub dataset: DatasetRef,
    pub clock: ClockSection,
    #[serde(default)]
    pub lattice: Option<LatticeSection>,
    #[serde(default)]
    pub polarizability: Option<PolarizabilitySection>,
    #[serde(default)]
    pub zeeman: Option<ZeemanSection>,
    #[serde(default)]
    pub systematics: Option<SystematicsSection>,
    #[serde(default)]
    pub simulation: Option<SimulationSection>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRef {
    /// "cs" or "rb87" for the bundled line lists.
    #[serde(default)]
    pub bundled: Option<String>,
    /// Path to an external dataset file (text or JSON mirror).
    #[serde(default)]
    pub path: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ClockSection {
    pub nu_c_hz: f64,
    pub tau_a_s: f64,
    pub eta_col: f64,
    pub eta_det: f64,
    pub saturation: f64,
    pub lo_psd_hz2_per_hz: f64,
    pub f_s_hz: f64,
    pub f_m_hz: f64,
    /// Explicit atom number; omitted means "derive from the lattice".
    #[serde(default)]
    pub atom_number: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub period_um: f64,
    pub trap_wavelength_um: f64,
    pub region_um: f64,
    pub projected_power_w: f64,
    pub onedim_power_w: f64,
    pub buildup: f64,
    pub fill_fraction: f64,
    pub probe_wavelength_nm: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizabilitySection {
    pub ground: String,
    pub excited: String,
    pub excited_f: i32,
    pub excited_m: i32,
    pub scan_window_nm: [f64; 2],
    pub scan_step_nm: f64,
    pub magic_window_nm: [f64; 2],
    pub magic_step_nm: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ZeemanSection {
    pub b_min_t: f64,
    pub b_max_t: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SystematicsSection {
    /// Timing target, e.g. "1ns@30d".
    pub target: String,
    pub temperature_k: f64,
    /// Calibrated reference: differential polarizability at the probe
    /// wavelength, Å³.
    pub probe_delta_alpha_a3: f64,
    pub probe_sat_intensity_mw_cm2: f64,
    /// Calibrated dc-field coefficient, Hz/(V/m).
    pub dc_beta_hz_per_v_m: f64,
    pub bbr_shift_ground_300k_hz: f64,
    pub bbr_shift_excited_300k_hz: f64,
    pub bbr_temperature_k: f64,
    /// Reference magic-point slope, Å³/MHz (the report also lists the
    /// scan-derived value).
    pub lattice_slope_a3_per_mhz: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub linewidth_hz: f64,
    pub detection_rate_hz: f64,
    pub f_s_hz: f64,
    pub f_m_hz: f64,
    pub duty: f64,
    pub duration_s: f64,
    pub time_step_s: f64,
    pub output_interval_s: f64,
    pub lo_white_psd_hz2_per_hz: f64,
    #[serde(default)]
    pub lo_flicker_floor_hz2_per_hz: f64,
    #[serde(default = "default_knee")]
    pub lo_knee_hz: f64,
    #[serde(default)]
    pub magnetic_bias_t: f64,
    #[serde(default)]
    pub magnetic_noise_white_t: f64,
    #[serde(default = "default_true")]
    pub nu_pm_averaging: bool,
    #[serde(default = "default_true")]
    pub shot_noise: bool,
    #[serde(default)]
    pub servo_gain: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// τ grid for the Allan deviation output.
    pub tau_grid_s: Vec<f64>,
    #[serde(default = "default_one")]
    pub campaign_seeds: usize,
}

fn default_knee() -> f64 {
    2.0e4
}
fn default_true() -> bool {
    true
}
fn default_seed() -> u64 {
    1
}
fn default_one() -> usize {
    1
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Scenario> {
        toml::from_str(text).context("scenario file does not match the documented schema")
    }

    /// Resolve `--scenario NAME` (bundled) or a path to a TOML file.
    pub fn resolve(selector: &str) -> Result<Scenario> {
        match selector {
            "cs-baseline" => Self::from_toml(CS_BASELINE),
            "rb-comparison" => Self::from_toml(RB_COMPARISON),
            path if Path::new(path).exists() => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading scenario file {path}"))?;
                Self::from_toml(&text)
            }
            other => bail!(
                "unknown scenario `{other}` (bundled: cs-baseline, rb-comparison; or pass a file path)"
            ),
        }
    }

    pub fn load_dataset(&self) -> Result<AtomicDataset> {
        match (&self.dataset.bundled, &self.dataset.path) {
            (Some(name), None) => match name.as_str() {
                "cs" => Ok(dataset::bundled(Species::Cs)),
                "rb87" => Ok(dataset::bundled(Species::Rb87)),
                other => bail!("unknown bundled dataset `{other}` (cs, rb87)"),
            },
            (None, Some(path)) => {
                dataset::load_dataset(Path::new(path)).map_err(anyhow::Error::from)
            }
            _ => bail!("dataset section must set exactly one of `bundled` or `path`"),
        }
    }

    pub fn clock_params(&self, atom_number: f64) -> ClockParams {
        ClockParams {
            nu_c_hz: self.clock.nu_c_hz,
            tau_a_s: self.clock.tau_a_s,
            atom_number,
            eta_col: self.clock.eta_col,
            eta_det: self.clock.eta_det,
            lo_psd_hz2_per_hz: self.clock.lo_psd_hz2_per_hz,
            f_s_hz: self.clock.f_s_hz,
            f_m_hz: self.clock.f_m_hz,
            saturation: self.clock.saturation,
        }
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let s = self
            .simulation
            .as_ref()
            .context("scenario has no [simulation] section")?;
        Ok(SimConfig {
            nu_c_hz: self.clock.nu_c_hz,
            linewidth_hz: s.linewidth_hz,
            detection_rate_hz: s.detection_rate_hz,
            f_s_hz: s.f_s_hz,
            f_m_hz: s.f_m_hz,
            servo_gain: s.servo_gain,
            lo_white_psd_hz2_per_hz: s.lo_white_psd_hz2_per_hz,
            lo_flicker_floor_hz2_per_hz: s.lo_flicker_floor_hz2_per_hz,
            lo_knee_hz: s.lo_knee_hz,
            magnetic_bias_t: s.magnetic_bias_t,
            magnetic_noise: if s.magnetic_noise_white_t > 0.0 {
                MagneticNoise::White {
                    amplitude_t: s.magnetic_noise_white_t,
                }
            } else {
                MagneticNoise::None
            },
            nu_pm_averaging: s.nu_pm_averaging,
            duty: s.duty,
            shot_noise: s.shot_noise,
            duration_s: s.duration_s,
            time_step_s: s.time_step_s,
            output_interval_s: s.output_interval_s,
            seed: s.seed,
        })
    }
}

/// Parse a timing target of the form `<dt><unit>@<tau><unit>`,
/// e.g. "1ns@30d".
pub fn parse_target(s: &str) -> Result<TimingTarget> {
    let (dt, tau) = s
        .split_once('@')
        .with_context(|| format!("timing target `{s}` must look like `1ns@30d`"))?;
    Ok(TimingTarget {
        delta_t_s: parse_duration(dt)?,
        tau_s: parse_duration(tau)?,
    })
}

fn parse_duration(s: &str) -> Result<f64> {
    let s = s.trim();
    let split = s
        .find(|c: char| c.is_ascii_alphabetic())
        .with_context(|| format!("duration `{s}` needs a unit (ns, us, ms, s, min, h, d)"))?;
    let (num, unit) = s.split_at(split);
    let v: f64 = num
        .trim()
        .parse()
        .with_context(|| format!("bad number in `{s}`"))?;
    let scale = match unit.trim() {
        "ns" => 1e-9,
        "us" | "µs" => 1e-6,
        "ms" => 1e-3,
        "s" => 1.0,
        "min" | "m" => 60.0,
        "h" => 3600.0,
        "d" => 86400.0,
        other => bail!("unknown duration unit `{other}`"),
    };
    Ok(v * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_parse() {
        let cs = Scenario::resolve("cs-baseline").unwrap();
        assert_eq!(cs.name, "cs-baseline");
        assert!(cs.lattice.is_some());
        assert!(cs.simulation.is_some());
        let rb = Scenario::resolve("rb-comparison").unwrap();
        assert_eq!(rb.name, "rb-comparison");
        assert!(rb.clock.atom_number.is_some());
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = format!("{CS_BASELINE}\n[clock2]\nx = 1\n");
        assert!(Scenario::from_toml(&text).is_err());
        let text = CS_BASELINE.replace("nu_c_hz", "nu_c_hz_typo");
        assert!(Scenario::from_toml(&text).is_err());
    }

    #[test]
    fn target_parsing() {
        let t = parse_target("1ns@30d").unwrap();
        assert_eq!(t.delta_t_s, 1e-9);
        assert_eq!(t.tau_s, 30.0 * 86400.0);
        assert!(parse_target("30d").is_err());
        assert!(parse_target("1parsec@1s").is_err());
    }
}
