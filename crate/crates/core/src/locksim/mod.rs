//! Discrete-time Monte Carlo of the dual-transition lock.
//!
//! The probe alternates between the two stretched Zeeman transitions at the
//! switching rate f_s; within each switching half-period the probe frequency
//! is square-wave modulated at f_m with depth Δν/2, and the demodulated
//! photon-count difference of each modulation cycle feeds a pure-integrator
//! servo for that transition. The clock output is the average of the two
//! transition estimates, which cancels the (equal and opposite) Zeeman
//! offsets of a bias field.
//!
//! Photon counts are Poisson-sampled per modulation window below 10⁴
//! expected counts and Gaussian-approximated above; runs are intended at
//! desk-scale detection rates (≲10⁶ s⁻¹), bridging to higher rates through
//! the 1/√Ṅ law.
//!
//! At full duty the ideal two-point discriminant reaches the Cramér–Rao
//! bound Δν/(ν_c√(2Ṅτ)), a factor √2 below the textbook shot-noise law
//! Δν/(ν_c√(Ṅτ)); the alternating probe/cool timing of the baseline
//! scenario (duty 0.5) lands exactly on the textbook law.

pub mod allan;

pub use allan::{allan_deviation, series_to_csv, AllanError, AllanSeries};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Magnetic-field fluctuation model on top of the bias field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum MagneticNoise {
    None,
    /// Independent Gaussian field sample each time step.
    White {
        amplitude_t: f64,
    },
    /// Random walk with the given diffusion amplitude.
    RandomWalk {
        amplitude_t_per_sqrt_s: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Clock frequency, Hz (fractional output is referenced to this).
    pub nu_c_hz: f64,
    /// Lorentzian FWHM of the optical response, Hz.
    pub linewidth_hz: f64,
    /// On-resonance detected photon rate, s⁻¹.
    pub detection_rate_hz: f64,
    /// ν± switching rate, Hz.
    pub f_s_hz: f64,
    /// Modulation frequency, Hz (one +/− window pair per cycle).
    pub f_m_hz: f64,
    /// Integrator gain per modulation cycle; 0 selects the default tuned to
    /// a closed-loop bandwidth of f_s/10.
    pub servo_gain: f64,
    /// White FM noise PSD of the probe laser, Hz²/Hz.
    pub lo_white_psd_hz2_per_hz: f64,
    /// Additional low-frequency FM floor below the knee, Hz²/Hz.
    pub lo_flicker_floor_hz2_per_hz: f64,
    /// Knee frequency separating the floor from the white plateau, Hz.
    pub lo_knee_hz: f64,
    /// Static bias field, T.
    pub magnetic_bias_t: f64,
    pub magnetic_noise: MagneticNoise,
    /// Probe both ν± and average (true) or lock to ν+ only (false).
    pub nu_pm_averaging: bool,
    /// Live fraction of each switching half-period, (0, 1].
    pub duty: f64,
    /// Poisson photon statistics (false gives the deterministic expectation,
    /// useful for servo checks).
    pub shot_noise: bool,
    pub duration_s: f64,
    pub time_step_s: f64,
    /// Output sample interval for the recorded fractional-frequency trace.
    pub output_interval_s: f64,
    pub seed: u64,
}

impl SimConfig {
    /// Desk-scale baseline: shot-noise-limited lock at Ṅ = 2.3×10⁵ s⁻¹ with
    /// the alternating probe/cool timing (duty 0.5).
    pub fn desk_scale_baseline() -> Self {
        SimConfig {
            nu_c_hz: 4.376e14,
            linewidth_hz: 1.758e5,
            detection_rate_hz: 2.3e5,
            f_s_hz: 50.0,
            f_m_hz: 1000.0,
            servo_gain: 0.0,
            lo_white_psd_hz2_per_hz: 0.0,
            lo_flicker_floor_hz2_per_hz: 0.0,
            lo_knee_hz: 2.0e4,
            magnetic_bias_t: 0.0,
            magnetic_noise: MagneticNoise::None,
            nu_pm_averaging: true,
            duty: 0.5,
            shot_noise: true,
            duration_s: 1000.0,
            time_step_s: 1e-4,
            output_interval_s: 0.1,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    BadConfig(String),
    #[error(
        "servo unstable: |frequency estimate| exceeded 1e4 linewidths at t = {t_s} s (estimate {est_hz} Hz)"
    )]
    UnstableServo { t_s: f64, est_hz: f64 },
    #[error(transparent)]
    Allan(#[from] AllanError),
}

/// Recorded simulation output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    pub seed: u64,
    /// Output sample interval, s.
    pub sample_interval_s: f64,
    /// Fractional clock error y per output bin (bin-averaged).
    pub y: Vec<f64>,
    /// Detected photons per output bin.
    pub photons_per_bin: Vec<f64>,
    /// Net servo correction applied per output bin, Hz.
    pub corrections_per_bin: Vec<f64>,
    /// Realized live fraction after integer-cycle rounding.
    pub effective_duty: f64,
}

impl SimTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,y,photons,correction_hz\n");
        for (k, y) in self.y.iter().enumerate() {
            out.push_str(&format!(
                "{:.6},{:.9e},{:.3},{:.6e}\n",
                (k as f64 + 0.5) * self.sample_interval_s,
                y,
                self.photons_per_bin[k],
                self.corrections_per_bin[k]
            ));
        }
        out
    }
}

struct Timing {
    steps_per_window: usize,
    cycles_per_half: usize,
    live_cycles_per_half: usize,
    total_cycles: usize,
    cycles_per_bin: usize,
}

fn layout(cfg: &SimConfig) -> Result<Timing, SimError> {
    let bad = |m: String| Err(SimError::BadConfig(m));
    if !(cfg.duty > 0.0 && cfg.duty <= 1.0) {
        return bad(format!("duty {} outside (0, 1]", cfg.duty));
    }
    if cfg.time_step_s > 1.0 / (10.0 * cfg.f_m_hz) + 1e-15 {
        return bad(format!(
            "time step {} s exceeds 1/(10 f_m) = {} s",
            cfg.time_step_s,
            1.0 / (10.0 * cfg.f_m_hz)
        ));
    }
    if cfg.duration_s < 100.0 / cfg.f_s_hz {
        return bad(format!(
            "duration {} s is below 100/f_s = {} s",
            cfg.duration_s,
            100.0 / cfg.f_s_hz
        ));
    }
    if !(cfg.detection_rate_hz > 0.0 && cfg.linewidth_hz > 0.0 && cfg.nu_c_hz > 0.0) {
        return bad("rates, linewidth and nu_c must be positive".into());
    }
    let window_s = 1.0 / (2.0 * cfg.f_m_hz);
    let spw = window_s / cfg.time_step_s;
    if (spw - spw.round()).abs() > 1e-9 || spw.round() < 1.0 {
        return bad(format!(
            "modulation half-period {window_s} s must be an integer number of time steps"
        ));
    }
    let cph = cfg.f_m_hz / (2.0 * cfg.f_s_hz);
    if (cph - cph.round()).abs() > 1e-9 || cph.round() < 1.0 {
        return bad(format!(
            "switching half-period must contain an integer number of modulation cycles, got {cph}"
        ));
    }
    let cycles_per_half = cph.round() as usize;
    let live = (cfg.duty * cycles_per_half as f64).round().max(1.0) as usize;
    let live_cycles_per_half = live.min(cycles_per_half);

    let cpb = cfg.output_interval_s * cfg.f_m_hz;
    if (cpb - cpb.round()).abs() > 1e-9 || cpb.round() < 1.0 {
        return bad("output interval must be an integer number of modulation cycles".into());
    }
    let total_cycles = (cfg.duration_s * cfg.f_m_hz).round() as usize;
    Ok(Timing {
        steps_per_window: spw.round() as usize,
        cycles_per_half,
        live_cycles_per_half,
        total_cycles,
        cycles_per_bin: cpb.round() as usize,
    })
}

/// Run one lock simulation. Deterministic for a given (config, seed).
pub fn simulate(cfg: &SimConfig) -> Result<SimTrace, SimError> {
    let timing = layout(cfg)?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);

    let dt = cfg.time_step_s;
    let window_s = timing.steps_per_window as f64 * dt;
    let half_width = cfg.linewidth_hz / 2.0;
    let lorentz = |delta: f64| 1.0 / (1.0 + (2.0 * delta / cfg.linewidth_hz).powi(2));

    // Zeeman offsets of the two probed lines, Hz.
    let bias_shift = crate::zeeman::stretched_shift(cfg.magnetic_bias_t);
    let line_offset = [bias_shift.0, bias_shift.1];

    // Gain default: closed-loop bandwidth f_s/10 given the per-transition
    // update rate duty·f_m/2.
    let update_rate = cfg.duty * cfg.f_m_hz / if cfg.nu_pm_averaging { 2.0 } else { 1.0 };
    let gain = if cfg.servo_gain > 0.0 {
        cfg.servo_gain
    } else {
        2.0 * std::f64::consts::PI * cfg.f_s_hz / 10.0 / update_rate
    };

    // LO noise per step: white FM plus an optional one-pole low-passed floor
    // below the knee.
    let sigma_white = (cfg.lo_white_psd_hz2_per_hz / (2.0 * dt)).sqrt();
    let flicker_a = (-2.0 * std::f64::consts::PI * cfg.lo_knee_hz * dt).exp();
    let sigma_floor = (cfg.lo_flicker_floor_hz2_per_hz / (2.0 * dt)).sqrt();
    let mut flicker_state = 0.0f64;

    let mut b_walk = 0.0f64;
    let walk_scale = match cfg.magnetic_noise {
        MagneticNoise::RandomWalk {
            amplitude_t_per_sqrt_s,
        } => amplitude_t_per_sqrt_s * dt.sqrt(),
        _ => 0.0,
    };

    // Frequency estimates for the two transitions, Hz relative to nu_c.
    let mut est = [0.0f64; 2];
    let escape = 1e4 * cfg.linewidth_hz;

    let n_bins = timing.total_cycles / timing.cycles_per_bin;
    let mut y = Vec::with_capacity(n_bins);
    let mut photons = Vec::with_capacity(n_bins);
    let mut corrections = Vec::with_capacity(n_bins);

    let mut bin_y = 0.0f64;
    let mut bin_photons = 0.0f64;
    let mut bin_corr = 0.0f64;
    let mut live_cycles_total = 0usize;

    for cycle in 0..timing.total_cycles {
        let half_index = cycle / timing.cycles_per_half;
        let within = cycle % timing.cycles_per_half;
        let live = within < timing.live_cycles_per_half;
        // Which transition this half-period probes.
        let tr = if cfg.nu_pm_averaging {
            half_index % 2
        } else {
            0
        };

        if live {
            live_cycles_total += 1;
            let mut counts = [0.0f64; 2];
            for (w, count) in counts.iter_mut().enumerate() {
                let mod_sign = if w == 0 { 1.0 } else { -1.0 };
                let mut mu_sum = 0.0f64;
                for _ in 0..timing.steps_per_window {
                    let mut lo = 0.0;
                    if sigma_white > 0.0 {
                        lo += sigma_white * rng.sample::<f64, _>(StandardNormal);
                    }
                    if sigma_floor > 0.0 {
                        flicker_state = flicker_a * flicker_state
                            + (1.0 - flicker_a)
                                * sigma_floor
                                * rng.sample::<f64, _>(StandardNormal);
                        lo += flicker_state;
                    }
                    let b = match cfg.magnetic_noise {
                        MagneticNoise::None => cfg.magnetic_bias_t,
                        MagneticNoise::White { amplitude_t } => {
                            cfg.magnetic_bias_t + amplitude_t * rng.sample::<f64, _>(StandardNormal)
                        }
                        MagneticNoise::RandomWalk { .. } => {
                            b_walk += walk_scale * rng.sample::<f64, _>(StandardNormal);
                            cfg.magnetic_bias_t + b_walk
                        }
                    };
                    let line = match cfg.magnetic_noise {
                        MagneticNoise::None => line_offset[tr],
                        _ => {
                            let s = crate::zeeman::stretched_shift(b);
                            if tr == 0 {
                                s.0
                            } else {
                                s.1
                            }
                        }
                    };
                    let delta = est[tr] + mod_sign * half_width + lo - line;
                    mu_sum += lorentz(delta);
                }
                let mu = cfg.detection_rate_hz * dt * mu_sum;
                *count = if !cfg.shot_noise {
                    mu
                } else if mu > 1e4 {
                    // Gaussian approximation for bright windows.
                    (mu + mu.sqrt() * rng.sample::<f64, _>(StandardNormal)).max(0.0)
                } else if mu > 0.0 {
                    Poisson::new(mu).map(|p| p.sample(&mut rng)).unwrap_or(0.0)
                } else {
                    0.0
                };
            }
            bin_photons += counts[0] + counts[1];

            // Two-point discriminant: δ̂ = −(N₊ − N₋)·Δν / (2·Ṅ·T_w).
            let expected = cfg.detection_rate_hz * window_s;
            let delta_hat = -(counts[0] - counts[1]) * cfg.linewidth_hz / (2.0 * expected);
            let correction = gain * delta_hat;
            est[tr] -= correction;
            bin_corr += -correction;
            if est[tr].abs() > escape {
                return Err(SimError::UnstableServo {
                    t_s: cycle as f64 / cfg.f_m_hz,
                    est_hz: est[tr],
                });
            }
        }

        let clock = if cfg.nu_pm_averaging {
            0.5 * (est[0] + est[1])
        } else {
            est[0]
        };
        bin_y += clock / cfg.nu_c_hz;

        if (cycle + 1) % timing.cycles_per_bin == 0 {
            y.push(bin_y / timing.cycles_per_bin as f64);
            photons.push(bin_photons);
            corrections.push(bin_corr);
            bin_y = 0.0;
            bin_photons = 0.0;
            bin_corr = 0.0;
        }
    }

    Ok(SimTrace {
        seed: cfg.seed,
        sample_interval_s: timing.cycles_per_bin as f64 / cfg.f_m_hz,
        y,
        photons_per_bin: photons,
        corrections_per_bin: corrections,
        effective_duty: live_cycles_total as f64 / timing.total_cycles as f64,
    })
}

/// Allan deviation of a trace over the given τ grid.
pub fn trace_adev(trace: &SimTrace, taus_s: &[f64]) -> Result<AllanSeries, SimError> {
    Ok(allan_deviation(&trace.y, trace.sample_interval_s, taus_s)?)
}

/// Aggregated multi-seed campaign result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub tau_s: Vec<f64>,
    /// Mean σ(τ) across seeds.
    pub mean_adev: Vec<f64>,
    /// Sample standard deviation across seeds.
    pub spread: Vec<f64>,
    /// Standard error of the mean, spread/√n.
    pub standard_error: Vec<f64>,
    pub per_seed: Vec<AllanSeries>,
    /// Mean fractional error per seed (bias diagnostics).
    pub mean_y_per_seed: Vec<f64>,
}

/// Run `n_seeds` independent simulations (seeds derived deterministically
/// from the master seed in the config) and aggregate. Seeds run in parallel;
/// the reduction order is fixed by seed index.
pub fn run_campaign(
    cfg: &SimConfig,
    n_seeds: usize,
    taus_s: &[f64],
) -> Result<CampaignResult, SimError> {
    if n_seeds == 0 {
        return Err(SimError::BadConfig(
            "campaign needs at least one seed".into(),
        ));
    }
    let runs: Vec<Result<(AllanSeries, f64), SimError>> = (0..n_seeds)
        .into_par_iter()
        .map(|k| {
            let mut c = *cfg;
            c.seed = splitmix64(cfg.seed.wrapping_add(k as u64));
            let trace = simulate(&c)?;
            let adev = trace_adev(&trace, taus_s)?;
            let mean_y = trace.y.iter().sum::<f64>() / trace.y.len() as f64;
            Ok((adev, mean_y))
        })
        .collect();

    let mut per_seed = Vec::with_capacity(n_seeds);
    let mut mean_y_per_seed = Vec::with_capacity(n_seeds);
    for r in runs {
        let (adev, my) = r?;
        per_seed.push(adev);
        mean_y_per_seed.push(my);
    }

    let nt = taus_s.len();
    let mut mean = vec![0.0; nt];
    for s in &per_seed {
        for (k, a) in s.adev.iter().enumerate() {
            mean[k] += a;
        }
    }
    for m in &mut mean {
        *m /= n_seeds as f64;
    }
    let mut spread = vec![0.0; nt];
    if n_seeds > 1 {
        for s in &per_seed {
            for (k, a) in s.adev.iter().enumerate() {
                spread[k] += (a - mean[k]).powi(2);
            }
        }
        for s in &mut spread {
            *s = (*s / (n_seeds as f64 - 1.0)).sqrt();
        }
    }
    let standard_error = spread.iter().map(|s| s / (n_seeds as f64).sqrt()).collect();
    Ok(CampaignResult {
        tau_s: taus_s.to_vec(),
        mean_adev: mean,
        spread,
        standard_error,
        per_seed,
        mean_y_per_seed,
    })
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Analytic shot-noise ADEV coefficient for comparison runs:
/// σ(τ)·√τ = Δν/(ν_c·√Ṅ).
pub fn analytic_shot_coefficient(cfg: &SimConfig) -> f64 {
    cfg.linewidth_hz / cfg.nu_c_hz / cfg.detection_rate_hz.sqrt()
}
