//! Subcommand implementations. Each command validates its configuration
//! fully, computes, and writes artifacts into the output directory. Outputs
//! carry no timestamps, so re-running with identical inputs reproduces them
//! byte for byte.

use crate::config::{parse_target, Scenario};
use anyhow::{Context, Result};
use clockdesign_core::angular::HalfInt;
use clockdesign_core::dataset::AtomicDataset;
use clockdesign_core::lattice::{self, LatticeConfig};
use clockdesign_core::locksim;
use clockdesign_core::polarizability::{self, HyperfineState, Probe};
use clockdesign_core::stability;
use clockdesign_core::systematics::{self, AllocationPolicy};
use clockdesign_core::zeeman;
use clockdesign_core::LevelId;
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};

/// Artifact formats the CLI can emit; `--formats` selects a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Text,
}

impl OutputFormat {
    fn matches(self, name: &str) -> bool {
        match self {
            OutputFormat::Csv => name.ends_with(".csv"),
            OutputFormat::Json => name.ends_with(".json"),
            OutputFormat::Text => name.ends_with(".txt"),
        }
    }
}

pub struct Ctx {
    pub scenario: Scenario,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Ctx {
    pub fn new(scenario: Scenario, out_dir: &Path, formats: Vec<OutputFormat>) -> Result<Ctx> {
        fs::create_dir_all(out_dir)
            .with_context(|| format!("creating output directory {}", out_dir.display()))?;
        Ok(Ctx {
            scenario,
            out_dir: out_dir.to_path_buf(),
            formats,
        })
    }

    fn write(&self, name: &str, contents: &str) -> Result<Option<PathBuf>> {
        if !self.formats.iter().any(|f| f.matches(name)) {
            return Ok(None);
        }
        let path = self.out_dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
        Ok(Some(path))
    }

    fn dataset(&self) -> Result<AtomicDataset> {
        self.scenario.load_dataset()
    }

    fn pol_section(&self) -> Result<&crate::config::PolarizabilitySection> {
        self.scenario
            .polarizability
            .as_ref()
            .context("scenario has no [polarizability] section")
    }

    fn levels(&self, ds: &AtomicDataset) -> Result<(LevelId, HyperfineState)> {
        let p = self.pol_section()?;
        let ground = LevelId::parse_key(ds.species, &p.ground)
            .with_context(|| format!("bad ground level `{}`", p.ground))?;
        let excited = HyperfineState {
            level: LevelId::parse_key(ds.species, &p.excited)
                .with_context(|| format!("bad excited level `{}`", p.excited))?,
            f: HalfInt::from_int(p.excited_f),
            m: HalfInt::from_int(p.excited_m),
        };
        Ok((ground, excited))
    }

    fn lattice_config(&self, ds: &AtomicDataset) -> Result<LatticeConfig> {
        let l = self
            .scenario
            .lattice
            .as_ref()
            .context("scenario has no [lattice] section")?;
        Ok(LatticeConfig {
            period_um: l.period_um,
            trap_wavelength_um: l.trap_wavelength_um,
            region_um: l.region_um,
            projected_power_w: l.projected_power_w,
            onedim_power_w: l.onedim_power_w,
            buildup: l.buildup,
            fill_fraction: l.fill_fraction,
            probe_wavelength_nm: l.probe_wavelength_nm,
            atom_mass_kg: ds.species.mass_kg(),
        })
    }

    /// Atom number: explicit override or derived from the lattice geometry.
    fn atom_number(&self, ds: &AtomicDataset) -> Result<f64> {
        if let Some(n) = self.scenario.clock.atom_number {
            return Ok(n);
        }
        let cfg = self.lattice_config(ds)?;
        Ok(lattice::lattice_geometry(&cfg)?.atom_number)
    }
}

pub fn polarizability_scan(ctx: &Ctx, window: Option<(f64, f64)>, step: Option<f64>) -> Result<()> {
    let ds = ctx.dataset()?;
    let p = ctx.pol_section()?;
    let (ground, excited) = ctx.levels(&ds)?;
    let window = window.unwrap_or((p.scan_window_nm[0], p.scan_window_nm[1]));
    let step = step.unwrap_or(p.scan_step_nm);
    let rows = polarizability::scan(
        &ds,
        &ground,
        &excited,
        window,
        step,
        polarizability::DEFAULT_EXCLUSION_NM,
    )?;
    ctx.write(
        "polarizability_scan.csv",
        &polarizability::scan_to_csv(&rows),
    )?;
    Ok(())
}

pub fn magic_find(ctx: &Ctx, window: Option<(f64, f64)>, step: Option<f64>) -> Result<()> {
    let ds = ctx.dataset()?;
    let p = ctx.pol_section()?;
    let (ground, excited) = ctx.levels(&ds)?;
    let window = window.unwrap_or((p.magic_window_nm[0], p.magic_window_nm[1]));
    let step = step.unwrap_or(p.magic_step_nm);
    let points = polarizability::find_magic_wavelengths(&ds, &ground, &excited, window, step)?;
    let mut csv = String::from("wavelength_nm,slope_a3_per_mhz,bracket_lo_nm,bracket_hi_nm\n");
    for pt in &points {
        csv.push_str(&format!(
            "{:.6},{:.6e},{:.4},{:.4}\n",
            pt.wavelength_nm, pt.slope_a3_per_mhz, pt.bracket_nm.0, pt.bracket_nm.1
        ));
    }
    ctx.write("magic_points.csv", &csv)?;
    ctx.write("magic_points.json", &serde_json::to_string_pretty(&points)?)?;
    for pt in &points {
        println!(
            "magic wavelength {:.4} nm (slope {:.3e} Å³/MHz)",
            pt.wavelength_nm, pt.slope_a3_per_mhz
        );
    }
    Ok(())
}

pub fn zeeman_map_cmd(ctx: &Ctx, level_key: Option<&str>) -> Result<()> {
    let ds = ctx.dataset()?;
    let z = ctx
        .scenario
        .zeeman
        .as_ref()
        .context("scenario has no [zeeman] section")?;
    let keys: Vec<String> = match level_key {
        Some(k) => vec![k.to_string()],
        None => ds.hyperfine.keys().cloned().collect(),
    };
    for key in keys {
        let level =
            LevelId::parse_key(ds.species, &key).with_context(|| format!("bad level `{key}`"))?;
        let map = zeeman::zeeman_map(&ds, &level, z.b_min_t, z.b_max_t, z.steps)?;
        let name = format!("zeeman_{}.csv", key.replace('/', "_"));
        ctx.write(&name, &map.to_csv())?;
    }
    Ok(())
}

pub fn lattice_design(ctx: &Ctx) -> Result<()> {
    let ds = ctx.dataset()?;
    let cfg = ctx.lattice_config(&ds)?;
    let (ground, _) = ctx.levels(&ds)?;
    let alpha = polarizability::dynamic_polarizability(
        &ds,
        &ground,
        Probe::Nm(cfg.trap_wavelength_um * 1000.0),
    )?;
    let geometry = lattice::lattice_geometry(&cfg)?;
    let depth = lattice::trap_depth(
        alpha.alpha0_a3,
        cfg.projected_power_w,
        cfg.area_m2(),
        cfg.trap_wavelength_um,
        cfg.atom_mass_kg,
        false,
    )?;
    let sat_lw = stability::linewidth_hz(ctx.scenario.clock.tau_a_s, ctx.scenario.clock.saturation);
    let sidebands = lattice::axial_sidebands(&cfg, alpha.alpha0_a3, sat_lw)?;
    let gamma = 1.0 / ctx.scenario.clock.tau_a_s;
    let delta65 = hyperfine_splitting_rad_s(&ds);
    let depump = lattice::depumping(ctx.scenario.clock.saturation, delta65, gamma, 1.0);

    let summary = json!({
        "trap_polarizability_a3": alpha.alpha0_a3,
        "talbot_length_um": geometry.talbot_length_um,
        "sites": geometry.sites,
        "atom_number": geometry.atom_number,
        "trap_depth_uk": depth.depth_uk,
        "trap_depth_recoils": depth.depth_recoils,
        "recoil_uk": depth.recoil_uk,
        "axial_vibration_hz": sidebands.nu_vib_hz,
        "lamb_dicke": sidebands.lamb_dicke,
        "relative_sideband": sidebands.relative_sideband,
        "axial_depth_uk": sidebands.axial_depth_uk,
        "depumping_ratio": depump.ratio,
        "depumping_rate_s": depump.rate_s,
    });
    ctx.write("lattice.json", &serde_json::to_string_pretty(&summary)?)?;
    ctx.write(
        "sideband_spectrum.csv",
        &lattice::spectrum_to_csv(&sidebands),
    )?;
    Ok(())
}

/// |E_hf(f_max) − E_hf(f_max−1)| of the clock upper level, rad/s.
fn hyperfine_splitting_rad_s(ds: &AtomicDataset) -> f64 {
    let level = LevelId::parse_key(ds.species, ds.species.clock_upper_level()).unwrap();
    let f_max = level.j + ds.nuclear_spin;
    let e_top = ds.hyperfine_energy_hz(&level, f_max).unwrap_or(0.0);
    let e_next = ds
        .hyperfine_energy_hz(&level, f_max - HalfInt::from_int(1))
        .unwrap_or(0.0);
    2.0 * std::f64::consts::PI * (e_top - e_next).abs()
}

pub fn stability_budget(ctx: &Ctx) -> Result<()> {
    let ds = ctx.dataset()?;
    let n = ctx.atom_number(&ds)?;
    let params = ctx.scenario.clock_params(n);
    let budget = stability::total_budget(&params)?;
    ctx.write("stability.json", &budget.to_json())?;
    ctx.write("stability.txt", &budget.to_table())?;
    print!("{}", budget.to_table());
    Ok(())
}

pub fn systematics_table(
    ctx: &Ctx,
    target_override: Option<&str>,
    equal_split: bool,
) -> Result<()> {
    let s = ctx
        .scenario
        .systematics
        .as_ref()
        .context("scenario has no [systematics] section")?;
    let target = parse_target(target_override.unwrap_or(&s.target))?;
    let inputs = systematics::SensitivityInputs {
        nu_c_hz: ctx.scenario.clock.nu_c_hz,
        probe_delta_alpha_a3: s.probe_delta_alpha_a3,
        probe_sat_intensity_w_m2: s.probe_sat_intensity_mw_cm2 * 10.0, // mW/cm² → W/m²
        lattice_slope_a3_per_mhz: s.lattice_slope_a3_per_mhz,
        lattice_alpha0_a3: trap_alpha(ctx).unwrap_or(-374.0),
        temperature_k: s.temperature_k,
        dc_beta_hz_per_v_m: s.dc_beta_hz_per_v_m,
        bbr_sensitivity_hz_per_k: polarizability::bbr_shift(
            s.bbr_shift_ground_300k_hz,
            s.bbr_shift_excited_300k_hz,
            s.bbr_temperature_k,
        )?
        .sensitivity_hz_per_k,
    };
    let mut rows = systematics::sensitivity_coefficients(&inputs)?;
    let policy = if equal_split {
        AllocationPolicy::EqualSplit
    } else {
        AllocationPolicy::FullBudgetPerRow
    };
    systematics::requirements(&mut rows, inputs.nu_c_hz, target, policy)?;
    ctx.write("systematics.csv", &systematics::rows_to_csv(&rows))?;
    ctx.write("systematics.json", &systematics::rows_to_json(&rows))?;
    println!(
        "fractional target δt/τ = {:.3e}",
        systematics::fractional_target(target)?
    );
    print!("{}", systematics::rows_to_csv(&rows));
    Ok(())
}

/// Scalar polarizability at the trap wavelength from the dataset, Å³.
fn trap_alpha(ctx: &Ctx) -> Result<f64> {
    let ds = ctx.dataset()?;
    let (ground, _) = ctx.levels(&ds)?;
    let l = ctx.lattice_config(&ds)?;
    Ok(polarizability::dynamic_polarizability(
        &ds,
        &ground,
        Probe::Nm(l.trap_wavelength_um * 1000.0),
    )?
    .alpha0_a3)
}

pub fn simulate(ctx: &Ctx, seed: Option<u64>, duration: Option<f64>) -> Result<()> {
    let mut cfg = ctx.scenario.sim_config()?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(d) = duration {
        cfg.duration_s = d;
    }
    let sim = ctx
        .scenario
        .simulation
        .as_ref()
        .expect("sim_config already required the section");
    let trace = locksim::simulate(&cfg)?;
    let adev = locksim::trace_adev(&trace, &sim.tau_grid_s)?;
    ctx.write("trace.csv", &trace.to_csv())?;
    ctx.write("adev.csv", &locksim::series_to_csv(&adev))?;

    let analytic = locksim::analytic_shot_coefficient(&cfg);
    let summary = json!({
        "seed": cfg.seed,
        "effective_duty": trace.effective_duty,
        "samples": trace.y.len(),
        "mean_y": trace.y.iter().sum::<f64>() / trace.y.len() as f64,
        "adev_tau_s": adev.tau_s,
        "adev": adev.adev,
        "analytic_shot_coefficient": analytic,
    });
    ctx.write("sim.json", &serde_json::to_string_pretty(&summary)?)?;

    if sim.campaign_seeds > 1 {
        let campaign = locksim::run_campaign(&cfg, sim.campaign_seeds, &sim.tau_grid_s)?;
        let mut csv = String::from("tau_s,mean_adev,spread,standard_error\n");
        for k in 0..campaign.tau_s.len() {
            csv.push_str(&format!(
                "{:.6e},{:.6e},{:.6e},{:.6e}\n",
                campaign.tau_s[k],
                campaign.mean_adev[k],
                campaign.spread[k],
                campaign.standard_error[k]
            ));
        }
        ctx.write("campaign.csv", &csv)?;
    }
    Ok(())
}

/// Run every module for the scenario and emit one document with the headline
/// numbers plus the figure-style CSV exports.
pub fn report(ctx: &Ctx) -> Result<()> {
    let ds = ctx.dataset()?;
    let mut doc = String::new();
    let mut j = serde_json::Map::new();
    doc.push_str(&format!(
        "clock design report — scenario {}\n",
        ctx.scenario.name
    ));
    doc.push_str(&format!(
        "dataset: {} ({} transitions)\n\n",
        ds.species,
        ds.transitions.len()
    ));

    // Lattice geometry and trap metrics.
    let mut atom_number = ctx.scenario.clock.atom_number;
    if let Ok(cfg) = ctx.lattice_config(&ds) {
        let (ground, excited) = ctx.levels(&ds)?;
        let alpha = polarizability::dynamic_polarizability(
            &ds,
            &ground,
            Probe::Nm(cfg.trap_wavelength_um * 1000.0),
        )?;
        let geom = lattice::lattice_geometry(&cfg)?;
        let depth = lattice::trap_depth(
            alpha.alpha0_a3,
            cfg.projected_power_w,
            cfg.area_m2(),
            cfg.trap_wavelength_um,
            cfg.atom_mass_kg,
            false,
        )?;
        let sat_lw =
            stability::linewidth_hz(ctx.scenario.clock.tau_a_s, ctx.scenario.clock.saturation);
        let sb = lattice::axial_sidebands(&cfg, alpha.alpha0_a3, sat_lw)?;
        let depump = lattice::depumping(
            ctx.scenario.clock.saturation,
            hyperfine_splitting_rad_s(&ds),
            1.0 / ctx.scenario.clock.tau_a_s,
            1.0,
        );
        atom_number = atom_number.or(Some(geom.atom_number));
        doc.push_str("— trap design —\n");
        doc.push_str(&format!(
            "trap polarizability      {:>12.1} Å³ at {} nm\n",
            alpha.alpha0_a3,
            cfg.trap_wavelength_um * 1000.0
        ));
        doc.push_str(&format!(
            "Talbot length            {:>12.3} μm\n",
            geom.talbot_length_um
        ));
        doc.push_str(&format!("lattice sites            {:>12.3e}\n", geom.sites));
        doc.push_str(&format!(
            "atom number              {:>12.3e}\n",
            geom.atom_number
        ));
        doc.push_str(&format!(
            "trap depth               {:>12.2} μK ({:.0} recoils)\n",
            depth.depth_uk, depth.depth_recoils
        ));
        doc.push_str(&format!(
            "axial vibration          {:>12.4e} Hz (Lamb–Dicke {:.4})\n",
            sb.nu_vib_hz, sb.lamb_dicke
        ));
        doc.push_str(&format!(
            "first sideband weight    {:>12.4e}\n",
            sb.relative_sideband
        ));
        doc.push_str(&format!(
            "depumping ratio          {:>12.3e} (rate {:.3e} 1/s)\n\n",
            depump.ratio, depump.rate_s
        ));
        j.insert(
            "lattice".into(),
            json!({
                "alpha0_a3": alpha.alpha0_a3,
                "talbot_length_um": geom.talbot_length_um,
                "sites": geom.sites,
                "atom_number": geom.atom_number,
                "depth_uk": depth.depth_uk,
                "depth_recoils": depth.depth_recoils,
                "nu_vib_hz": sb.nu_vib_hz,
                "lamb_dicke": sb.lamb_dicke,
                "relative_sideband": sb.relative_sideband,
                "depumping_ratio": depump.ratio,
                "depumping_rate_s": depump.rate_s,
            }),
        );
        ctx.write("fig_sidebands.csv", &lattice::spectrum_to_csv(&sb))?;

        // Magic wavelength and wide polarizability scan.
        let p = ctx.pol_section()?;
        let wide = polarizability::scan(
            &ds,
            &ground,
            &excited,
            (p.scan_window_nm[0], p.scan_window_nm[1]),
            p.scan_step_nm,
            polarizability::DEFAULT_EXCLUSION_NM,
        )?;
        ctx.write(
            "fig_polarizability.csv",
            &polarizability::scan_to_csv(&wide),
        )?;
        let narrow = polarizability::scan(
            &ds,
            &ground,
            &excited,
            (p.magic_window_nm[0], p.magic_window_nm[1]),
            p.magic_step_nm,
            polarizability::DEFAULT_EXCLUSION_NM,
        )?;
        ctx.write(
            "fig_magic_region.csv",
            &polarizability::scan_to_csv(&narrow),
        )?;
        let points = polarizability::find_magic_wavelengths(
            &ds,
            &ground,
            &excited,
            (p.magic_window_nm[0], p.magic_window_nm[1]),
            p.magic_step_nm,
        )?;
        doc.push_str("— magic trapping —\n");
        for pt in &points {
            doc.push_str(&format!(
                "magic wavelength         {:>12.4} nm (slope {:.3e} Å³/MHz)\n",
                pt.wavelength_nm, pt.slope_a3_per_mhz
            ));
        }
        if let Some(pt) = points.first() {
            let e = polarizability::dynamic_polarizability(
                &ds,
                &excited.level,
                Probe::Nm(pt.wavelength_nm),
            )?;
            let a66 = polarizability::hyperfine_polarizability(
                &e,
                ds.nuclear_spin,
                excited.f,
                excited.m,
            )?;
            let a60 = polarizability::hyperfine_polarizability(
                &e,
                ds.nuclear_spin,
                excited.f,
                HalfInt::ZERO,
            )?;
            let spread = ((a66.alpha_a3 - a60.alpha_a3) / a60.alpha_a3).abs();
            doc.push_str(&format!("tensor spread (m=f vs 0) {:>12.4}\n\n", spread));
            j.insert(
                "magic".into(),
                json!({
                    "wavelength_nm": pt.wavelength_nm,
                    "slope_a3_per_mhz": pt.slope_a3_per_mhz,
                    "tensor_spread": spread,
                }),
            );
        }
    }

    // Zeeman structure.
    if let Some(z) = &ctx.scenario.zeeman {
        let upper = LevelId::parse_key(ds.species, ds.species.clock_upper_level()).unwrap();
        if ds.hyperfine_for(&upper).is_some() {
            let map = zeeman::zeeman_map(&ds, &upper, z.b_min_t, z.b_max_t, z.steps)?;
            ctx.write(
                &format!("zeeman_{}.csv", upper.key().replace('/', "_")),
                &map.to_csv(),
            )?;
            let f_top = upper.j + ds.nuclear_spin;
            let e_top = ds.hyperfine_energy_hz(&upper, f_top).unwrap();
            let e_next = ds
                .hyperfine_energy_hz(&upper, f_top - HalfInt::from_int(1))
                .unwrap();
            let (sp, _) = zeeman::stretched_shift(1e-8);
            doc.push_str("— Zeeman structure —\n");
            doc.push_str(&format!(
                "upper hyperfine split    {:>12.2} MHz\n",
                (e_top - e_next).abs() / 1e6
            ));
            doc.push_str(&format!(
                "stretched shift          {:>12.1} Hz at 1e-8 T (±)\n\n",
                sp
            ));
            j.insert(
                "zeeman".into(),
                json!({
                    "hyperfine_splitting_mhz": (e_top - e_next).abs() / 1e6,
                    "stretched_shift_hz_at_1e8t": sp,
                }),
            );
        }
    }

    // Stability budget.
    let n = atom_number.context("no atom number: set clock.atom_number or a [lattice] section")?;
    let params = ctx.scenario.clock_params(n);
    let budget = stability::total_budget(&params)?;
    doc.push_str("— short-term stability (coefficients of 1/√τ) —\n");
    doc.push_str(&budget.to_table());
    doc.push('\n');
    j.insert("stability".into(), serde_json::to_value(budget)?);

    // Systematics.
    if let Some(s) = ctx.scenario.systematics.as_ref() {
        let target = parse_target(&s.target)?;
        let inputs = systematics::SensitivityInputs {
            nu_c_hz: ctx.scenario.clock.nu_c_hz,
            probe_delta_alpha_a3: s.probe_delta_alpha_a3,
            probe_sat_intensity_w_m2: s.probe_sat_intensity_mw_cm2 * 10.0,
            lattice_slope_a3_per_mhz: s.lattice_slope_a3_per_mhz,
            lattice_alpha0_a3: trap_alpha(ctx).unwrap_or(-374.0),
            temperature_k: s.temperature_k,
            dc_beta_hz_per_v_m: s.dc_beta_hz_per_v_m,
            bbr_sensitivity_hz_per_k: polarizability::bbr_shift(
                s.bbr_shift_ground_300k_hz,
                s.bbr_shift_excited_300k_hz,
                s.bbr_temperature_k,
            )?
            .sensitivity_hz_per_k,
        };
        let mut rows = systematics::sensitivity_coefficients(&inputs)?;
        systematics::requirements(
            &mut rows,
            inputs.nu_c_hz,
            target,
            AllocationPolicy::FullBudgetPerRow,
        )?;
        doc.push_str("— systematics (requirements for the timing target) —\n");
        doc.push_str(&format!(
            "fractional target        {:>12.3e} (δt/τ)\n",
            systematics::fractional_target(target)?
        ));
        doc.push_str(&systematics::rows_to_csv(&rows));
        doc.push('\n');
        ctx.write("table_systematics.csv", &systematics::rows_to_csv(&rows))?;
        j.insert(
            "systematics".into(),
            serde_json::from_str(&systematics::rows_to_json(&rows))?,
        );
        j.insert(
            "fractional_target".into(),
            json!(systematics::fractional_target(target)?),
        );
    }

    // Lock simulation.
    if let Some(sim) = ctx.scenario.simulation.as_ref() {
        let cfg = ctx.scenario.sim_config()?;
        let trace = locksim::simulate(&cfg)?;
        let adev = locksim::trace_adev(&trace, &sim.tau_grid_s)?;
        ctx.write("sim_adev.csv", &locksim::series_to_csv(&adev))?;
        let analytic = locksim::analytic_shot_coefficient(&cfg);
        doc.push_str("— lock simulation (desk scale) —\n");
        doc.push_str(&format!(
            "detection rate           {:>12.3e} 1/s (duty {:.2})\n",
            cfg.detection_rate_hz, trace.effective_duty
        ));
        doc.push_str(&format!(
            "analytic shot law        {:>12.3e} /√τ\n",
            analytic
        ));
        for (t, a) in adev.tau_s.iter().zip(&adev.adev) {
            doc.push_str(&format!("  σ({t:>5.0} s)              {a:>12.3e}\n"));
        }
        doc.push('\n');
        j.insert(
            "simulation".into(),
            json!({
                "detection_rate_hz": cfg.detection_rate_hz,
                "effective_duty": trace.effective_duty,
                "analytic_shot_coefficient": analytic,
                "adev_tau_s": adev.tau_s,
                "adev": adev.adev,
            }),
        );
    }

    ctx.write("report.txt", &doc)?;
    ctx.write(
        "report.json",
        &serde_json::to_string_pretty(&serde_json::Value::Object(j))?,
    )?;
    print!("{doc}");
    Ok(())
}
