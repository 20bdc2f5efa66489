//! Property-based invariants across the crate.

use clockdesign_core::angular::HalfInt;
use clockdesign_core::locksim::allan_deviation;
use clockdesign_core::polarizability::{bbr_shift, hyperfine_tensor_factor};
use clockdesign_core::stability::{total_budget, ClockParams};
use clockdesign_core::systematics::{
    budget, requirements, sensitivity_coefficients, AllocationPolicy, TimingTarget,
};
use clockdesign_core::units::{convert_polarizability, PolarizabilityUnit};
use proptest::prelude::*;

fn unit_strategy() -> impl Strategy<Value = PolarizabilityUnit> {
    prop_oneof![
        Just(PolarizabilityUnit::CubicAngstrom),
        Just(PolarizabilityUnit::CubicBohr),
        Just(PolarizabilityUnit::Si),
    ]
}

proptest! {
    #[test]
    fn unit_round_trip_identity(
        v in prop_oneof![-1e12..1e12f64, -1e-6..1e-6f64],
        from in unit_strategy(),
        to in unit_strategy(),
    ) {
        let rt = convert_polarizability(convert_polarizability(v, from, to), to, from);
        prop_assert!((rt - v).abs() <= 1e-12 * v.abs());
    }

    #[test]
    fn conversion_is_linear(
        v in -1e6..1e6f64,
        k in -100.0..100.0f64,
        from in unit_strategy(),
        to in unit_strategy(),
    ) {
        let a = convert_polarizability(k * v, from, to);
        let b = k * convert_polarizability(v, from, to);
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-300));
    }

    #[test]
    fn bbr_shift_scales_as_t4(t in 1.0..600.0f64, dg in -10.0..10.0f64, de in -10.0..10.0f64) {
        let b = bbr_shift(dg, de, t).unwrap();
        let b2 = bbr_shift(dg, de, 2.0 * t).unwrap();
        prop_assert!((b2.differential_hz - 16.0 * b.differential_hz).abs()
            <= 1e-9 * b.differential_hz.abs().max(1e-300));
        // Sensitivity is the exact derivative of the T⁴ law.
        let h = t * 1e-6;
        let fd = (bbr_shift(dg, de, t + h).unwrap().differential_hz
            - bbr_shift(dg, de, t - h).unwrap().differential_hz) / (2.0 * h);
        prop_assert!((fd - b.sensitivity_hz_per_k).abs()
            <= 1e-6 * b.sensitivity_hz_per_k.abs().max(1e-12));
    }

    #[test]
    fn qpn_inverse_sqrt_scaling(scale in 1.1..100.0f64) {
        let base = ClockParams {
            nu_c_hz: 4.376e14,
            tau_a_s: 1.28e-6,
            atom_number: 1e6,
            eta_col: 0.2,
            eta_det: 0.9,
            lo_psd_hz2_per_hz: 1.0,
            f_s_hz: 1e4,
            f_m_hz: 1e5,
            saturation: 1.0,
        };
        let b0 = total_budget(&base).unwrap();
        let mut scaled = base;
        scaled.atom_number *= scale;
        let b1 = total_budget(&scaled).unwrap();
        prop_assert!((b1.sigma_qpn * scale.sqrt() - b0.sigma_qpn).abs()
            <= 1e-12 * b0.sigma_qpn);
        // Total bounded by components.
        let max = b1.sigma_qpn.max(b1.sigma_im_lo).max(b1.sigma_im_shot);
        prop_assert!(b1.sigma_total >= max);
        prop_assert!(b1.sigma_total <= b1.sigma_qpn + b1.sigma_im_lo + b1.sigma_im_shot);
    }

    #[test]
    fn budget_scales_linearly(k in 0.0..50.0f64, da in 1e-9..10.0f64) {
        let inputs = clockdesign_core::systematics::cs_reference_inputs();
        let mut rows = sensitivity_coefficients(&inputs).unwrap();
        for r in rows.iter_mut() {
            r.delta_a = Some(da);
        }
        let t1 = budget(&rows, inputs.nu_c_hz).unwrap();
        for r in rows.iter_mut() {
            r.delta_a = Some(k * da);
        }
        let tk = budget(&rows, inputs.nu_c_hz).unwrap();
        prop_assert!((tk.linear_hz - k * t1.linear_hz).abs()
            <= 1e-9 * t1.linear_hz.abs().max(1e-300));
        prop_assert!((tk.worst_case_hz - k * t1.worst_case_hz).abs()
            <= 1e-9 * t1.worst_case_hz.max(1e-300));
    }

    #[test]
    fn requirements_round_trip(dt_ns in 0.1..100.0f64, days in 1.0..365.0f64) {
        let inputs = clockdesign_core::systematics::cs_reference_inputs();
        let target = TimingTarget { delta_t_s: dt_ns * 1e-9, tau_s: days * 86400.0 };
        let mut rows = sensitivity_coefficients(&inputs).unwrap();
        requirements(&mut rows, inputs.nu_c_hz, target, AllocationPolicy::FullBudgetPerRow)
            .unwrap();
        for r in &rows {
            let dt = (r.beta_hz_per_unit * r.requirement.unwrap()).abs() / inputs.nu_c_hz
                * target.tau_s;
            prop_assert!((dt - target.delta_t_s).abs() <= 1e-9 * target.delta_t_s);
        }
    }

    #[test]
    fn hyperfine_tensor_factor_bounded(tj in 2i32..=7, ti in 1i32..=7) {
        // The stretched hyperfine level always maps with factor exactly 1;
        // all factors stay within [−2, 2] for physical quantum numbers.
        let j = HalfInt::from_twice(tj);
        let i = HalfInt::from_twice(ti);
        let f_max = j + i;
        let one = hyperfine_tensor_factor(j, i, f_max);
        prop_assert!((one - 1.0).abs() < 1e-12);
        let mut tf = (j - i).abs().twice();
        while tf <= f_max.twice() {
            let v = hyperfine_tensor_factor(j, i, HalfInt::from_twice(tf));
            prop_assert!(v.is_finite() && v.abs() <= 2.0);
            tf += 2;
        }
    }

    #[test]
    fn allan_scale_invariance(scale in 1e-16..1e3f64, seed in 0u64..1000) {
        // σ(k·y) = k·σ(y): the estimator is homogeneous of degree one.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let y: Vec<f64> = (0..512).map(|_| rng.random::<f64>() - 0.5).collect();
        let ys: Vec<f64> = y.iter().map(|v| v * scale).collect();
        let a = allan_deviation(&y, 1.0, &[1.0, 8.0]).unwrap();
        let b = allan_deviation(&ys, 1.0, &[1.0, 8.0]).unwrap();
        for (ai, bi) in a.adev.iter().zip(&b.adev) {
            prop_assert!((bi - ai * scale).abs() <= 1e-9 * (ai * scale).abs());
        }
    }
}
