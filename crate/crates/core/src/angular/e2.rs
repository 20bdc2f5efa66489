//! Relative electric-quadrupole (E2) transition amplitudes for a given probe
//! geometry.
//!
//! A plane wave with wavevector along `k̂` and linear polarization `ε̂` couples
//! to the rank-2 quadrupole operator through the symmetric traceless part of
//! the dyadic ε̂⊗k̂. Decomposing that dyadic into spherical components c_q
//! (quantization axis ẑ) gives the relative strength of Δm = q channels; the
//! clock geometry (x propagation, y polarization, z quantization) populates
//! q = ±2 only, which is why only m → m±2 transitions are driven.

use super::{wigner3j, AngularError, HalfInt};
use crate::dataset::LevelId;

const ORTHO_TOL: f64 = 1e-12;

/// Probe-beam geometry for the quadrupole transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E2Geometry {
    propagation: [f64; 3],
    polarization: [f64; 3],
}

impl E2Geometry {
    /// Build a geometry; the axes must be unit length and orthogonal within
    /// 1e-12. The quantization axis is always ẑ.
    pub fn new(propagation: [f64; 3], polarization: [f64; 3]) -> Result<Self, AngularError> {
        let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (norm(propagation) - 1.0).abs() > ORTHO_TOL {
            return Err(AngularError::InvalidGeometry(
                "propagation axis is not unit length".into(),
            ));
        }
        if (norm(polarization) - 1.0).abs() > ORTHO_TOL {
            return Err(AngularError::InvalidGeometry(
                "polarization axis is not unit length".into(),
            ));
        }
        let dot: f64 = propagation
            .iter()
            .zip(&polarization)
            .map(|(a, b)| a * b)
            .sum();
        if dot.abs() > ORTHO_TOL {
            return Err(AngularError::InvalidGeometry(
                "polarization must be orthogonal to propagation".into(),
            ));
        }
        Ok(E2Geometry {
            propagation,
            polarization,
        })
    }

    /// The clock geometry: propagation along x, polarization along y.
    pub fn clock_default() -> Self {
        E2Geometry {
            propagation: [1.0, 0.0, 0.0],
            polarization: [0.0, 1.0, 0.0],
        }
    }

    /// |c_q|² weights for q = −2..2 from the symmetric dyadic sym(ε̂ k̂).
    ///
    /// Spherical components of a symmetric traceless rank-2 tensor S:
    ///   T±2 = (Sxx − Syy ± 2i Sxy)/2, T±1 = ∓(Sxz ± i Syz), T0 ∝ 2Szz−Sxx−Syy.
    /// Only relative weights matter here, so common factors are dropped.
    pub fn q_weights(&self) -> [f64; 5] {
        let e = self.polarization;
        let k = self.propagation;
        let s = |i: usize, j: usize| 0.5 * (e[i] * k[j] + e[j] * k[i]);
        let sxx = s(0, 0);
        let syy = s(1, 1);
        let szz = s(2, 2);
        let sxy = s(0, 1);
        let sxz = s(0, 2);
        let syz = s(1, 2);
        let t2 = 0.25 * ((sxx - syy).powi(2) + 4.0 * sxy * sxy);
        let t1 = sxz * sxz + syz * syz;
        let t0 = (2.0 * szz - sxx - syy).powi(2) / 6.0;
        [t2, t1, t0, t1, t2]
    }

    fn weight_for_dm(&self, dm: i32) -> f64 {
        let w = self.q_weights();
        match dm {
            -2 => w[0],
            -1 => w[1],
            0 => w[2],
            1 => w[3],
            2 => w[4],
            _ => 0.0,
        }
    }
}

/// Relative E2 amplitude for a hyperfine transition (f,m) → (f',m') in the
/// given geometry, normalized so that the stretched transition
/// (f, m=f) → (f' = f+2, m' = f+2) has amplitude 1.
///
/// Both levels must carry f and m. The result is the geometry weight times the
/// rank-2 3j factor; the common reduced matrix element cancels in all ratios.
pub fn e2_relative_amplitude(
    ground: &LevelId,
    excited: &LevelId,
    geom: &E2Geometry,
) -> Result<f64, AngularError> {
    let (fg, mg) = hyperfine_of(ground)?;
    let (fe, me) = hyperfine_of(excited)?;
    let dm = ((me - mg).twice()) / 2;
    if dm.abs() > 2 || !(me - mg).is_integer() {
        return Err(AngularError::ForbiddenTransition(format!(
            "Δm = {} outside rank-2 range",
            (me - mg).value()
        )));
    }
    let weight = geom.weight_for_dm(dm);
    let amp = raw_amplitude(fg, mg, fe, me)?;
    if weight == 0.0 {
        // Geometry gives this q-component no coupling at all.
        return if amp == 0.0 {
            Ok(0.0)
        } else {
            Err(AngularError::ForbiddenTransition(format!(
                "geometry carries no q = {dm} component"
            )))
        };
    }
    // Normalize to the stretched transition, which the clock drives.
    let stretched = raw_amplitude(fg, fg, fe_stretched(fg), fe_stretched(fg))?;
    let geom_norm = geom.weight_for_dm(2).max(geom.weight_for_dm(-2));
    if stretched == 0.0 || geom_norm == 0.0 {
        return Err(AngularError::ForbiddenTransition(
            "stretched normalization amplitude vanishes in this geometry".into(),
        ));
    }
    Ok((weight.sqrt() * amp) / (geom_norm.sqrt() * stretched))
}

fn fe_stretched(fg: HalfInt) -> HalfInt {
    fg + HalfInt::from_int(2)
}

/// Rank-2 reduced-amplitude factor (−1)^(f'−m') (f' 2 f; −m' q m) with
/// q = m' − m.
fn raw_amplitude(fg: HalfInt, mg: HalfInt, fe: HalfInt, me: HalfInt) -> Result<f64, AngularError> {
    let q = me - mg;
    let tj = wigner3j(fe, HalfInt::from_int(2), fg, -me, q, mg)?;
    let exp = ((fe - me).twice()) / 2;
    let sign = if exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * tj.to_f64())
}

fn hyperfine_of(level: &LevelId) -> Result<(HalfInt, HalfInt), AngularError> {
    match (level.f, level.m) {
        (Some(f), Some(m)) => Ok((f, m)),
        _ => Err(AngularError::InvalidQuantumNumbers(format!(
            "level {level} lacks hyperfine (f, m) labels"
        ))),
    }
}
