//! Overlapping Allan deviation of fractional-frequency data.

use serde::{Deserialize, Serialize};

/// σ(τ) curve with approximate 68% confidence half-widths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllanSeries {
    /// Averaging times, ascending, s.
    pub tau_s: Vec<f64>,
    pub adev: Vec<f64>,
    /// Half-width of the ~68% confidence interval on each σ.
    pub ci_halfwidth: Vec<f64>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum AllanError {
    #[error("trace too short: {len} samples cannot support τ = {tau_s} s at τ0 = {tau0_s} s")]
    TooShortTrace { len: usize, tau_s: f64, tau0_s: f64 },
    #[error("τ grid must be ascending positive multiples of the sample interval")]
    BadTauGrid,
}

/// Overlapping Allan deviation of evenly sampled fractional frequency `y`
/// (sample interval `tau0_s`) at averaging times `taus_s` (each an integer
/// multiple m of τ0 with 2m < len):
///
///   σ²(mτ0) = 1/(2 m² (M−2m+1)) Σ_j (Σ_{i=j+m}^{j+2m−1} y_i − Σ_{i=j}^{j+m−1} y_i)²
///
/// Confidence half-widths use the white-FM equivalent-degrees-of-freedom
/// approximation: var(σ̂)/σ² ≈ 1/(2·edf).
pub fn allan_deviation(y: &[f64], tau0_s: f64, taus_s: &[f64]) -> Result<AllanSeries, AllanError> {
    if taus_s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AllanError::BadTauGrid);
    }
    let n = y.len();
    // Prefix sums for O(1) block averages.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in y {
        acc += v;
        prefix.push(acc);
    }
    let block = |start: usize, m: usize| prefix[start + m] - prefix[start];

    let mut adev = Vec::with_capacity(taus_s.len());
    let mut ci = Vec::with_capacity(taus_s.len());
    for &tau in taus_s {
        let m_f = tau / tau0_s;
        let m = m_f.round() as usize;
        if m == 0 || (m_f - m as f64).abs() > 1e-9 * m_f {
            return Err(AllanError::BadTauGrid);
        }
        if 2 * m >= n {
            return Err(AllanError::TooShortTrace {
                len: n,
                tau_s: tau,
                tau0_s,
            });
        }
        let terms = n - 2 * m + 1;
        let mut sum = 0.0;
        for j in 0..terms {
            let d = block(j + m, m) - block(j, m);
            sum += d * d;
        }
        let var = sum / (2.0 * (m as f64) * (m as f64) * terms as f64);
        let sigma = var.sqrt();
        adev.push(sigma);
        ci.push(sigma / (2.0 * edf_white_fm(n, m)).sqrt());
    }
    Ok(AllanSeries {
        tau_s: taus_s.to_vec(),
        adev,
        ci_halfwidth: ci,
    })
}

/// Equivalent degrees of freedom for the overlapping estimator under white
/// FM noise (standard handbook approximation).
fn edf_white_fm(n: usize, m: usize) -> f64 {
    let n = n as f64;
    let m = m as f64;
    ((3.0 * (n - 1.0) / (2.0 * m) - 2.0 * (n - 2.0) / n) * 4.0 * m * m / (4.0 * m * m + 5.0))
        .max(1.0)
}

/// CSV export: tau_s, adev, ci_halfwidth.
pub fn series_to_csv(s: &AllanSeries) -> String {
    let mut out = String::from("tau_s,adev,ci_halfwidth\n");
    for ((t, a), c) in s.tau_s.iter().zip(&s.adev).zip(&s.ci_halfwidth) {
        out.push_str(&format!("{:.6e},{:.6e},{:.6e}\n", t, a, c));
    }
    out
}
