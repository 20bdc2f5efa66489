//! Hyperfine + Zeeman structure: full diagonalization of
//! H = H_hf + g_j μB B J_z in the coupled |f, m⟩ basis (field along z, m
//! conserved), stretched-state clock shifts, and magic-field search.
//!
//! The nuclear g-factor is neglected; g_j is the LS value with the electron
//! g taken as exactly 2, which reproduces the clock-level g_f values of 1/4
//! (6s₁/₂, f=4) and 1/2 (5d₅/₂, f=6).

use crate::angular::{clebsch_gordan, HalfInt};
use crate::constants::CONSTANTS;
use crate::dataset::{AtomicDataset, LevelId};
use serde::{Deserialize, Serialize};

/// One adiabatically-labeled eigenvalue branch of a Zeeman map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    /// f label at B = 0 (adiabatic continuation through avoided crossings).
    pub f: HalfInt,
    pub m: HalfInt,
    /// Eigenvalue in Hz at each grid field.
    pub energies_hz: Vec<f64>,
}

/// Eigenvalue map of one fine-structure level over a magnetic-field grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeemanMap {
    pub level: LevelId,
    /// Field grid, T. May include negative values.
    pub b_grid_t: Vec<f64>,
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ZeemanError {
    #[error("no hyperfine constants for level {0}")]
    MissingHyperfineConstants(String),
    #[error("maps do not share a field grid")]
    GridMismatch,
    #[error("branch (f={f}, m={m}) not present in map of {level}")]
    MissingBranch {
        level: String,
        f: HalfInt,
        m: HalfInt,
    },
    #[error("ground and excited maps are identical; every field is magic")]
    DegenerateInput,
    #[error("field grid must be strictly increasing with at least two points")]
    BadGrid,
}

impl ZeemanMap {
    pub fn branch(&self, f: HalfInt, m: HalfInt) -> Option<&Branch> {
        self.branches.iter().find(|b| b.f == f && b.m == m)
    }

    /// CSV export: B_T, branch, energy_Hz.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("B_T,branch,energy_Hz\n");
        for b in &self.branches {
            for (bi, e) in self.b_grid_t.iter().zip(&b.energies_hz) {
                out.push_str(&format!("{:.9e},f={} m={},{:.9e}\n", bi, b.f, b.m, e));
            }
        }
        out
    }
}

/// Diagonalize the hyperfine + Zeeman Hamiltonian of `level` on a linear
/// field grid from `b_min_t` to `b_max_t` (inclusive, `steps ≥ 2` points).
pub fn zeeman_map(
    ds: &AtomicDataset,
    level: &LevelId,
    b_min_t: f64,
    b_max_t: f64,
    steps: usize,
) -> Result<ZeemanMap, ZeemanError> {
    if steps < 2 || !(b_max_t > b_min_t) {
        return Err(ZeemanError::BadGrid);
    }
    if ds.hyperfine_for(level).is_none() {
        return Err(ZeemanError::MissingHyperfineConstants(level.key()));
    }
    let g_j = level.lande_gj().unwrap_or(2.0);
    let i = ds.nuclear_spin;
    let j = level.j;

    let b_grid_t: Vec<f64> = (0..steps)
        .map(|k| b_min_t + (b_max_t - b_min_t) * k as f64 / (steps - 1) as f64)
        .collect();

    // m runs over −(I+j) .. I+j; each m block is diagonalized independently.
    let m_max = i + j;
    let mut branches: Vec<Branch> = Vec::new();
    let mut tm = -m_max.twice();
    while tm <= m_max.twice() {
        let m = HalfInt::from_twice(tm);
        let block = MBlock::build(ds, level, g_j, m);
        let mut block_branches: Vec<Branch> = block
            .f_labels
            .iter()
            .map(|&f| Branch {
                f,
                m,
                energies_hz: Vec::with_capacity(steps),
            })
            .collect();

        // Previous eigenvectors for adiabatic labeling.
        let mut prev_vecs: Option<Vec<Vec<f64>>> = None;
        for &b in &b_grid_t {
            let h = block.hamiltonian(b);
            let (eigvals, eigvecs) = jacobi_eigen(&h);
            // Order eigenpairs: at the first step by f-label overlap with
            // the B = 0 basis, afterwards by overlap with the previous step.
            let reference: Vec<Vec<f64>> = match &prev_vecs {
                Some(v) => v.clone(),
                None => (0..block.dim())
                    .map(|k| {
                        let mut e = vec![0.0; block.dim()];
                        e[k] = 1.0;
                        e
                    })
                    .collect(),
            };
            let order = assign_by_overlap(&reference, &eigvecs);
            let mut new_vecs = vec![vec![0.0; block.dim()]; block.dim()];
            for (slot, &col) in order.iter().enumerate() {
                block_branches[slot].energies_hz.push(eigvals[col]);
                for r in 0..block.dim() {
                    new_vecs[slot][r] = eigvecs[r][col];
                }
            }
            prev_vecs = Some(new_vecs);
        }
        branches.append(&mut block_branches);
        tm += 2;
    }

    branches.sort_by_key(|b| (b.f, b.m));
    Ok(ZeemanMap {
        level: level.clone(),
        b_grid_t,
        branches,
    })
}

/// One conserved-m block: basis |f, m⟩ with f ≥ |m|, plus the J_z matrix in
/// that basis obtained by transforming from the uncoupled |m_j, m_I⟩ basis.
struct MBlock {
    f_labels: Vec<HalfInt>,
    /// Hyperfine diagonal, Hz.
    e_hf: Vec<f64>,
    /// ⟨f', m|J_z|f, m⟩ (dimensionless).
    jz: Vec<Vec<f64>>,
    /// g_j μB / h, Hz/T.
    zeeman_scale: f64,
}

impl MBlock {
    fn build(ds: &AtomicDataset, level: &LevelId, g_j: f64, m: HalfInt) -> MBlock {
        let i = ds.nuclear_spin;
        let j = level.j;
        let f_min = (j - i).abs();
        let f_max = j + i;
        let mut f_labels = Vec::new();
        let mut tf = f_min.twice();
        while tf <= f_max.twice() {
            let f = HalfInt::from_twice(tf);
            if m.abs() <= f {
                f_labels.push(f);
            }
            tf += 2;
        }

        let e_hf: Vec<f64> = f_labels
            .iter()
            .map(|&f| ds.hyperfine_energy_hz(level, f).unwrap_or(0.0))
            .collect();

        // Uncoupled basis states contributing to this m: m_j + m_I = m.
        let mut mj_list = Vec::new();
        let mut tmj = -j.twice();
        while tmj <= j.twice() {
            let mj = HalfInt::from_twice(tmj);
            let mi = m - mj;
            if mi.abs() <= i {
                mj_list.push(mj);
            }
            tmj += 2;
        }
        debug_assert_eq!(mj_list.len(), f_labels.len());

        // CG matrix U[f_idx][mj_idx] = ⟨j m_j, I m−m_j | f m⟩.
        let u: Vec<Vec<f64>> = f_labels
            .iter()
            .map(|&f| {
                mj_list
                    .iter()
                    .map(|&mj| {
                        clebsch_gordan(j, mj, i, m - mj, f, m)
                            .expect("valid CG arguments")
                            .to_f64()
                    })
                    .collect()
            })
            .collect();

        // J_z is diagonal (m_j) in the uncoupled basis: Jz_ff' = Σ U_f U_f' m_j.
        let dim = f_labels.len();
        let mut jz = vec![vec![0.0; dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                jz[a][b] = (0..mj_list.len())
                    .map(|k| u[a][k] * u[b][k] * mj_list[k].value())
                    .sum();
            }
        }

        MBlock {
            f_labels,
            e_hf,
            jz,
            zeeman_scale: g_j * CONSTANTS.bohr_magneton / CONSTANTS.planck_h,
        }
    }

    fn dim(&self) -> usize {
        self.f_labels.len()
    }

    fn hamiltonian(&self, b_t: f64) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let mut h = vec![vec![0.0; dim]; dim];
        for a in 0..dim {
            for c in 0..dim {
                h[a][c] = self.jz[a][c] * self.zeeman_scale * b_t;
            }
            h[a][a] += self.e_hf[a];
        }
        h
    }
}

/// Greedy assignment of eigenvector columns to reference branches by maximal
/// overlap. Good enough for the small, well-separated blocks here.
fn assign_by_overlap(reference: &[Vec<f64>], eigvecs: &[Vec<f64>]) -> Vec<usize> {
    let dim = reference.len();
    let mut taken = vec![false; dim];
    let mut order = vec![0usize; dim];
    for (slot, r) in reference.iter().enumerate() {
        let mut best = (0usize, -1.0f64);
        for col in 0..dim {
            if taken[col] {
                continue;
            }
            let ov: f64 = (0..dim).map(|k| r[k] * eigvecs[k][col]).sum::<f64>().abs();
            if ov > best.1 {
                best = (col, ov);
            }
        }
        taken[best.0] = true;
        order[slot] = best.0;
    }
    order
}

/// Cyclic Jacobi eigensolver for small real symmetric matrices. Returns
/// (eigenvalues, eigenvectors as columns).
fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (k, row) in v.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for r in 0..n {
            for c in r + 1..n {
                off += m[r][c] * m[r][c];
            }
        }
        if off < 1e-24 * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eig = (0..n).map(|k| m[k][k]).collect();
    (eig, v)
}

/// First-order Zeeman shifts of the two stretched clock transitions,
/// δν± = ±(6·g_{f'=6} − 4·g_{f=4})·μB·B/h = ±μB·B/(πħ), in Hz.
pub fn stretched_shift(b_t: f64) -> (f64, f64) {
    // g_f(6s1/2, f=4) = 1/4 and g_f(5d5/2, f=6) = 1/2 with electron-only g.
    let shift = (6.0 * 0.5 - 4.0 * 0.25) * CONSTANTS.bohr_magneton * b_t / CONSTANTS.planck_h;
    (shift, -shift)
}

/// A magic-field root: stationary point of the transition frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicField {
    pub b_t: f64,
    /// Residual |dν/dB| at the root from the spline, Hz/T.
    pub residual_slope_hz_per_t: f64,
}

/// Ground/excited branch pair for a magic-field search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionPair {
    pub ground_f: HalfInt,
    pub ground_m: HalfInt,
    pub excited_f: HalfInt,
    pub excited_m: HalfInt,
}

/// Default stationarity tolerance: 1 Hz per 10⁻⁷ T.
pub const DEFAULT_STATIONARY_TOL_HZ_PER_T: f64 = 1e7;

/// Locate stationary points of ν(B) = E_e(B) − E_g(B) for one branch pair:
/// sign changes of the spline derivative refined by bisection, plus
/// stationary endpoints (the first-order-insensitive pairs are stationary at
/// B = 0). Endpoint slopes use a second-order one-sided difference on the
/// raw eigenvalues, since a natural spline biases the boundary derivative.
pub fn find_magic_b(
    map_ground: &ZeemanMap,
    map_excited: &ZeemanMap,
    pair: TransitionPair,
    window_t: (f64, f64),
) -> Result<Vec<MagicField>, ZeemanError> {
    find_magic_b_with_tolerance(
        map_ground,
        map_excited,
        pair,
        window_t,
        DEFAULT_STATIONARY_TOL_HZ_PER_T,
    )
}

pub fn find_magic_b_with_tolerance(
    map_ground: &ZeemanMap,
    map_excited: &ZeemanMap,
    pair: TransitionPair,
    window_t: (f64, f64),
    stationary_tol_hz_per_t: f64,
) -> Result<Vec<MagicField>, ZeemanError> {
    if map_ground.b_grid_t.len() != map_excited.b_grid_t.len()
        || map_ground
            .b_grid_t
            .iter()
            .zip(&map_excited.b_grid_t)
            .any(|(a, b)| (a - b).abs() > 1e-15 * a.abs().max(1e-12))
    {
        return Err(ZeemanError::GridMismatch);
    }
    let g = map_ground
        .branch(pair.ground_f, pair.ground_m)
        .ok_or(ZeemanError::MissingBranch {
            level: map_ground.level.key(),
            f: pair.ground_f,
            m: pair.ground_m,
        })?;
    let e =
        map_excited
            .branch(pair.excited_f, pair.excited_m)
            .ok_or(ZeemanError::MissingBranch {
                level: map_excited.level.key(),
                f: pair.excited_f,
                m: pair.excited_m,
            })?;

    let nu: Vec<f64> = e
        .energies_hz
        .iter()
        .zip(&g.energies_hz)
        .map(|(ee, ge)| ee - ge)
        .collect();
    if nu.iter().all(|v| (v - nu[0]).abs() < 1e-9) {
        return Err(ZeemanError::DegenerateInput);
    }

    let grid = &map_ground.b_grid_t;
    let n = grid.len();
    let spline = CubicSpline::natural(grid, &nu);
    let b_span = grid[n - 1] - grid[0];
    let cell = b_span / (n - 1) as f64;

    let mut roots: Vec<MagicField> = Vec::new();
    let mut push_root = |b: f64, slope: f64| {
        if b < window_t.0 - 1e-18 || b > window_t.1 + 1e-18 {
            return;
        }
        if roots.iter().any(|r| (r.b_t - b).abs() <= 2.0 * cell) {
            return;
        }
        roots.push(MagicField {
            b_t: b,
            residual_slope_hz_per_t: slope.abs(),
        });
    };

    // Endpoint-stationary roots (B = 0 for the first-order-insensitive
    // pairs): second-order one-sided difference, exact for locally quadratic
    // branches.
    if n >= 3 {
        let h0 = grid[1] - grid[0];
        let s_left = (-3.0 * nu[0] + 4.0 * nu[1] - nu[2]) / (2.0 * h0);
        if s_left.abs() <= stationary_tol_hz_per_t {
            push_root(grid[0], s_left);
        }
        let h1 = grid[n - 1] - grid[n - 2];
        let s_right = (3.0 * nu[n - 1] - 4.0 * nu[n - 2] + nu[n - 3]) / (2.0 * h1);
        if s_right.abs() <= stationary_tol_hz_per_t {
            push_root(grid[n - 1], s_right);
        }
    }

    // Interior sign changes of the spline derivative. The first and last
    // cells are excluded (endpoint handling above; the natural spline's
    // boundary condition distorts them).
    let (lo_b, hi_b) = (grid[1.min(n - 1)], grid[n - 2]);
    if hi_b > lo_b {
        let samples = 8 * n;
        let mut prev_b = lo_b;
        let mut prev_s = spline.derivative(prev_b);
        for k in 1..=samples {
            let b = lo_b + (hi_b - lo_b) * k as f64 / samples as f64;
            let s = spline.derivative(b);
            if prev_s * s < 0.0 {
                let (mut lo, mut hi, mut s_lo) = (prev_b, b, prev_s);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let sm = spline.derivative(mid);
                    if s_lo * sm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        s_lo = sm;
                    }
                }
                let root = 0.5 * (lo + hi);
                push_root(root, spline.derivative(root));
            }
            prev_b = b;
            prev_s = s;
        }
    }

    roots.sort_by(|a, b| a.b_t.partial_cmp(&b.b_t).unwrap());
    Ok(roots)
}

/// Natural cubic spline on a strictly increasing grid.
struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>, // second derivatives
}

impl CubicSpline {
    fn natural(x: &[f64], y: &[f64]) -> CubicSpline {
        let n = x.len();
        assert!(n >= 2);
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the tridiagonal system.
            let mut a = vec![0.0; n];
            let mut b = vec![2.0; n];
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            for k in 1..n - 1 {
                let h0 = x[k] - x[k - 1];
                let h1 = x[k + 1] - x[k];
                a[k] = h0 / (h0 + h1);
                c[k] = h1 / (h0 + h1);
                d[k] = 6.0 / (h0 + h1) * ((y[k + 1] - y[k]) / h1 - (y[k] - y[k - 1]) / h0);
            }
            for k in 1..n - 1 {
                let w = a[k] / b[k - 1];
                b[k] -= w * c[k - 1];
                d[k] -= w * d[k - 1];
            }
            for k in (1..n - 1).rev() {
                m[k] = (d[k] - c[k] * m[k + 1]) / b[k];
            }
        }
        CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        }
    }

    fn segment(&self, xq: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        }
    }

    fn derivative(&self, xq: f64) -> f64 {
        let i = self.segment(xq);
        let h = self.x[i + 1] - self.x[i];
        let t = xq - self.x[i];
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        (self.y[i + 1] - self.y[i]) / h - h / 6.0 * (2.0 * m0 + m1)
            + t * m0
            + t * t / (2.0 * h) * (m1 - m0)
    }
}
