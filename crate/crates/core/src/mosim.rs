//! Desk-scale Monte-Carlo simulation of the measure-and-operate programming
//! channel at d = 2.
//!
//! A probe of `n` system-reference pairs is prepared as a weighted direct sum
//! of maximally entangled blocks over the Schur sectors of `(C^2)^(x n)`,
//! charged with the target unitary to form the program state. Measuring with
//! the covariant family built from the dimension-weighted reference state and
//! applying the estimated unitary yields a depolarizing-shaped channel
//! `p U rho U† + (1 - p) I/d`. Two independent routes compute `p`:
//!
//! - [`estimate_p`]: per-sample characters of the relative unitary, summed
//!   over the one-box branching of each probe sector (no dense states);
//! - [`simulate_mo_channel`]: dense acceptance weights and a Monte-Carlo Choi
//!   accumulation, self-normalized by the summed weight so the estimated
//!   channel is exactly trace-preserving. Weights enter analytically per
//!   sampled unitary (an exact-expectation estimator of the same channel),
//!   not as accept/reject coin flips, which removes the binary outcome noise.
//!
//! The single-qubit Clifford group (24 elements mod phase) averages both
//! routes exactly: it is a 3-design, which covers the weight polynomials for
//! n <= 2, so `ensemble = Clifford` carries no sampling noise.
//!
//! Probe weights `q` follow the sector order of `repr::partitions(n, 2)`.
//! Multiplicity blocks for d = 2, n <= 2 are one-dimensional, so the block
//! states are fixed canonical vectors.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::matrixcore::{self, CMat, ONE, ZERO};
use crate::repr::{self, Partition};
use crate::sched::{self, Kahan};

#[derive(Debug, Error)]
pub enum MosimError {
    #[error("probe supports n in {{1, 2}}, got {0}")]
    UnsupportedN(usize),
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("zeta {0} outside (0, 0.5]")]
    InvalidZeta(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Matrix(#[from] matrixcore::MatrixError),
    #[error("character error: {0}")]
    Repr(String),
}

pub type Result<T> = std::result::Result<T, MosimError>;

/// Probe configuration: copy count and sector weights.
#[derive(Clone, Debug)]
pub struct ProbeConfig {
    copies: usize,
    q_weights: Vec<f64>,
}

impl ProbeConfig {
    /// `q` is indexed like `repr::partitions(n, 2)`; it must be a probability
    /// vector. For n = 1 the single sector forces `q = [1]`.
    pub fn new(copies: usize, q_weights: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&copies) {
            return Err(MosimError::UnsupportedN(copies));
        }
        let sectors = repr::partitions(copies as u64, 2).len();
        if q_weights.len() != sectors {
            return Err(MosimError::InvalidParams(format!(
                "expected {sectors} sector weights for n = {copies}, got {}",
                q_weights.len()
            )));
        }
        let total: f64 = q_weights.iter().sum();
        if q_weights.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(MosimError::InvalidParams(format!(
                "weights must be non-negative and sum to 1 (got {total})"
            )));
        }
        Ok(Self { copies, q_weights })
    }

    /// Uniform weights over the sectors.
    pub fn uniform(copies: usize) -> Result<Self> {
        if !(1..=2).contains(&copies) {
            return Err(MosimError::UnsupportedN(copies));
        }
        let sectors = repr::partitions(copies as u64, 2).len();
        Self::new(copies, vec![1.0 / sectors as f64; sectors])
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn weights(&self) -> &[f64] {
        &self.q_weights
    }

    pub fn sectors(&self) -> Vec<Partition> {
        repr::partitions(self.copies as u64, 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MeasureEnsemble {
    Haar,
    Clifford,
}

impl std::str::FromStr for MeasureEnsemble {
    type Err = MosimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(MeasureEnsemble::Haar),
            "clifford" => Ok(MeasureEnsemble::Clifford),
            other => Err(MosimError::InvalidParams(format!("unknown ensemble `{other}`"))),
        }
    }
}

/// Monte-Carlo estimate of the channel: depolarizing coefficient, jackknife
/// standard error, and (when the dense route ran) the accumulated Choi matrix.
#[derive(Clone, Debug)]
pub struct MOEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub samples: usize,
    pub ensemble: MeasureEnsemble,
    pub choi_hat: Option<CMat>,
}

const JACKKNIFE_BLOCKS: usize = 32;

/// Leave-one-block-out standard error of the mean, strided blocks.
fn jackknife_stderr(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let blocks = JACKKNIFE_BLOCKS.min(n);
    let mut block_sums = vec![0.0f64; blocks];
    let mut block_counts = vec![0usize; blocks];
    for (i, v) in values.iter().enumerate() {
        block_sums[i % blocks] += v;
        block_counts[i % blocks] += 1;
    }
    let total: f64 = block_sums.iter().sum();
    let mut leave_out = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let remaining = n - block_counts[b];
        if remaining == 0 {
            continue;
        }
        leave_out.push((total - block_sums[b]) / remaining as f64);
    }
    let m = leave_out.len() as f64;
    let mean = leave_out.iter().sum::<f64>() / m;
    let var = leave_out.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() * (m - 1.0) / m;
    var.max(0.0).sqrt()
}

// ---------------------------------------------------------------------------
// Probe construction
// ---------------------------------------------------------------------------

fn ket(index: usize, dim: usize) -> CMat {
    let mut v = CMat::zeros(dim, 1);
    v[(index, 0)] = ONE;
    v
}

/// Schur basis of (C^2)^(x 2): symmetric triplet then the singlet.
fn schur_basis_two_qubits() -> (Vec<CMat>, CMat) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus = CMat::zeros(4, 1);
    plus[(1, 0)] = Complex64::new(s, 0.0);
    plus[(2, 0)] = Complex64::new(s, 0.0);
    let mut minus = CMat::zeros(4, 1);
    minus[(1, 0)] = Complex64::new(s, 0.0);
    minus[(2, 0)] = Complex64::new(-s, 0.0);
    (vec![ket(0, 4), plus, ket(3, 4)], minus)
}

/// Probe vector with amplitude `amp(sector, dim)` on each sector's maximally
/// entangled block, in the interleaved (s1, r1, ..., sn, rn) qubit order.
fn probe_vector_with(cfg: &ProbeConfig, amp: impl Fn(usize, usize) -> f64) -> CMat {
    match cfg.copies {
        1 => {
            // Single sector: the two-qubit maximally entangled state.
            let mut v = CMat::zeros(4, 1);
            let a = amp(0, 2) / 2f64.sqrt();
            v[(0, 0)] = Complex64::new(a, 0.0);
            v[(3, 0)] = Complex64::new(a, 0.0);
            v
        }
        2 => {
            let (triplet, singlet) = schur_basis_two_qubits();
            let mut v = CMat::zeros(16, 1);
            let a_sym = amp(0, 3) / 3f64.sqrt();
            for m in &triplet {
                let block = m.kronecker(m);
                v += block.scale(a_sym);
            }
            let a_anti = amp(1, 1);
            v += singlet.kronecker(&singlet).scale(a_anti);
            // Built on (s1, s2, r1, r2); interleave to (s1, r1, s2, r2).
            matrixcore::permute_qubits_vec(&v, &[0, 2, 1, 3], 4)
        }
        _ => unreachable!("validated in ProbeConfig"),
    }
}

/// Normalized probe state `sum_sector sqrt(q) |Phi+_sector> |eta_sector>` as a
/// column vector on 2n qubits.
pub fn probe_state(cfg: &ProbeConfig) -> Result<CMat> {
    Ok(probe_vector_with(cfg, |sector, _| cfg.q_weights[sector].sqrt()))
}

/// Unnormalized reference vector with dimension-weighted sector amplitudes;
/// its squared norm equals the program dimension of (n, 2).
pub fn reference_vector(cfg: &ProbeConfig) -> CMat {
    probe_vector_with(cfg, |_, dim| dim as f64)
}

/// Applies `(U x I)^(x n)` to a 2n-qubit column vector: `U` on every system
/// qubit (even positions), identity on the references.
fn apply_system_unitary(state: &CMat, u: &CMat, copies: usize) -> CMat {
    let n_qubits = 2 * copies;
    let mut out = state.clone();
    for copy in 0..copies {
        matrixcore::apply_gate_matrix(&mut out, u, &[2 * copy], n_qubits);
    }
    out
}

// ---------------------------------------------------------------------------
// Clifford group
// ---------------------------------------------------------------------------

/// The 24 single-qubit Clifford unitaries (mod global phase), generated as
/// the closure of {H, S} with a canonical phase normalization.
pub fn clifford_group_u2() -> Vec<CMat> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
        ],
    );
    let phase = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, Complex64::new(0.0, 1.0)]);

    fn canonical(u: &CMat) -> (CMat, [i64; 8]) {
        // Rotate the first entry of non-negligible modulus to the positive
        // real axis, then quantize for hashing.
        let mut pivot = ONE;
        for z in u.iter() {
            if z.norm() > 1e-8 {
                pivot = z / z.norm();
                break;
            }
        }
        let fixed = u.scale(1.0) * pivot.conj();
        let mut key = [0i64; 8];
        for (i, z) in fixed.iter().enumerate() {
            key[2 * i] = (z.re * 1e9).round() as i64;
            key[2 * i + 1] = (z.im * 1e9).round() as i64;
        }
        (fixed, key)
    }

    let mut elements: Vec<CMat> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let (start, start_key) = canonical(&matrixcore::identity(2));
    seen.insert(start_key);
    elements.push(start);
    let mut frontier = vec![0usize];
    while let Some(idx) = frontier.pop() {
        for generator in [&h, &phase] {
            let candidate = generator * &elements[idx];
            let (fixed, key) = canonical(&candidate);
            if seen.insert(key) {
                elements.push(fixed);
                frontier.push(elements.len() - 1);
            }
        }
    }
    elements
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

fn check_input_unitary(u: &CMat) -> Result<()> {
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(MosimError::InvalidParams(format!(
            "target must be 2x2, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = matrixcore::unitarity_defect(u);
    if defect > matrixcore::UNITARY_TOL {
        return Err(MosimError::NotUnitary(defect));
    }
    Ok(())
}

/// Character-route sample value: `| sum_sector sqrt(q) sum_{branch} chi(v) |^2`
/// over the one-box branchings of each probe sector.
fn branched_weight(cfg: &ProbeConfig, v: &CMat) -> Result<f64> {
    let (x, y) = {
        let vals = matrixcore::unitary_eigenvalues(v)?;
        (vals[0], vals[1])
    };
    let mut total = Complex64::new(0.0, 0.0);
    for (sector, lambda) in cfg.sectors().iter().enumerate() {
        let mut branch_sum = Complex64::new(0.0, 0.0);
        for mu in repr::add_one_box(lambda, 2) {
            branch_sum += repr::schur_character(&mu, x, y)
                .map_err(|e| MosimError::Repr(e.to_string()))?;
        }
        total += branch_sum.scale(cfg.q_weights[sector].sqrt());
    }
    Ok(total.norm_sqr())
}

fn measurement_unitaries(
    ensemble: MeasureEnsemble,
    samples: usize,
    seed: u64,
) -> Result<Vec<CMat>> {
    match ensemble {
        MeasureEnsemble::Haar => {
            if samples < 1000 {
                return Err(MosimError::InvalidParams(format!(
                    "need at least 1000 samples for the Haar ensemble, got {samples}"
                )));
            }
            let threads = sched::thread_count();
            Ok(sched::parallel_map(samples, threads, |i| {
                let mut rng = sched::rng_for(seed, i as u64);
                matrixcore::haar_unitary_with(2, &mut rng)
            }))
        }
        MeasureEnsemble::Clifford => Ok(clifford_group_u2()),
    }
}

/// Depolarizing coefficient via the character route. The estimator uses the
/// relative unitary `Uhat† U` per sample, so its Haar expectation is
/// U-independent while finite-sample values for different targets stay
/// comparable within error bars.
pub fn estimate_p(
    u: &CMat,
    cfg: &ProbeConfig,
    samples: usize,
    ensemble: MeasureEnsemble,
    seed: u64,
) -> Result<MOEstimate> {
    check_input_unitary(u)?;
    let unitaries = measurement_unitaries(ensemble, samples, seed)?;
    let values: Vec<f64> = unitaries
        .iter()
        .map(|uhat| branched_weight(cfg, &(uhat.adjoint() * u)))
        .collect::<Result<_>>()?;
    let mut acc = Kahan::default();
    for &v in &values {
        acc.add(v);
    }
    let mean = acc.value() / values.len() as f64;
    let d2 = 4.0;
    let p_hat = (mean - 1.0) / (d2 - 1.0);
    let stderr = match ensemble {
        MeasureEnsemble::Haar => jackknife_stderr(&values) / (d2 - 1.0),
        MeasureEnsemble::Clifford => 0.0,
    };
    Ok(MOEstimate { p_hat, stderr, samples: values.len(), ensemble, choi_hat: None })
}

/// Per-sample dense data: acceptance weight and the sampled unitary.
struct DenseSample {
    weight: f64,
    uhat: CMat,
}

fn dense_samples(
    u: &CMat,
    cfg: &ProbeConfig,
    reference: &CMat,
    unitaries: Vec<CMat>,
) -> Result<Vec<DenseSample>> {
    let psi_pu = apply_system_unitary(&probe_state(cfg)?, u, cfg.copies);
    Ok(unitaries
        .into_iter()
        .map(|uhat| {
            let eta = apply_system_unitary(reference, &uhat, cfg.copies);
            let overlap: Complex64 =
                eta.iter().zip(psi_pu.iter()).map(|(a, b)| a.conj() * b).sum();
            DenseSample { weight: overlap.norm_sqr(), uhat }
        })
        .collect())
}

/// Column-stacked Choi vector of a unitary: `J(U . U†) = |vec(U)><vec(U)|`
/// with `vec(U)[i * d + m] = U[i, m]`.
fn choi_vector(u: &CMat) -> CMat {
    let d = u.nrows();
    let mut v = CMat::zeros(d * d, 1);
    for i in 0..d {
        for m in 0..d {
            v[(i * d + m, 0)] = u[(i, m)];
        }
    }
    v
}

/// Model Choi matrix `p J(U) + (1 - p) J(depolarizing)`.
pub fn mo_model_choi(u: &CMat, p: f64) -> CMat {
    let d = u.nrows();
    let v = choi_vector(u);
    (&v * v.adjoint()).scale(p) + matrixcore::choi_depolarizing(d).scale(1.0 - p)
}

/// Least-squares fit of the depolarizing coefficient to a Choi matrix.
pub fn fit_p_to_choi(choi: &CMat, u: &CMat) -> f64 {
    let a = mo_model_choi(u, 1.0);
    let b = mo_model_choi(u, 0.0);
    let diff = &a - &b;
    let num: f64 = diff
        .iter()
        .zip((choi - &b).iter())
        .map(|(x, y)| (x.conj() * y).re)
        .sum();
    let den: f64 = diff.iter().map(|x| x.norm_sqr()).sum();
    num / den
}

/// Dense simulation of the measure-and-operate channel: acceptance-weighted
/// Choi accumulation (Kahan-compensated, index order), self-normalized by the
/// summed weight. `p_hat` is the least-squares depolarizing fit.
pub fn simulate_mo_channel(
    u: &CMat,
    cfg: &ProbeConfig,
    samples: usize,
    ensemble: MeasureEnsemble,
    seed: u64,
) -> Result<MOEstimate> {
    check_input_unitary(u)?;
    if samples == 0 {
        return Err(MosimError::InvalidParams("need at least one sample".into()));
    }
    let unitaries = measurement_unitaries(ensemble, samples, seed)?;
    let reference = reference_vector(cfg);
    let samples_out = dense_samples(u, cfg, &reference, unitaries)?;
    let choi = accumulate_choi(&samples_out, 2);
    let p_hat = fit_p_to_choi(&choi, u);
    // Jackknife over strided blocks of the self-normalized fit.
    let blocks = JACKKNIFE_BLOCKS.min(samples_out.len());
    let stderr = if matches!(ensemble, MeasureEnsemble::Clifford) || blocks < 2 {
        0.0
    } else {
        let mut fits = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let subset: Vec<&DenseSample> = samples_out
                .iter()
                .enumerate()
                .filter(|(i, _)| i % blocks != b)
                .map(|(_, s)| s)
                .collect();
            let choi_b = accumulate_choi_refs(&subset, 2);
            fits.push(fit_p_to_choi(&choi_b, u));
        }
        let m = fits.len() as f64;
        let mean = fits.iter().sum::<f64>() / m;
        (fits.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() * (m - 1.0) / m)
            .max(0.0)
            .sqrt()
    };
    Ok(MOEstimate {
        p_hat,
        stderr,
        samples: samples_out.len(),
        ensemble,
        choi_hat: Some(choi),
    })
}

fn accumulate_choi(samples: &[DenseSample], d: usize) -> CMat {
    let refs: Vec<&DenseSample> = samples.iter().collect();
    accumulate_choi_refs(&refs, d)
}

fn accumulate_choi_refs(samples: &[&DenseSample], d: usize) -> CMat {
    let dim = d * d;
    let mut acc_re = vec![Kahan::default(); dim * dim];
    let mut acc_im = vec![Kahan::default(); dim * dim];
    let mut weight_sum = Kahan::default();
    for s in samples {
        weight_sum.add(s.weight);
        let v = choi_vector(&s.uhat);
        for r in 0..dim {
            for c in 0..dim {
                let z = v[(r, 0)] * v[(c, 0)].conj() * s.weight;
                acc_re[r * dim + c].add(z.re);
                acc_im[r * dim + c].add(z.im);
            }
        }
    }
    let total = weight_sum.value().max(f64::MIN_POSITIVE);
    let mut choi = CMat::from_fn(dim, dim, |r, c| {
        Complex64::new(acc_re[r * dim + c].value(), acc_im[r * dim + c].value()) / total
    });
    // Choi matrices are Hermitian with trace d; clean the numerical remainder.
    choi = (choi.clone() + choi.adjoint()).scale(0.5);
    choi.scale(d as f64 / trace_re(&choi))
}

fn trace_re(m: &CMat) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

/// Per-entry jackknife standard errors of a self-normalized Choi estimate.
pub fn choi_entry_stderr(
    u: &CMat,
    cfg: &ProbeConfig,
    samples: usize,
    seed: u64,
) -> Result<CMat> {
    check_input_unitary(u)?;
    let unitaries = measurement_unitaries(MeasureEnsemble::Haar, samples, seed)?;
    let reference = reference_vector(cfg);
    let samples_out = dense_samples(u, cfg, &reference, unitaries)?;
    let blocks = JACKKNIFE_BLOCKS.min(samples_out.len());
    let dim = 4;
    let mut leave_out: Vec<CMat> = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let subset: Vec<&DenseSample> = samples_out
            .iter()
            .enumerate()
            .filter(|(i, _)| i % blocks != b)
            .map(|(_, s)| s)
            .collect();
        leave_out.push(accumulate_choi_refs(&subset, 2));
    }
    let m = leave_out.len() as f64;
    let mut mean = CMat::zeros(dim, dim);
    for c in &leave_out {
        mean += c.scale(1.0 / m);
    }
    Ok(CMat::from_fn(dim, dim, |r, c| {
        let var: f64 = leave_out
            .iter()
            .map(|j| (j[(r, c)] - mean[(r, c)]).norm_sqr())
            .sum::<f64>()
            * (m - 1.0)
            / m;
        Complex64::new(var.max(0.0).sqrt(), 0.0)
    }))
}

/// Report of the reference-state perturbation robustness check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZetaReport {
    /// Choi-level deviation `(1/2d) || J~ - J ||_1` between the perturbed and
    /// unperturbed channels (paired samples).
    pub deviation: f64,
    /// The half-diamond budget `zeta / 2`.
    pub bound: f64,
    /// Trace-norm size of the applied reference perturbation.
    pub applied: f64,
}

/// Perturbs the (unnormalized) reference state by `fraction * zeta` in trace
/// norm and measures the paired Choi-level channel deviation, which must stay
/// within `zeta / 2` up to Monte-Carlo noise.
pub fn zeta_perturbation_check(
    cfg: &ProbeConfig,
    zeta: f64,
    fraction: f64,
    samples: usize,
    seed: u64,
) -> Result<ZetaReport> {
    if !(zeta > 0.0 && zeta <= 0.5) {
        return Err(MosimError::InvalidZeta(zeta));
    }
    if !(0.0..=1.0).contains(&fraction) {
        return Err(MosimError::InvalidParams(format!("fraction {fraction} outside [0, 1]")));
    }
    let u = matrixcore::identity(2);
    let unitaries = measurement_unitaries(MeasureEnsemble::Haar, samples, seed)?;
    let psi_pu = apply_system_unitary(&probe_state(cfg)?, &u, cfg.copies);

    // Reference as a density-like matrix plus a rank-one disturbance of trace
    // norm exactly fraction * zeta.
    let psi0 = reference_vector(cfg);
    let psi0_mat = &psi0 * psi0.adjoint();
    let dim = psi0.nrows();
    let random_dir = {
        let mut rng = sched::rng_for(seed ^ 0x5eed, 0);
        let mut v = CMat::from_fn(dim, 1, |_, _| {
            Complex64::new(
                rand::Rng::gen::<f64>(&mut rng) - 0.5,
                rand::Rng::gen::<f64>(&mut rng) - 0.5,
            )
        });
        let norm = matrixcore::frobenius_norm(&v);
        v = v.scale(1.0 / norm);
        v
    };
    let norm0_sq: f64 = psi0.iter().map(|z| z.norm_sqr()).sum();
    let disturbance = (&random_dir * random_dir.adjoint()).scale(norm0_sq) - &psi0_mat;
    let disturbance_size = matrixcore::trace_norm(&disturbance);
    let scale = if disturbance_size > 0.0 { fraction * zeta / disturbance_size } else { 0.0 };
    let perturbed_mat = &psi0_mat + disturbance.scale(scale);
    let applied = matrixcore::trace_norm(&(&perturbed_mat - &psi0_mat));

    // Paired raw-mean Choi estimates: w from the vector reference, w~ from
    // the perturbed matrix reference, identical measurement samples.
    let n = unitaries.len() as f64;
    let mut acc_c: Vec<Vec<Complex64>> = vec![vec![ZERO; 16]; 2];
    for uhat in &unitaries {
        let eta_vec = apply_system_unitary(&psi0, uhat, cfg.copies);
        let overlap: Complex64 =
            eta_vec.iter().zip(psi_pu.iter()).map(|(a, b)| a.conj() * b).sum();
        let w = overlap.norm_sqr();
        // <psi_PU| (Uhat x I)^n psi0~ (Uhat x I)^n† |psi_PU>
        let back = apply_system_unitary_dagger(&psi_pu, uhat, cfg.copies);
        let tmp = &perturbed_mat * &back;
        let w_tilde: f64 = back.iter().zip(tmp.iter()).map(|(a, b)| (a.conj() * b).re).sum();
        let jv = choi_vector(uhat);
        for r in 0..4 {
            for c in 0..4 {
                let j_rc = jv[(r, 0)] * jv[(c, 0)].conj();
                acc_c[0][r * 4 + c] += j_rc * w;
                acc_c[1][r * 4 + c] += j_rc * w_tilde;
            }
        }
    }
    let choi_plain = CMat::from_fn(4, 4, |r, c| acc_c[0][r * 4 + c] / n);
    let choi_tilde = CMat::from_fn(4, 4, |r, c| acc_c[1][r * 4 + c] / n);
    let deviation = matrixcore::trace_norm(&(&choi_tilde - &choi_plain)) / (2.0 * 2.0);
    Ok(ZetaReport { deviation, bound: zeta / 2.0, applied })
}

/// Applies `(U x I)^(x n)†` to a 2n-qubit column vector.
fn apply_system_unitary_dagger(state: &CMat, u: &CMat, copies: usize) -> CMat {
    let ud = u.adjoint();
    apply_system_unitary(state, &ud, copies)
}
