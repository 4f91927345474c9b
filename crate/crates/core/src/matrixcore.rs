//! Dense complex linear algebra and quantum-information primitives.
//!
//! Conventions used throughout the crate:
//!
//! - Qubit 0 is the most significant bit of a basis index, so a basis state
//!   `|b_0 b_1 ... b_{N-1}>` has index `sum_j b_j * 2^(N-1-j)`.
//! - Entropic quantities are returned in nats; conversion to bits happens only
//!   at report boundaries.
//! - Channel-level comparisons (diamond distances) are insensitive to global
//!   phase; matrix-level norms never optimize the phase unless the function
//!   name says so.
//! - Choi matrices use the unnormalized convention `J(E) = sum_{m,n}
//!   E(|m><n|) (x) |m><n|` (output factor first), so the identity channel maps
//!   to `d * |Phi+><Phi+|`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::sched;

/// Dense complex matrix; column vectors are `d x 1`.
pub type CMat = DMatrix<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

/// Largest qubit count for dense N-qubit constructions.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Tolerance used when classifying a matrix as unitary.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("mixing coefficient {0} outside [0, 1]")]
    InvalidP(f64),
    #[error("{0} qubits exceeds the dense-evaluation limit {1}")]
    TooLarge(usize, usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, MatrixError>;

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Hermitian conjugate.
pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of a Hermitian matrix, ascending. Hermiticity is the caller's
/// responsibility; only the self-adjoint part feeds the solver.
fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let h = (a + a.adjoint()).scale(0.5);
    let mut v: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    v
}

/// Operator norm (largest singular value), via the Hermitian spectrum of A†A.
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = a.adjoint() * a;
    hermitian_eigenvalues(&gram)
        .last()
        .map(|&x| x.max(0.0).sqrt())
        .unwrap_or(0.0)
}

/// Schatten-1 norm (sum of singular values).
pub fn trace_norm(a: &CMat) -> f64 {
    let gram = a.adjoint() * a;
    hermitian_eigenvalues(&gram)
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum()
}

fn hermiticity_defect(a: &CMat) -> f64 {
    frobenius_norm(&(a - a.adjoint()))
}

/// Deviation of `u` from unitarity in operator norm.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let d = u.nrows();
    op_norm(&(u.adjoint() * u - identity(d)))
}

pub fn check_unitary(u: &CMat, tol: f64) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(MatrixError::DimensionMismatch(format!(
            "{}x{} is not square",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > tol {
        return Err(MatrixError::NotUnitary(defect));
    }
    Ok(())
}

/// Trace distance `(1/2) ||rho - sigma||_1` for Hermitian inputs.
pub fn trace_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    if rho.shape() != sigma.shape() || rho.nrows() != rho.ncols() {
        return Err(MatrixError::DimensionMismatch(format!(
            "{:?} vs {:?}",
            rho.shape(),
            sigma.shape()
        )));
    }
    let diff = rho - sigma;
    let defect = hermiticity_defect(&diff);
    if defect > 1e-8 {
        return Err(MatrixError::NotHermitian(defect));
    }
    Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>())
}

// ---------------------------------------------------------------------------
// Unitary spectra and diamond distance
// ---------------------------------------------------------------------------

/// Eigendecomposition of a unitary matrix: unit-modulus eigenvalues plus an
/// orthonormal eigenvector matrix (columns).
///
/// Works through the Hermitian combination `H_a = (W+W†)/2 + a (W-W†)/(2i)`,
/// which commutes with `W`; for generic `a` its eigenvectors are eigenvectors
/// of `W`, recovered eigenvalues are Rayleigh quotients. Residuals above
/// 1e-7 trigger a retry with a different `a` (two distinct unitary eigenvalues
/// collide in `H_a` only on a measure-zero set of `a`).
pub fn unitary_eigen(w: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    check_unitary(w, 100.0 * UNITARY_TOL)?;
    let d = w.nrows();
    if d == 1 {
        let z = w[(0, 0)];
        return Ok((vec![z / z.norm()], identity(1)));
    }
    let wdag = w.adjoint();
    let herm = (w + &wdag).scale(0.5);
    let skew = (w - &wdag).scale(0.5) * Complex64::new(0.0, -1.0);
    let mut best: Option<(f64, Vec<Complex64>, CMat)> = None;
    for &alpha in &[0.618_033_988_75_f64, 1.902_113_032_59, 0.137_035_999_08] {
        let m = &herm + skew.scale(alpha);
        let se = m.symmetric_eigen();
        let q = se.eigenvectors;
        let wq = w * &q;
        let mut vals = Vec::with_capacity(d);
        let mut max_residual = 0.0_f64;
        for j in 0..d {
            let qj = q.column(j);
            let wqj = wq.column(j);
            let lambda: Complex64 = qj.iter().zip(wqj.iter()).map(|(a, b)| a.conj() * b).sum();
            let lambda = if lambda.norm() > 0.0 { lambda / lambda.norm() } else { ONE };
            let mut res = 0.0_f64;
            for i in 0..d {
                res += (wqj[i] - lambda * qj[i]).norm_sqr();
            }
            max_residual = max_residual.max(res.sqrt());
            vals.push(lambda);
        }
        if max_residual <= 1e-7 {
            return Ok((vals, q));
        }
        if best.as_ref().is_none_or(|(r, _, _)| max_residual < *r) {
            best = Some((max_residual, vals, q));
        }
    }
    let (res, vals, q) = best.expect("at least one attempt");
    if res <= 1e-5 {
        return Ok((vals, q));
    }
    Err(MatrixError::Numerical(format!(
        "unitary eigendecomposition residual {res:.3e}"
    )))
}

/// Eigenphases of a 2x2 matrix via the characteristic polynomial, normalized
/// to unit modulus.
fn eigenphases_2x2(w: &CMat) -> (Complex64, Complex64) {
    let t = w[(0, 0)] + w[(1, 1)];
    let det = w[(0, 0)] * w[(1, 1)] - w[(0, 1)] * w[(1, 0)];
    let disc = (t * t - det.scale(4.0)).sqrt();
    let l1 = (t + disc).scale(0.5);
    let l2 = (t - disc).scale(0.5);
    let norm = |z: Complex64| if z.norm() > 0.0 { z / z.norm() } else { ONE };
    (norm(l1), norm(l2))
}

/// Unit-circle eigenvalues of a unitary matrix.
pub fn unitary_eigenvalues(w: &CMat) -> Result<Vec<Complex64>> {
    if w.nrows() == 2 && w.ncols() == 2 {
        let (a, b) = eigenphases_2x2(w);
        return Ok(vec![a, b]);
    }
    Ok(unitary_eigen(w)?.0)
}

/// Width of the smallest arc containing all phases (radians in [0, 2pi]).
fn spectral_arc_width(phases: &[f64]) -> f64 {
    debug_assert!(!phases.is_empty());
    let mut sorted: Vec<f64> = phases.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite phases"));
    let n = sorted.len();
    let mut max_gap = 2.0 * std::f64::consts::PI - (sorted[n - 1] - sorted[0]);
    for w in sorted.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    (2.0 * std::f64::consts::PI - max_gap).max(0.0)
}

fn relative_phases(u: &CMat, v: &CMat) -> Result<Vec<f64>> {
    if u.shape() != v.shape() {
        return Err(MatrixError::DimensionMismatch(format!(
            "{:?} vs {:?}",
            u.shape(),
            v.shape()
        )));
    }
    check_unitary(u, UNITARY_TOL)?;
    check_unitary(v, UNITARY_TOL)?;
    let w = u.adjoint() * v;
    Ok(unitary_eigenvalues(&w)?.iter().map(|z| z.arg()).collect())
}

/// Exact diamond-norm distance between the unitary channels of `u` and `v`.
///
/// Equal to `2 sqrt(1 - nu^2)` where `nu` is the distance from the origin to
/// the convex hull of the eigenvalues of `U†V`: with `A` the width of the
/// smallest arc containing the eigenphases, `nu = max(0, cos(A/2))`.
pub fn diamond_distance_unitary(u: &CMat, v: &CMat) -> Result<f64> {
    let arc = spectral_arc_width(&relative_phases(u, v)?);
    let nu = (arc / 2.0).cos().max(0.0);
    Ok(2.0 * (1.0 - nu * nu).max(0.0).sqrt())
}

/// `min_phi || U - e^{i phi} V ||` in operator norm.
pub fn phase_optimized_opnorm(u: &CMat, v: &CMat) -> Result<f64> {
    let arc = spectral_arc_width(&relative_phases(u, v)?);
    Ok(2.0 * (arc / 4.0).sin())
}

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

/// Spectrum floor below which density-matrix eigenvalues are treated as zero.
pub const ENTROPY_EIG_CLIP: f64 = 1e-14;

fn check_density(rho: &CMat) -> Result<Vec<f64>> {
    if rho.nrows() != rho.ncols() {
        return Err(MatrixError::NotDensity("not square".into()));
    }
    let defect = hermiticity_defect(rho);
    if defect > 1e-8 {
        return Err(MatrixError::NotDensity(format!(
            "Hermiticity defect {defect:.3e}"
        )));
    }
    let eigs = hermitian_eigenvalues(rho);
    if let Some(min) = eigs.first() {
        if *min < -1e-10 {
            return Err(MatrixError::NotDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    let trace: f64 = eigs.iter().sum();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(MatrixError::NotDensity(format!("trace {trace}")));
    }
    Ok(eigs)
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &CMat) -> Result<f64> {
    let eigs = check_density(rho)?;
    Ok(eigs
        .iter()
        .filter(|&&x| x > ENTROPY_EIG_CLIP)
        .map(|&x| -x * x.ln())
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    States,
    Unitaries,
}

/// Weighted collection of density matrices or unitaries.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub members: Vec<(f64, CMat)>,
    pub kind: EnsembleKind,
}

impl Ensemble {
    pub fn states(members: Vec<(f64, CMat)>) -> Result<Self> {
        let total: f64 = members.iter().map(|(w, _)| *w).sum();
        if members.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(MatrixError::NotDensity(format!(
                "weights must be non-negative and sum to 1 (got {total})"
            )));
        }
        for (_, rho) in &members {
            check_density(rho)?;
        }
        Ok(Self { members, kind: EnsembleKind::States })
    }

    pub fn unitaries(members: Vec<(f64, CMat)>) -> Result<Self> {
        let total: f64 = members.iter().map(|(w, _)| *w).sum();
        if members.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(MatrixError::NotDensity(format!(
                "weights must be non-negative and sum to 1 (got {total})"
            )));
        }
        for (_, u) in &members {
            check_unitary(u, 1e-9)?;
        }
        Ok(Self { members, kind: EnsembleKind::Unitaries })
    }
}

/// Holevo information `chi = S(sum_x w_x rho_x) - sum_x w_x S(rho_x)`, nats.
pub fn holevo_information(ensemble: &Ensemble) -> Result<f64> {
    if ensemble.kind != EnsembleKind::States || ensemble.members.is_empty() {
        return Err(MatrixError::NotDensity("state ensemble required".into()));
    }
    let d = ensemble.members[0].1.nrows();
    let mut avg = CMat::zeros(d, d);
    let mut mean_entropy = 0.0;
    for (w, rho) in &ensemble.members {
        avg += rho.scale(*w);
        mean_entropy += w * von_neumann_entropy(rho)?;
    }
    Ok(von_neumann_entropy(&avg)? - mean_entropy)
}

/// Slack of the entropy-continuity bound
/// `|S(rho) - S(sigma)| <= ln(subspace_dim) * d_Tr(rho, sigma) + ln 2`
/// for states differing on a `subspace_dim`-dimensional subspace (the caller
/// asserts the subspace dimension; the full dimension is a safe default).
pub fn afw_slack(rho: &CMat, sigma: &CMat, subspace_dim: usize) -> Result<f64> {
    let ds = von_neumann_entropy(rho)? - von_neumann_entropy(sigma)?;
    let dtr = trace_distance(rho, sigma)?;
    Ok((subspace_dim as f64).ln() * dtr + 2.0_f64.ln() - ds.abs())
}

// ---------------------------------------------------------------------------
// Haar sampling
// ---------------------------------------------------------------------------

/// Haar-random `d x d` unitary: QR of a complex Ginibre matrix with the
/// diagonal of R phase-corrected.
pub fn haar_unitary(d: usize, seed: u64) -> CMat {
    let mut rng = sched::rng_for(seed, 0);
    haar_unitary_with(d, &mut rng)
}

pub fn haar_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let ginibre = CMat::from_fn(d, d, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal) / f64::sqrt(2.0),
            rng.sample::<f64, _>(StandardNormal) / f64::sqrt(2.0),
        )
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

// ---------------------------------------------------------------------------
// Pauli strings and rotations
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn matrix(self) -> CMat {
        match self {
            PauliAxis::X => CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            PauliAxis::Y => CMat::from_row_slice(
                2,
                2,
                &[ZERO, -I_UNIT, I_UNIT, ZERO],
            ),
            PauliAxis::Z => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PauliAxis::X => "X",
            PauliAxis::Y => "Y",
            PauliAxis::Z => "Z",
        }
    }
}

fn check_support(support: &[usize], n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(MatrixError::TooLarge(n, MAX_DENSE_QUBITS));
    }
    let mut seen = std::collections::HashSet::new();
    for &q in support {
        if q >= n {
            return Err(MatrixError::DimensionMismatch(format!(
                "qubit {q} outside [0, {n})"
            )));
        }
        if !seen.insert(q) {
            return Err(MatrixError::DimensionMismatch(format!(
                "repeated qubit {q} in support"
            )));
        }
    }
    Ok(())
}

/// `P (x) ... (x) P` on `support`, identity elsewhere, on `n` qubits.
pub fn pauli_string_matrix(axis: PauliAxis, support: &[usize], n: usize) -> Result<CMat> {
    check_support(support, n)?;
    let dim = 1usize << n;
    let mut out = CMat::zeros(dim, dim);
    let p = axis.matrix();
    for col in 0..dim {
        // Each basis column maps to a single basis row with a +-1 / +-i factor.
        let mut row = col;
        let mut factor = ONE;
        for &q in support {
            let bit = (col >> (n - 1 - q)) & 1;
            let flipped = match axis {
                PauliAxis::X | PauliAxis::Y => 1 - bit,
                PauliAxis::Z => bit,
            };
            factor *= p[(flipped, bit)];
            if matches!(axis, PauliAxis::X | PauliAxis::Y) {
                row ^= 1 << (n - 1 - q);
            }
        }
        out[(row, col)] = factor;
    }
    Ok(out)
}

/// `exp(i theta P)` for a Pauli string `P`: `cos(theta) I + i sin(theta) P`
/// exactly, since the string squares to the identity.
pub fn pauli_rotation(axis: PauliAxis, support: &[usize], theta: f64, n: usize) -> Result<CMat> {
    let p = pauli_string_matrix(axis, support, n)?;
    let dim = 1usize << n;
    Ok(identity(dim).scale(theta.cos()) + p * Complex64::new(0.0, theta.sin()))
}

/// Local form of [`pauli_rotation`] on `k` qubits (support `0..k`).
pub fn pauli_rotation_local(axis: PauliAxis, k: usize, theta: f64) -> CMat {
    let support: Vec<usize> = (0..k).collect();
    pauli_rotation(axis, &support, theta, k).expect("local support is valid")
}

// ---------------------------------------------------------------------------
// Gate embedding
// ---------------------------------------------------------------------------

/// Left-multiplies `target` by `gate` embedded on `support` (ordered; entry 0
/// of the support is the most significant bit of the gate index).
pub fn apply_gate_matrix(target: &mut CMat, gate: &CMat, support: &[usize], n: usize) {
    let dim = 1usize << n;
    let k = support.len();
    let gate_dim = 1usize << k;
    assert_eq!(gate.nrows(), gate_dim, "gate size must match support");
    assert_eq!(target.nrows(), dim, "target size must match qubit count");
    let bit_pos: Vec<usize> = support.iter().map(|&q| n - 1 - q).collect();
    let support_mask: usize = bit_pos.iter().map(|&b| 1usize << b).sum();
    let place = |g: usize| -> usize {
        let mut idx = 0usize;
        for (t, &b) in bit_pos.iter().enumerate() {
            if (g >> (k - 1 - t)) & 1 == 1 {
                idx |= 1 << b;
            }
        }
        idx
    };
    let offsets: Vec<usize> = (0..gate_dim).map(place).collect();
    let mut scratch = vec![ZERO; gate_dim];
    for col in 0..target.ncols() {
        for base in 0..dim {
            if base & support_mask != 0 {
                continue;
            }
            for (g, &off) in offsets.iter().enumerate() {
                scratch[g] = target[(base | off, col)];
            }
            for (gp, &off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (g, &s) in scratch.iter().enumerate() {
                    acc += gate[(gp, g)] * s;
                }
                target[(base | off, col)] = acc;
            }
        }
    }
}

/// Dense `2^n x 2^n` embedding of `gate` on `support`.
pub fn embed_gate(gate: &CMat, support: &[usize], n: usize) -> CMat {
    let mut out = identity(1 << n);
    apply_gate_matrix(&mut out, gate, support, n);
    out
}

/// Reorders the qubits of a column vector: output qubit `i` is input qubit
/// `perm[i]`.
pub fn permute_qubits_vec(v: &CMat, perm: &[usize], n: usize) -> CMat {
    let dim = 1usize << n;
    assert_eq!(v.nrows(), dim);
    assert_eq!(perm.len(), n);
    let mut out = CMat::zeros(dim, 1);
    for idx in 0..dim {
        let mut src = 0usize;
        for (i, &p) in perm.iter().enumerate() {
            let bit = (idx >> (n - 1 - i)) & 1;
            src |= bit << (n - 1 - p);
        }
        out[(idx, 0)] = v[(src, 0)];
    }
    out
}

// ---------------------------------------------------------------------------
// Channels and Choi matrices
// ---------------------------------------------------------------------------

/// `p * U rho U† + (1 - p) * Tr(rho) * I/d` (linear extension in `rho`).
pub fn apply_channel_depolarizing(rho: &CMat, u: &CMat, p: f64) -> Result<CMat> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MatrixError::InvalidP(p));
    }
    if rho.shape() != u.shape() {
        return Err(MatrixError::DimensionMismatch(format!(
            "{:?} vs {:?}",
            rho.shape(),
            u.shape()
        )));
    }
    check_unitary(u, UNITARY_TOL)?;
    let d = rho.nrows();
    let trace: Complex64 = (0..d).map(|i| rho[(i, i)]).sum();
    Ok((u * rho * u.adjoint()).scale(p) + identity(d) * (trace * ((1.0 - p) / d as f64)))
}

/// Choi matrix `sum_{m,n} E(|m><n|) (x) |m><n|` of the channel evaluator.
pub fn choi_of<F: FnMut(&CMat) -> CMat>(mut channel: F, d: usize) -> CMat {
    let mut choi = CMat::zeros(d * d, d * d);
    for m in 0..d {
        for n in 0..d {
            let mut basis = CMat::zeros(d, d);
            basis[(m, n)] = ONE;
            let out = channel(&basis);
            for i in 0..d {
                for j in 0..d {
                    choi[(i * d + m, j * d + n)] = out[(i, j)];
                }
            }
        }
    }
    choi
}

/// Choi matrix of the unitary channel `rho -> U rho U†`.
pub fn choi_of_unitary(u: &CMat) -> CMat {
    let d = u.nrows();
    choi_of(|x| u * x * u.adjoint(), d)
}

/// Choi matrix of the completely depolarizing channel `rho -> Tr(rho) I/d`.
pub fn choi_depolarizing(d: usize) -> CMat {
    identity(d * d).scale(1.0 / d as f64)
}

/// Partial trace over the output (first) factor of an `(d*d) x (d*d)` Choi
/// matrix, returning the `d x d` input-side marginal.
pub fn choi_trace_out(choi: &CMat, d: usize) -> CMat {
    let mut out = CMat::zeros(d, d);
    for m in 0..d {
        for n in 0..d {
            let mut acc = ZERO;
            for i in 0..d {
                acc += choi[(i * d + m, i * d + n)];
            }
            out[(m, n)] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sched;
    use rand::Rng;

    fn ket(i: usize, d: usize) -> CMat {
        let mut v = CMat::zeros(d, 1);
        v[(i, 0)] = ONE;
        v
    }

    fn proj(i: usize, d: usize) -> CMat {
        let k = ket(i, d);
        &k * k.adjoint()
    }

    #[test]
    fn haar_is_unitary() {
        for d in [1, 2, 4, 8] {
            let u = haar_unitary(d, 11 + d as u64);
            assert!(unitarity_defect(&u) < 1e-10, "d = {d}");
        }
    }

    #[test]
    fn haar_d1_is_unit_modulus() {
        let u = haar_unitary(1, 3);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_trace_moments_match_moment_oracle() {
        // E|Tr U|^2 = 1 and E|Tr U|^4 = 2 for Haar on U(2); left-multiplying
        // by a fixed unitary must leave the statistics unchanged.
        let samples = 100_000usize;
        let fixed = haar_unitary(2, 555);
        let (mut m2, mut m4) = (sched::Kahan::default(), sched::Kahan::default());
        let mut m2_shifted = sched::Kahan::default();
        let mut sq2 = sched::Kahan::default();
        let mut sq4 = sched::Kahan::default();
        for i in 0..samples {
            let mut rng = sched::rng_for(2024, i as u64);
            let u = haar_unitary_with(2, &mut rng);
            let t = (u[(0, 0)] + u[(1, 1)]).norm_sqr();
            m2.add(t);
            m4.add(t * t);
            sq2.add(t * t);
            sq4.add(t * t * t * t);
            let fu = &fixed * &u;
            m2_shifted.add((fu[(0, 0)] + fu[(1, 1)]).norm_sqr());
        }
        let n = samples as f64;
        let mean2 = m2.value() / n;
        let mean4 = m4.value() / n;
        let sd2 = ((sq2.value() / n - mean2 * mean2) / n).sqrt();
        let sd4 = ((sq4.value() / n - mean4 * mean4) / n).sqrt();
        assert!((mean2 - 1.0).abs() <= 3.0 * sd2, "mean2 = {mean2}, sd = {sd2}");
        assert!((mean4 - 2.0).abs() <= 3.0 * sd4, "mean4 = {mean4}, sd = {sd4}");
        let mean2_shifted = m2_shifted.value() / n;
        assert!(
            (mean2_shifted - 1.0).abs() <= 3.0 * sd2,
            "left invariance: {mean2_shifted}"
        );
    }

    #[test]
    fn trace_distance_basics() {
        let rho = proj(0, 2);
        assert!(trace_distance(&rho, &rho).unwrap().abs() < 1e-14);
        let sigma = proj(1, 2);
        assert!((trace_distance(&rho, &sigma).unwrap() - 1.0).abs() < 1e-12);
        let max_mixed = identity(2).scale(0.5);
        assert!((trace_distance(&rho, &max_mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn diamond_distance_edge_cases() {
        let u = haar_unitary(4, 5);
        assert!(diamond_distance_unitary(&u, &u).unwrap() < 1e-9);
        let phase = identity(3) * Complex64::from_polar(1.0, 0.77);
        assert!(diamond_distance_unitary(&identity(3), &phase).unwrap() < 1e-9);
        let z = PauliAxis::Z.matrix();
        assert!((diamond_distance_unitary(&identity(2), &z).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn diamond_sandwich_and_state_lower_bound() {
        for i in 0..300 {
            let d = if i % 2 == 0 { 2 } else { 4 };
            let u = haar_unitary(d, sched::subseed(900, 2 * i));
            let v = haar_unitary(d, sched::subseed(900, 2 * i + 1));
            let dia = diamond_distance_unitary(&u, &v).unwrap();
            let pon = phase_optimized_opnorm(&u, &v).unwrap();
            assert!(pon <= dia + 1e-8, "lower sandwich failed: {pon} vs {dia}");
            assert!(dia <= 2.0 * pon + 1e-8, "upper sandwich failed: {dia} vs {pon}");
        }
        // Output trace distances over entangled inputs never exceed the diamond distance.
        for i in 0..10 {
            let u = haar_unitary(2, sched::subseed(901, 2 * i));
            let v = haar_unitary(2, sched::subseed(901, 2 * i + 1));
            let dia = diamond_distance_unitary(&u, &v).unwrap();
            let ue = embed_gate(&u, &[0], 2);
            let ve = embed_gate(&v, &[0], 2);
            let mut max_seen = 0.0_f64;
            for s in 0..100 {
                let mut rng = sched::rng_for(33 + i, s);
                let mut psi = CMat::from_fn(4, 1, |_, _| {
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                });
                let norm = frobenius_norm(&psi);
                psi = psi.scale(1.0 / norm);
                let r1 = &ue * &psi;
                let r2 = &ve * &psi;
                let d1 = &r1 * r1.adjoint();
                let d2 = &r2 * r2.adjoint();
                max_seen = max_seen.max(2.0 * trace_distance(&d1, &d2).unwrap());
            }
            assert!(max_seen <= dia + 1e-8, "{max_seen} vs {dia}");
        }
    }

    #[test]
    fn diamond_distance_attained_by_extremal_entangled_input() {
        // For unitary channels the distance is met with equality by the
        // input (|w_min>|0> + |w_max>|1>)/sqrt(2) built from the extremal
        // eigenvectors of U†V, whenever the eigenphase arc stays below pi.
        let mut tested = 0;
        for i in 0..60u64 {
            let d = 4;
            let u = haar_unitary(d, sched::subseed(9100, 2 * i));
            // Relative unitary with phases inside (-1.3, 1.3) so the arc
            // stays below pi and the chord formula is the exact optimum.
            let v = {
                let q = haar_unitary(d, sched::subseed(9101, i));
                let mut rng = sched::rng_for(9102, i);
                let diag = CMat::from_fn(d, d, |r, c| {
                    if r == c {
                        Complex64::from_polar(1.0, (rng.gen::<f64>() - 0.5) * 2.6)
                    } else {
                        ZERO
                    }
                });
                &u * (&q * diag * q.adjoint())
            };
            let w = u.adjoint() * &v;
            let (vals, vecs) = unitary_eigen(&w).unwrap();
            let mut phases: Vec<(f64, usize)> =
                vals.iter().enumerate().map(|(j, z)| (z.arg(), j)).collect();
            phases.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            // Rotate so the largest gap sits at the wrap-around.
            let mut max_gap = 2.0 * std::f64::consts::PI
                - (phases.last().unwrap().0 - phases.first().unwrap().0);
            let mut cut = 0;
            for j in 1..phases.len() {
                let gap = phases[j].0 - phases[j - 1].0;
                if gap > max_gap {
                    max_gap = gap;
                    cut = j;
                }
            }
            let arc = 2.0 * std::f64::consts::PI - max_gap;
            if arc >= std::f64::consts::PI {
                continue;
            }
            let lo = phases[cut].1;
            let hi = phases[(cut + phases.len() - 1) % phases.len()].1;
            let mut psi = CMat::zeros(d * d, 1);
            for r in 0..d {
                psi[(r * d, 0)] = vecs[(r, lo)] / 2f64.sqrt();
                psi[(r * d + 1, 0)] = vecs[(r, hi)] / 2f64.sqrt();
            }
            let ue = u.kronecker(&identity(d));
            let ve = v.kronecker(&identity(d));
            let a = &ue * &psi;
            let b = &ve * &psi;
            let achieved = 2.0 * trace_distance(&(&a * a.adjoint()), &(&b * b.adjoint())).unwrap();
            let formula = diamond_distance_unitary(&u, &v).unwrap();
            assert!(
                (achieved - formula).abs() < 1e-8,
                "pair {i}: achieved {achieved} vs formula {formula}"
            );
            tested += 1;
        }
        assert!(tested > 20, "too few non-degenerate cases: {tested}");
    }

    #[test]
    fn unitary_eigen_recovers_constructed_spectrum() {
        // Matrix with a deliberately degenerate cosine pattern.
        let phases = [0.3_f64, -0.3, 2.5, std::f64::consts::PI];
        let q = haar_unitary(4, 777);
        let diag = CMat::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, phases[i])
            } else {
                ZERO
            }
        });
        let w = &q * diag * q.adjoint();
        let (vals, _) = unitary_eigen(&w).unwrap();
        let mut got: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
        let mut want = phases.to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
    }

    #[test]
    fn entropy_and_holevo() {
        let bit = Ensemble::states(vec![(0.5, proj(0, 2)), (0.5, proj(1, 2))]).unwrap();
        assert!((holevo_information(&bit).unwrap() - 2.0_f64.ln()).abs() < 1e-12);
        let same = Ensemble::states(vec![(0.5, proj(0, 2)), (0.5, proj(0, 2))]).unwrap();
        assert!(holevo_information(&same).unwrap().abs() < 1e-12);
        // Random pure qubit ensembles stay below ln 2.
        for trial in 0..50 {
            let mut members = Vec::new();
            for j in 0..4 {
                let u = haar_unitary(2, sched::subseed(50 + trial, j));
                members.push((0.25, &u * proj(0, 2) * u.adjoint()));
            }
            let e = Ensemble::states(members).unwrap();
            let chi = holevo_information(&e).unwrap();
            assert!(chi <= 2.0_f64.ln() + 1e-9 && chi >= -1e-9);
        }
    }

    #[test]
    fn afw_slack_examples() {
        let rho = proj(0, 2);
        assert!((afw_slack(&rho, &rho, 2).unwrap() - 2.0_f64.ln()).abs() < 1e-12);
        let mix = identity(2).scale(0.5);
        assert!((afw_slack(&rho, &mix, 2).unwrap() - 0.5 * 2.0_f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn pauli_rotation_closed_form_matches_series() {
        let mut rng = sched::rng_for(8, 0);
        for _ in 0..20 {
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let axis = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z][rng.gen_range(0..3)];
            let support = [0usize, 1];
            let closed = pauli_rotation(axis, &support, theta, 2).unwrap();
            // Series oracle: sum_k (i theta P)^k / k!
            let p = pauli_string_matrix(axis, &support, 2).unwrap();
            let mut series = identity(4);
            let mut term = identity(4);
            for k in 1..48 {
                term = &term * &p * (I_UNIT * Complex64::from(theta / k as f64));
                series += &term;
            }
            assert!(frobenius_norm(&(&closed - &series)) < 1e-12);
        }
    }

    #[test]
    fn pauli_rotation_special_angles() {
        let minus_i = pauli_rotation(PauliAxis::X, &[0, 1], std::f64::consts::PI, 2).unwrap();
        assert!(frobenius_norm(&(&minus_i + identity(4))) < 1e-12);
        let iz = pauli_rotation(PauliAxis::Z, &[0], std::f64::consts::FRAC_PI_2, 1).unwrap();
        let want = PauliAxis::Z.matrix() * I_UNIT;
        assert!(frobenius_norm(&(&iz - &want)) < 1e-12);
        let id = pauli_rotation(PauliAxis::Y, &[0], 0.0, 1).unwrap();
        assert!(frobenius_norm(&(&id - identity(2))) < 1e-14);
    }

    #[test]
    fn depolarizing_channel_limits() {
        let rho = proj(1, 2);
        let u = haar_unitary(2, 4);
        let full = apply_channel_depolarizing(&rho, &u, 1.0).unwrap();
        assert!(frobenius_norm(&(&full - &u * &rho * u.adjoint())) < 1e-12);
        let none = apply_channel_depolarizing(&rho, &u, 0.0).unwrap();
        assert!(frobenius_norm(&(&none - identity(2).scale(0.5))) < 1e-12);
        assert!(apply_channel_depolarizing(&rho, &u, 1.5).is_err());
    }

    #[test]
    fn choi_of_identity_is_unnormalized_bell() {
        let d = 3;
        let choi = choi_of(|x| x.clone(), d);
        let mut bell = CMat::zeros(d, 1);
        let _ = &mut bell;
        let mut phi = CMat::zeros(d * d, 1);
        for m in 0..d {
            phi[(m * d + m, 0)] = ONE;
        }
        let want = (&phi * phi.adjoint()).scale(1.0);
        assert!(frobenius_norm(&(&choi - &want)) < 1e-12);
        let marginal = choi_trace_out(&choi, d);
        assert!(frobenius_norm(&(&marginal - identity(d))) < 1e-12);
    }

    #[test]
    fn holevo_data_processing_under_random_channels() {
        for trial in 0..100 {
            let mut rng = sched::rng_for(606, trial);
            let mut members = Vec::new();
            let k = 3 + (trial as usize) % 3;
            let mut weights: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            for &w in &weights {
                let u = haar_unitary_with(2, &mut rng);
                let pure = &u * proj(0, 2) * u.adjoint();
                members.push((w, pure));
            }
            let e = Ensemble::states(members.clone()).unwrap();
            let chi_before = holevo_information(&e).unwrap();
            let v = haar_unitary_with(2, &mut rng);
            let p: f64 = rng.gen::<f64>();
            let processed: Vec<(f64, CMat)> = members
                .iter()
                .map(|(w, rho)| (*w, apply_channel_depolarizing(rho, &v, p).unwrap()))
                .collect();
            let chi_after = holevo_information(&Ensemble::states(processed).unwrap()).unwrap();
            assert!(
                chi_after <= chi_before + 1e-9,
                "data processing violated: {chi_after} > {chi_before}"
            );
            assert!(chi_before >= -1e-9);
        }
    }

    #[test]
    fn embed_gate_matches_kron_with_permutation_oracle() {
        // Independent route: G (x) I conjugated by the basis permutation that
        // moves the support qubits to the front.
        let n = 3;
        let g = haar_unitary(4, 123);
        for support in [[0usize, 2], [2, 0], [1, 2]] {
            let fast = embed_gate(&g, &support, n);
            let mut order: Vec<usize> = support.to_vec();
            for q in 0..n {
                if !order.contains(&q) {
                    order.push(q);
                }
            }
            let big = g.kronecker(&identity(1 << (n - 2)));
            let dim = 1usize << n;
            let mut perm = CMat::zeros(dim, dim);
            for idx in 0..dim {
                let mut target = 0usize;
                for (pos, &q) in order.iter().enumerate() {
                    let bit = (idx >> (n - 1 - q)) & 1;
                    target |= bit << (n - 1 - pos);
                }
                perm[(target, idx)] = ONE;
            }
            let oracle = perm.adjoint() * big * &perm;
            assert!(
                frobenius_norm(&(&fast - &oracle)) < 1e-12,
                "support {support:?}"
            );
        }
    }
}
