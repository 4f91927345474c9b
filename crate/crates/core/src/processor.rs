//! Epsilon-nets over local unitary groups, the postselection processor, and
//! whole-circuit programming with bit-cost accounting.
//!
//! Grid nets over U(2) (mod phase) are parametrized by three ZYZ Euler angles
//! with pitch `2 eps / 3` per angle. The bi-invariant rotation-angle metric
//! dominates the diamond distance (`d_diamond = 2 sin(angle/2) <= angle`), so
//! rounding each angle to the nearest cell center lands within `eps` of any
//! target: the construction is an epsilon-covering by construction, not just
//! empirically. Elements are materialized on demand from the grid indices;
//! nets at small radii (~1e8 elements) therefore cost nothing to hold.
//!
//! Sampled nets (`k = 2`) are Haar-drawn element lists with an audited but
//! uncertified coverage gap; the certificate carries `certified = false` so
//! nothing downstream can silently rely on them.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{BrickworkCircuit, ConnectivityGraph};
use crate::matrixcore::{self, CMat, ZERO};
use crate::sched;

#[derive(Debug, Error)]
pub enum ProcessorError {
    #[error("epsilon {0} outside (0, 1]")]
    InvalidEpsilon(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no certified net available: {0}")]
    NoCertifiedNet(String),
    #[error("net index {0} out of range (net has {1} elements)")]
    IndexOutOfRange(u64, u64),
    #[error("{0} qubits exceeds the dense-verification limit {1}")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Matrix(#[from] matrixcore::MatrixError),
    #[error("circuit error: {0}")]
    Circuit(String),
}

pub type Result<T> = std::result::Result<T, ProcessorError>;

/// Outcome of a coverage audit over Haar samples.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoverageCertificate {
    pub verified_samples: usize,
    pub max_observed_gap: f64,
    /// True only for constructions whose covering radius is analytic (grids).
    pub certified: bool,
}

#[derive(Clone, Debug)]
enum NetKind {
    /// Implicit three-angle ZYZ grid over U(2) mod phase. The polar rows
    /// (beta = 0 and beta = pi) collapse to one-angle families so every
    /// element is a distinct channel: indices `[0, wrap)` are `Rz(phi)`,
    /// the interior block follows, and the last `wrap` indices are
    /// `Rz(phi) Ry(pi)`.
    GridU2 {
        /// Cells for each wrapping angle (alpha, gamma, and the polar phi).
        wrap: u64,
        /// Subdivisions of [0, pi] for beta; interior rows are 1..beta_steps.
        beta_steps: u64,
        pitch_wrap: f64,
        pitch_beta: f64,
    },
    /// Explicit element list.
    Explicit { elements: Vec<CMat> },
}

/// Finite net of `2^k x 2^k` unitaries within `target_eps` (diamond) of the
/// group, or best-effort for sampled nets.
#[derive(Clone, Debug)]
pub struct EpsilonNet {
    pub locality: usize,
    pub target_eps: f64,
    kind: NetKind,
    pub coverage: CoverageCertificate,
}

const AUDIT_DEFAULT_SAMPLES: usize = 256;
const AUDIT_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

fn rz(theta: f64) -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[
            num_complex::Complex64::from_polar(1.0, -theta / 2.0),
            ZERO,
            ZERO,
            num_complex::Complex64::from_polar(1.0, theta / 2.0),
        ],
    )
}

fn ry(theta: f64) -> CMat {
    let (s, c) = (theta / 2.0).sin_cos();
    CMat::from_row_slice(
        2,
        2,
        &[
            num_complex::Complex64::new(c, 0.0),
            num_complex::Complex64::new(-s, 0.0),
            num_complex::Complex64::new(s, 0.0),
            num_complex::Complex64::new(c, 0.0),
        ],
    )
}

/// ZYZ Euler angles (alpha in [0, 2pi), beta in [0, pi], gamma in [0, 2pi))
/// of the channel of a U(2) element (global phase stripped).
fn euler_zyz(u: &CMat) -> (f64, f64, f64) {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let phase = num_complex::Complex64::from_polar(1.0, -det.arg() / 2.0);
    let w00 = u[(0, 0)] * phase;
    let w10 = u[(1, 0)] * phase;
    let w11 = u[(1, 1)] * phase;
    let beta = 2.0 * w10.norm().atan2(w00.norm());
    let tau = std::f64::consts::TAU;
    if w10.norm() < 1e-12 {
        return ((2.0 * w11.arg()).rem_euclid(tau), beta, 0.0);
    }
    if w00.norm() < 1e-12 {
        return ((2.0 * w10.arg()).rem_euclid(tau), beta, 0.0);
    }
    let s = w11.arg();
    let t = w10.arg();
    ((s + t).rem_euclid(tau), beta, (s - t).rem_euclid(tau))
}

impl EpsilonNet {
    pub fn len(&self) -> u64 {
        match &self.kind {
            NetKind::GridU2 { wrap, beta_steps, .. } => {
                2 * wrap + (beta_steps - 1) * wrap * wrap
            }
            NetKind::Explicit { elements } => elements.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn log2_len(&self) -> f64 {
        (self.len() as f64).log2()
    }

    pub fn dim(&self) -> usize {
        1 << self.locality
    }

    /// Materializes element `t`.
    pub fn element(&self, t: u64) -> Result<CMat> {
        if t >= self.len() {
            return Err(ProcessorError::IndexOutOfRange(t, self.len()));
        }
        match &self.kind {
            NetKind::GridU2 { wrap, beta_steps, pitch_wrap, pitch_beta } => {
                let interior = (beta_steps - 1) * wrap * wrap;
                if t < *wrap {
                    return Ok(rz(t as f64 * pitch_wrap));
                }
                if t < wrap + interior {
                    let s = t - wrap;
                    let ig = s % wrap;
                    let ia = (s / wrap) % wrap;
                    let ib = 1 + s / (wrap * wrap);
                    return Ok(rz(ia as f64 * pitch_wrap)
                        * ry(ib as f64 * pitch_beta)
                        * rz(ig as f64 * pitch_wrap));
                }
                let s = t - wrap - interior;
                Ok(rz(s as f64 * pitch_wrap) * ry(std::f64::consts::PI))
            }
            NetKind::Explicit { elements } => Ok(elements[t as usize].clone()),
        }
    }

    /// Candidate indices around the target's Euler cell: the rounded interior
    /// cell and its neighbors, plus polar-row candidates whenever the beta
    /// neighborhood touches 0 or pi.
    fn grid_candidates(
        wrap: u64,
        beta_steps: u64,
        pitch_wrap: f64,
        pitch_beta: f64,
        u: &CMat,
    ) -> Vec<u64> {
        let (alpha, beta, gamma) = euler_zyz(u);
        let tau = std::f64::consts::TAU;
        let c = wrap as i64;
        let interior_base = wrap;
        let pole_pi_base = wrap + (beta_steps - 1) * wrap * wrap;
        let mut out = Vec::with_capacity(36);
        let ib_round = (beta / pitch_beta).round() as i64;
        for db in -1i64..=1 {
            let ib = ib_round + db;
            if ib <= 0 {
                let phi = (alpha + gamma).rem_euclid(tau);
                let j0 = (phi / pitch_wrap).round() as i64;
                for dj in -1i64..=1 {
                    out.push((j0 + dj).rem_euclid(c) as u64);
                }
            } else if ib >= beta_steps as i64 {
                let phi = (alpha - gamma).rem_euclid(tau);
                let j0 = (phi / pitch_wrap).round() as i64;
                for dj in -1i64..=1 {
                    out.push(pole_pi_base + (j0 + dj).rem_euclid(c) as u64);
                }
            } else {
                let ia0 = (alpha / pitch_wrap).round() as i64;
                let ig0 = (gamma / pitch_wrap).round() as i64;
                for da in -1i64..=1 {
                    for dg in -1i64..=1 {
                        let ia = (ia0 + da).rem_euclid(c) as u64;
                        let ig = (ig0 + dg).rem_euclid(c) as u64;
                        out.push(
                            interior_base + ((ib as u64 - 1) * wrap + ia) * wrap + ig,
                        );
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Nearest element and its exact diamond-distance gap. Grid nets round to
    /// the target's Euler cell and refine over the neighboring cells (polar
    /// rows included); explicit nets scan exhaustively. Ties break toward the
    /// lowest index.
    pub fn nearest(&self, u: &CMat) -> Result<(u64, f64)> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(ProcessorError::DimensionMismatch(format!(
                "{}x{} target for locality-{} net",
                u.nrows(),
                u.ncols(),
                self.locality
            )));
        }
        matrixcore::check_unitary(u, matrixcore::UNITARY_TOL)?;
        match &self.kind {
            NetKind::GridU2 { wrap, beta_steps, pitch_wrap, pitch_beta } => {
                let mut best: Option<(u64, f64)> = None;
                for t in Self::grid_candidates(*wrap, *beta_steps, *pitch_wrap, *pitch_beta, u) {
                    let gap = matrixcore::diamond_distance_unitary(u, &self.element(t)?)?;
                    let better = match best {
                        None => true,
                        Some((bt, bg)) => gap < bg - 1e-15 || (gap <= bg + 1e-15 && t < bt),
                    };
                    if better {
                        best = Some((t, gap));
                    }
                }
                Ok(best.expect("grid neighborhood is non-empty"))
            }
            NetKind::Explicit { elements } => {
                let mut best_t = 0u64;
                let mut best_gap = f64::INFINITY;
                for (t, e) in elements.iter().enumerate() {
                    let gap = matrixcore::diamond_distance_unitary(u, e)?;
                    if gap < best_gap - 1e-15 {
                        best_gap = gap;
                        best_t = t as u64;
                    }
                }
                Ok((best_t, best_gap))
            }
        }
    }

    /// Coverage audit: the worst nearest-element gap over Haar samples.
    pub fn audit(&self, samples: usize, seed: u64) -> Result<CoverageCertificate> {
        let dim = self.dim();
        let threads = sched::thread_count();
        let gaps = sched::parallel_map(samples, threads, |i| {
            let mut rng = sched::rng_for(seed, i as u64);
            let u = matrixcore::haar_unitary_with(dim, &mut rng);
            self.nearest(&u).map(|(_, gap)| gap)
        });
        let mut max_gap = 0.0f64;
        for g in gaps {
            max_gap = max_gap.max(g?);
        }
        Ok(CoverageCertificate {
            verified_samples: samples,
            max_observed_gap: max_gap,
            certified: self.coverage.certified,
        })
    }

    /// Explicit copy of a grid net (testing aid; refuses nets above 10^6
    /// elements).
    pub fn materialize(&self) -> Result<EpsilonNet> {
        if self.len() > 1_000_000 {
            return Err(ProcessorError::InvalidParams(format!(
                "refusing to materialize {} elements",
                self.len()
            )));
        }
        let elements: Vec<CMat> =
            (0..self.len()).map(|t| self.element(t)).collect::<Result<_>>()?;
        Ok(EpsilonNet {
            locality: self.locality,
            target_eps: self.target_eps,
            kind: NetKind::Explicit { elements },
            coverage: self.coverage,
        })
    }
}

/// Grid net over U(2) channels with covering radius `eps` in diamond norm.
pub fn build_net_u2(eps: f64) -> Result<EpsilonNet> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ProcessorError::InvalidEpsilon(eps));
    }
    let pitch = 2.0 * eps / 3.0;
    let tau = std::f64::consts::TAU;
    // Alpha/gamma centers at j * 2pi/wrap; beta subdivides [0, pi] into
    // beta_steps cells. The identity is element 0 (the beta = 0 polar row).
    let wrap = (tau / pitch).ceil() as u64;
    let beta_steps = (std::f64::consts::PI / pitch).ceil() as u64;
    let mut net = EpsilonNet {
        locality: 1,
        target_eps: eps,
        kind: NetKind::GridU2 {
            wrap,
            beta_steps,
            pitch_wrap: tau / wrap as f64,
            pitch_beta: std::f64::consts::PI / beta_steps as f64,
        },
        coverage: CoverageCertificate {
            verified_samples: 0,
            max_observed_gap: 0.0,
            certified: true,
        },
    };
    net.coverage = net.audit(AUDIT_DEFAULT_SAMPLES, AUDIT_SEED)?;
    Ok(net)
}

/// Haar-sampled net for `k`-local unitaries. The certificate reports the
/// audited gap but `certified` stays false: nothing guarantees coverage.
pub fn build_net_sampled(k: usize, eps: f64, budget: usize, seed: u64) -> Result<EpsilonNet> {
    if k == 0 || k > 2 {
        return Err(ProcessorError::InvalidParams(format!("sampled nets support k <= 2, got {k}")));
    }
    if budget == 0 {
        return Err(ProcessorError::InvalidParams("budget must be >= 1".into()));
    }
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(ProcessorError::InvalidEpsilon(eps));
    }
    let dim = 1usize << k;
    let elements: Vec<CMat> = (0..budget)
        .map(|i| {
            let mut rng = sched::rng_for(seed, i as u64);
            matrixcore::haar_unitary_with(dim, &mut rng)
        })
        .collect();
    let mut net = EpsilonNet {
        locality: k,
        target_eps: eps,
        kind: NetKind::Explicit { elements },
        coverage: CoverageCertificate {
            verified_samples: 0,
            max_observed_gap: f64::INFINITY,
            certified: false,
        },
    };
    net.coverage = net.audit(AUDIT_DEFAULT_SAMPLES, sched::subseed(seed, 0xA0D17))?;
    Ok(net)
}

/// Nearest net element to `u`: index and achieved diamond gap.
pub fn program_state_for(u: &CMat, net: &EpsilonNet) -> Result<(u64, f64)> {
    net.nearest(u)
}

/// Postselection processor on a basis program `|t><t|`: conjugates by net
/// element `t` exactly.
pub fn apply_processor(rho: &CMat, t: u64, net: &EpsilonNet) -> Result<CMat> {
    let e = net.element(t)?;
    if rho.nrows() != e.nrows() || rho.ncols() != e.ncols() {
        return Err(ProcessorError::DimensionMismatch(format!(
            "state {}x{} vs net dimension {}",
            rho.nrows(),
            rho.ncols(),
            e.nrows()
        )));
    }
    Ok(&e * rho * e.adjoint())
}

/// Convex (diagonal) program: `sum_t p_t U_t rho U_t†`.
pub fn apply_processor_mixed(rho: &CMat, weights: &[(u64, f64)], net: &EpsilonNet) -> Result<CMat> {
    let total: f64 = weights.iter().map(|(_, p)| *p).sum();
    if weights.iter().any(|(_, p)| *p < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(ProcessorError::InvalidParams(format!(
            "program weights must be a distribution (sum {total})"
        )));
    }
    let d = rho.nrows();
    let mut out = CMat::zeros(d, rho.ncols());
    for &(t, p) in weights {
        out += apply_processor(rho, t, net)?.scale(p);
    }
    Ok(out)
}

/// Connected `k`-element supports of the graph, sorted; their rank is the
/// location code's support part.
pub fn enumerate_supports(k: usize, graph: &ConnectivityGraph) -> Vec<BTreeSet<usize>> {
    let n = graph.num_qubits();
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    match k {
        1 => out.extend((0..n).map(|q| BTreeSet::from([q]))),
        2 => out.extend(graph.edges().map(|(a, b)| BTreeSet::from([a, b]))),
        3 => {
            for a in 0..n {
                for b in (a + 1)..n {
                    for c in (b + 1)..n {
                        let support = [a, b, c];
                        if graph.induces_connected(&support) {
                            out.push(BTreeSet::from([a, b, c]));
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out.sort();
    out
}

/// Per-gate program record: location code (layer and support rank packed into
/// `m` bits) plus the chosen net element.
#[derive(Clone, Debug, Serialize)]
pub struct GateProgram {
    pub layer: usize,
    pub support: Vec<usize>,
    pub location_code: u64,
    pub net_index: u64,
    pub gap: f64,
}

impl GateProgram {
    /// Binary rendering of the location code, `m` bits wide.
    pub fn location_bits(&self, m: u32) -> String {
        if m == 0 {
            return String::new();
        }
        format!("{:0width$b}", self.location_code, width = m as usize)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProgramState {
    pub gates: Vec<GateProgram>,
}

/// A circuit programmed against a per-gate net.
#[derive(Clone, Debug)]
pub struct ProgrammedCircuit {
    pub program: ProgramState,
    pub net: EpsilonNet,
    /// Location bits per gate.
    pub m_bits: u32,
    /// `l * (m + log2 |net|)`.
    pub total_cost_bits: f64,
    /// Dense diamond distance between the circuit and its programmed version.
    pub achieved_error: f64,
}

fn location_code(
    supports: &[BTreeSet<usize>],
    layer: usize,
    support: &[usize],
) -> Result<u64> {
    let key: BTreeSet<usize> = support.iter().copied().collect();
    let rank = supports
        .binary_search(&key)
        .map_err(|_| ProcessorError::InvalidParams(format!("support {support:?} not in graph")))?;
    Ok((layer * supports.len() + rank) as u64)
}

fn programmed_unitary(c: &BrickworkCircuit, program: &ProgramState, net: &EpsilonNet) -> Result<CMat> {
    let n = c.num_qubits();
    let mut u = matrixcore::identity(1 << n);
    let mut order: Vec<usize> = (0..c.num_gates()).collect();
    order.sort_by_key(|&i| (c.slots()[i].layer, i));
    for idx in order {
        let e = net.element(program.gates[idx].net_index)?;
        matrixcore::apply_gate_matrix(&mut u, &e, &c.slots()[idx].support, n);
    }
    Ok(u)
}

fn program_with(c: &BrickworkCircuit, net: EpsilonNet) -> Result<ProgrammedCircuit> {
    let n = c.num_qubits();
    if n > 10 {
        return Err(ProcessorError::TooLarge(n, 10));
    }
    let supports = enumerate_supports(c.locality(), c.graph());
    let pairs = (supports.len() * c.depth()) as f64;
    let m_bits = pairs.log2().ceil().max(0.0) as u32;
    let mut gates = Vec::with_capacity(c.num_gates());
    for slot in c.slots() {
        let target = slot.gate.matrix(c.locality());
        let (net_index, gap) = net.nearest(&target)?;
        gates.push(GateProgram {
            layer: slot.layer,
            support: slot.support.clone(),
            location_code: location_code(&supports, slot.layer, &slot.support)?,
            net_index,
            gap,
        });
    }
    let program = ProgramState { gates };
    let programmed = programmed_unitary(c, &program, &net)?;
    let target = c.unitary().map_err(|e| ProcessorError::Circuit(e.to_string()))?;
    let achieved_error = matrixcore::diamond_distance_unitary(&target, &programmed)?;
    let l = c.num_gates() as f64;
    let total_cost_bits = l * (m_bits as f64 + net.log2_len());
    Ok(ProgrammedCircuit { program, net, m_bits, total_cost_bits, achieved_error })
}

/// Programs a `k = 1` circuit with per-gate grid nets at radius `eps / l`.
/// The achieved (dense-verified) diamond error is at most `eps`.
pub fn program_circuit(c: &BrickworkCircuit, eps: f64) -> Result<ProgrammedCircuit> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ProcessorError::InvalidEpsilon(eps));
    }
    if c.num_gates() == 0 {
        return Err(ProcessorError::InvalidParams("circuit has no gates".into()));
    }
    if c.locality() != 1 {
        return Err(ProcessorError::NoCertifiedNet(format!(
            "grid nets exist for k = 1 only; supply a certified net for k = {}",
            c.locality()
        )));
    }
    let per_gate = eps / c.num_gates() as f64;
    let net = build_net_u2(per_gate)?;
    program_with(c, net)
}

/// Programs a circuit against a caller-supplied certified net whose radius is
/// at most `eps / l`.
pub fn program_circuit_with_net(
    c: &BrickworkCircuit,
    eps: f64,
    net: &EpsilonNet,
) -> Result<ProgrammedCircuit> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ProcessorError::InvalidEpsilon(eps));
    }
    if c.num_gates() == 0 {
        return Err(ProcessorError::InvalidParams("circuit has no gates".into()));
    }
    if !net.coverage.certified {
        return Err(ProcessorError::NoCertifiedNet(
            "supplied net carries no coverage certificate".into(),
        ));
    }
    if net.locality != c.locality() {
        return Err(ProcessorError::DimensionMismatch(format!(
            "net locality {} vs circuit locality {}",
            net.locality,
            c.locality()
        )));
    }
    let per_gate = eps / c.num_gates() as f64;
    if net.target_eps > per_gate + 1e-15 {
        return Err(ProcessorError::InvalidParams(format!(
            "net radius {} exceeds the per-gate budget {per_gate}",
            net.target_eps
        )));
    }
    program_with(c, net.clone())
}

/// Perturbs every gate independently within `per_gate_eps` in diamond norm and
/// returns the worst ratio of whole-circuit error to `l * per_gate_eps` over
/// the trials. Subadditivity keeps the ratio at most 1.
pub fn verify_error_propagation(
    c: &BrickworkCircuit,
    per_gate_eps: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let n = c.num_qubits();
    if n > 8 {
        return Err(ProcessorError::TooLarge(n, 8));
    }
    if !(per_gate_eps > 0.0 && per_gate_eps <= 2.0) {
        return Err(ProcessorError::InvalidParams(format!(
            "per-gate budget {per_gate_eps} outside (0, 2]"
        )));
    }
    if c.num_gates() == 0 || trials == 0 {
        return Err(ProcessorError::InvalidParams("need gates and trials".into()));
    }
    let target = c.unitary().map_err(|e| ProcessorError::Circuit(e.to_string()))?;
    let budget = c.num_gates() as f64 * per_gate_eps;
    let threads = sched::thread_count();
    let ratios = sched::parallel_map(trials, threads, |trial| -> Result<f64> {
        let mut perturbed = matrixcore::identity(1 << n);
        let mut order: Vec<usize> = (0..c.num_gates()).collect();
        order.sort_by_key(|&i| (c.slots()[i].layer, i));
        for idx in order {
            let slot = &c.slots()[idx];
            let g = slot.gate.matrix(c.locality());
            let mut rng = sched::rng_for(seed, (trial * c.num_gates() + idx) as u64);
            let rot = bounded_rotation(g.nrows(), per_gate_eps, &mut rng)?;
            let noisy = &rot * &g;
            matrixcore::apply_gate_matrix(&mut perturbed, &noisy, &slot.support, n);
        }
        let whole = matrixcore::diamond_distance_unitary(&target, &perturbed)?;
        Ok(whole / budget)
    });
    let mut max_ratio = 0.0f64;
    for r in ratios {
        max_ratio = max_ratio.max(r?);
    }
    Ok(max_ratio)
}

/// Random unitary within `eps` of the identity in diamond distance: a Haar
/// rotation with its eigenphases shrunk by bisection to a random severity in
/// [eps/2, eps].
fn bounded_rotation<R: rand::Rng + ?Sized>(dim: usize, eps: f64, rng: &mut R) -> Result<CMat> {
    let v = matrixcore::haar_unitary_with(dim, rng);
    let (vals, q) = matrixcore::unitary_eigen(&v)?;
    let phases: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
    let rebuild = |s: f64| -> CMat {
        let diag = CMat::from_fn(dim, dim, |i, j| {
            if i == j {
                num_complex::Complex64::from_polar(1.0, s * phases[i])
            } else {
                ZERO
            }
        });
        &q * diag * q.adjoint()
    };
    let identity = matrixcore::identity(dim);
    let target: f64 = eps * (0.5 + 0.5 * rng.gen::<f64>());
    let full = matrixcore::diamond_distance_unitary(&identity, &v)?;
    if full <= target {
        return Ok(v);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        let d = matrixcore::diamond_distance_unitary(&identity, &rebuild(mid))?;
        if d <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let out = rebuild(lo);
    debug_assert!(
        matrixcore::diamond_distance_unitary(&identity, &out).unwrap() <= eps + 1e-12
    );
    Ok(out)
}
