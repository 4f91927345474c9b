//! Light-cone decomposition of brickwork circuits and the associated
//! architecture-vs-gate-cost trade-off formulas.
//!
//! Forward cones are seeded simultaneously by all layer-0 gates and grown
//! layer by layer through qubit contact for up to `W` layers; a gate touched
//! by several growing cones joins the one with the lowest seed index. The
//! remaining gates are grouped per depth window `[jW, (j+1)W)` into connected
//! residual blocks (shared-qubit components), the backward cones. Every cone
//! therefore spans at most `W` layers and the cone-level dependency graph is
//! acyclic, so replaying cones in `execution_order` reproduces the circuit.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{BrickworkCircuit, GateSlot, GateSpec};
use crate::matrixcore::{self, PauliAxis};

#[derive(Debug, Error)]
pub enum LightconeError {
    #[error("window depth {0} outside [1, {1}]")]
    InvalidW(usize, usize),
    #[error("{0} qubits exceeds the dense-verification limit {1}")]
    TooLarge(usize, usize),
    #[error("gates mix Pauli axes ({0} and {1})")]
    MixedAxes(String, String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Matrix(#[from] matrixcore::MatrixError),
}

pub type Result<T> = std::result::Result<T, LightconeError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConeKind {
    Forward,
    Backward,
}

/// A group of gate indices executed as one block.
#[derive(Clone, Debug, Serialize)]
pub struct LightCone {
    /// Indices into the circuit's slot list, ascending in (layer, slot) order.
    pub gate_indices: Vec<usize>,
    /// Union of the member supports.
    pub support: BTreeSet<usize>,
    /// Number of layers the cone spans.
    pub layers_spanned: usize,
    pub kind: ConeKind,
}

impl LightCone {
    pub fn width(&self) -> usize {
        self.support.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LightConeDecomposition {
    pub cones: Vec<LightCone>,
    /// Topological order of cone indices; replaying cones in this order
    /// reproduces the circuit unitary.
    pub execution_order: Vec<usize>,
}

/// Verification summary produced by [`verify_decomposition`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecompositionReport {
    pub unitary_gap: f64,
    pub disjoint: bool,
    pub order_ok: bool,
}

fn cone_of(assignment: &[Option<usize>], idx: usize) -> Option<usize> {
    assignment.get(idx).copied().flatten()
}

/// Splits circuit gates into forward and backward light-cones of depth <= `w`.
pub fn decompose(c: &BrickworkCircuit, w: usize) -> Result<LightConeDecomposition> {
    let depth = c.depth();
    if w == 0 || w > depth {
        return Err(LightconeError::InvalidW(w, depth));
    }
    let slots = c.slots();
    let layers = c.layers();
    let mut assignment: Vec<Option<usize>> = vec![None; slots.len()];
    let mut cones: Vec<(Vec<usize>, HashSet<usize>, ConeKind)> = Vec::new();

    // Forward cones: seed on layer 0, grow through layers < w by qubit contact.
    for &idx in &layers[0] {
        let support: HashSet<usize> = slots[idx].support.iter().copied().collect();
        assignment[idx] = Some(cones.len());
        cones.push((vec![idx], support, ConeKind::Forward));
    }
    for layer in layers.iter().take(w).skip(1) {
        for &idx in layer {
            let gate_support: HashSet<usize> = slots[idx].support.iter().copied().collect();
            let joined = cones
                .iter()
                .position(|(_, support, kind)| {
                    *kind == ConeKind::Forward && !support.is_disjoint(&gate_support)
                });
            if let Some(cone_idx) = joined {
                assignment[idx] = Some(cone_idx);
                cones[cone_idx].0.push(idx);
                cones[cone_idx].1.extend(gate_support);
            }
        }
    }

    // Backward cones: per depth window, connected residual blocks.
    let num_windows = depth.div_ceil(w);
    for window in 0..num_windows {
        let lo = window * w;
        let hi = ((window + 1) * w).min(depth);
        let residual: Vec<usize> = (lo..hi)
            .flat_map(|r| layers[r].iter().copied())
            .filter(|&idx| assignment[idx].is_none())
            .collect();
        let mut visited: HashSet<usize> = HashSet::new();
        for &start in &residual {
            if visited.contains(&start) {
                continue;
            }
            let mut block = vec![start];
            let mut block_support: HashSet<usize> =
                slots[start].support.iter().copied().collect();
            visited.insert(start);
            // Grow the component to a fixed point over shared qubits.
            loop {
                let mut grew = false;
                for &idx in &residual {
                    if visited.contains(&idx) {
                        continue;
                    }
                    if slots[idx].support.iter().any(|q| block_support.contains(q)) {
                        visited.insert(idx);
                        block.push(idx);
                        block_support.extend(slots[idx].support.iter().copied());
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
            block.sort_by_key(|&idx| (slots[idx].layer, idx));
            for &idx in &block {
                assignment[idx] = Some(cones.len());
            }
            cones.push((block, block_support, ConeKind::Backward));
        }
    }

    if assignment.iter().any(|a| a.is_none()) {
        return Err(LightconeError::Internal("unassigned gate after decomposition".into()));
    }

    let built: Vec<LightCone> = cones
        .into_iter()
        .map(|(mut gate_indices, support, kind)| {
            gate_indices.sort_by_key(|&idx| (slots[idx].layer, idx));
            let min_layer = gate_indices.iter().map(|&i| slots[i].layer).min().unwrap_or(0);
            let max_layer = gate_indices.iter().map(|&i| slots[i].layer).max().unwrap_or(0);
            LightCone {
                gate_indices,
                support: support.into_iter().collect(),
                layers_spanned: max_layer - min_layer + 1,
                kind,
            }
        })
        .collect();

    let execution_order = topological_order(c, &built, &assignment)?;
    Ok(LightConeDecomposition { cones: built, execution_order })
}

/// Cone-level dependency edges: for consecutive gates on each qubit that sit
/// in different cones, the earlier cone must run first.
fn cone_dependencies(
    c: &BrickworkCircuit,
    assignment: &[Option<usize>],
) -> Vec<(usize, usize)> {
    let slots = c.slots();
    let n = c.num_qubits();
    let mut per_qubit: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..slots.len()).collect();
    order.sort_by_key(|&idx| (slots[idx].layer, idx));
    for idx in order {
        for &q in &slots[idx].support {
            per_qubit[q].push(idx);
        }
    }
    let mut edges = Vec::new();
    for chain in &per_qubit {
        for pair in chain.windows(2) {
            let a = cone_of(assignment, pair[0]).expect("assigned");
            let b = cone_of(assignment, pair[1]).expect("assigned");
            if a != b {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

fn topological_order(
    c: &BrickworkCircuit,
    cones: &[LightCone],
    assignment: &[Option<usize>],
) -> Result<Vec<usize>> {
    let edges = cone_dependencies(c, assignment);
    let mut indegree = vec![0usize; cones.len()];
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in &edges {
        indegree[b] += 1;
        adj.entry(a).or_default().push(b);
    }
    let mut ready: BTreeSet<usize> =
        (0..cones.len()).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(cones.len());
    while let Some(&next) = ready.iter().next() {
        ready.remove(&next);
        order.push(next);
        if let Some(succs) = adj.get(&next) {
            for &s in succs {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.insert(s);
                }
            }
        }
    }
    if order.len() != cones.len() {
        return Err(LightconeError::Internal("cyclic cone dependencies".into()));
    }
    Ok(order)
}

/// Replays the cones in `execution_order` and reports the operator-norm gap
/// to the circuit unitary, plus partition and ordering checks.
pub fn verify_decomposition(
    c: &BrickworkCircuit,
    dec: &LightConeDecomposition,
) -> Result<DecompositionReport> {
    let n = c.num_qubits();
    if n > 10 {
        return Err(LightconeError::TooLarge(n, 10));
    }
    let slots = c.slots();

    // Partition: every gate in exactly one cone.
    let mut seen = vec![0usize; slots.len()];
    for cone in &dec.cones {
        for &idx in &cone.gate_indices {
            if idx >= slots.len() {
                return Err(LightconeError::InvalidParams(format!(
                    "gate index {idx} out of range"
                )));
            }
            seen[idx] += 1;
        }
    }
    let disjoint = seen.iter().all(|&count| count == 1);

    // Ordering: execution_order is a permutation respecting all dependencies.
    let mut assignment: Vec<Option<usize>> = vec![None; slots.len()];
    for (cone_idx, cone) in dec.cones.iter().enumerate() {
        for &idx in &cone.gate_indices {
            assignment[idx] = Some(cone_idx);
        }
    }
    let mut position = vec![usize::MAX; dec.cones.len()];
    let is_permutation = dec.execution_order.len() == dec.cones.len() && {
        let mut ok = true;
        for (pos, &cone_idx) in dec.execution_order.iter().enumerate() {
            if cone_idx >= dec.cones.len() || position[cone_idx] != usize::MAX {
                ok = false;
                break;
            }
            position[cone_idx] = pos;
        }
        ok
    };
    let order_ok = disjoint
        && is_permutation
        && cone_dependencies(c, &assignment)
            .iter()
            .all(|&(a, b)| position[a] < position[b]);

    // Replay: apply cone members in execution order.
    let mut replay = matrixcore::identity(1 << n);
    for &cone_idx in &dec.execution_order {
        for &idx in &dec.cones[cone_idx].gate_indices {
            let slot = &slots[idx];
            let g = slot.gate.matrix(c.locality());
            matrixcore::apply_gate_matrix(&mut replay, &g, &slot.support, n);
        }
    }
    let target = c.unitary().map_err(|e| LightconeError::InvalidParams(e.to_string()))?;
    let unitary_gap = matrixcore::op_norm(&(&replay - &target));
    Ok(DecompositionReport { unitary_gap, disjoint, order_ok })
}

/// Multipliers for the generic trade-off formulas.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TradeoffConstants {
    /// Exponent constant `c` in the reduced-net term `2^(c W)`.
    pub cone_growth_exponent: f64,
    /// Overall multiplier on both sides.
    pub scale: f64,
}

impl Default for TradeoffConstants {
    fn default() -> Self {
        Self { cone_growth_exponent: 1.0, scale: 1.0 }
    }
}

/// Program-cost comparison between gate-wise ("primitive") and light-cone
/// ("reduced") programming.
#[derive(Clone, Debug, Serialize)]
pub struct TradeoffReport {
    pub primitive_bits: f64,
    pub reduced_bits: f64,
    pub reduced_is_cheaper: bool,
    /// Per-cone contributions to the reduced side (empty for the generic
    /// formula, one entry per cone for the structured one).
    pub per_cone_bits: Vec<f64>,
}

/// Generic trade-off under unit constants:
///
/// - primitive: `N D log2(N) + N D log2(N D / eps)`
/// - reduced:   `(N D / W) log2(N / W) + 2^(c W) (N D / W^2) log2(N D / (W^2 eps))`
pub fn generic_tradeoff(
    n: u64,
    depth: u64,
    w: u64,
    eps: f64,
    constants: TradeoffConstants,
) -> Result<TradeoffReport> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(LightconeError::InvalidParams(format!("eps = {eps} outside (0, 1]")));
    }
    if w == 0 || w > depth {
        return Err(LightconeError::InvalidW(w as usize, depth as usize));
    }
    if n < 2 {
        return Err(LightconeError::InvalidParams("need N >= 2".into()));
    }
    let (nf, df, wf) = (n as f64, depth as f64, w as f64);
    let nd = nf * df;
    let primitive = constants.scale * (nd * nf.log2() + nd * (nd / eps).log2());
    let reduced = constants.scale
        * ((nd / wf) * (nf / wf).log2()
            + 2f64.powf(constants.cone_growth_exponent * wf)
                * (nd / (wf * wf))
                * (nd / (wf * wf * eps)).log2());
    Ok(TradeoffReport {
        primitive_bits: primitive,
        reduced_bits: reduced,
        reduced_is_cheaper: reduced < primitive,
        per_cone_bits: Vec::new(),
    })
}

/// Per-cone statistics for the structured trade-off.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConeStats {
    /// Number of distinct rotation supports in the cone (`T`).
    pub distinct_supports: u64,
    /// Qubits the cone occupies (`k_cone`).
    pub width: u64,
    /// Gates merged into the cone (`m`).
    pub gate_count: u64,
}

/// Structured trade-off for same-axis Pauli-rotation circuits:
///
/// - reduced:   `sum_j [ T_j log2(2 pi h T_j / eps) + T_j k_j log2(e N / k_j) ]`
/// - primitive: `l [ log2(2 pi l / eps) + k log2(e N / k) ]`
pub fn structured_tradeoff(
    stats: &[ConeStats],
    gates: u64,
    k: u64,
    n: u64,
    eps: f64,
) -> Result<TradeoffReport> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(LightconeError::InvalidParams(format!("eps = {eps} outside (0, 1]")));
    }
    if stats.is_empty() || gates == 0 || k == 0 || n < k {
        return Err(LightconeError::InvalidParams(
            "need at least one cone, one gate and N >= k >= 1".into(),
        ));
    }
    let h = stats.len() as f64;
    let mut per_cone = Vec::with_capacity(stats.len());
    for (j, s) in stats.iter().enumerate() {
        if s.distinct_supports == 0 || s.width == 0 || s.width > n {
            return Err(LightconeError::InvalidParams(format!(
                "cone {j}: T = {}, width = {}",
                s.distinct_supports, s.width
            )));
        }
        if s.distinct_supports > s.gate_count {
            return Err(LightconeError::InvalidParams(format!(
                "cone {j}: T = {} exceeds gate count m = {}",
                s.distinct_supports, s.gate_count
            )));
        }
        let t = s.distinct_supports as f64;
        let kj = s.width as f64;
        let bits = t * (2.0 * std::f64::consts::PI * h * t / eps).log2()
            + t * kj * (std::f64::consts::E * n as f64 / kj).log2();
        per_cone.push(bits);
    }
    let reduced = per_cone.iter().sum::<f64>();
    let l = gates as f64;
    let primitive = l
        * ((2.0 * std::f64::consts::PI * l / eps).log2()
            + k as f64 * (std::f64::consts::E * n as f64 / k as f64).log2());
    Ok(TradeoffReport {
        primitive_bits: primitive,
        reduced_bits: reduced,
        reduced_is_cheaper: reduced < primitive,
        per_cone_bits: per_cone,
    })
}

/// Merges same-axis Pauli rotations: one rotation per distinct support, its
/// angle the sum of the members' angles mod 2 pi. Output order follows the
/// first appearance of each support.
pub fn merge_pauli_cone(gates: &[GateSlot]) -> Result<Vec<GateSlot>> {
    let mut axis_seen: Option<PauliAxis> = None;
    let mut order: Vec<BTreeSet<usize>> = Vec::new();
    let mut merged: HashMap<BTreeSet<usize>, (Vec<usize>, f64, usize)> = HashMap::new();
    for slot in gates {
        let (axis, theta) = match &slot.gate {
            GateSpec::PauliRotation { axis, theta } => (*axis, *theta),
            GateSpec::Dense(_) => {
                return Err(LightconeError::InvalidParams(
                    "merge requires Pauli-rotation gates".into(),
                ))
            }
        };
        match axis_seen {
            None => axis_seen = Some(axis),
            Some(prev) if prev != axis => {
                return Err(LightconeError::MixedAxes(
                    prev.label().into(),
                    axis.label().into(),
                ))
            }
            _ => {}
        }
        let key: BTreeSet<usize> = slot.support.iter().copied().collect();
        match merged.get_mut(&key) {
            Some((_, angle, _)) => *angle = (*angle + theta).rem_euclid(std::f64::consts::TAU),
            None => {
                order.push(key.clone());
                merged.insert(key, (slot.support.clone(), theta.rem_euclid(std::f64::consts::TAU), slot.layer));
            }
        }
    }
    let axis = match axis_seen {
        Some(a) => a,
        None => return Ok(Vec::new()),
    };
    Ok(order
        .into_iter()
        .map(|key| {
            let (support, theta, layer) = merged.remove(&key).expect("present");
            GateSlot { support, gate: GateSpec::pauli(axis, theta), layer }
        })
        .collect())
}

/// Measured half-diamond distance between two Pauli-rotation channels on the
/// same string, against the angle-difference bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PhaseGateErrorReport {
    pub measured_half_diamond: f64,
    pub bound: f64,
}

/// Checks `(1/2) || C(theta~) - C(theta) ||_diamond <= |theta~ - theta|` for
/// rotations `exp(i theta P)` on the given support.
pub fn phase_gate_error(
    theta: f64,
    theta_tilde: f64,
    axis: PauliAxis,
    support: &[usize],
    n: usize,
) -> Result<PhaseGateErrorReport> {
    let u = matrixcore::pauli_rotation(axis, support, theta, n)?;
    let v = matrixcore::pauli_rotation(axis, support, theta_tilde, n)?;
    let measured = 0.5 * matrixcore::diamond_distance_unitary(&u, &v)?;
    let bound = (theta_tilde - theta).abs();
    if measured > bound + 1e-9 {
        return Err(LightconeError::Internal(format!(
            "phase-gate bound violated: {measured} > {bound}"
        )));
    }
    Ok(PhaseGateErrorReport { measured_half_diamond: measured, bound })
}
