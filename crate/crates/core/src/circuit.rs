//! Brickwork quantum circuits: validation, JSON round-tripping, seeded random
//! generation and dense evaluation.
//!
//! A circuit is a list of `k`-local gate slots arranged in layers over a
//! connectivity graph. Within a layer all supports are pairwise disjoint;
//! every support induces a connected subgraph. The gate count obeys
//! `l <= N * D / k`. Idle qubits host no implicit identity gates, so `l`
//! counts only the gates that are actually listed.
//!
//! JSON schema (matrices row-major as `[re, im]` pairs):
//!
//! ```json
//! { "n": 4, "k": 2, "d": 2,
//!   "edges": [[0,1],[1,2],[2,3]],
//!   "gates": [ { "layer": 0, "support": [0,1], "kind": "dense",
//!                "matrix": [[1.0,0.0], ...] },
//!              { "layer": 1, "support": [1,2], "kind": "pauli",
//!                "axis": "Z", "theta": 0.25 } ] }
//! ```

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrixcore::{self, CMat, PauliAxis};

/// Locality cap for circuits that will be evaluated densely.
pub const MAX_LOCALITY: usize = 3;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error ({invariant}): {detail}")]
    Validation { invariant: &'static str, detail: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{0} qubits exceeds the dense-evaluation limit {1}")]
    TooLarge(usize, usize),
}

pub type Result<T> = std::result::Result<T, CircuitError>;

fn validation(invariant: &'static str, detail: impl Into<String>) -> CircuitError {
    CircuitError::Validation { invariant, detail: detail.into() }
}

/// Qubit connectivity: which pairs may interact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityGraph {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ConnectivityGraph {
    pub fn new(num_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(validation("num_qubits >= 1", "graph has no qubits"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(validation("no self-loops", format!("edge ({a},{b})")));
            }
            if a >= num_qubits || b >= num_qubits {
                return Err(validation(
                    "edge endpoints in range",
                    format!("edge ({a},{b}) with {num_qubits} qubits"),
                ));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { num_qubits, edges: set })
    }

    /// Path graph 0 - 1 - ... - (n-1).
    pub fn line(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("line graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b)));
        Self::new(n, edges).expect("complete graph is valid")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// True when the subgraph induced by `qubits` is connected.
    pub fn induces_connected(&self, qubits: &[usize]) -> bool {
        if qubits.is_empty() {
            return false;
        }
        if qubits.len() == 1 {
            return qubits[0] < self.num_qubits;
        }
        let set: HashSet<usize> = qubits.iter().copied().collect();
        let mut seen = HashSet::new();
        let mut stack = vec![qubits[0]];
        seen.insert(qubits[0]);
        while let Some(q) = stack.pop() {
            for &other in &set {
                if !seen.contains(&other) && self.has_edge(q, other) {
                    seen.insert(other);
                    stack.push(other);
                }
            }
        }
        seen.len() == set.len()
    }
}

/// A gate payload: an explicit unitary or a Pauli-string rotation
/// `exp(i theta P x ... x P)` over the slot's support.
#[derive(Clone, Debug, PartialEq)]
pub enum GateSpec {
    Dense(CMat),
    PauliRotation { axis: PauliAxis, theta: f64 },
}

impl GateSpec {
    /// Wraps a dense matrix, requiring a power-of-two dimension and unitarity
    /// to 1e-10 in operator norm.
    pub fn dense(matrix: CMat) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || matrix.ncols() != d || !d.is_power_of_two() {
            return Err(validation(
                "gate matrix is square with power-of-two size",
                format!("{}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        let defect = matrixcore::unitarity_defect(&matrix);
        if defect > 1e-10 {
            return Err(validation(
                "gate matrix unitary to 1e-10",
                format!("defect {defect:.3e}"),
            ));
        }
        Ok(GateSpec::Dense(matrix))
    }

    /// Pauli rotation with the angle reduced mod 2 pi.
    pub fn pauli(axis: PauliAxis, theta: f64) -> Self {
        GateSpec::PauliRotation { axis, theta: theta.rem_euclid(std::f64::consts::TAU) }
    }

    /// Dense `2^k x 2^k` matrix of the gate in the support's qubit order.
    pub fn matrix(&self, k: usize) -> CMat {
        match self {
            GateSpec::Dense(m) => m.clone(),
            GateSpec::PauliRotation { axis, theta } => {
                matrixcore::pauli_rotation_local(*axis, k, *theta)
            }
        }
    }
}

/// A gate placed on an ordered support in a specific layer. Support order
/// fixes how the gate matrix is interpreted: support entry 0 is the most
/// significant bit of the gate's index.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSlot {
    pub support: Vec<usize>,
    pub gate: GateSpec,
    pub layer: usize,
}

/// Validated brickwork circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct BrickworkCircuit {
    graph: ConnectivityGraph,
    locality: usize,
    depth: usize,
    slots: Vec<GateSlot>,
}

impl BrickworkCircuit {
    pub fn new(
        graph: ConnectivityGraph,
        locality: usize,
        depth: usize,
        slots: Vec<GateSlot>,
    ) -> Result<Self> {
        if locality == 0 {
            return Err(validation("k >= 1", "locality 0"));
        }
        if locality > MAX_LOCALITY {
            return Err(validation(
                "k <= 3 for dense evaluation",
                format!("locality {locality}"),
            ));
        }
        if depth == 0 {
            return Err(validation("depth >= 1", "depth 0"));
        }
        let n = graph.num_qubits();
        let mut per_layer_occupied: Vec<HashSet<usize>> = vec![HashSet::new(); depth];
        for (idx, slot) in slots.iter().enumerate() {
            if slot.layer >= depth {
                return Err(validation(
                    "slot layer < depth",
                    format!("gate {idx} in layer {} of {depth}", slot.layer),
                ));
            }
            if slot.support.len() != locality {
                return Err(validation(
                    "support size equals k",
                    format!("gate {idx} has |q| = {}", slot.support.len()),
                ));
            }
            let distinct: HashSet<usize> = slot.support.iter().copied().collect();
            if distinct.len() != slot.support.len() {
                return Err(validation(
                    "support qubits distinct",
                    format!("gate {idx}: {:?}", slot.support),
                ));
            }
            if slot.support.iter().any(|&q| q >= n) {
                return Err(validation(
                    "support qubits in range",
                    format!("gate {idx}: {:?} with {n} qubits", slot.support),
                ));
            }
            if !graph.induces_connected(&slot.support) {
                return Err(validation(
                    "induced subgraph connected",
                    format!("gate {idx}: {:?}", slot.support),
                ));
            }
            if let GateSpec::Dense(m) = &slot.gate {
                if m.nrows() != 1 << locality {
                    return Err(validation(
                        "gate matrix size 2^k",
                        format!("gate {idx}: {} rows for k = {locality}", m.nrows()),
                    ));
                }
            }
            let occupied = &mut per_layer_occupied[slot.layer];
            for &q in &slot.support {
                if !occupied.insert(q) {
                    return Err(validation(
                        "supports disjoint within a layer",
                        format!("gate {idx} overlaps qubit {q} in layer {}", slot.layer),
                    ));
                }
            }
        }
        if slots.len() * locality > n * depth {
            return Err(validation(
                "l <= N * D / k",
                format!("{} gates with N = {n}, D = {depth}, k = {locality}", slots.len()),
            ));
        }
        Ok(Self { graph, locality, depth, slots })
    }

    pub fn graph(&self) -> &ConnectivityGraph {
        &self.graph
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_qubits()
    }

    pub fn locality(&self) -> usize {
        self.locality
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn slots(&self) -> &[GateSlot] {
        &self.slots
    }

    pub fn num_gates(&self) -> usize {
        self.slots.len()
    }

    /// Gate indices grouped by layer, preserving slot order.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut layers = vec![Vec::new(); self.depth];
        for (idx, slot) in self.slots.iter().enumerate() {
            layers[slot.layer].push(idx);
        }
        layers
    }

    /// Dense `2^N x 2^N` unitary of the circuit, layers applied in ascending
    /// order (layer 0 acts first).
    pub fn unitary(&self) -> Result<CMat> {
        let n = self.num_qubits();
        if n > matrixcore::MAX_DENSE_QUBITS {
            return Err(CircuitError::TooLarge(n, matrixcore::MAX_DENSE_QUBITS));
        }
        let mut u = matrixcore::identity(1 << n);
        for layer in self.layers() {
            for idx in layer {
                let slot = &self.slots[idx];
                let g = slot.gate.matrix(self.locality);
                matrixcore::apply_gate_matrix(&mut u, &g, &slot.support, n);
            }
        }
        Ok(u)
    }
}

/// Dense circuit evaluation; see [`BrickworkCircuit::unitary`].
pub fn circuit_unitary(c: &BrickworkCircuit) -> Result<CMat> {
    c.unitary()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    #[serde(rename = "1d-line")]
    Line1D,
    #[serde(rename = "complete")]
    Complete,
}

impl std::str::FromStr for Geometry {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1d-line" | "line" => Ok(Geometry::Line1D),
            "complete" | "all-to-all" => Ok(Geometry::Complete),
            other => Err(CircuitError::InvalidParams(format!("unknown geometry `{other}`"))),
        }
    }
}

/// Interlaced brick pattern with Haar-random gates. Layer `r` places width-`k`
/// bricks starting at offset `r mod k`; the same seed always reproduces the
/// same circuit.
pub fn random_brickwork(
    n: usize,
    depth: usize,
    k: usize,
    geometry: Geometry,
    seed: u64,
) -> Result<BrickworkCircuit> {
    if k == 0 || k > MAX_LOCALITY {
        return Err(CircuitError::InvalidParams(format!(
            "locality {k} outside [1, {MAX_LOCALITY}]"
        )));
    }
    if n < k {
        return Err(CircuitError::InvalidParams(format!("need N >= k, got N = {n}, k = {k}")));
    }
    if depth == 0 {
        return Err(CircuitError::InvalidParams("depth must be >= 1".into()));
    }
    let graph = match geometry {
        Geometry::Line1D => ConnectivityGraph::line(n),
        Geometry::Complete => ConnectivityGraph::complete(n),
    };
    let mut slots = Vec::new();
    let mut counter = 0u64;
    for layer in 0..depth {
        let offset = layer % k;
        let mut start = offset;
        while start + k <= n {
            let support: Vec<usize> = (start..start + k).collect();
            let u = matrixcore::haar_unitary(1 << k, crate::sched::subseed(seed, counter));
            counter += 1;
            slots.push(GateSlot { support, gate: GateSpec::Dense(u), layer });
            start += k;
        }
    }
    BrickworkCircuit::new(graph, k, depth, slots)
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    k: usize,
    d: usize,
    edges: Vec<[usize; 2]>,
    gates: Vec<GateJson>,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    layer: usize,
    support: Vec<usize>,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

/// Parses and validates a circuit from the JSON schema above.
pub fn parse_circuit(text: &str) -> Result<BrickworkCircuit> {
    let raw: CircuitJson =
        serde_json::from_str(text).map_err(|e| CircuitError::Parse(e.to_string()))?;
    let graph = ConnectivityGraph::new(raw.n, raw.edges.iter().map(|e| (e[0], e[1])))?;
    let mut slots = Vec::with_capacity(raw.gates.len());
    for (idx, g) in raw.gates.into_iter().enumerate() {
        let gate = match g.kind.as_str() {
            "dense" => {
                let entries = g.matrix.ok_or_else(|| {
                    CircuitError::Parse(format!("gate {idx}: dense gate without matrix"))
                })?;
                let dim = 1usize << raw.k;
                if entries.len() != dim * dim {
                    return Err(validation(
                        "gate matrix size 2^k",
                        format!("gate {idx}: {} entries, expected {}", entries.len(), dim * dim),
                    ));
                }
                let m = CMat::from_fn(dim, dim, |r, c| {
                    let [re, im] = entries[r * dim + c];
                    num_complex::Complex64::new(re, im)
                });
                GateSpec::dense(m)?
            }
            "pauli" => {
                let axis = match g.axis.as_deref() {
                    Some("X") => PauliAxis::X,
                    Some("Y") => PauliAxis::Y,
                    Some("Z") => PauliAxis::Z,
                    other => {
                        return Err(CircuitError::Parse(format!(
                            "gate {idx}: bad axis {other:?}"
                        )))
                    }
                };
                let theta = g.theta.ok_or_else(|| {
                    CircuitError::Parse(format!("gate {idx}: pauli gate without theta"))
                })?;
                GateSpec::pauli(axis, theta)
            }
            other => {
                return Err(CircuitError::Parse(format!("gate {idx}: unknown kind `{other}`")))
            }
        };
        slots.push(GateSlot { support: g.support, gate, layer: g.layer });
    }
    BrickworkCircuit::new(graph, raw.k, raw.d, slots)
}

/// Serializes a circuit to the JSON schema; `parse_circuit` round-trips it
/// field-for-field.
pub fn serialize_circuit(c: &BrickworkCircuit) -> String {
    let gates = c
        .slots()
        .iter()
        .map(|slot| match &slot.gate {
            GateSpec::Dense(m) => GateJson {
                layer: slot.layer,
                support: slot.support.clone(),
                kind: "dense".into(),
                matrix: Some(
                    m.row_iter()
                        .flat_map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
                        .collect(),
                ),
                axis: None,
                theta: None,
            },
            GateSpec::PauliRotation { axis, theta } => GateJson {
                layer: slot.layer,
                support: slot.support.clone(),
                kind: "pauli".into(),
                matrix: None,
                axis: Some(axis.label().into()),
                theta: Some(*theta),
            },
        })
        .collect();
    let raw = CircuitJson {
        n: c.num_qubits(),
        k: c.locality(),
        d: c.depth(),
        edges: c.graph().edges().map(|(a, b)| [a, b]).collect(),
        gates,
    };
    serde_json::to_string_pretty(&raw).expect("circuit JSON serializes")
}
