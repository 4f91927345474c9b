//! Resource quantification for programming low-depth brickwork quantum circuits.
//!
//! The crate combines closed-form resource calculators with desk-scale dense
//! numerics (matrices up to ~2^10 dimension) so that every bound and channel
//! construction it exposes can be cross-checked against an independent route:
//!
//! - [`matrixcore`]: dense complex linear algebra and quantum-information
//!   primitives: norms, trace/diamond distances, entropies, Haar sampling,
//!   Pauli exponentials, channels and Choi matrices.
//! - [`repr`]: partitions, Weyl dimensions, the program-dimension binomial
//!   and two-row Schur characters, all in exact big-integer arithmetic where
//!   counts are involved.
//! - [`circuit`]: brickwork circuits: validation, JSON (de)serialization,
//!   seeded random generation and dense evaluation.
//! - [`bounds`]: covering numbers, program-cost upper/lower bounds, the
//!   measure-and-operate gate-cost model and design-depth formulas.
//! - [`lightcone`]: light-cone decomposition of brickwork circuits, commuting
//!   Pauli-rotation merging and both sides of the architecture-vs-gate-cost
//!   trade-off.
//! - [`processor`]: epsilon-nets over local unitaries, the postselection
//!   processor, whole-circuit programming with bit-cost accounting and error
//!   propagation checks.
//! - [`mosim`]: Monte-Carlo simulation of the measure-and-operate programming
//!   channel at d = 2, with exact single-qubit Clifford averaging.
//!
//! All randomness is seeded explicitly; Monte-Carlo loops draw per-sample
//! sub-seeds from [`sched`] so results do not depend on thread partitioning.

pub mod bounds;
pub mod circuit;
pub mod lightcone;
pub mod matrixcore;
pub mod mosim;
pub mod processor;
pub mod repr;
pub mod sched;
