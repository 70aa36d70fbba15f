//! # eurlab
//!
//! A numerical laboratory for the quantum/classical decomposition of
//! entropic uncertainty.
//!
//! For a nondegenerate observable O measured in a state rho, the total
//! entropic uncertainty splits additively into a quantum and a classical
//! piece,
//!
//! ```text
//! H_O(rho) = Q(O, rho) + C(O, rho),
//! Q(O, rho) = S(rho || D_O(rho)),   C(O, rho) = S(rho),
//! ```
//!
//! where D_O is the dephasing map in the eigenbasis of O. The crate computes
//! this split (including its extension to degenerate projective
//! measurements), evaluates the purity-based lower bounds on Q_A + Q_B for a
//! pair of observables (the Maassen-Uffink relation and its refinements),
//! certifies that no bound linear in S(rho) can work for d > 2, and searches
//! for the extremal states of the uncertainty sum at fixed purity.
//!
//! Entry points:
//!
//! - [`decomp::split`] / [`decomp::degenerate_split`] for the decomposition;
//! - [`bounds`] for every lower bound and the qubit bound gap `F`;
//! - [`counterexample::verify_violation`] for the linear-bound violations;
//! - [`extremal`] for minimal/maximal uncertainty states, the bifurcation of
//!   pure minimizers, and the one-way discord identity.
//!
//! All entropies are natural logarithms (nats).

pub mod bounds;
pub mod counterexample;
pub mod decomp;
pub mod entropy;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod optim;
pub mod states;

pub use bounds::{BoundKind, BoundReport, DephasingOrder, OverlapMatrix};
pub use counterexample::CounterexampleCase;
pub use decomp::{MeasurementBranches, UncertaintySplit};
pub use entropy::OutcomeDistribution;
pub use error::{Error, Result};
pub use extremal::{MusCurvePoint, PureMusResult, Subsystem};
pub use linalg::{C64, CMat, CVec, EigDecomposition, RMat};
pub use states::{
    BlochState, DensityMatrix, MatrixJson, ObservableBasis, ProjectiveMeasurement,
    QubitObservablePair,
};
