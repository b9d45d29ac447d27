//! Classical simulator for quantum double lattice models D(G).
//!
//! The crate builds the spin-lattice model of a quantum double D(G) over a
//! finite group (S₃ as the flagship non-Abelian case, ℤₙ for toric-code
//! checks) and executes its measurement-assisted protocols: ground-state
//! synthesis, creation, transport, braiding and fusion of magnetic, electric
//! and dyonic excitations, anyonic interferometry, and encoded-qutrit
//! computation up to an adaptive Toffoli gate.
//!
//! Layering, bottom up:
//!
//! - [`group`]: exact finite-group tables and unitary irreps.
//! - [`double`]: the algebra D(G) itself — anyon labels, carrier spaces,
//!   monodromy, projectors, fusion channels.
//! - [`lattice`]: planar square two-complex geometry with oriented edges.
//! - [`state`]: sparse complex state vector over group-valued configurations.
//! - [`model`]: gauge transformations and the vertex/face constraint
//!   operators of the Hamiltonian.
//! - [`protocols`]: the executable measurement-assisted protocols.
//! - [`qc`]: the encoded-qutrit computation layer (abstract and lattice
//!   backends).
//! - [`experiments`]: named, configurable reproductions of each experiment
//!   with JSON reports; the `qdouble` binary is a thin CLI over this.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod double;
pub mod error;
pub mod experiments;
pub mod group;
pub mod lattice;
pub mod model;
pub mod protocols;
pub mod qc;
pub mod state;

pub use error::{QdError, Result};
pub use group::{build_cyclic, build_s3, FiniteGroup, GroupElement};
pub use lattice::{build_lattice, LatticeGeometry, SiteId};
pub use state::{LocalBasis, OutcomePolicy, SparseState};
