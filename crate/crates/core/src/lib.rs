//! Multi-body diffusion operators on hypergraphs, their spectra, coupled map
//! and flow dynamics, and sufficient synchronization criteria.

pub mod analysis;
pub mod dynamics;
pub mod hypergraph;
pub mod matrix;
pub mod operators;
pub mod spectra;
pub mod io;
pub mod presets;
pub mod cli;

pub use analysis::{CriterionReport, Verdict};
pub use dynamics::{MapSpec, State, Termination, Trajectory};
pub use hypergraph::{Hypergraph, HypergraphError};
pub use matrix::{Matrix, SymMatrix};
pub use spectra::{eig_sym, Spectrum};
