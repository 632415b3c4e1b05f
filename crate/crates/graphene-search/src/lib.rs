//! Continuous-time quantum search on honeycomb tori.
//!
//! The lattice's two bands touch linearly at the Dirac points; marking a
//! site by rescaling its three hopping bonds (a rank-2 perturbation)
//! opens an avoided crossing at the Dirac energy whose gap closes like
//! 1/sqrt(N ln N). A walk started in the right superposition of Dirac
//! states rotates onto the marked site's neighbors in time pi/(2 E+),
//! giving a two-dimensional continuous-time search with the familiar
//! sqrt(N ln N) cost. The crate builds the lattice and search
//! Hamiltonians, locates and propagates the crossing, and verifies the
//! scaling laws through an independent resolvent route:
//!
//! - [`lattice`]: honeycomb torus geometry and adjacency
//! - [`bloch`]: quantized momenta, dispersion, exact Dirac states
//! - [`search`]: H_gamma = -gamma A + W, reduced 3-state model, start states
//! - [`spectral`]: dense symmetric eigensolver, gamma sweeps, gap
//!   extraction, resolvent condition F(E) = 0, moments and Epstein zeta
//! - [`dynamics`]: spectral propagation, search runs, state transfer
//! - [`analysis`]: scaling-law fits across lattice sizes
//! - [`cli`]: the command-line layer with reproducible CSV/JSON/SVG output
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --release --
//! spectrum` etc. drives the same flows from the command line.

pub mod analysis;
pub mod bloch;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::{build_lattice, AdjacencyMatrix, LatticeSpec, SiteId, Sublattice};
pub use search::{
    build_search_hamiltonian, enumerate_start_states, neighbor_state, optimal_start_state,
    reduced_hamiltonian, uniform_dirac_state, SearchHamiltonian, WaveFunction,
};
pub use spectral::{eig_sym, gamma_sweep, gap_at_crossing, resolvent_root, SpectrumResult};
