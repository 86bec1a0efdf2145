//! Simulation and training of a two-qubit quantum neural network.
//!
//! The network is a pair of coupled qubits whose Hamiltonian parameters
//! (tunneling, bias and coupling) are time-dependent functions. Training
//! those functions turns the final-time measurement into an entanglement
//! indicator or a relative-phase indicator. Combining the two on copies of
//! the same state removes the spurious phase dependence that single
//! measurement entanglement witnesses show.
//!
//! Module map:
//!
//! * [`quantum`]: charge-basis states, the Hamiltonian and RK4 density-matrix
//!   propagation.
//! * [`measures`]: concurrence, entanglement of formation, Bell states and the
//!   two-copy Mintert witness.
//! * [`schedule`]: parameter schedules (sampled and Fourier), presets and
//!   Fourier curve fitting.
//! * [`qnn`]: output functionals, adjoint gradients and training.
//! * [`correction`]: two-copy phase estimation and correction.
//! * [`harness`]: experiment sweeps and CSV/JSON emission.

pub mod correction;
pub mod error;
pub mod harness;
pub mod measures;
pub mod qnn;
pub mod quantum;
pub mod schedule;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quantum::{
    build_hamiltonian, expectation_zz, projection_probability, propagate, rk4_step, DensityMatrix, HamiltonianParams,
    IntegrationConfig, Matrix4c, PureState, Trajectory,
};
pub use schedule::{FourierSchedule, SampledSchedule, Schedule};
