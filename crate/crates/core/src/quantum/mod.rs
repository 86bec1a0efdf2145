//! Charge-basis state and operator algebra for two qubits, the tunable
//! Hamiltonian and fixed-step RK4 propagation of the density matrix.
//!
//! Basis ordering is `|ab⟩ ↦ 2a + b`, i.e. `{|00⟩, |01⟩, |10⟩, |11⟩}` with
//! qubit A the left tensor factor.

mod hamiltonian;
mod propagate;
mod state;

pub(crate) use hamiltonian::generator_traces;
pub use hamiltonian::{build_hamiltonian, generator, HamiltonianParams, Param};
pub(crate) use propagate::{commutator_rhs, trajectory_with};
pub use propagate::{
    propagate, propagate_density, propagate_trajectory, rk4_step, IntegrationConfig, StepHamiltonians, Trajectory,
    TransferMap,
};
pub use state::{expectation_zz, projection_probability, DensityMatrix, PureState};

use nalgebra::Matrix4;
use num_complex::Complex64;

/// 4×4 complex matrix in the charge basis.
pub type Matrix4c = Matrix4<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Diagonal of σ_zA⊗σ_zB.
pub(crate) const ZZ_DIAG: [f64; 4] = [1.0, -1.0, -1.0, 1.0];
