use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::quantum::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateMode {
    /// Uniform on the unit sphere of real 4-vectors.
    Real,
    /// Haar-uniform on the complex unit sphere.
    Complex,
}

/// Draws a random pure state by normalizing a Gaussian vector, with the
/// global phase fixed so that `a00` is real and non-negative.
pub fn random_pure_state<R: Rng + ?Sized>(mode: StateMode, rng: &mut R) -> PureState {
    loop {
        let amps: [Complex64; 4] = std::array::from_fn(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match mode {
                StateMode::Real => 0.0,
                StateMode::Complex => rng.sample(StandardNormal),
            };
            Complex64::new(re, im)
        });
        if let Ok(psi) = PureState::normalized(amps) {
            return psi.canonical();
        }
    }
}
