use serde::{Deserialize, Serialize};

use super::{Matrix4c, ZERO};
use crate::error::{invalid, Result};

/// One sample of the five Hamiltonian parameters, in GHz.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HamiltonianParams {
    /// Tunneling amplitude of qubit A.
    pub k_a: f64,
    /// Tunneling amplitude of qubit B.
    pub k_b: f64,
    /// Bias of qubit A.
    pub eps_a: f64,
    /// Bias of qubit B.
    pub eps_b: f64,
    /// Qubit-qubit coupling.
    pub zeta: f64,
}

/// Names one of the five parameter functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    KA,
    KB,
    EpsA,
    EpsB,
    Zeta,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::KA, Param::KB, Param::EpsA, Param::EpsB, Param::Zeta];

    pub fn name(self) -> &'static str {
        match self {
            Param::KA => "k_a",
            Param::KB => "k_b",
            Param::EpsA => "eps_a",
            Param::EpsB => "eps_b",
            Param::Zeta => "zeta",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl HamiltonianParams {
    pub fn new(k_a: f64, k_b: f64, eps_a: f64, eps_b: f64, zeta: f64) -> Self {
        Self { k_a, k_b, eps_a, eps_b, zeta }
    }

    /// Symmetric parameters: both qubits share `k` and `eps`.
    pub fn symmetric(k: f64, eps: f64, zeta: f64) -> Self {
        Self::new(k, k, eps, eps, zeta)
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::KA => self.k_a,
            Param::KB => self.k_b,
            Param::EpsA => self.eps_a,
            Param::EpsB => self.eps_b,
            Param::Zeta => self.zeta,
        }
    }

    pub fn get_mut(&mut self, p: Param) -> &mut f64 {
        match p {
            Param::KA => &mut self.k_a,
            Param::KB => &mut self.k_b,
            Param::EpsA => &mut self.eps_a,
            Param::EpsB => &mut self.eps_b,
            Param::Zeta => &mut self.zeta,
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.k_a, self.k_b, self.eps_a, self.eps_b, self.zeta]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// `self + alpha * other`, componentwise.
    pub fn add_scaled(&self, alpha: f64, other: &Self) -> Self {
        let a = self.to_array();
        let b = other.to_array();
        Self::from_array(std::array::from_fn(|i| a[i] + alpha * b[i]))
    }
}

/// `K_A σ_xA + K_B σ_xB + ε_A σ_zA + ε_B σ_zB + ζ σ_zA σ_zB` in the charge
/// basis. Rejects non-finite parameters.
pub fn build_hamiltonian(p: &HamiltonianParams) -> Result<Matrix4c> {
    if !p.is_finite() {
        return Err(invalid(format!("non-finite Hamiltonian parameters {p:?}")));
    }
    Ok(hamiltonian_unchecked(p))
}

pub(crate) fn hamiltonian_unchecked(p: &HamiltonianParams) -> Matrix4c {
    let c = |v: f64| num_complex::Complex64::new(v, 0.0);
    let (ka, kb) = (c(p.k_a), c(p.k_b));
    let d0 = p.eps_a + p.eps_b + p.zeta;
    let d1 = p.eps_a - p.eps_b - p.zeta;
    let d2 = -p.eps_a + p.eps_b - p.zeta;
    let d3 = -p.eps_a - p.eps_b + p.zeta;
    #[rustfmt::skip]
    let h = Matrix4c::new(
        c(d0), kb,    ka,    ZERO,
        kb,    c(d1), ZERO,  ka,
        ka,    ZERO,  c(d2), kb,
        ZERO,  ka,    kb,    c(d3),
    );
    h
}

/// ∂H/∂p for parameter `p`: the Pauli term it multiplies.
pub fn generator(p: Param) -> Matrix4c {
    let mut unit = HamiltonianParams::default();
    *unit.get_mut(p) = 1.0;
    hamiltonian_unchecked(&unit)
}

/// `tr(G_p X)` for every generator, without forming the generators.
pub(crate) fn generator_traces(x: &Matrix4c) -> [num_complex::Complex64; 5] {
    let xa = x[(2, 0)] + x[(3, 1)] + x[(0, 2)] + x[(1, 3)];
    let xb = x[(1, 0)] + x[(0, 1)] + x[(3, 2)] + x[(2, 3)];
    let (x0, x1, x2, x3) = (x[(0, 0)], x[(1, 1)], x[(2, 2)], x[(3, 3)]);
    [xa, xb, x0 + x1 - x2 - x3, x0 - x1 + x2 - x3, x0 - x1 - x2 + x3]
}
