//! Analytic entanglement measures and the two-copy Mintert witness.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::{Matrix4, SMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quantum::{DensityMatrix, Matrix4c, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
        }
    }

    /// Local unitary on qubit B taking `Ψ−(θ)` to this family at the same `θ`
    /// (up to a global sign).
    fn local_map_b(self) -> [[f64; 2]; 2] {
        match self {
            BellKind::PsiMinus => [[1.0, 0.0], [0.0, 1.0]],
            BellKind::PsiPlus => [[1.0, 0.0], [0.0, -1.0]],
            BellKind::PhiMinus => [[0.0, 1.0], [1.0, 0.0]],
            // X·Z
            BellKind::PhiPlus => [[0.0, -1.0], [1.0, 0.0]],
        }
    }
}

/// A Bell-family state with relative phase offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bell {
    pub kind: BellKind,
    pub offset: f64,
}

impl Bell {
    pub fn new(kind: BellKind, offset: f64) -> Self {
        Self { kind, offset: canonical_angle(offset) }
    }
}

/// Maps an angle into `(−π, π]`.
pub fn canonical_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// `Φ±(θ) = (|00⟩ ± e^{iθ}|11⟩)/√2`, `Ψ±(θ) = (|01⟩ ± e^{iθ}|10⟩)/√2`.
pub fn bell_state(kind: BellKind, offset: f64) -> PureState {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let b = Complex64::from_polar(FRAC_1_SQRT_2, offset);
    let z = Complex64::new(0.0, 0.0);
    let amps = match kind {
        BellKind::PhiPlus => [a, z, z, b],
        BellKind::PhiMinus => [a, z, z, -b],
        BellKind::PsiPlus => [z, a, b, z],
        BellKind::PsiMinus => [z, a, -b, z],
    };
    PureState::normalized(amps).expect("Bell amplitudes are nonzero")
}

fn sigma_y_sigma_y() -> Matrix4c {
    let c = |v: f64| Complex64::new(v, 0.0);
    let o = c(0.0);
    #[rustfmt::skip]
    let m = Matrix4c::new(
        o,       o,      o,      c(-1.0),
        o,       o,      c(1.0), o,
        o,       c(1.0), o,      o,
        c(-1.0), o,      o,      o,
    );
    m
}

/// Wootters concurrence `max(0, λ1 − λ2 − λ3 − λ4)`.
///
/// With `ρ = W W†` (from the eigendecomposition), the `λ_i` are the
/// singular values of `Wᵀ (σ_y⊗σ_y) W`. This equals the usual square roots of
/// the eigenvalues of `ρ ρ̃` but keeps full precision for pure states.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    rho.validate()?;
    let eig = rho.matrix().symmetric_eigen();
    let mut w = eig.eigenvectors;
    for (i, &p) in eig.eigenvalues.iter().enumerate() {
        // validate() already rejected anything below −1e-10
        let p = p.max(0.0);
        let s = Complex64::new(p.sqrt(), 0.0);
        for r in 0..4 {
            w[(r, i)] *= s;
        }
    }
    let tau = w.transpose() * sigma_y_sigma_y() * w;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).clamp(0.0, 1.0))
}

pub fn pure_concurrence(psi: &PureState) -> f64 {
    let a = psi.amplitudes();
    (2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0)
}

/// Binary entropy in bits.
fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation (ebits) as a function of concurrence.
pub fn entanglement_of_formation_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// Entanglement of formation `h((1 + √(1 − C²))/2)`, in ebits.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    Ok(entanglement_of_formation_from_concurrence(concurrence(rho)?))
}

/// Concurrence of the flat state `½(|00⟩ + e^{iξ}|01⟩ + e^{iθ}|10⟩ + e^{iφ}|11⟩)`.
pub fn flat_state_concurrence(xi: f64, theta: f64, phi: f64) -> f64 {
    ((phi - (xi + theta)) / 2.0).sin().abs()
}

/// Which Bell state the witness is tuned to detect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTarget {
    pub reference: BellKind,
}

impl Default for WitnessTarget {
    fn default() -> Self {
        Self { reference: BellKind::PsiMinus }
    }
}

impl WitnessTarget {
    pub fn new(reference: BellKind) -> Self {
        Self { reference }
    }
}

type Matrix16c = SMatrix<Complex64, 16, 16>;

fn kron4(a: &Matrix4c, b: &Matrix4c) -> Matrix16c {
    Matrix16c::from_fn(|r, c| a[(r / 4, c / 4)] * b[(r % 4, c % 4)])
}

/// Per-copy factors of the witness operator: the antisymmetric projector on
/// the two qubits of copy 1 and `P₋ − P₊` on the two qubits of copy 2, both
/// conjugated by the local map that resets the witness to `target`.
fn witness_factors(target: WitnessTarget) -> (Matrix4c, Matrix4c) {
    let c = |v: f64| Complex64::new(v, 0.0);
    let singlet = bell_state(BellKind::PsiMinus, 0.0).as_vector();
    let p_anti = singlet * singlet.adjoint();
    let swap = Matrix4::from_fn(|r, col| {
        // |ab⟩ → |ba⟩
        let swapped = ((r & 1) << 1) | (r >> 1);
        if col == swapped {
            c(1.0)
        } else {
            c(0.0)
        }
    });
    let identity = Matrix4c::identity();
    let p_sym = (identity + swap) * c(0.5);
    let p_asym = (identity - swap) * c(0.5);
    let diff = p_asym - p_sym;

    let u = target.reference.local_map_b();
    let u_b = nalgebra::Matrix2::new(c(u[0][0]), c(u[0][1]), c(u[1][0]), c(u[1][1]));
    let local = nalgebra::Matrix2::<Complex64>::identity().kronecker(&u_b);
    let local = Matrix4c::from_fn(|r, col| local[(r, col)]);
    (local * p_anti * local.adjoint(), local * diff * local.adjoint())
}

/// Mintert witness `W = −4 tr((ρ⊗ρ) V)` evaluated as a 16×16 trace over the
/// ordering `(A₁B₁A₂B₂)`. Negative values signal entanglement.
pub fn mintert_witness(rho: &DensityMatrix, target: WitnessTarget) -> Result<f64> {
    rho.validate()?;
    let (first, second) = witness_factors(target);
    let v = kron4(&first, &second);
    let rr = kron4(rho.matrix(), rho.matrix());
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..16 {
        for j in 0..16 {
            tr += rr[(i, j)] * v[(j, i)];
        }
    }
    Ok(-4.0 * tr.re)
}
