use nalgebra::Vector4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Matrix4c, ZERO, ZZ_DIAG};
use crate::error::{invalid, Result};

/// Normalization tolerance for [`PureState::new`].
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance used when validating a density matrix (Hermiticity and trace).
pub const DENSITY_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-10;

/// A normalized two-qubit pure state in the charge basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: [Complex64; 4],
}

impl PureState {
    /// Wraps amplitudes that are already normalized (within [`NORM_TOL`]).
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let n = norm_sqr(&amplitudes);
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("state norm² = {n}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let n = norm_sqr(&amplitudes).sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self { amplitudes: amplitudes.map(|a| a / n) })
    }

    /// Wraps amplitudes already known to be normalized, such as the image of
    /// a normalized state under a permutation or a diagonal phase.
    pub(crate) fn from_amplitudes_unchecked(amplitudes: [Complex64; 4]) -> Self {
        Self { amplitudes }
    }

    /// Normalizes real amplitudes.
    pub fn from_real(amplitudes: [f64; 4]) -> Result<Self> {
        Self::normalized(amplitudes.map(|a| Complex64::new(a, 0.0)))
    }

    /// `a00|00⟩ + a01 e^{iξ}|01⟩ + a10 e^{iθ}|10⟩ + a11 e^{iφ}|11⟩` from
    /// magnitudes and the three relative phases `[ξ, θ, φ]`.
    pub fn from_polar(magnitudes: [f64; 4], phases: [f64; 3]) -> Result<Self> {
        let mut amps = [Complex64::new(magnitudes[0], 0.0); 4];
        for i in 1..4 {
            amps[i] = Complex64::from_polar(magnitudes[i], phases[i - 1]);
        }
        Self::new(amps)
    }

    pub fn basis(index: usize) -> Result<Self> {
        if index > 3 {
            return Err(invalid(format!("basis index {index} out of range 0..=3")));
        }
        let mut amps = [ZERO; 4];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn as_vector(&self) -> Vector4<Complex64> {
        Vector4::from(self.amplitudes)
    }

    /// Multiplies every amplitude by `e^{iα}`.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let g = Complex64::from_polar(1.0, alpha);
        Self { amplitudes: self.amplitudes.map(|a| a * g) }
    }

    /// Removes the global phase so the |00⟩ amplitude is real and
    /// non-negative. States with `a00 = 0` are returned unchanged.
    pub fn canonical(&self) -> Self {
        let a0 = self.amplitudes[0];
        if a0.norm() == 0.0 {
            return *self;
        }
        let rot = a0.conj() / a0.norm();
        let mut amps = self.amplitudes.map(|a| a * rot);
        amps[0] = Complex64::new(amps[0].norm(), 0.0);
        Self { amplitudes: amps }
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    pub fn density(&self) -> DensityMatrix {
        let v = self.as_vector();
        DensityMatrix { m: v * v.adjoint() }
    }
}

fn norm_sqr(a: &[Complex64; 4]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// A 4×4 density matrix. Constructed through validation, or internally by
/// propagation (which never renormalizes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Matrix4c,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix4c) -> Result<Self> {
        let rho = Self { m };
        rho.validate()?;
        Ok(rho)
    }

    /// Re-checks the density-matrix invariants.
    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("density matrix has non-finite entries"));
        }
        let herm = hermiticity_error(&m);
        if herm > DENSITY_TOL {
            return Err(invalid(format!("density matrix not Hermitian (error {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(invalid(format!("density matrix trace {tr}, expected 1")));
        }
        let min_eig = hermitian_eigenvalues(&m).into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(invalid(format!("density matrix has eigenvalue {min_eig:e} < 0")));
        }
        Ok(())
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix4c) -> Self {
        Self { m }
    }

    pub fn maximally_mixed() -> Self {
        Self { m: Matrix4c::from_diagonal_element(Complex64::new(0.25, 0.0)) }
    }

    /// Convex mixture `Σ w_i |ψ_i⟩⟨ψ_i|`; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, PureState)]) -> Result<Self> {
        let mut m = Matrix4c::zeros();
        for (w, psi) in parts {
            if *w < 0.0 {
                return Err(invalid("negative mixture weight"));
            }
            m += psi.density().m * Complex64::new(*w, 0.0);
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.m)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.m)
    }
}

pub(crate) fn hermiticity_error(m: &Matrix4c) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub(crate) fn hermitian_eigenvalues(m: &Matrix4c) -> [f64; 4] {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigenvalues();
    let mut out: [f64; 4] = std::array::from_fn(|i| eig[i]);
    out.sort_by(f64::total_cmp);
    out
}

/// `tr(ρ σ_zA⊗σ_zB)`, in [−1, 1].
pub fn expectation_zz(rho: &DensityMatrix) -> f64 {
    (0..4).map(|i| ZZ_DIAG[i] * rho.m[(i, i)].re).sum()
}

/// `⟨b|ρ|b⟩` for charge basis state `b`.
pub fn projection_probability(rho: &DensityMatrix, basis_index: usize) -> Result<f64> {
    if basis_index > 3 {
        return Err(invalid(format!("basis index {basis_index} out of range 0..=3")));
    }
    Ok(rho.m[(basis_index, basis_index)].re)
}
