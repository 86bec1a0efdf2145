use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::OutputFunctional;
use crate::error::{invalid, Result};
use crate::quantum::PureState;

/// One `(input, output functional, target)` training pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingSample {
    pub input: PureState,
    pub functional: OutputFunctional,
    pub target: f64,
}

impl TrainingSample {
    pub fn new(input: PureState, functional: OutputFunctional, target: f64) -> Result<Self> {
        functional.validate()?;
        if !(0.0..=1.0).contains(&target) {
            return Err(invalid(format!("target {target} outside [0, 1]")));
        }
        Ok(Self { input, functional, target })
    }
}

/// The four entanglement-indicator training pairs, in table order: a Bell
/// state, two product states, and a partially entangled state whose target
/// is 0.44 (not its E_F of 0.55).
pub fn make_entanglement_training_set() -> Vec<TrainingSample> {
    let zz = OutputFunctional::ZzCorrelationSquared;
    let rows: [([f64; 4], f64); 4] = [
        ([1.0, 0.0, 0.0, 1.0], 1.0),
        ([1.0, 1.0, 1.0, 1.0], 0.0),
        ([0.0, 0.0, 0.5, 1.0], 0.0),
        ([1.0, 1.0, 1.0, 0.0], 0.44),
    ];
    rows.iter()
        .map(|(amps, target)| TrainingSample {
            input: PureState::from_real(*amps).expect("nonzero rows"),
            functional: zz,
            target: *target,
        })
        .collect()
}

/// `n` phase-indicator pairs: `(|00⟩ + e^{iφ}|11⟩)/√2` with `φ` evenly spaced
/// on `[−π, π]`, read out on `|11⟩`, target `cos²(φ/2)`.
pub fn make_phase_training_set(n: usize) -> Result<Vec<TrainingSample>> {
    if n < 2 {
        return Err(invalid(format!("need at least 2 phase samples, got {n}")));
    }
    Ok((0..n)
        .map(|i| {
            let phi = -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let input = PureState::normalized([
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(s, phi),
            ])
            .expect("nonzero");
            TrainingSample {
                input,
                functional: OutputFunctional::ProjectionProbability(3),
                target: (phi / 2.0).cos().powi(2),
            }
        })
        .collect())
}

/// Phase target for the unequal-magnitude family `a00|00⟩ + a11 e^{iφ}|11⟩`:
/// `2(½ − a00²)² a11² + 2 a00 a11 cos²(φ/2)`.
pub fn extended_phase_target(a00: f64, a11: f64, phi: f64) -> Result<f64> {
    let norm = a00 * a00 + a11 * a11;
    if (norm - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("a00² + a11² = {norm}, expected 1")));
    }
    Ok(2.0 * (0.5 - a00 * a00).powi(2) * a11 * a11 + 2.0 * a00 * a11 * (phi / 2.0).cos().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entanglement_set_rows() {
        let set = make_entanglement_training_set();
        assert_eq!(set.len(), 4);
        assert_eq!(set[0].target, 1.0);
        assert_eq!(set[3].target, 0.44);
        for s in &set {
            assert!((s.input.norm_sqr() - 1.0).abs() < 1e-15);
            assert_eq!(s.functional, OutputFunctional::ZzCorrelationSquared);
        }
        let third = set[2].input.amplitudes();
        assert!((third[2].re - 0.5 / 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn phase_set_targets() {
        let set = make_phase_training_set(11).unwrap();
        assert_eq!(set.len(), 11);
        assert!(set[0].target.abs() < 1e-15);
        assert!(set[10].target.abs() < 1e-15);
        assert!((set[5].target - 1.0).abs() < 1e-15);
        let five = make_phase_training_set(5).unwrap();
        // φ = −π/2, π/2
        assert!((five[1].target - 0.5).abs() < 1e-15);
        assert!((five[3].target - 0.5).abs() < 1e-15);
        assert!(make_phase_training_set(1).is_err());
    }

    #[test]
    fn extended_target_values() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for phi in [-2.0, 0.0, 0.7, PI] {
            let want = (phi / 2.0).cos().powi(2);
            assert!((extended_phase_target(s, s, phi).unwrap() - want).abs() < 1e-15);
            assert_eq!(extended_phase_target(1.0, 0.0, phi).unwrap(), 0.0);
            let v = extended_phase_target(0.6, 0.8, phi).unwrap();
            assert!((v - (0.025088 + 0.96 * want)).abs() < 1e-14);
        }
        assert!(extended_phase_target(0.6, 0.6, 0.0).is_err());
    }

    #[test]
    fn sample_validation() {
        let psi = PureState::basis(0).unwrap();
        assert!(TrainingSample::new(psi, OutputFunctional::ZzCorrelationSquared, 1.5).is_err());
        assert!(TrainingSample::new(psi, OutputFunctional::ProjectionProbability(7), 0.5).is_err());
    }
}
