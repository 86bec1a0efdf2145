//! Parsing of state literals: four comma-separated complex numbers such as
//! `0.7071,0,0,0.5+0.5j`.

use anyhow::{anyhow, bail, Result};
use entwit::{Complex64, PureState};

/// Largest norm deviation accepted without `--normalize`.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Parses `re`, `imj`, `re+imj` or `re-imj`; a bare `j` means 1.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        bail!("empty complex literal");
    }
    let Some(body) = s.strip_suffix(['j', 'J']) else {
        return Ok(Complex64::new(parse_real(s)?, 0.0));
    };
    // The imaginary part starts at the last sign that is not an exponent sign.
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_real(&body[..i])?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| anyhow!("`{s}` is not a number"))?;
    if !v.is_finite() {
        bail!("`{s}` is not finite");
    }
    Ok(v)
}

/// Parses a state literal. Inputs within [`NORM_TOLERANCE`] of unit norm are
/// renormalized silently, and with `normalize` any nonzero vector is
/// rescaled with a warning.
pub fn parse_state(text: &str, normalize: bool) -> Result<PureState> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        bail!("state needs 4 comma-separated amplitudes, got {}", parts.len());
    }
    let mut amps = [Complex64::default(); 4];
    for (slot, part) in amps.iter_mut().zip(&parts) {
        *slot = parse_complex(part)?;
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        bail!("state vector is zero");
    }
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        if !normalize {
            bail!("state norm is {norm}, pass --normalize to rescale");
        }
        log::warn!("state norm {norm} rescaled to 1");
    }
    Ok(PureState::normalized(amps)?)
}
