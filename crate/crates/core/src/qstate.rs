//! Bipartite pure states in Schmidt form, `Σ c_n |n⟩_a |n⟩_b`.
//!
//! Only the non-negative Schmidt coefficients are stored. Truncated states
//! (the squeezed vacuum) keep the discarded probability in `tail_mass`
//! instead of being renormalized, so a truncated expectation value differs
//! from the exact one by an amount controlled by that number.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization tolerance for `Σ c² + tail_mass = 1`.
pub const NORM_TOL: f64 = 1e-12;

/// Cutoff used for squeezed states when none is given.
pub const DEFAULT_CUTOFF: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct SchmidtState {
    coeffs: Vec<f64>,
    tail_mass: f64,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    label: String,
    coeffs: Vec<f64>,
    tail_mass: f64,
}

impl TryFrom<StateRepr> for SchmidtState {
    type Error = Error;

    fn try_from(r: StateRepr) -> Result<Self> {
        SchmidtState::new(r.coeffs, r.tail_mass, r.label)
    }
}

impl From<SchmidtState> for StateRepr {
    fn from(s: SchmidtState) -> Self {
        StateRepr {
            label: s.label,
            coeffs: s.coeffs,
            tail_mass: s.tail_mass,
        }
    }
}

impl SchmidtState {
    /// Validates and wraps an explicit coefficient vector.
    pub fn new(coeffs: Vec<f64>, tail_mass: f64, label: impl Into<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        if let Some(c) = coeffs.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidState(format!(
                "Schmidt coefficient {c} is not a non-negative finite number"
            )));
        }
        if !(tail_mass.is_finite() && tail_mass >= 0.0) {
            return Err(Error::InvalidState(format!(
                "tail mass {tail_mass} is negative"
            )));
        }
        let norm: f64 = coeffs.iter().map(|c| c * c).sum::<f64>() + tail_mass;
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "Σc² + tail = {norm}, expected 1"
            )));
        }
        Ok(SchmidtState {
            coeffs,
            tail_mass,
            label: label.into(),
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `Σ c_n²` over the retained modes.
    pub fn retained_mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// The maximally entangled state on `n` modes, all coefficients `1/√n`.
pub fn maximal_state(n: usize) -> Result<SchmidtState> {
    if n == 0 {
        return Err(Error::InvalidDimension { dim: 0, min: 1 });
    }
    let c = 1.0 / (n as f64).sqrt();
    SchmidtState::new(vec![c; n], 0.0, format!("maximal(N={n})"))
}

/// Four-mode state `(|00⟩ + |11⟩ + |22⟩ + √r |33⟩)/√(3+r)`.
///
/// `r = 1` is admitted and reproduces `maximal_state(4)`.
pub fn skewed_state(r: f64) -> Result<SchmidtState> {
    check_skew(r)?;
    let norm = (3.0 + r).sqrt();
    let one = 1.0 / norm;
    SchmidtState::new(
        vec![one, one, one, r.sqrt() / norm],
        0.0,
        format!("skewed(r={r})"),
    )
}

pub(crate) fn check_skew(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "r",
            value: r,
            range: "(0, 1]",
        })
    }
}

pub fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && (0.0..1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1)",
        })
    }
}

pub fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff >= 2 && cutoff.is_multiple_of(2) {
        Ok(())
    } else {
        Err(Error::InvalidCutoff(cutoff))
    }
}

/// Two-mode squeezed vacuum `√(1-η²) Σ ηⁿ |n⟩|n⟩` truncated to `cutoff` modes.
///
/// The coefficients are not renormalized; the discarded weight
/// `η^(2·cutoff)` is kept as `tail_mass`.
pub fn squeezed_state(eta: f64, cutoff: usize) -> Result<SchmidtState> {
    check_eta(eta)?;
    check_cutoff(cutoff)?;
    let mut coeffs = Vec::with_capacity(cutoff);
    let mut c = (1.0 - eta * eta).sqrt();
    for _ in 0..cutoff {
        coeffs.push(c);
        c *= eta;
    }
    let tail_mass = squeezed_tail_mass(eta, cutoff);
    SchmidtState::new(
        coeffs,
        tail_mass,
        format!("squeezed(eta={eta}, cutoff={cutoff})"),
    )
}

/// `Σ_{n ≥ cutoff} (1-η²) η^{2n} = η^{2·cutoff}`.
pub fn squeezed_tail_mass(eta: f64, cutoff: usize) -> f64 {
    (eta * eta).powi(cutoff as i32)
}
