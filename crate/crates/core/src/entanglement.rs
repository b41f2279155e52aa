//! Purity and von Neumann entropy of the reduced state `ρ_a = Tr_b |ψ⟩⟨ψ|`.
//!
//! For a Schmidt state `ρ_a` is diagonal with entries `c_n²`, so only the
//! diagonal is kept.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{check_eta, SchmidtState, NORM_TOL};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedDensity {
    probabilities: Vec<f64>,
    tail_mass: f64,
}

impl ReducedDensity {
    pub fn new(probabilities: Vec<f64>, tail_mass: f64) -> Result<Self> {
        if probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || tail_mass < 0.0 {
            return Err(Error::InvalidState("negative probability".into()));
        }
        let total: f64 = probabilities.iter().sum::<f64>() + tail_mass;
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(ReducedDensity {
            probabilities,
            tail_mass,
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }
}

pub fn reduced_density(state: &SchmidtState) -> ReducedDensity {
    ReducedDensity {
        probabilities: state.coeffs().iter().map(|c| c * c).collect(),
        tail_mass: state.tail_mass(),
    }
}

/// `Tr ρ² = Σ p²` over the retained modes.
pub fn purity(rho: &ReducedDensity) -> f64 {
    rho.probabilities.iter().map(|p| p * p).sum()
}

/// `−Σ p ln p` over the retained modes, with `0 ln 0 = 0`.
pub fn entropy(rho: &ReducedDensity) -> f64 {
    let s: f64 = rho
        .probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    // A single unit probability gives -0.0 otherwise.
    s.max(0.0)
}

/// `(1 − η²)/(1 + η²)`.
pub fn purity_closed_squeezed(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let e2 = eta * eta;
    Ok((1.0 - e2) / (1.0 + e2))
}

/// `−ln(1 − η²) − η² ln η² / (1 − η²)`.
pub fn entropy_closed_squeezed(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if eta == 0.0 {
        return Ok(0.0);
    }
    let e2 = eta * eta;
    Ok(-(-e2).ln_1p() - e2 * e2.ln() / (1.0 - e2))
}

/// Rounding allowance added to the tail-dependent bounds below.
pub const ROUNDING_FLOOR: f64 = 1e-14;

/// Bound on `|Σp² (truncated) − closed form|` for a squeezed state.
pub fn purity_tolerance(tail_mass: f64) -> f64 {
    2.0 * tail_mass + ROUNDING_FLOOR
}

/// Bound on `|entropy (truncated) − closed form|` for a squeezed state
/// truncated at `cutoff`.
pub fn entropy_tolerance(eta: f64, cutoff: usize, tail_mass: f64) -> f64 {
    let first_missing = (eta * eta).powi(cutoff as i32) * (1.0 - eta * eta);
    if first_missing <= 0.0 {
        return tail_mass + ROUNDING_FLOOR;
    }
    tail_mass * (1.0 + first_missing.ln().abs()) + ROUNDING_FLOOR
}
