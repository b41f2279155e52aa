//! Bell setups on the two-mode squeezed vacuum.
//!
//! A setup fixes how the operators pair the Fock modes: only `(|0⟩, |1⟩)`
//! with the identity everywhere else, or every `(|2n⟩, |2n+1⟩)`. Each one
//! knows its closed-form CHSH value at canonical angles, the pairing it
//! induces on a truncated state, and where its value peaks in η.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::bellops::{canonical_pairing, PairingSpec, Tail};
use crate::chsh::{
    chsh_squeezed_all_pairs, chsh_squeezed_single_pair, violation_window_single_pair, TSIRELSON,
};
use crate::error::Result;
use crate::optim::golden_section_max;
use crate::qstate::check_cutoff;
use crate::registry::{Named, Registry};

/// Tolerance on η for the interior maximizer.
pub const ETA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaOptimum {
    pub mode: &'static str,
    pub eta_star: f64,
    pub value: f64,
    /// The supremum sits at the open end η → 1 and is not attained.
    pub boundary_supremum: bool,
    pub evaluations: usize,
}

pub trait SqueezedSetup: Named + Send + Sync {
    fn description(&self) -> &'static str;

    /// CHSH value at canonical angles on the untruncated state.
    fn chsh_closed(&self, eta: f64) -> Result<f64>;

    /// Pairing on the first `cutoff` modes, with the matching tail action.
    fn pairing(&self, cutoff: usize) -> Result<PairingSpec>;

    fn optimum(&self) -> EtaOptimum;

    /// Open η interval on which the closed-form value exceeds 2.
    fn violation_window(&self) -> (f64, f64);
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SinglePair;

#[derive(Debug, Default, Clone, Copy)]
pub struct AllPairs;

impl Named for SinglePair {
    fn name(&self) -> &'static str {
        "single_pair"
    }
}

impl SqueezedSetup for SinglePair {
    fn description(&self) -> &'static str {
        "modes (0,1) paired, identity on every other mode"
    }

    fn chsh_closed(&self, eta: f64) -> Result<f64> {
        chsh_squeezed_single_pair(eta)
    }

    fn pairing(&self, cutoff: usize) -> Result<PairingSpec> {
        check_cutoff(cutoff)?;
        Ok(canonical_pairing(cutoff, 1)?.with_tail(Tail::Identity))
    }

    fn optimum(&self) -> EtaOptimum {
        let lo = SQRT_2 - 1.0;
        let (eta_star, value, evaluations) = golden_section_max(
            |eta| chsh_squeezed_single_pair(eta).unwrap_or(f64::NEG_INFINITY),
            lo,
            1.0 - f64::EPSILON,
            ETA_TOL,
        );
        EtaOptimum {
            mode: self.name(),
            eta_star,
            value,
            boundary_supremum: false,
            evaluations,
        }
    }

    fn violation_window(&self) -> (f64, f64) {
        violation_window_single_pair()
    }
}

impl Named for AllPairs {
    fn name(&self) -> &'static str {
        "all_pairs"
    }
}

impl SqueezedSetup for AllPairs {
    fn description(&self) -> &'static str {
        "every (2n, 2n+1) pair, traceless"
    }

    fn chsh_closed(&self, eta: f64) -> Result<f64> {
        chsh_squeezed_all_pairs(eta)
    }

    fn pairing(&self, cutoff: usize) -> Result<PairingSpec> {
        check_cutoff(cutoff)?;
        canonical_pairing(cutoff, cutoff / 2)
    }

    /// `4√2 η/(1+η²)` increases on `[0, 1)`; the supremum is `2√2` at η → 1.
    fn optimum(&self) -> EtaOptimum {
        EtaOptimum {
            mode: self.name(),
            eta_star: 1.0,
            value: TSIRELSON,
            boundary_supremum: true,
            evaluations: 0,
        }
    }

    /// `4√2 η/(1+η²) > 2` on `(√2 − 1, √2 + 1)`, clipped to η < 1.
    fn violation_window(&self) -> (f64, f64) {
        (SQRT_2 - 1.0, 1.0)
    }
}

pub fn setups() -> Registry<dyn SqueezedSetup> {
    let mut reg: Registry<dyn SqueezedSetup> = Registry::new("squeezed setup");
    reg.register(Box::new(SinglePair))
        .register(Box::new(AllPairs));
    reg
}

/// Looks up a setup by name (`single_pair` / `all_pairs`, dashes accepted)
/// and reports where its CHSH value peaks.
pub fn optimize_eta(mode: &str) -> Result<EtaOptimum> {
    let reg = setups();
    Ok(reg.get(&mode.replace('-', "_"))?.optimum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::{canonical_angles, chsh_value, DenseOracle};
    use crate::qstate::squeezed_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_pair_optimum() {
        let opt = optimize_eta("single-pair").unwrap();
        // Dense grid at step 1e-6 over (√2−1, 1): argmax 0.70710656…, max 2.4999999999997
        assert_abs_diff_eq!(opt.eta_star, 0.707_106_562_365_258_6, epsilon = 1e-6);
        assert_abs_diff_eq!(opt.value, 2.5, epsilon = 1e-12);
        assert!(opt.eta_star > SQRT_2 - 1.0 && opt.eta_star < 1.0);
        assert!(!opt.boundary_supremum);
    }

    #[test]
    fn all_pairs_boundary() {
        let opt = optimize_eta("all_pairs").unwrap();
        assert!(opt.boundary_supremum);
        assert_eq!(opt.value, TSIRELSON);
        let a = chsh_squeezed_all_pairs(0.9).unwrap();
        let b = chsh_squeezed_all_pairs(0.99).unwrap();
        assert!(a < b && b < TSIRELSON);
    }

    #[test]
    fn windows_bracket_the_classical_bound() {
        for setup in setups().iter() {
            let (lo, hi) = setup.violation_window();
            assert_abs_diff_eq!(setup.chsh_closed(lo).unwrap(), 2.0, epsilon = 1e-12);
            assert!(setup.chsh_closed(lo - 1e-6).unwrap() < 2.0);
            assert!(setup.chsh_closed(lo + 1e-6).unwrap() > 2.0);
            assert!(setup.chsh_closed(hi - 1e-9).unwrap() > 2.0);
        }
    }

    #[test]
    fn unknown_mode() {
        assert!(optimize_eta("three_pairs").is_err());
    }

    #[test]
    fn setups_match_oracle() {
        for setup in setups().iter() {
            for &eta in &[0.2, 0.5, 0.8] {
                let state = squeezed_state(eta, 32).unwrap();
                let spec = setup.pairing(32).unwrap();
                let r = chsh_value(&state, &spec, canonical_angles(), &DenseOracle).unwrap();
                let closed = setup.chsh_closed(eta).unwrap();
                assert!(
                    (r.value - closed).abs() < 1e-10 + 4.0 * state.tail_mass(),
                    "{}",
                    setup.name()
                );
            }
        }
    }
}
