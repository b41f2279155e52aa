//! Unitarily inequivalent Bell-operator representations built by pairing the
//! modes of a Hilbert space.
//!
//! * [`qstate`]: Schmidt-form entangled states (maximal, skewed, squeezed).
//! * [`bellops`]: pairing operators, pseudospin operators and their checks.
//! * [`chsh`]: CHSH values via a dense oracle or the closed form.
//! * [`optim`]: angle optimization and representation enumeration.
//! * [`squeezed`]: the single-pair and all-pairs setups on the squeezed vacuum.
//! * [`entanglement`]: purity and entanglement entropy.
//! * [`reproduce`]: the table of headline numbers.

pub mod bellops;
pub mod chsh;
pub mod entanglement;
pub mod error;
pub mod optim;
pub mod qstate;
pub mod registry;
pub mod reproduce;
pub mod squeezed;

pub use bellops::{
    build_operator, canonical_pairing, inequivalence_by_trace, pseudospin, pseudospin_bell,
    verify_bell_operator, AngleSet, Axis, BellOperator, Equivalence, PairingSpec, Tail,
    VerificationReport,
};
pub use chsh::{
    canonical_angles, chsh_bounds, chsh_value, correlator, correlators, ChshReport, ClosedForm,
    Correlator, DenseOracle, Method, ViolationInterval, TSIRELSON,
};
pub use error::{Error, Result};
pub use optim::{enumerate_representations, optimize_angles, OptimResult, RepresentationSummary};
pub use qstate::{maximal_state, skewed_state, squeezed_state, SchmidtState};
pub use squeezed::{optimize_eta, setups, EtaOptimum, SqueezedSetup};
