//! CHSH evaluation.
//!
//! Every correlation `⟨ψ|A(α) ⊗ B(β)|ψ⟩` can be computed by two independent
//! [`Correlator`] strategies: a dense contraction of the operator matrices
//! against the Schmidt-diagonal state, and the closed form
//!
//! ```text
//! ⟨A B⟩ = Σ_pairs 2 c_i c_j cos(α+β) + Σ_singletons c_k²
//! ```
//!
//! Both sides are assumed to use the same pairing layout. Operators with
//! different layouts can still be evaluated with [`chsh_from_operators`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bellops::{build_operator, AngleSet, BellOperator, CMatrix, PairingSpec, Tail, C64};
use crate::error::{Error, Result};
use crate::qstate::{check_eta, check_skew, SchmidtState};
use crate::registry::{Named, Registry};

/// Tsirelson's bound `2√2`.
pub const TSIRELSON: f64 = 2.0 * SQRT_2;
/// Local hidden-variable bound.
pub const CLASSICAL_BOUND: f64 = 2.0;
/// Largest imaginary part an oracle correlation may discard.
pub const IMAG_TOL: f64 = 1e-10;
/// Closeness to `2√2` that counts as saturation.
pub const SATURATION_TOL: f64 = 1e-9;
/// Margin above 2 required to call a value a violation.
pub const VIOLATION_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "oracle" => Ok(Method::Oracle),
            "closed_form" | "closed" => Ok(Method::ClosedForm),
            _ => Err(Error::UnknownStrategy {
                kind: "method",
                name: s.to_string(),
                available: "oracle, closed_form".to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub value: f64,
    pub imag_residual: f64,
}

/// A way of computing `⟨ψ|A(α) ⊗ B(β)|ψ⟩` for operators built from a pairing.
pub trait Correlator: Named + Send + Sync {
    fn method(&self) -> Method;

    fn correlation(
        &self,
        state: &SchmidtState,
        spec: &PairingSpec,
        alpha: f64,
        beta: f64,
    ) -> Result<Correlation>;
}

/// Builds both operators densely and contracts them against the state.
#[derive(Debug, Default, Clone, Copy)]
pub struct DenseOracle;

/// Evaluates the pair/singleton closed form.
#[derive(Debug, Default, Clone, Copy)]
pub struct ClosedForm;

impl Named for DenseOracle {
    fn name(&self) -> &'static str {
        Method::Oracle.as_str()
    }
}

impl Correlator for DenseOracle {
    fn method(&self) -> Method {
        Method::Oracle
    }

    fn correlation(
        &self,
        state: &SchmidtState,
        spec: &PairingSpec,
        alpha: f64,
        beta: f64,
    ) -> Result<Correlation> {
        let a = build_operator(spec, alpha);
        let b = build_operator(spec, beta);
        correlation_oracle(state, &a, &b)
    }
}

impl Named for ClosedForm {
    fn name(&self) -> &'static str {
        Method::ClosedForm.as_str()
    }
}

impl Correlator for ClosedForm {
    fn method(&self) -> Method {
        Method::ClosedForm
    }

    fn correlation(
        &self,
        state: &SchmidtState,
        spec: &PairingSpec,
        alpha: f64,
        beta: f64,
    ) -> Result<Correlation> {
        Ok(Correlation {
            value: correlation_closed(state, spec, alpha + beta)?,
            imag_residual: 0.0,
        })
    }
}

/// Registry holding the built-in correlators under `oracle` and `closed_form`.
pub fn correlators() -> Registry<dyn Correlator> {
    let mut reg: Registry<dyn Correlator> = Registry::new("method");
    reg.register(Box::new(DenseOracle))
        .register(Box::new(ClosedForm));
    reg
}

pub fn correlator(method: Method) -> &'static dyn Correlator {
    match method {
        Method::Oracle => &DenseOracle,
        Method::ClosedForm => &ClosedForm,
    }
}

fn check_dim(state: &SchmidtState, dim: usize) -> Result<()> {
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: dim,
        });
    }
    Ok(())
}

/// `Σ_{m,n} c_m c_n A(m,n) B(m,n)`: the expectation of `A ⊗ B` on a
/// Schmidt-diagonal state without forming the `d² × d²` product.
///
/// When both operators act as the identity beyond the cutoff the discarded
/// modes contribute exactly `tail_mass`, which is added.
pub fn correlation_oracle(
    state: &SchmidtState,
    a: &BellOperator,
    b: &BellOperator,
) -> Result<Correlation> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    check_dim(state, a.dim())?;
    let c = state.coeffs();
    let (am, bm) = (a.matrix(), b.matrix());
    let mut acc = C64::new(0.0, 0.0);
    for m in 0..c.len() {
        for n in 0..c.len() {
            acc += am[(m, n)] * bm[(m, n)] * (c[m] * c[n]);
        }
    }
    if a.tail() == Tail::Identity && b.tail() == Tail::Identity {
        acc += state.tail_mass();
    }
    let imag_residual = acc.im.abs();
    if imag_residual >= IMAG_TOL {
        return Err(Error::ImaginaryResidual(imag_residual));
    }
    Ok(Correlation {
        value: acc.re,
        imag_residual,
    })
}

/// `⟨ψ|A ⊗ B|ψ⟩` through the explicit `d² × d²` Kronecker product.
///
/// Debug path for small dimensions; ignores any tail.
pub fn correlation_tensor(state: &SchmidtState, a: &BellOperator, b: &BellOperator) -> Result<C64> {
    check_dim(state, a.dim())?;
    check_dim(state, b.dim())?;
    let d = state.dim();
    let mut psi = CMatrix::zeros(d * d, 1);
    for (n, &c) in state.coeffs().iter().enumerate() {
        psi[(n * d + n, 0)] = C64::new(c, 0.0);
    }
    let ab = a.matrix().kronecker(b.matrix());
    Ok((psi.adjoint() * ab * psi)[(0, 0)])
}

/// `Σ_pairs c_i c_j`.
pub fn pair_weight(state: &SchmidtState, spec: &PairingSpec) -> f64 {
    let c = state.coeffs();
    spec.pairs().iter().map(|&(i, j)| c[i] * c[j]).sum()
}

/// `Σ_singletons c_k²`, plus the tail when the operators extend as identity.
pub fn singleton_weight(state: &SchmidtState, spec: &PairingSpec) -> f64 {
    let c = state.coeffs();
    let retained: f64 = spec.singletons().iter().map(|&k| c[k] * c[k]).sum();
    match spec.tail() {
        Tail::Identity => retained + state.tail_mass(),
        Tail::Truncated => retained,
    }
}

pub fn correlation_closed(state: &SchmidtState, spec: &PairingSpec, angle_sum: f64) -> Result<f64> {
    check_dim(state, spec.dim())?;
    Ok(2.0 * pair_weight(state, spec) * angle_sum.cos() + singleton_weight(state, spec))
}

/// `2K·Σ_pairs c_i c_j + 2·Σ_singletons c_k²` for a given kernel value `K`.
pub fn chsh_from_kernel(state: &SchmidtState, spec: &PairingSpec, kernel: f64) -> f64 {
    2.0 * kernel * pair_weight(state, spec) + 2.0 * singleton_weight(state, spec)
}

/// The largest CHSH value any angle choice can reach with this pairing.
pub fn analytic_ceiling(state: &SchmidtState, spec: &PairingSpec) -> f64 {
    chsh_from_kernel(state, spec, TSIRELSON)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshReport {
    pub value: f64,
    pub method: Method,
    pub angles: AngleSet,
    pub violated: bool,
    pub saturates_tsirelson: bool,
    pub imag_residual: f64,
}

impl ChshReport {
    fn new(value: f64, method: Method, angles: AngleSet, imag_residual: f64) -> Self {
        ChshReport {
            value,
            method,
            angles,
            violated: value > CLASSICAL_BOUND + VIOLATION_MARGIN,
            saturates_tsirelson: (value - TSIRELSON).abs() < SATURATION_TOL,
            imag_residual,
        }
    }
}

/// `⟨A₁B₁⟩ + ⟨A₂B₁⟩ + ⟨A₁B₂⟩ − ⟨A₂B₂⟩`.
pub fn chsh_value(
    state: &SchmidtState,
    spec: &PairingSpec,
    angles: AngleSet,
    correlator: &dyn Correlator,
) -> Result<ChshReport> {
    check_dim(state, spec.dim())?;
    if !angles.is_finite() {
        return Err(Error::OutOfRange {
            name: "angle",
            value: f64::NAN,
            range: "finite reals",
        });
    }
    let mut value = 0.0;
    let mut imag: f64 = 0.0;
    for (alpha, beta, sign) in [
        (angles.alpha1, angles.beta1, 1.0),
        (angles.alpha2, angles.beta1, 1.0),
        (angles.alpha1, angles.beta2, 1.0),
        (angles.alpha2, angles.beta2, -1.0),
    ] {
        let c = correlator.correlation(state, spec, alpha, beta)?;
        value += sign * c.value;
        imag = imag.max(c.imag_residual);
    }
    Ok(ChshReport::new(value, correlator.method(), angles, imag))
}

/// Oracle CHSH for explicit operators, which may use different layouts.
pub fn chsh_from_operators(
    state: &SchmidtState,
    a: [&BellOperator; 2],
    b: [&BellOperator; 2],
    angles: AngleSet,
) -> Result<ChshReport> {
    let mut value = 0.0;
    let mut imag: f64 = 0.0;
    for (x, y, sign) in [
        (a[0], b[0], 1.0),
        (a[1], b[0], 1.0),
        (a[0], b[1], 1.0),
        (a[1], b[1], -1.0),
    ] {
        let c = correlation_oracle(state, x, y)?;
        value += sign * c.value;
        imag = imag.max(c.imag_residual);
    }
    Ok(ChshReport::new(value, Method::Oracle, angles, imag))
}

/// `α₁ = 0, α₂ = π/2, β₁ = −π/4, β₂ = π/4`, for which the kernel equals `2√2`.
pub fn canonical_angles() -> AngleSet {
    AngleSet::new(0.0, FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationInterval {
    pub lower: f64,
    pub upper: f64,
    pub dim: usize,
    pub parity: Parity,
}

/// Optimal CHSH on the maximal `dim`-mode state with `p` pairs:
/// `(2p·2√2 + 2(dim − 2p)) / dim`.
pub fn maximal_state_chsh(dim: usize, p: usize) -> f64 {
    let d = dim as f64;
    let p = p as f64;
    (2.0 * p * TSIRELSON + 2.0 * (d - 2.0 * p)) / d
}

/// Range of optimal CHSH values on the maximal `dim`-mode state over all
/// representations with at least one pair.
///
/// The odd upper endpoint comes from the pairing formula with `⌊dim/2⌋`
/// pairs, `2√2 − (2√2 − 2)/dim`.
pub fn chsh_bounds(dim: usize) -> Result<ViolationInterval> {
    if dim < 3 {
        return Err(Error::InvalidDimension { dim, min: 3 });
    }
    Ok(ViolationInterval {
        lower: maximal_state_chsh(dim, 1),
        upper: maximal_state_chsh(dim, dim / 2),
        dim,
        parity: if dim.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        },
    })
}

/// Skewed four-mode state, one pair on modes (1, 2), canonical angles.
pub fn chsh_skewed_rep1(r: f64) -> Result<f64> {
    check_skew(r)?;
    Ok(2.0 * (1.0 + r) / (3.0 + r) + 4.0 * SQRT_2 / (3.0 + r))
}

/// Skewed four-mode state, pairs (0, 1) and (2, 3), canonical angles.
pub fn chsh_skewed_rep2(r: f64) -> Result<f64> {
    check_skew(r)?;
    Ok(4.0 * SQRT_2 * r.sqrt() / (3.0 + r) + 4.0 * SQRT_2 / (3.0 + r))
}

/// Squeezed-state correlation with one pair on modes (0, 1) and identity
/// elsewhere: `1 + (1−η²)(2η cos(α+β) − 1 − η²)`.
pub fn squeezed_correlation_single_pair(eta: f64, angle_sum: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(1.0 + (1.0 - eta * eta) * (2.0 * eta * angle_sum.cos() - 1.0 - eta * eta))
}

/// `2 + 2(1−η²)(2√2 η − 1 − η²)`.
pub fn chsh_squeezed_single_pair(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(2.0 + 2.0 * (1.0 - eta * eta) * (TSIRELSON * eta - 1.0 - eta * eta))
}

/// `2√2 · 2η / (1 + η²)`, every mode paired.
pub fn chsh_squeezed_all_pairs(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(TSIRELSON * 2.0 * eta / (1.0 + eta * eta))
}

/// `(√2 − 1, 1)`: the open η interval where the single-pair value exceeds 2.
pub fn violation_window_single_pair() -> (f64, f64) {
    (SQRT_2 - 1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bellops::canonical_pairing;
    use crate::qstate::{maximal_state, skewed_state, squeezed_state};
    use approx::assert_abs_diff_eq;

    #[test]
    fn first_rep_correlation() {
        let s = maximal_state(4).unwrap();
        let spec = PairingSpec::new(4, vec![(1, 2)]).unwrap();
        for &(a, b) in &[(0.3, -1.2), (2.0, 0.5), (0.0, 0.0)] {
            let c = DenseOracle.correlation(&s, &spec, a, b).unwrap();
            assert_abs_diff_eq!(c.value, ((a + b).cos() + 1.0) / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn second_rep_correlation() {
        let s = maximal_state(4).unwrap();
        let spec = canonical_pairing(4, 2).unwrap();
        let c = DenseOracle.correlation(&s, &spec, 0.8, 0.1).unwrap();
        assert_abs_diff_eq!(c.value, 0.9f64.cos(), epsilon = 1e-14);
        let s2 = maximal_state(2).unwrap();
        let c = DenseOracle
            .correlation(&s2, &canonical_pairing(2, 1).unwrap(), 0.0, 0.0)
            .unwrap();
        assert_abs_diff_eq!(c.value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn skewed_closed_matches_oracle() {
        for &r in &[0.1, 0.25, 0.7] {
            let s = skewed_state(r).unwrap();
            let spec = canonical_pairing(4, 2).unwrap();
            let closed = correlation_closed(&s, &spec, 0.6).unwrap();
            let expected = (2.0 * 0.6f64.cos() + 2.0 * r.sqrt() * 0.6f64.cos()) / (3.0 + r);
            assert_abs_diff_eq!(closed, expected, epsilon = 1e-14);
            let oracle = DenseOracle.correlation(&s, &spec, 0.2, 0.4).unwrap();
            assert_abs_diff_eq!(oracle.value, closed, epsilon = 1e-14);
        }
    }

    #[test]
    fn squeezed_single_pair_correlation_with_identity_tail() {
        let eta = 0.6;
        let s = squeezed_state(eta, 8).unwrap();
        let spec = canonical_pairing(8, 1).unwrap().with_tail(Tail::Identity);
        let exact = squeezed_correlation_single_pair(eta, 0.9).unwrap();
        assert_abs_diff_eq!(
            correlation_closed(&s, &spec, 0.9).unwrap(),
            exact,
            epsilon = 1e-14
        );
        let oracle = DenseOracle.correlation(&s, &spec, 0.4, 0.5).unwrap();
        assert_abs_diff_eq!(oracle.value, exact, epsilon = 1e-14);

        // Without the identity tail the truncated value misses exactly the tail.
        let trunc = canonical_pairing(8, 1).unwrap();
        let t = correlation_closed(&s, &trunc, 0.9).unwrap();
        assert_abs_diff_eq!(exact - t, s.tail_mass(), epsilon = 1e-14);
    }

    #[test]
    fn reference_chsh_values() {
        let can = canonical_angles();
        let s4 = maximal_state(4).unwrap();
        for m in [Method::Oracle, Method::ClosedForm] {
            let r = chsh_value(&s4, &canonical_pairing(4, 1).unwrap(), can, correlator(m)).unwrap();
            assert_abs_diff_eq!(r.value, 1.0 + SQRT_2, epsilon = 1e-12);
            assert!(r.violated && !r.saturates_tsirelson);
            let r = chsh_value(&s4, &canonical_pairing(4, 2).unwrap(), can, correlator(m)).unwrap();
            assert_abs_diff_eq!(r.value, TSIRELSON, epsilon = 1e-12);
            assert!(r.saturates_tsirelson);
            let s6 = maximal_state(6).unwrap();
            let r = chsh_value(&s6, &canonical_pairing(6, 2).unwrap(), can, correlator(m)).unwrap();
            // numpy kron oracle: 2.552284749830794
            assert_abs_diff_eq!(r.value, 2.552_284_749_830_794, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_angles_give_classical_bound_on_maximal_states() {
        for n in 1..=7 {
            let s = maximal_state(n).unwrap();
            for p in 0..=n / 2 {
                let spec = canonical_pairing(n, p).unwrap();
                let r = chsh_value(&s, &spec, AngleSet::zero(), &ClosedForm).unwrap();
                assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-14);
                assert!(!r.violated);
            }
        }
    }

    #[test]
    fn kernel_values() {
        assert_abs_diff_eq!(canonical_angles().chsh_kernel(), TSIRELSON, epsilon = 1e-15);
        assert_eq!(AngleSet::zero().chsh_kernel(), 2.0);
        let pi = std::f64::consts::PI;
        let shifted = AngleSet::new(pi, FRAC_PI_2, pi - FRAC_PI_4, pi + FRAC_PI_4);
        assert!(shifted.chsh_kernel().abs() <= TSIRELSON + 1e-12);
    }

    #[test]
    fn kernel_grid_maximum_is_tsirelson() {
        // Exhaustive lattice at π/12: the kernel never exceeds 2√2 and hits it.
        let step = std::f64::consts::PI / 12.0;
        let grid: Vec<f64> = (0..24).map(|k| k as f64 * step).collect();
        let mut best = f64::MIN;
        for &a1 in &grid {
            for &a2 in &grid {
                for &b1 in &grid {
                    for &b2 in &grid {
                        best = best.max(AngleSet::new(a1, a2, b1, b2).chsh_kernel());
                    }
                }
            }
        }
        assert!(best <= TSIRELSON + 1e-12);
        assert_abs_diff_eq!(best, TSIRELSON, epsilon = 1e-12);
    }

    #[test]
    fn bounds() {
        let b = chsh_bounds(4).unwrap();
        assert_abs_diff_eq!(b.lower, 1.0 + SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(b.upper, TSIRELSON, epsilon = 1e-14);
        let b = chsh_bounds(6).unwrap();
        assert_abs_diff_eq!(b.lower, 2.276_142_374_915_397, epsilon = 1e-12);
        let b = chsh_bounds(5).unwrap();
        assert_eq!(b.parity, Parity::Odd);
        // numpy dense grid maximization over p ∈ {1, 2}
        assert_abs_diff_eq!(b.lower, 2.331_370_849_898_476, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, 2.662_741_699_796_952, epsilon = 1e-12);
        assert_abs_diff_eq!(
            b.upper,
            TSIRELSON - (TSIRELSON - 2.0) / 5.0,
            epsilon = 1e-14
        );
        assert!(chsh_bounds(2).is_err());
    }

    #[test]
    fn skewed_formulas() {
        assert_abs_diff_eq!(
            chsh_skewed_rep1(1e-15).unwrap(),
            2.0 / 3.0 + 4.0 * SQRT_2 / 3.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            chsh_skewed_rep1(1.0).unwrap(),
            1.0 + SQRT_2,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            chsh_skewed_rep1(0.5).unwrap(),
            2.473_386_928_426_394_5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(chsh_skewed_rep2(1.0).unwrap(), TSIRELSON, epsilon = 1e-14);
        assert_abs_diff_eq!(
            chsh_skewed_rep2(0.25).unwrap(),
            2.610_855_807_458_022,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            chsh_skewed_rep2(1e-30).unwrap(),
            4.0 * SQRT_2 / 3.0,
            epsilon = 1e-12
        );
        assert!(chsh_skewed_rep1(0.0).is_err());
        assert!(chsh_skewed_rep2(1.01).is_err());
    }

    #[test]
    fn squeezed_formulas() {
        assert_abs_diff_eq!(
            chsh_squeezed_single_pair(0.7).unwrap(),
            2.499_696_967_068_78,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            chsh_squeezed_single_pair(SQRT_2 - 1.0).unwrap(),
            2.0,
            epsilon = 1e-15
        );
        assert_eq!(chsh_squeezed_single_pair(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            chsh_squeezed_single_pair(0.3).unwrap(),
            1.560_521_210_111_42,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            chsh_squeezed_all_pairs(0.5).unwrap(),
            2.262_741_699_796_952,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            chsh_squeezed_all_pairs(1.0 - 1e-9).unwrap(),
            TSIRELSON,
            epsilon = 1e-12
        );
        assert_eq!(chsh_squeezed_all_pairs(0.0).unwrap(), 0.0);
        assert!(chsh_squeezed_all_pairs(1.0).is_err());
        let (lo, hi) = violation_window_single_pair();
        assert_eq!(hi, 1.0);
        assert_abs_diff_eq!(chsh_squeezed_single_pair(lo).unwrap(), 2.0, epsilon = 1e-15);
        assert!(chsh_squeezed_single_pair(0.7).unwrap() > 2.0);
    }

    #[test]
    fn tensor_path_agrees_with_contraction() {
        let s = skewed_state(0.3).unwrap();
        let spec = PairingSpec::new(4, vec![(3, 1)]).unwrap();
        let a = build_operator(&spec, 0.9);
        let b = build_operator(&spec, -0.2);
        let t = correlation_tensor(&s, &a, &b).unwrap();
        let c = correlation_oracle(&s, &a, &b).unwrap();
        assert_abs_diff_eq!(t.re, c.value, epsilon = 1e-14);
        assert!(t.im.abs() < 1e-14);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let s = maximal_state(3).unwrap();
        let spec = canonical_pairing(4, 1).unwrap();
        assert!(matches!(
            chsh_value(&s, &spec, canonical_angles(), &DenseOracle),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(correlation_closed(&s, &spec, 0.0).is_err());
    }

    #[test]
    fn imaginary_residual_is_an_internal_error() {
        let s = maximal_state(2).unwrap();
        let i = C64::new(0.0, 1.0);
        let m = CMatrix::from_row_slice(2, 2, &[i, C64::new(0., 0.), C64::new(0., 0.), i]);
        let a = BellOperator::from_matrix(m).unwrap();
        let id = BellOperator::from_matrix(CMatrix::identity(2, 2)).unwrap();
        let err = correlation_oracle(&s, &a, &id).unwrap_err();
        assert!(err.is_internal());
    }

    #[test]
    fn registry_lookup() {
        let reg = correlators();
        assert_eq!(reg.names(), vec!["oracle", "closed_form"]);
        assert_eq!(reg.get("closed_form").unwrap().method(), Method::ClosedForm);
        assert!(reg.get("nope").is_err());
        assert_eq!("closed-form".parse::<Method>().unwrap(), Method::ClosedForm);
    }

    #[test]
    fn report_json_shape() {
        let s = maximal_state(1).unwrap();
        let r = chsh_value(
            &s,
            &canonical_pairing(1, 0).unwrap(),
            AngleSet::zero(),
            &ClosedForm,
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "value": 2.0, "method": "closed_form", "angles": [0.0, 0.0, 0.0, 0.0],
                "violated": false, "saturates_tsirelson": false, "imag_residual": 0.0
            })
        );
    }
}
