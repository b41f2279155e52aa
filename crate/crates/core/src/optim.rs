//! Maximization of CHSH values over angles and squeezing, and enumeration of
//! the pairing representations of a given dimension.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bellops::{canonical_pairing, AngleSet, PairingSpec};
use crate::chsh::{analytic_ceiling, maximal_state_chsh, ClosedForm, Correlator, TSIRELSON};
use crate::error::{Error, Result};
use crate::qstate::{maximal_state, SchmidtState};

/// Points per angle on the coarse grid; spacing `2π / 48 = π/24`.
pub const GRID_POINTS: usize = 48;
/// Coordinate-refinement stopping tolerance on the angles.
pub const ANGLE_TOL: f64 = 1e-8;
/// Sweeps allowed in coordinate refinement before giving up.
const MAX_SWEEPS: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(argmax, max, evaluations)`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64, usize) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        evals += 1;
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // The bracket midpoint can lose to an interior probe by rounding.
    let (x, fx) =
        [(x1, f1), (x2, f2)].into_iter().fold(
            (x, fx),
            |best, (xi, fi)| if fi > best.1 { (xi, fi) } else { best },
        );
    (x, fx, evals + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimResult {
    pub best_angles: AngleSet,
    pub best_value: f64,
    /// Correlation evaluations spent (grid table plus refinement).
    pub evaluations: usize,
    pub grid_resolution: f64,
    /// Whether coordinate refinement improved on the best grid point.
    pub refined: bool,
}

pub fn grid_angle(k: usize) -> f64 {
    -PI + k as f64 * (2.0 * PI / GRID_POINTS as f64)
}

fn chsh_at(
    corr: &dyn Correlator,
    state: &SchmidtState,
    spec: &PairingSpec,
    a: &[f64; 4],
) -> Result<f64> {
    let e = |x: f64, y: f64| corr.correlation(state, spec, x, y).map(|c| c.value);
    Ok(e(a[0], a[2])? + e(a[1], a[2])? + e(a[0], a[3])? - e(a[1], a[3])?)
}

/// Grid search over `[−π, π)⁴` followed by coordinate refinement, using any
/// correlator.
///
/// Correlations are tabulated once per `(α, β)` grid pair. The CHSH value
/// separates as `f(α₁, α₂, β₁) + g(α₁, α₂, β₂)`, so for each `(α₁, α₂)` the
/// best `β₁` and `β₂` are picked independently; the first maximizer in
/// lexicographic `(α₁, α₂, β₁, β₂)` order wins ties.
pub fn maximize_chsh(
    state: &SchmidtState,
    spec: &PairingSpec,
    corr: &dyn Correlator,
) -> Result<OptimResult> {
    if state.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: spec.dim(),
        });
    }
    let n = GRID_POINTS;
    let table: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            corr.correlation(state, spec, grid_angle(idx / n), grid_angle(idx % n))
                .map(|c| c.value)
        })
        .collect::<Result<_>>()?;
    let t = |a: usize, b: usize| table[a * n + b];

    // One row per α₁, reduced afterwards in grid order.
    let rows: Vec<(f64, [usize; 4])> = (0..n)
        .into_par_iter()
        .map(|a1| {
            let mut best = (f64::NEG_INFINITY, [0; 4]);
            for a2 in 0..n {
                let (mut s1, mut b1) = (f64::NEG_INFINITY, 0);
                let (mut s2, mut b2) = (f64::NEG_INFINITY, 0);
                for b in 0..n {
                    let v1 = t(a1, b) + t(a2, b);
                    if v1 > s1 {
                        s1 = v1;
                        b1 = b;
                    }
                    let v2 = t(a1, b) - t(a2, b);
                    if v2 > s2 {
                        s2 = v2;
                        b2 = b;
                    }
                }
                if s1 + s2 > best.0 {
                    best = (s1 + s2, [a1, a2, b1, b2]);
                }
            }
            best
        })
        .collect();
    let (_, idx) = rows
        .into_iter()
        .fold((f64::NEG_INFINITY, [0; 4]), |acc, r| {
            if r.0 > acc.0 {
                r
            } else {
                acc
            }
        });

    let mut angles = idx.map(grid_angle);
    let mut value = chsh_at(corr, state, spec, &angles)?;
    let mut evaluations = n * n + 4;
    let start_value = value;

    // Coordinate ascent: each coordinate enters as a single sinusoid, so the
    // golden-section bracket of one grid cell either side holds its maximum
    // once the grid point is near the optimum.
    let h = 2.0 * PI / n as f64;
    for _ in 0..MAX_SWEEPS {
        let mut moved: f64 = 0.0;
        for k in 0..4 {
            let mut failure = None;
            let centre = angles[k];
            let (x, fx, ev) = golden_section_max(
                |x| {
                    let mut trial = angles;
                    trial[k] = x;
                    match chsh_at(corr, state, spec, &trial) {
                        Ok(v) => v,
                        Err(e) => {
                            failure = Some(e);
                            f64::NEG_INFINITY
                        }
                    }
                },
                centre - h,
                centre + h,
                ANGLE_TOL,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            evaluations += 4 * ev;
            if fx > value + 1e-14 {
                moved = moved.max((x - centre).abs());
                angles[k] = x;
                value = fx;
            }
        }
        if moved < ANGLE_TOL {
            break;
        }
    }

    Ok(OptimResult {
        best_angles: AngleSet::from(angles),
        best_value: value,
        evaluations,
        grid_resolution: h,
        refined: value > start_value,
    })
}

/// Angle optimization on the closed-form CHSH value.
pub fn optimize_angles(state: &SchmidtState, spec: &PairingSpec) -> Result<OptimResult> {
    maximize_chsh(state, spec, &ClosedForm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationSummary {
    pub dim: usize,
    pub pair_count: usize,
    pub trace: f64,
    pub max_chsh: f64,
    pub angles: AngleSet,
}

/// One summary per pair count `p = 0 … ⌊dim/2⌋` on the maximal state, using
/// the canonical layout.
pub fn enumerate_representations(dim: usize) -> Result<Vec<RepresentationSummary>> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    let state = maximal_state(dim)?;
    (0..=dim / 2)
        .map(|p| {
            let spec = canonical_pairing(dim, p)?;
            let opt = optimize_angles(&state, &spec)?;
            let expected = maximal_state_chsh(dim, p);
            if (opt.best_value - expected).abs() > 1e-7 {
                return Err(Error::Inconsistent(format!(
                    "optimizer reached {} for dim {dim}, p {p}; expected {expected}",
                    opt.best_value
                )));
            }
            Ok(RepresentationSummary {
                dim,
                pair_count: p,
                trace: (dim - 2 * p) as f64,
                max_chsh: opt.best_value,
                angles: opt.best_angles,
            })
        })
        .collect()
}

/// `best_value` may not pass this ceiling by more than the refinement slack.
pub fn within_ceiling(state: &SchmidtState, spec: &PairingSpec, value: f64) -> bool {
    value <= analytic_ceiling(state, spec) + 1e-7 && value <= TSIRELSON + 1e-9
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::{canonical_angles, DenseOracle};
    use crate::qstate::skewed_state;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx, evals) = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 1.0, -1.0, 2.0, 1e-10);
        // Value-based search resolves a quadratic peak only to ~√ε.
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-7);
        assert_abs_diff_eq!(fx, 1.0, epsilon = 1e-15);
        assert!(evals > 10);
    }

    #[test]
    fn grid_contains_canonical_angles() {
        let can = canonical_angles().to_array();
        for a in can {
            assert!((0..GRID_POINTS).any(|k| (grid_angle(k) - a).abs() < 1e-14));
        }
    }

    #[test]
    fn four_mode_optima() {
        let s = maximal_state(4).unwrap();
        let r = optimize_angles(&s, &canonical_pairing(4, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(r.best_value, TSIRELSON, epsilon = 1e-7);
        assert_abs_diff_eq!(r.best_angles.chsh_kernel(), TSIRELSON, epsilon = 1e-7);
        let r = optimize_angles(&s, &canonical_pairing(4, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(r.best_value, 1.0 + SQRT_2, epsilon = 1e-7);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn no_pairs_is_angle_independent() {
        let s = maximal_state(3).unwrap();
        let r = optimize_angles(&s, &canonical_pairing(3, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.best_value, 2.0, epsilon = 1e-14);
        assert!(!r.refined);
    }

    #[test]
    fn skewed_optimum_reaches_ceiling() {
        for &r in &[0.1, 0.5, 0.9] {
            let s = skewed_state(r).unwrap();
            let spec = PairingSpec::new(4, vec![(1, 2)]).unwrap();
            let opt = optimize_angles(&s, &spec).unwrap();
            assert_abs_diff_eq!(opt.best_value, analytic_ceiling(&s, &spec), epsilon = 1e-7);
            assert!(within_ceiling(&s, &spec, opt.best_value));
        }
    }

    #[test]
    fn oracle_and_closed_optimizers_agree() {
        let s = maximal_state(5).unwrap();
        let spec = canonical_pairing(5, 2).unwrap();
        let a = maximize_chsh(&s, &spec, &DenseOracle).unwrap();
        let b = optimize_angles(&s, &spec).unwrap();
        assert_abs_diff_eq!(a.best_value, b.best_value, epsilon = 1e-10);
    }

    #[test]
    fn deterministic_angles() {
        let s = maximal_state(4).unwrap();
        let spec = canonical_pairing(4, 2).unwrap();
        let a = optimize_angles(&s, &spec).unwrap();
        let b = optimize_angles(&s, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn six_mode_ladder() {
        let reps = enumerate_representations(6).unwrap();
        let values: Vec<f64> = reps.iter().map(|r| r.max_chsh).collect();
        assert_abs_diff_eq!(values[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(values[1], 2.276_142_374_915_398, epsilon = 1e-9);
        assert_abs_diff_eq!(values[2], 2.552_284_749_830_794, epsilon = 1e-9);
        assert_abs_diff_eq!(values[3], TSIRELSON, epsilon = 1e-9);
        let traces: Vec<f64> = reps.iter().map(|r| r.trace).collect();
        assert_eq!(traces, vec![6.0, 4.0, 2.0, 0.0]);
    }

    #[test]
    fn small_enumerations() {
        let reps = enumerate_representations(2).unwrap();
        assert_eq!(reps.len(), 2);
        assert_abs_diff_eq!(reps[1].max_chsh, TSIRELSON, epsilon = 1e-9);
        let reps = enumerate_representations(4).unwrap();
        assert_abs_diff_eq!(reps[1].max_chsh, 1.0 + SQRT_2, epsilon = 1e-9);
        assert!(enumerate_representations(1).is_err());
    }
}
