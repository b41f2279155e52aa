//! Dichotomic Bell operators assembled from mode pairings.
//!
//! A pairing splits the basis `|0⟩ … |d-1⟩` into ordered two-mode pairs and
//! leftover singleton modes. On each pair `(i, j)` the operator is the 2×2
//! block
//!
//! ```text
//! M(α) = ⎡ 0      e^{iα} ⎤
//!        ⎣ e^{-iα}  0    ⎦
//! ```
//!
//! placed on rows/columns `i, j` (so `entry(i, j) = e^{iα}`), and it is the
//! identity on singletons. Its trace is the number of singletons, which is
//! what separates the representations of a given dimension.
//!
//! Matrices are written in the same orientation as the printed 4- and 6-mode
//! examples: the pair `(i, j)` reads "`|i⟩` goes to `e^{iα}|j⟩`" with the
//! phase sitting at `(i, j)`. The pseudospin operators below use the same
//! orientation, under which `u·s` with `u = (cos α, sin α, 0)` is exactly
//! `M(α)` on every block.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::check_cutoff;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for Hermiticity and `A² = 1` checks.
pub const DEFECT_TOL: f64 = 1e-12;

/// Traces of pairing operators are integers; this only absorbs float noise.
pub const TRACE_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn cis(angle: f64) -> C64 {
    C64::new(angle.cos(), angle.sin())
}

/// How an operator acts on modes beyond a truncation cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Not modelled. Contributions of discarded modes are only bounded.
    #[default]
    Truncated,
    /// Identity on every discarded mode (they behave as singletons).
    Identity,
}

impl Tail {
    fn is_truncated(&self) -> bool {
        *self == Tail::Truncated
    }
}

/// Disjoint ordered mode pairs inside a `dim`-mode space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PairingRepr")]
pub struct PairingSpec {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Tail::is_truncated")]
    tail: Tail,
}

#[derive(Deserialize)]
struct PairingRepr {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    #[serde(default)]
    tail: Tail,
}

impl TryFrom<PairingRepr> for PairingSpec {
    type Error = Error;

    fn try_from(r: PairingRepr) -> Result<Self> {
        Ok(PairingSpec::new(r.dim, r.pairs)?.with_tail(r.tail))
    }
}

impl PairingSpec {
    pub fn new(dim: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim, min: 1 });
        }
        if pairs.len() > dim / 2 {
            return Err(Error::TooManyPairs {
                pairs: pairs.len(),
                dim,
            });
        }
        let mut used = vec![false; dim];
        for &(i, j) in &pairs {
            if i == j {
                return Err(Error::InvalidPairing(format!(
                    "mode {i} paired with itself"
                )));
            }
            for m in [i, j] {
                if m >= dim {
                    return Err(Error::InvalidPairing(format!(
                        "mode {m} out of range for dimension {dim}"
                    )));
                }
                if used[m] {
                    return Err(Error::InvalidPairing(format!("mode {m} used twice")));
                }
                used[m] = true;
            }
        }
        Ok(PairingSpec {
            dim,
            pairs,
            tail: Tail::Truncated,
        })
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Modes not covered by any pair, in increasing order.
    pub fn singletons(&self) -> Vec<usize> {
        let mut used = vec![false; self.dim];
        for &(i, j) in &self.pairs {
            used[i] = true;
            used[j] = true;
        }
        (0..self.dim).filter(|&m| !used[m]).collect()
    }
}

/// Pairs `(0,1), (2,3), …, (2p-2, 2p-1)`; the remaining modes are singletons.
pub fn canonical_pairing(dim: usize, p: usize) -> Result<PairingSpec> {
    if dim == 0 {
        return Err(Error::InvalidDimension { dim, min: 1 });
    }
    if p > dim / 2 {
        return Err(Error::TooManyPairs { pairs: p, dim });
    }
    PairingSpec::new(dim, (0..p).map(|k| (2 * k, 2 * k + 1)).collect())
}

/// The four measurement angles `α₁, α₂` (A side) and `β₁, β₂` (B side).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct AngleSet {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl AngleSet {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Self {
        AngleSet {
            alpha1,
            alpha2,
            beta1,
            beta2,
        }
    }

    pub fn zero() -> Self {
        AngleSet::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|a| a.is_finite())
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
    }

    /// `cos(α₁+β₁) + cos(α₂+β₁) + cos(α₁+β₂) − cos(α₂+β₂)`.
    pub fn chsh_kernel(&self) -> f64 {
        (self.alpha1 + self.beta1).cos()
            + (self.alpha2 + self.beta1).cos()
            + (self.alpha1 + self.beta2).cos()
            - (self.alpha2 + self.beta2).cos()
    }
}

impl From<[f64; 4]> for AngleSet {
    fn from(a: [f64; 4]) -> Self {
        AngleSet::new(a[0], a[1], a[2], a[3])
    }
}

impl From<AngleSet> for [f64; 4] {
    fn from(a: AngleSet) -> Self {
        a.to_array()
    }
}

/// A dense operator on one factor of the bipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct BellOperator {
    matrix: CMatrix,
    trace_value: f64,
    tail: Tail,
}

impl BellOperator {
    /// Wraps an arbitrary square matrix. No dichotomic check is made here;
    /// see [`verify_bell_operator`].
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        let trace_value = matrix.trace().re;
        Ok(BellOperator {
            matrix,
            trace_value,
            tail: Tail::Truncated,
        })
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.trace_value
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Tail::is_truncated")]
    tail: Tail,
}

impl Serialize for BellOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let z = self.matrix[(r, c)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorRepr {
            dim,
            entries,
            tail: self.tail,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BellOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = OperatorRepr::deserialize(d)?;
        if r.entries.len() != r.dim * r.dim {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries for dimension {}, found {}",
                r.dim * r.dim,
                r.dim,
                r.entries.len()
            )));
        }
        let m = CMatrix::from_row_iterator(
            r.dim,
            r.dim,
            r.entries.iter().map(|[re, im]| C64::new(*re, *im)),
        );
        BellOperator::from_matrix(m)
            .map(|op| op.with_tail(r.tail))
            .map_err(serde::de::Error::custom)
    }
}

/// Assembles the pairing operator for a single angle.
pub fn build_operator(spec: &PairingSpec, angle: f64) -> BellOperator {
    let dim = spec.dim();
    let mut m = CMatrix::zeros(dim, dim);
    let phase = cis(angle);
    for &(i, j) in spec.pairs() {
        m[(i, j)] = phase;
        m[(j, i)] = phase.conj();
    }
    let singletons = spec.singletons();
    for &k in &singletons {
        m[(k, k)] = C64::new(1.0, 0.0);
    }
    BellOperator {
        matrix: m,
        trace_value: singletons.len() as f64,
        tail: spec.tail(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(Error::UnknownStrategy {
                kind: "axis",
                name: s.to_string(),
                available: "x, y, z".to_string(),
            }),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Pseudospin component on `cutoff` Fock modes, summed over the blocks
/// `(|2n⟩, |2n+1⟩)`:
///
/// * `s_x`: 1 at `(2n, 2n+1)` and `(2n+1, 2n)`
/// * `s_y`: `+i` at `(2n, 2n+1)`, `−i` at `(2n+1, 2n)`
/// * `s_z`: `−1` at `(2n, 2n)`, `+1` at `(2n+1, 2n+1)`
///
/// Blocks close within each pair, so an even cutoff leaves the algebra
/// `[s_x, s_y] = 2i s_z` (and cyclic) exact.
pub fn pseudospin(axis: Axis, cutoff: usize) -> Result<CMatrix> {
    check_cutoff(cutoff)?;
    let mut m = CMatrix::zeros(cutoff, cutoff);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    for n in 0..cutoff / 2 {
        let (even, odd) = (2 * n, 2 * n + 1);
        match axis {
            Axis::X => {
                m[(even, odd)] = one;
                m[(odd, even)] = one;
            }
            Axis::Y => {
                m[(even, odd)] = i;
                m[(odd, even)] = -i;
            }
            Axis::Z => {
                m[(even, even)] = -one;
                m[(odd, odd)] = one;
            }
        }
    }
    Ok(m)
}

/// `cos α · s_x + sin α · s_y`, i.e. the full-pairing operator `M(α)⊕M(α)⊕…`.
pub fn pseudospin_bell(angle: f64, cutoff: usize) -> Result<BellOperator> {
    let sx = pseudospin(Axis::X, cutoff)?;
    let sy = pseudospin(Axis::Y, cutoff)?;
    let m = sx * C64::new(angle.cos(), 0.0) + sy * C64::new(angle.sin(), 0.0);
    let mut op = BellOperator::from_matrix(m)?;
    // Only off-diagonal entries: the trace is zero identically.
    op.trace_value = 0.0;
    Ok(op)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub hermitian: bool,
    pub involutive: bool,
    pub trace: f64,
    pub max_hermiticity_defect: f64,
    pub max_involution_defect: f64,
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks `A = A†` and `A² = 1` in the max-entry norm.
pub fn verify_bell_operator(op: &BellOperator) -> VerificationReport {
    let m = op.matrix();
    let herm = max_abs(&(m - m.adjoint()));
    let square = m * m;
    let inv = max_abs(&(square - CMatrix::identity(op.dim(), op.dim())));
    VerificationReport {
        hermitian: herm < DEFECT_TOL,
        involutive: inv < DEFECT_TOL,
        trace: op.trace(),
        max_hermiticity_defect: herm,
        max_involution_defect: inv,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    Inequivalent,
    /// Equal traces are necessary for unitary equivalence but not sufficient.
    Inconclusive,
}

pub fn inequivalence_by_trace(a: &BellOperator, b: &BellOperator) -> Result<Equivalence> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if (a.trace() - b.trace()).abs() > TRACE_TOL {
        Ok(Equivalence::Inequivalent)
    } else {
        Ok(Equivalence::Inconclusive)
    }
}

/// `[X, Y] = XY − YX`.
pub fn commutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x * y - y * x
}

/// Largest entry of `[A ⊗ 1, 1 ⊗ B]` on the full `d² × d²` space.
///
/// Debug path; the dense Kronecker products grow as `d⁴`.
pub fn tensor_commutator_defect(a: &BellOperator, b: &BellOperator) -> f64 {
    let ia = CMatrix::identity(a.dim(), a.dim());
    let ib = CMatrix::identity(b.dim(), b.dim());
    let left = a.matrix().kronecker(&ib);
    let right = ia.kronecker(b.matrix());
    max_abs(&commutator(&left, &right))
}
