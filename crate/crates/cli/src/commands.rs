use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use bellrep::bellops::{commutator, CMatrix, C64, DEFECT_TOL, TRACE_TOL};
use bellrep::chsh::{CLASSICAL_BOUND, VIOLATION_MARGIN};
use bellrep::entanglement::{
    entropy, entropy_closed_squeezed, entropy_tolerance, purity, purity_closed_squeezed,
    purity_tolerance, reduced_density,
};
use bellrep::optim::maximize_chsh;
use bellrep::qstate::check_eta;
use bellrep::reproduce::{reproduce, ClaimRow, ReproduceOptions};
use bellrep::{
    build_operator, canonical_pairing, chsh_value, correlator, enumerate_representations,
    maximal_state, pseudospin, pseudospin_bell, setups, squeezed_state, verify_bell_operator, Axis,
    BellOperator, ChshReport, DenseOracle, Method, OptimResult, PairingSpec, Tail,
    VerificationReport,
};

use crate::failure::{usage, Failure};
use crate::inputs::{parse_angles, parse_pairs, parse_reals, MethodChoice, StateArgs};
use crate::output::{csv_table, json, sig, Format};

pub struct Globals {
    pub format: Format,
    pub tol: f64,
    pub cutoff: usize,
    pub seed: u64,
}

/// Text for standard output, plus a failure to report after printing it.
pub struct Outcome {
    pub payload: String,
    pub deferred: Option<Failure>,
}

impl Outcome {
    fn ok(payload: String) -> Self {
        Outcome {
            payload,
            deferred: None,
        }
    }

    fn failing_if(payload: String, failures: Vec<String>) -> Self {
        let deferred = (!failures.is_empty()).then(|| Failure::Internal(failures.join("\n  ")));
        Outcome { payload, deferred }
    }
}

fn bool_str(b: bool) -> String {
    b.to_string()
}

pub fn reps(g: &Globals, dim: usize) -> Result<Outcome, Failure> {
    let rows = enumerate_representations(dim)?;
    let state = maximal_state(dim)?;
    let mut failures = Vec::new();
    for row in &rows {
        let spec = canonical_pairing(dim, row.pair_count)?;
        let oracle = chsh_value(&state, &spec, row.angles, &DenseOracle)?.value;
        if (oracle - row.max_chsh).abs() > g.tol {
            failures.push(format!(
                "p={}: oracle {oracle} vs closed form {}",
                row.pair_count, row.max_chsh
            ));
        }
    }
    let payload = match g.format {
        Format::Json => json(&rows)?,
        Format::Csv | Format::Native => csv_table(
            &["dim", "p", "trace", "max_chsh"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.dim.to_string(),
                        r.pair_count.to_string(),
                        sig(r.trace),
                        sig(r.max_chsh),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(Outcome::failing_if(payload, failures))
}

#[derive(Serialize)]
struct ChshBoth<'a> {
    value: f64,
    oracle: &'a ChshReport,
    closed_form: &'a ChshReport,
    difference: f64,
    tol: f64,
}

fn report_row(r: &ChshReport) -> Vec<String> {
    let mut row = vec![
        r.method.to_string(),
        sig(r.value),
        bool_str(r.violated),
        bool_str(r.saturates_tsirelson),
        sig(r.imag_residual),
    ];
    row.extend(r.angles.to_array().iter().map(|a| sig(*a)));
    row
}

const REPORT_HEADER: [&str; 9] = [
    "method",
    "value",
    "violated",
    "saturates_tsirelson",
    "imag_residual",
    "alpha1",
    "alpha2",
    "beta1",
    "beta2",
];

pub fn chsh(
    g: &Globals,
    state: &StateArgs,
    angles: &str,
    method: MethodChoice,
) -> Result<Outcome, Failure> {
    let (state, spec) = state.build(g.cutoff)?;
    let angles = parse_angles(angles)?;
    let single = match method {
        MethodChoice::Oracle => Some(Method::Oracle),
        MethodChoice::ClosedForm => Some(Method::ClosedForm),
        MethodChoice::Both => None,
    };
    if let Some(m) = single {
        let r = chsh_value(&state, &spec, angles, correlator(m))?;
        let payload = match g.format {
            Format::Csv => csv_table(&REPORT_HEADER, &[report_row(&r)])?,
            _ => json(&r)?,
        };
        return Ok(Outcome::ok(payload));
    }

    let o = chsh_value(&state, &spec, angles, correlator(Method::Oracle))?;
    let c = chsh_value(&state, &spec, angles, correlator(Method::ClosedForm))?;
    let difference = (o.value - c.value).abs();
    let payload = match g.format {
        Format::Csv => csv_table(&REPORT_HEADER, &[report_row(&o), report_row(&c)])?,
        _ => json(&ChshBoth {
            value: o.value,
            oracle: &o,
            closed_form: &c,
            difference,
            tol: g.tol,
        })?,
    };
    let mut failures = Vec::new();
    if difference > g.tol {
        failures.push(format!(
            "oracle {} and closed form {} differ by {difference:e} > {:e}",
            o.value, c.value, g.tol
        ));
    }
    Ok(Outcome::failing_if(payload, failures))
}

pub struct EtaGrid {
    pub etas: Option<String>,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl EtaGrid {
    fn values(&self) -> Result<Vec<f64>, Failure> {
        let grid = match &self.etas {
            Some(list) => parse_reals(list, "--etas")?,
            None => {
                if self.steps == 0 {
                    return Err(usage("--steps must be at least 1"));
                }
                if self.steps == 1 {
                    vec![self.start]
                } else {
                    let h = (self.stop - self.start) / (self.steps - 1) as f64;
                    (0..self.steps).map(|k| self.start + k as f64 * h).collect()
                }
            }
        };
        for &eta in &grid {
            check_eta(eta)?;
        }
        Ok(grid)
    }
}

#[derive(Serialize)]
struct SweepRow {
    eta: f64,
    closed_value: f64,
    oracle_value: f64,
    violated: bool,
    tail_mass: f64,
    /// `enter` / `exit` where the grid crosses into or out of the violation window.
    edge: Option<&'static str>,
    is_max: bool,
}

#[derive(Serialize)]
struct Sweep<'a> {
    mode: &'a str,
    cutoff: usize,
    window: (f64, f64),
    rows: Vec<SweepRow>,
}

pub fn sweep_eta(g: &Globals, mode: &str, grid: &EtaGrid) -> Result<Outcome, Failure> {
    let registry = setups();
    let setup = registry.get(&mode.replace('-', "_"))?;
    let etas = grid.values()?;
    let spec = setup.pairing(g.cutoff)?;
    let (lo, hi) = setup.violation_window();

    let mut rows = Vec::with_capacity(etas.len());
    let mut failures = Vec::new();
    let mut inside_before = false;
    for (k, &eta) in etas.iter().enumerate() {
        let closed = setup.chsh_closed(eta)?;
        let state = squeezed_state(eta, g.cutoff)?;
        let oracle = chsh_value(&state, &spec, bellrep::canonical_angles(), &DenseOracle)?.value;
        let allowance = match spec.tail() {
            Tail::Identity => g.tol,
            Tail::Truncated => g.tol + 4.0 * state.tail_mass(),
        };
        if (oracle - closed).abs() > allowance {
            failures.push(format!(
                "eta={eta}: oracle {oracle} vs closed form {closed}"
            ));
        }
        let inside = lo < eta && eta < hi;
        let edge = match (k > 0, inside_before, inside) {
            (_, false, true) => Some("enter"),
            (true, true, false) => Some("exit"),
            _ => None,
        };
        inside_before = inside;
        rows.push(SweepRow {
            eta,
            closed_value: closed,
            oracle_value: oracle,
            violated: closed > CLASSICAL_BOUND + VIOLATION_MARGIN,
            tail_mass: state.tail_mass(),
            edge,
            is_max: false,
        });
    }
    let argmax = rows
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |best, (k, r)| match best {
            Some((_, v)) if v >= r.closed_value => best,
            _ => Some((k, r.closed_value)),
        });
    if let Some((k, _)) = argmax {
        rows[k].is_max = true;
    }

    let payload = match g.format {
        Format::Json => json(&Sweep {
            mode: setup.name(),
            cutoff: g.cutoff,
            window: (lo, hi),
            rows,
        })?,
        _ => csv_table(
            &[
                "eta",
                "closed_value",
                "oracle_value",
                "violated",
                "tail_mass",
                "edge",
                "is_max",
            ],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        sig(r.eta),
                        sig(r.closed_value),
                        sig(r.oracle_value),
                        bool_str(r.violated),
                        sig(r.tail_mass),
                        r.edge.unwrap_or("").to_string(),
                        bool_str(r.is_max),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(Outcome::failing_if(payload, failures))
}

#[derive(Serialize)]
struct EntropyRow {
    eta: f64,
    cutoff: usize,
    tail_mass: f64,
    purity_closed: f64,
    purity_numeric: f64,
    purity_residual: f64,
    purity_tolerance: f64,
    entropy_closed: f64,
    entropy_numeric: f64,
    entropy_residual: f64,
    entropy_tolerance: f64,
}

pub fn entropy_cmd(g: &Globals, etas: &str) -> Result<Outcome, Failure> {
    let etas = parse_reals(etas, "--eta")?;
    let mut rows = Vec::with_capacity(etas.len());
    let mut failures = Vec::new();
    for eta in etas {
        let state = squeezed_state(eta, g.cutoff)?;
        let rho = reduced_density(&state);
        let tail = state.tail_mass();
        let row = EntropyRow {
            eta,
            cutoff: g.cutoff,
            tail_mass: tail,
            purity_closed: purity_closed_squeezed(eta)?,
            purity_numeric: purity(&rho),
            purity_residual: (purity(&rho) - purity_closed_squeezed(eta)?).abs(),
            purity_tolerance: purity_tolerance(tail),
            entropy_closed: entropy_closed_squeezed(eta)?,
            entropy_numeric: entropy(&rho),
            entropy_residual: (entropy(&rho) - entropy_closed_squeezed(eta)?).abs(),
            entropy_tolerance: entropy_tolerance(eta, g.cutoff, tail),
        };
        if row.purity_residual > row.purity_tolerance {
            failures.push(format!(
                "eta={eta}: purity residual {:e}",
                row.purity_residual
            ));
        }
        if row.entropy_residual > row.entropy_tolerance {
            failures.push(format!(
                "eta={eta}: entropy residual {:e}",
                row.entropy_residual
            ));
        }
        rows.push(row);
    }
    let payload = match g.format {
        Format::Csv => csv_table(
            &[
                "eta",
                "purity_closed",
                "purity_numeric",
                "entropy_closed",
                "entropy_numeric",
                "cutoff",
            ],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        sig(r.eta),
                        sig(r.purity_closed),
                        sig(r.purity_numeric),
                        sig(r.entropy_closed),
                        sig(r.entropy_numeric),
                        r.cutoff.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        _ if rows.len() == 1 => json(&rows[0])?,
        _ => json(&rows)?,
    };
    Ok(Outcome::failing_if(payload, failures))
}

#[derive(Serialize)]
struct AngleOptimum {
    optimum: OptimResult,
    ceiling: f64,
    oracle_value: Option<f64>,
    difference: Option<f64>,
}

#[derive(Serialize)]
struct EtaReport {
    #[serde(flatten)]
    optimum: bellrep::EtaOptimum,
    window: (f64, f64),
    oracle_value: Option<f64>,
    tail_mass: Option<f64>,
}

pub fn optimize(
    g: &Globals,
    state: &StateArgs,
    method: MethodChoice,
    eta_mode: Option<&str>,
) -> Result<Outcome, Failure> {
    if let Some(mode) = eta_mode {
        if state.dim.is_some() || state.r.is_some() || state.eta.is_some() || state.pairs.is_some()
        {
            return Err(usage("--eta-mode takes no state flags"));
        }
        return optimize_eta(g, mode, method);
    }
    let (state, spec) = state.build(g.cutoff)?;
    let search = match method {
        MethodChoice::Oracle => Method::Oracle,
        _ => Method::ClosedForm,
    };
    let optimum = maximize_chsh(&state, &spec, correlator(search))?;
    let ceiling = bellrep::chsh::analytic_ceiling(&state, &spec);
    let mut failures = Vec::new();
    let (oracle_value, difference) = if method == MethodChoice::Both {
        let v = chsh_value(&state, &spec, optimum.best_angles, &DenseOracle)?.value;
        let d = (v - optimum.best_value).abs();
        if d > g.tol {
            failures.push(format!(
                "oracle {v} vs closed form {} at the optimum",
                optimum.best_value
            ));
        }
        (Some(v), Some(d))
    } else {
        (None, None)
    };
    if optimum.best_value > ceiling + 1e-9 {
        failures.push(format!(
            "optimum {} above the ceiling {ceiling}",
            optimum.best_value
        ));
    }
    let payload = match g.format {
        Format::Csv => {
            let mut header = vec![
                "best_value",
                "ceiling",
                "alpha1",
                "alpha2",
                "beta1",
                "beta2",
                "evaluations",
            ];
            let mut row = vec![sig(optimum.best_value), sig(ceiling)];
            row.extend(optimum.best_angles.to_array().iter().map(|a| sig(*a)));
            row.push(optimum.evaluations.to_string());
            if let Some(v) = oracle_value {
                header.push("oracle_value");
                row.push(sig(v));
            }
            csv_table(&header, &[row])?
        }
        _ => json(&AngleOptimum {
            optimum,
            ceiling,
            oracle_value,
            difference,
        })?,
    };
    Ok(Outcome::failing_if(payload, failures))
}

fn optimize_eta(g: &Globals, mode: &str, method: MethodChoice) -> Result<Outcome, Failure> {
    let registry = setups();
    let setup = registry.get(&mode.replace('-', "_"))?;
    let optimum = setup.optimum();
    let mut failures = Vec::new();
    let mut oracle_value = None;
    let mut tail_mass = None;
    if method != MethodChoice::ClosedForm && !optimum.boundary_supremum {
        let state = squeezed_state(optimum.eta_star, g.cutoff)?;
        let spec = setup.pairing(g.cutoff)?;
        let v = chsh_value(&state, &spec, bellrep::canonical_angles(), &DenseOracle)?.value;
        let allowance = match spec.tail() {
            Tail::Identity => g.tol,
            Tail::Truncated => g.tol + 4.0 * state.tail_mass(),
        };
        if (v - optimum.value).abs() > allowance {
            failures.push(format!(
                "oracle {v} vs closed form {} at eta*",
                optimum.value
            ));
        }
        oracle_value = Some(v);
        tail_mass = Some(state.tail_mass());
    }
    let window = setup.violation_window();
    let payload = match g.format {
        Format::Csv => csv_table(
            &[
                "mode",
                "eta_star",
                "value",
                "boundary_supremum",
                "window_lower",
                "window_upper",
            ],
            &[vec![
                optimum.mode.to_string(),
                sig(optimum.eta_star),
                sig(optimum.value),
                bool_str(optimum.boundary_supremum),
                sig(window.0),
                sig(window.1),
            ]],
        )?,
        _ => json(&EtaReport {
            optimum,
            window,
            oracle_value,
            tail_mass,
        })?,
    };
    Ok(Outcome::failing_if(payload, failures))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OperatorKind {
    Pairing,
    Pseudospin,
}

pub struct VerifyArgs<'a> {
    pub kind: OperatorKind,
    pub dim: Option<usize>,
    pub pairs: Option<&'a str>,
    pub angle: f64,
    pub random: Option<usize>,
    pub emit_matrix: bool,
}

#[derive(Serialize)]
struct OperatorCheck {
    kind: &'static str,
    dim: usize,
    pair_count: usize,
    angle: f64,
    expected_trace: f64,
    report: VerificationReport,
    /// Pseudospin only: worst entry of `[s_i, s_j] − 2i s_k` over cyclic triples.
    #[serde(skip_serializing_if = "Option::is_none")]
    algebra_defect: Option<f64>,
    /// Pseudospin only: distance to the fully paired operator at the same angle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pairing_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    operator: Option<BellOperator>,
}

#[derive(Serialize)]
struct RandomCheck {
    samples: usize,
    seed: u64,
    failures: usize,
    max_hermiticity_defect: f64,
    max_involution_defect: f64,
    max_trace_error: f64,
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_passes(report: &VerificationReport, expected_trace: f64) -> bool {
    report.hermitian && report.involutive && (report.trace - expected_trace).abs() < TRACE_TOL
}

pub fn verify_op(g: &Globals, a: &VerifyArgs) -> Result<Outcome, Failure> {
    if !a.angle.is_finite() {
        return Err(usage("--angle must be finite"));
    }
    if let Some(n) = a.random {
        if a.kind != OperatorKind::Pairing {
            return Err(usage("--random samples pairing operators only"));
        }
        return verify_random(g, n);
    }
    let check = match a.kind {
        OperatorKind::Pairing => {
            let dim = a.dim.ok_or_else(|| usage("--kind pairing needs --dim"))?;
            let spec = match a.pairs {
                Some(text) => parse_pairs(text, dim)?,
                None => canonical_pairing(dim, dim / 2)?,
            };
            let op = build_operator(&spec, a.angle);
            OperatorCheck {
                kind: "pairing",
                dim,
                pair_count: spec.pair_count(),
                angle: a.angle,
                expected_trace: (dim - 2 * spec.pair_count()) as f64,
                report: verify_bell_operator(&op),
                algebra_defect: None,
                pairing_defect: None,
                operator: a.emit_matrix.then_some(op),
            }
        }
        OperatorKind::Pseudospin => {
            if a.dim.is_some() || a.pairs.is_some() {
                return Err(usage("pseudospin operators take their size from --cutoff"));
            }
            let op = pseudospin_bell(a.angle, g.cutoff)?;
            let [x, y, z] = [Axis::X, Axis::Y, Axis::Z].map(|ax| pseudospin(ax, g.cutoff));
            let (x, y, z) = (x?, y?, z?);
            let two_i = C64::new(0.0, 2.0);
            let algebra = [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)]
                .iter()
                .map(|(p, q, r)| max_abs(&(commutator(p, q) - r.map(|v| v * two_i))))
                .fold(0.0, f64::max);
            let full = build_operator(&canonical_pairing(g.cutoff, g.cutoff / 2)?, a.angle);
            let pairing_defect = max_abs(&(op.matrix() - full.matrix()));
            OperatorCheck {
                kind: "pseudospin",
                dim: g.cutoff,
                pair_count: g.cutoff / 2,
                angle: a.angle,
                expected_trace: 0.0,
                report: verify_bell_operator(&op),
                algebra_defect: Some(algebra),
                pairing_defect: Some(pairing_defect),
                operator: a.emit_matrix.then_some(op),
            }
        }
    };

    let mut failures = Vec::new();
    if !check_passes(&check.report, check.expected_trace) {
        failures.push(format!("operator check failed: {:?}", check.report));
    }
    for (name, defect) in [
        ("algebra", check.algebra_defect),
        ("pairing", check.pairing_defect),
    ] {
        if let Some(d) = defect.filter(|d| *d > DEFECT_TOL) {
            failures.push(format!("{name} defect {d:e}"));
        }
    }
    let payload = match g.format {
        Format::Csv => csv_table(
            &[
                "kind",
                "dim",
                "pair_count",
                "angle",
                "trace",
                "expected_trace",
                "hermitian",
                "involutive",
                "max_hermiticity_defect",
                "max_involution_defect",
            ],
            &[vec![
                check.kind.to_string(),
                check.dim.to_string(),
                check.pair_count.to_string(),
                sig(check.angle),
                sig(check.report.trace),
                sig(check.expected_trace),
                bool_str(check.report.hermitian),
                bool_str(check.report.involutive),
                sig(check.report.max_hermiticity_defect),
                sig(check.report.max_involution_defect),
            ]],
        )?,
        _ => json(&check)?,
    };
    Ok(Outcome::failing_if(payload, failures))
}

/// Random pairings of dimension 1 to 12 with random angles, from `--seed`.
fn verify_random(g: &Globals, samples: usize) -> Result<Outcome, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut summary = RandomCheck {
        samples,
        seed: g.seed,
        failures: 0,
        max_hermiticity_defect: 0.0,
        max_involution_defect: 0.0,
        max_trace_error: 0.0,
    };
    for _ in 0..samples {
        let dim = rng.random_range(1..=12usize);
        let mut modes: Vec<usize> = (0..dim).collect();
        modes.shuffle(&mut rng);
        let p = rng.random_range(0..=dim / 2);
        let pairs = (0..p).map(|k| (modes[2 * k], modes[2 * k + 1])).collect();
        let spec = PairingSpec::new(dim, pairs)?;
        let angle = rng.random_range(-PI..PI);
        let report = verify_bell_operator(&build_operator(&spec, angle));
        let expected = (dim - 2 * p) as f64;
        if !check_passes(&report, expected) {
            summary.failures += 1;
        }
        summary.max_hermiticity_defect = summary
            .max_hermiticity_defect
            .max(report.max_hermiticity_defect);
        summary.max_involution_defect = summary
            .max_involution_defect
            .max(report.max_involution_defect);
        summary.max_trace_error = summary.max_trace_error.max((report.trace - expected).abs());
    }
    let mut failures = Vec::new();
    if summary.failures > 0 {
        failures.push(format!(
            "{} of {samples} sampled operators failed",
            summary.failures
        ));
    }
    let payload = match g.format {
        Format::Csv => csv_table(
            &[
                "samples",
                "seed",
                "failures",
                "max_hermiticity_defect",
                "max_involution_defect",
                "max_trace_error",
            ],
            &[vec![
                samples.to_string(),
                g.seed.to_string(),
                summary.failures.to_string(),
                sig(summary.max_hermiticity_defect),
                sig(summary.max_involution_defect),
                sig(summary.max_trace_error),
            ]],
        )?,
        _ => json(&summary)?,
    };
    Ok(Outcome::failing_if(payload, failures))
}

fn relation_str(r: &ClaimRow) -> &'static str {
    match r.relation {
        bellrep::reproduce::Relation::Close => "close",
        bellrep::reproduce::Relation::Below => "below",
        bellrep::reproduce::Relation::Above => "above",
    }
}

fn status(r: &ClaimRow) -> &'static str {
    if r.pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn reproduce_table(g: &Globals, perturbation: f64) -> Result<Outcome, Failure> {
    if !perturbation.is_finite() {
        return Err(usage("perturbation must be finite"));
    }
    let rows = reproduce(&ReproduceOptions {
        cutoff: g.cutoff,
        angle_perturbation: perturbation,
    })?;
    let payload = match g.format {
        Format::Json => json(&rows)?,
        Format::Csv => csv_table(
            &[
                "id",
                "expected",
                "computed",
                "diff",
                "tol",
                "relation",
                "status",
                "description",
            ],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        sig(r.expected),
                        sig(r.computed),
                        sig(r.diff),
                        sig(r.tol),
                        relation_str(r).to_string(),
                        status(r).to_string(),
                        r.description.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Native => {
            let mut out = format!(
                "{:<18} {:>16} {:>16} {:>10} {:>8} {:<8} {:<6} {}\n",
                "id", "expected", "computed", "|diff|", "tol", "relation", "status", "description"
            );
            for r in &rows {
                out.push_str(&format!(
                    "{:<18} {:>16} {:>16} {:>10.2e} {:>8} {:<8} {:<6} {}\n",
                    r.id,
                    sig(r.expected),
                    sig(r.computed),
                    r.diff,
                    sig(r.tol),
                    relation_str(r),
                    status(r),
                    r.description
                ));
            }
            let passed = rows.iter().filter(|r| r.pass).count();
            out.push_str(&format!("{passed}/{} rows pass\n", rows.len()));
            out
        }
    };
    let failures = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            format!(
                "row {} ({}) failed: expected {}, computed {}",
                r.id, r.description, r.expected, r.computed
            )
        })
        .collect();
    Ok(Outcome::failing_if(payload, failures))
}
