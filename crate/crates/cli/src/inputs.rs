use clap::{Args, ValueEnum};

use bellrep::{
    canonical_angles, canonical_pairing, maximal_state, skewed_state, squeezed_state, AngleSet,
    PairingSpec, SchmidtState, Tail,
};

use crate::failure::{usage, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Maximal,
    Skewed,
    Squeezed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Oracle,
    #[value(name = "closed_form", alias = "closed-form")]
    ClosedForm,
    Both,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value = "maximal")]
    pub state: StateKind,

    /// Number of Schmidt modes (maximal state only).
    #[arg(long)]
    pub dim: Option<usize>,

    /// Weight of the last mode of the skewed state, in (0, 1].
    #[arg(long)]
    pub r: Option<f64>,

    /// Squeezing parameter of the squeezed state, in [0, 1).
    #[arg(long)]
    pub eta: Option<f64>,

    /// Pair count `p`, or explicit pairs such as `0:1,2:3`. Defaults to
    /// pairing every mode it can.
    #[arg(long)]
    pub pairs: Option<String>,
}

impl StateArgs {
    /// Builds the state and the pairing it is measured with. Squeezed states
    /// live on `cutoff` modes; a pairing that leaves some of them unpaired
    /// acts as the identity beyond the cutoff too.
    pub fn build(&self, cutoff: usize) -> Result<(SchmidtState, PairingSpec), Failure> {
        let state = match self.state {
            StateKind::Maximal => {
                self.reject(self.r, "--r")?;
                self.reject(self.eta, "--eta")?;
                let dim = self
                    .dim
                    .ok_or_else(|| usage("--state maximal needs --dim"))?;
                maximal_state(dim)?
            }
            StateKind::Skewed => {
                self.reject(self.dim, "--dim")?;
                self.reject(self.eta, "--eta")?;
                skewed_state(self.r.ok_or_else(|| usage("--state skewed needs --r"))?)?
            }
            StateKind::Squeezed => {
                self.reject(self.dim, "--dim")?;
                self.reject(self.r, "--r")?;
                let eta = self
                    .eta
                    .ok_or_else(|| usage("--state squeezed needs --eta"))?;
                squeezed_state(eta, cutoff)?
            }
        };
        let dim = state.dim();
        let mut spec = match &self.pairs {
            None => canonical_pairing(dim, dim / 2)?,
            Some(text) => parse_pairs(text, dim)?,
        };
        if self.state == StateKind::Squeezed && 2 * spec.pair_count() < dim {
            spec = spec.with_tail(Tail::Identity);
        }
        Ok((state, spec))
    }

    fn reject<T>(&self, value: Option<T>, flag: &str) -> Result<(), Failure> {
        match value {
            Some(_) => Err(usage(
                format!("{flag} does not apply to --state {:?}", self.state).to_lowercase(),
            )),
            None => Ok(()),
        }
    }
}

pub fn parse_pairs(text: &str, dim: usize) -> Result<PairingSpec, Failure> {
    let text = text.trim();
    if !text.contains(':') {
        let p: usize = text
            .parse()
            .map_err(|_| usage(format!("--pairs expects a count or i:j list, got `{text}`")))?;
        return Ok(canonical_pairing(dim, p)?);
    }
    let mut pairs = Vec::new();
    for item in text.split(',') {
        let (i, j) = item
            .split_once(':')
            .ok_or_else(|| usage(format!("bad pair `{item}`")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad mode index `{s}`")))
        };
        pairs.push((parse(i)?, parse(j)?));
    }
    Ok(PairingSpec::new(dim, pairs)?)
}

/// `canonical` or four comma-separated reals `α₁,α₂,β₁,β₂`.
pub fn parse_angles(text: &str) -> Result<AngleSet, Failure> {
    if text.trim() == "canonical" {
        return Ok(canonical_angles());
    }
    let values = parse_reals(text, "--angles")?;
    let arr: [f64; 4] = values
        .try_into()
        .map_err(|v: Vec<f64>| usage(format!("--angles needs 4 values, got {}", v.len())))?;
    let angles = AngleSet::from(arr);
    if !angles.is_finite() {
        return Err(usage("--angles must be finite"));
    }
    Ok(angles)
}

pub fn parse_reals(text: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{flag}: `{}` is not a number", s.trim())))
        })
        .collect()
}
