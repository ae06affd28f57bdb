//! Empirical time `t(N)` and space `s(N)` of a machine over an input family,
//! and power-law fits `value ≈ c · N^k` by least squares in log space.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitString;
use crate::tm::{self, Machine, RunOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("no input sizes given")]
    NoSizes,
    #[error("input sizes must be strictly increasing")]
    NotIncreasing,
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("the machine halted for none of the tested sizes")]
    NoHaltingSamples,
    #[error("a fit needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample at N = {n} has {field} = {value}; fits need N ≥ 1 and values ≥ 1")]
    NonPositive { n: u64, field: Field, value: u64 },
    #[error("unknown input family {0:?}; expected unary or binary-counter")]
    UnknownFamily(String),
}

type Generator = dyn Fn(u64) -> BitString + Send + Sync;

#[derive(Clone)]
pub struct InputFamily {
    name: String,
    generator: Arc<Generator>,
}

impl InputFamily {
    pub fn new(name: impl Into<String>, generator: impl Fn(u64) -> BitString + Send + Sync + 'static) -> InputFamily {
        InputFamily {
            name: name.into(),
            generator: Arc::new(generator),
        }
    }

    /// `N` ones.
    pub fn unary() -> InputFamily {
        InputFamily::new("unary", |n| BitString::repeat(true, n as usize))
    }

    /// Binary numeral of `N`.
    pub fn binary_counter() -> InputFamily {
        InputFamily::new("binary-counter", BitString::binary_numeral)
    }

    pub fn by_name(name: &str) -> Result<InputFamily, ProfileError> {
        match name {
            "unary" => Ok(InputFamily::unary()),
            "binary-counter" => Ok(InputFamily::binary_counter()),
            _ => Err(ProfileError::UnknownFamily(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input(&self, n: u64) -> BitString {
        (self.generator)(n)
    }
}

impl fmt::Debug for InputFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InputFamily").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalingSample {
    pub n: u64,
    pub t: u64,
    pub s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub family: String,
    pub samples: Vec<ScalingSample>,
    /// Sizes where the run did not halt within the budget.
    pub gaps: Vec<u64>,
}

impl Profile {
    /// `N,t,s` lines under a one-line header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,t,s\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{}\n", s.n, s.t, s.s));
        }
        out
    }
}

/// Runs the machine on `family(N)` for each size in parallel.
pub fn measure_scaling(machine: &Machine, family: &InputFamily, sizes: &[u64], budget: u64) -> Result<Profile, ProfileError> {
    if sizes.is_empty() {
        return Err(ProfileError::NoSizes);
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ProfileError::NotIncreasing);
    }
    if budget == 0 {
        return Err(ProfileError::ZeroBudget);
    }
    let outcomes: Vec<(u64, RunOutcome)> = sizes
        .par_iter()
        .map(|&n| (n, tm::run(machine, &family.input(n), budget).expect("budget checked")))
        .collect();
    let mut profile = Profile {
        family: family.name.clone(),
        samples: Vec::new(),
        gaps: Vec::new(),
    };
    for (n, outcome) in outcomes {
        match outcome {
            RunOutcome::Halted(h) => profile.samples.push(ScalingSample {
                n,
                t: h.steps,
                s: h.cells_scanned,
            }),
            _ => profile.gaps.push(n),
        }
    }
    if profile.samples.is_empty() {
        return Err(ProfileError::NoHaltingSamples);
    }
    Ok(profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Time,
    Space,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Time => "t",
            Field::Space => "s",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub k: f64,
    pub c: f64,
    /// Root-mean-square residual of `ln value` against the fitted line.
    pub residual: f64,
}

impl fmt::Display for PowerLawFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k = {:.6}\nc = {:.6}\nresidual = {:.3e}", self.k, self.c, self.residual)
    }
}

/// Unweighted least squares of `ln value = ln c + k ln N`.
pub fn fit_power_law(samples: &[ScalingSample], field: Field) -> Result<PowerLawFit, ProfileError> {
    if samples.len() < 3 {
        return Err(ProfileError::TooFewSamples(samples.len()));
    }
    let mut points = Vec::with_capacity(samples.len());
    for s in samples {
        let value = match field {
            Field::Time => s.t,
            Field::Space => s.s,
        };
        if s.n == 0 || value == 0 {
            return Err(ProfileError::NonPositive { n: s.n, field, value });
        }
        points.push(((s.n as f64).ln(), (value as f64).ln()));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    // a single distinct N carries no slope information
    let k = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let ln_c = my - k * mx;
    let residual = (points.iter().map(|p| (p.1 - ln_c - k * p.0).powi(2)).sum::<f64>() / m).sqrt();
    Ok(PowerLawFit {
        k,
        c: ln_c.exp(),
        residual,
    })
}
