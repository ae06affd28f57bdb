//! Budgeted estimators relative to the fixed universal model `U`.
//!
//! A program is a machine code ([`crate::universal`]); `U(p)` runs the coded
//! machine on an empty tape. Codes form a prefix-free set, so these sums are
//! Kraft-bounded:
//!
//! * [`h_upper`]: upper bound on the algorithmic complexity `H(x)`, the length
//!   of the shortest program found that outputs `x`.
//! * [`p_u_lower`]: exact lower bound on the universal probability `P_U(x)`.
//! * [`omega_lower`]: exact lower bound `Ω_N` on the halting probability.
//! * [`omega_montecarlo`]: fair-coin sampling of programs.
//!
//! Every search is capped by program length and by a per-program step
//! budget, so all values are bounds, never exact complexities.

pub mod dovetail;
pub mod programs;

use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitString;
use crate::dyadic::{sum_pow2_neg, DyadicRational};
use crate::prefix::{self_delimit_log, BitSource, PrefixFreeSet};
use crate::tm::{RunLimits, RunOutcome};
use crate::universal::{self, encode_machine, MachineCode};

/// Length guard for [`h_upper`], [`p_u_lower`] and [`randomness_deficiency`].
pub const MAX_SEARCH_LEN: usize = 64;
/// Length guard for [`omega_lower`] and the program-size Busy Beaver.
pub const MAX_OMEGA_LEN: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AitError {
    #[error("program length cap {max_len} exceeds the desk-scale guard of {limit}")]
    LengthGuard { max_len: usize, limit: usize },
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("at least one sample is required")]
    ZeroSamples,
}

fn check(max_len: usize, limit: usize, budget: u64) -> Result<(), AitError> {
    if max_len > limit {
        return Err(AitError::LengthGuard { max_len, limit });
    }
    if budget == 0 {
        return Err(AitError::ZeroBudget);
    }
    Ok(())
}

/// `U(p)`: the coded machine run on an empty input.
pub fn run_program(code: &MachineCode, budget: u64) -> RunOutcome {
    universal::utm_run_code(code, &BitString::new(), RunLimits::new(budget))
        .expect("budget checked by caller")
}

/// `U(p)` for arbitrary bits; `None` when `p` is not a program.
pub fn universal_run(p: &BitString, budget: u64) -> Option<RunOutcome> {
    let code = MachineCode::new(p.clone()).ok()?;
    Some(run_program(&code, budget.max(1)))
}

/// Halting programs of exactly `len` bits with their outputs, in
/// lexicographic program order.
pub fn halting_programs(len: usize, budget: u64) -> Vec<(BitString, BitString)> {
    programs::map_programs(len, |code| match run_program(code, budget) {
        RunOutcome::Halted(h) => Some((code.bits().clone(), h.output)),
        _ => None,
    })
}

fn producers(x: &BitString, len: usize, budget: u64) -> Vec<BitString> {
    programs::map_programs(len, |code| match run_program(code, budget) {
        RunOutcome::Halted(h) if &h.output == x => Some(code.bits().clone()),
        _ => None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityBound {
    pub target: BitString,
    /// Length of the shortest producing program found.
    pub bound: Option<usize>,
    /// Lexicographically smallest producer of that length.
    pub witness: Option<BitString>,
    pub max_len: usize,
    pub budget: u64,
}

impl fmt::Display for ComplexityBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target = {}", self.target)?;
        match (&self.bound, &self.witness) {
            (Some(b), Some(w)) => {
                writeln!(f, "bound = {b}")?;
                writeln!(f, "witness = {w}")?;
            }
            _ => {
                writeln!(f, "bound = none-found")?;
                writeln!(f, "witness = -")?;
            }
        }
        writeln!(f, "max_len = {}", self.max_len)?;
        write!(f, "budget = {}", self.budget)
    }
}

/// Shortest program of length at most `max_len` that outputs `x` within
/// `budget` steps. Lengths are searched in increasing order, so the cost is
/// governed by the bound found rather than by `max_len`.
pub fn h_upper(x: &BitString, max_len: usize, budget: u64) -> Result<ComplexityBound, AitError> {
    check(max_len, MAX_SEARCH_LEN, budget)?;
    let mut result = ComplexityBound {
        target: x.clone(),
        bound: None,
        witness: None,
        max_len,
        budget,
    };
    for len in 0..=max_len {
        if let Some(w) = producers(x, len, budget).into_iter().next() {
            result.bound = Some(len);
            result.witness = Some(w);
            break;
        }
    }
    Ok(result)
}

/// Exact `Σ 2^-|p|` over programs of length at most `max_len` that output
/// `x` within `budget` steps.
pub fn p_u_lower(x: &BitString, max_len: usize, budget: u64) -> Result<DyadicRational, AitError> {
    check(max_len, MAX_SEARCH_LEN, budget)?;
    let lens = (0..=max_len).flat_map(|len| std::iter::repeat_n(len, producers(x, len, budget).len()));
    Ok(sum_pow2_neg(lens))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("not a program: {0}")]
    NotAProgram(#[from] universal::DecodeError),
    #[error("the program did not halt: {0}")]
    DidNotHalt(RunOutcome),
    #[error("the program outputs {found}, not the target")]
    WrongOutput { found: BitString },
}

/// Upper bound from a supplied program, accepted only after `U(p) = x` is
/// checked by running it. Long runs usually need a small `history_cap`.
pub fn verify_witness(x: &BitString, p: &BitString, limits: RunLimits) -> Result<ComplexityBound, WitnessError> {
    let code = MachineCode::new(p.clone())?;
    let outcome = universal::utm_run_code(&code, &BitString::new(), limits).map_err(|_| WitnessError::DidNotHalt(RunOutcome::BudgetExceeded { steps: 0 }))?;
    match outcome {
        RunOutcome::Halted(h) if &h.output == x => Ok(ComplexityBound {
            target: x.clone(),
            bound: Some(p.len()),
            witness: Some(p.clone()),
            max_len: p.len(),
            budget: limits.budget,
        }),
        RunOutcome::Halted(h) => Err(WitnessError::WrongOutput { found: h.output }),
        other => Err(WitnessError::DidNotHalt(other)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaEstimate {
    pub value: DyadicRational,
    /// Programs strictly shorter than `n` bits were considered.
    pub n: usize,
    pub budget: u64,
    pub halted_programs: PrefixFreeSet,
}

impl fmt::Display for OmegaEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "omega_lower = {} (≈ {})", self.value, self.value.to_decimal(12))?;
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "budget = {}", self.budget)?;
        write!(f, "halted = {}", self.halted_programs.len())
    }
}

/// `Ω_N`: exact sum of `2^-|p|` over programs with `|p| < n` that halt
/// within `budget` steps.
pub fn omega_lower(n: usize, budget: u64) -> Result<OmegaEstimate, AitError> {
    check(n, MAX_OMEGA_LEN, budget)?;
    let halted: Vec<BitString> = (0..n)
        .flat_map(|len| halting_programs(len, budget).into_iter().map(|(p, _)| p))
        .collect();
    let value = sum_pow2_neg(halted.iter().map(BitString::len));
    let halted_programs = PrefixFreeSet::new(halted).expect("machine codes are prefix-free");
    Ok(OmegaEstimate {
        value,
        n,
        budget,
        halted_programs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloEstimate {
    pub halted: u64,
    pub samples: u64,
    pub length_cap: usize,
}

impl MonteCarloEstimate {
    pub fn estimate(&self) -> Ratio<u64> {
        Ratio::new(self.halted, self.samples)
    }

    pub fn to_f64(&self) -> f64 {
        self.halted as f64 / self.samples as f64
    }
}

impl fmt::Display for MonteCarloEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.estimate();
        writeln!(f, "estimate = {}/{} (≈ {:.6})", r.numer(), r.denom(), self.to_f64())?;
        writeln!(f, "halted = {}", self.halted)?;
        writeln!(f, "samples = {}", self.samples)?;
        write!(f, "length_cap = {}", self.length_cap)
    }
}

/// Samples drawn from one seeded stream before switching to the next.
/// Fixed so the result does not depend on the number of worker threads.
const SAMPLES_PER_STREAM: u64 = 1024;

struct CoinFlips {
    rng: ChaCha8Rng,
    drawn: usize,
    cap: usize,
}

impl BitSource for CoinFlips {
    fn next_bit(&mut self) -> Option<bool> {
        if self.drawn >= self.cap {
            return None;
        }
        self.drawn += 1;
        Some(self.rng.random())
    }

    fn position(&self) -> usize {
        self.drawn
    }
}

/// Draws programs one fair coin flip at a time until the code is complete
/// (or invalid, or longer than `length_cap`) and counts those that halt
/// within `budget` steps.
pub fn omega_montecarlo(samples: u64, budget: u64, seed: u64, length_cap: usize) -> Result<MonteCarloEstimate, AitError> {
    if samples == 0 {
        return Err(AitError::ZeroSamples);
    }
    if budget == 0 {
        return Err(AitError::ZeroBudget);
    }
    let streams = samples.div_ceil(SAMPLES_PER_STREAM);
    let halted = (0..streams)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut flips = CoinFlips { rng, drawn: 0, cap: length_cap };
            let count = SAMPLES_PER_STREAM.min(samples - stream * SAMPLES_PER_STREAM);
            (0..count)
                .filter(|_| {
                    flips.drawn = 0;
                    match universal::decode_from(&mut flips) {
                        Ok(m) => run_program(&encode_machine(&m), budget).is_halted(),
                        Err(_) => false,
                    }
                })
                .count() as u64
        })
        .sum();
    Ok(MonteCarloEstimate {
        halted,
        samples,
        length_cap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CompressibleBy(usize),
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CompressibleBy(k) => write!(f, "compressible by {k} bits"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyReport {
    pub length: usize,
    pub bound: ComplexityBound,
    pub verdict: Verdict,
}

impl fmt::Display for DeficiencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.bound)?;
        writeln!(f, "length = {}", self.length)?;
        write!(f, "verdict = {}", self.verdict)
    }
}

/// Compares the complexity upper bound with `|x|`. Only upper bounds are
/// computable, so a string is never reported as random.
pub fn randomness_deficiency(x: &BitString, max_len: usize, budget: u64) -> Result<DeficiencyReport, AitError> {
    let bound = h_upper(x, max_len, budget)?;
    Ok(deficiency_of(bound))
}

pub fn deficiency_of(bound: ComplexityBound) -> DeficiencyReport {
    let length = bound.target.len();
    let verdict = match bound.bound {
        Some(b) if b < length => Verdict::CompressibleBy(length - b),
        _ => Verdict::Inconclusive,
    };
    DeficiencyReport {
        length,
        bound,
        verdict,
    }
}

/// `⟨x, y⟩ = self_delimit_log(x) ++ y`.
pub fn pair(x: &BitString, y: &BitString) -> BitString {
    self_delimit_log(x).concat(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn guards_and_empty_searches() {
        assert_eq!(
            h_upper(&bits("1"), 65, 10),
            Err(AitError::LengthGuard { max_len: 65, limit: 64 })
        );
        assert_eq!(omega_lower(41, 10).unwrap_err(), AitError::LengthGuard { max_len: 41, limit: 40 });
        assert_eq!(h_upper(&bits("1"), 4, 0), Err(AitError::ZeroBudget));
        let none = h_upper(&bits("1"), 4, 100).unwrap();
        assert_eq!((none.bound, none.witness), (None, None));
        assert_eq!(p_u_lower(&bits("1"), 4, 100).unwrap(), DyadicRational::zero());
        let zero = omega_lower(0, 10).unwrap();
        assert_eq!(zero.value, DyadicRational::zero());
        assert!(zero.halted_programs.is_empty());
        assert_eq!(omega_montecarlo(0, 10, 0, 32), Err(AitError::ZeroSamples));
    }

    #[test]
    fn verdicts() {
        let r = randomness_deficiency(&bits("1"), 8, 50).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.verdict.to_string(), "inconclusive");
        let fake = ComplexityBound {
            target: BitString::repeat(false, 30),
            bound: Some(26),
            witness: Some(BitString::repeat(true, 26)),
            max_len: 30,
            budget: 1,
        };
        assert_eq!(deficiency_of(fake).verdict, Verdict::CompressibleBy(4));
    }

    #[test]
    fn montecarlo_is_deterministic_and_bounded() {
        let a = omega_montecarlo(3000, 50, 7, 24).unwrap();
        assert_eq!(a, omega_montecarlo(3000, 50, 7, 24).unwrap());
        assert!(a.halted <= a.samples);
        assert_ne!(a, omega_montecarlo(3000, 50, 8, 24).unwrap());
    }

    /// Independent path: every bit string, the decoder, and the direct
    /// simulator instead of the code interpreter.
    fn oracle(max_len: usize, budget: u64) -> Vec<(BitString, BitString)> {
        (0..=max_len)
            .flat_map(BitString::all_of_length)
            .filter_map(|p| {
                let m = crate::universal::decode_machine(&p).ok()?;
                match crate::tm::run(&m, &BitString::new(), budget).unwrap() {
                    RunOutcome::Halted(h) => Some((p, h.output)),
                    _ => None,
                }
            })
            .collect()
    }

    #[test]
    fn omega_matches_oracle() {
        let budget = 100;
        let halting = oracle(19, budget);
        let expected = sum_pow2_neg(halting.iter().map(|(p, _)| p.len()));
        let est = omega_lower(20, budget).unwrap();
        assert_eq!(est.value, expected);
        assert_eq!(est.halted_programs.kraft_sum(), expected);
        assert!(est.value < DyadicRational::one());
        assert!(est.value > DyadicRational::zero());
    }

    #[test]
    fn h_upper_and_p_u_match_oracle() {
        let budget = 200;
        let halting = oracle(20, budget);
        for x in ["", "0", "1", "00", "11"] {
            let x = bits(x);
            let producers: Vec<&BitString> = halting.iter().filter(|(_, o)| *o == x).map(|(p, _)| p).collect();
            let shortest = producers.iter().map(|p| p.len()).min();
            let witness = producers.iter().filter(|p| Some(p.len()) == shortest).min().map(|p| (*p).clone());
            let h = h_upper(&x, 20, budget).unwrap();
            assert_eq!((h.bound, h.witness.clone()), (shortest, witness), "x = {x}");
            if let Some(w) = &h.witness {
                assert_eq!(universal_run(w, budget).unwrap().halted().unwrap().output, x);
            }
            let p = p_u_lower(&x, 20, budget).unwrap();
            assert_eq!(p, sum_pow2_neg(producers.iter().map(|p| p.len())));
        }
    }

    #[test]
    fn h_upper_monotone_in_caps() {
        let x = bits("1");
        let small = h_upper(&x, 12, 5).unwrap().bound.unwrap_or(usize::MAX);
        let large = h_upper(&x, 64, 200).unwrap().bound.unwrap_or(usize::MAX);
        assert!(large <= small);
        let p_small = p_u_lower(&x, 16, 50).unwrap();
        let p_large = p_u_lower(&x, 20, 200).unwrap();
        assert!(p_small <= p_large);
    }

    #[test]
    fn pairing_is_self_delimiting() {
        assert_eq!(pair(&bits("1"), &bits("01")), bits("011101"));
    }
}
