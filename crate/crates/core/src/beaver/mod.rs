//! Busy Beaver classes: exhaustive enumeration, halting classification and
//! the functions Σ (ones) and S (steps), plus the program-size variant Σ_N.
//!
//! The class of `n`-state machines has `2n` rule slots, one for each state
//! reading blank-or-0 and one for reading 1. Each slot writes 0 or 1, moves
//! L or R and continues in one of the `n` states or halts, which gives
//! `4(n+1)` options per slot and `(4n + 4)^(2n)` machines. Machines are
//! indexed in mixed radix, first slot most significant, so index order is
//! lexicographic order of the rule tuples.

pub mod db;
pub mod provers;

use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::ait::{self, programs::map_programs, AitError, MAX_OMEGA_LEN};
use crate::bits::BitString;
pub use provers::Proof;
use crate::tm::{self, Machine, Move, Next, Rule, RunOutcome, StateId, Symbol};

/// Largest class size accepted by [`MachineClass::new`].
pub const MAX_CLASS_STATES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BeaverError {
    #[error("{states}-state classes exceed the desk-scale guard of {MAX_CLASS_STATES}")]
    ClassGuard { states: usize },
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("index {index} outside a class of {size} machines")]
    IndexOutOfRange { index: u64, size: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineClass {
    states: usize,
}

impl MachineClass {
    pub fn new(states: usize) -> Result<MachineClass, BeaverError> {
        if states == 0 || states > MAX_CLASS_STATES {
            return Err(BeaverError::ClassGuard { states });
        }
        Ok(MachineClass { states })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    fn radix(&self) -> u64 {
        4 * self.states as u64 + 4
    }

    /// `(4n + 4)^(2n)`.
    pub fn size(&self) -> u64 {
        self.radix().pow(2 * self.states as u32)
    }

    fn slot_rule(&self, digit: u64) -> Rule {
        let targets = self.states as u64 + 1;
        let write = if digit / (2 * targets) == 0 { Symbol::Zero } else { Symbol::One };
        let mv = if (digit / targets).is_multiple_of(2) { Move::Left } else { Move::Right };
        let next = match digit % targets {
            0 => Next::Halt,
            t => Next::State((t - 1) as StateId),
        };
        Rule::new(write, mv, next)
    }

    /// Machine with the given index; the blank rule and the 0 rule of each
    /// state are the same slot.
    pub fn machine(&self, index: u64) -> Result<Machine, BeaverError> {
        let size = self.size();
        if index >= size {
            return Err(BeaverError::IndexOutOfRange { index, size });
        }
        let slots = 2 * self.states;
        let mut digits = vec![0u64; slots];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = rest % self.radix();
            rest /= self.radix();
        }
        let mut rules = Vec::with_capacity(3 * self.states);
        for s in 0..self.states {
            let zero = self.slot_rule(digits[2 * s]);
            rules.extend([zero, zero, self.slot_rule(digits[2 * s + 1])]);
        }
        Ok(Machine::new(self.states, 0, rules).expect("class machines are well formed"))
    }

    /// Every machine of the class in index order.
    pub fn iter(&self) -> impl Iterator<Item = Machine> + '_ {
        (0..self.size()).map(|i| self.machine(i).expect("index in range"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Halted { steps: u64, ones: u64 },
    ProvenNonHalting(Proof),
    Unresolved { budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub index: u64,
    pub verdict: Verdict,
}

/// Runs the machine on a blank tape. Runs that exhaust the budget go to the
/// second-stage provers; `Unresolved` means those failed too.
pub fn classify(machine: &Machine, budget: u64) -> Result<Verdict, BeaverError> {
    let blank = BitString::new();
    Ok(match tm::run(machine, &blank, budget).map_err(|_| BeaverError::ZeroBudget)? {
        RunOutcome::Halted(h) => Verdict::Halted {
            steps: h.steps,
            ones: h.ones,
        },
        RunOutcome::ProvenNonHalting(c) => Verdict::ProvenNonHalting(Proof::Runner(c)),
        RunOutcome::BudgetExceeded { .. } => {
            if !provers::halt_reachable(machine, &blank) {
                Verdict::ProvenNonHalting(Proof::HaltUnreachable)
            } else if let Some((period, shift)) = provers::translated_cycle(machine, &blank, budget) {
                Verdict::ProvenNonHalting(Proof::TranslatedCycle { period, shift })
            } else {
                Verdict::Unresolved { budget }
            }
        }
    })
}

/// Classifies a contiguous index range in parallel; records come back in
/// index order.
pub fn classify_range(class: MachineClass, range: Range<u64>, budget: u64) -> Result<Vec<ClassificationRecord>, BeaverError> {
    if budget == 0 {
        return Err(BeaverError::ZeroBudget);
    }
    if range.end > class.size() {
        return Err(BeaverError::IndexOutOfRange {
            index: range.end - 1,
            size: class.size(),
        });
    }
    Ok(range
        .into_par_iter()
        .map(|index| ClassificationRecord {
            index,
            verdict: classify(&class.machine(index).expect("index in range"), budget).expect("budget checked"),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeaverReport {
    pub states: usize,
    pub budget: u64,
    pub machines: u64,
    pub halted: u64,
    pub proven_non_halting: u64,
    pub unresolved: u64,
    /// Maximum ones over halted machines.
    pub sigma_ones: u64,
    /// Maximum steps over halted machines.
    pub s_steps: u64,
    pub ones_champions: Vec<u64>,
    pub steps_champions: Vec<u64>,
}

impl BeaverReport {
    pub fn from_records<'a>(states: usize, budget: u64, records: impl IntoIterator<Item = &'a ClassificationRecord>) -> BeaverReport {
        let mut r = BeaverReport {
            states,
            budget,
            machines: 0,
            halted: 0,
            proven_non_halting: 0,
            unresolved: 0,
            sigma_ones: 0,
            s_steps: 0,
            ones_champions: Vec::new(),
            steps_champions: Vec::new(),
        };
        for rec in records {
            r.machines += 1;
            match rec.verdict {
                Verdict::Halted { steps, ones } => {
                    r.halted += 1;
                    champion(&mut r.sigma_ones, &mut r.ones_champions, ones, rec.index);
                    champion(&mut r.s_steps, &mut r.steps_champions, steps, rec.index);
                }
                Verdict::ProvenNonHalting(_) => r.proven_non_halting += 1,
                Verdict::Unresolved { .. } => r.unresolved += 1,
            }
        }
        r
    }

    /// Maxima are final only when every machine was resolved.
    pub fn is_final(&self) -> bool {
        self.unresolved == 0
    }
}

fn champion(best: &mut u64, holders: &mut Vec<u64>, value: u64, index: u64) {
    if holders.is_empty() || value > *best {
        *best = value;
        holders.clear();
    }
    if value == *best {
        holders.push(index);
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BeaverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qualifier = if self.is_final() { "" } else { "≥ " };
        writeln!(f, "states = {}", self.states)?;
        writeln!(f, "budget = {}", self.budget)?;
        writeln!(f, "machines = {}", self.machines)?;
        writeln!(f, "halted = {}", self.halted)?;
        writeln!(f, "proven_non_halting = {}", self.proven_non_halting)?;
        writeln!(f, "unresolved = {}", self.unresolved)?;
        writeln!(f, "Σ = {qualifier}{}", self.sigma_ones)?;
        writeln!(f, "S = {qualifier}{}", self.s_steps)?;
        writeln!(f, "ones_champions = {}", join(&self.ones_champions))?;
        writeln!(f, "steps_champions = {}", join(&self.steps_champions))?;
        write!(f, "status = {}", if self.is_final() { "final" } else { "lower bound" })
    }
}

/// Full classification of the `n`-state class.
pub fn sigma(states: usize, budget: u64) -> Result<BeaverReport, BeaverError> {
    let class = MachineClass::new(states)?;
    let records = classify_range(class, 0..class.size(), budget)?;
    Ok(BeaverReport::from_records(states, budget, &records))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramSigma {
    pub value: BigUint,
    /// Shortest, then lexicographically smallest, program reaching `value`.
    pub witness: BitString,
}

/// Value of a binary numeral; the empty string names 0.
pub fn numeral_value(x: &BitString) -> BigUint {
    x.iter().fold(BigUint::ZERO, |acc, b| (acc << 1u8) + u8::from(b))
}

/// Largest integer whose binary numeral is output by a program of at most
/// `max_len` bits within `budget` steps; `None` if no program halts.
pub fn sigma_program(max_len: usize, budget: u64) -> Result<Option<ProgramSigma>, AitError> {
    if max_len > MAX_OMEGA_LEN {
        return Err(AitError::LengthGuard {
            max_len,
            limit: MAX_OMEGA_LEN,
        });
    }
    if budget == 0 {
        return Err(AitError::ZeroBudget);
    }
    let mut best: Option<ProgramSigma> = None;
    for len in 0..=max_len {
        let found = map_programs(len, |code| match ait::run_program(code, budget) {
            RunOutcome::Halted(h) => Some((numeral_value(&h.output), code.bits().clone())),
            _ => None,
        });
        for (value, witness) in found {
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(ProgramSigma { value, witness });
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::universal::{decode_machine, MachineCode};

    #[test]
    fn class_sizes_and_guard() {
        assert_eq!(MachineClass::new(1).unwrap().iter().count(), 64);
        assert_eq!(MachineClass::new(2).unwrap().size(), 20736);
        assert_eq!(MachineClass::new(3).unwrap().size(), 16u64.pow(6));
        assert_eq!(MachineClass::new(5), Err(BeaverError::ClassGuard { states: 5 }));
        assert_eq!(MachineClass::new(0), Err(BeaverError::ClassGuard { states: 0 }));
        let c = MachineClass::new(1).unwrap();
        assert!(matches!(c.machine(64), Err(BeaverError::IndexOutOfRange { .. })));
    }

    #[test]
    fn enumeration_is_lexicographic_and_distinct() {
        let c = MachineClass::new(1).unwrap();
        let first = c.machine(0).unwrap();
        assert_eq!(first.rule(0, Symbol::Blank), Rule::new(Symbol::Zero, Move::Left, Next::Halt));
        let last = c.machine(63).unwrap();
        assert_eq!(last.rule(0, Symbol::One), Rule::new(Symbol::One, Move::Right, Next::State(0)));
        let tuples: Vec<Vec<(usize, usize, u32)>> = c
            .iter()
            .map(|m| {
                [Symbol::Zero, Symbol::One]
                    .into_iter()
                    .map(|s| {
                        let r = m.rule(0, s);
                        let next = match r.next {
                            Next::Halt => 0,
                            Next::State(t) => t + 1,
                        };
                        (r.write.index(), r.mv as usize, next)
                    })
                    .collect()
            })
            .collect();
        assert!(tuples.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn classify_examples() {
        let c = MachineClass::new(1).unwrap();
        // slot digit 4 = write 1, move L, HALT; index 4*8 puts it on the blank slot
        let halter = c.machine(4 * 8).unwrap();
        assert_eq!(classify(&halter, 10).unwrap(), Verdict::Halted { steps: 1, ones: 1 });
        let runaway = c.machine(3 * 8).unwrap();
        assert_eq!(
            classify(&runaway, 10).unwrap(),
            Verdict::ProvenNonHalting(Proof::Runner(tm::Certificate::BlankRunaway))
        );
        assert_eq!(classify(&halter, 0), Err(BeaverError::ZeroBudget));
    }

    #[test]
    fn sigma_one() {
        let r = sigma(1, 100).unwrap();
        assert_eq!((r.sigma_ones, r.s_steps, r.unresolved, r.machines), (1, 1, 0, 64));
        assert!(r.is_final());
    }

    #[test]
    fn lower_bound_label() {
        let recs = [
            ClassificationRecord {
                index: 0,
                verdict: Verdict::Halted { steps: 3, ones: 2 },
            },
            ClassificationRecord {
                index: 1,
                verdict: Verdict::Unresolved { budget: 5 },
            },
        ];
        let r = BeaverReport::from_records(1, 5, &recs);
        assert!(!r.is_final());
        let text = r.to_string();
        assert!(text.contains("Σ = ≥ 2") && text.ends_with("status = lower bound"));
    }

    #[test]
    fn sigma_program_matches_oracle() {
        assert_eq!(sigma_program(9, 50).unwrap(), None);
        assert!(sigma_program(41, 50).is_err());
        let budget = 60;
        let mut best: Option<(BigUint, BitString)> = None;
        for p in (0..=24).flat_map(BitString::all_of_length) {
            let Ok(m) = decode_machine(&p) else { continue };
            if let RunOutcome::Halted(h) = tm::run(&m, &BitString::new(), budget).unwrap() {
                let v = numeral_value(&h.output);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, p));
                }
            }
        }
        let got = sigma_program(24, budget).unwrap().unwrap();
        let (v, w) = best.unwrap();
        assert_eq!((got.value, got.witness.clone()), (v, w));
        assert!(MachineCode::new(got.witness).is_ok());
        let smaller = sigma_program(20, budget).unwrap().unwrap();
        assert!(smaller.value <= sigma_program(24, budget).unwrap().unwrap().value);
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral_value(&bits("")), BigUint::ZERO);
        assert_eq!(numeral_value(&bits("0110")), BigUint::from(6u8));
    }
}
