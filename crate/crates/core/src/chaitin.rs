//! Self-delimiting two-tape machines.
//!
//! The program tape is finite and read once, left to right. Its head starts
//! on a blank square left of the program and may advance one square per
//! step. The work tape is doubly infinite over `{0, 1}` and starts with the
//! input `q`, head on its first bit; unwritten cells read as `0`.
//!
//! `C(p, q)` is defined only when a rule targets `HALT` while the program
//! head is on the right-most square, i.e. after exactly `|p|` advances.
//! Advancing past the end, or halting before it, leaves `C(p, q)` undefined.
//! A halting run therefore never depends on bits beyond `p`, so no proper
//! extension of a halting program halts and halting sets are prefix-free.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitString;
use crate::prefix::{NotPrefixFree, PrefixFreeSet};
use crate::tm::{MachineError, Move, Next, Symbol, Tape, DEFAULT_HISTORY_CAP};

pub type StateId = crate::tm::StateId;

/// Symbol under the program head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProgramSymbol {
    /// The blank square left of the program, where the head starts.
    LeftBlank,
    Bit(bool),
}

impl ProgramSymbol {
    pub const ALL: [ProgramSymbol; 3] = [
        ProgramSymbol::LeftBlank,
        ProgramSymbol::Bit(false),
        ProgramSymbol::Bit(true),
    ];

    fn index(self) -> usize {
        match self {
            ProgramSymbol::LeftBlank => 0,
            ProgramSymbol::Bit(b) => 1 + b as usize,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            ProgramSymbol::LeftBlank => '_',
            ProgramSymbol::Bit(false) => '0',
            ProgramSymbol::Bit(true) => '1',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CmRule {
    pub advance: bool,
    pub write: bool,
    pub mv: Move,
    pub next: Next,
}

/// Rules are total over `states × {_, 0, 1} × {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChaitinMachine {
    num_states: usize,
    start: StateId,
    rules: Vec<CmRule>,
}

impl ChaitinMachine {
    pub fn new(num_states: usize, start: StateId, rules: Vec<CmRule>) -> Result<Self, MachineError> {
        if num_states == 0 {
            return Err(MachineError::NoStates);
        }
        if start as usize >= num_states {
            return Err(MachineError::BadStart(start));
        }
        if rules.len() != 6 * num_states {
            return Err(MachineError::RuleCount {
                expected: 6 * num_states,
                got: rules.len(),
            });
        }
        for (i, r) in rules.iter().enumerate() {
            if let Next::State(t) = r.next {
                if t as usize >= num_states {
                    return Err(MachineError::BadTarget {
                        state: (i / 6) as StateId,
                        read: Symbol::from_bit(i % 2 == 1),
                        target: t,
                    });
                }
            }
        }
        Ok(ChaitinMachine {
            num_states,
            start,
            rules,
        })
    }

    pub(crate) fn slot(state: StateId, prog: ProgramSymbol, work: bool) -> usize {
        6 * state as usize + 2 * prog.index() + work as usize
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn rule(&self, state: StateId, prog: ProgramSymbol, work: bool) -> CmRule {
        self.rules[Self::slot(state, prog, work)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UndefinedReason {
    /// A rule advanced the program head past the last program square.
    ProgramExhaustedEarly,
    /// A rule targeted `HALT` before the whole program was read.
    HaltedBeforeEnd,
    BudgetExceeded,
    /// A configuration (state, program head, head-relative work tape) recurred.
    ProvenNonHalting,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CmOutcome {
    Halted { output: BitString, steps: u64 },
    Undefined(UndefinedReason),
}

impl CmOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, CmOutcome::Halted { .. })
    }
}

impl fmt::Display for CmOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmOutcome::Halted { output, steps } => write!(f, "halted steps={steps} output={output}"),
            CmOutcome::Undefined(r) => {
                let why = match r {
                    UndefinedReason::ProgramExhaustedEarly => "program-exhausted",
                    UndefinedReason::HaltedBeforeEnd => "halted-before-end",
                    UndefinedReason::BudgetExceeded => "budget-exceeded",
                    UndefinedReason::ProvenNonHalting => "non-halting",
                };
                write!(f, "undefined reason={why}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("program length {0} exceeds the guard of {MAX_HALTING_SET_LEN}")]
    LengthGuard(usize),
    #[error("internal invariant failure: halting set {0}")]
    NotPrefixFree(#[from] NotPrefixFree),
}

/// Largest program length [`halting_set`] will enumerate.
pub const MAX_HALTING_SET_LEN: usize = 24;

pub fn run_cm(cm: &ChaitinMachine, p: &BitString, q: &BitString, budget: u64) -> Result<CmOutcome, CmError> {
    if budget == 0 {
        return Err(CmError::ZeroBudget);
    }
    let mut tape = Tape::with_input(q);
    let mut state = cm.start;
    let mut pos = 0usize;
    let mut history: HashMap<Vec<u8>, ()> = HashMap::new();
    let mut key = Vec::new();
    for steps in 1..=budget {
        tape.relative_key(state, &mut key);
        key.extend_from_slice(&(pos as u64).to_le_bytes());
        if history.contains_key(&key) {
            return Ok(CmOutcome::Undefined(UndefinedReason::ProvenNonHalting));
        }
        if history.len() < DEFAULT_HISTORY_CAP {
            history.insert(key.clone(), ());
        }

        let prog = if pos == 0 {
            ProgramSymbol::LeftBlank
        } else {
            ProgramSymbol::Bit(p[pos - 1])
        };
        let rule = cm.rule(state, prog, tape.read() == Symbol::One);
        tape.write(Symbol::from_bit(rule.write));
        tape.shift(rule.mv);
        if rule.advance {
            pos += 1;
            if pos > p.len() {
                return Ok(CmOutcome::Undefined(UndefinedReason::ProgramExhaustedEarly));
            }
        }
        match rule.next {
            Next::Halt if pos == p.len() => {
                return Ok(CmOutcome::Halted {
                    output: tape.output(),
                    steps,
                })
            }
            Next::Halt => return Ok(CmOutcome::Undefined(UndefinedReason::HaltedBeforeEnd)),
            Next::State(s) => state = s,
        }
    }
    Ok(CmOutcome::Undefined(UndefinedReason::BudgetExceeded))
}

/// Every program of length at most `max_len` that halts on empty input
/// within `budget` steps.
pub fn halting_set(cm: &ChaitinMachine, max_len: usize, budget: u64) -> Result<PrefixFreeSet, CmError> {
    if max_len > MAX_HALTING_SET_LEN {
        return Err(CmError::LengthGuard(max_len));
    }
    if budget == 0 {
        return Err(CmError::ZeroBudget);
    }
    let empty = BitString::new();
    let halting: Vec<BitString> = (0..=max_len)
        .flat_map(|len| (0..1u64 << len).map(move |v| (v, len)))
        .par_bridge()
        .filter_map(|(v, len)| {
            let p = BitString::from_uint(v, len);
            run_cm(cm, &p, &empty, budget)
                .ok()
                .filter(CmOutcome::is_halted)
                .map(|_| p)
        })
        .collect();
    Ok(PrefixFreeSet::new(halting)?)
}

/// Small machines used by tests, benchmarks and the CLI examples.
pub mod fixtures {
    use super::*;

    fn table(num_states: usize, f: impl Fn(StateId, ProgramSymbol, bool) -> CmRule) -> ChaitinMachine {
        let mut rules = Vec::with_capacity(6 * num_states);
        for s in 0..num_states as StateId {
            for prog in ProgramSymbol::ALL {
                for work in [false, true] {
                    rules.push(f(s, prog, work));
                }
            }
        }
        ChaitinMachine::new(num_states, 0, rules).expect("fixture is well formed")
    }

    /// Advances off the left blank, then halts on the first program bit.
    /// Halts exactly on the one-bit programs.
    pub fn advance_then_halt() -> ChaitinMachine {
        table(1, |_, prog, work| CmRule {
            advance: prog == ProgramSymbol::LeftBlank,
            write: work,
            mv: Move::Right,
            next: if prog == ProgramSymbol::LeftBlank {
                Next::State(0)
            } else {
                Next::Halt
            },
        })
    }

    /// Reads `1^k 0` and writes `1^k` after a leading marker; halts on the
    /// terminating `0`.
    pub fn unary_reader() -> ChaitinMachine {
        table(1, |_, prog, _| match prog {
            ProgramSymbol::LeftBlank => CmRule { advance: true, write: false, mv: Move::Right, next: Next::State(0) },
            ProgramSymbol::Bit(true) => CmRule { advance: true, write: true, mv: Move::Right, next: Next::State(0) },
            ProgramSymbol::Bit(false) => CmRule { advance: false, write: false, mv: Move::Left, next: Next::Halt },
        })
    }

    /// Copies program bits onto the work tape and halts on the first `11`.
    pub fn terminator_11() -> ChaitinMachine {
        // state 0: previous bit was not 1; state 1: previous bit was 1
        table(2, |s, prog, _| match (s, prog) {
            (_, ProgramSymbol::LeftBlank) => CmRule { advance: true, write: false, mv: Move::Right, next: Next::State(0) },
            (1, ProgramSymbol::Bit(true)) => CmRule { advance: false, write: true, mv: Move::Right, next: Next::Halt },
            (_, ProgramSymbol::Bit(b)) => CmRule {
                advance: true,
                write: b,
                mv: Move::Right,
                next: Next::State(b as StateId),
            },
        })
    }

    /// Never advances; bounces between two work cells.
    pub fn stationary() -> ChaitinMachine {
        table(2, |s, _, work| CmRule {
            advance: false,
            write: work,
            mv: if s == 0 { Move::Right } else { Move::Left },
            next: Next::State(1 - s),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::bits::bits;
    use crate::dyadic::DyadicRational;
    use proptest::prelude::*;

    fn run(cm: &ChaitinMachine, p: &str) -> CmOutcome {
        run_cm(cm, &bits(p), &bits(""), 1000).unwrap()
    }

    #[test]
    fn advance_then_halt_examples() {
        let cm = advance_then_halt();
        assert!(matches!(run(&cm, "1"), CmOutcome::Halted { steps: 2, .. }));
        assert_eq!(run(&cm, ""), CmOutcome::Undefined(UndefinedReason::ProgramExhaustedEarly));
        assert_eq!(run(&cm, "10"), CmOutcome::Undefined(UndefinedReason::HaltedBeforeEnd));
        assert_eq!(run_cm(&cm, &bits("1"), &bits(""), 0), Err(CmError::ZeroBudget));
    }

    #[test]
    fn unary_reader_extension_is_undefined() {
        let cm = unary_reader();
        assert_eq!(
            run(&cm, "10"),
            CmOutcome::Halted { output: bits("010"), steps: 3 }
        );
        assert_eq!(run(&cm, "100"), CmOutcome::Undefined(UndefinedReason::HaltedBeforeEnd));
        assert_eq!(run(&cm, "11"), CmOutcome::Undefined(UndefinedReason::ProgramExhaustedEarly));
    }

    #[test]
    fn input_lands_on_work_tape() {
        let cm = unary_reader();
        // both steps overwrite q with zeros
        assert_eq!(
            run_cm(&cm, &bits("0"), &bits("11"), 10).unwrap(),
            CmOutcome::Halted { output: bits("00"), steps: 2 }
        );
    }

    #[test]
    fn terminator_halting_set_matches_pattern() {
        let set = halting_set(&terminator_11(), 8, 200).unwrap();
        let expected: Vec<BitString> = (0..=8)
            .flat_map(BitString::all_of_length)
            .filter(|p| {
                let s = p.to_string();
                s.ends_with("11") && !s[..s.len() - 1].contains("11")
            })
            .collect();
        let mut expected_sorted = expected.clone();
        expected_sorted.sort();
        assert_eq!(set.members(), expected_sorted.as_slice());
        assert!(set.kraft_sum() <= DyadicRational::one());
    }

    #[test]
    fn stationary_machine_never_halts() {
        let cm = stationary();
        assert_eq!(run(&cm, "0"), CmOutcome::Undefined(UndefinedReason::ProvenNonHalting));
        assert!(halting_set(&cm, 6, 100).unwrap().is_empty());
    }

    #[test]
    fn guards() {
        assert_eq!(halting_set(&stationary(), 25, 10), Err(CmError::LengthGuard(25)));
        assert_eq!(halting_set(&stationary(), 2, 0), Err(CmError::ZeroBudget));
    }

    fn arb_cm() -> impl Strategy<Value = ChaitinMachine> {
        (1usize..=3).prop_flat_map(|n| {
            let rule = (any::<bool>(), any::<bool>(), any::<bool>(), 0..=n as StateId).prop_map(
                |(advance, write, right, nx)| CmRule {
                    advance,
                    write,
                    mv: if right { Move::Right } else { Move::Left },
                    next: if nx == 0 { Next::Halt } else { Next::State(nx - 1) },
                },
            );
            proptest::collection::vec(rule, 6 * n)
                .prop_map(move |rules| ChaitinMachine::new(n, 0, rules).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn halting_sets_are_prefix_free(cm in arb_cm()) {
            let set = halting_set(&cm, 10, 60).unwrap();
            prop_assert!(set.kraft_sum() <= DyadicRational::one());
        }

        #[test]
        fn extensions_of_halting_programs_are_undefined(cm in arb_cm()) {
            let empty = BitString::new();
            for p in (0..=6).flat_map(BitString::all_of_length) {
                if run_cm(&cm, &p, &empty, 60).unwrap().is_halted() {
                    for extra in (1..=3).flat_map(BitString::all_of_length) {
                        let out = run_cm(&cm, &p.concat(&extra), &empty, 600).unwrap();
                        prop_assert!(!out.is_halted());
                    }
                }
            }
        }
    }
}
