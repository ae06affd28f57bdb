//! Second-stage non-halting provers for machines the runner leaves at
//! `BudgetExceeded`. Both are sound: a machine they certify never halts.

use std::collections::VecDeque;
use std::fmt;

use crate::bits::BitString;
use crate::tm::{step, Certificate, Configuration, Move, Next, RuleTable, StateId, Stepped, Symbol};

/// Why a machine never halts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Proof {
    Runner(Certificate),
    /// The head reached a new extreme in the same state, with the same cells
    /// behind it, as at an earlier extreme; the run repeats shifted by
    /// `shift` cells every `period` steps.
    TranslatedCycle { period: u64, shift: i64 },
    /// No rule that can fire targets `HALT`, closing over the states that
    /// can be entered and the symbols that can appear on the tape.
    HaltUnreachable,
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Runner(c) => write!(f, "{c}"),
            Proof::TranslatedCycle { period, shift } => write!(f, "translated:{period}:{shift}"),
            Proof::HaltUnreachable => write!(f, "unreachable"),
        }
    }
}

pub fn halt_reachable(table: &impl RuleTable, input: &BitString) -> bool {
    let n = table.num_states();
    let mut states = vec![false; n];
    let mut symbols = [true, false, false];
    for b in input.iter() {
        symbols[Symbol::from_bit(b).index()] = true;
    }
    states[table.start() as usize] = true;
    loop {
        let mut grew = false;
        for q in 0..n {
            for sym in Symbol::ALL {
                if !states[q] || !symbols[sym.index()] {
                    continue;
                }
                let rule = table.rule(q as StateId, sym);
                let Next::State(t) = rule.next else {
                    return true;
                };
                grew |= !std::mem::replace(&mut states[t as usize], true);
                grew |= !std::mem::replace(&mut symbols[rule.write.index()], true);
            }
        }
        if !grew {
            return false;
        }
    }
}

/// Snapshot at a new extreme: the cells from the head back across
/// everything reached so far.
struct Extreme {
    state: StateId,
    steps: u64,
    head: i64,
    cells: Vec<Symbol>,
}

/// Extremes remembered per direction.
const EXTREME_CAP: usize = 64;

struct Extremes {
    reach: (i64, i64),
    seen: [VecDeque<Extreme>; 2],
}

impl Extremes {
    /// Sound because the run between two extremes never leaves the compared
    /// window: it stays behind the later extreme and within everything
    /// reached so far, and all cells beyond the extreme are blank both times.
    fn check(&mut self, config: &Configuration, dir: Move) -> Option<(u64, i64)> {
        let tape = &config.tape;
        let head = tape.head();
        let span = tape.nonblank_span();
        let clear = match (span, dir) {
            (None, _) => true,
            (Some((lo, _)), Move::Left) => lo >= head,
            (Some((_, hi)), Move::Right) => hi <= head,
        };
        if !clear {
            return None;
        }
        let back = -dir.delta();
        let far = match (span, dir) {
            (None, Move::Left) => self.reach.1,
            (None, Move::Right) => self.reach.0,
            (Some((_, hi)), Move::Left) => hi.max(self.reach.1),
            (Some((lo, _)), Move::Right) => lo.min(self.reach.0),
        };
        let list = &mut self.seen[dir as usize];
        for e in list.iter().rev().filter(|e| e.state == config.state) {
            // everything reached since `e`, measured from where `e` stood
            let width = (far - e.head).unsigned_abs() as usize;
            let same = (0..=width).all(|k| {
                let then = e.cells.get(k).copied().unwrap_or(Symbol::Blank);
                then == tape.get(head + back * k as i64)
            });
            if same {
                return Some((config.steps - e.steps, head - e.head));
            }
        }
        if list.len() == EXTREME_CAP {
            list.pop_front();
        }
        list.push_back(Extreme {
            state: config.state,
            steps: config.steps,
            head,
            cells: (0..=(far - head).unsigned_abs() as usize)
                .map(|k| tape.get(head + back * k as i64))
                .collect(),
        });
        None
    }
}

/// Runs up to `budget` steps looking for a translated cycle; returns
/// `(period, shift)`.
pub fn translated_cycle(table: &impl RuleTable, input: &BitString, budget: u64) -> Option<(u64, i64)> {
    let mut config = Configuration::initial(table, input);
    let mut ext = Extremes {
        reach: (0, 0),
        seen: [VecDeque::new(), VecDeque::new()],
    };
    while config.steps < budget {
        config = match step(table, &config) {
            Stepped::Running(c) => c,
            Stepped::Halted(_) => return None,
        };
        let head = config.tape.head();
        let dir = if head < ext.reach.0 {
            ext.reach.0 = head;
            Move::Left
        } else if head > ext.reach.1 {
            ext.reach.1 = head;
            Move::Right
        } else {
            continue;
        };
        if let Some(found) = ext.check(&config, dir) {
            return Some(found);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{run, Machine, Rule, RunOutcome};

    fn machine(rules: [(Symbol, Move, Next); 6]) -> Machine {
        Machine::new(2, 0, rules.into_iter().map(|(w, m, n)| Rule::new(w, m, n)).collect()).unwrap()
    }

    use Move::{Left as L, Right as R};
    use Next::{Halt as H, State};
    use Symbol::{Blank as B, One as I, Zero as O};

    #[test]
    fn leftward_translated_cycle() {
        // A_ 0LB, A0 0LB, A1 0LH, B_ 1RA, B0 1RA, B1 0LA: drifts left forever
        let m = machine([(O, L, State(1)), (O, L, State(1)), (O, L, H), (I, R, State(0)), (I, R, State(0)), (O, L, State(0))]);
        let empty = BitString::new();
        assert!(halt_reachable(&m, &empty));
        assert!(matches!(run(&m, &empty, 1000).unwrap(), RunOutcome::BudgetExceeded { .. }));
        let (period, shift) = translated_cycle(&m, &empty, 1000).unwrap();
        assert!(period > 0 && shift < 0);
        assert!(matches!(run(&m, &empty, 10_000).unwrap(), RunOutcome::BudgetExceeded { .. }));
    }

    #[test]
    fn halting_machines_are_never_certified() {
        // walks right over 1s, halts on the first blank
        let m = machine([(I, R, H), (I, R, H), (I, R, State(0)), (B, R, H), (B, R, H), (B, R, H)]);
        let input: BitString = "1111".parse().unwrap();
        assert!(halt_reachable(&m, &input));
        assert_eq!(translated_cycle(&m, &input, 100), None);
    }

    #[test]
    fn unreachable_halt() {
        // the only HALT rule reads 1, which nothing ever writes
        let m = machine([(O, R, State(1)), (O, R, State(1)), (O, R, H), (O, L, State(0)), (O, L, State(0)), (O, L, State(0))]);
        assert!(!halt_reachable(&m, &BitString::new()));
        assert!(halt_reachable(&m, &"1".parse().unwrap()));
    }
}
