//! Dovetailed schedule over the program space.
//!
//! Round `r` admits programs of length at most `r` and advances every live
//! program to `r` total steps. After `max(max_len, budget)` rounds each
//! program has been offered exactly its budget, so the outcomes coincide with
//! the length-major engine used by the estimators; this module exists to
//! check that equivalence and to stream results in discovery order.

use crate::bits::BitString;
use crate::tm::{RunOutcome, Runner, DEFAULT_HISTORY_CAP};
use crate::universal::CodeInterpreter;

use super::programs::map_programs;

/// A program outcome together with the round in which it was settled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settled {
    pub program: BitString,
    pub outcome: RunOutcome,
    pub round: u64,
}

/// Runs every program of length at most `max_len` under the dovetailed
/// schedule. Results are ordered by length, then lexicographically.
pub fn dovetail(max_len: usize, budget: u64) -> Vec<Settled> {
    let mut live: Vec<(BitString, Runner<CodeInterpreter>)> = Vec::new();
    let mut settled: Vec<Settled> = Vec::new();
    let mut admitted = 0usize;
    let rounds = budget.max(max_len as u64);
    for round in 1..=rounds {
        while admitted < max_len.min(round as usize) {
            admitted += 1;
            let fresh = map_programs(admitted, |code| Some(code.clone()));
            live.extend(fresh.into_iter().map(|code| {
                let bits = code.bits().clone();
                (bits, Runner::new(CodeInterpreter::new(code), &BitString::new(), DEFAULT_HISTORY_CAP))
            }));
        }
        let limit = round.min(budget);
        live.retain_mut(|(program, runner)| match runner.advance_to(limit) {
            Some(outcome) => {
                settled.push(Settled {
                    program: program.clone(),
                    outcome: outcome.clone(),
                    round,
                });
                false
            }
            None => true,
        });
    }
    settled.extend(live.into_iter().map(|(program, runner)| Settled {
        program,
        outcome: RunOutcome::BudgetExceeded { steps: runner.steps() },
        round: rounds,
    }));
    settled.sort_by(|a, b| (a.program.len(), &a.program).cmp(&(b.program.len(), &b.program)));
    settled
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ait::run_program;
    use crate::universal::MachineCode;

    #[test]
    fn matches_length_major_engine() {
        let budget = 40;
        let dovetailed = dovetail(24, budget);
        let direct: Vec<(BitString, RunOutcome)> = (0..=24)
            .flat_map(|len| map_programs(len, |c| Some((c.bits().clone(), run_program(c, budget)))))
            .collect();
        assert_eq!(dovetailed.len(), direct.len());
        for (d, (p, o)) in dovetailed.iter().zip(&direct) {
            assert_eq!((&d.program, &d.outcome), (p, o));
        }
    }

    #[test]
    fn halting_rounds_track_steps() {
        for s in dovetail(22, 30) {
            if let RunOutcome::Halted(h) = &s.outcome {
                assert!(s.round >= h.steps.max(s.program.len() as u64));
                assert!(MachineCode::new(s.program.clone()).is_ok());
            }
        }
    }
}
