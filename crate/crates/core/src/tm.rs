//! Deterministic single-tape Turing machines and a budgeted execution engine.
//!
//! A run ends in one of three ways: the machine takes a rule whose target is
//! `HALT`, the engine proves it never halts (an exact configuration repeat or
//! a run-away into blank tape), or the step budget is exhausted. Outcomes are
//! relative to the budget and never a general halting decision.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bits::BitString;

/// Tape alphabet. The derived order `_ < 0 < 1` is the canonical rule order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Symbol {
    #[default]
    Blank,
    Zero,
    One,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Blank, Symbol::Zero, Symbol::One];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_bit(bit: bool) -> Symbol {
        if bit {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Symbol::Blank => '_',
            Symbol::Zero => '0',
            Symbol::One => '1',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
        }
    }
}

/// Index into a machine's state list.
pub type StateId = u32;

/// Target of a rule. `Halt < State(_)` in the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Next {
    Halt,
    State(StateId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub write: Symbol,
    pub mv: Move,
    pub next: Next,
}

impl Rule {
    pub const fn new(write: Symbol, mv: Move, next: Next) -> Rule {
        Rule { write, mv, next }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.write.glyph(), self.mv.glyph())?;
        match self.next {
            Next::Halt => write!(f, "H"),
            Next::State(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("a machine needs at least one state")]
    NoStates,
    #[error("start state {0} out of range")]
    BadStart(StateId),
    #[error("expected {expected} rules, got {got}")]
    RuleCount { expected: usize, got: usize },
    #[error("rule for state {state} on {read:?} targets unknown state {target}")]
    BadTarget {
        state: StateId,
        read: Symbol,
        target: StateId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("step budget must be at least 1")]
    ZeroBudget,
}

/// Read access to a total transition table. Implemented by [`Machine`] and by
/// the universal interpreter, which reads rules straight out of a machine code.
pub trait RuleTable {
    fn num_states(&self) -> usize;
    fn start(&self) -> StateId;
    fn rule(&self, state: StateId, read: Symbol) -> Rule;
}

/// A transition table that is total over `states × {_, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Machine {
    num_states: usize,
    start: StateId,
    /// Row-major: `rules[3 * state + symbol]`.
    rules: Vec<Rule>,
}

impl Machine {
    pub fn new(num_states: usize, start: StateId, rules: Vec<Rule>) -> Result<Machine, MachineError> {
        if num_states == 0 {
            return Err(MachineError::NoStates);
        }
        if start as usize >= num_states {
            return Err(MachineError::BadStart(start));
        }
        if rules.len() != 3 * num_states {
            return Err(MachineError::RuleCount {
                expected: 3 * num_states,
                got: rules.len(),
            });
        }
        for (i, r) in rules.iter().enumerate() {
            if let Next::State(t) = r.next {
                if t as usize >= num_states {
                    return Err(MachineError::BadTarget {
                        state: (i / 3) as StateId,
                        read: Symbol::ALL[i % 3],
                        target: t,
                    });
                }
            }
        }
        Ok(Machine {
            num_states,
            start,
            rules,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn rule(&self, state: StateId, read: Symbol) -> Rule {
        self.rules[3 * state as usize + read.index()]
    }

    /// Rules in canonical `(state, symbol)` order.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }
}

impl RuleTable for Machine {
    fn num_states(&self) -> usize {
        self.num_states
    }

    fn start(&self) -> StateId {
        self.start
    }

    fn rule(&self, state: StateId, read: Symbol) -> Rule {
        Machine::rule(self, state, read)
    }
}

impl<T: RuleTable + ?Sized> RuleTable for &T {
    fn num_states(&self) -> usize {
        (**self).num_states()
    }

    fn start(&self) -> StateId {
        (**self).start()
    }

    fn rule(&self, state: StateId, read: Symbol) -> Rule {
        (**self).rule(state, read)
    }
}

/// Doubly-infinite tape. Only the touched region is stored; everything else
/// reads as blank.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tape {
    cells: Vec<Symbol>,
    /// Position of `cells[0]`.
    origin: i64,
    head: i64,
}

impl Tape {
    pub fn new() -> Tape {
        Tape::default()
    }

    /// `input` written from position 0 with the head on position 0.
    pub fn with_input(input: &BitString) -> Tape {
        Tape {
            cells: input.iter().map(Symbol::from_bit).collect(),
            origin: 0,
            head: 0,
        }
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    pub fn read(&self) -> Symbol {
        self.get(self.head)
    }

    pub fn get(&self, pos: i64) -> Symbol {
        let i = pos - self.origin;
        if i < 0 || i as usize >= self.cells.len() {
            Symbol::Blank
        } else {
            self.cells[i as usize]
        }
    }

    pub fn set(&mut self, pos: i64, sym: Symbol) {
        if self.cells.is_empty() {
            if sym == Symbol::Blank {
                return;
            }
            self.origin = pos;
        }
        let mut i = pos - self.origin;
        if i < 0 {
            if sym == Symbol::Blank {
                return;
            }
            let grow = (-i) as usize;
            self.cells.splice(0..0, std::iter::repeat_n(Symbol::Blank, grow));
            self.origin = pos;
            i = 0;
        }
        let i = i as usize;
        if i >= self.cells.len() {
            if sym == Symbol::Blank {
                return;
            }
            self.cells.resize(i + 1, Symbol::Blank);
        }
        self.cells[i] = sym;
    }

    pub fn write(&mut self, sym: Symbol) {
        self.set(self.head, sym);
    }

    pub fn shift(&mut self, mv: Move) {
        self.head += mv.delta();
    }

    /// Leftmost and rightmost non-blank positions.
    pub fn nonblank_span(&self) -> Option<(i64, i64)> {
        let first = self.cells.iter().position(|s| *s != Symbol::Blank)?;
        let last = self.cells.iter().rposition(|s| *s != Symbol::Blank)?;
        Some((self.origin + first as i64, self.origin + last as i64))
    }

    /// Symbols between the leftmost and rightmost non-blank cells. Interior
    /// blanks, which only occur on machines that write `_`, read as `0`.
    pub fn output(&self) -> BitString {
        match self.nonblank_span() {
            None => BitString::new(),
            Some((lo, hi)) => (lo..=hi).map(|p| self.get(p) == Symbol::One).collect(),
        }
    }

    pub fn ones(&self) -> u64 {
        self.cells.iter().filter(|s| **s == Symbol::One).count() as u64
    }

    /// Whether every cell from the head onward in direction `dir`, head
    /// included, is blank.
    pub fn blank_beyond(&self, dir: Move) -> bool {
        match self.nonblank_span() {
            None => true,
            Some((lo, hi)) => match dir {
                Move::Right => self.head > hi,
                Move::Left => self.head < lo,
            },
        }
    }

    /// Tape contents relative to the head, suitable as a hash key. Two tapes
    /// with equal keys differ at most by a translation.
    pub(crate) fn relative_key(&self, state: StateId, out: &mut Vec<u8>) {
        out.clear();
        out.extend_from_slice(&state.to_le_bytes());
        match self.nonblank_span() {
            None => out.extend_from_slice(&0i64.to_le_bytes()),
            Some((lo, hi)) => {
                out.extend_from_slice(&(self.head - lo).to_le_bytes());
                let a = (lo - self.origin) as usize;
                let b = (hi - self.origin) as usize;
                out.extend(self.cells[a..=b].iter().map(|s| *s as u8));
            }
        }
    }
}

impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = match self.nonblank_span() {
            Some((lo, hi)) => (lo.min(self.head), hi.max(self.head)),
            None => (self.head, self.head),
        };
        for p in lo..=hi {
            if p == self.head {
                write!(f, "[{}]", self.get(p).glyph())?;
            } else {
                write!(f, "{}", self.get(p).glyph())?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub tape: Tape,
    pub state: StateId,
    pub steps: u64,
}

impl Configuration {
    pub fn initial(table: &impl RuleTable, input: &BitString) -> Configuration {
        Configuration {
            tape: Tape::with_input(input),
            state: table.start(),
            steps: 0,
        }
    }
}

/// Result of [`step`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stepped {
    Running(Configuration),
    /// The applied rule targeted `HALT`; carries the final configuration.
    Halted(Configuration),
}

/// Applies exactly one rule: write, move one cell, transition.
pub fn step(table: &impl RuleTable, config: &Configuration) -> Stepped {
    let mut next = config.clone();
    match step_in_place(table, &mut next) {
        Next::Halt => Stepped::Halted(next),
        Next::State(_) => Stepped::Running(next),
    }
}

fn step_in_place(table: &impl RuleTable, config: &mut Configuration) -> Next {
    let rule = table.rule(config.state, config.tape.read());
    config.tape.write(rule.write);
    config.tape.shift(rule.mv);
    config.steps += 1;
    if let Next::State(s) = rule.next {
        config.state = s;
    }
    rule.next
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// A head-relative configuration recurred after `period` steps.
    ExactCycle { period: u64 },
    /// The head sits in blank territory in a state whose chain of blank rules
    /// keeps moving outward and loops without halting.
    BlankRunaway,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::ExactCycle { period } => write!(f, "cycle:{period}"),
            Certificate::BlankRunaway => write!(f, "runaway"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halt {
    pub output: BitString,
    pub ones: u64,
    pub steps: u64,
    /// Distinct positions the head read a symbol from.
    pub cells_scanned: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RunOutcome {
    Halted(Halt),
    ProvenNonHalting(Certificate),
    BudgetExceeded { steps: u64 },
}

impl RunOutcome {
    pub fn halted(&self) -> Option<&Halt> {
        match self {
            RunOutcome::Halted(h) => Some(h),
            _ => None,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted(_))
    }
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Halted(h) => write!(
                f,
                "halted steps={} ones={} cells={} output={}",
                h.steps, h.ones, h.cells_scanned, h.output
            ),
            RunOutcome::ProvenNonHalting(c) => write!(f, "non-halting certificate={c}"),
            RunOutcome::BudgetExceeded { steps } => write!(f, "budget-exceeded steps={steps}"),
        }
    }
}

/// Default cap on stored configurations for cycle detection.
pub const DEFAULT_HISTORY_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunLimits {
    pub budget: u64,
    /// Configurations remembered for cycle detection. Past the cap, new
    /// configurations are no longer recorded.
    pub history_cap: usize,
}

impl RunLimits {
    pub fn new(budget: u64) -> RunLimits {
        RunLimits {
            budget,
            history_cap: DEFAULT_HISTORY_CAP,
        }
    }
}

/// Resumable execution of one machine. Advancing in several chunks gives the
/// same outcome as one call with the summed allowance, which is what the
/// dovetailed searches rely on.
pub struct Runner<R: RuleTable> {
    table: R,
    config: Configuration,
    runaway: Vec<Option<Move>>,
    history: HashMap<Box<[u8]>, u64>,
    history_cap: usize,
    key: Vec<u8>,
    checked: bool,
    lowest: i64,
    highest: i64,
    done: Option<RunOutcome>,
}

impl<R: RuleTable> Runner<R> {
    pub fn new(table: R, input: &BitString, history_cap: usize) -> Runner<R> {
        let runaway = runaway_directions(&table);
        let config = Configuration::initial(&table, input);
        Runner {
            table,
            config,
            runaway,
            history: HashMap::new(),
            history_cap,
            key: Vec::new(),
            checked: false,
            lowest: 0,
            highest: 0,
            done: None,
        }
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn steps(&self) -> u64 {
        self.config.steps
    }

    pub fn outcome(&self) -> Option<&RunOutcome> {
        self.done.as_ref()
    }

    /// Runs until the total step count reaches `limit` or the run resolves.
    /// Returns the outcome once the machine halts or is proven non-halting.
    pub fn advance_to(&mut self, limit: u64) -> Option<&RunOutcome> {
        while self.done.is_none() {
            if !self.checked {
                self.checked = true;
                if let Some(cert) = self.certify() {
                    self.done = Some(RunOutcome::ProvenNonHalting(cert));
                    break;
                }
            }
            if self.config.steps >= limit {
                break;
            }
            let pos = self.config.tape.head();
            self.lowest = self.lowest.min(pos);
            self.highest = self.highest.max(pos);
            self.checked = false;
            if step_in_place(&self.table, &mut self.config) == Next::Halt {
                let tape = &self.config.tape;
                self.done = Some(RunOutcome::Halted(Halt {
                    output: tape.output(),
                    ones: tape.ones(),
                    steps: self.config.steps,
                    cells_scanned: (self.highest - self.lowest + 1) as u64,
                }));
            }
        }
        self.done.as_ref()
    }

    /// Runs up to `limit` total steps and reports, including
    /// [`RunOutcome::BudgetExceeded`].
    pub fn finish(mut self, limit: u64) -> RunOutcome {
        match self.advance_to(limit) {
            Some(outcome) => outcome.clone(),
            None => RunOutcome::BudgetExceeded {
                steps: self.config.steps,
            },
        }
    }

    fn certify(&mut self) -> Option<Certificate> {
        let state = self.config.state;
        if let Some(dir) = self.runaway[state as usize] {
            if self.config.tape.blank_beyond(dir) {
                return Some(Certificate::BlankRunaway);
            }
        }
        if self.history_cap == 0 {
            return None;
        }
        self.config.tape.relative_key(state, &mut self.key);
        if let Some(&seen) = self.history.get(self.key.as_slice()) {
            return Some(Certificate::ExactCycle {
                period: self.config.steps - seen,
            });
        }
        if self.history.len() < self.history_cap {
            self.history
                .insert(self.key.clone().into_boxed_slice(), self.config.steps);
        }
        None
    }
}

/// For each state, the direction in which its chain of blank-reading rules
/// runs forever, if it does: every rule in the chain moves the same way and
/// the chain revisits a state before reaching `HALT`.
fn runaway_directions(table: &impl RuleTable) -> Vec<Option<Move>> {
    let n = table.num_states();
    (0..n as StateId)
        .map(|s| {
            let dir = table.rule(s, Symbol::Blank).mv;
            let mut seen = vec![false; n];
            let mut cur = s;
            loop {
                if seen[cur as usize] {
                    return Some(dir);
                }
                seen[cur as usize] = true;
                let rule = table.rule(cur, Symbol::Blank);
                if rule.mv != dir {
                    return None;
                }
                match rule.next {
                    Next::Halt => return None,
                    Next::State(t) => cur = t,
                }
            }
        })
        .collect()
}

/// Runs `table` on `input` with the head on position 0 in the start state.
pub fn run_table(table: impl RuleTable, input: &BitString, limits: RunLimits) -> Result<RunOutcome, RunError> {
    if limits.budget == 0 {
        return Err(RunError::ZeroBudget);
    }
    Ok(Runner::new(table, input, limits.history_cap).finish(limits.budget))
}

pub fn run(machine: &Machine, input: &BitString, budget: u64) -> Result<RunOutcome, RunError> {
    run_table(machine, input, RunLimits::new(budget))
}

pub fn run_with_limits(machine: &Machine, input: &BitString, limits: RunLimits) -> Result<RunOutcome, RunError> {
    run_table(machine, input, limits)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const fn r(write: Symbol, mv: Move, next: Next) -> Rule {
        Rule::new(write, mv, next)
    }

    /// Same rule for all three symbols.
    pub fn uniform(rule: Rule) -> Machine {
        Machine::new(1, 0, vec![rule; 3]).unwrap()
    }

    /// Writes 1 and halts on anything.
    pub fn halter() -> Machine {
        uniform(r(Symbol::One, Move::Right, Next::Halt))
    }

    /// Walks right over blanks forever.
    pub fn runaway() -> Machine {
        uniform(r(Symbol::Blank, Move::Right, Next::State(0)))
    }

    /// Sweeps right over ones and halts on the first blank.
    pub fn right_sweep() -> Machine {
        let stop = r(Symbol::Blank, Move::Right, Next::Halt);
        let go = r(Symbol::One, Move::Right, Next::State(0));
        Machine::new(1, 0, vec![stop, go, go]).unwrap()
    }

    /// Bounces between two cells without writing.
    pub fn oscillator() -> Machine {
        let a = r(Symbol::Blank, Move::Right, Next::State(1));
        let b = r(Symbol::Blank, Move::Left, Next::State(0));
        Machine::new(2, 0, vec![a, a, a, b, b, b]).unwrap()
    }
}
