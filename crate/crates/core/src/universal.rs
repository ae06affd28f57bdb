//! Binary machine codes and the universal interpreter.
//!
//! Code layout, all integers via [`encode_uint`]:
//!
//! ```text
//! uint(states - 1)  start (⌈log₂ states⌉ bits)  rule × 3·states
//! rule := write move next
//! write := 0 (blank) | 10 (0) | 11 (1)     move := 0 (L) | 1 (R)
//! next := uint(0) for HALT | uint(i + 1) for state i
//! ```
//!
//! Rules appear in canonical `(state, symbol)` order. Every field is
//! self-delimiting, so the set of all codes is prefix-free and decoding
//! knows where a code ends without a terminator.

use std::fmt;

use thiserror::Error;

use crate::bits::BitString;
use crate::prefix::{decode_uint, encode_uint, BitSource, CodeError, Cursor};
use crate::tm::{self, Machine, Move, Next, Rule, RuleTable, RunError, RunLimits, RunOutcome, StateId, Symbol};

/// Decoding refuses machines with more states than this.
pub const MAX_CODE_STATES: u64 = 1 << 16;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MachineCode(BitString);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("truncated code: input ended after {0} bits")]
    Truncated(usize),
    #[error("dangling bits: code ends at bit {consumed} of {len}")]
    Dangling { consumed: usize, len: usize },
    #[error("state index {index} out of range for {states} states (bit {at})")]
    StateOutOfRange { index: u64, states: u64, at: usize },
    #[error("non-canonical integer field ending at bit {0}")]
    NonCanonical(usize),
    #[error("state count {0} exceeds the decoder limit")]
    TooManyStates(u64),
}

impl From<CodeError> for DecodeError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Truncated(at) => DecodeError::Truncated(at),
            CodeError::NonCanonical(at) | CodeError::Overflow(at) => DecodeError::NonCanonical(at),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UtmError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Run(#[from] RunError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeFormatError {
    #[error("packed code shorter than its 4-byte length prefix")]
    MissingLength,
    #[error("packed code declares {declared} bits but carries only {available}")]
    ShortPayload { declared: usize, available: usize },
    #[error(transparent)]
    Text(#[from] crate::bits::BitParseError),
}

/// Width of the start-state field.
pub(crate) fn start_width(states: u64) -> usize {
    if states <= 1 {
        0
    } else {
        (u64::BITS - (states - 1).leading_zeros()) as usize
    }
}

pub(crate) fn write_code(sym: Symbol) -> &'static [bool] {
    match sym {
        Symbol::Blank => &[false],
        Symbol::Zero => &[true, false],
        Symbol::One => &[true, true],
    }
}

pub(crate) fn next_index(next: Next) -> u64 {
    match next {
        Next::Halt => 0,
        Next::State(s) => s as u64 + 1,
    }
}

pub(crate) fn push_rule(out: &mut BitString, rule: Rule) {
    out.extend(write_code(rule.write).iter().copied());
    out.push(rule.mv == Move::Right);
    out.extend_from(&encode_uint(next_index(rule.next)));
}

pub fn encode_machine(machine: &Machine) -> MachineCode {
    let n = machine.num_states() as u64;
    let mut out = encode_uint(n - 1);
    out.extend_from(&BitString::from_uint(machine.start() as u64, start_width(n)));
    for &rule in machine.rules() {
        push_rule(&mut out, rule);
    }
    MachineCode(out)
}

fn read_bit(src: &mut impl BitSource) -> Result<bool, DecodeError> {
    src.next_bit().ok_or(DecodeError::Truncated(src.position()))
}

fn read_rule(src: &mut impl BitSource, states: u64) -> Result<Rule, DecodeError> {
    let write = if !read_bit(src)? {
        Symbol::Blank
    } else {
        Symbol::from_bit(read_bit(src)?)
    };
    let mv = if read_bit(src)? { Move::Right } else { Move::Left };
    let index = decode_uint(src)?;
    let next = match index {
        0 => Next::Halt,
        i if i <= states => Next::State((i - 1) as StateId),
        index => {
            return Err(DecodeError::StateOutOfRange {
                index,
                states,
                at: src.position(),
            })
        }
    };
    Ok(Rule::new(write, mv, next))
}

/// Reads exactly one code from a bit stream. The stream may continue past it.
pub fn decode_from(src: &mut impl BitSource) -> Result<Machine, DecodeError> {
    let states = decode_uint(src)?.saturating_add(1);
    if states > MAX_CODE_STATES {
        return Err(DecodeError::TooManyStates(states));
    }
    let mut start = 0u64;
    for _ in 0..start_width(states) {
        start = (start << 1) | read_bit(src)? as u64;
    }
    if start >= states {
        return Err(DecodeError::StateOutOfRange {
            index: start,
            states,
            at: src.position(),
        });
    }
    let mut rules = Vec::with_capacity(3 * states as usize);
    for _ in 0..3 * states {
        rules.push(read_rule(src, states)?);
    }
    Ok(Machine::new(states as usize, start as StateId, rules).expect("decoded fields are in range"))
}

/// Exact inverse of [`encode_machine`]; the whole input must be one code.
pub fn decode_machine(bits: &BitString) -> Result<Machine, DecodeError> {
    let mut cur = Cursor::new(bits);
    let m = decode_from(&mut cur)?;
    if cur.remaining() > 0 {
        return Err(DecodeError::Dangling {
            consumed: cur.position(),
            len: bits.len(),
        });
    }
    Ok(m)
}

impl MachineCode {
    /// Validates `bits` as a complete code.
    pub fn new(bits: BitString) -> Result<MachineCode, DecodeError> {
        decode_machine(&bits)?;
        Ok(MachineCode(bits))
    }

    /// Wraps bits already known to be a valid code.
    pub(crate) fn from_valid(bits: BitString) -> MachineCode {
        MachineCode(bits)
    }

    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn into_bits(self) -> BitString {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn decode(&self) -> Machine {
        decode_machine(&self.0).expect("MachineCode holds a valid code")
    }

    pub fn to_text(&self) -> String {
        self.0.to_string()
    }

    /// 4-byte big-endian bit count, then the bits packed MSB first.
    pub fn to_packed(&self) -> Vec<u8> {
        let mut out = (self.0.len() as u32).to_be_bytes().to_vec();
        out.extend(self.0.to_packed());
        out
    }

    pub fn from_packed(bytes: &[u8]) -> Result<BitString, CodeFormatError> {
        let (len, payload) = bytes
            .split_first_chunk::<4>()
            .ok_or(CodeFormatError::MissingLength)?;
        let len = u32::from_be_bytes(*len) as usize;
        BitString::from_packed(payload, len).ok_or(CodeFormatError::ShortPayload {
            declared: len,
            available: payload.len() * 8,
        })
    }

    /// Accepts either ASCII `0`/`1` text (surrounding whitespace ignored)
    /// or the packed form. Returns raw bits; validate with [`MachineCode::new`].
    pub fn parse_serialized(bytes: &[u8]) -> Result<BitString, CodeFormatError> {
        let text = std::str::from_utf8(bytes).ok().map(str::trim);
        match text {
            Some(t) if t.bytes().all(|b| b == b'0' || b == b'1') && !t.is_empty() => Ok(t.parse()?),
            Some("") if bytes.iter().all(|b| b.is_ascii_whitespace()) => Ok(BitString::new()),
            _ => Self::from_packed(bytes),
        }
    }
}

impl fmt::Display for MachineCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for MachineCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MachineCode({})", self.0)
    }
}

/// Rule table backed by the code itself: each lookup re-reads the rule's
/// fields from the code bits, the way a universal machine consults the
/// description on its tape.
pub struct CodeInterpreter {
    code: MachineCode,
    num_states: usize,
    start: StateId,
    offsets: Vec<usize>,
}

impl CodeInterpreter {
    pub fn new(code: MachineCode) -> CodeInterpreter {
        let mut cur = Cursor::new(code.bits());
        let states = decode_uint(&mut cur).expect("valid code") + 1;
        let mut start = 0u64;
        for _ in 0..start_width(states) {
            start = (start << 1) | cur.next_bit().expect("valid code") as u64;
        }
        let mut offsets = Vec::with_capacity(3 * states as usize);
        for _ in 0..3 * states {
            offsets.push(cur.position());
            read_rule(&mut cur, states).expect("valid code");
        }
        CodeInterpreter {
            code,
            num_states: states as usize,
            start: start as StateId,
            offsets,
        }
    }
}

struct OffsetCursor<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl BitSource for OffsetCursor<'_> {
    fn next_bit(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    fn position(&self) -> usize {
        self.pos
    }
}

impl RuleTable for CodeInterpreter {
    fn num_states(&self) -> usize {
        self.num_states
    }

    fn start(&self) -> StateId {
        self.start
    }

    fn rule(&self, state: StateId, read: Symbol) -> Rule {
        let mut cur = OffsetCursor {
            bits: self.code.bits(),
            pos: self.offsets[3 * state as usize + read.index()],
        };
        read_rule(&mut cur, self.num_states as u64).expect("offsets index valid rules")
    }
}

/// Simulates the machine described by `code` on `input`.
pub fn utm_run(code: &BitString, input: &BitString, budget: u64) -> Result<RunOutcome, UtmError> {
    let code = MachineCode::new(code.clone())?;
    Ok(utm_run_code(&code, input, RunLimits::new(budget))?)
}

pub fn utm_run_code(code: &MachineCode, input: &BitString, limits: RunLimits) -> Result<RunOutcome, RunError> {
    tm::run_table(CodeInterpreter::new(code.clone()), input, limits)
}
