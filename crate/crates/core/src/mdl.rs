//! Machine-description language (`.mdl`).
//!
//! ```text
//! # 2-state example
//! machine bb2
//! states: A B
//! start: A
//! A _ -> 1 R B
//! A 0 -> 1 R B
//! A 1 -> 1 L B
//! ...
//! ```
//!
//! Blank is `_`, moves are `L`/`R`, the halt target is `HALT`. Comments run
//! from `#` to end of line. Every declared state must have a rule for each of
//! `_`, `0` and `1`.
//!
//! Chaitin machines use the `chaitin` header and rule lines of the form
//! `STATE PROG WORK -> A|S WRITE MOVE NEXT`, where `PROG` is `_` (the blank
//! square left of the program), `0` or `1`; `WORK` is `0` or `1`; and `A`/`S`
//! advances the program head or leaves it in place.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::chaitin::{ChaitinMachine, CmRule, ProgramSymbol};
use crate::tm::{Machine, Move, Next, Rule, StateId, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed document: the machine plus the names it was written with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineDoc {
    pub name: String,
    pub state_names: Vec<String>,
    pub machine: Machine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChaitinDoc {
    pub name: String,
    pub state_names: Vec<String>,
    pub machine: ChaitinMachine,
}

pub fn parse_machine(text: &str) -> Result<Machine, ParseError> {
    parse_document(text).map(|doc| doc.machine)
}

pub fn parse_chaitin(text: &str) -> Result<ChaitinMachine, ParseError> {
    parse_chaitin_document(text).map(|doc| doc.machine)
}

/// Canonical name for state `index`: `A`..`Z`, then `S26`, `S27`, ...
pub fn state_name(index: usize) -> String {
    if index < 26 {
        ((b'A' + index as u8) as char).to_string()
    } else {
        format!("S{index}")
    }
}

pub fn render_machine(machine: &Machine) -> String {
    render_machine_named(machine, "m")
}

/// Canonical text: states in index order, rules sorted by `(state, symbol)`
/// with `_ < 0 < 1`, LF line endings.
pub fn render_machine_named(machine: &Machine, name: &str) -> String {
    let mut out = header("machine", name, machine.num_states(), machine.start());
    for s in 0..machine.num_states() {
        for sym in Symbol::ALL {
            let rule = machine.rule(s as StateId, sym);
            let _ = writeln!(
                out,
                "{} {} -> {} {} {}",
                state_name(s),
                sym.glyph(),
                rule.write.glyph(),
                rule.mv.glyph(),
                NextName(rule.next)
            );
        }
    }
    out
}

pub fn render_chaitin(machine: &ChaitinMachine) -> String {
    render_chaitin_named(machine, "cm")
}

pub fn render_chaitin_named(machine: &ChaitinMachine, name: &str) -> String {
    let mut out = header("chaitin", name, machine.num_states(), machine.start());
    for s in 0..machine.num_states() {
        for prog in ProgramSymbol::ALL {
            for work in [false, true] {
                let rule = machine.rule(s as StateId, prog, work);
                let _ = writeln!(
                    out,
                    "{} {} {} -> {} {} {} {}",
                    state_name(s),
                    prog.glyph(),
                    work as u8,
                    if rule.advance { 'A' } else { 'S' },
                    rule.write as u8,
                    rule.mv.glyph(),
                    NextName(rule.next)
                );
            }
        }
    }
    out
}

fn header(kind: &str, name: &str, states: usize, start: StateId) -> String {
    let names: Vec<String> = (0..states).map(state_name).collect();
    format!(
        "{kind} {name}\nstates: {}\nstart: {}\n",
        names.join(" "),
        state_name(start as usize)
    )
}

struct NextName(Next);

impl fmt::Display for NextName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Next::Halt => f.write_str("HALT"),
            Next::State(s) => f.write_str(&state_name(s as usize)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Tok<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// Splits into non-empty lines of whitespace-separated tokens, dropping
/// comments and a trailing CR.
fn tokenize(text: &str) -> Vec<Vec<Tok<'_>>> {
    let mut lines = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (col, (byte, c)) in body.char_indices().enumerate() {
            if c.is_whitespace() {
                if let Some((b, col0)) = start.take() {
                    toks.push(Tok { text: &body[b..byte], line: i + 1, column: col0 + 1 });
                }
            } else if start.is_none() {
                start = Some((byte, col));
            }
        }
        if let Some((b, col0)) = start {
            toks.push(Tok { text: &body[b..], line: i + 1, column: col0 + 1 });
        }
        if !toks.is_empty() {
            lines.push(toks);
        }
    }
    lines
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Header lines plus the raw rule lines, shared by both dialects.
struct Skeleton<'a> {
    name: String,
    state_names: Vec<String>,
    states: HashMap<&'a str, StateId>,
    start: StateId,
    rules: Vec<Vec<Tok<'a>>>,
    states_tok: Tok<'a>,
}

fn parse_skeleton<'a>(text: &'a str, kind: &str) -> Result<Skeleton<'a>, ParseError> {
    let lines = tokenize(text);
    let mut name = None;
    let mut states_line: Option<Vec<Tok<'a>>> = None;
    let mut start_tok: Option<Tok<'a>> = None;
    let mut rules = Vec::new();

    for toks in lines {
        let head = toks[0];
        match head.text {
            k if k == kind => {
                if name.is_some() {
                    return Err(head.error(format!("duplicate `{kind}` header")));
                }
                match toks.as_slice() {
                    [_, n] if is_identifier(n.text) => name = Some(n.text.to_string()),
                    [_, n, ..] => return Err(n.error("expected a single identifier as the name")),
                    [_] => return Err(head.error("missing machine name")),
                    [] => unreachable!(),
                }
            }
            "states:" => {
                if states_line.is_some() {
                    return Err(head.error("duplicate `states:` line"));
                }
                states_line = Some(toks);
            }
            "start:" => {
                if start_tok.is_some() {
                    return Err(head.error("duplicate `start:` line"));
                }
                match toks.as_slice() {
                    [_, s] => start_tok = Some(*s),
                    [_, _, extra, ..] => return Err(extra.error("unexpected token after start state")),
                    _ => return Err(head.error("missing start state")),
                }
            }
            _ => rules.push(toks),
        }
    }

    let first = Tok { text: "", line: 1, column: 1 };
    let name = name.ok_or_else(|| first.error(format!("missing `{kind} <name>` header")))?;
    let states_line = states_line.ok_or_else(|| first.error("missing `states:` line"))?;
    let states_tok = states_line[0];
    if states_line.len() < 2 {
        return Err(states_tok.error("no states declared"));
    }
    let mut states = HashMap::new();
    let mut state_names = Vec::new();
    for tok in &states_line[1..] {
        if !is_identifier(tok.text) || tok.text == "HALT" || tok.text == "_" {
            return Err(tok.error(format!("invalid state name `{}`", tok.text)));
        }
        if states.insert(tok.text, state_names.len() as StateId).is_some() {
            return Err(tok.error(format!("state `{}` declared twice", tok.text)));
        }
        state_names.push(tok.text.to_string());
    }
    let start_tok = start_tok.ok_or_else(|| first.error("missing start"))?;
    let start = *states
        .get(start_tok.text)
        .ok_or_else(|| start_tok.error(format!("undeclared start state `{}`", start_tok.text)))?;

    Ok(Skeleton {
        name,
        state_names,
        states,
        start,
        rules,
        states_tok,
    })
}

impl Skeleton<'_> {
    fn state(&self, tok: &Tok<'_>) -> Result<StateId, ParseError> {
        self.states
            .get(tok.text)
            .copied()
            .ok_or_else(|| tok.error(format!("undeclared state `{}`", tok.text)))
    }

    fn next(&self, tok: &Tok<'_>) -> Result<Next, ParseError> {
        if tok.text == "HALT" {
            Ok(Next::Halt)
        } else {
            self.state(tok).map(Next::State)
        }
    }

    fn missing(&self, state: usize, what: String) -> ParseError {
        self.states_tok.error(format!(
            "missing rule for ({}, {what}): every state needs a complete rule table",
            self.state_names[state]
        ))
    }
}

fn symbol(tok: &Tok<'_>) -> Result<Symbol, ParseError> {
    match tok.text {
        "_" => Ok(Symbol::Blank),
        "0" => Ok(Symbol::Zero),
        "1" => Ok(Symbol::One),
        other => Err(tok.error(format!("expected `_`, `0` or `1`, found `{other}`"))),
    }
}

fn bit(tok: &Tok<'_>) -> Result<bool, ParseError> {
    match tok.text {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(tok.error(format!("expected `0` or `1`, found `{other}`"))),
    }
}

fn movement(tok: &Tok<'_>) -> Result<Move, ParseError> {
    match tok.text {
        "L" => Ok(Move::Left),
        "R" => Ok(Move::Right),
        other => Err(tok.error(format!("expected `L` or `R`, found `{other}`"))),
    }
}

fn arrow(toks: &[Tok<'_>], at: usize, arity: usize, shape: &str) -> Result<(), ParseError> {
    if toks.len() != arity || toks[at].text != "->" {
        let bad = toks.get(at).filter(|t| t.text != "->").unwrap_or(&toks[0]);
        return Err(bad.error(format!("malformed rule, expected `{shape}`")));
    }
    Ok(())
}

pub fn parse_document(text: &str) -> Result<MachineDoc, ParseError> {
    let sk = parse_skeleton(text, "machine")?;
    let n = sk.state_names.len();
    let mut table: Vec<Option<Rule>> = vec![None; 3 * n];
    for toks in &sk.rules {
        arrow(toks, 2, 6, "STATE READ -> WRITE MOVE NEXT")?;
        let s = sk.state(&toks[0])?;
        let read = symbol(&toks[1])?;
        let rule = Rule::new(symbol(&toks[3])?, movement(&toks[4])?, sk.next(&toks[5])?);
        let slot = &mut table[3 * s as usize + read.index()];
        if slot.is_some() {
            return Err(toks[0].error(format!(
                "duplicate rule for ({}, {})",
                toks[0].text,
                read.glyph()
            )));
        }
        *slot = Some(rule);
    }
    let mut rules = Vec::with_capacity(3 * n);
    for (i, r) in table.into_iter().enumerate() {
        rules.push(r.ok_or_else(|| sk.missing(i / 3, Symbol::ALL[i % 3].glyph().to_string()))?);
    }
    let machine = Machine::new(n, sk.start, rules).map_err(|e| sk.states_tok.error(e.to_string()))?;
    Ok(MachineDoc {
        name: sk.name,
        state_names: sk.state_names,
        machine,
    })
}

pub fn parse_chaitin_document(text: &str) -> Result<ChaitinDoc, ParseError> {
    let sk = parse_skeleton(text, "chaitin")?;
    let n = sk.state_names.len();
    let mut table: Vec<Option<CmRule>> = vec![None; 6 * n];
    for toks in &sk.rules {
        arrow(toks, 3, 8, "STATE PROG WORK -> A|S WRITE MOVE NEXT")?;
        let s = sk.state(&toks[0])?;
        let prog = match toks[1].text {
            "_" => ProgramSymbol::LeftBlank,
            "0" => ProgramSymbol::Bit(false),
            "1" => ProgramSymbol::Bit(true),
            other => return Err(toks[1].error(format!("expected `_`, `0` or `1`, found `{other}`"))),
        };
        let work = bit(&toks[2])?;
        let advance = match toks[4].text {
            "A" => true,
            "S" => false,
            other => return Err(toks[4].error(format!("expected `A` or `S`, found `{other}`"))),
        };
        let rule = CmRule {
            advance,
            write: bit(&toks[5])?,
            mv: movement(&toks[6])?,
            next: sk.next(&toks[7])?,
        };
        let slot = &mut table[ChaitinMachine::slot(s, prog, work)];
        if slot.is_some() {
            return Err(toks[0].error(format!(
                "duplicate rule for ({}, {}, {})",
                toks[0].text,
                prog.glyph(),
                work as u8
            )));
        }
        *slot = Some(rule);
    }
    let mut rules = Vec::with_capacity(6 * n);
    for (i, r) in table.into_iter().enumerate() {
        let what = || {
            let prog = ProgramSymbol::ALL[(i % 6) / 2];
            format!("{}, {}", prog.glyph(), i % 2)
        };
        rules.push(r.ok_or_else(|| sk.missing(i / 6, what()))?);
    }
    let machine =
        ChaitinMachine::new(n, sk.start, rules).map_err(|e| sk.states_tok.error(e.to_string()))?;
    Ok(ChaitinDoc {
        name: sk.name,
        state_names: sk.state_names,
        machine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::fixtures;

    const MINIMAL: &str = "machine m\nstates: A\nstart: A\nA _ -> 1 R HALT\nA 0 -> 0 R HALT\nA 1 -> 1 R HALT";

    fn err(text: &str) -> ParseError {
        parse_machine(text).unwrap_err()
    }

    #[test]
    fn minimal_document() {
        let m = parse_machine(MINIMAL).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.rule(0, Symbol::Blank), Rule::new(Symbol::One, Move::Right, Next::Halt));
        assert_eq!(m.rule(0, Symbol::Zero).write, Symbol::Zero);
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let text = "# header comment\r\n\r\nmachine m   # trailing\r\nstates: A\r\nstart: A\r\n\
                    A _ -> 1 R HALT\r\nA 0 -> 0 R HALT\r\nA 1 -> 1 R HALT\r\n";
        assert_eq!(parse_machine(text).unwrap(), parse_machine(MINIMAL).unwrap());
    }

    #[test]
    fn rejections_carry_locations() {
        let dup = format!("{MINIMAL}\nA _ -> 0 L HALT");
        let e = err(&dup);
        assert_eq!((e.line, e.column), (7, 1));
        assert!(e.message.contains("duplicate rule"), "{e}");

        let e = err("machine m\nstates: A\nstart: A\nA _ -> 1 R B\nA 0 -> 0 R HALT\nA 1 -> 1 R HALT");
        assert_eq!((e.line, e.column), (4, 12));
        assert!(e.message.contains("undeclared state `B`"));

        let e = err("machine m\nstates: A\nA _ -> 1 R HALT\nA 0 -> 0 R HALT\nA 1 -> 1 R HALT");
        assert!(e.message.contains("missing start"));

        let e = err("machine m\nstates: A\nstart: A\nA _ -> 1 R HALT\nA 1 -> 1 R HALT");
        assert!(e.message.contains("missing rule for (A, 0)"), "{e}");
        assert_eq!((e.line, e.column), (2, 1));

        let e = err("machine m\nstates: A\nstart: A\nA _ -> 1 X HALT");
        assert_eq!((e.line, e.column), (4, 10));

        let e = err("machine m\nstates: A\nstart: A\nA _ 1 R HALT");
        assert!(e.message.contains("malformed rule"));

        assert!(err("").message.contains("header"));
        assert!(err("machine m\nstates: HALT\nstart: HALT").message.contains("invalid state name"));
        assert!(err("machine m\nstates: A A\nstart: A").message.contains("declared twice"));
        assert!(err("machine m n\nstates: A\nstart: A").message.contains("single identifier"));
    }

    #[test]
    fn render_is_canonical() {
        let m = parse_machine(MINIMAL).unwrap();
        let text = render_machine(&m);
        assert_eq!(text, format!("{MINIMAL}\n"));
        assert_eq!(parse_machine(&text).unwrap(), m);
        assert_eq!(render_machine(&m), text);
    }

    #[test]
    fn declaration_order_is_state_order() {
        let text = "machine swap\nstates: Q P\nstart: P\n\
                    P _ -> 1 R Q\nP 0 -> 1 R Q\nP 1 -> 1 R Q\n\
                    Q 1 -> 0 L HALT\nQ 0 -> 0 L P\nQ _ -> _ L P\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.state_names, ["Q", "P"]);
        assert_eq!(doc.machine.start(), 1);
        assert_eq!(doc.machine.rule(0, Symbol::One).next, Next::Halt);
        assert_eq!(parse_machine(&render_machine(&doc.machine)).unwrap(), doc.machine);
    }

    #[test]
    fn fixtures_round_trip() {
        for m in [fixtures::halter(), fixtures::runaway(), fixtures::oscillator(), fixtures::right_sweep()] {
            assert_eq!(parse_machine(&render_machine(&m)).unwrap(), m);
        }
        assert_eq!(state_name(25), "Z");
        assert_eq!(state_name(26), "S26");
    }
}
