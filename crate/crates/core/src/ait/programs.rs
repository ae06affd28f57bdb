//! Structural enumeration of the universal model's program space.
//!
//! Programs are machine codes, so instead of filtering all `2^L` strings this
//! walks the code grammar directly and emits each valid code of length `L`
//! exactly once.

use rayon::prelude::*;

use crate::bits::BitString;
use crate::prefix::{encode_uint, uint_code_len};
use crate::tm::{Move, Next, Rule, StateId, Symbol};
use crate::universal::{push_rule, start_width, MachineCode};

#[derive(Debug, Clone)]
struct RuleOption {
    bits: BitString,
}

fn rule_options(states: usize) -> Vec<RuleOption> {
    let mut out = Vec::new();
    for write in Symbol::ALL {
        for mv in [Move::Left, Move::Right] {
            for idx in 0..=states as StateId {
                let next = if idx == 0 { Next::Halt } else { Next::State(idx - 1) };
                let mut bits = BitString::new();
                push_rule(&mut bits, Rule::new(write, mv, next));
                out.push(RuleOption { bits });
            }
        }
    }
    out.sort_by(|a, b| a.bits.cmp(&b.bits));
    out
}

fn header_len(states: usize) -> usize {
    uint_code_len(states as u64 - 1) + start_width(states as u64)
}

/// Shortest code of a machine with `states` states.
pub fn min_code_len(states: usize) -> usize {
    header_len(states) + 3 * states * 3
}

/// A unit of parallel work: a fixed header and the first few rules.
#[derive(Debug, Clone)]
struct Task {
    prefix: BitString,
    options: usize,
    rules_left: usize,
}

struct Layer {
    options: Vec<RuleOption>,
    min: usize,
    max: usize,
}

fn layer(states: usize) -> Layer {
    let options = rule_options(states);
    let min = options.iter().map(|o| o.bits.len()).min().unwrap_or(0);
    let max = options.iter().map(|o| o.bits.len()).max().unwrap_or(0);
    Layer { options, min, max }
}

fn feasible(layer: &Layer, remaining: usize, slots: usize) -> bool {
    remaining >= slots * layer.min && remaining <= slots * layer.max
}

fn tasks(len: usize, layers: &[Layer]) -> Vec<Task> {
    // split two rules deep below each header
    const SPLIT: usize = 2;
    let mut out = Vec::new();
    for (i, layer) in layers.iter().enumerate() {
        let states = i + 1;
        let head = header_len(states);
        if head > len || !feasible(layer, len - head, 3 * states) {
            continue;
        }
        for start in 0..states as u64 {
            let mut prefix = encode_uint(states as u64 - 1);
            prefix.extend_from(&BitString::from_uint(start, start_width(states as u64)));
            let mut frontier = vec![prefix];
            let depth = SPLIT.min(3 * states);
            for d in 0..depth {
                let mut next = Vec::new();
                for p in frontier {
                    for o in &layer.options {
                        let l = p.len() + o.bits.len();
                        if l <= len && feasible(layer, len - l, 3 * states - d - 1) {
                            next.push(p.concat(&o.bits));
                        }
                    }
                }
                frontier = next;
            }
            out.extend(frontier.into_iter().map(|prefix| Task {
                prefix,
                options: i,
                rules_left: 3 * states - depth,
            }));
        }
    }
    // Task prefixes are never prefixes of one another, so sorting them
    // makes the whole walk lexicographic.
    out.sort_by(|a, b| a.prefix.cmp(&b.prefix));
    out
}

fn walk<T>(layer: &Layer, code: &mut BitString, target: usize, rules_left: usize, f: &impl Fn(&MachineCode) -> Option<T>, out: &mut Vec<T>) {
    if rules_left == 0 {
        if code.len() == target {
            if let Some(v) = f(&MachineCode::from_valid(code.clone())) {
                out.push(v);
            }
        }
        return;
    }
    let base = code.len();
    for o in &layer.options {
        let l = base + o.bits.len();
        if l > target || !feasible(layer, target - l, rules_left - 1) {
            continue;
        }
        code.extend_from(&o.bits);
        walk(layer, code, target, rules_left - 1, f, out);
        code.truncate(base);
    }
}

fn layers_for(len: usize) -> Vec<Layer> {
    (1..).take_while(|&n| min_code_len(n) <= len).map(layer).collect()
}

/// Visits every valid code of exactly `len` bits in parallel and collects the
/// `Some` results in lexicographic order of the codes, independent of the
/// thread count.
pub fn map_programs<T: Send>(len: usize, f: impl Fn(&MachineCode) -> Option<T> + Sync) -> Vec<T> {
    let layers = layers_for(len);
    let tasks = tasks(len, &layers);
    tasks
        .into_par_iter()
        .flat_map_iter(|task| {
            let mut out = Vec::new();
            let mut code = task.prefix.clone();
            walk(&layers[task.options], &mut code, len, task.rules_left, &f, &mut out);
            out
        })
        .collect()
}

/// Number of valid codes of exactly `len` bits.
pub fn count_programs(len: usize) -> u64 {
    map_programs(len, |_| Some(())).len() as u64
}
