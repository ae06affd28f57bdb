//! Collatz iteration `n ↦ n/2` (even), `n ↦ 3n + 1` (odd) until `n = 1`.
//!
//! Values stay in `u128` while they fit and move to `BigUint` on overflow, so
//! arithmetic is exact for any start.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollatzError {
    #[error("the iteration starts from a positive integer")]
    Zero,
    #[error("empty range: lo > hi")]
    EmptyRange,
    #[error("range of {width} values exceeds the limit of {MAX_RANGE}")]
    RangeTooLarge { width: BigUint },
}

/// Largest `hi - lo + 1` accepted by [`collatz_verify_range`].
pub const MAX_RANGE: u64 = 1 << 28;

/// Values checked in parallel before the memo is extended.
const SHARD: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Value {
    Small(u128),
    Big(BigUint),
}

impl Value {
    fn new(n: &BigUint) -> Value {
        match n.to_u128() {
            Some(v) => Value::Small(v),
            None => Value::Big(n.clone()),
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, Value::Small(1))
    }

    fn step(&mut self) {
        match self {
            Value::Small(v) => {
                if *v % 2 == 0 {
                    *v /= 2;
                } else if let Some(next) = v.checked_mul(3).and_then(|t| t.checked_add(1)) {
                    *v = next;
                } else {
                    *self = Value::Big(BigUint::from(*v) * 3u8 + 1u8);
                }
            }
            Value::Big(b) => {
                if b.bit(0) {
                    *b = &*b * 3u8 + 1u8;
                } else {
                    *b >>= 1u8;
                    if let Some(v) = b.to_u128() {
                        *self = Value::Small(v);
                    }
                }
            }
        }
    }

    fn to_big(&self) -> BigUint {
        match self {
            Value::Small(v) => BigUint::from(*v),
            Value::Big(b) => b.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CollatzOutcome {
    /// Reached 1 after `steps` iterations; `peak` is the largest value seen.
    Reached { steps: u64, peak: BigUint },
    BudgetExceeded { steps: u64 },
}

pub fn collatz_steps(n: &BigUint, budget: u64) -> Result<CollatzOutcome, CollatzError> {
    if n.is_zero() {
        return Err(CollatzError::Zero);
    }
    let mut v = Value::new(n);
    let mut peak = v.clone();
    let mut steps = 0;
    while !v.is_one() {
        if steps == budget {
            return Ok(CollatzOutcome::BudgetExceeded { steps });
        }
        v.step();
        steps += 1;
        let higher = match (&v, &peak) {
            (Value::Small(a), Value::Small(b)) => a > b,
            (Value::Big(_), Value::Small(_)) => true,
            (Value::Small(_), Value::Big(_)) => false,
            (Value::Big(a), Value::Big(b)) => a > b,
        };
        if higher {
            peak = v.clone();
        }
    }
    Ok(CollatzOutcome::Reached {
        steps,
        peak: peak.to_big(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeReport {
    pub lo: BigUint,
    pub hi: BigUint,
    pub all_halted: bool,
    /// Largest step count among values that reached 1.
    pub max_steps: u64,
    /// Smallest value attaining `max_steps`.
    pub argmax: BigUint,
    /// Smallest value that did not reach 1 within the budget.
    pub first_unresolved: Option<BigUint>,
}

impl fmt::Display for RangeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lo = {}", self.lo)?;
        writeln!(f, "hi = {}", self.hi)?;
        writeln!(f, "all_halted = {}", self.all_halted)?;
        writeln!(f, "max_steps = {}", self.max_steps)?;
        writeln!(f, "argmax = {}", self.argmax)?;
        match &self.first_unresolved {
            Some(n) => write!(f, "first_unresolved = {n}"),
            None => write!(f, "first_unresolved = -"),
        }
    }
}

const UNRESOLVED: u64 = u64::MAX;

/// Bounds of the memoised window in both representations.
struct Window<'a> {
    lo: &'a BigUint,
    lo_small: Option<u128>,
    /// Offset of the first value not yet memoised.
    known: usize,
    memo: &'a [u64],
}

impl Window<'_> {
    /// Memo entry for `v` if `lo ≤ v < lo + known`.
    fn lookup(&self, v: &Value) -> Option<u64> {
        let offset = match (v, self.lo_small) {
            (Value::Small(a), Some(lo)) => a.checked_sub(lo)?.to_usize()?,
            (Value::Small(_), None) => return None,
            (Value::Big(b), _) => {
                if b < self.lo {
                    return None;
                }
                (b - self.lo).to_usize()?
            }
        };
        (offset < self.known).then(|| self.memo[offset])
    }
}

/// Steps for `n` using memoised values below it; `UNRESOLVED` past budget.
fn steps_with_memo(n: &BigUint, budget: u64, window: &Window<'_>) -> u64 {
    let mut v = Value::new(n);
    let mut steps = 0u64;
    loop {
        if v.is_one() {
            return steps;
        }
        if steps > 0 {
            if let Some(rest) = window.lookup(&v) {
                return match steps.checked_add(rest) {
                    Some(total) if rest != UNRESOLVED && total <= budget => total,
                    _ => UNRESOLVED,
                };
            }
        }
        if steps == budget {
            return UNRESOLVED;
        }
        v.step();
        steps += 1;
    }
}

/// Checks every `n` in `[lo, hi]`, reusing step counts of smaller values in
/// the range once their shard is complete.
pub fn collatz_verify_range(lo: &BigUint, hi: &BigUint, budget: u64) -> Result<RangeReport, CollatzError> {
    if lo.is_zero() {
        return Err(CollatzError::Zero);
    }
    if lo > hi {
        return Err(CollatzError::EmptyRange);
    }
    let width = hi - lo + BigUint::one();
    let len = match width.to_u64() {
        Some(w) if w <= MAX_RANGE => w as usize,
        _ => return Err(CollatzError::RangeTooLarge { width }),
    };
    let mut memo = vec![UNRESOLVED; len];
    let lo_small = lo.to_u128();
    let mut start = 0;
    while start < len {
        let end = (start + SHARD).min(len);
        let shard: Vec<u64> = {
            let window = Window {
                lo,
                lo_small,
                known: start,
                memo: &memo,
            };
            (start..end)
                .into_par_iter()
                .map(|i| steps_with_memo(&(lo + BigUint::from(i)), budget, &window))
                .collect()
        };
        memo[start..end].copy_from_slice(&shard);
        start = end;
    }
    let mut report = RangeReport {
        lo: lo.clone(),
        hi: hi.clone(),
        all_halted: true,
        max_steps: 0,
        argmax: lo.clone(),
        first_unresolved: None,
    };
    let mut best: Option<(u64, usize)> = None;
    for (i, &s) in memo.iter().enumerate() {
        if s == UNRESOLVED {
            if report.all_halted {
                report.all_halted = false;
                report.first_unresolved = Some(lo + BigUint::from(i));
            }
        } else if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, i));
        }
    }
    if let Some((s, i)) = best {
        report.max_steps = s;
        report.argmax = lo + BigUint::from(i);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Plain `u64` iteration written independently of the module.
    fn brute(mut n: u64) -> (u64, u64) {
        let (mut steps, mut peak) = (0, n);
        while n != 1 {
            n = if n.is_multiple_of(2) { n / 2 } else { 3 * n + 1 };
            peak = peak.max(n);
            steps += 1;
        }
        (steps, peak)
    }

    fn reached(n: u64) -> (u64, BigUint) {
        match collatz_steps(&big(n), 10_000).unwrap() {
            CollatzOutcome::Reached { steps, peak } => (steps, peak),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn known_trajectories() {
        assert_eq!(reached(1), (0, big(1)));
        assert_eq!(reached(6).0, 8);
        assert_eq!(reached(27), (111, big(9232)));
        assert_eq!(brute(27), (111, 9232));
        assert_eq!(collatz_steps(&big(0), 5), Err(CollatzError::Zero));
        assert_eq!(
            collatz_steps(&big(27), 100).unwrap(),
            CollatzOutcome::BudgetExceeded { steps: 100 }
        );
    }

    #[test]
    fn doubling_adds_one_step() {
        for n in 1..2000 {
            assert_eq!(reached(2 * n).0, reached(n).0 + 1);
            assert_eq!(reached(n).0, brute(n).0);
        }
    }

    #[test]
    fn beyond_u128() {
        let n = (BigUint::one() << 130u32) + BigUint::one();
        let CollatzOutcome::Reached { steps, peak } = collatz_steps(&n, 100_000).unwrap() else {
            panic!("did not reach 1");
        };
        assert!(steps > 130 && peak > n);
        let shifted = collatz_steps(&(BigUint::one() << 200u32), 1000).unwrap();
        assert_eq!(shifted, CollatzOutcome::Reached { steps: 200, peak: BigUint::one() << 200u32 });
    }

    #[test]
    fn ranges() {
        let r = collatz_verify_range(&big(1), &big(1), 10).unwrap();
        assert!(r.all_halted);
        assert_eq!((r.max_steps, r.argmax), (0, big(1)));
        let r = collatz_verify_range(&big(1), &big(100_000), 1000).unwrap();
        let (steps, arg) = (1..=100_000u64).map(|n| (brute(n).0, n)).fold((0, 0), |a, b| if b.0 > a.0 { b } else { a });
        assert!(r.all_halted);
        assert_eq!((r.max_steps, r.argmax), (steps, big(arg)));
        let offset = collatz_verify_range(&big(70_000), &big(140_000), 1000).unwrap();
        let expect = (70_000..=140_000u64).map(|n| (brute(n).0, n)).fold((0, 0), |a, b| if b.0 > a.0 { b } else { a });
        assert_eq!((offset.max_steps, offset.argmax), (expect.0, big(expect.1)));
        let tight = collatz_verify_range(&big(1), &big(30), 50).unwrap();
        assert!(!tight.all_halted);
        assert_eq!(tight.first_unresolved, Some(big(27)));
        assert_eq!(collatz_verify_range(&big(5), &big(4), 10), Err(CollatzError::EmptyRange));
        assert_eq!(collatz_verify_range(&big(0), &big(4), 10), Err(CollatzError::Zero));
    }
}
