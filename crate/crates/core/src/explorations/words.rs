//! Thue-Morse words and cube-freeness (no factor of the form `ppp`).

use thiserror::Error;

use crate::bits::BitString;

pub const MAX_THUE_MORSE_K: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("thue_morse({k}) would have 2^{k} bits; the limit is k = {MAX_THUE_MORSE_K}")]
    TooLong { k: u32 },
}

/// `k` applications of `0 ↦ 01, 1 ↦ 10` to `0`.
pub fn thue_morse(k: u32) -> Result<BitString, WordError> {
    if k > MAX_THUE_MORSE_K {
        return Err(WordError::TooLong { k });
    }
    let mut word = BitString::from_bits(vec![false]);
    for _ in 0..k {
        word = word.iter().flat_map(|b| [b, !b]).collect();
    }
    Ok(word)
}

/// Same word by `t_{k+1} = t_k ++ complement(t_k)`.
pub fn thue_morse_doubling(k: u32) -> Result<BitString, WordError> {
    if k > MAX_THUE_MORSE_K {
        return Err(WordError::TooLong { k });
    }
    let mut word = BitString::from_bits(vec![false]);
    for _ in 0..k {
        let c = word.complement();
        word.extend_from(&c);
    }
    Ok(word)
}

/// A cube `ppp` starting at `position` with `|p| = period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cube {
    pub position: usize,
    pub period: usize,
    pub factor: BitString,
}

fn cube(x: &BitString, position: usize, period: usize) -> Cube {
    Cube {
        position,
        period,
        factor: x.slice(position, position + period),
    }
}

/// `Ok(())` when cube-free, otherwise the leftmost cube (shortest period
/// among those at that position). For each period it tracks runs of
/// positions with `x[i] = x[i + p]`; a run of length `2p` is a cube.
pub fn is_cube_free(x: &BitString) -> Result<(), Cube> {
    let n = x.len();
    let mut best: Option<(usize, usize)> = None;
    for p in 1..=n / 3 {
        let mut run = 0;
        for i in 0..n - p {
            if best.is_some_and(|(pos, _)| i + 1 > pos + 2 * p) {
                break;
            }
            run = if x[i] == x[i + p] { run + 1 } else { 0 };
            if run == 2 * p {
                let start = i + 1 - 2 * p;
                if best.is_none_or(|(pos, _)| start < pos) {
                    best = Some((start, p));
                }
                break;
            }
        }
    }
    match best {
        None => Ok(()),
        Some((pos, p)) => Err(cube(x, pos, p)),
    }
}

/// Reference checker comparing every candidate factor directly.
pub fn is_cube_free_naive(x: &BitString) -> Result<(), Cube> {
    let n = x.len();
    for i in 0..n {
        for p in 1..=(n - i) / 3 {
            let a = x.slice(i, i + p);
            if a == x.slice(i + p, i + 2 * p) && a == x.slice(i + 2 * p, i + 3 * p) {
                return Err(cube(x, i, p));
            }
        }
    }
    Ok(())
}
