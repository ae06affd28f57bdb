//! Self-delimiting codes and Kraft-sum accounting.
//!
//! Two codes are provided. [`self_delimit_unary`] is `0^n 1 x` with
//! `n = |x|`, of length `2|x| + 1`. [`self_delimit_log`] prefixes `x` with the
//! unary-delimited binary numeral of `|x|`, of length
//! `|x| + 2⌈log₂(|x|+1)⌉ + 1`; it is the one used for machine codes.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bits::BitString;
pub use crate::dyadic::DyadicRational;

/// Pull-based source of bits, used by every streaming decoder.
pub trait BitSource {
    fn next_bit(&mut self) -> Option<bool>;

    /// Bits consumed so far.
    fn position(&self) -> usize;
}

/// Reads a [`BitString`] front to back.
#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Cursor { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }
}

impl BitSource for Cursor<'_> {
    fn next_bit(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    fn position(&self) -> usize {
        self.pos
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code truncated after {0} bits")]
    Truncated(usize),
    #[error("non-canonical length numeral ending at bit {0}")]
    NonCanonical(usize),
    #[error("integer field wider than 64 bits at bit {0}")]
    Overflow(usize),
}

/// A proper-prefix pair `(shorter, longer)` that breaks prefix-freeness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixWitness {
    pub prefix: BitString,
    pub extension: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("set is not prefix-free: {} is a prefix of {}", .0.prefix, .0.extension)]
pub struct NotPrefixFree(pub PrefixWitness);

/// `0^n 1 x` where `n = |x|`.
pub fn self_delimit_unary(x: &BitString) -> BitString {
    let mut out = BitString::with_capacity(2 * x.len() + 1);
    out.extend(std::iter::repeat_n(false, x.len()));
    out.push(true);
    out.extend_from(x);
    out
}

pub fn decode_unary(src: &mut impl BitSource) -> Result<BitString, CodeError> {
    let mut n = 0usize;
    loop {
        match src.next_bit() {
            Some(false) => n += 1,
            Some(true) => break,
            None => return Err(CodeError::Truncated(src.position())),
        }
    }
    read_exact(src, n)
}

/// `self_delimit_unary(binary(|x|)) ++ x`.
pub fn self_delimit_log(x: &BitString) -> BitString {
    let mut out = self_delimit_unary(&BitString::binary_numeral(x.len() as u64));
    out.extend_from(x);
    out
}

/// Inverse of [`self_delimit_log`]. Rejects length numerals with a leading
/// zero, so every accepted code is the image of exactly one string.
pub fn decode_log(src: &mut impl BitSource) -> Result<BitString, CodeError> {
    let numeral = decode_unary(src)?;
    if numeral.get(0) == Some(false) {
        return Err(CodeError::NonCanonical(src.position()));
    }
    let len = numeral
        .to_u64()
        .filter(|&l| l <= u32::MAX as u64)
        .ok_or(CodeError::Overflow(src.position()))?;
    read_exact(src, len as usize)
}

/// Integer field: `self_delimit_log(binary(value))`.
pub fn encode_uint(value: u64) -> BitString {
    self_delimit_log(&BitString::binary_numeral(value))
}

pub fn decode_uint(src: &mut impl BitSource) -> Result<u64, CodeError> {
    let numeral = decode_log(src)?;
    if numeral.get(0) == Some(false) {
        return Err(CodeError::NonCanonical(src.position()));
    }
    numeral.to_u64().ok_or(CodeError::Overflow(src.position()))
}

/// Length of [`encode_uint`]`(value)` without building it.
pub fn uint_code_len(value: u64) -> usize {
    let width = (u64::BITS - value.leading_zeros()) as usize;
    let width_width = (usize::BITS - width.leading_zeros()) as usize;
    width + 2 * width_width + 1
}

fn read_exact(src: &mut impl BitSource, n: usize) -> Result<BitString, CodeError> {
    let mut out = BitString::with_capacity(n);
    for _ in 0..n {
        out.push(src.next_bit().ok_or(CodeError::Truncated(src.position()))?);
    }
    Ok(out)
}

/// Checks prefix-freeness, returning the first offending pair in
/// lexicographic order.
///
/// In sorted order every string lies between a prefix and its extensions, so
/// only neighbours need comparing.
pub fn is_prefix_free<'a>(
    set: impl IntoIterator<Item = &'a BitString>,
) -> Result<(), PrefixWitness> {
    let sorted: BTreeSet<&BitString> = set.into_iter().collect();
    let mut iter = sorted.into_iter();
    let Some(mut prev) = iter.next() else {
        return Ok(());
    };
    for next in iter {
        if prev.is_proper_prefix_of(next) {
            return Err(PrefixWitness {
                prefix: prev.clone(),
                extension: next.clone(),
            });
        }
        prev = next;
    }
    Ok(())
}

/// A finite set of strings, none a proper prefix of another. Members are
/// kept in lexicographic order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixFreeSet {
    members: Vec<BitString>,
}

impl PrefixFreeSet {
    pub fn new(members: impl IntoIterator<Item = BitString>) -> Result<Self, NotPrefixFree> {
        let mut members: Vec<BitString> = members.into_iter().collect();
        members.sort();
        members.dedup();
        is_prefix_free(&members).map_err(NotPrefixFree)?;
        Ok(PrefixFreeSet { members })
    }

    pub fn empty() -> Self {
        PrefixFreeSet::default()
    }

    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.members.binary_search(x).is_ok()
    }

    /// Exact `Σ 2^-|p|`; at most one by the Kraft inequality.
    pub fn kraft_sum(&self) -> DyadicRational {
        crate::dyadic::sum_pow2_neg(self.members.iter().map(BitString::len))
    }
}

/// Exact Kraft sum of an arbitrary collection, rejecting non-prefix-free input.
pub fn kraft_sum<'a>(
    set: impl IntoIterator<Item = &'a BitString>,
) -> Result<DyadicRational, NotPrefixFree> {
    Ok(PrefixFreeSet::new(set.into_iter().cloned())?.kraft_sum())
}
