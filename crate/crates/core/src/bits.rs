//! Finite binary strings, the common currency of every module.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use thiserror::Error;

/// A finite sequence over `{0, 1}`.
///
/// Ordering is lexicographic with `0 < 1`, where a proper prefix sorts
/// before its extensions.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit character {found:?} at offset {offset}")]
pub struct BitParseError {
    pub offset: usize,
    pub found: char,
}

impl BitString {
    pub const fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn with_capacity(cap: usize) -> Self {
        BitString(Vec::with_capacity(cap))
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// `count` copies of `bit`.
    pub fn repeat(bit: bool, count: usize) -> Self {
        BitString(vec![bit; count])
    }

    /// The `width` low-order bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        BitString(
            (0..width)
                .rev()
                .map(|i| i < 64 && (value >> i) & 1 == 1)
                .collect(),
        )
    }

    /// Shortest binary numeral of `value`; zero is the empty string.
    pub fn binary_numeral(value: u64) -> Self {
        let width = (u64::BITS - value.leading_zeros()) as usize;
        Self::from_uint(value, width)
    }

    /// Reads the bits as a big-endian unsigned numeral. `None` on overflow.
    pub fn to_u64(&self) -> Option<u64> {
        if self.0.iter().skip_while(|b| !**b).count() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Bitwise complement.
    pub fn complement(&self) -> BitString {
        BitString(self.0.iter().map(|b| !b).collect())
    }

    /// True when `self` is a prefix of `other` (equality included).
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_vec())
    }

    /// All strings of exactly `len` bits in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "bit-string enumeration is capped at 63 bits");
        (0..1u64 << len).map(move |v| BitString::from_uint(v, len))
    }

    /// Packs into bytes, most significant bit first, zero padded.
    pub fn to_packed(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
            })
            .collect()
    }

    /// Inverse of [`BitString::to_packed`]; `len` must not exceed `8 * bytes.len()`.
    pub fn from_packed(bytes: &[u8], len: usize) -> Option<BitString> {
        if len > bytes.len() * 8 {
            return None;
        }
        Some(BitString(
            (0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect(),
        ))
    }
}

impl Index<usize> for BitString {
    type Output = bool;

    fn index(&self, i: usize) -> &bool {
        &self.0[i]
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString(iter.into_iter().collect())
    }
}

impl Extend<bool> for BitString {
    fn extend<I: IntoIterator<Item = bool>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl FromStr for BitString {
    type Err = BitParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(offset, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(BitParseError { offset, found }),
            })
            .collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Shorthand for literal bit strings in tests and fixtures.
///
/// Panics on characters other than `0` and `1`.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(bits("0110").to_string(), "0110");
        assert_eq!(bits("").len(), 0);
        assert_eq!(
            "01x".parse::<BitString>(),
            Err(BitParseError { offset: 2, found: 'x' })
        );
    }

    #[test]
    fn numerals() {
        assert_eq!(BitString::binary_numeral(0), bits(""));
        assert_eq!(BitString::binary_numeral(6), bits("110"));
        assert_eq!(BitString::from_uint(1, 3), bits("001"));
        assert_eq!(bits("000101").to_u64(), Some(5));
        assert_eq!(BitString::repeat(true, 65).to_u64(), None);
        assert_eq!(BitString::repeat(true, 64).to_u64(), Some(u64::MAX));
    }

    #[test]
    fn order_is_lexicographic() {
        let mut v = vec![bits("1"), bits("01"), bits("0"), bits("10"), bits("")];
        v.sort();
        assert_eq!(v, vec![bits(""), bits("0"), bits("01"), bits("1"), bits("10")]);
    }

    #[test]
    fn packed_round_trip() {
        let x = bits("1011000111");
        let packed = x.to_packed();
        assert_eq!(packed, vec![0b1011_0001, 0b1100_0000]);
        assert_eq!(BitString::from_packed(&packed, 10), Some(x));
        assert_eq!(BitString::from_packed(&packed, 17), None);
    }
}
