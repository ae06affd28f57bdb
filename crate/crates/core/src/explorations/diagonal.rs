//! Cantor's diagonal: flip bit `i` of row `i`.

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("row {row} has {len} bits but needs at least {}", row + 1)]
    ShortRow { row: usize, len: usize },
}

/// Rows where row `i` has at least `i + 1` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitTable {
    rows: Vec<BitString>,
}

impl BitTable {
    pub fn new(rows: Vec<BitString>) -> Result<BitTable, TableError> {
        if let Some((row, r)) = rows.iter().enumerate().find(|(i, r)| r.len() <= *i) {
            return Err(TableError::ShortRow { row, len: r.len() });
        }
        Ok(BitTable { rows })
    }

    pub fn rows(&self) -> &[BitString] {
        &self.rows
    }
}

/// Differs from row `i` at position `i`, so it is none of the rows.
pub fn diagonal(table: &BitTable) -> BitString {
    table.rows.iter().enumerate().map(|(i, r)| !r.get(i).expect("row long enough")).collect()
}
