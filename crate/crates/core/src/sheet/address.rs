use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Direction in which a run of cells extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    /// Along a row, to the right.
    Horizontal,
    /// Down a column.
    Vertical,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

/// A 1-based cell address. Ordered row-major (row first, then column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Address {
    pub column: u32,
    pub row: u32,
}

impl Address {
    pub fn new(column: u32, row: u32) -> Self {
        assert!(column >= 1 && row >= 1, "addresses are 1-based");
        Address { column, row }
    }

    pub fn try_new(column: i64, row: i64) -> Option<Self> {
        if column < 1 || row < 1 || column > u32::MAX as i64 || row > u32::MAX as i64 {
            return None;
        }
        Some(Address {
            column: column as u32,
            row: row as u32,
        })
    }

    /// Coordinate of this address along `axis`.
    pub fn along(&self, axis: Axis) -> u32 {
        match axis {
            Axis::Horizontal => self.column,
            Axis::Vertical => self.row,
        }
    }

    /// Coordinate of the line (row or column) this address sits on for `axis`.
    pub fn line(&self, axis: Axis) -> u32 {
        self.along(axis.other())
    }

    /// The axis shared by two addresses, if they sit on one row or one column.
    /// Identical addresses report `Horizontal`.
    pub fn shared_axis(&self, other: &Address) -> Option<Axis> {
        if self.row == other.row {
            Some(Axis::Horizontal)
        } else if self.column == other.column {
            Some(Axis::Vertical)
        } else {
            None
        }
    }

    pub fn offset_from(&self, origin: &Address) -> (i64, i64) {
        (
            self.column as i64 - origin.column as i64,
            self.row as i64 - origin.row as i64,
        )
    }

    pub fn shifted(&self, dcol: i64, drow: i64) -> Option<Address> {
        Address::try_new(self.column as i64 + dcol, self.row as i64 + drow)
    }
}

impl Ord for Address {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.row, self.column).cmp(&(other.row, other.column))
    }
}

impl PartialOrd for Address {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Spreadsheet column letters for a 1-based index: 1 -> A, 27 -> AA.
pub fn column_name(mut index: u32) -> String {
    let mut out = Vec::new();
    while index > 0 {
        let rem = (index - 1) % 26;
        out.push(b'A' + rem as u8);
        index = (index - 1) / 26;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Inverse of [`column_name`]; case-insensitive.
pub fn column_index(letters: &str) -> Option<u32> {
    if letters.is_empty() {
        return None;
    }
    let mut value: u64 = 0;
    for b in letters.bytes() {
        if !b.is_ascii_alphabetic() {
            return None;
        }
        value = value * 26 + (b.to_ascii_uppercase() - b'A' + 1) as u64;
        if value > u32::MAX as u64 {
            return None;
        }
    }
    Some(value as u32)
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", column_name(self.column), self.row)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cell address {0:?}")]
pub struct AddressError(pub String);

impl FromStr for Address {
    type Err = AddressError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AddressError(s.to_string());
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(err)?;
        let (letters, digits) = s.split_at(split);
        let column = column_index(letters).ok_or_else(err)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let row: u32 = digits.parse().map_err(|_| err())?;
        if row == 0 {
            return Err(err());
        }
        Ok(Address { column, row })
    }
}

impl Serialize for Address {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Address {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
