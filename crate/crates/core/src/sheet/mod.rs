//! In-memory grid model and document ingestion.
//!
//! A [`Sheet`] is a sparse, immutable map from [`Address`] to [`Cell`]. Only
//! non-empty cells are stored: a cell is kept when it has a value, a formula,
//! non-default formatting or frame information.

mod address;
mod document;
mod format;
mod value;

use std::collections::{BTreeMap, BTreeSet};

pub use address::{column_index, column_name, Address, AddressError, Axis};
pub use document::{load_sheet, CellRecord, FormatRecord, SheetDocument, SheetFormat};
pub use format::{Formatting, Rgb, StyleFlag};
pub use value::{parse_cell_value, render_number, CellValue, Locale};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub address: Address,
    pub value: CellValue,
    /// Raw formula text, usually starting with `=`.
    pub formula: Option<String>,
    pub formatting: Formatting,
    /// Frame information, carried verbatim and never interpreted.
    pub frame: Option<String>,
}

impl Cell {
    pub fn new(address: Address, value: CellValue) -> Self {
        Cell {
            address,
            value,
            formula: None,
            formatting: Formatting::default(),
            frame: None,
        }
    }

    pub fn with_formula(mut self, formula: impl Into<String>) -> Self {
        self.formula = Some(formula.into());
        self
    }

    pub fn with_formatting(mut self, formatting: Formatting) -> Self {
        self.formatting = formatting;
        self
    }

    pub fn has_formula(&self) -> bool {
        self.formula.as_deref().is_some_and(|f| !f.is_empty())
    }

    /// Text without a formula.
    pub fn is_text_label(&self) -> bool {
        self.value.is_text() && !self.has_formula()
    }

    fn is_storable(&self) -> bool {
        !self.value.is_undefined()
            || self.has_formula()
            || self.frame.is_some()
            || self.formatting != Formatting::default()
    }
}

/// One sheet of cells. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sheet {
    name: String,
    cells: BTreeMap<Address, Cell>,
    /// column -> rows holding a cell in that column
    columns: BTreeMap<u32, BTreeSet<u32>>,
}

impl Sheet {
    pub fn new(name: impl Into<String>) -> Self {
        Sheet {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Builds a sheet, rejecting duplicate addresses and formula cells
    /// without a cached value. Empty cells are dropped.
    pub fn from_cells(
        name: impl Into<String>,
        cells: impl IntoIterator<Item = Cell>,
    ) -> Result<Self> {
        let mut sheet = Sheet::new(name);
        for cell in cells {
            sheet.insert(cell)?;
        }
        Ok(sheet)
    }

    fn insert(&mut self, cell: Cell) -> Result<()> {
        if cell.has_formula() && cell.value.is_undefined() {
            return Err(Error::Integrity(format!(
                "formula cell {} has no cached value",
                cell.address
            )));
        }
        if let CellValue::Number(n) = cell.value {
            if !n.is_finite() {
                return Err(Error::Integrity(format!(
                    "cell {} holds a non-finite number",
                    cell.address
                )));
            }
        }
        if cell.formatting.size.is_nan() || cell.formatting.size <= 0.0 {
            return Err(Error::Integrity(format!(
                "cell {} has non-positive font size {}",
                cell.address, cell.formatting.size
            )));
        }
        if self.cells.contains_key(&cell.address) {
            return Err(Error::Integrity(format!(
                "duplicate address {}",
                cell.address
            )));
        }
        if !cell.is_storable() {
            return Ok(());
        }
        let addr = cell.address;
        self.columns
            .entry(addr.column)
            .or_default()
            .insert(addr.row);
        self.cells.insert(addr, cell);
        Ok(())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, addr: Address) -> Option<&Cell> {
        self.cells.get(&addr)
    }

    pub fn contains(&self, addr: Address) -> bool {
        self.cells.contains_key(&addr)
    }

    /// All stored cells in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.cells.values()
    }

    /// Numbers of the rows (`Horizontal`) or columns (`Vertical`) that hold
    /// at least one cell, ascending.
    pub fn lines(&self, axis: Axis) -> Vec<u32> {
        match axis {
            Axis::Horizontal => {
                let mut rows: Vec<u32> = self.cells.keys().map(|a| a.row).collect();
                rows.dedup();
                rows
            }
            Axis::Vertical => self.columns.keys().copied().collect(),
        }
    }

    /// Smallest rectangle holding every stored cell, as (top-left, bottom-right).
    pub fn bounding_box(&self) -> Option<(Address, Address)> {
        let first = self.cells.keys().next()?;
        let last = self.cells.keys().next_back()?;
        let min_col = *self.columns.keys().next()?;
        let max_col = *self.columns.keys().next_back()?;
        Some((
            Address::new(min_col, first.row),
            Address::new(max_col, last.row),
        ))
    }

    /// Cells on the row (`Horizontal`) or column (`Vertical`) numbered `line`,
    /// in increasing order along the axis.
    pub fn line(&self, axis: Axis, line: u32) -> Box<dyn DoubleEndedIterator<Item = &Cell> + '_> {
        match axis {
            Axis::Horizontal => Box::new(
                self.cells
                    .range(Address::new(1, line)..=Address::new(u32::MAX, line))
                    .map(|(_, c)| c),
            ),
            Axis::Vertical => match self.columns.get(&line) {
                Some(rows) => Box::new(
                    rows.iter()
                        .map(move |&r| &self.cells[&Address::new(line, r)]),
                ),
                None => Box::new(std::iter::empty()),
            },
        }
    }

    /// Cells after `from` along `axis` (to the right for `Horizontal`,
    /// below for `Vertical`), nearest first.
    pub fn after(&self, from: Address, axis: Axis) -> Box<dyn Iterator<Item = &Cell> + '_> {
        match axis {
            Axis::Horizontal => Box::new(
                self.cells
                    .range(
                        Address::new(from.column.saturating_add(1), from.row)
                            ..=Address::new(u32::MAX, from.row),
                    )
                    .filter(move |(a, _)| a.column > from.column)
                    .map(|(_, c)| c),
            ),
            Axis::Vertical => match self.columns.get(&from.column) {
                Some(rows) => Box::new(
                    rows.range(from.row.saturating_add(1)..)
                        .filter(move |&&r| r > from.row)
                        .map(move |&r| &self.cells[&Address::new(from.column, r)]),
                ),
                None => Box::new(std::iter::empty()),
            },
        }
    }

    /// Non-empty cells strictly between `a` and `b`, which must share a row
    /// or a column, in order along that axis.
    pub fn cells_between(&self, a: Address, b: Address) -> Result<Vec<&Cell>> {
        let axis = a
            .shared_axis(&b)
            .ok_or_else(|| Error::Usage(format!("{a} and {b} share neither a row nor a column")))?;
        let (lo, hi) = if a.along(axis) <= b.along(axis) {
            (a, b)
        } else {
            (b, a)
        };
        Ok(self
            .after(lo, axis)
            .take_while(|c| c.address.along(axis) < hi.along(axis))
            .collect())
    }
}
