//! Assigning cells to labels.
//!
//! A cell is geometrically assignable to a label when it lies to the right of
//! or below the label with no other label in between, and the assigned cells
//! form a dense run. Semantic assignment further requires the label's
//! formatting. [`run_pipeline`] applies the four heuristics in order.

mod pipeline;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::labels::{LabelCatalog, LabelClass};
use crate::sheet::{Address, Axis, Sheet};

pub use pipeline::{
    run_pipeline, AmbiguousCell, AnalysisResult, EquivalentChoice, PipelineConfig, StepTrace,
};

/// Maximum number of empty positions tolerated between neighbouring cells
/// of an assigned run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct GapParameter(pub u32);

impl fmt::Display for GapParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    RowOriented,
    ColumnOriented,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::RowOriented => "row-oriented",
            Orientation::ColumnOriented => "column-oriented",
        })
    }
}

/// A label and the cells assigned to it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutArea {
    pub label: Address,
    /// Assigned cells in address order, without the label.
    pub cells: Vec<Address>,
    pub orientation: Orientation,
    /// Heuristic 1–4.
    pub heuristic: u8,
    #[serde(rename = "kind")]
    pub class: LabelClass,
    /// Index of the label's chain or group in the catalog.
    #[serde(skip)]
    pub chain: Option<usize>,
}

impl LayoutArea {
    /// The label followed by the assigned cells.
    pub fn extent(&self) -> impl Iterator<Item = Address> + '_ {
        std::iter::once(self.label).chain(self.cells.iter().copied())
    }
}

/// Which cells are owned by which label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssignmentState {
    owner: BTreeMap<Address, Address>,
}

impl AssignmentState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn owner_of(&self, cell: Address) -> Option<Address> {
        self.owner.get(&cell).copied()
    }

    pub fn is_owned(&self, cell: Address) -> bool {
        self.owner.contains_key(&cell)
    }

    /// Fails if the cell already has an owner.
    pub fn assign(&mut self, cell: Address, label: Address) -> Result<()> {
        if let Some(prev) = self.owner.insert(cell, label) {
            self.owner.insert(cell, prev);
            return Err(Error::Integrity(format!(
                "{cell} is already assigned to {prev}"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }
}

/// Directions a label looks in: right along its row (`Horizontal`) and/or
/// down its column (`Vertical`). Members of a run look across the run; other
/// labels look both ways.
pub fn label_arms(catalog: &LabelCatalog, label: Address) -> Vec<Axis> {
    match catalog.chain_of(label).and_then(|(_, c)| c.axis) {
        Some(Axis::Vertical) => vec![Axis::Horizontal],
        Some(Axis::Horizontal) => vec![Axis::Vertical],
        None => vec![Axis::Horizontal, Axis::Vertical],
    }
}

/// Whether `c1` and `c2` are linked through members of `set` whose
/// neighbouring gaps are at most `d` empty positions. Both must lie on one
/// row or column.
pub fn dense(set: &BTreeSet<Address>, c1: Address, c2: Address, d: GapParameter) -> Result<bool> {
    let axis = c1
        .shared_axis(&c2)
        .ok_or_else(|| Error::Usage(format!("{c1} and {c2} share neither a row nor a column")))?;
    let (lo, hi) = if c1.along(axis) <= c2.along(axis) {
        (c1, c2)
    } else {
        (c2, c1)
    };
    let mut positions: Vec<u32> = set
        .iter()
        .filter(|a| {
            a.line(axis) == lo.line(axis)
                && a.along(axis) > lo.along(axis)
                && a.along(axis) < hi.along(axis)
        })
        .map(|a| a.along(axis))
        .collect();
    positions.push(hi.along(axis));
    positions.sort_unstable();
    let mut prev = lo.along(axis);
    for p in positions {
        if p - prev > d.0.saturating_add(1) {
            return Ok(false);
        }
        prev = p;
    }
    Ok(true)
}

/// Geometrically assignable cells along one arm, nearest first.
///
/// Stops at the next label. Text cells are passed over, as are cells already
/// owned in `state`; both still occupy their position, so they widen the gap.
/// The run ends at the first cell more than `d` positions past the previous
/// kept cell (or the label).
pub fn arm_assignable(
    sheet: &Sheet,
    catalog: &LabelCatalog,
    label: Address,
    arm: Axis,
    d: GapParameter,
    state: &AssignmentState,
) -> Vec<Address> {
    let mut kept = Vec::new();
    let mut prev = label.along(arm);
    for cell in sheet.after(label, arm) {
        if catalog.is_label(cell.address) {
            break;
        }
        if cell.value.is_text() || state.is_owned(cell.address) {
            continue;
        }
        let pos = cell.address.along(arm);
        if pos - prev - 1 > d.0 {
            break;
        }
        kept.push(cell.address);
        prev = pos;
    }
    kept
}

/// Union of [`arm_assignable`] over the label's arms, in address order.
pub fn geometric_assignable(
    sheet: &Sheet,
    catalog: &LabelCatalog,
    label: Address,
    d: GapParameter,
    state: &AssignmentState,
) -> Vec<Address> {
    let mut out: Vec<Address> = label_arms(catalog, label)
        .into_iter()
        .flat_map(|arm| arm_assignable(sheet, catalog, label, arm, d, state))
        .collect();
    out.sort();
    out
}

/// The leading part of [`arm_assignable`] whose cells carry the label's
/// formatting or are undefined. Any cell on the way with other formatting
/// and a defined value ends the run.
pub fn arm_semantic(
    sheet: &Sheet,
    catalog: &LabelCatalog,
    label: Address,
    arm: Axis,
    d: GapParameter,
    state: &AssignmentState,
) -> Vec<Address> {
    let geometric = arm_assignable(sheet, catalog, label, arm, d, state);
    let Some(last) = geometric.last().copied() else {
        return Vec::new();
    };
    let Some(label_cell) = sheet.get(label) else {
        return Vec::new();
    };
    let wanted: BTreeSet<Address> = geometric.into_iter().collect();
    let mut kept = Vec::new();
    for cell in sheet.after(label, arm) {
        if cell.address.along(arm) > last.along(arm) {
            break;
        }
        if !cell.value.is_undefined() && cell.formatting != label_cell.formatting {
            break;
        }
        if wanted.contains(&cell.address) {
            kept.push(cell.address);
        }
    }
    kept
}

pub fn semantic_assignable(
    sheet: &Sheet,
    catalog: &LabelCatalog,
    label: Address,
    d: GapParameter,
    state: &AssignmentState,
) -> Vec<Address> {
    let mut out: Vec<Address> = label_arms(catalog, label)
        .into_iter()
        .flat_map(|arm| arm_semantic(sheet, catalog, label, arm, d, state))
        .collect();
    out.sort();
    out
}

/// How a cell claimed by several labels is settled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Chosen(Address),
    /// Labels of the same kind; `chosen` is the one to the left of the cell.
    Equivalent {
        chosen: Address,
        others: Vec<Address>,
    },
    Ambiguous(Vec<Address>),
}

/// Picks the owner of `cell` among `candidates`. The label whose kind comes
/// first in the catalog's detection order wins, plain labels last. Among
/// labels of the same rank the one in the cell's row is chosen, unless
/// `ambiguous_ties` is set, in which case nobody gets the cell.
pub fn resolve_label_conflict(
    catalog: &LabelCatalog,
    cell: Address,
    candidates: &[Address],
    ambiguous_ties: bool,
) -> Resolution {
    let rank = |l: &Address| catalog.rank(catalog.class_of(*l).unwrap_or(LabelClass::Plain));
    let Some(best) = candidates.iter().map(rank).min() else {
        return Resolution::Ambiguous(Vec::new());
    };
    let mut top: Vec<Address> = candidates
        .iter()
        .copied()
        .filter(|l| rank(l) == best)
        .collect();
    top.sort();
    if top.len() == 1 {
        return Resolution::Chosen(top[0]);
    }
    if ambiguous_ties {
        return Resolution::Ambiguous(top);
    }
    let chosen = top
        .iter()
        .copied()
        .find(|l| l.row == cell.row)
        .unwrap_or(top[0]);
    let others = top.into_iter().filter(|l| *l != chosen).collect();
    Resolution::Equivalent { chosen, others }
}

/// Labels of a vertical run describe rows, labels of a horizontal run
/// describe columns. Any other label follows its cells: mostly to the right
/// means row-oriented, mostly below means column-oriented, ties row-oriented.
pub fn infer_orientation(catalog: &LabelCatalog, label: Address, cells: &[Address]) -> Orientation {
    match catalog.chain_of(label).and_then(|(_, c)| c.axis) {
        Some(Axis::Vertical) => Orientation::RowOriented,
        Some(Axis::Horizontal) => Orientation::ColumnOriented,
        None => {
            let right = cells
                .iter()
                .filter(|c| c.row == label.row && c.column > label.column)
                .count();
            let down = cells
                .iter()
                .filter(|c| c.column == label.column && c.row > label.row)
                .count();
            if down > right {
                Orientation::ColumnOriented
            } else {
                Orientation::RowOriented
            }
        }
    }
}
