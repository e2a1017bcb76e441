//! Label detection.
//!
//! Five kinds of labels are recognised, in a fixed hierarchy: running
//! numbers, ordinal labels, counters, complete identity and partial
//! identity. [`classify_labels`] runs the detectors in that order and a cell
//! claimed by an earlier kind is no longer eligible for later ones.

mod catalog;
mod chain;
mod counter;
mod identity;
mod ordinal;

use std::fmt;

use serde::Serialize;

use crate::sheet::{Address, Axis};

pub use catalog::{classify_labels, classify_labels_with, LabelCatalog, LabelClass, LabelOptions};
pub use chain::{detect_running_numbers, detect_running_numbers_with, resolve_overlaps};
pub use counter::{detect_counters, detect_counters_with, split_counter, CounterParts};
pub use identity::{
    detect_complete_identity, detect_identity_groups, detect_partial_identity, partially_identical,
};
pub use ordinal::{detect_ordinal_labels, detect_ordinal_labels_with, OrdinalDictionary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelKind {
    RunningNumber,
    OrdinalLabel,
    Counter,
    CompleteIdentity,
    PartialIdentity,
}

impl LabelKind {
    /// Hierarchy order.
    pub const ALL: [LabelKind; 5] = [
        LabelKind::RunningNumber,
        LabelKind::OrdinalLabel,
        LabelKind::Counter,
        LabelKind::CompleteIdentity,
        LabelKind::PartialIdentity,
    ];

    /// Running numbers, ordinals and counters form chains; the identity
    /// kinds form groups that need not be contiguous.
    pub fn is_chain(self) -> bool {
        matches!(
            self,
            LabelKind::RunningNumber | LabelKind::OrdinalLabel | LabelKind::Counter
        )
    }

    /// The assignment heuristic that handles this kind (1 for chains, 2 for
    /// identity groups).
    pub fn heuristic(self) -> u8 {
        if self.is_chain() {
            1
        } else {
            2
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LabelKind::RunningNumber => "running-number",
            LabelKind::OrdinalLabel => "ordinal-label",
            LabelKind::Counter => "counter",
            LabelKind::CompleteIdentity => "complete-identity",
            LabelKind::PartialIdentity => "partial-identity",
        }
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which side of a counter label carries the number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumberPosition {
    Front,
    Back,
}

/// A set of related labels: a chain (running numbers, ordinals, counters)
/// or an identity group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelChain {
    pub kind: LabelKind,
    /// At least two, in increasing address order.
    pub members: Vec<Address>,
    /// Run direction. Always set for chains; set for identity groups only
    /// when all members share a row or a column.
    pub axis: Option<Axis>,
    /// Shared word(s) for counters and identity groups.
    pub stem: Option<String>,
    pub step: Option<i64>,
    pub number_position: Option<NumberPosition>,
}

impl LabelChain {
    pub(crate) fn chain(kind: LabelKind, members: Vec<Address>, axis: Axis, step: i64) -> Self {
        LabelChain {
            kind,
            members,
            axis: Some(axis),
            stem: None,
            step: Some(step),
            number_position: None,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Consecutive member pairs.
    pub fn links(&self) -> impl Iterator<Item = (Address, Address)> + '_ {
        self.members.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Axis shared by every member, if any.
pub(crate) fn common_axis(members: &[Address]) -> Option<Axis> {
    let first = members.first()?;
    if members.iter().all(|a| a.row == first.row) {
        Some(Axis::Horizontal)
    } else if members.iter().all(|a| a.column == first.column) {
        Some(Axis::Vertical)
    } else {
        None
    }
}
