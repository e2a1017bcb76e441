use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{
    detect_complete_identity, detect_counters_with, detect_ordinal_labels_with,
    detect_partial_identity, detect_running_numbers_with, resolve_overlaps, LabelChain, LabelKind,
    OrdinalDictionary,
};
use crate::sheet::{Address, Sheet};

#[derive(Debug, Clone)]
pub struct LabelOptions {
    /// Tried in order; put user dictionaries before the built-ins.
    pub dictionaries: Vec<OrdinalDictionary>,
    pub step: i64,
    /// Detection order. Defaults to the label hierarchy.
    pub order: Vec<LabelKind>,
}

impl Default for LabelOptions {
    fn default() -> Self {
        LabelOptions {
            dictionaries: OrdinalDictionary::builtins(),
            step: 1,
            order: LabelKind::ALL.to_vec(),
        }
    }
}

/// Role of a label cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelClass {
    Kind(LabelKind),
    Plain,
}

impl LabelClass {
    pub fn name(self) -> &'static str {
        match self {
            LabelClass::Kind(k) => k.name(),
            LabelClass::Plain => "plain",
        }
    }
}

impl fmt::Display for LabelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for LabelClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Every label of a sheet: chains and groups, plus the plain text labels
/// that belong to none.
#[derive(Debug, Clone, Default)]
pub struct LabelCatalog {
    pub chains: Vec<LabelChain>,
    pub plain: Vec<Address>,
    roles: HashMap<Address, usize>,
    order: Vec<LabelKind>,
}

impl LabelCatalog {
    /// The chain or group holding `addr`, with its index in `chains`.
    pub fn chain_of(&self, addr: Address) -> Option<(usize, &LabelChain)> {
        self.roles.get(&addr).map(|&i| (i, &self.chains[i]))
    }

    pub fn class_of(&self, addr: Address) -> Option<LabelClass> {
        if let Some((_, c)) = self.chain_of(addr) {
            Some(LabelClass::Kind(c.kind))
        } else if self.plain.binary_search(&addr).is_ok() {
            Some(LabelClass::Plain)
        } else {
            None
        }
    }

    pub fn is_label(&self, addr: Address) -> bool {
        self.class_of(addr).is_some()
    }

    /// All label cells in address order.
    pub fn labels(&self) -> Vec<Address> {
        let mut all: Vec<Address> = self
            .roles
            .keys()
            .copied()
            .chain(self.plain.iter().copied())
            .collect();
        all.sort();
        all
    }

    pub fn len(&self) -> usize {
        self.roles.len() + self.plain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn of_kind(&self, kind: LabelKind) -> impl Iterator<Item = (usize, &LabelChain)> + '_ {
        self.chains
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.kind == kind)
    }

    /// Position of `class` in the detection order; plain labels rank last.
    pub fn rank(&self, class: LabelClass) -> usize {
        match class {
            LabelClass::Kind(k) => self
                .order
                .iter()
                .position(|o| *o == k)
                .unwrap_or(self.order.len()),
            LabelClass::Plain => self.order.len() + 1,
        }
    }

    pub fn order(&self) -> &[LabelKind] {
        &self.order
    }
}

pub fn classify_labels(sheet: &Sheet, user_dictionaries: &[OrdinalDictionary]) -> LabelCatalog {
    let mut dictionaries = user_dictionaries.to_vec();
    dictionaries.extend(OrdinalDictionary::builtins());
    classify_labels_with(
        sheet,
        &LabelOptions {
            dictionaries,
            ..LabelOptions::default()
        },
    )
}

pub fn classify_labels_with(sheet: &Sheet, options: &LabelOptions) -> LabelCatalog {
    let mut claimed: HashSet<Address> = HashSet::new();
    let mut chains: Vec<LabelChain> = Vec::new();
    let mut seen = HashSet::new();
    for &kind in &options.order {
        if !seen.insert(kind) {
            continue;
        }
        let found: Vec<Vec<LabelChain>> = match kind {
            LabelKind::RunningNumber => {
                vec![detect_running_numbers_with(sheet, options.step, &claimed)]
            }
            LabelKind::OrdinalLabel => {
                let mut per_dict = Vec::new();
                for dict in &options.dictionaries {
                    let resolved = resolve_overlaps(detect_ordinal_labels_with(
                        sheet,
                        dict,
                        options.step,
                        &claimed,
                    ));
                    claim(&mut claimed, &resolved);
                    per_dict.push(resolved);
                }
                per_dict
            }
            LabelKind::Counter => vec![detect_counters_with(sheet, options.step, &claimed)],
            LabelKind::CompleteIdentity => vec![detect_complete_identity(sheet, &claimed)],
            LabelKind::PartialIdentity => vec![detect_partial_identity(sheet, &claimed)],
        };
        for batch in found {
            let batch = if kind.is_chain() {
                resolve_overlaps(batch)
            } else {
                batch
            };
            claim(&mut claimed, &batch);
            chains.extend(batch);
        }
    }
    let mut roles = HashMap::new();
    for (i, c) in chains.iter().enumerate() {
        for m in &c.members {
            roles.insert(*m, i);
        }
    }
    let plain = sheet
        .iter()
        .filter(|c| c.is_text_label() && !roles.contains_key(&c.address))
        .map(|c| c.address)
        .collect();
    LabelCatalog {
        chains,
        plain,
        roles,
        order: options.order.clone(),
    }
}

fn claim(claimed: &mut HashSet<Address>, chains: &[LabelChain]) {
    for c in chains {
        claimed.extend(c.members.iter().copied());
    }
}
