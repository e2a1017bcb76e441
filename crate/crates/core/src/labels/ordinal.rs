use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Deserialize;

use super::chain::build_chains;
use super::{LabelChain, LabelKind};
use crate::error::{Error, Result};
use crate::sheet::{Address, CellValue, Sheet};

const MONTHS: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];
const WEEKDAYS: [&str; 7] = [
    "Monday",
    "Tuesday",
    "Wednesday",
    "Thursday",
    "Friday",
    "Saturday",
    "Sunday",
];

/// Injective mapping from label text to an ordinal number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalDictionary {
    name: String,
    entries: BTreeMap<String, u64>,
}

impl OrdinalDictionary {
    pub fn new(
        name: impl Into<String>,
        entries: impl IntoIterator<Item = (String, u64)>,
    ) -> Result<Self> {
        let name = name.into();
        let entries: BTreeMap<String, u64> = entries.into_iter().collect();
        let mut seen: HashMap<u64, &str> = HashMap::new();
        for (k, v) in &entries {
            if let Some(prev) = seen.insert(*v, k) {
                return Err(Error::Config(format!(
                    "ordinal dictionary {name}: {prev:?} and {k:?} both map to {v}"
                )));
            }
        }
        Ok(OrdinalDictionary { name, entries })
    }

    /// Parses a JSON object `{"label": number, ...}`.
    pub fn from_json(name: impl Into<String>, bytes: &[u8]) -> Result<Self> {
        let name = name.into();
        #[derive(Deserialize)]
        #[serde(transparent)]
        struct Raw(BTreeMap<String, u64>);
        let raw: Raw = serde_json::from_slice(bytes)
            .map_err(|e| Error::Config(format!("ordinal dictionary {name}: {e}")))?;
        Self::new(name, raw.0)
    }

    pub fn months() -> Self {
        Self::builtin("months", &MONTHS)
    }

    pub fn weekdays() -> Self {
        Self::builtin("weekdays", &WEEKDAYS)
    }

    /// Months then weekdays.
    pub fn builtins() -> Vec<Self> {
        vec![Self::months(), Self::weekdays()]
    }

    fn builtin(name: &str, words: &[&str]) -> Self {
        OrdinalDictionary {
            name: name.to_string(),
            entries: words
                .iter()
                .zip(1..)
                .map(|(w, i)| (w.to_string(), i))
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact lookup; the text is not trimmed or case-folded.
    pub fn lookup(&self, label: &str) -> Option<u64> {
        self.entries.get(label).copied()
    }
}

pub fn detect_ordinal_labels(sheet: &Sheet, dict: &OrdinalDictionary) -> Vec<LabelChain> {
    detect_ordinal_labels_with(sheet, dict, 1, &HashSet::new())
}

pub fn detect_ordinal_labels_with(
    sheet: &Sheet,
    dict: &OrdinalDictionary,
    step: i64,
    claimed: &HashSet<Address>,
) -> Vec<LabelChain> {
    build_chains(sheet, claimed, step, |c| match (&c.value, &c.formula) {
        (CellValue::Text(t), None) => dict.lookup(t).map(|n| (n as f64, ())),
        _ => None,
    })
    .into_iter()
    .map(|(members, axis, ())| LabelChain::chain(LabelKind::OrdinalLabel, members, axis, step))
    .collect()
}
