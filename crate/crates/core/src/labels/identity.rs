use std::collections::{BTreeMap, HashSet};

use super::{common_axis, LabelChain, LabelKind};
use crate::sheet::{Address, CellValue, Sheet};

fn label_text<'a>(sheet: &'a Sheet, claimed: &HashSet<Address>) -> Vec<(Address, &'a str)> {
    sheet
        .iter()
        .filter(|c| !claimed.contains(&c.address))
        .filter_map(|c| match (&c.value, &c.formula) {
            (CellValue::Text(t), None) => Some((c.address, t.as_str())),
            _ => None,
        })
        .collect()
}

fn group(kind: LabelKind, members: Vec<Address>, stem: String) -> LabelChain {
    LabelChain {
        kind,
        axis: common_axis(&members),
        members,
        stem: Some(stem),
        step: None,
        number_position: None,
    }
}

/// Unclaimed text labels with byte-equal values, groups of two or more.
pub fn detect_complete_identity(sheet: &Sheet, claimed: &HashSet<Address>) -> Vec<LabelChain> {
    let mut by_value: BTreeMap<&str, Vec<Address>> = BTreeMap::new();
    for (addr, text) in label_text(sheet, claimed) {
        by_value.entry(text).or_default().push(addr);
    }
    let mut out: Vec<LabelChain> = by_value
        .into_iter()
        .filter(|(_, members)| members.len() >= 2)
        .map(|(text, members)| group(LabelKind::CompleteIdentity, members, text.to_string()))
        .collect();
    out.sort_by_key(|g| g.members[0]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Prefix,
    Suffix,
}

/// Whether two labels of at least two words share the first or last `m`
/// words for some `m` below both word counts.
pub fn partially_identical(a: &str, b: &str) -> bool {
    let wa: Vec<&str> = a.split_whitespace().collect();
    let wb: Vec<&str> = b.split_whitespace().collect();
    let limit = wa.len().min(wb.len());
    limit >= 2 && (wa[0] == wb[0] || wa[wa.len() - 1] == wb[wb.len() - 1])
}

/// Unclaimed text labels of two or more words grouped by a shared word
/// prefix or suffix. Longer shared parts are tried first and prefixes before
/// suffixes; each label joins at most one group.
pub fn detect_partial_identity(sheet: &Sheet, claimed: &HashSet<Address>) -> Vec<LabelChain> {
    let mut keys: BTreeMap<(std::cmp::Reverse<usize>, Side, String), Vec<Address>> =
        BTreeMap::new();
    for (addr, text) in label_text(sheet, claimed) {
        let words: Vec<&str> = text.split_whitespace().collect();
        let n = words.len();
        for m in 1..n {
            keys.entry((std::cmp::Reverse(m), Side::Prefix, words[..m].join(" ")))
                .or_default()
                .push(addr);
            keys.entry((std::cmp::Reverse(m), Side::Suffix, words[n - m..].join(" ")))
                .or_default()
                .push(addr);
        }
    }
    let mut taken: HashSet<Address> = HashSet::new();
    let mut out = Vec::new();
    for ((_, _, stem), members) in keys {
        let members: Vec<Address> = members.into_iter().filter(|a| !taken.contains(a)).collect();
        if members.len() >= 2 {
            taken.extend(members.iter().copied());
            out.push(group(LabelKind::PartialIdentity, members, stem));
        }
    }
    out.sort_by_key(|g| g.members[0]);
    out
}

/// Complete groups, then partial groups over the labels left over.
pub fn detect_identity_groups(sheet: &Sheet) -> (Vec<LabelChain>, Vec<LabelChain>) {
    let complete = detect_complete_identity(sheet, &HashSet::new());
    let claimed: HashSet<Address> = complete
        .iter()
        .flat_map(|g| g.members.iter().copied())
        .collect();
    let partial = detect_partial_identity(sheet, &claimed);
    (complete, partial)
}
