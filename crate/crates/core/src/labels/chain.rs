//! Chains of consecutive cells whose numeric interpretations increase by a
//! fixed step. Shared by running numbers, ordinal labels and counters.

use std::collections::{BTreeMap, HashSet};

use super::{LabelChain, LabelKind};
use crate::sheet::{Address, Axis, Cell, Sheet};

/// Links every pair of neighbouring cells (no stored cell between them) on a
/// row or column when both are eligible, share a key and the second value is
/// the first plus `step`; returns the maximal runs of length two or more.
///
/// Claimed cells are not eligible but still sit between their neighbours.
pub(crate) fn build_chains<K: PartialEq>(
    sheet: &Sheet,
    claimed: &HashSet<Address>,
    step: i64,
    mut value_of: impl FnMut(&Cell) -> Option<(f64, K)>,
) -> Vec<(Vec<Address>, Axis, K)> {
    let mut out = Vec::new();
    for axis in [Axis::Horizontal, Axis::Vertical] {
        for line in sheet.lines(axis) {
            let mut run: Vec<Address> = Vec::new();
            let mut prev: Option<(Address, Option<(f64, K)>)> = None;
            for cell in sheet.line(axis, line) {
                let cur = if claimed.contains(&cell.address) {
                    None
                } else {
                    value_of(cell)
                };
                let linked = match (&prev, &cur) {
                    (Some((_, Some((pv, pk)))), Some((cv, ck))) => {
                        pk == ck && *cv == *pv + step as f64
                    }
                    _ => false,
                };
                if linked {
                    if run.is_empty() {
                        run.push(prev.as_ref().unwrap().0);
                    }
                    run.push(cell.address);
                } else if run.len() >= 2 {
                    let key = prev.take().unwrap().1.unwrap().1;
                    out.push((std::mem::take(&mut run), axis, key));
                } else {
                    run.clear();
                }
                prev = Some((cell.address, cur));
            }
            if run.len() >= 2 {
                let key = prev.take().unwrap().1.unwrap().1;
                out.push((run, axis, key));
            }
        }
    }
    out
}

/// Running numbers: numeric cells without a formula, each the previous
/// value plus one, with no other cell between neighbours.
pub fn detect_running_numbers(sheet: &Sheet) -> Vec<LabelChain> {
    detect_running_numbers_with(sheet, 1, &HashSet::new())
}

pub fn detect_running_numbers_with(
    sheet: &Sheet,
    step: i64,
    claimed: &HashSet<Address>,
) -> Vec<LabelChain> {
    build_chains(sheet, claimed, step, |c| {
        if c.has_formula() {
            return None;
        }
        c.value.as_number().map(|n| (n, ()))
    })
    .into_iter()
    .map(|(members, axis, ())| LabelChain::chain(LabelKind::RunningNumber, members, axis, step))
    .collect()
}

/// Makes chains of one kind disjoint. Where chains share a cell the longer
/// one keeps it; on a tie none does. Chains losing a cell are split there
/// and fragments shorter than two are dropped.
pub fn resolve_overlaps(mut chains: Vec<LabelChain>) -> Vec<LabelChain> {
    loop {
        let mut owners: BTreeMap<Address, Vec<usize>> = BTreeMap::new();
        for (i, c) in chains.iter().enumerate() {
            for m in &c.members {
                owners.entry(*m).or_default().push(i);
            }
        }
        let Some((cell, idxs)) = owners.into_iter().find(|(_, v)| v.len() > 1) else {
            break;
        };
        let longest = idxs.iter().map(|&i| chains[i].len()).max().unwrap_or(0);
        let winners: Vec<usize> = idxs
            .iter()
            .copied()
            .filter(|&i| chains[i].len() == longest)
            .collect();
        let losers: HashSet<usize> = if winners.len() == 1 {
            idxs.into_iter().filter(|&i| i != winners[0]).collect()
        } else {
            idxs.into_iter().collect()
        };
        let mut next = Vec::with_capacity(chains.len() + losers.len());
        for (i, c) in chains.into_iter().enumerate() {
            if !losers.contains(&i) {
                next.push(c);
                continue;
            }
            for part in c.members.split(|a| *a == cell) {
                if part.len() >= 2 {
                    next.push(LabelChain {
                        members: part.to_vec(),
                        ..c.clone()
                    });
                }
            }
        }
        chains = next;
    }
    chains.sort_by(|a, b| a.members[0].cmp(&b.members[0]).then(a.axis.cmp(&b.axis)));
    chains
}
