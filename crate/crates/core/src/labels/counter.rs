use std::collections::HashSet;

use super::chain::build_chains;
use super::{LabelChain, LabelKind, NumberPosition};
use crate::sheet::{Address, CellValue, Sheet};

/// Longest digit run accepted as a counter number; keeps the value exact in
/// an `f64`.
const MAX_DIGITS: usize = 15;

/// A counter label split into its word part and number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterParts {
    pub stem: String,
    pub number: u64,
    pub position: NumberPosition,
}

/// All readings of `text` as stem+number or number+stem. The number is the
/// maximal digit run at that end; at most one blank may separate it from the
/// stem, and the stem character next to the number must be alphanumeric.
pub fn split_counter(text: &str) -> Vec<CounterParts> {
    let mut out = Vec::new();
    let back_digits = text.bytes().rev().take_while(u8::is_ascii_digit).count();
    if let Some(stem) = stem_of(
        &text[..text.len() - back_digits],
        back_digits,
        |s| s.strip_suffix(' '),
        |s| s.chars().next_back(),
    ) {
        if let Ok(number) = text[text.len() - back_digits..].parse() {
            out.push(CounterParts {
                stem: stem.to_string(),
                number,
                position: NumberPosition::Back,
            });
        }
    }
    let front_digits = text.bytes().take_while(u8::is_ascii_digit).count();
    if let Some(stem) = stem_of(
        &text[front_digits..],
        front_digits,
        |s| s.strip_prefix(' '),
        |s| s.chars().next(),
    ) {
        if let Ok(number) = text[..front_digits].parse() {
            out.push(CounterParts {
                stem: stem.to_string(),
                number,
                position: NumberPosition::Front,
            });
        }
    }
    out
}

fn stem_of<'a>(
    rest: &'a str,
    digits: usize,
    strip_blank: impl Fn(&'a str) -> Option<&'a str>,
    boundary: impl Fn(&str) -> Option<char>,
) -> Option<&'a str> {
    if digits == 0 || digits > MAX_DIGITS {
        return None;
    }
    let stem = strip_blank(rest).unwrap_or(rest);
    boundary(stem).filter(|c| c.is_alphanumeric()).map(|_| stem)
}

pub fn detect_counters(sheet: &Sheet) -> Vec<LabelChain> {
    detect_counters_with(sheet, 1, &HashSet::new())
}

pub fn detect_counters_with(
    sheet: &Sheet,
    step: i64,
    claimed: &HashSet<Address>,
) -> Vec<LabelChain> {
    let mut out = Vec::new();
    for position in [NumberPosition::Back, NumberPosition::Front] {
        let chains = build_chains(sheet, claimed, step, |c| match (&c.value, &c.formula) {
            (CellValue::Text(t), None) => split_counter(t)
                .into_iter()
                .find(|p| p.position == position)
                .map(|p| (p.number as f64, p.stem)),
            _ => None,
        });
        for (members, axis, stem) in chains {
            out.push(LabelChain {
                stem: Some(stem),
                number_position: Some(position),
                ..LabelChain::chain(LabelKind::Counter, members, axis, step)
            });
        }
    }
    out
}
