//! Random sheets and brute-force reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use layout_areas::labels::{LabelCatalog, OrdinalDictionary};
use layout_areas::sheet::{
    load_sheet, Address, Axis, Cell, CellValue, Formatting, Locale, Sheet, SheetFormat, StyleFlag,
};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Sheet {
    let bytes = std::fs::read(fixture_path(name)).expect("fixture exists");
    load_sheet(&bytes, SheetFormat::Json, Locale::CommaDecimal).expect("fixture loads")
}

pub fn a(s: &str) -> Address {
    s.parse().unwrap()
}

pub fn addrs(list: &[&str]) -> Vec<Address> {
    list.iter().map(|s| a(s)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const TEXTS: &[&str] = &[
    "January",
    "February",
    "March",
    "April",
    "Monday",
    "Tuesday",
    "Wednesday",
    "Q1",
    "Q2",
    "Q3",
    "Q 2",
    "Q 3",
    "Q  4",
    "Q-1",
    "Q-2",
    "1 Q",
    "2 Q",
    "3 Q",
    "Year 1",
    "Year 2",
    "Year3",
    "Net total",
    "Gross total",
    "Net income",
    "Cash flow x",
    "Cash flow y",
    "Cash flow to Present Value",
    "Budget",
    "Budget",
    "Actual",
    "Total",
    "x",
    "x1 2",
    "x1 3",
    "%",
];

const MONTHS: [&str; 8] = [
    "", "January", "February", "March", "April", "May", "June", "July",
];

const FORMULAS: &[&str] = &[
    "=A1+1",
    "=B2*2",
    "=SUM(A1:A3)",
    "=$A$1+B1",
    "=A$1-$B2",
    "=C3/2",
    "=SUM(B1:B2)+1",
    "=A1+",
    "=IF(A1>0;1;2)",
];

/// A sparse grid of up to `max` × `max` cells drawn from small pools so that
/// chains, counters and identical labels show up often.
pub fn random_sheet(rng: &mut ChaCha8Rng, max: u32) -> Sheet {
    let cols = rng.gen_range(1..=max);
    let rows = rng.gen_range(1..=max);
    let density = rng.gen_range(0.2..0.9);
    let formats = [
        Formatting::default(),
        Formatting::new("Arial", 12.0, &[StyleFlag::Bold]),
        Formatting::new("Arial", 10.0, &[]),
    ];
    let mut cells: BTreeMap<Address, Cell> = BTreeMap::new();
    for _ in 0..rng.gen_range(0..3) {
        let start = Address::new(rng.gen_range(1..=cols), rng.gen_range(1..=rows));
        let horizontal = rng.gen_bool(0.5);
        let first = rng.gen_range(1..4u32);
        let family = rng.gen_range(0..5);
        for i in 0..rng.gen_range(2..5u32) {
            let addr = if horizontal {
                Address::new(start.column + i, start.row)
            } else {
                Address::new(start.column, start.row + i)
            };
            if addr.column > cols || addr.row > rows {
                break;
            }
            let n = first + i;
            let value = match family {
                0 => CellValue::Number(n as f64),
                1 => CellValue::Text(MONTHS[n as usize].to_string()),
                2 => CellValue::Text(format!("Q {n}")),
                3 => CellValue::Text(format!("{n} Q")),
                _ => CellValue::Text(format!("Year{n}")),
            };
            cells.insert(addr, Cell::new(addr, value));
        }
    }
    for row in 1..=rows {
        for col in 1..=cols {
            let addr = Address::new(col, row);
            if cells.contains_key(&addr) || !rng.gen_bool(density) {
                continue;
            }
            let formatting = formats.choose(rng).unwrap().clone();
            let cell = match rng.gen_range(0..10) {
                0..=2 => Cell::new(addr, CellValue::Number(rng.gen_range(1..7) as f64)),
                3 => Cell::new(addr, CellValue::Number(rng.gen_range(0.0..100.0))),
                4..=6 => Cell::new(
                    addr,
                    CellValue::Text(TEXTS.choose(rng).unwrap().to_string()),
                ),
                7 | 8 => Cell::new(addr, CellValue::Number(rng.gen_range(1..7) as f64))
                    .with_formula(*FORMULAS.choose(rng).unwrap()),
                _ => Cell::new(addr, CellValue::Undefined),
            };
            let formatting = if cell.value.is_undefined() {
                formats[1 + rng.gen_range(0..2)].clone()
            } else {
                formatting
            };
            cells.insert(addr, cell.with_formatting(formatting));
        }
    }
    Sheet::from_cells("random", cells.into_values()).expect("generated sheet is valid")
}

/// Whether some stored cell lies strictly between `a` and `b` (same line).
fn occupied_between(sheet: &Sheet, a: Address, b: Address) -> bool {
    sheet.iter().any(|c| {
        let x = c.address;
        (x.row == a.row
            && a.row == b.row
            && x.column > a.column.min(b.column)
            && x.column < a.column.max(b.column))
            || (x.column == a.column
                && a.column == b.column
                && x.row > a.row.min(b.row)
                && x.row < a.row.max(b.row))
    })
}

fn after(a: Address, b: Address) -> bool {
    (a.row == b.row && b.column > a.column) || (a.column == b.column && b.row > a.row)
}

/// All ordered pairs of neighbouring cells (nothing stored between them)
/// where `related(first, second)` holds.
pub fn neighbour_pairs(
    sheet: &Sheet,
    related: impl Fn(&Cell, &Cell) -> bool,
) -> BTreeSet<(Address, Address)> {
    let mut out = BTreeSet::new();
    for c1 in sheet.iter() {
        for c2 in sheet.iter() {
            if after(c1.address, c2.address)
                && related(c1, c2)
                && !occupied_between(sheet, c1.address, c2.address)
            {
                out.insert((c1.address, c2.address));
            }
        }
    }
    out
}

pub fn running_pairs(sheet: &Sheet) -> BTreeSet<(Address, Address)> {
    neighbour_pairs(sheet, |c1, c2| {
        match (&c1.value, &c2.value, &c1.formula, &c2.formula) {
            (CellValue::Number(x), CellValue::Number(y), None, None) => *y == *x + 1.0,
            _ => false,
        }
    })
}

pub fn ordinal_pairs(sheet: &Sheet, dict: &OrdinalDictionary) -> BTreeSet<(Address, Address)> {
    neighbour_pairs(sheet, |c1, c2| {
        match (&c1.value, &c2.value, &c1.formula, &c2.formula) {
            (CellValue::Text(x), CellValue::Text(y), None, None) => {
                match (dict.lookup(x), dict.lookup(y)) {
                    (Some(i), Some(j)) => j == i + 1,
                    _ => false,
                }
            }
            _ => false,
        }
    })
}

/// Every way to read `text` as stem + number (`back`) or number + stem,
/// found by trying each split point.
pub fn counter_readings(text: &str, back: bool) -> Vec<(String, u64)> {
    let mut out = Vec::new();
    let bounds: Vec<usize> = text
        .char_indices()
        .map(|(i, _)| i)
        .chain([text.len()])
        .collect();
    for &k in &bounds {
        let (stem, digits) = if back {
            (&text[..k], &text[k..])
        } else {
            (&text[k..], &text[..k])
        };
        if digits.is_empty() || digits.len() > 15 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        let boundary = |s: &str| {
            if back {
                s.chars().last()
            } else {
                s.chars().next()
            }
        };
        let stripped = if back {
            stem.strip_suffix(' ')
        } else {
            stem.strip_prefix(' ')
        };
        let ok_stem = match stripped {
            Some(inner) => boundary(inner)
                .is_some_and(|c| c.is_alphanumeric())
                .then_some(inner),
            None => boundary(stem)
                .is_some_and(|c| c.is_alphanumeric() && !c.is_ascii_digit())
                .then_some(stem),
        };
        if let Some(s) = ok_stem {
            out.push((s.to_string(), digits.parse().unwrap()));
        }
    }
    out
}

pub fn counter_pairs(sheet: &Sheet, back: bool) -> BTreeSet<(Address, Address)> {
    let readings: BTreeMap<Address, Vec<(String, u64)>> = sheet
        .iter()
        .filter_map(|c| match (&c.value, &c.formula) {
            (CellValue::Text(t), None) => Some((c.address, counter_readings(t, back))),
            _ => None,
        })
        .collect();
    neighbour_pairs(sheet, |c1, c2| {
        match (readings.get(&c1.address), readings.get(&c2.address)) {
            (Some(rx), Some(ry)) => rx
                .iter()
                .any(|(s1, n1)| ry.iter().any(|(s2, n2)| s1 == s2 && *n2 == n1 + 1)),
            _ => false,
        }
    })
}

/// Text labels sharing the first or last `m` words, `m` below both word
/// counts, by trying every `m`.
pub fn partial_identity(x: &str, y: &str) -> bool {
    let wx: Vec<&str> = x.split_whitespace().collect();
    let wy: Vec<&str> = y.split_whitespace().collect();
    (1..wx.len().min(wy.len()))
        .any(|m| wx[..m] == wy[..m] || wx[wx.len() - m..] == wy[wy.len() - m..])
}

/// Whether `c1` and `c2` are connected in `set` when members at most `d`
/// empty positions apart (same line) are linked. Breadth-first search.
pub fn dense_closure(set: &BTreeSet<Address>, c1: Address, c2: Address, d: u32) -> bool {
    let mut seen = BTreeSet::from([c1]);
    let mut queue = VecDeque::from([c1]);
    while let Some(x) = queue.pop_front() {
        if x == c2 {
            return true;
        }
        for &y in set {
            let gap = if x.row == y.row {
                x.column.abs_diff(y.column)
            } else if x.column == y.column {
                x.row.abs_diff(y.row)
            } else {
                continue;
            };
            if gap >= 1 && gap - 1 <= d && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// Geometric assignment from first principles: candidates are unowned,
/// non-text, non-label cells after the label on an arm with no label in
/// between; the result is the longest leading run of candidates all
/// connected to the label under `dense_closure`.
pub fn geometric_oracle(
    sheet: &Sheet,
    catalog: &LabelCatalog,
    label: Address,
    arm: Axis,
    d: u32,
    owned: &BTreeSet<Address>,
) -> Vec<Address> {
    let on_arm = |c: Address| match arm {
        Axis::Horizontal => c.row == label.row && c.column > label.column,
        Axis::Vertical => c.column == label.column && c.row > label.row,
    };
    let labels = catalog.labels();
    let mut candidates: Vec<Address> = sheet
        .iter()
        .filter(|c| on_arm(c.address))
        .filter(|c| {
            !catalog.is_label(c.address) && !c.value.is_text() && !owned.contains(&c.address)
        })
        .filter(|c| {
            !labels
                .iter()
                .any(|&l| on_arm(l) && l.along(arm) < c.address.along(arm))
        })
        .map(|c| c.address)
        .collect();
    candidates.sort_by_key(|c| c.along(arm));
    for len in (0..=candidates.len()).rev() {
        let prefix: BTreeSet<Address> = candidates[..len].iter().copied().chain([label]).collect();
        if candidates[..len]
            .iter()
            .all(|&c| dense_closure(&prefix, label, c, d))
        {
            return candidates[..len].to_vec();
        }
    }
    Vec::new()
}

/// Groups equal values by comparing every pair.
pub fn equal_value_groups(items: &[(Address, String)]) -> BTreeSet<Vec<Address>> {
    let mut groups: BTreeMap<usize, Vec<Address>> = BTreeMap::new();
    for (addr, v) in items {
        let first = items.iter().position(|(_, w)| w == v).unwrap();
        groups.entry(first).or_default().push(*addr);
    }
    groups.into_values().filter(|g| g.len() >= 2).collect()
}

pub mod checks;
