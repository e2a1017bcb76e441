//! Abstractions over the layout areas: semantic classes of areas sharing a
//! label chain or group, logical areas inside semantically assigned areas,
//! and findings that point at likely errors.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::assign::{AnalysisResult, LayoutArea};
use crate::formula::{parse_formula, FormulaKey};
use crate::labels::LabelKind;
use crate::sheet::{Address, CellValue, Sheet};

/// Position of a cell relative to its area's label: (columns, rows).
pub type Offset = (i64, i64);

pub fn offset_of(label: Address, cell: Address) -> Offset {
    (
        cell.column as i64 - label.column as i64,
        cell.row as i64 - label.row as i64,
    )
}

/// What two aligned cells are compared by. Formulas compare as copies, every
/// constant number matches every other, and undefined cells match each
/// other.
#[derive(Debug, Clone, PartialEq)]
pub enum CellKey {
    Formula(FormulaKey),
    Numeric,
    Undefined,
    Text,
}

impl CellKey {
    pub fn of(sheet: &Sheet, cell: Address) -> CellKey {
        let Some(c) = sheet.get(cell) else {
            return CellKey::Undefined;
        };
        match (&c.formula, &c.value) {
            (Some(f), _) => CellKey::Formula(FormulaKey::of(f, cell)),
            (None, CellValue::Number(_)) => CellKey::Numeric,
            (None, CellValue::Undefined) => CellKey::Undefined,
            (None, CellValue::Text(_)) => CellKey::Text,
        }
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellKey::Formula(k) => write!(f, "{k}"),
            CellKey::Numeric => f.write_str("number"),
            CellKey::Undefined => f.write_str("undefined"),
            CellKey::Text => f.write_str("text"),
        }
    }
}

/// Areas of one label chain or group whose aligned cells all agree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemanticClass {
    /// Labels of the member areas.
    pub labels: Vec<Address>,
    /// Indices into the analysis' areas.
    #[serde(skip)]
    pub areas: Vec<usize>,
    pub kind: LabelKind,
    /// Every offset covered by some member, with the shared key rendered.
    pub alignment: Vec<AlignedOffset>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignedOffset {
    pub offset: Offset,
    pub key: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Copy,
    Structural,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Copy => "copy",
            Relation::Structural => "structural",
        })
    }
}

/// Formula cells of one area related by copy or structural equivalence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogicalArea {
    pub label: Address,
    pub cells: Vec<Address>,
    pub relation: Relation,
    /// Formula of the first cell with relative references written as offsets.
    pub formula: String,
    #[serde(skip)]
    pub area: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    IrregularUnit,
    UnassignedCell,
    AmbiguousAssignment,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::IrregularUnit => "irregular-unit",
            FindingKind::UnassignedCell => "unassigned-cell",
            FindingKind::AmbiguousAssignment => "ambiguous-assignment",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub subject: Vec<Address>,
    pub detail: String,
}

/// Areas of heuristics 1 and 2, grouped by label chain or group, in area
/// order.
fn label_sets(result: &AnalysisResult) -> BTreeMap<usize, Vec<usize>> {
    let mut sets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, area) in result.areas.iter().enumerate() {
        if let (1 | 2, Some(chain)) = (area.heuristic, area.chain) {
            sets.entry(chain).or_default().push(i);
        }
    }
    sets
}

fn keyed(sheet: &Sheet, area: &LayoutArea) -> BTreeMap<Offset, (CellKey, Address)> {
    area.cells
        .iter()
        .map(|&c| (offset_of(area.label, c), (CellKey::of(sheet, c), c)))
        .collect()
}

type Keyed = BTreeMap<Offset, (CellKey, Address)>;

fn agree(a: &Keyed, b: &Keyed) -> bool {
    a.iter()
        .all(|(o, (ka, _))| b.get(o).is_none_or(|(kb, _)| ka == kb))
}

/// Within each label chain or group, an area joins the first class whose
/// members all agree with it at every offset both cover; areas that fit no
/// class start a new one. Only classes of two or more areas are returned.
pub fn group_semantic_classes(sheet: &Sheet, result: &AnalysisResult) -> Vec<SemanticClass> {
    let mut out = Vec::new();
    for (chain, members) in label_sets(result) {
        let mut classes: Vec<Vec<(usize, Keyed)>> = Vec::new();
        for idx in members {
            let cells = keyed(sheet, &result.areas[idx]);
            match classes
                .iter_mut()
                .find(|cl| cl.iter().all(|(_, other)| agree(&cells, other)))
            {
                Some(cl) => cl.push((idx, cells)),
                None => classes.push(vec![(idx, cells)]),
            }
        }
        for cl in classes.into_iter().filter(|cl| cl.len() >= 2) {
            let mut alignment: BTreeMap<Offset, String> = BTreeMap::new();
            for (_, cells) in &cl {
                for (o, (k, _)) in cells {
                    alignment.entry(*o).or_insert_with(|| k.to_string());
                }
            }
            out.push(SemanticClass {
                labels: cl.iter().map(|(i, _)| result.areas[*i].label).collect(),
                areas: cl.iter().map(|(i, _)| *i).collect(),
                kind: result.catalog.chains[chain].kind,
                alignment: alignment
                    .into_iter()
                    .map(|(offset, key)| AlignedOffset { offset, key })
                    .collect(),
            });
        }
    }
    out
}

/// Compares the areas of each label chain or group offset by offset. Where
/// a strict majority shares a key, the other cells are flagged; where there
/// is no majority and the keys differ, every cell at that offset is flagged.
pub fn detect_irregularities(sheet: &Sheet, result: &AnalysisResult) -> Vec<Finding> {
    let mut out = Vec::new();
    for (chain, members) in label_sets(result) {
        if members.len() < 2 {
            continue;
        }
        let mut by_offset: BTreeMap<Offset, Vec<(CellKey, Address)>> = BTreeMap::new();
        for &idx in &members {
            for (o, (k, c)) in keyed(sheet, &result.areas[idx]) {
                by_offset.entry(o).or_default().push((k, c));
            }
        }
        let set = &result.catalog.chains[chain];
        for (offset, cells) in by_offset {
            if cells.len() < 2 {
                continue;
            }
            let mut tally: Vec<(&CellKey, usize)> = Vec::new();
            for (k, _) in &cells {
                match tally.iter_mut().find(|(t, _)| *t == k) {
                    Some(entry) => entry.1 += 1,
                    None => tally.push((k, 1)),
                }
            }
            if tally.len() == 1 {
                continue;
            }
            let majority = tally
                .iter()
                .find(|(_, n)| 2 * n > cells.len())
                .map(|(k, _)| *k);
            let subject: Vec<Address> = match majority {
                Some(m) => cells
                    .iter()
                    .filter(|(k, _)| k != m)
                    .map(|(_, c)| *c)
                    .collect(),
                None => cells.iter().map(|(_, c)| *c).collect(),
            };
            let detail = match majority {
                Some(m) => format!(
                    "{} label set at {}: offset ({}, {}) differs from the majority ({m})",
                    set.kind, set.members[0], offset.0, offset.1
                ),
                None => format!(
                    "{} label set at {}: offset ({}, {}) has no majority among {} cells",
                    set.kind,
                    set.members[0],
                    offset.0,
                    offset.1,
                    cells.len()
                ),
            };
            out.push(Finding {
                kind: FindingKind::IrregularUnit,
                subject,
                detail,
            });
        }
    }
    out
}

/// Formula cells of each heuristic-3 area: copy classes of two or more,
/// then the remaining parseable formulas grouped by skeleton.
pub fn find_logical_areas(sheet: &Sheet, result: &AnalysisResult) -> Vec<LogicalArea> {
    let mut out = Vec::new();
    for (idx, area) in result
        .areas
        .iter()
        .enumerate()
        .filter(|(_, a)| a.heuristic == 3)
    {
        let formulas: Vec<(Address, &str)> = area
            .cells
            .iter()
            .filter_map(|&c| {
                sheet
                    .get(c)
                    .and_then(|cell| cell.formula.as_deref())
                    .map(|f| (c, f))
            })
            .collect();
        let mut copies: Vec<(FormulaKey, Vec<Address>)> = Vec::new();
        for &(c, f) in &formulas {
            let key = FormulaKey::of(f, c);
            match copies.iter_mut().find(|(k, _)| *k == key) {
                Some((_, cells)) => cells.push(c),
                None => copies.push((key, vec![c])),
            }
        }
        let mut leftovers = Vec::new();
        for (key, cells) in copies {
            if cells.len() >= 2 {
                out.push(LogicalArea {
                    label: area.label,
                    formula: key.to_string(),
                    cells,
                    relation: Relation::Copy,
                    area: idx,
                });
            } else if let FormulaKey::Normalized(_) = key {
                leftovers.push((cells[0], key));
            }
        }
        let mut skeletons: Vec<(crate::formula::FormulaAst, Vec<Address>, String)> = Vec::new();
        for (c, key) in leftovers {
            let ast = parse_formula(
                sheet
                    .get(c)
                    .and_then(|x| x.formula.as_deref())
                    .unwrap_or_default(),
            )
            .expect("normalized keys come from parseable formulas");
            match skeletons.iter_mut().find(|(a, _, _)| a.same_skeleton(&ast)) {
                Some((_, cells, _)) => cells.push(c),
                None => skeletons.push((ast, vec![c], key.to_string())),
            }
        }
        for (_, cells, formula) in skeletons {
            out.push(LogicalArea {
                label: area.label,
                cells,
                relation: Relation::Structural,
                formula,
                area: idx,
            });
        }
    }
    out
}

/// One finding per stored cell that is neither a label nor in an area.
pub fn unassigned_cells(sheet: &Sheet, result: &AnalysisResult) -> Vec<Finding> {
    result
        .unclaimed(sheet)
        .into_iter()
        .map(
            |cell| match result.ambiguous.iter().find(|a| a.cell == cell) {
                Some(amb) => Finding {
                    kind: FindingKind::AmbiguousAssignment,
                    subject: vec![cell],
                    detail: format!(
                        "{cell} is equally assignable to {}",
                        amb.candidates
                            .iter()
                            .map(|a| a.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                },
                None => Finding {
                    kind: FindingKind::UnassignedCell,
                    subject: vec![cell],
                    detail: format!("{cell} is not described by any label"),
                },
            },
        )
        .collect()
}

/// Everything derived from a finished pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Abstraction {
    pub semantic_classes: Vec<SemanticClass>,
    pub logical_areas: Vec<LogicalArea>,
    pub findings: Vec<Finding>,
}

pub fn abstract_analysis(sheet: &Sheet, result: &AnalysisResult) -> Abstraction {
    let mut findings = detect_irregularities(sheet, result);
    findings.extend(unassigned_cells(sheet, result));
    Abstraction {
        semantic_classes: group_semantic_classes(sheet, result),
        logical_areas: find_logical_areas(sheet, result),
        findings,
    }
}
