use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{
    arm_assignable, arm_semantic, infer_orientation, label_arms, resolve_label_conflict,
    AssignmentState, GapParameter, LayoutArea, Resolution,
};
use crate::labels::{classify_labels_with, LabelCatalog, LabelClass, LabelOptions};
use crate::sheet::{Address, Sheet};

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub gap: GapParameter,
    pub labels: LabelOptions,
}

/// Unclaimed data cells after one pipeline step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub step: String,
    pub unclaimed: usize,
}

/// A cell two labels of equal rank competed for in the last heuristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguousCell {
    pub cell: Address,
    pub candidates: Vec<Address>,
}

/// A cell two labels of the same kind competed for; either would do.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalentChoice {
    pub cell: Address,
    pub chosen: Address,
    pub others: Vec<Address>,
    pub heuristic: u8,
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub catalog: LabelCatalog,
    pub areas: Vec<LayoutArea>,
    pub state: AssignmentState,
    pub ambiguous: Vec<AmbiguousCell>,
    pub equivalent: Vec<EquivalentChoice>,
    pub trace: Vec<StepTrace>,
    pub gap: GapParameter,
}

impl AnalysisResult {
    /// Stored cells that are neither labels nor assigned, in address order.
    pub fn unclaimed(&self, sheet: &Sheet) -> Vec<Address> {
        unclaimed(sheet, &self.catalog, &self.state)
    }

    /// Index of the area owning `cell` as a non-label member.
    pub fn area_of(&self, cell: Address) -> Option<usize> {
        let label = self.state.owner_of(cell)?;
        self.areas
            .iter()
            .position(|a| a.label == label && a.cells.binary_search(&cell).is_ok())
    }
}

fn unclaimed(sheet: &Sheet, catalog: &LabelCatalog, state: &AssignmentState) -> Vec<Address> {
    sheet
        .iter()
        .map(|c| c.address)
        .filter(|a| !catalog.is_label(*a) && !state.is_owned(*a))
        .collect()
}

/// Classifies labels, then runs the heuristics: one geometric pass per label
/// kind in detection order (chains first, heuristic 1, identity groups next,
/// heuristic 2), a semantic pass over labels without an area (3) and a final
/// geometric pass over all labels (4). Each pass takes cells away from later
/// ones.
pub fn run_pipeline(sheet: &Sheet, config: &PipelineConfig) -> AnalysisResult {
    let catalog = classify_labels_with(sheet, &config.labels);
    let mut run = Run {
        sheet,
        catalog: &catalog,
        gap: config.gap,
        state: AssignmentState::new(),
        areas: Vec::new(),
        ambiguous: Vec::new(),
        equivalent: Vec::new(),
        trace: Vec::new(),
    };
    run.record("start");
    for &kind in catalog.order() {
        let mut labels: Vec<Address> = catalog
            .of_kind(kind)
            .flat_map(|(_, c)| c.members.iter().copied())
            .collect();
        labels.sort();
        labels.dedup();
        run.pass(&labels, kind.heuristic(), false, false);
        run.record(&format!("heuristic {} {}", kind.heuristic(), kind));
    }
    let heads: BTreeSet<Address> = run.areas.iter().map(|a| a.label).collect();
    let rest: Vec<Address> = catalog
        .labels()
        .into_iter()
        .filter(|l| !heads.contains(l))
        .collect();
    run.pass(&rest, 3, true, false);
    run.record("heuristic 3 semantic");
    run.pass(&catalog.labels(), 4, false, true);
    run.record("heuristic 4 geometric");

    let Run {
        areas,
        state,
        ambiguous,
        equivalent,
        trace,
        ..
    } = run;
    AnalysisResult {
        catalog,
        areas,
        state,
        ambiguous,
        equivalent,
        trace,
        gap: config.gap,
    }
}

struct Run<'a> {
    sheet: &'a Sheet,
    catalog: &'a LabelCatalog,
    gap: GapParameter,
    state: AssignmentState,
    areas: Vec<LayoutArea>,
    ambiguous: Vec<AmbiguousCell>,
    equivalent: Vec<EquivalentChoice>,
    trace: Vec<StepTrace>,
}

impl Run<'_> {
    fn record(&mut self, step: &str) {
        self.trace.push(StepTrace {
            step: step.to_string(),
            unclaimed: unclaimed(self.sheet, self.catalog, &self.state).len(),
        });
    }

    fn pass(&mut self, labels: &[Address], heuristic: u8, semantic: bool, ambiguous_ties: bool) {
        let mut wanted = Vec::with_capacity(labels.len());
        let mut claims: BTreeMap<Address, Vec<Address>> = BTreeMap::new();
        for &label in labels {
            let arms: Vec<Vec<Address>> = label_arms(self.catalog, label)
                .into_iter()
                .map(|arm| {
                    if semantic {
                        arm_semantic(self.sheet, self.catalog, label, arm, self.gap, &self.state)
                    } else {
                        arm_assignable(self.sheet, self.catalog, label, arm, self.gap, &self.state)
                    }
                })
                .collect();
            for cell in arms.iter().flatten() {
                claims.entry(*cell).or_default().push(label);
            }
            wanted.push((label, arms));
        }

        let mut winner: BTreeMap<Address, Address> = BTreeMap::new();
        for (cell, candidates) in claims {
            if let [only] = candidates[..] {
                winner.insert(cell, only);
                continue;
            }
            match resolve_label_conflict(self.catalog, cell, &candidates, ambiguous_ties) {
                Resolution::Chosen(l) => {
                    winner.insert(cell, l);
                }
                Resolution::Equivalent { chosen, others } => {
                    winner.insert(cell, chosen);
                    self.equivalent.push(EquivalentChoice {
                        cell,
                        chosen,
                        others,
                        heuristic,
                    });
                }
                Resolution::Ambiguous(candidates) => {
                    self.ambiguous.push(AmbiguousCell { cell, candidates })
                }
            }
        }

        for (label, arms) in wanted {
            let mut cells = Vec::new();
            for (arm, run) in label_arms(self.catalog, label).into_iter().zip(arms) {
                // cells lost to another label leave a gap
                let mut prev = label.along(arm);
                for cell in run {
                    if winner.get(&cell) != Some(&label) {
                        continue;
                    }
                    if cell.along(arm) - prev - 1 > self.gap.0 {
                        break;
                    }
                    prev = cell.along(arm);
                    cells.push(cell);
                }
            }
            if cells.is_empty() {
                continue;
            }
            cells.sort();
            for &cell in &cells {
                self.state
                    .assign(cell, label)
                    .expect("a pass assigns each cell to one winner");
            }
            let orientation = infer_orientation(self.catalog, label, &cells);
            self.areas.push(LayoutArea {
                label,
                cells,
                orientation,
                heuristic,
                class: self.catalog.class_of(label).unwrap_or(LabelClass::Plain),
                chain: self.catalog.chain_of(label).map(|(i, _)| i),
            });
        }
    }
}
