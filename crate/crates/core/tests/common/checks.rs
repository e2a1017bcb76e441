//! Property checks run on random sheets. Each returns a description of the
//! first violation found.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use layout_areas::abstraction::{offset_of, CellKey, FindingKind};
use layout_areas::assign::{
    arm_assignable, dense, label_arms, AssignmentState, GapParameter, PipelineConfig,
};
use layout_areas::formula::{copy_equivalent, normalize_relative, parse_formula, FormulaKey};
use layout_areas::labels::{
    classify_labels, detect_counters, detect_identity_groups, detect_ordinal_labels,
    detect_running_numbers, LabelChain, NumberPosition, OrdinalDictionary,
};
use layout_areas::report::render_json;
use layout_areas::sheet::{Address, Axis, CellValue, Sheet};
use layout_areas::{analyze, Analysis};

use super::{
    counter_pairs, dense_closure, equal_value_groups, geometric_oracle, ordinal_pairs,
    partial_identity, running_pairs,
};

pub type Check = Result<(), String>;

fn links<'a>(chains: impl IntoIterator<Item = &'a LabelChain>) -> BTreeSet<(Address, Address)> {
    chains.into_iter().flat_map(|c| c.links()).collect()
}

/// Chains are runs of two or more along their axis, and no cell sits in two
/// chains of the same axis (otherwise they would join into one longer run).
fn well_formed(chains: &[LabelChain]) -> Check {
    let mut seen: HashSet<(Address, Option<Axis>)> = HashSet::new();
    for c in chains {
        if c.len() < 2 {
            return Err(format!("chain shorter than two: {:?}", c.members));
        }
        for m in &c.members {
            if !seen.insert((*m, c.axis)) {
                return Err(format!("{m} is in two chains along {:?}", c.axis));
            }
        }
        for (x, y) in c.links() {
            if x.along(c.axis.unwrap()) >= y.along(c.axis.unwrap())
                || x.line(c.axis.unwrap()) != y.line(c.axis.unwrap())
            {
                return Err(format!("members {x}, {y} do not run along {:?}", c.axis));
            }
        }
    }
    Ok(())
}

fn compare(
    what: &str,
    got: BTreeSet<(Address, Address)>,
    want: BTreeSet<(Address, Address)>,
) -> Check {
    if got == want {
        return Ok(());
    }
    let extra: Vec<_> = got.difference(&want).collect();
    let missing: Vec<_> = want.difference(&got).collect();
    Err(format!(
        "{what}: detector extra {extra:?}, missing {missing:?}"
    ))
}

pub fn running_numbers(sheet: &Sheet) -> Check {
    let chains = detect_running_numbers(sheet);
    well_formed(&chains)?;
    compare("running numbers", links(&chains), running_pairs(sheet))
}

pub fn ordinals(sheet: &Sheet) -> Check {
    for dict in OrdinalDictionary::builtins() {
        let chains = detect_ordinal_labels(sheet, &dict);
        well_formed(&chains)?;
        compare(dict.name(), links(&chains), ordinal_pairs(sheet, &dict))?;
    }
    Ok(())
}

pub fn counters(sheet: &Sheet) -> Check {
    let chains = detect_counters(sheet);
    for position in [NumberPosition::Back, NumberPosition::Front] {
        let mine: Vec<LabelChain> = chains
            .iter()
            .filter(|c| c.number_position == Some(position))
            .cloned()
            .collect();
        well_formed(&mine)?;
        compare(
            &format!("counters {position:?}"),
            links(&mine),
            counter_pairs(sheet, position == NumberPosition::Back),
        )?;
    }
    Ok(())
}

pub fn identity(sheet: &Sheet) -> Check {
    let (complete, partial) = detect_identity_groups(sheet);
    let labels: Vec<(Address, String)> = sheet
        .iter()
        .filter_map(|c| match (&c.value, &c.formula) {
            (CellValue::Text(t), None) => Some((c.address, t.clone())),
            _ => None,
        })
        .collect();
    let got: BTreeSet<Vec<Address>> = complete.iter().map(|g| g.members.clone()).collect();
    let want = equal_value_groups(&labels);
    if got != want {
        return Err(format!("complete identity: got {got:?}, want {want:?}"));
    }
    let in_complete: BTreeSet<Address> = got.iter().flatten().copied().collect();
    let eligible: Vec<&(Address, String)> = labels
        .iter()
        .filter(|(a, _)| !in_complete.contains(a))
        .collect();
    let text_of: BTreeMap<Address, &str> = labels.iter().map(|(a, t)| (*a, t.as_str())).collect();
    let mut grouped = BTreeSet::new();
    for g in &partial {
        if g.len() < 2 {
            return Err(format!("partial group too small: {:?}", g.members));
        }
        let stem: Vec<&str> = g
            .stem
            .as_deref()
            .unwrap_or_default()
            .split_whitespace()
            .collect();
        for m in &g.members {
            if in_complete.contains(m) || !grouped.insert(*m) {
                return Err(format!("{m} is in more than one group"));
            }
            let words: Vec<&str> = text_of[m].split_whitespace().collect();
            let k = stem.len();
            let shares = k >= 1
                && k < words.len()
                && (words[..k] == stem[..] || words[words.len() - k..] == stem[..]);
            if !shares {
                return Err(format!(
                    "{m} {:?} does not carry the group stem {stem:?}",
                    text_of[m]
                ));
            }
        }
        for x in &g.members {
            for y in &g.members {
                if x != y && !partial_identity(text_of[x], text_of[y]) {
                    return Err(format!(
                        "{x} and {y} are grouped but not partially identical"
                    ));
                }
            }
        }
    }
    let loose: Vec<&&(Address, String)> = eligible
        .iter()
        .filter(|(a, _)| !grouped.contains(a))
        .collect();
    for (i, (x, tx)) in loose.iter().map(|p| (p.0, &p.1)).enumerate() {
        for (y, ty) in loose.iter().skip(i + 1).map(|p| (p.0, &p.1)) {
            if partial_identity(tx, ty) {
                return Err(format!("{x} and {y} are partially identical but ungrouped"));
            }
        }
    }
    Ok(())
}

fn random_state(sheet: &Sheet, rng: &mut ChaCha8Rng) -> (BTreeSet<Address>, AssignmentState) {
    let owned: BTreeSet<Address> = sheet
        .iter()
        .map(|c| c.address)
        .filter(|_| rng.gen_bool(0.15))
        .collect();
    let mut state = AssignmentState::new();
    for &c in &owned {
        state.assign(c, Address::new(1, 1)).unwrap();
    }
    (owned, state)
}

pub fn geometric(sheet: &Sheet, rng: &mut ChaCha8Rng) -> Check {
    let catalog = classify_labels(sheet, &[]);
    let (owned, state) = random_state(sheet, rng);
    for label in catalog.labels() {
        for arm in [Axis::Horizontal, Axis::Vertical] {
            for d in 0..=2 {
                let got = arm_assignable(sheet, &catalog, label, arm, GapParameter(d), &state);
                let want = geometric_oracle(sheet, &catalog, label, arm, d, &owned);
                if got != want {
                    return Err(format!(
                        "GA of {label} along {arm:?}, d={d}: got {got:?}, want {want:?}"
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn dense_matches_closure(rng: &mut ChaCha8Rng) -> Check {
    let row = rng.gen_range(1..5);
    let set: BTreeSet<Address> = (1..=12)
        .filter(|_| rng.gen_bool(0.5))
        .map(|c| Address::new(c, row))
        .collect();
    let members: Vec<Address> = set.iter().copied().collect();
    for &x in &members {
        for &y in &members {
            for d in 0..3 {
                let got = dense(&set, x, y, GapParameter(d)).map_err(|e| e.to_string())?;
                if got != dense_closure(&set, x, y, d) {
                    return Err(format!("dense({x}, {y}, {d}) over {members:?}"));
                }
            }
        }
    }
    Ok(())
}

pub fn catalog_partition(sheet: &Sheet) -> Check {
    let catalog = classify_labels(sheet, &[]);
    let mut seen = BTreeSet::new();
    for c in &catalog.chains {
        for m in &c.members {
            if !seen.insert(*m) {
                return Err(format!("{m} belongs to two label chains or groups"));
            }
        }
    }
    for p in &catalog.plain {
        if !seen.insert(*p) {
            return Err(format!("plain label {p} also belongs to a chain"));
        }
    }
    Ok(())
}

pub fn single_ownership(analysis: &Analysis) -> Check {
    let mut cells = BTreeSet::new();
    let mut heads = BTreeSet::new();
    for area in &analysis.result.areas {
        if area.heuristic <= 3 && !heads.insert(area.label) {
            return Err(format!(
                "label {} heads two areas before the last heuristic",
                area.label
            ));
        }
        for c in &area.cells {
            if !cells.insert(*c) {
                return Err(format!("{c} is in two areas"));
            }
        }
    }
    Ok(())
}

pub fn coverage(sheet: &Sheet, analysis: &Analysis) -> Check {
    let in_areas: usize = analysis.result.areas.iter().map(|a| a.cells.len()).sum();
    let loose = analysis
        .abstraction
        .findings
        .iter()
        .filter(|f| {
            matches!(
                f.kind,
                FindingKind::UnassignedCell | FindingKind::AmbiguousAssignment
            )
        })
        .count();
    let labels = analysis.result.catalog.len();
    if in_areas + loose + labels != sheet.len() {
        return Err(format!(
            "{in_areas} area cells + {loose} unassigned + {labels} labels != {} cells",
            sheet.len()
        ));
    }
    Ok(())
}

/// Every area cell is on one of the label's arms, after it, with no label in
/// between.
pub fn def8_conformance(sheet: &Sheet, analysis: &Analysis) -> Check {
    let catalog = &analysis.result.catalog;
    for area in &analysis.result.areas {
        for &c in &area.cells {
            let Some(axis) = area.label.shared_axis(&c) else {
                return Err(format!("{c} shares no line with {}", area.label));
            };
            if c.along(axis) <= area.label.along(axis)
                || !label_arms(catalog, area.label).contains(&axis)
            {
                return Err(format!("{c} is not on an arm of {}", area.label));
            }
            let between = sheet
                .cells_between(area.label, c)
                .map_err(|e| e.to_string())?;
            if let Some(l) = between.iter().find(|x| catalog.is_label(x.address)) {
                return Err(format!(
                    "label {} lies between {} and {c}",
                    l.address, area.label
                ));
            }
        }
    }
    Ok(())
}

pub fn monotone_trace(analysis: &Analysis) -> Check {
    for w in analysis.result.trace.windows(2) {
        if w[1].unclaimed > w[0].unclaimed {
            return Err(format!(
                "unclaimed grew from {} to {} at {}",
                w[0].unclaimed, w[1].unclaimed, w[1].step
            ));
        }
    }
    Ok(())
}

pub fn gap_monotone(sheet: &Sheet, rng: &mut ChaCha8Rng) -> Check {
    let catalog = classify_labels(sheet, &[]);
    let (_, state) = random_state(sheet, rng);
    for label in catalog.labels() {
        for arm in [Axis::Horizontal, Axis::Vertical] {
            for d in 0..3 {
                let small: BTreeSet<Address> =
                    arm_assignable(sheet, &catalog, label, arm, GapParameter(d), &state)
                        .into_iter()
                        .collect();
                let large: BTreeSet<Address> =
                    arm_assignable(sheet, &catalog, label, arm, GapParameter(d + 1), &state)
                        .into_iter()
                        .collect();
                if !small.is_subset(&large) {
                    return Err(format!("GA of {label} shrinks from d={d} to d={}", d + 1));
                }
            }
        }
    }
    Ok(())
}

fn formula_cells(sheet: &Sheet) -> Vec<(&str, Address)> {
    sheet
        .iter()
        .filter_map(|c| c.formula.as_deref().map(|f| (f, c.address)))
        .collect()
}

pub fn copy_laws(sheet: &Sheet) -> Check {
    let fs = formula_cells(sheet);
    let fs = &fs[..fs.len().min(12)];
    for &x in fs {
        if !copy_equivalent(x, x) {
            return Err(format!("{x:?} is not a copy of itself"));
        }
        for &y in fs {
            if copy_equivalent(x, y) != copy_equivalent(y, x) {
                return Err(format!(
                    "copy equivalence of {x:?} and {y:?} is not symmetric"
                ));
            }
            for &z in fs {
                if copy_equivalent(x, y) && copy_equivalent(y, z) && !copy_equivalent(x, z) {
                    return Err(format!(
                        "copy equivalence not transitive over {x:?}, {y:?}, {z:?}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// A formula moved to another cell with its relative references shifted
/// along is a copy of the original.
pub fn translation(sheet: &Sheet, rng: &mut ChaCha8Rng) -> Check {
    for (text, origin) in formula_cells(sheet) {
        let Ok(ast) = parse_formula(text) else {
            continue;
        };
        let target = Address::new(rng.gen_range(1..30), rng.gen_range(1..30));
        let Some(moved) = normalize_relative(&ast, origin).materialize(target) else {
            continue;
        };
        let moved = format!("={moved}");
        if !copy_equivalent((text, origin), (&moved, target)) {
            return Err(format!(
                "{text} at {origin} moved to {target} as {moved} is not a copy"
            ));
        }
        if FormulaKey::of(text, origin) != FormulaKey::of(&moved, target) {
            return Err(format!(
                "normalized keys differ for {text} at {origin} and {moved} at {target}"
            ));
        }
    }
    Ok(())
}

pub fn determinism(sheet: &Sheet, config: &PipelineConfig) -> Check {
    let first = render_json(sheet, &analyze(sheet, config));
    let second = render_json(sheet, &analyze(sheet, config));
    if first != second {
        return Err("two runs rendered different JSON".into());
    }
    Ok(())
}

/// Every flagged cell disagrees with some other cell at the same offset in
/// its label set.
pub fn irregularity_soundness(sheet: &Sheet, analysis: &Analysis) -> Check {
    let areas = &analysis.result.areas;
    for f in analysis
        .abstraction
        .findings
        .iter()
        .filter(|f| f.kind == FindingKind::IrregularUnit)
    {
        for &cell in &f.subject {
            let owner = areas
                .iter()
                .find(|a| a.cells.contains(&cell))
                .ok_or_else(|| format!("flagged {cell} is in no area"))?;
            let offset = offset_of(owner.label, cell);
            let key = CellKey::of(sheet, cell);
            let differs = areas
                .iter()
                .filter(|a| {
                    a.chain == owner.chain && matches!(a.heuristic, 1 | 2) && a.label != owner.label
                })
                .flat_map(|a| a.cells.iter().map(move |&c| (offset_of(a.label, c), c)))
                .any(|(o, c)| o == offset && CellKey::of(sheet, c) != key);
            if !differs {
                return Err(format!("flagged {cell} agrees with every aligned cell"));
            }
        }
    }
    Ok(())
}
