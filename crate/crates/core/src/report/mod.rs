//! Plain-text, JSON and HTML renderings of an analysis.

mod html;

use std::fmt::Write as _;

use serde::Serialize;

use crate::abstraction::{Finding, LogicalArea, SemanticClass};
use crate::assign::LayoutArea;
use crate::sheet::{Address, Sheet};
use crate::Analysis;

pub use html::{render_html, shade_keys, PALETTE};

/// Compact form of an address list: `B19:E19` for a contiguous row or
/// column run, otherwise comma-separated.
pub fn format_cells(cells: &[Address]) -> String {
    match cells {
        [] => String::new(),
        [one] => one.to_string(),
        [first, .., last] => {
            let row_run = cells
                .iter()
                .enumerate()
                .all(|(i, c)| c.row == first.row && c.column == first.column + i as u32);
            let col_run = cells
                .iter()
                .enumerate()
                .all(|(i, c)| c.column == first.column && c.row == first.row + i as u32);
            if row_run || col_run {
                format!("{first}:{last}")
            } else {
                cells
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    sheet: &'a str,
    max_gap: u32,
    areas: &'a [LayoutArea],
    semantic_classes: &'a [SemanticClass],
    logical_areas: &'a [LogicalArea],
    findings: &'a [Finding],
}

/// Pretty-printed JSON report. Arrays keep the analysis order, which is a
/// function of the input alone.
pub fn render_json(sheet: &Sheet, analysis: &Analysis) -> String {
    let report = JsonReport {
        sheet: sheet.name(),
        max_gap: analysis.result.gap.0,
        areas: &analysis.result.areas,
        semantic_classes: &analysis.abstraction.semantic_classes,
        logical_areas: &analysis.abstraction.logical_areas,
        findings: &analysis.abstraction.findings,
    };
    let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
    out.push('\n');
    out
}

pub fn render_text(sheet: &Sheet, analysis: &Analysis) -> String {
    let result = &analysis.result;
    let abs = &analysis.abstraction;
    let mut out = String::new();
    let name = if sheet.name().is_empty() {
        "(unnamed)"
    } else {
        sheet.name()
    };
    let _ = writeln!(
        out,
        "sheet {name}: {} cells, {} labels, max gap {}",
        sheet.len(),
        result.catalog.len(),
        result.gap
    );
    for chain in &result.catalog.chains {
        let stem = chain
            .stem
            .as_deref()
            .map(|s| format!(" \"{s}\""))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "  {} {}{stem}",
            chain.kind,
            format_cells(&chain.members)
        );
    }
    let _ = writeln!(out, "layout areas: {}", result.areas.len());
    for area in &result.areas {
        let _ = writeln!(
            out,
            "  H{} {} ({}, {}): {}",
            area.heuristic,
            area.label,
            area.class,
            area.orientation,
            format_cells(&area.cells)
        );
    }
    let _ = writeln!(out, "semantic classes: {}", abs.semantic_classes.len());
    for class in &abs.semantic_classes {
        let labels: Vec<String> = class.labels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "  {} [{}]", class.kind, labels.join(", "));
    }
    let _ = writeln!(out, "logical areas: {}", abs.logical_areas.len());
    for la in &abs.logical_areas {
        let _ = writeln!(
            out,
            "  {} {} {}: {}",
            la.label,
            la.relation,
            la.formula,
            format_cells(&la.cells)
        );
    }
    let _ = writeln!(out, "findings: {}", abs.findings.len());
    for f in &abs.findings {
        let _ = writeln!(
            out,
            "  {} {}: {}",
            f.kind,
            format_cells(&f.subject),
            f.detail
        );
    }
    out
}
