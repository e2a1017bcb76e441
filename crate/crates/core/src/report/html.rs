use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::sheet::{Address, Locale, Sheet};
use crate::Analysis;

/// Background greys, cycled over areas.
pub const PALETTE: [&str; 8] = [
    "#d9d9d9", "#a6a6a6", "#f2f2f2", "#bfbfbf", "#8c8c8c", "#e6e6e6", "#b3b3b3", "#cccccc",
];

/// Shade index for each area. Heuristic-2 areas built on the same identity
/// group share a shade; every other area gets the next one in turn.
pub fn shade_keys(analysis: &Analysis) -> Vec<usize> {
    let mut group_shade: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 0;
    analysis
        .result
        .areas
        .iter()
        .map(|area| {
            let shared = match (area.heuristic, area.chain) {
                (2, Some(chain)) => Some(chain),
                _ => None,
            };
            let shade = match shared.and_then(|c| group_shade.get(&c)) {
                Some(&s) => s,
                None => {
                    let s = next % PALETTE.len();
                    next += 1;
                    if let Some(c) = shared {
                        group_shade.insert(c, s);
                    }
                    s
                }
            };
            shade
        })
        .collect()
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// A standalone HTML page with the sheet as a table. Area cells are shaded,
/// labels are bold and unassigned cells are outlined.
pub fn render_html(sheet: &Sheet, analysis: &Analysis, locale: Locale) -> String {
    let shades = shade_keys(analysis);
    let mut shade_of: BTreeMap<Address, usize> = BTreeMap::new();
    for (area, &shade) in analysis.result.areas.iter().zip(&shades) {
        for cell in area.extent() {
            shade_of.entry(cell).or_insert(shade);
        }
    }
    let flagged: BTreeSet<Address> = analysis.result.unclaimed(sheet).into_iter().collect();

    let mut out = String::new();
    let title = escape(sheet.name());
    let _ = write!(
        out,
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>{title}</title>\n<style>\n\
         table {{ border-collapse: collapse; font-family: sans-serif; font-size: 13px; }}\n\
         th, td {{ border: 1px solid #e0e0e0; padding: 2px 6px; }}\n\
         th {{ background: #fafafa; color: #666; font-weight: normal; }}\n\
         td.label {{ font-weight: bold; }}\n\
         td.unassigned {{ outline: 2px solid #000; outline-offset: -2px; }}\n\
         </style>\n</head>\n<body>\n<table>\n"
    );
    if let Some((top_left, bottom_right)) = sheet.bounding_box() {
        out.push_str("<tr><th></th>");
        for col in top_left.column..=bottom_right.column {
            let _ = write!(out, "<th>{}</th>", crate::sheet::column_name(col));
        }
        out.push_str("</tr>\n");
        for row in top_left.row..=bottom_right.row {
            let _ = write!(out, "<tr><th>{row}</th>");
            for col in top_left.column..=bottom_right.column {
                let addr = Address::new(col, row);
                let Some(cell) = sheet.get(addr) else {
                    out.push_str("<td></td>");
                    continue;
                };
                let mut classes = Vec::new();
                if analysis.result.catalog.is_label(addr) {
                    classes.push("label");
                }
                if flagged.contains(&addr) {
                    classes.push("unassigned");
                }
                out.push_str("<td");
                let _ = write!(out, " id=\"{addr}\"");
                if !classes.is_empty() {
                    let _ = write!(out, " class=\"{}\"", classes.join(" "));
                }
                if let Some(&shade) = shade_of.get(&addr) {
                    let _ = write!(out, " style=\"background:{}\"", PALETTE[shade]);
                }
                if let Some(f) = &cell.formula {
                    let _ = write!(out, " title=\"{}\"", escape(f));
                }
                let _ = write!(out, ">{}</td>", escape(&cell.value.render(locale)));
            }
            out.push_str("</tr>\n");
        }
    }
    out.push_str("</table>\n</body>\n</html>\n");
    out
}
