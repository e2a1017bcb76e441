//! Sheet documents: the JSON interchange format and value-only CSV.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    parse_cell_value, Address, Cell, CellValue, Formatting, Locale, Rgb, Sheet, StyleFlag,
};
use crate::error::{Error, Position, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SheetFormat {
    Json,
    Csv,
}

impl FromStr for SheetFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(SheetFormat::Json),
            "csv" => Ok(SheetFormat::Csv),
            other => Err(format!(
                "unknown input format {other:?} (expected json or csv)"
            )),
        }
    }
}

/// Top-level JSON sheet document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SheetDocument {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub cells: Vec<CellRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub addr: String,
    #[serde(default)]
    pub value: String,
    #[serde(default)]
    pub formula: Option<String>,
    #[serde(default)]
    pub format: Option<FormatRecord>,
    #[serde(default)]
    pub frame: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormatRecord {
    pub font: String,
    pub size: f64,
    #[serde(default)]
    pub style: Vec<String>,
    pub color: String,
}

impl From<&Formatting> for FormatRecord {
    fn from(f: &Formatting) -> Self {
        FormatRecord {
            font: f.font.clone(),
            size: f.size,
            style: f.style.iter().map(|s| s.to_string()).collect(),
            color: f.color.to_string(),
        }
    }
}

impl SheetDocument {
    /// Canonical document for a sheet: cells in row-major order, numbers
    /// rendered under `locale`, formatting always spelled out.
    pub fn from_sheet(sheet: &Sheet, locale: Locale) -> Self {
        SheetDocument {
            name: sheet.name().to_string(),
            cells: sheet
                .iter()
                .map(|c| CellRecord {
                    addr: c.address.to_string(),
                    value: c.value.render(locale),
                    formula: c.formula.clone(),
                    format: Some(FormatRecord::from(&c.formatting)),
                    frame: c.frame.clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn into_sheet(self, locale: Locale) -> Result<Sheet> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for (i, rec) in self.cells.into_iter().enumerate() {
            let at = |message: String| Error::Parse {
                position: Position {
                    line: 0,
                    record: Some(i as u64 + 1),
                },
                message,
            };
            let address: Address = rec
                .addr
                .parse()
                .map_err(|e: super::AddressError| at(e.to_string()))?;
            let formatting = match rec.format {
                Some(f) => formatting_from_record(f).map_err(at)?,
                None => Formatting::default(),
            };
            cells.push(Cell {
                address,
                value: parse_cell_value(&rec.value, locale),
                formula: rec.formula.filter(|f| !f.is_empty()),
                formatting,
                frame: rec.frame,
            });
        }
        Sheet::from_cells(self.name, cells)
    }
}

fn formatting_from_record(rec: FormatRecord) -> std::result::Result<Formatting, String> {
    let style = rec
        .style
        .iter()
        .map(|s| s.parse::<StyleFlag>())
        .collect::<std::result::Result<_, _>>()?;
    let color: Rgb = rec.color.parse()?;
    Ok(Formatting {
        font: rec.font,
        size: rec.size,
        style,
        color,
    })
}

/// Reads a sheet document. CSV cells get default formatting; an empty
/// document yields an empty sheet.
pub fn load_sheet(document: &[u8], format: SheetFormat, locale: Locale) -> Result<Sheet> {
    if document.iter().all(|b| b.is_ascii_whitespace()) {
        return Ok(Sheet::new(""));
    }
    match format {
        SheetFormat::Json => {
            let doc: SheetDocument =
                serde_json::from_slice(document).map_err(|e| Error::Parse {
                    position: Position {
                        line: e.line() as u64,
                        record: None,
                    },
                    message: e.to_string(),
                })?;
            doc.into_sheet(locale)
        }
        SheetFormat::Csv => load_csv(document, locale),
    }
}

fn detect_delimiter(document: &[u8]) -> u8 {
    let first = document
        .split(|&b| b == b'\n')
        .find(|l| !l.iter().all(|b| b.is_ascii_whitespace()))
        .unwrap_or(&[]);
    let mut in_quotes = false;
    let (mut semi, mut comma) = (0, 0);
    for &b in first {
        match b {
            b'"' => in_quotes = !in_quotes,
            b';' if !in_quotes => semi += 1,
            b',' if !in_quotes => comma += 1,
            _ => {}
        }
    }
    if semi > 0 || comma == 0 {
        b';'
    } else {
        b','
    }
}

fn load_csv(document: &[u8], locale: Locale) -> Result<Sheet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(detect_delimiter(document))
        .from_reader(document);
    let mut cells = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let position = e.position().map_or(
                Position {
                    line: 0,
                    record: Some(row_idx as u64 + 1),
                },
                |p| Position {
                    line: p.line(),
                    record: Some(p.record() + 1),
                },
            );
            Error::Parse {
                position,
                message: e.to_string(),
            }
        })?;
        for (col_idx, field) in record.iter().enumerate() {
            let value = parse_cell_value(field, locale);
            if value == CellValue::Undefined {
                continue;
            }
            cells.push(Cell::new(
                Address::new(col_idx as u32 + 1, row_idx as u32 + 1),
                value,
            ));
        }
    }
    Sheet::from_cells("", cells)
}
