//! Layout-area analysis for spreadsheets.
//!
//! Cells are assigned to the labels that describe them, producing layout
//! areas. Areas built on related labels are grouped into semantic classes,
//! and cells that break a class's pattern or belong to no label are
//! reported as findings.
//!
//! ```
//! use layout_areas::sheet::{load_sheet, Locale, SheetFormat};
//! use layout_areas::{analyze, assign::PipelineConfig};
//!
//! let csv = "Year;Q 1;Q 2\n2001;5;9\n2002;7;3\n";
//! let sheet = load_sheet(csv.as_bytes(), SheetFormat::Csv, Locale::CommaDecimal).unwrap();
//! let analysis = analyze(&sheet, &PipelineConfig::default());
//! assert_eq!(analysis.result.areas.len(), 2);
//! assert!(analysis.abstraction.findings.is_empty());
//! ```

pub mod abstraction;
pub mod assign;
pub mod error;
pub mod formula;
pub mod labels;
pub mod report;
pub mod sheet;

pub use error::{Error, Result};

use abstraction::{abstract_analysis, Abstraction};
use assign::{run_pipeline, AnalysisResult, PipelineConfig};
use sheet::Sheet;

/// A pipeline run and its abstraction.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub result: AnalysisResult,
    pub abstraction: Abstraction,
}

pub fn analyze(sheet: &Sheet, config: &PipelineConfig) -> Analysis {
    let result = run_pipeline(sheet, config);
    let abstraction = abstract_analysis(sheet, &result);
    Analysis {
        result,
        abstraction,
    }
}
