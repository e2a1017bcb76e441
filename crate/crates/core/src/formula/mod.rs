//! Formula parsing and the two equivalence relations used for grouping:
//! copy equivalence (identical after rewriting relative references as
//! offsets from the host cell) and structural equivalence (identical
//! operator/function skeleton).

mod ast;
mod parser;

use std::fmt;

pub use ast::{BinaryOp, CellRef, Expr, FormulaAst, NormPart, NormRef, RefPart, UnaryOp};
pub use parser::{parse_formula, FormulaError};

use crate::sheet::Address;

/// A formula with relative references expressed as offsets from the cell
/// hosting it. Two copies of one formula normalize identically.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFormula(pub Expr<NormRef>);

impl fmt::Display for NormalizedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "={}", self.0)
    }
}

impl NormalizedFormula {
    /// Writes the formula back as if hosted at `origin`. `None` when a
    /// relative reference would leave the grid.
    pub fn materialize(&self, origin: Address) -> Option<FormulaAst> {
        let place = |part: NormPart, base: u32| -> Option<RefPart> {
            match part {
                NormPart::Fixed(i) => Some(RefPart::Absolute(i)),
                NormPart::Offset(d) => {
                    let v = base as i64 + d;
                    (v >= 1 && v <= u32::MAX as i64).then_some(RefPart::Relative(v as u32))
                }
            }
        };
        self.0.try_map_refs(&mut |r: &NormRef| {
            Some(CellRef {
                column: place(r.column, origin.column)?,
                row: place(r.row, origin.row)?,
            })
        })
    }
}

fn normalize_part(part: RefPart, base: u32) -> NormPart {
    match part {
        RefPart::Absolute(i) => NormPart::Fixed(i),
        RefPart::Relative(i) => NormPart::Offset(i as i64 - base as i64),
    }
}

/// Rewrites every relative reference part as a signed offset from `origin`;
/// `$`-anchored parts keep their index.
pub fn normalize_relative(ast: &FormulaAst, origin: Address) -> NormalizedFormula {
    let normalized = ast
        .try_map_refs(&mut |r: &CellRef| {
            Some(NormRef {
                column: normalize_part(r.column, origin.column),
                row: normalize_part(r.row, origin.row),
            })
        })
        .expect("normalization never fails");
    NormalizedFormula(normalized)
}

/// Comparison key of a formula under copy equivalence. Formulas that do not
/// parse are only equivalent to byte-identical text.
#[derive(Debug, Clone, PartialEq)]
pub enum FormulaKey {
    Normalized(NormalizedFormula),
    Opaque(String),
}

impl FormulaKey {
    pub fn of(text: &str, origin: Address) -> Self {
        match parse_formula(text) {
            Ok(ast) => FormulaKey::Normalized(normalize_relative(&ast, origin)),
            Err(_) => FormulaKey::Opaque(text.to_string()),
        }
    }
}

impl fmt::Display for FormulaKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaKey::Normalized(n) => write!(f, "{n}"),
            FormulaKey::Opaque(s) => f.write_str(s),
        }
    }
}

/// True when the two formulas are copies of each other, each read relative
/// to its own host cell.
pub fn copy_equivalent(f1: (&str, Address), f2: (&str, Address)) -> bool {
    FormulaKey::of(f1.0, f1.1) == FormulaKey::of(f2.0, f2.1)
}

/// True when both formulas share the same operator/function skeleton.
pub fn structurally_equivalent(f1: &FormulaAst, f2: &FormulaAst) -> bool {
    f1.same_skeleton(f2)
}
