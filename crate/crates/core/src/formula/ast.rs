use std::fmt;

use crate::sheet::column_name;

/// One coordinate of a parsed reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefPart {
    /// Anchored with `$`.
    Absolute(u32),
    Relative(u32),
}

impl RefPart {
    pub fn index(self) -> u32 {
        match self {
            RefPart::Absolute(i) | RefPart::Relative(i) => i,
        }
    }

    pub fn is_absolute(self) -> bool {
        matches!(self, RefPart::Absolute(_))
    }
}

/// A1-style reference as written in a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellRef {
    pub column: RefPart,
    pub row: RefPart,
}

/// A reference coordinate relative to the hosting cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormPart {
    Fixed(u32),
    Offset(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NormRef {
    pub column: NormPart,
    pub row: NormPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Concat,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
            BinaryOp::Concat => "&",
            BinaryOp::Eq => "=",
            BinaryOp::Ne => "<>",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Plus,
    Neg,
    /// Postfix `%`.
    Percent,
}

/// Formula expression tree, generic over the reference representation so
/// the same shape serves parsed (`CellRef`) and normalized (`NormRef`) forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr<R> {
    Number(f64),
    Text(String),
    Ref(R),
    /// Top-left corner first.
    Range(R, R),
    Call {
        name: String,
        args: Vec<Expr<R>>,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr<R>>,
        rhs: Box<Expr<R>>,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr<R>>,
    },
    Paren(Box<Expr<R>>),
}

pub type FormulaAst = Expr<CellRef>;

impl<R> Expr<R> {
    /// Rebuilds the tree with every reference mapped through `f`; `None` if
    /// any mapping fails.
    pub fn try_map_refs<S>(&self, f: &mut impl FnMut(&R) -> Option<S>) -> Option<Expr<S>> {
        Some(match self {
            Expr::Number(n) => Expr::Number(*n),
            Expr::Text(s) => Expr::Text(s.clone()),
            Expr::Ref(r) => Expr::Ref(f(r)?),
            Expr::Range(a, b) => Expr::Range(f(a)?, f(b)?),
            Expr::Call { name, args } => Expr::Call {
                name: name.clone(),
                args: args
                    .iter()
                    .map(|a| a.try_map_refs(f))
                    .collect::<Option<_>>()?,
            },
            Expr::Binary { op, lhs, rhs } => Expr::Binary {
                op: *op,
                lhs: Box::new(lhs.try_map_refs(f)?),
                rhs: Box::new(rhs.try_map_refs(f)?),
            },
            Expr::Unary { op, operand } => Expr::Unary {
                op: *op,
                operand: Box::new(operand.try_map_refs(f)?),
            },
            Expr::Paren(inner) => Expr::Paren(Box::new(inner.try_map_refs(f)?)),
        })
    }

    /// Operator/function skeleton equality: literals match any literal and
    /// references (single or range) match any reference.
    pub fn same_skeleton<S>(&self, other: &Expr<S>) -> bool {
        use Expr::*;
        match (self, other) {
            (Number(_) | Text(_), Number(_) | Text(_)) => true,
            (Ref(_) | Range(..), Ref(_) | Range(..)) => true,
            (Call { name: n1, args: a1 }, Call { name: n2, args: a2 }) => {
                n1 == n2
                    && a1.len() == a2.len()
                    && a1.iter().zip(a2).all(|(x, y)| x.same_skeleton(y))
            }
            (
                Binary {
                    op: o1,
                    lhs: l1,
                    rhs: r1,
                },
                Binary {
                    op: o2,
                    lhs: l2,
                    rhs: r2,
                },
            ) => o1 == o2 && l1.same_skeleton(l2) && r1.same_skeleton(r2),
            (
                Unary {
                    op: o1,
                    operand: x1,
                },
                Unary {
                    op: o2,
                    operand: x2,
                },
            ) => o1 == o2 && x1.same_skeleton(x2),
            (Paren(x1), Paren(x2)) => x1.same_skeleton(x2),
            _ => false,
        }
    }

    pub fn refs(&self) -> Vec<&R> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a R>) {
        match self {
            Expr::Number(_) | Expr::Text(_) => {}
            Expr::Ref(r) => out.push(r),
            Expr::Range(a, b) => {
                out.push(a);
                out.push(b);
            }
            Expr::Call { args, .. } => args.iter().for_each(|a| a.collect_refs(out)),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_refs(out);
                rhs.collect_refs(out);
            }
            Expr::Unary { operand, .. } => operand.collect_refs(out),
            Expr::Paren(inner) => inner.collect_refs(out),
        }
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.column.is_absolute() {
            f.write_str("$")?;
        }
        f.write_str(&column_name(self.column.index()))?;
        if self.row.is_absolute() {
            f.write_str("$")?;
        }
        write!(f, "{}", self.row.index())
    }
}

impl fmt::Display for NormRef {
    /// R1C1 notation: `R[-1]C`, `R5C[2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tag, part) in [("R", self.row), ("C", self.column)] {
            f.write_str(tag)?;
            match part {
                NormPart::Fixed(i) => write!(f, "{i}")?,
                NormPart::Offset(0) => {}
                NormPart::Offset(d) => write!(f, "[{d}]")?,
            }
        }
        Ok(())
    }
}

impl<R: fmt::Display> fmt::Display for Expr<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(n) => write!(f, "{n}"),
            Expr::Text(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            Expr::Ref(r) => write!(f, "{r}"),
            Expr::Range(a, b) => write!(f, "{a}:{b}"),
            Expr::Call { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Binary { op, lhs, rhs } => write!(f, "{lhs}{}{rhs}", op.symbol()),
            Expr::Unary {
                op: UnaryOp::Percent,
                operand,
            } => write!(f, "{operand}%"),
            Expr::Unary {
                op: UnaryOp::Neg,
                operand,
            } => write!(f, "-{operand}"),
            Expr::Unary {
                op: UnaryOp::Plus,
                operand,
            } => write!(f, "+{operand}"),
            Expr::Paren(inner) => write!(f, "({inner})"),
        }
    }
}
