use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Decimal and thousands separators used for numeric cell text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Locale {
    /// `1,234.5`
    PointDecimal,
    /// `1.234,5`
    #[default]
    CommaDecimal,
}

impl Locale {
    pub fn decimal_separator(self) -> char {
        match self {
            Locale::PointDecimal => '.',
            Locale::CommaDecimal => ',',
        }
    }

    pub fn thousands_separator(self) -> char {
        match self {
            Locale::PointDecimal => ',',
            Locale::CommaDecimal => '.',
        }
    }
}

impl FromStr for Locale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "point" | "point-decimal" => Ok(Locale::PointDecimal),
            "comma" | "comma-decimal" => Ok(Locale::CommaDecimal),
            other => Err(format!(
                "unknown locale {other:?} (expected point or comma)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellValue {
    /// Always finite.
    Number(f64),
    Text(String),
    /// Present but empty.
    Undefined,
}

impl CellValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            CellValue::Number(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            CellValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_text(&self) -> bool {
        matches!(self, CellValue::Text(_))
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, CellValue::Undefined)
    }

    /// Text form of the value under `locale`; parsing it back yields the same value.
    pub fn render(&self, locale: Locale) -> String {
        match self {
            CellValue::Number(n) => render_number(*n, locale),
            CellValue::Text(s) => s.clone(),
            CellValue::Undefined => String::new(),
        }
    }
}

impl fmt::Display for CellValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellValue::Number(n) => write!(f, "{n}"),
            CellValue::Text(s) => f.write_str(s),
            CellValue::Undefined => Ok(()),
        }
    }
}

/// Classifies raw cell text. Numeric text under `locale` (optionally signed,
/// with well-formed thousands groups, a decimal part and a trailing `%`)
/// becomes a number; blank text is `Undefined`; anything else stays text.
pub fn parse_cell_value(raw: &str, locale: Locale) -> CellValue {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return CellValue::Undefined;
    }
    match parse_number(trimmed, locale) {
        Some(n) => CellValue::Number(n),
        None => CellValue::Text(raw.to_string()),
    }
}

fn parse_number(s: &str, locale: Locale) -> Option<f64> {
    let (body, percent) = match s.strip_suffix('%') {
        Some(b) => (b, true),
        None => (s, false),
    };
    let (negative, body) = match body.as_bytes().first()? {
        b'-' => (true, &body[1..]),
        b'+' => (false, &body[1..]),
        _ => (false, body),
    };
    let (int_part, frac_part) = match body.split_once(locale.decimal_separator()) {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = integer_digits(int_part, locale.thousands_separator())?;
    let mut canonical = String::with_capacity(s.len() + 4);
    if negative {
        canonical.push('-');
    }
    canonical.push_str(&digits);
    if let Some(frac) = frac_part {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        canonical.push('.');
        canonical.push_str(frac);
    }
    if percent {
        canonical.push_str("e-2");
    }
    let value: f64 = canonical.parse().ok()?;
    value.is_finite().then_some(value)
}

/// Plain digits, or digit groups `d{1,3}(sep ddd)+`. Returns the digits with
/// separators removed.
fn integer_digits(s: &str, sep: char) -> Option<String> {
    if s.is_empty() {
        return None;
    }
    let groups: Vec<&str> = s.split(sep).collect();
    if groups
        .iter()
        .any(|g| g.is_empty() || !g.bytes().all(|b| b.is_ascii_digit()))
    {
        return None;
    }
    if groups.len() > 1 && (groups[0].len() > 3 || groups[1..].iter().any(|g| g.len() != 3)) {
        return None;
    }
    Some(groups.concat())
}

/// Renders a number so that [`parse_cell_value`] under the same locale gives
/// back the identical value. No thousands grouping is emitted.
pub fn render_number(n: f64, locale: Locale) -> String {
    let s = n.to_string();
    match locale {
        Locale::PointDecimal => s,
        Locale::CommaDecimal => s.replace('.', ","),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const COMMA: Locale = Locale::CommaDecimal;
    const POINT: Locale = Locale::PointDecimal;

    #[test]
    fn european_thousands() {
        assert_eq!(
            parse_cell_value("118.711", COMMA),
            CellValue::Number(118711.0)
        );
        assert_eq!(
            parse_cell_value("200.000", COMMA),
            CellValue::Number(200000.0)
        );
        assert_eq!(
            parse_cell_value("-1.054", COMMA),
            CellValue::Number(-1054.0)
        );
        assert_eq!(
            parse_cell_value("1.234.567,25", COMMA),
            CellValue::Number(1234567.25)
        );
        assert_eq!(parse_cell_value("2001", COMMA), CellValue::Number(2001.0));
    }

    #[test]
    fn percentages() {
        assert_eq!(parse_cell_value("100,0%", COMMA), CellValue::Number(1.0));
        assert_eq!(parse_cell_value("42,3%", COMMA), CellValue::Number(0.423));
        assert_eq!(parse_cell_value("42.3%", POINT), CellValue::Number(0.423));
    }

    #[test]
    fn text_and_blank() {
        assert_eq!(
            parse_cell_value("Quarter 1", COMMA),
            CellValue::Text("Quarter 1".into())
        );
        assert_eq!(parse_cell_value("", COMMA), CellValue::Undefined);
        assert_eq!(parse_cell_value("   ", COMMA), CellValue::Undefined);
        // malformed groups are not numbers
        assert!(parse_cell_value("12.34", COMMA).is_text());
        assert!(parse_cell_value("1234.567", COMMA).is_text());
        assert!(parse_cell_value("1,5,3", COMMA).is_text());
        assert!(parse_cell_value("1e5", POINT).is_text());
        assert!(parse_cell_value("-", POINT).is_text());
        assert!(parse_cell_value("%", POINT).is_text());
        assert!(parse_cell_value("1,", COMMA).is_text());
    }

    #[test]
    fn point_locale() {
        assert_eq!(
            parse_cell_value("1,234.5", POINT),
            CellValue::Number(1234.5)
        );
        assert_eq!(parse_cell_value("200.000", POINT), CellValue::Number(200.0));
        assert!(parse_cell_value("1.234,5", POINT).is_text());
    }

    fn locale() -> impl Strategy<Value = Locale> {
        prop_oneof![Just(COMMA), Just(POINT)]
    }

    proptest! {
        #[test]
        fn locale_soundness(int in 0u64..10_000_000_000, frac in proptest::option::of("[0-9]{1,6}"),
                            neg: bool, pct: bool, grouped: bool, loc in locale()) {
            let mut digits = int.to_string();
            if grouped {
                let mut out = String::new();
                for (i, ch) in digits.chars().enumerate() {
                    if i > 0 && (digits.len() - i) % 3 == 0 {
                        out.push(loc.thousands_separator());
                    }
                    out.push(ch);
                }
                digits = out;
            }
            let mut s = String::new();
            if neg { s.push('-'); }
            s.push_str(&digits);
            if let Some(f) = &frac { s.push(loc.decimal_separator()); s.push_str(f); }
            if pct { s.push('%'); }
            let n = parse_cell_value(&s, loc).as_number().expect("accepted as number");
            let again = parse_cell_value(&render_number(n, loc), loc);
            prop_assert_eq!(again, CellValue::Number(n));
        }

        #[test]
        fn any_finite_renders_back(n in proptest::num::f64::NORMAL | proptest::num::f64::ZERO, loc in locale()) {
            prop_assert_eq!(parse_cell_value(&render_number(n, loc), loc), CellValue::Number(n));
        }
    }
}
