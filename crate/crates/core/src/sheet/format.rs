use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StyleFlag {
    Bold,
    Italic,
    Underline,
}

impl FromStr for StyleFlag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bold" => Ok(StyleFlag::Bold),
            "italic" => Ok(StyleFlag::Italic),
            "underline" => Ok(StyleFlag::Underline),
            other => Err(format!("unknown font style {other:?}")),
        }
    }
}

impl fmt::Display for StyleFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StyleFlag::Bold => "bold",
            StyleFlag::Italic => "italic",
            StyleFlag::Underline => "underline",
        })
    }
}

/// 24-bit font colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rgb(pub u32);

impl Rgb {
    pub const BLACK: Rgb = Rgb(0);
}

impl FromStr for Rgb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hex = s
            .strip_prefix('#')
            .ok_or_else(|| format!("colour {s:?} must look like #RRGGBB"))?;
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(format!("colour {s:?} must look like #RRGGBB"));
        }
        u32::from_str_radix(hex, 16)
            .map(Rgb)
            .map_err(|e| e.to_string())
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:06X}", self.0 & 0xFF_FFFF)
    }
}

/// Font-level formatting of a cell's content. Background colour is not part
/// of it; two cells are equally formatted when all four fields match.
#[derive(Debug, Clone, PartialEq)]
pub struct Formatting {
    pub font: String,
    /// Points, always positive.
    pub size: f64,
    pub style: BTreeSet<StyleFlag>,
    pub color: Rgb,
}

impl Default for Formatting {
    fn default() -> Self {
        Formatting {
            font: "default".to_string(),
            size: 10.0,
            style: BTreeSet::new(),
            color: Rgb::BLACK,
        }
    }
}

impl Formatting {
    pub fn new(font: &str, size: f64, style: &[StyleFlag]) -> Self {
        Formatting {
            font: font.to_string(),
            size,
            style: style.iter().copied().collect(),
            color: Rgb::BLACK,
        }
    }

    pub fn with_color(mut self, color: Rgb) -> Self {
        self.color = color;
        self
    }

    pub fn is_bold(&self) -> bool {
        self.style.contains(&StyleFlag::Bold)
    }
}
