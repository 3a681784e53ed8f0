//! Physical quantities written as numbers or as `"<value> <unit>"` strings.
//!
//! Bare numbers are taken in base units: watts, watts per hertz, hertz,
//! radians, metres, or a linear ratio.

use std::fmt;

use serde::{Deserialize, Serialize};

/// What a configuration key measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Ratio,
    Power,
    PowerDensity,
    Frequency,
    Angle,
    Length,
    /// Densities, rates and counts: plain numbers only.
    Plain,
}

impl Dimension {
    fn units(self) -> &'static [&'static str] {
        match self {
            Dimension::Ratio => &["dB", "x"],
            Dimension::Power => &["W", "mW", "dBW", "dBm"],
            Dimension::PowerDensity => &["W/Hz", "dBW/Hz", "dBm/Hz"],
            Dimension::Frequency => &["Hz", "kHz", "MHz", "GHz"],
            Dimension::Angle => &["rad", "deg"],
            Dimension::Length => &["m", "km"],
            Dimension::Plain => &[],
        }
    }
}

/// A value as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Number(v)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Number(v) => write!(f, "{v}"),
            Quantity::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnitError {
    #[error("cannot parse {0:?}: expected \"<number> <unit>\"")]
    Syntax(String),
    #[error("unit `{unit}` does not apply here; expected one of: {expected}")]
    WrongUnit { unit: String, expected: String },
    #[error("this key takes a plain number")]
    PlainOnly,
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

impl Quantity {
    /// The value in base units.
    pub fn resolve(&self, dim: Dimension) -> Result<f64, UnitError> {
        let text = match self {
            Quantity::Number(v) => return Ok(*v),
            Quantity::Text(s) => s.trim(),
        };
        if dim == Dimension::Plain {
            return text.parse().map_err(|_| UnitError::PlainOnly);
        }
        let (number, unit) = text.split_once(char::is_whitespace).ok_or_else(|| UnitError::Syntax(text.to_owned()))?;
        let x: f64 = number.parse().map_err(|_| UnitError::Syntax(text.to_owned()))?;
        let unit = unit.trim();
        if !dim.units().contains(&unit) {
            return Err(UnitError::WrongUnit { unit: unit.to_owned(), expected: dim.units().join(", ") });
        }
        Ok(match unit {
            "x" | "W" | "W/Hz" | "Hz" | "rad" | "m" => x,
            "dB" | "dBW" | "dBW/Hz" => db(x),
            "dBm" | "dBm/Hz" => db(x) * 1e-3,
            "mW" => x * 1e-3,
            "kHz" => x * 1e3,
            "MHz" => x * 1e6,
            "GHz" => x * 1e9,
            "deg" => x.to_radians(),
            "km" => x * 1e3,
            _ => unreachable!("unit list and conversions agree"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(s: &str) -> Quantity {
        Quantity::Text(s.into())
    }

    #[test]
    fn conversions() {
        assert_eq!(text("10 dB").resolve(Dimension::Ratio).unwrap(), 10.0);
        assert_eq!(text("-10 dB").resolve(Dimension::Ratio).unwrap(), 0.1);
        assert_eq!(text("30 dBm").resolve(Dimension::Power).unwrap(), 1.0);
        assert_eq!(text("1 GHz").resolve(Dimension::Frequency).unwrap(), 1e9);
        assert!((text("30 deg").resolve(Dimension::Angle).unwrap() - std::f64::consts::PI / 6.0).abs() < 1e-15);
        let n0 = text("-174 dBm/Hz").resolve(Dimension::PowerDensity).unwrap();
        assert!((n0 * 1e9 / 3.981e-12 - 1.0).abs() < 1e-3);
        assert_eq!(Quantity::Number(2.5).resolve(Dimension::Power).unwrap(), 2.5);
    }

    #[test]
    fn rejections() {
        assert!(matches!(text("10 dBm").resolve(Dimension::Ratio), Err(UnitError::WrongUnit { .. })));
        assert!(matches!(text("10dB").resolve(Dimension::Ratio), Err(UnitError::Syntax(_))));
        assert!(matches!(text("3 dB").resolve(Dimension::Plain), Err(UnitError::PlainOnly)));
        assert_eq!(text("1e-4").resolve(Dimension::Plain).unwrap(), 1e-4);
    }
}
