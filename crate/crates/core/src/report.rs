//! Self-describing result tables shared by the bound calculators and the
//! command-line tool.
//!
//! Every computed bound is recorded as an entry carrying its value, the
//! formula it came from, and the inputs that went into it, so a report can be
//! audited (and recomputed) without the code that produced it.  Exponents
//! that are exact rationals are stored as [`Rational`] values — never as
//! floats — so `59/30` stays `59/30` all the way to the output layer.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// An exact rational number, kept reduced with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("rational denominator must be nonzero"));
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Ok(Rational {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A value recorded in a report: real, integer, exact rational, or text.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Real(f64),
    Int(i64),
    Rational(Rational),
    Text(String),
}

// The CLI renders values itself (with fixed float formatting); this Display
// is for logs and error messages.
impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportValue::Real(v) => write!(f, "{v}"),
            ReportValue::Int(v) => write!(f, "{v}"),
            ReportValue::Rational(r) => write!(f, "{r}"),
            ReportValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// One named result: identifier, value, the formula that produced it, the
/// inputs it was produced from, and units ("" for dimensionless).
#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub id: String,
    pub value: ReportValue,
    pub formula: String,
    pub inputs: BTreeMap<String, ReportValue>,
    pub units: String,
}

/// An ordered collection of [`ReportEntry`] values with unique identifiers.
#[derive(Debug, Clone, Default)]
pub struct BoundReport {
    entries: Vec<ReportEntry>,
}

impl BoundReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append an entry; identifiers must be unique within a report.
    pub fn push(&mut self, entry: ReportEntry) -> Result<()> {
        if self.entries.iter().any(|e| e.id == entry.id) {
            return Err(Error::domain(format!(
                "duplicate report entry id '{}'",
                entry.id
            )));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Convenience constructor used by the calculators.
pub fn entry(
    id: &str,
    value: ReportValue,
    formula: &str,
    inputs: &[(&str, ReportValue)],
    units: &str,
) -> ReportEntry {
    ReportEntry {
        id: id.to_string(),
        value,
        formula: formula.to_string(),
        inputs: inputs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
        units: units.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce_and_display() {
        let r = Rational::new(118, 60).unwrap();
        assert_eq!((r.num(), r.den()), (59, 30));
        assert_eq!(r.to_string(), "59/30");

        let neg = Rational::new(59, -210).unwrap();
        assert_eq!((neg.num(), neg.den()), (-59, 210));
        assert_eq!(neg.to_string(), "-59/210");

        let int = Rational::new(-8, 4).unwrap();
        assert_eq!(int.to_string(), "-2");

        assert!(Rational::new(1, 0).is_err());
        assert!((Rational::new(59, 30).unwrap().to_f64() - 59.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn report_rejects_duplicate_ids() {
        let mut report = BoundReport::new();
        report
            .push(entry("a", ReportValue::Int(1), "1", &[], ""))
            .unwrap();
        let dup = report.push(entry("a", ReportValue::Int(2), "2", &[], ""));
        assert!(dup.is_err());
        assert_eq!(report.len(), 1);
        assert!(report.get("a").is_some());
        assert!(report.get("b").is_none());
    }
}
