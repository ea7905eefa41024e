//! Serialization helpers shared by the CLI and the report.
//!
//! Exact integers are written as decimal strings. Floats are written with 17
//! significant digits in scientific notation, which is a valid JSON number
//! and round-trips through `f64` exactly.

use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

/// 17-significant-digit representation, or `None` for non-finite values.
pub fn fmt_f64(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

/// Like [`fmt_f64`], with `NaN`/`inf` spelled out for CSV cells.
pub fn fmt_f64_cell(x: f64) -> String {
    fmt_f64(x).unwrap_or_else(|| x.to_string())
}

/// Float newtype that serializes with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match fmt_f64(self.0) {
            Some(text) => {
                let number =
                    serde_json::Number::from_str(&text).map_err(serde::ser::Error::custom)?;
                number.serialize(serializer)
            }
            None => serializer.serialize_none(),
        }
    }
}

impl From<f64> for F17 {
    fn from(x: f64) -> Self {
        F17(x)
    }
}

pub fn f64_as_f17<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    F17(*x).serialize(serializer)
}

pub fn opt_f64_as_f17<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => F17(*v).serialize(serializer),
        None => serializer.serialize_none(),
    }
}

pub fn vec_f64_as_f17<S: Serializer>(xs: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(xs.iter().map(|&x| F17(x)))
}

pub fn biguint_as_string<S: Serializer>(x: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&x.to_string())
}

pub fn display_as_string<T: std::fmt::Display, S: Serializer>(
    x: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&x.to_string())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("in-memory serialization");
    text.push('\n');
    text
}

/// Minimal CSV builder; cells never contain commas or quotes here.
#[derive(Debug, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn with_header(columns: &[&str]) -> Self {
        let mut csv = Csv::default();
        csv.row(columns.iter().copied());
        csv
    }

    pub fn row<I, T>(&mut self, cells: I)
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut first = true;
        for cell in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(cell.as_ref());
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
