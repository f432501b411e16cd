//! Barcodes and their JSON / SVG renderings.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::chain::ChainVector;
use crate::scalar::Coefficient;

/// One cyclic summand of `BD^{i,k}_n`: born entering `K^birth`, dying
/// entering `K^death` (half-open `[birth, death)`), never when `death` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bar<T> {
    pub dim: usize,
    pub birth: usize,
    pub death: Option<usize>,
    /// `Z` or `Z_d`.
    pub label: String,
    pub generator: Option<ChainVector<T>>,
}

impl<T> Bar<T> {
    pub fn is_torsion(&self) -> bool {
        self.label != "Z"
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }

    /// Sort key: degree, birth, death with `∞` last, then label.
    pub fn order(a: &Self, b: &Self) -> Ordering {
        let death = |d: Option<usize>| d.unwrap_or(usize::MAX);
        (a.dim, a.birth, death(a.death), &a.label).cmp(&(b.dim, b.birth, death(b.death), &b.label))
    }
}

impl<T> fmt::Display for Bar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.death {
            Some(k) => write!(f, "H{} {} [{}, {})", self.dim, self.label, self.birth, k),
            None => write!(f, "H{} {} [{}, inf)", self.dim, self.label, self.birth),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barcode<T> {
    pub steps: usize,
    pub bars: Vec<Bar<T>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BarcodeJsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("missing or malformed field `{0}`")]
    Field(&'static str),
    #[error("coefficient {0} does not fit the scalar type")]
    Coefficient(String),
}

fn coeff_to_json<T: Coefficient>(x: &T) -> Value {
    match x.to_i64_checked() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn coeff_from_json<T: Coefficient>(v: &Value) -> Result<T, BarcodeJsonError> {
    let big: BigInt = match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or(BarcodeJsonError::Field("generator"))?,
        Value::String(s) => s.parse().map_err(|_| BarcodeJsonError::Field("generator"))?,
        _ => return Err(BarcodeJsonError::Field("generator")),
    };
    T::from_bigint(&big).ok_or_else(|| BarcodeJsonError::Coefficient(big.to_string()))
}

fn usize_field(obj: &Value, key: &'static str) -> Result<usize, BarcodeJsonError> {
    obj.get(key).and_then(Value::as_u64).map(|v| v as usize).ok_or(BarcodeJsonError::Field(key))
}

impl<T: Coefficient> Barcode<T> {
    pub fn bars_in_degree(&self, n: usize) -> impl Iterator<Item = &Bar<T>> + '_ {
        self.bars.iter().filter(move |b| b.dim == n)
    }

    /// Bars alive on the whole interval `[i, j]`; with torsion these do not
    /// in general count `H^{i,j}`, only the free bars do.
    pub fn count_alive(&self, n: usize, i: usize, j: usize) -> usize {
        self.bars_in_degree(n).filter(|b| b.birth <= i && b.death.is_none_or(|k| k > j)).count()
    }

    /// Infinite death is `null`; generators are `[[cell, coeff], ...]`.
    pub fn to_json(&self) -> Value {
        let bars: Vec<Value> = self
            .bars
            .iter()
            .map(|b| {
                let mut obj = json!({ "dim": b.dim, "birth": b.birth, "death": b.death, "label": b.label });
                if let Some(g) = &b.generator {
                    let terms: Vec<Value> = g.coeffs.iter().map(|(id, x)| json!([id, coeff_to_json(x)])).collect();
                    obj["generator"] = Value::Array(terms);
                }
                obj
            })
            .collect();
        json!({ "steps": self.steps, "bars": bars })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("barcode JSON is always serializable")
    }

    pub fn from_json(v: &Value) -> Result<Self, BarcodeJsonError> {
        let steps = usize_field(v, "steps")?;
        let raw = v.get("bars").and_then(Value::as_array).ok_or(BarcodeJsonError::Field("bars"))?;
        let mut bars = Vec::with_capacity(raw.len());
        for b in raw {
            let dim = usize_field(b, "dim")?;
            let birth = usize_field(b, "birth")?;
            let death = match b.get("death") {
                None | Some(Value::Null) => None,
                Some(d) => Some(d.as_u64().ok_or(BarcodeJsonError::Field("death"))? as usize),
            };
            let label = b.get("label").and_then(Value::as_str).ok_or(BarcodeJsonError::Field("label"))?.to_string();
            let generator = match b.get("generator") {
                None | Some(Value::Null) => None,
                Some(Value::Array(terms)) => {
                    let mut pairs = Vec::with_capacity(terms.len());
                    for t in terms {
                        let pair = t.as_array().filter(|p| p.len() == 2).ok_or(BarcodeJsonError::Field("generator"))?;
                        let id = pair[0].as_u64().ok_or(BarcodeJsonError::Field("generator"))? as usize;
                        pairs.push((id, coeff_from_json::<T>(&pair[1])?));
                    }
                    Some(ChainVector::from_terms(dim, pairs))
                }
                Some(_) => return Err(BarcodeJsonError::Field("generator")),
            };
            bars.push(Bar { dim, birth, death, label, generator });
        }
        Ok(Self { steps, bars })
    }

    pub fn from_json_str(s: &str) -> Result<Self, BarcodeJsonError> {
        let v: Value = serde_json::from_str(s).map_err(|e| BarcodeJsonError::Syntax(e.to_string()))?;
        Self::from_json(&v)
    }

    /// Plain text, one bar per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.bars {
            out.push_str(&b.to_string());
            out.push('\n');
        }
        out
    }

    /// Horizontal bars grouped by degree; infinite bars end in an arrow,
    /// torsion bars are dashed.
    pub fn to_svg(&self) -> String {
        const LEFT: f64 = 60.0;
        const UNIT: f64 = 60.0;
        const ROW: f64 = 14.0;
        const GAP: f64 = 26.0;
        let m = self.steps.max(1) as f64;
        let right = LEFT + UNIT * (m + 0.6);
        let width = right + 20.0;
        let degrees: Vec<usize> = {
            let mut d: Vec<usize> = self.bars.iter().map(|b| b.dim).collect();
            d.dedup();
            d
        };
        let mut body = String::new();
        let mut y = 30.0;
        for step in 1..=self.steps {
            let x = LEFT + UNIT * (step as f64 - 1.0);
            body.push_str(&format!(
                "<line x1=\"{x}\" y1=\"20\" x2=\"{x}\" y2=\"HEIGHT\" stroke=\"#ddd\"/><text x=\"{x}\" y=\"14\" font-size=\"10\" text-anchor=\"middle\">{step}</text>\n"
            ));
        }
        for n in degrees {
            body.push_str(&format!("<text x=\"8\" y=\"{}\" font-size=\"12\">H{n}</text>\n", y + 10.0));
            for b in self.bars_in_degree(n) {
                let x1 = LEFT + UNIT * (b.birth as f64 - 1.0);
                let x2 = match b.death {
                    Some(k) => LEFT + UNIT * (k as f64 - 1.0),
                    None => right,
                };
                let dash = if b.is_torsion() { " stroke-dasharray=\"4 2\"" } else { "" };
                body.push_str(&format!(
                    "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"3\"{dash}><title>{}</title></line>\n",
                    b
                ));
                if b.death.is_none() {
                    body.push_str(&format!(
                        "<polygon points=\"{x2},{y} {},{} {},{}\" fill=\"black\"/>\n",
                        x2 - 6.0,
                        y - 4.0,
                        x2 - 6.0,
                        y + 4.0
                    ));
                }
                if b.is_torsion() {
                    body.push_str(&format!("<text x=\"{}\" y=\"{}\" font-size=\"9\">{}</text>\n", x2 + 4.0, y + 3.0, b.label));
                }
                y += ROW;
            }
            y += GAP;
        }
        let height = y;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n{}</svg>\n",
            body.replace("HEIGHT", &height.to_string())
        )
    }
}
