//! Line-oriented text format for filtered complexes.
//!
//! ```text
//! steps 2
//! cell 0 0 1 -
//! cell 1 1 1 simplex:0,0
//! cell 2 2 2 grid:0,0;0,1;1,1
//! bd 2 1 2
//! ```
//!
//! `cell <id> <dim> <filt> <label>` lines come in basis order; `bd <cell>
//! <face> <coeff>` lines list nonzero incidence numbers. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::complex::{CellLabel, ComplexBuilder, FilteredComplex};
use super::error::ChainError;
use crate::scalar::Coefficient;

pub fn write_complex<T: Coefficient>(c: &FilteredComplex<T>) -> String {
    let mut out = String::new();
    writeln!(out, "steps {}", c.steps()).unwrap();
    writeln!(out, "degrees {}", c.num_degrees()).unwrap();
    for basis in c.bases() {
        for cell in basis {
            let label = cell.label.as_ref().map_or("-".to_string(), |l| l.to_string());
            writeln!(out, "cell {} {} {} {}", cell.id, cell.dim, cell.filt, label).unwrap();
        }
    }
    for n in 1..c.num_degrees() {
        for (r, col, v) in c.boundary(n).entries() {
            writeln!(out, "bd {} {} {}", c.basis(n)[col].id, c.basis(n - 1)[r].id, v).unwrap();
        }
    }
    out
}

fn parse_label(s: &str) -> Option<Option<CellLabel>> {
    if s == "-" {
        return Some(None);
    }
    let (kind, body) = s.split_once(':')?;
    match kind {
        "grid" => {
            let pts: Option<Vec<(usize, usize)>> = body
                .split(';')
                .filter(|p| !p.is_empty())
                .map(|p| {
                    let (r, c) = p.split_once(',')?;
                    Some((r.parse().ok()?, c.parse().ok()?))
                })
                .collect();
            Some(Some(CellLabel::Grid(pts?)))
        }
        "simplex" => {
            let vs: Option<Vec<usize>> = body.split(',').filter(|p| !p.is_empty()).map(|v| v.parse().ok()).collect();
            Some(Some(CellLabel::Simplex(vs?)))
        }
        _ => None,
    }
}

pub fn parse_complex<T: Coefficient>(text: &str) -> Result<FilteredComplex<T>, ChainError> {
    let mut builder: Option<ComplexBuilder<T>> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: &str| ChainError::Parse { line, message: message.to_string() };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let num = |i: usize| -> Result<usize, ChainError> {
            fields.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| err("expected a nonnegative integer"))
        };
        match fields[0] {
            "steps" => {
                if builder.is_some() {
                    return Err(err("duplicate steps line"));
                }
                builder = Some(ComplexBuilder::new(num(1)?));
            }
            "degrees" => {
                let b = builder.take().ok_or_else(|| err("steps line must come first"))?;
                builder = Some(b.with_degrees(num(1)?));
            }
            "cell" => {
                let b = builder.as_mut().ok_or_else(|| err("steps line must come first"))?;
                if fields.len() != 5 {
                    return Err(err("expected: cell <id> <dim> <filt> <label>"));
                }
                let label = parse_label(fields[4]).ok_or_else(|| err("malformed label"))?;
                b.add_cell_with_id(num(1)?, num(2)?, num(3)?, label);
            }
            "bd" => {
                let b = builder.as_mut().ok_or_else(|| err("steps line must come first"))?;
                if fields.len() != 4 {
                    return Err(err("expected: bd <cell> <face> <coeff>"));
                }
                let big: BigInt = fields[3].parse().map_err(|_| err("malformed coefficient"))?;
                let coeff = T::from_bigint(&big).ok_or_else(|| err("coefficient out of range"))?;
                b.add_face(num(1)?, num(2)?, coeff);
            }
            other => return Err(err(&format!("unknown directive {other:?}"))),
        }
    }
    builder.ok_or(ChainError::Parse { line: 0, message: "missing steps line".into() })?.build()
}
