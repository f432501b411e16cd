//! Field-coefficient persistence by rank counting, used to cross-check the
//! integer barcode.

use crate::chain::FilteredComplex;
use crate::intlinalg::{field_rank, SparseMatrix};
use crate::scalar::{Coefficient, PrimeField, Rationals};

use super::{Death, PersistError};

fn rank<T: Coefficient>(characteristic: u64, m: &SparseMatrix<T>) -> Result<usize, PersistError> {
    if m.nnz() == 0 {
        return Ok(0);
    }
    if characteristic == 0 {
        return Ok(field_rank(&Rationals, m));
    }
    let field = PrimeField::new(characteristic).ok_or(PersistError::Characteristic(characteristic))?;
    Ok(field_rank(&field, m))
}

fn check<T: Coefficient>(c: &FilteredComplex<T>, n: usize, steps: &[usize], characteristic: u64) -> Result<(), PersistError> {
    if characteristic != 0 && PrimeField::new(characteristic).is_none() {
        return Err(PersistError::Characteristic(characteristic));
    }
    if n >= c.num_degrees() {
        return Err(PersistError::Degree { degree: n, max: c.num_degrees().saturating_sub(1) });
    }
    if let Some(&s) = steps.iter().find(|&&s| s > c.steps()) {
        return Err(PersistError::StepOutOfRange { step: s, steps: c.steps() });
    }
    Ok(())
}

/// Rank of `H_n(K^i) -> H_n(K^j)` over the field of the given characteristic:
/// `dim Z_i - dim(Z_i ∩ B_j)`.
pub fn field_persistent_betti<T: Coefficient>(
    c: &FilteredComplex<T>,
    i: usize,
    j: usize,
    n: usize,
    characteristic: u64,
) -> Result<usize, PersistError> {
    check(c, n, &[i, j], characteristic)?;
    if i > j {
        return Err(PersistError::IndexOrder(format!("need i <= j, got i={i}, j={j}")));
    }
    if i == 0 {
        return Ok(0);
    }
    let cols = c.positions_up_to(n, i);
    let cycles = cols.len() - rank(characteristic, &c.boundary_or_zero(n).select_columns(&cols))?;
    if n + 1 >= c.num_degrees() {
        return Ok(cycles);
    }
    let d = c.boundary(n + 1).select_columns(&c.positions_up_to(n + 1, j));
    let inside: std::collections::HashSet<usize> = cols.into_iter().collect();
    let outside: Vec<usize> = (0..c.dim(n)).filter(|p| !inside.contains(p)).collect();
    let bounded = rank(characteristic, &d)? - rank(characteristic, &d.select_rows(&outside))?;
    Ok(cycles - bounded)
}

/// Multiplicity of the interval `[i, k)` (`k = None` for `∞`) in the field
/// barcode of degree `n`.
pub fn field_mu<T: Coefficient>(
    c: &FilteredComplex<T>,
    i: usize,
    k: Death,
    n: usize,
    characteristic: u64,
) -> Result<usize, PersistError> {
    let beta = |a: usize, b: usize| field_persistent_betti(c, a, b, n, characteristic).map(|x| x as i64);
    if i == 0 {
        return Err(PersistError::IndexOrder("births start at step 1".into()));
    }
    let mu = match k {
        Some(k) => {
            if k <= i {
                return Err(PersistError::IndexOrder(format!("death {k} must exceed birth {i}")));
            }
            (beta(i, k - 1)? - beta(i, k)?) - (beta(i - 1, k - 1)? - beta(i - 1, k)?)
        }
        None => beta(i, c.steps())? - beta(i - 1, c.steps())?,
    };
    usize::try_from(mu).map_err(|_| PersistError::Internal(format!("negative multiplicity {mu} at ({i}, {k:?})")))
}

/// All nonzero `(degree, birth, death, multiplicity)` for the field.
pub fn field_barcode<T: Coefficient>(
    c: &FilteredComplex<T>,
    characteristic: u64,
) -> Result<Vec<(usize, usize, Death, usize)>, PersistError> {
    let m = c.steps();
    let mut out = Vec::new();
    for n in 0..c.num_degrees() {
        for i in 1..=m {
            for k in (i + 1..=m).map(Some).chain(std::iter::once(None)) {
                let mu = field_mu(c, i, k, n, characteristic)?;
                if mu > 0 {
                    out.push((n, i, k, mu));
                }
            }
        }
    }
    Ok(out)
}
