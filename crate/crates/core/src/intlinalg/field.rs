//! Rank over a field, used for the field-coefficient cross-checks.

use super::matrix::SparseMatrix;
use crate::scalar::{Coefficient, Field};

/// Rank of `m` after reducing its entries into `field`.
pub fn field_rank<F: Field, T: Coefficient>(field: &F, m: &SparseMatrix<T>) -> usize {
    let mut rows: Vec<Vec<F::Elem>> = vec![vec![field.zero(); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        rows[r][c] = field.embed(v);
    }
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&r| !field.is_zero(&rows[r][col])) else { continue };
        rows.swap(rank, p);
        let inv = field.inv(&rows[rank][col]);
        for r in rank + 1..rows.len() {
            if field.is_zero(&rows[r][col]) {
                continue;
            }
            let factor = field.mul(&rows[r][col], &inv);
            let (top, bottom) = rows.split_at_mut(r);
            let pivot_row = &top[rank];
            for (x, y) in bottom[0].iter_mut().zip(pivot_row).skip(col) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        rank += 1;
    }
    rank
}
