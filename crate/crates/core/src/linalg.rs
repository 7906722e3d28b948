//! Dense exact linear algebra: row echelon forms and ranks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::field::Field;

/// Reduced row echelon form of `rows`; returns only the nonzero rows, sorted
/// by pivot column. The result depends only on the row space.
pub fn echelon<F: Field>(field: &F, rows: Vec<Vec<F::Elem>>) -> Vec<Vec<F::Elem>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut basis: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    for mut row in rows {
        // Reduce against existing pivots.
        for (p, b) in &basis {
            if !field.is_zero(&row[*p]) {
                let c = row[*p].clone();
                for j in 0..ncols {
                    if !field.is_zero(&b[j]) {
                        row[j] = field.sub(&row[j], &field.mul(&c, &b[j]));
                    }
                }
            }
        }
        let Some(p) = row.iter().position(|x| !field.is_zero(x)) else {
            continue;
        };
        let inv = field.inv(&row[p]);
        for x in row.iter_mut() {
            if !field.is_zero(x) {
                *x = field.mul(x, &inv);
            }
        }
        // Clear the new pivot column from earlier rows.
        for (_, b) in basis.iter_mut() {
            if !field.is_zero(&b[p]) {
                let c = b[p].clone();
                for j in 0..ncols {
                    if !field.is_zero(&row[j]) {
                        b[j] = field.sub(&b[j], &field.mul(&c, &row[j]));
                    }
                }
            }
        }
        basis.push((p, row));
    }
    basis.sort_by_key(|(p, _)| *p);
    basis.into_iter().map(|(_, r)| r).collect()
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        let pv = prow[col].clone();
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for j in col..ncols {
                let v = &pv * &row[j] - &factor * &prow[j];
                // Exact by Sylvester's identity.
                debug_assert!((&v % &prev).is_zero());
                row[j] = v.div_floor(&prev);
            }
        }
        prev = pv;
        rank += 1;
    }
    rank
}
