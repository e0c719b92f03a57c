//! Exact integer rank of sparse matrices.
//!
//! Rank is computed by integer row elimination: each update is
//! pivot_val * row - row_val * pivot_row, after which the row is divided by
//! the gcd of its entries.  Divisions keep the rows primitive, so entry
//! growth stays mild for the incidence-like matrices this crate produces.
//! No floating threshold is involved anywhere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Sparse rows: col -> nonzero entry.
pub type SparseRow = BTreeMap<usize, BigInt>;

/// Exact rank over the rationals of the matrix whose rows are given.
pub fn rank_sparse(mut rows: Vec<SparseRow>) -> usize {
    rows.retain(|r| !r.is_empty());
    let mut rank = 0;
    while !rows.is_empty() {
        // Pivot row: fewest nonzeros, then smallest leading magnitude.
        let pivot_pos = (0..rows.len())
            .min_by_key(|&i| {
                let r = &rows[i];
                let min_abs = r.values().map(|v| v.abs()).min().unwrap();
                (r.len(), min_abs)
            })
            .unwrap();
        let pivot_row = rows.swap_remove(pivot_pos);
        // Pivot column: smallest magnitude within the pivot row.
        let (&pcol, pval) = pivot_row
            .iter()
            .min_by_key(|(_, v)| v.abs())
            .map(|(c, v)| (c, v.clone()))
            .unwrap();
        rank += 1;
        let mut next = Vec::with_capacity(rows.len());
        for mut row in rows {
            if let Some(rv) = row.remove(&pcol) {
                let mut updated: SparseRow = BTreeMap::new();
                for (c, v) in &row {
                    updated.insert(*c, v * &pval);
                }
                for (c, v) in &pivot_row {
                    if *c == pcol {
                        continue;
                    }
                    let delta = v * &rv;
                    let e = updated.entry(*c).or_insert_with(BigInt::zero);
                    *e -= delta;
                    if e.is_zero() {
                        updated.remove(c);
                    }
                }
                normalize(&mut updated);
                if !updated.is_empty() {
                    next.push(updated);
                }
            } else if !row.is_empty() {
                next.push(row);
            }
        }
        rows = next;
    }
    rank
}

fn normalize(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g == BigInt::from(1) {
            return;
        }
    }
    if g > BigInt::from(1) {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}
