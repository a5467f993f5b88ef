//! Dense row reduction over 𝔽_p.
//!
//! Pivoting is deterministic: the pivot of a column is the first row, in
//! stored order, with a nonzero entry there.

use crate::ffpoly::PrimeChar;

/// Left kernel of `rows`: a basis of `{ v : Σ v_i · rows[i] = 0 }`, in
/// reduced row echelon form over the row index.
pub fn left_kernel(rows: &[Vec<u32>], p: PrimeChar) -> Vec<Vec<u32>> {
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    // augment each row with its coordinate vector
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            debug_assert_eq!(r.len(), width);
            let mut v = Vec::with_capacity(width + n);
            v.extend_from_slice(r);
            v.extend((0..n).map(|k| u32::from(k == i)));
            v
        })
        .collect();
    let pivots = eliminate(&mut aug, width, p);
    let kernel: Vec<Vec<u32>> = aug[pivots..]
        .iter()
        .map(|row| row[width..].to_vec())
        .collect();
    let mut kernel = kernel;
    row_echelon(&mut kernel, p);
    kernel
}

/// Reduces `rows` in place to reduced row echelon form, zero rows dropped.
/// Returns the rank.
pub fn row_echelon(rows: &mut Vec<Vec<u32>>, p: PrimeChar) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let rank = eliminate(rows, width, p);
    rows.truncate(rank);
    rank
}

/// Gauss–Jordan on the first `width` columns. Rows with a pivot are moved to
/// the front, in pivot column order; returns how many there are.
fn eliminate(rows: &mut [Vec<u32>], width: usize, p: PrimeChar) -> usize {
    let mut rank = 0;
    for col in 0..width {
        let Some(found) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = p.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = p.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = p.sub(*x, p.mul(factor, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn combine(v: &[u32], rows: &[Vec<u32>], p: PrimeChar) -> Vec<u32> {
        let width = rows.first().map_or(0, Vec::len);
        let mut out = vec![0; width];
        for (c, row) in v.iter().zip(rows) {
            for (o, &x) in out.iter_mut().zip(row) {
                *o = p.add(*o, p.mul(*c, x));
            }
        }
        out
    }

    #[test]
    fn small_kernel() {
        let p = PrimeChar::new(7).unwrap();
        let rows = vec![vec![1, 2], vec![2, 4], vec![0, 1]];
        let k = left_kernel(&rows, p);
        assert_eq!(k, vec![vec![1, 3, 0]]);
        assert!(left_kernel(&[vec![1, 0], vec![0, 1]], p).is_empty());
        assert_eq!(left_kernel(&[vec![0, 0]], p), vec![vec![1]]);
    }

    #[test]
    fn echelon_rank() {
        let p = PrimeChar::new(5).unwrap();
        let mut rows = vec![vec![0, 2, 4], vec![0, 1, 2], vec![3, 0, 1]];
        assert_eq!(row_echelon(&mut rows, p), 2);
        assert_eq!(rows, vec![vec![1, 0, 2], vec![0, 1, 2]]);
    }

    proptest! {
        #[test]
        fn kernel_is_annihilating_and_full(
            rows in prop::collection::vec(prop::collection::vec(0u32..5, 4), 1..7)
        ) {
            let p = PrimeChar::new(5).unwrap();
            let k = left_kernel(&rows, p);
            for v in &k {
                prop_assert!(combine(v, &rows, p).iter().all(|&x| x == 0));
            }
            let mut copy = rows.clone();
            let rank = row_echelon(&mut copy, p);
            prop_assert_eq!(k.len() + rank, rows.len());
        }
    }
}
