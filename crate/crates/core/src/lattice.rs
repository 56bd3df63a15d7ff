//! Small exact integer lattice routines: row Hermite normal form and
//! integer kernels. Enough to compare subgroups of `Z^d` exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row-reduces `rows` in place, pivoting only on the first `limit` columns.
/// Returns the number of pivot rows; those come first, in Hermite form
/// (positive pivots, entries above each pivot reduced into `[0, pivot)`).
fn echelon(rows: &mut [Vec<BigInt>], limit: usize) -> usize {
    let mut r = 0;
    for col in 0..limit {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], &q);
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for v in rows[r].iter_mut() {
                    *v = -&*v;
                }
            }
            for i in 0..r {
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(r);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
            r += 1;
        }
    }
    r
}

/// Canonical basis (reduced row Hermite form) of the lattice spanned by
/// `generators`. Two generator sets span the same subgroup iff their
/// outputs are equal.
pub fn hermite_basis(generators: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(dim) = generators.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows = generators.to_vec();
    let rank = echelon(&mut rows, dim);
    rows.truncate(rank);
    rows
}

/// Basis of `{ v in Z^cols : sum_c v[c] * columns[c] = 0 }`, where
/// `columns[c]` is the image of the c-th standard basis vector.
pub fn integer_kernel(columns: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = columns.len();
    let Some(m) = columns.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<BigInt>> = columns
        .iter()
        .enumerate()
        .map(|(c, img)| {
            let mut row = img.clone();
            row.extend((0..cols).map(|i| BigInt::from((i == c) as u8)));
            row
        })
        .collect();
    let rank = echelon(&mut rows, m);
    let kernel: Vec<Vec<BigInt>> = rows[rank..].iter().map(|r| r[m..].to_vec()).collect();
    hermite_basis(&kernel)
}
