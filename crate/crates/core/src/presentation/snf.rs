//! Smith normal form over the integers, with exact big-integer arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Diagonal of the Smith normal form of `m` (`min(rows, cols)` entries).
///
/// Entries are nonnegative and each divides the next; zeros come last.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut diag = Vec::with_capacity(rows.min(cols));

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t, t) else {
            diag.extend(std::iter::repeat(BigInt::zero()).take(rows.min(cols) - t));
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for i in t..rows {
                        let v = &a[i][t] * &q;
                        a[i][j] -= v;
                    }
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                // A smaller remainder sits in row or column t: make it the pivot.
                let (pi, pj) = min_in_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let pivot = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_nonzero(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, v) in row.iter().enumerate().skip(c0) {
            if v.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let cells = (t..a.len())
        .map(|i| (i, t))
        .chain((t + 1..a[t].len()).map(|j| (t, j)));
    cells
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
        .expect("pivot cross has a nonzero entry")
}

pub fn smith_normal_form_i64(m: &[Vec<i64>]) -> Vec<BigInt> {
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    smith_normal_form(&big)
}
