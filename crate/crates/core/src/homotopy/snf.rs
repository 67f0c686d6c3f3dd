//! Rank and invariant factors of integer matrices.
//!
//! Sparse elimination on unit pivots runs first in checked `i64`; whatever
//! is left (or everything, after an overflow) goes through a dense Smith
//! normal form over big integers.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    /// Each column sorted by row, without zero entries.
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> SparseMatrix {
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.retain(|&(_, v)| v != 0);
                c
            })
            .collect();
        SparseMatrix { rows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// `self · other`, or `None` on overflow.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        let mut out = Vec::with_capacity(other.ncols());
        for col in &other.cols {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.cols[k] {
                    let e = acc.entry(i).or_insert(0);
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            out.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Some(SparseMatrix {
            rows: self.rows,
            cols: out,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }
}

/// Rank and the invariant factors greater than one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn invariants(m: &SparseMatrix) -> Invariants {
    let mut cols: Vec<BTreeMap<usize, i64>> =
        m.cols.iter().map(|c| c.iter().copied().collect()).collect();
    let mut row_cols: Vec<HashSet<usize>> = vec![HashSet::new(); m.rows];
    for (j, c) in cols.iter().enumerate() {
        for &r in c.keys() {
            row_cols[r].insert(j);
        }
    }
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| cols[j].len());
    let mut rank = 0;
    'passes: loop {
        let mut progress = false;
        for &j in &order {
            let pivot = cols[j]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|&(&r, _)| (row_cols[r].len(), r))
                .map(|(&r, &v)| (r, v));
            let Some((r, a)) = pivot else { continue };
            let others: Vec<usize> = row_cols[r].iter().copied().filter(|&k| k != j).collect();
            for k in others {
                let factor = cols[k][&r] * a;
                let Some(updated) = subtract(&cols[k], &cols[j], factor) else {
                    break 'passes;
                };
                for &row in cols[k].keys() {
                    if !updated.contains_key(&row) {
                        row_cols[row].remove(&k);
                    }
                }
                for &row in updated.keys() {
                    row_cols[row].insert(k);
                }
                cols[k] = updated;
            }
            for &row in cols[j].keys() {
                row_cols[row].remove(&j);
            }
            cols[j].clear();
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let rest: Vec<&BTreeMap<usize, i64>> = cols.iter().filter(|c| !c.is_empty()).collect();
    if rest.is_empty() {
        return Invariants {
            rank,
            torsion: Vec::new(),
        };
    }
    let mut rows: Vec<usize> = rest.iter().flat_map(|c| c.keys().copied()).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut dense = vec![vec![BigInt::zero(); rest.len()]; rows.len()];
    for (j, c) in rest.iter().enumerate() {
        for (&r, &v) in c.iter() {
            let i = rows.binary_search(&r).expect("row present");
            dense[i][j] = BigInt::from(v);
        }
    }
    let diag = smith_diagonal(dense);
    let torsion = diag.iter().filter(|d| !d.is_one()).cloned().collect();
    Invariants {
        rank: rank + diag.len(),
        torsion,
    }
}

fn subtract(
    x: &BTreeMap<usize, i64>,
    y: &BTreeMap<usize, i64>,
    f: i64,
) -> Option<BTreeMap<usize, i64>> {
    let mut out = x.clone();
    for (&r, &v) in y {
        let e = out.entry(r).or_insert(0);
        *e = e.checked_sub(v.checked_mul(f)?)?;
        if *e == 0 {
            out.remove(&r);
        }
    }
    Some(out)
}

/// Nonzero diagonal of the Smith normal form, each dividing the next.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < n.min(m) {
        let Some((pi, pj)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..m {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..m {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..m {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}
