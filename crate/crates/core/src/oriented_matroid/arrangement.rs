//! Covectors of real arrangements given by rational linear forms.
//!
//! A sign pattern `s` is realized iff the homogeneous system `α_H(v) = 0` for
//! `s_H = 0` and `s_H α_H(v) > 0` otherwise has a solution. Equalities are
//! eliminated by passing to an integral basis of their null space; the strict
//! part is decided by Fourier–Motzkin elimination over big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::CovectorSystem;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::sign_vectors::{Sign, SignVector};

/// Largest arrangement accepted by the enumeration.
pub const MAX_FORMS: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalArrangement {
    pub labels: Vec<String>,
    pub forms: Vec<Vec<BigRational>>,
}

impl RationalArrangement {
    pub fn new(labels: Vec<String>, forms: Vec<Vec<BigRational>>) -> Result<RationalArrangement> {
        if labels.len() != forms.len() {
            return Err(Error::Precondition(format!(
                "{} labels for {} forms",
                labels.len(),
                forms.len()
            )));
        }
        let dim = forms.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::DegenerateArrangement(
                "ambient dimension is zero".into(),
            ));
        }
        for (l, f) in labels.iter().zip(&forms) {
            if f.len() != dim {
                return Err(Error::DegenerateArrangement(format!(
                    "form `{l}` has {} coordinates, expected {dim}",
                    f.len()
                )));
            }
            if f.iter().all(Zero::is_zero) {
                return Err(Error::DegenerateArrangement(format!("form `{l}` is zero")));
            }
        }
        Ok(RationalArrangement { labels, forms })
    }

    /// Builds from integer rows with labels `H1, H2, ...`.
    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<RationalArrangement> {
        let labels = (1..=rows.len()).map(|i| format!("H{i}")).collect();
        let forms = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        RationalArrangement::new(labels, forms)
    }

    pub fn dimension(&self) -> usize {
        self.forms.first().map_or(0, Vec::len)
    }

    /// Integral rows, scaled by positive factors.
    fn integer_forms(&self) -> Vec<Vec<BigInt>> {
        self.forms.iter().map(|r| clear_denominators(r)).collect()
    }
}

pub fn from_arrangement(arr: &RationalArrangement) -> Result<CovectorSystem> {
    from_arrangement_with(arr, Execution::default())
}

/// Enumerates every realized sign vector. Candidates are scanned in a
/// prefix tree so that an infeasible prefix discards all its extensions.
pub fn from_arrangement_with(arr: &RationalArrangement, exec: Execution) -> Result<CovectorSystem> {
    let n = arr.forms.len();
    if n > MAX_FORMS {
        return Err(Error::TooManyElements(n, MAX_FORMS));
    }
    let forms = arr.integer_forms();
    let split = n.min(4);
    let mut prefixes = vec![Vec::new()];
    for _ in 0..split {
        let mut next = Vec::new();
        for p in prefixes {
            for s in [Sign::Plus, Sign::Minus, Sign::Zero] {
                let mut q: Vec<Sign> = p.clone();
                q.push(s);
                if feasible(&forms[..q.len()], &q) {
                    next.push(q);
                }
            }
        }
        prefixes = next;
    }
    let found = par::flat_map_range(exec, prefixes.len(), |k| {
        let mut out = Vec::new();
        let mut signs = prefixes[k].clone();
        extend(&forms, &mut signs, &mut out);
        out
    });
    CovectorSystem::new(arr.labels.clone(), found)
}

fn extend(forms: &[Vec<BigInt>], signs: &mut Vec<Sign>, out: &mut Vec<SignVector>) {
    if signs.len() == forms.len() {
        out.push(SignVector::from_signs(signs));
        return;
    }
    for s in [Sign::Plus, Sign::Minus, Sign::Zero] {
        signs.push(s);
        if feasible(&forms[..signs.len()], signs) {
            extend(forms, signs, out);
        }
        signs.pop();
    }
}

/// Is there a `v` with `sgn(form_i · v) = signs_i` for all `i`?
pub(crate) fn feasible(forms: &[Vec<BigInt>], signs: &[Sign]) -> bool {
    let dim = forms.first().map_or(0, Vec::len);
    let equalities: Vec<Vec<BigRational>> = forms
        .iter()
        .zip(signs)
        .filter(|(_, s)| **s == Sign::Zero)
        .map(|(f, _)| {
            f.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let basis = null_space(&equalities, dim);
    let mut strict: Vec<Vec<BigInt>> = Vec::new();
    for (f, s) in forms.iter().zip(signs) {
        let sign = match s {
            Sign::Zero => continue,
            Sign::Plus => BigInt::one(),
            Sign::Minus => -BigInt::one(),
        };
        let row: Vec<BigInt> = basis
            .iter()
            .map(|b| f.iter().zip(b).map(|(x, y)| x * y).sum::<BigInt>() * &sign)
            .collect();
        strict.push(row);
    }
    strict_system_feasible(strict)
}

/// Integral basis of `{v : A v = 0}`.
fn null_space(rows: &[Vec<BigRational>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); dim];
            v[f] = BigRational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[k][f].clone();
            }
            clear_denominators(&v)
        })
        .collect()
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}

/// Decides `A w > 0` (componentwise strict) by Fourier–Motzkin elimination.
fn strict_system_feasible(mut rows: Vec<Vec<BigInt>>) -> bool {
    loop {
        normalize(&mut rows);
        if rows.is_empty() {
            return true;
        }
        if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return false;
        }
        let dim = rows[0].len();
        // Eliminate the variable producing the fewest new rows.
        let j = (0..dim)
            .filter(|&j| rows.iter().any(|r| !r[j].is_zero()))
            .min_by_key(|&j| {
                let p = rows.iter().filter(|r| r[j].is_positive()).count();
                let q = rows.iter().filter(|r| r[j].is_negative()).count();
                p * q
            })
            .expect("some nonzero column");
        let (pos, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|r| r[j].is_positive());
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|r| r[j].is_negative());
        let mut next = zero;
        // A one-sided variable can be taken arbitrarily large in the good direction.
        if !pos.is_empty() && !neg.is_empty() {
            for p in &pos {
                for q in &neg {
                    let a = -&q[j];
                    let b = p[j].clone();
                    let row: Vec<BigInt> = p.iter().zip(q).map(|(x, y)| x * &a + y * &b).collect();
                    next.push(row);
                }
            }
        }
        for r in next.iter_mut() {
            r[j] = BigInt::zero();
        }
        rows = next;
    }
}

fn normalize(rows: &mut Vec<Vec<BigInt>>) {
    for r in rows.iter_mut() {
        let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in r.iter_mut() {
                *x = &*x / &g;
            }
        }
    }
    rows.sort();
    rows.dedup();
}
