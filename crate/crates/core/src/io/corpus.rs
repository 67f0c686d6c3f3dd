//! Bundled example oriented matroids.

use crate::error::{Error, Result};
use crate::oriented_matroid::{from_arrangement, CovectorSystem, RationalArrangement};
use crate::sign_vectors::{LabelSet, Sign, SignVector};

use super::format::parse_om;

pub const CORPUS_NAMES: [&str; 6] = [
    "rank1",
    "boolean3",
    "uniform-2-3",
    "braid3",
    "sec3-arrangement",
    "non-pappus",
];

const NON_PAPPUS: &str = include_str!("../../data/non_pappus.om");

pub fn corpus(name: &str) -> Result<CovectorSystem> {
    match name {
        "rank1" => CovectorSystem::new(
            vec!["e".into()],
            ["0", "+", "-"]
                .iter()
                .map(|s| SignVector::parse(s).expect("literal"))
                .collect(),
        ),
        "boolean3" => rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &["e1", "e2", "e3"]),
        "uniform-2-3" => rows(&[&[1, 0], &[0, 1], &[1, 1]], &["e1", "e2", "e3"]),
        "braid3" => from_arrangement(&braid3_arrangement()),
        "sec3-arrangement" => from_arrangement(&sec3_arrangement()),
        "non-pappus" => parse_om(NON_PAPPUS),
        _ => Err(Error::UnknownElement(format!("corpus member `{name}`"))),
    }
}

fn rows(forms: &[&[i64]], labels: &[&str]) -> Result<CovectorSystem> {
    let rows: Vec<Vec<i64>> = forms.iter().map(|r| r.to_vec()).collect();
    let mut arr = RationalArrangement::from_integer_rows(&rows)?;
    arr.labels = labels.iter().map(|s| s.to_string()).collect();
    from_arrangement(&arr)
}

/// `H1 = ker(x), H2 = ker(y), H3 = ker(x+y), H4 = ker(z), H5 = ker(x+z)`.
pub fn sec3_arrangement() -> RationalArrangement {
    RationalArrangement::from_integer_rows(&[
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![1, 1, 0],
        vec![0, 0, 1],
        vec![1, 0, 1],
    ])
    .expect("literal arrangement")
}

/// The forms `x_i - x_j` for `1 ≤ i < j ≤ 4`, restricted to `x_4 = 0`.
pub fn braid3_arrangement() -> RationalArrangement {
    let mut arr = RationalArrangement::from_integer_rows(&[
        vec![1, -1, 0],
        vec![1, 0, -1],
        vec![0, 1, -1],
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
    ])
    .expect("literal arrangement");
    arr.labels = ["b12", "b13", "b23", "b14", "b24", "b34"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    arr
}

/// Nine points of a Pappus configuration, `A_i` on one line, `B_i` on
/// another, and `C_1, C_2, C_3` the three cross intersections.
pub fn pappus_arrangement() -> RationalArrangement {
    let mut arr = RationalArrangement::from_integer_rows(&[
        vec![0, 0, 1],
        vec![1, 0, 1],
        vec![3, 0, 1],
        vec![0, 1, 1],
        vec![2, 1, 1],
        vec![5, 1, 1],
        vec![2, 1, 3],
        vec![15, 3, 8],
        vec![13, 2, 5],
    ])
    .expect("literal arrangement");
    arr.labels = ["A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    arr
}

/// Breaks the Pappus line `{C1, C2, C3}`: the three pseudolines through the
/// common point are pulled apart into a small triangle, leaving every other
/// incidence in place.
pub fn non_pappus_from_pappus() -> Result<CovectorSystem> {
    let pappus = from_arrangement(&pappus_arrangement())?;
    let n = pappus.ground_len();
    let triple: Vec<usize> = vec![6, 7, 8];
    let tset = LabelSet::from_indices(triple.iter().copied());
    let y = *pappus
        .covectors()
        .iter()
        .find(|c| c.zero_set() == tset)
        .ok_or_else(|| Error::Construction("Pappus line is not a flat".into()))?;
    let rest = LabelSet::full(n).difference(tset);
    let local = |c: &SignVector| c.agrees_on(&y, rest);
    let present: Vec<SignVector> = pappus
        .covectors()
        .iter()
        .filter(|c| local(c))
        .map(|c| c.restrict(&triple))
        .collect();
    let full: Vec<SignVector> = (0..8u64)
        .map(|b| SignVector::from_masks(3, b, !b & 7).expect("three signs"))
        .collect();
    let mut missing: Vec<SignVector> = full.into_iter().filter(|w| !present.contains(w)).collect();
    missing.sort_unstable();
    if missing.len() != 2 {
        return Err(Error::Construction(
            "expected two missing sign patterns".into(),
        ));
    }
    let t = missing[0];
    let mut covectors: Vec<SignVector> = pappus
        .covectors()
        .iter()
        .filter(|c| !local(c) && !local(&c.opposite()))
        .copied()
        .collect();
    for code in 1..27u32 {
        let mut w = SignVector::zero(3);
        let mut k = code;
        for i in 0..3 {
            w.set(i, [Sign::Zero, Sign::Plus, Sign::Minus][(k % 3) as usize]);
            k /= 3;
        }
        if w.leq(&t.opposite()) {
            continue;
        }
        let mut v = y;
        for (j, &i) in triple.iter().enumerate() {
            v.set(i, w.get(j));
        }
        covectors.push(v);
        covectors.push(v.opposite());
    }
    CovectorSystem::new(pappus.labels().to_vec(), covectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_member_loads() {
        for name in CORPUS_NAMES {
            let c = corpus(name).unwrap();
            assert!(c.check_axioms().passed(), "{name}");
        }
        assert!(corpus("nope").is_err());
    }

    #[test]
    fn frozen_non_pappus_matches_generator() {
        assert_eq!(
            corpus("non-pappus").unwrap().covectors(),
            non_pappus_from_pappus().unwrap().covectors()
        );
    }
}
