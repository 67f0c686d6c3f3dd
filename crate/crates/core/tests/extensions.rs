use std::collections::BTreeSet;

use ssom_core::extensions::{
    coline_consistent, extension_from_signature, levi_enlargement, single_element_extensions,
    ExtensionConstraints, ExtensionSignature,
};
use ssom_core::io::corpus::corpus;
use ssom_core::lattice::GeometricLattice;
use ssom_core::oriented_matroid::CovectorSystem;
use ssom_core::sign_vectors::{LabelSet, Sign, SignVector};

/// Every rank-preserving extension of a small system, found by splitting topes.
fn tope_oracle(c: &CovectorSystem) -> BTreeSet<Vec<SignVector>> {
    let topes = c.topes();
    let mut labels = c.labels().to_vec();
    labels.push("g".into());
    let mut out = BTreeSet::new();
    let loop_ext: Vec<SignVector> = c
        .covectors()
        .iter()
        .map(|x| x.extend_by(Sign::Zero))
        .collect();
    out.insert(loop_ext);
    for code in 0..3usize.pow(topes.len() as u32) {
        let mut k = code;
        let mut new_topes = Vec::new();
        for t in &topes {
            match k % 3 {
                0 => new_topes.push(t.extend_by(Sign::Plus)),
                1 => new_topes.push(t.extend_by(Sign::Minus)),
                _ => {
                    new_topes.push(t.extend_by(Sign::Plus));
                    new_topes.push(t.extend_by(Sign::Minus));
                }
            }
            k /= 3;
        }
        let Ok(ext) = CovectorSystem::from_topes(labels.clone(), new_topes) else {
            continue;
        };
        if ext.rank() != c.rank() || !ext.check_axioms().passed() {
            continue;
        }
        let back = ext.restriction(LabelSet::full(c.ground_len())).unwrap();
        if back.covectors() == c.covectors() {
            out.insert(ext.covectors().to_vec());
        }
    }
    out
}

#[test]
fn rank_two_extensions_match_the_tope_oracle() {
    let c = corpus("uniform-2-3").unwrap();
    let oracle = tope_oracle(&c);
    let found: BTreeSet<Vec<SignVector>> =
        single_element_extensions(&c, &ExtensionConstraints::default(), "g")
            .unwrap()
            .into_iter()
            .map(|e| e.extended.covectors().to_vec())
            .collect();
    assert_eq!(oracle.len(), 13);
    assert_eq!(found, oracle);
}

#[test]
fn coline_consistency_decides_every_signature() {
    let c = corpus("sec3-arrangement").unwrap();
    let mut reps: Vec<SignVector> = c
        .cocircuits()
        .into_iter()
        .filter(|y| *y < y.opposite())
        .collect();
    reps.sort_unstable();
    let mut valid = 0;
    for code in 0..3usize.pow(reps.len() as u32) {
        let mut k = code;
        let values: Vec<Sign> = reps
            .iter()
            .map(|_| {
                let s = [Sign::Plus, Sign::Minus, Sign::Zero][k % 3];
                k /= 3;
                s
            })
            .collect();
        let sig = ExtensionSignature {
            cocircuits: reps.clone(),
            values,
        };
        assert!(sig.is_antisymmetric(&c));
        let consistent = coline_consistent(&c, &sig).unwrap();
        let built = extension_from_signature(&c, &sig, "g");
        assert_eq!(consistent, built.is_ok(), "signature {:?}", sig.values);
        valid += consistent as usize;
    }
    let all = single_element_extensions(&c, &ExtensionConstraints::default(), "g").unwrap();
    assert_eq!(valid, all.len());
}

#[test]
fn levi_enlargement_lifts_both_flats() {
    let c = corpus("sec3-arrangement").unwrap();
    let x1 = c.parse_set("H2,H4").unwrap();
    let x2 = c.parse_set("H3,H5").unwrap();
    for generic in [false, true] {
        let ext = levi_enlargement(&c, x1, x2, generic, "g").unwrap();
        let e = &ext.extended;
        assert!(e.check_axioms().passed());
        assert!(e.is_simple());
        assert_eq!(e.render_set(ext.lift(x1).unwrap()), "{H2,H4,g}");
        assert_eq!(e.render_set(ext.lift(x2).unwrap()), "{H3,H5,g}");
        let l = GeometricLattice::from_covectors(e);
        assert_eq!(l.rank(), 3);
    }
}
