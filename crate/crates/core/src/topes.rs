//! Tope posets, halfspaces, convexity, convex-first linear extensions and
//! the subcomplexes `L(Q)` and `L^∨[Q]`.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::error::{Error, Result};
use crate::oriented_matroid::CovectorSystem;
use crate::poset::{FinitePoset, Subposet};
use crate::sign_vectors::{Sign, SignVector};

pub fn dist(t: &SignVector, r: &SignVector) -> usize {
    t.separator(r).len()
}

/// `T(OM, B)`: topes ordered by `R ≤ T` iff `S(B,R) ⊆ S(B,T)`.
#[derive(Clone, Debug)]
pub struct TopePoset {
    pub base: SignVector,
    /// All topes in canonical order; poset index `i` is `topes[i]`.
    pub topes: Vec<SignVector>,
    pub poset: FinitePoset,
}

impl TopePoset {
    pub fn new(c: &CovectorSystem, base: SignVector) -> Result<TopePoset> {
        let topes = c.topes();
        if !topes.contains(&base) {
            return Err(Error::NotATope(base.to_string()));
        }
        let ids = topes.iter().map(|t| t.to_string()).collect();
        let seps: Vec<_> = topes.iter().map(|t| base.separator(t)).collect();
        let poset = FinitePoset::from_leq(ids, |i, j| seps[i].is_subset(seps[j]))?;
        Ok(TopePoset { base, topes, poset })
    }

    pub fn rank_of(&self, t: &SignVector) -> usize {
        dist(&self.base, t)
    }

    pub fn index_of(&self, t: &SignVector) -> Result<usize> {
        self.topes
            .binary_search(t)
            .map_err(|_| Error::NotATope(t.to_string()))
    }

    pub fn to_bitset(&self, q: &[SignVector]) -> Result<FixedBitSet> {
        let mut s = self.poset.empty_set();
        for t in q {
            s.insert(self.index_of(t)?);
        }
        Ok(s)
    }

    /// Deterministic linear extension (smallest canonical id first).
    pub fn linear_extension(&self) -> Vec<SignVector> {
        self.poset
            .linear_extension()
            .into_iter()
            .map(|i| self.topes[i])
            .collect()
    }

    pub fn random_linear_extension<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<SignVector> {
        self.poset
            .random_linear_extension(rng)
            .into_iter()
            .map(|i| self.topes[i])
            .collect()
    }
}

/// `T_e^ε`.
pub fn halfspace(c: &CovectorSystem, e: usize, eps: Sign) -> Result<Vec<SignVector>> {
    if e >= c.ground_len() {
        return Err(Error::UnknownElement(format!("element index {e}")));
    }
    if eps == Sign::Zero {
        return Err(Error::Precondition("halfspace sign must be + or -".into()));
    }
    Ok(c.topes().into_iter().filter(|t| t.get(e) == eps).collect())
}

fn check_topes(topes: &HashSet<SignVector>, q: &[SignVector]) -> Result<()> {
    match q.iter().find(|t| !topes.contains(t)) {
        Some(t) => Err(Error::NotATope(t.to_string())),
        None => Ok(()),
    }
}

/// Intersection of all halfspaces containing `q`.
pub fn convex_hull(c: &CovectorSystem, q: &[SignVector]) -> Result<Vec<SignVector>> {
    let all = c.topes();
    check_topes(&all.iter().copied().collect(), q)?;
    if q.is_empty() {
        return Ok(Vec::new());
    }
    let (mut plus, mut minus) = (u64::MAX, u64::MAX);
    for t in q {
        plus &= t.plus_mask();
        minus &= t.minus_mask();
    }
    let keep = crate::sign_vectors::LabelSet(plus | minus).intersection(c.ground());
    let witness = q[0];
    Ok(all
        .into_iter()
        .filter(|t| t.agrees_on(&witness, keep))
        .collect())
}

pub fn is_convex_halfspace(c: &CovectorSystem, q: &[SignVector]) -> Result<bool> {
    let hull = convex_hull(c, q)?;
    let qs: HashSet<SignVector> = q.iter().copied().collect();
    Ok(hull.len() == qs.len() && hull.iter().all(|t| qs.contains(t)))
}

/// Betweenness test: `T, R ∈ Q` and `dist(T,P) + dist(P,R) = dist(T,R)` force `P ∈ Q`.
pub fn is_convex_betweenness(c: &CovectorSystem, q: &[SignVector]) -> Result<bool> {
    let all = c.topes();
    let qs: HashSet<SignVector> = q.iter().copied().collect();
    check_topes(&all.iter().copied().collect(), q)?;
    for t in &qs {
        for r in &qs {
            let d = dist(t, r);
            for p in &all {
                if !qs.contains(p) && dist(t, p) + dist(p, r) == d {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Convexity computed both ways; disagreement is an internal error.
pub fn is_convex(c: &CovectorSystem, q: &[SignVector]) -> Result<bool> {
    let a = is_convex_halfspace(c, q)?;
    let b = is_convex_betweenness(c, q)?;
    if a != b {
        return Err(Error::Internal(format!(
            "convexity tests disagree (halfspace {a}, betweenness {b})"
        )));
    }
    Ok(a)
}

/// A linear extension of `T(OM,B)` in which all topes of the convex set `q` come first.
pub fn convex_first_extension(
    c: &CovectorSystem,
    base: SignVector,
    q: &[SignVector],
) -> Result<Vec<SignVector>> {
    if !q.contains(&base) {
        return Err(Error::Precondition(format!("base tope {base} is not in Q")));
    }
    if !is_convex_halfspace(c, q)? {
        return Err(Error::NotConvex);
    }
    let tp = TopePoset::new(c, base)?;
    let ideal = tp.to_bitset(q)?;
    let order = tp.poset.linear_extension_ideal_first(&ideal)?;
    Ok(order.into_iter().map(|i| tp.topes[i]).collect())
}

/// The default shelling of `L ∖ {0}`: the lexicographic linear extension of `T(OM,B)`.
pub fn shelling_order_from_extension(
    c: &CovectorSystem,
    base: SignVector,
) -> Result<Vec<SignVector>> {
    Ok(TopePoset::new(c, base)?.linear_extension())
}

/// `L(Q) = {σ ∈ L : σ ≤ T for some T ∈ Q}`, as covectors in canonical order.
pub fn subcomplex_lq(c: &CovectorSystem, q: &[SignVector]) -> Vec<SignVector> {
    c.covectors()
        .iter()
        .filter(|s| q.iter().any(|t| s.leq(t)))
        .copied()
        .collect()
}

/// `L^∨[Q] = {σ : T(σ) ⊆ Q}`; also checks `(L ∖ L(T ∖ Q))^∨ = L^∨[Q]`.
pub fn dual_subcomplex(c: &CovectorSystem, q: &[SignVector]) -> Result<Vec<SignVector>> {
    let all = c.topes();
    let qs: HashSet<SignVector> = q.iter().copied().collect();
    check_topes(&all.iter().copied().collect(), q)?;
    let direct: Vec<SignVector> = c
        .covectors()
        .iter()
        .filter(|s| all.iter().filter(|t| s.leq(t)).all(|t| qs.contains(t)))
        .copied()
        .collect();
    let rest: Vec<SignVector> = all.iter().filter(|t| !qs.contains(t)).copied().collect();
    let lr: HashSet<SignVector> = subcomplex_lq(c, &rest).into_iter().collect();
    let complement: Vec<SignVector> = c
        .covectors()
        .iter()
        .filter(|s| !lr.contains(s))
        .copied()
        .collect();
    if complement != direct {
        return Err(Error::Internal(
            "L^∨[Q] differs from the complement of L(T∖Q)".into(),
        ));
    }
    Ok(direct)
}

/// `L ∖ {0}` as an induced subposet of the face poset.
pub fn reduced_face_poset(c: &CovectorSystem, face_poset: &FinitePoset) -> Subposet {
    let mut members = face_poset.full_set();
    if let Some(z) = c.index_of(&c.zero()) {
        members.set(z, false);
    }
    face_poset.induced(&members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oriented_matroid::{from_arrangement, RationalArrangement};

    fn uniform23() -> CovectorSystem {
        from_arrangement(
            &RationalArrangement::from_integer_rows(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn distances_and_hulls() {
        let c = uniform23();
        let topes = c.topes();
        for t in &topes {
            assert_eq!(dist(t, t), 0);
            assert_eq!(dist(t, &t.opposite()), 3);
            assert!(is_convex(&c, &[*t]).unwrap());
        }
        assert!(is_convex(&c, &topes).unwrap());
        let pair = [topes[0], topes[0].opposite()];
        assert!(!is_convex(&c, &pair).unwrap());
        assert_eq!(convex_hull(&c, &pair).unwrap().len(), 6);
    }

    #[test]
    fn tope_poset_is_graded_from_base() {
        let c = uniform23();
        let b = c.topes()[0];
        let tp = TopePoset::new(&c, b).unwrap();
        for (x, y) in tp.poset.covers() {
            assert_eq!(tp.rank_of(&tp.topes[y]), tp.rank_of(&tp.topes[x]) + 1);
        }
        assert_eq!(tp.poset.minimal_elements(), vec![tp.index_of(&b).unwrap()]);
        assert_eq!(
            tp.poset.maximal_elements(),
            vec![tp.index_of(&b.opposite()).unwrap()]
        );
    }

    #[test]
    fn dual_subcomplex_extremes() {
        let c = uniform23();
        let all = c.topes();
        assert_eq!(dual_subcomplex(&c, &all).unwrap(), c.covectors().to_vec());
        assert!(dual_subcomplex(&c, &[]).unwrap().is_empty());
        assert_eq!(subcomplex_lq(&c, &all), c.covectors().to_vec());
    }
}
