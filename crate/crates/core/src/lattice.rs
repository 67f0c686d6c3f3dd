//! The geometric lattice of flats: rank, joins and meets, modularity,
//! supersolvability, Brylawski's interval isomorphism and Whitney numbers.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::oriented_matroid::CovectorSystem;
use crate::par::{self, Execution};
use crate::poset::FinitePoset;
use crate::sign_vectors::LabelSet;

/// Lexicographic order on sorted element lists, so `{1,2,3} < {1,4} < {2}`.
pub fn lex_cmp(a: LabelSet, b: LabelSet) -> Ordering {
    a.iter().cmp(b.iter())
}

#[derive(Clone, Debug)]
pub struct GeometricLattice {
    labels: Vec<String>,
    /// Sorted by rank, then lexicographically.
    flats: Vec<LabelSet>,
    rank: Vec<usize>,
    index: HashMap<LabelSet, usize>,
    mobius: Vec<i64>,
}

impl GeometricLattice {
    pub fn from_covectors(c: &CovectorSystem) -> GeometricLattice {
        GeometricLattice::from_flats(c.labels().to_vec(), c.flats())
            .expect("zero sets of an oriented matroid form a lattice")
    }

    /// Builds from an explicit family of flats, which must be closed under
    /// intersection and contain the full ground set.
    pub fn from_flats(labels: Vec<String>, flats: Vec<LabelSet>) -> Result<GeometricLattice> {
        let mut flats = flats;
        flats.sort_unstable_by_key(|f| (f.len(), f.0));
        flats.dedup();
        let top = LabelSet::full(labels.len());
        if !flats.contains(&top) {
            return Err(Error::Construction("ground set is not a flat".into()));
        }
        let mut rank = vec![0usize; flats.len()];
        for i in 0..flats.len() {
            rank[i] = (0..i)
                .filter(|&j| flats[j] != flats[i] && flats[j].is_subset(flats[i]))
                .map(|j| rank[j] + 1)
                .max()
                .unwrap_or(0);
        }
        let mut order: Vec<usize> = (0..flats.len()).collect();
        order.sort_by(|&a, &b| {
            rank[a]
                .cmp(&rank[b])
                .then_with(|| lex_cmp(flats[a], flats[b]))
        });
        let flats: Vec<LabelSet> = order.iter().map(|&i| flats[i]).collect();
        let rank: Vec<usize> = order.iter().map(|&i| rank[i]).collect();
        let index: HashMap<LabelSet, usize> =
            flats.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        for a in &flats {
            for b in &flats {
                if !index.contains_key(&a.intersection(*b)) {
                    return Err(Error::Construction(format!(
                        "{} ∩ {} is not a flat",
                        a.render(&labels),
                        b.render(&labels)
                    )));
                }
            }
        }
        let mut mobius = vec![0i64; flats.len()];
        for i in 0..flats.len() {
            if i == 0 {
                mobius[i] = 1;
                continue;
            }
            let s: i64 = (0..i)
                .filter(|&j| flats[j] != flats[i] && flats[j].is_subset(flats[i]))
                .map(|j| mobius[j])
                .sum();
            mobius[i] = -s;
        }
        Ok(GeometricLattice {
            labels,
            flats,
            rank,
            index,
            mobius,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn flats(&self) -> &[LabelSet] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn bottom(&self) -> LabelSet {
        self.flats[0]
    }

    pub fn top(&self) -> LabelSet {
        *self.flats.last().expect("nonempty lattice")
    }

    pub fn rank(&self) -> usize {
        *self.rank.last().expect("nonempty lattice")
    }

    pub fn is_flat(&self, x: LabelSet) -> bool {
        self.index.contains_key(&x)
    }

    fn idx(&self, x: LabelSet) -> Result<usize> {
        self.index
            .get(&x)
            .copied()
            .ok_or_else(|| Error::NotAFlat(self.render(x)))
    }

    pub fn rank_of(&self, x: LabelSet) -> Result<usize> {
        Ok(self.rank[self.idx(x)?])
    }

    pub fn corank_of(&self, x: LabelSet) -> Result<usize> {
        Ok(self.rank() - self.rank_of(x)?)
    }

    pub fn mobius(&self, x: LabelSet) -> Result<i64> {
        Ok(self.mobius[self.idx(x)?])
    }

    pub fn render(&self, x: LabelSet) -> String {
        x.render(&self.labels)
    }

    pub fn parse(&self, text: &str) -> Result<LabelSet> {
        let x = LabelSet::parse(text, &self.labels)?;
        self.idx(x)?;
        Ok(x)
    }

    pub fn flats_of_rank(&self, k: usize) -> Vec<LabelSet> {
        self.flats
            .iter()
            .zip(&self.rank)
            .filter(|(_, r)| **r == k)
            .map(|(f, _)| *f)
            .collect()
    }

    /// Smallest flat containing `s`.
    pub fn closure(&self, s: LabelSet) -> LabelSet {
        self.flats
            .iter()
            .filter(|f| s.is_subset(**f))
            .fold(self.top(), |acc, f| acc.intersection(*f))
    }

    pub fn join(&self, x: LabelSet, y: LabelSet) -> LabelSet {
        self.closure(x.union(y))
    }

    pub fn meet(&self, x: LabelSet, y: LabelSet) -> LabelSet {
        x.intersection(y)
    }

    /// `[lo, hi]` in lattice order.
    pub fn interval(&self, lo: LabelSet, hi: LabelSet) -> Vec<LabelSet> {
        self.flats
            .iter()
            .filter(|f| lo.is_subset(**f) && f.is_subset(hi))
            .copied()
            .collect()
    }

    /// Flats covered by `x`.
    pub fn lower_covers(&self, x: LabelSet) -> Result<Vec<LabelSet>> {
        let r = self.rank_of(x)?;
        if r == 0 {
            return Ok(Vec::new());
        }
        Ok(self
            .flats_of_rank(r - 1)
            .into_iter()
            .filter(|f| f.is_subset(x))
            .collect())
    }

    /// Unsigned Whitney numbers of the first kind, `|w_i| = Σ_{rk X = i} |μ(∅, X)|`.
    pub fn whitney(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.rank() + 1];
        for (r, m) in self.rank.iter().zip(&self.mobius) {
            out[*r] += m.unsigned_abs();
        }
        out
    }

    pub fn is_modular_flat(&self, x: LabelSet) -> Result<ModularityVerdict> {
        self.is_modular_flat_with(x, Execution::default())
    }

    /// Tests `Z ∨ (X ∧ Y) = (Z ∨ X) ∧ Y` for all flats `Z ≤ Y`.
    pub fn is_modular_flat_with(&self, x: LabelSet, exec: Execution) -> Result<ModularityVerdict> {
        self.idx(x)?;
        Ok(self.modular_within(x, self.top(), exec))
    }

    /// Modularity of `x` inside the lower interval `[∅, top]`.
    fn modular_within(&self, x: LabelSet, top: LabelSet, exec: Execution) -> ModularityVerdict {
        let members: Vec<LabelSet> = self.interval(self.bottom(), top);
        let witness = par::find_first(exec, members.len(), |yi| {
            let y = members[yi];
            members.iter().filter(|z| z.is_subset(y)).find_map(|&z| {
                let lhs = self.join(z, x.intersection(y));
                let rhs = self.join(z, x).intersection(y);
                (lhs != rhs).then_some((z, y))
            })
        });
        match witness {
            None => ModularityVerdict::Modular,
            Some((z, y)) => ModularityVerdict::NotModular { z, y },
        }
    }

    /// Rank-3 criterion: a rank-2 flat is modular iff it meets every rank-2 flat.
    pub fn rank3_modular_coatom_test(&self, x: LabelSet) -> Result<bool> {
        if self.rank() != 3 {
            return Err(Error::RankMismatch(format!(
                "lattice has rank {}, expected 3",
                self.rank()
            )));
        }
        if self.rank_of(x)? != 2 {
            return Err(Error::RankMismatch(format!(
                "{} does not have rank 2",
                self.render(x)
            )));
        }
        Ok(self.flats_of_rank(2).iter().all(|y| !x.is_disjoint(*y)))
    }

    /// Rank-2 flats disjoint from `x`.
    pub fn disjoint_rank2(&self, x: LabelSet) -> Vec<LabelSet> {
        self.flats_of_rank(2)
            .into_iter()
            .filter(|y| x.is_disjoint(*y))
            .collect()
    }

    /// Searches for a maximal chain of modular flats. Coatoms are tried in
    /// lexicographic order, so the answer is deterministic.
    pub fn is_supersolvable(&self) -> Option<MChain> {
        let mut memo = HashMap::new();
        self.chain_below(self.top(), &mut memo)
            .map(|flats| MChain { flats })
    }

    fn chain_below(
        &self,
        top: LabelSet,
        memo: &mut HashMap<LabelSet, Option<Vec<LabelSet>>>,
    ) -> Option<Vec<LabelSet>> {
        if let Some(hit) = memo.get(&top) {
            return hit.clone();
        }
        let result = if top == self.bottom() {
            Some(vec![top])
        } else {
            let mut found = None;
            for m in self.lower_covers(top).expect("flat") {
                if !self
                    .modular_within(m, top, Execution::Sequential)
                    .is_modular()
                {
                    continue;
                }
                if let Some(mut chain) = self.chain_below(m, memo) {
                    chain.push(top);
                    found = Some(chain);
                    break;
                }
            }
            found
        };
        memo.insert(top, result.clone());
        result
    }

    /// Exhaustive scan over all maximal chains; exponential, for cross-checks.
    pub fn supersolvable_bruteforce(&self) -> Option<MChain> {
        let modular: Vec<bool> = self
            .flats
            .iter()
            .map(|f| self.is_modular_flat(*f).expect("flat").is_modular())
            .collect();
        let mut chain = vec![self.bottom()];
        fn walk(l: &GeometricLattice, modular: &[bool], chain: &mut Vec<LabelSet>) -> bool {
            let last = *chain.last().expect("nonempty chain");
            if last == l.top() {
                return true;
            }
            let r = l.rank_of(last).expect("flat");
            for f in l.flats_of_rank(r + 1) {
                if last.is_subset(f) && modular[l.index[&f]] {
                    chain.push(f);
                    if walk(l, modular, chain) {
                        return true;
                    }
                    chain.pop();
                }
            }
            false
        }
        walk(self, &modular, &mut chain).then_some(MChain { flats: chain })
    }

    /// Brylawski's isomorphism `[Y, X ∨ Y] → [X ∧ Y, X]`, `Z ↦ Z ∧ X`, with
    /// inverse `W ↦ W ∨ Y`, for modular `X`. Both directions are verified.
    pub fn brylawski_iso(&self, x: LabelSet, y: LabelSet) -> Result<BrylawskiIso> {
        self.idx(y)?;
        if let ModularityVerdict::NotModular { z, y: wy } = self.is_modular_flat(x)? {
            return Err(Error::NotModular {
                flat: self.render(x),
                z: self.render(z),
                y: self.render(wy),
            });
        }
        let upper = self.interval(y, self.join(x, y));
        let lower = self.interval(x.intersection(y), x);
        let down: Vec<LabelSet> = upper.iter().map(|z| z.intersection(x)).collect();
        let up: Vec<LabelSet> = lower.iter().map(|w| self.join(*w, y)).collect();
        let iso = BrylawskiIso {
            x,
            y,
            upper,
            lower,
            down,
            up,
        };
        iso.verify()
            .map_err(|m| Error::Internal(format!("Brylawski map: {m}")))?;
        Ok(iso)
    }

    /// The lattice as a poset, with flats rendered as ids.
    pub fn poset(&self) -> FinitePoset {
        let ids = self.flats.iter().map(|f| self.render(*f)).collect();
        FinitePoset::from_leq(ids, |i, j| self.flats[i].is_subset(self.flats[j]))
            .expect("inclusion is a partial order")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularityVerdict {
    Modular,
    NotModular { z: LabelSet, y: LabelSet },
}

impl ModularityVerdict {
    pub fn is_modular(&self) -> bool {
        matches!(self, ModularityVerdict::Modular)
    }
}

/// A maximal chain `∅ = X_0 < X_1 < ... < X_r = E` of modular flats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MChain {
    pub flats: Vec<LabelSet>,
}

impl MChain {
    pub fn verify(&self, l: &GeometricLattice) -> Result<()> {
        if self.flats.len() != l.rank() + 1 {
            return Err(Error::Precondition("chain is not maximal".into()));
        }
        for (k, w) in self.flats.windows(2).enumerate() {
            if !w[0].is_subset(w[1]) || l.rank_of(w[1])? != k + 1 {
                return Err(Error::Precondition(format!("step {k} is not a cover")));
            }
        }
        for f in &self.flats {
            if let ModularityVerdict::NotModular { z, y } = l.is_modular_flat(*f)? {
                return Err(Error::NotModular {
                    flat: l.render(*f),
                    z: l.render(z),
                    y: l.render(y),
                });
            }
        }
        Ok(())
    }

    pub fn render(&self, l: &GeometricLattice) -> String {
        self.flats
            .iter()
            .map(|f| l.render(*f))
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

#[derive(Clone, Debug)]
pub struct BrylawskiIso {
    pub x: LabelSet,
    pub y: LabelSet,
    /// `[Y, X ∨ Y]`
    pub upper: Vec<LabelSet>,
    /// `[X ∧ Y, X]`
    pub lower: Vec<LabelSet>,
    /// `p_X` applied to `upper`.
    pub down: Vec<LabelSet>,
    /// `s_Y` applied to `lower`.
    pub up: Vec<LabelSet>,
}

impl BrylawskiIso {
    pub fn verify(&self) -> std::result::Result<(), String> {
        let pos = |v: &[LabelSet], f: LabelSet| v.iter().position(|g| *g == f);
        for (i, z) in self.upper.iter().enumerate() {
            let j = pos(&self.lower, self.down[i]).ok_or("p_X leaves the interval")?;
            if self.up[j] != *z {
                return Err(format!("s_Y ∘ p_X differs at index {i}"));
            }
        }
        for (j, w) in self.lower.iter().enumerate() {
            let i = pos(&self.upper, self.up[j]).ok_or("s_Y leaves the interval")?;
            if self.down[i] != *w {
                return Err(format!("p_X ∘ s_Y differs at index {j}"));
            }
        }
        for a in 0..self.upper.len() {
            for b in 0..self.upper.len() {
                if self.upper[a].is_subset(self.upper[b]) != self.down[a].is_subset(self.down[b]) {
                    return Err("p_X does not preserve and reflect order".into());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign_vectors::SignVector;

    fn boolean(n: usize) -> GeometricLattice {
        let labels = (1..=n).map(|i| format!("e{i}")).collect();
        let flats = (0..(1u64 << n)).map(LabelSet).collect();
        GeometricLattice::from_flats(labels, flats).unwrap()
    }

    #[test]
    fn boolean_lattice() {
        let l = boolean(3);
        assert_eq!(l.whitney(), vec![1, 3, 3, 1]);
        assert!(l
            .flats()
            .iter()
            .all(|f| l.is_modular_flat(*f).unwrap().is_modular()));
        let ch = l.is_supersolvable().unwrap();
        ch.verify(&l).unwrap();
        assert_eq!(ch.render(&l), "{} < {e1} < {e1,e2} < {e1,e2,e3}");
    }

    #[test]
    fn rank_one() {
        let c = CovectorSystem::new(
            vec!["e".into()],
            ["0", "+", "-"]
                .iter()
                .map(|s| SignVector::parse(s).unwrap())
                .collect(),
        )
        .unwrap();
        let l = GeometricLattice::from_covectors(&c);
        assert_eq!(l.flats(), &[LabelSet(0), LabelSet(1)]);
        assert_eq!(l.whitney(), vec![1, 1]);
    }

    #[test]
    fn lex_order() {
        assert_eq!(lex_cmp(LabelSet(0b111), LabelSet(0b1001)), Ordering::Less);
        assert_eq!(lex_cmp(LabelSet(0b1001), LabelSet(0b10)), Ordering::Less);
    }
}
