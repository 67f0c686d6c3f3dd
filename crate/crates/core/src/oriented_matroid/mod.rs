//! Covector systems: axioms, topes, rank, minors, localizations and sections.

mod arrangement;

pub use arrangement::{from_arrangement, from_arrangement_with, RationalArrangement};

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poset::FinitePoset;
use crate::sign_vectors::{LabelSet, Sign, SignVector, MAX_ELEMENTS};

/// An oriented matroid given by its set of covectors.
///
/// Covectors are kept sorted in canonical text order and deduplicated, so two
/// systems over the same labels are equal iff their covector sets are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct CovectorSystem {
    labels: Vec<String>,
    covectors: Vec<SignVector>,
    index: HashMap<SignVector, usize>,
}

impl fmt::Debug for CovectorSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CovectorSystem")
            .field("labels", &self.labels)
            .field("covectors", &self.covectors.len())
            .finish()
    }
}

impl CovectorSystem {
    pub fn new(labels: Vec<String>, covectors: Vec<SignVector>) -> Result<CovectorSystem> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n, MAX_ELEMENTS));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.contains(|c: char| c.is_whitespace() || ",{}();".contains(c)) {
                return Err(Error::UnknownLabel(l.clone()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if let Some(bad) = covectors.iter().find(|c| c.len() != n) {
            return Err(Error::GroundMismatch {
                left: n,
                right: bad.len(),
            });
        }
        let mut covectors = covectors;
        covectors.sort_unstable();
        covectors.dedup();
        let index = covectors.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Ok(CovectorSystem {
            labels,
            covectors,
            index,
        })
    }

    /// Reconstructs the covectors from the topes: `X` is a covector iff
    /// `X ∘ T` is a tope for every tope `T`.
    pub fn from_topes(labels: Vec<String>, topes: Vec<SignVector>) -> Result<CovectorSystem> {
        let n = labels.len();
        if let Some(bad) = topes.iter().find(|c| c.len() != n) {
            return Err(Error::GroundMismatch {
                left: n,
                right: bad.len(),
            });
        }
        if n > 20 {
            return Err(Error::TooManyElements(n, 20));
        }
        let tope_set: HashSet<SignVector> = topes.iter().copied().collect();
        let mut found: HashSet<SignVector> = HashSet::new();
        for t in &tope_set {
            let support: Vec<usize> = t.support().iter().collect();
            for bits in 0u64..(1u64 << support.len()) {
                let mut x = *t;
                for (k, &i) in support.iter().enumerate() {
                    if bits >> k & 1 == 1 {
                        x.set(i, Sign::Zero);
                    }
                }
                if found.contains(&x) {
                    continue;
                }
                if tope_set.iter().all(|r| tope_set.contains(&x.compose(r))) {
                    found.insert(x);
                }
            }
        }
        found.insert(SignVector::zero(n));
        CovectorSystem::new(labels, found.into_iter().collect())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Size of the ground set.
    pub fn ground_len(&self) -> usize {
        self.labels.len()
    }

    pub fn ground(&self) -> LabelSet {
        LabelSet::full(self.labels.len())
    }

    pub fn covectors(&self) -> &[SignVector] {
        &self.covectors
    }

    pub fn len(&self) -> usize {
        self.covectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covectors.is_empty()
    }

    pub fn contains(&self, x: &SignVector) -> bool {
        self.index.contains_key(x)
    }

    pub fn index_of(&self, x: &SignVector) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn covector(&self, i: usize) -> SignVector {
        self.covectors[i]
    }

    pub fn zero(&self) -> SignVector {
        SignVector::zero(self.ground_len())
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn parse_set(&self, text: &str) -> Result<LabelSet> {
        LabelSet::parse(text, &self.labels)
    }

    pub fn render_set(&self, set: LabelSet) -> String {
        set.render(&self.labels)
    }

    /// Parses a sign vector and checks it against the ground set.
    pub fn parse_vector(&self, text: &str) -> Result<SignVector> {
        let v = SignVector::parse(text)?;
        if v.len() != self.ground_len() {
            return Err(Error::GroundMismatch {
                left: self.ground_len(),
                right: v.len(),
            });
        }
        Ok(v)
    }

    pub fn parse_covector(&self, text: &str) -> Result<SignVector> {
        let v = self.parse_vector(text)?;
        if !self.contains(&v) {
            return Err(Error::NotACovector(text.trim().to_string()));
        }
        Ok(v)
    }

    pub fn check_axioms(&self) -> AxiomReport {
        self.check_axioms_with(Execution::default())
    }

    /// Checks covector axioms (1)-(4), reporting the first witness of each failure.
    pub fn check_axioms_with(&self, exec: Execution) -> AxiomReport {
        let fmt_v = |v: &SignVector| v.to_string();
        let zero = self.zero();
        let a1 = if self.contains(&zero) {
            None
        } else {
            Some(format!("zero vector {} missing", fmt_v(&zero)))
        };
        let a2 = self
            .covectors
            .iter()
            .find(|x| !self.contains(&x.opposite()))
            .map(|x| format!("{} in L but opposite {} is not", x, x.opposite()));
        let l = &self.covectors;
        let a3 = par::find_first(exec, l.len(), |i| {
            let x = l[i];
            l.iter().find_map(|y| {
                let c = x.compose(y);
                (!self.contains(&c)).then(|| format!("{x} ∘ {y} = {c} not in L"))
            })
        });
        let a4 = par::find_first(exec, l.len(), |i| self.elimination_witness(&l[i]));
        AxiomReport {
            clauses: vec![
                AxiomClause {
                    axiom: 1,
                    name: "zero",
                    witness: a1,
                },
                AxiomClause {
                    axiom: 2,
                    name: "symmetry",
                    witness: a2,
                },
                AxiomClause {
                    axiom: 3,
                    name: "composition",
                    witness: a3,
                },
                AxiomClause {
                    axiom: 4,
                    name: "elimination",
                    witness: a4,
                },
            ],
        }
    }

    fn elimination_witness(&self, x: &SignVector) -> Option<String> {
        for y in &self.covectors {
            let sep = x.separator(y);
            if sep.is_empty() {
                continue;
            }
            let target = x.compose(y);
            let keep = self.ground().difference(sep);
            let mut covered = LabelSet::EMPTY;
            for eta in &self.covectors {
                if eta.agrees_on(&target, keep) {
                    covered = covered.union(eta.zero_set().intersection(sep));
                    if covered == sep {
                        break;
                    }
                }
            }
            if covered != sep {
                let e = sep
                    .difference(covered)
                    .iter()
                    .next()
                    .expect("uncovered element");
                return Some(format!(
                    "σ = {x}, τ = {y}, e = {}: no η with η_e = 0 agreeing with σ∘τ off S(σ,τ)",
                    self.labels[e]
                ));
            }
        }
        None
    }

    /// Rank of every covector: length of a longest chain from `0`.
    pub fn covector_ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.covectors[i].support().len());
        let mut rank = vec![0usize; self.len()];
        for (k, &i) in order.iter().enumerate() {
            let x = self.covectors[i];
            let mut best = None;
            for &j in &order[..k] {
                let y = self.covectors[j];
                if y != x && y.leq(&x) {
                    best = Some(best.map_or(rank[j], |b: usize| b.max(rank[j])));
                }
            }
            rank[i] = best.map_or(0, |b| b + 1);
        }
        rank
    }

    /// Length of a maximal chain in `L`.
    pub fn rank(&self) -> usize {
        self.covector_ranks().into_iter().max().unwrap_or(0)
    }

    /// Maximal covectors.
    pub fn topes(&self) -> Vec<SignVector> {
        self.covectors
            .iter()
            .filter(|x| !self.covectors.iter().any(|y| y != *x && x.leq(y)))
            .copied()
            .collect()
    }

    pub fn is_tope(&self, x: &SignVector) -> bool {
        self.contains(x) && !self.covectors.iter().any(|y| y != x && x.leq(y))
    }

    /// Minimal nonzero covectors.
    pub fn cocircuits(&self) -> Vec<SignVector> {
        self.covectors
            .iter()
            .filter(|x| {
                !x.is_zero()
                    && !self
                        .covectors
                        .iter()
                        .any(|y| !y.is_zero() && y != *x && y.leq(x))
            })
            .copied()
            .collect()
    }

    /// The zero sets `z(σ)`, sorted and deduplicated.
    pub fn flats(&self) -> Vec<LabelSet> {
        let mut out: Vec<LabelSet> = self.covectors.iter().map(|x| x.zero_set()).collect();
        out.sort_unstable_by_key(|f| (f.len(), f.0));
        out.dedup();
        out
    }

    pub fn is_flat(&self, x: LabelSet) -> bool {
        self.covectors.iter().any(|c| c.zero_set() == x)
    }

    pub fn loops(&self) -> LabelSet {
        let mut support = LabelSet::EMPTY;
        for c in &self.covectors {
            support = support.union(c.support());
        }
        self.ground().difference(support)
    }

    pub fn is_simple(&self) -> bool {
        let s = self.simplify();
        s.system.ground_len() == self.ground_len()
    }

    /// Removes loops and keeps the first element of every parallel class.
    pub fn simplify(&self) -> Simplification {
        let n = self.ground_len();
        let loops = self.loops();
        let mut representative: Vec<Option<(usize, Sign)>> = vec![None; n];
        let mut kept: Vec<usize> = Vec::new();
        for e in 0..n {
            if loops.contains(e) {
                continue;
            }
            let class = kept.iter().position(|&r| {
                self.covectors
                    .iter()
                    .all(|c| (c.get(r) == Sign::Zero) == (c.get(e) == Sign::Zero))
            });
            match class {
                Some(k) => {
                    let r = kept[k];
                    let first = self.covectors.iter().find(|c| c.get(r) != Sign::Zero);
                    let orient = match first {
                        Some(c) if c.get(r) == c.get(e) => Sign::Plus,
                        _ => Sign::Minus,
                    };
                    representative[e] = Some((k, orient));
                }
                None => {
                    representative[e] = Some((kept.len(), Sign::Plus));
                    kept.push(e);
                }
            }
        }
        let labels = kept.iter().map(|&e| self.labels[e].clone()).collect();
        let covectors = self.covectors.iter().map(|c| c.restrict(&kept)).collect();
        let system = CovectorSystem::new(labels, covectors).expect("restriction of a valid system");
        Simplification {
            system,
            representative,
        }
    }

    pub fn restriction(&self, a: LabelSet) -> Result<CovectorSystem> {
        if !a.is_subset(self.ground()) {
            return Err(Error::UnknownElement(format!("{:?}", a)));
        }
        let pos: Vec<usize> = a.iter().collect();
        let labels = pos.iter().map(|&i| self.labels[i].clone()).collect();
        let covectors = self.covectors.iter().map(|c| c.restrict(&pos)).collect();
        CovectorSystem::new(labels, covectors)
    }

    pub fn contraction(&self, x: LabelSet) -> Result<CovectorSystem> {
        if !x.is_subset(self.ground()) {
            return Err(Error::UnknownElement(format!("{:?}", x)));
        }
        let pos: Vec<usize> = self.ground().difference(x).iter().collect();
        let labels = pos.iter().map(|&i| self.labels[i].clone()).collect();
        let covectors = self
            .covectors
            .iter()
            .filter(|c| x.is_subset(c.zero_set()))
            .map(|c| c.restrict(&pos))
            .collect();
        CovectorSystem::new(labels, covectors)
    }

    /// The localization `OM_X = OM|_X` together with `ρ_X` on covector indices.
    pub fn localization(&self, x: LabelSet) -> Result<Localization> {
        if !self.is_flat(x) {
            return Err(Error::NotAFlat(self.render_set(x)));
        }
        let system = self.restriction(x)?;
        let pos: Vec<usize> = x.iter().collect();
        let rho = self
            .covectors
            .iter()
            .map(|c| {
                system
                    .index_of(&c.restrict(&pos))
                    .expect("restricted covector present")
            })
            .collect();
        Ok(Localization {
            flat: x,
            positions: pos,
            system,
            rho,
        })
    }

    /// Covectors of the decone at `g`: those with `σ_g = +`.
    pub fn decone(&self, g: usize) -> Result<AffineCovectorSystem> {
        if g >= self.ground_len() {
            return Err(Error::UnknownElement(format!("element index {g}")));
        }
        if self.loops().contains(g) {
            return Err(Error::Precondition(format!(
                "`{}` is a loop",
                self.labels[g]
            )));
        }
        let covectors_plus = self
            .covectors
            .iter()
            .filter(|c| c.get(g) == Sign::Plus)
            .copied()
            .collect();
        Ok(AffineCovectorSystem {
            base: self.clone(),
            positive_element: g,
            covectors_plus,
        })
    }

    /// The covector poset `(L, ≤)` with canonical text ids.
    pub fn face_poset(&self) -> FinitePoset {
        self.face_poset_with(Execution::default())
    }

    pub fn face_poset_with(&self, exec: Execution) -> FinitePoset {
        let ids = self.covectors.iter().map(|c| c.to_string()).collect();
        let l = &self.covectors;
        FinitePoset::from_leq_with(ids, |i, j| l[i].leq(&l[j]), exec)
            .expect("product order on sign vectors is a partial order")
    }

    /// Same covectors under new labels.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<CovectorSystem> {
        if labels.len() != self.ground_len() {
            return Err(Error::GroundMismatch {
                left: self.ground_len(),
                right: labels.len(),
            });
        }
        CovectorSystem::new(labels, self.covectors.clone())
    }
}

/// Result of [`CovectorSystem::simplify`].
#[derive(Clone, Debug)]
pub struct Simplification {
    pub system: CovectorSystem,
    /// For each original element: its simplified index and relative orientation,
    /// or `None` for loops.
    pub representative: Vec<Option<(usize, Sign)>>,
}

/// Pass/fail record for one covector axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomClause {
    pub axiom: u8,
    pub name: &'static str,
    pub witness: Option<String>,
}

impl AxiomClause {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub clauses: Vec<AxiomClause>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(AxiomClause::passed)
    }

    pub fn clause(&self, axiom: u8) -> &AxiomClause {
        &self.clauses[axiom as usize - 1]
    }
}

/// `OM_X` with the projection `ρ_X : L → L_X` stored on covector indices.
#[derive(Clone, Debug)]
pub struct Localization {
    pub flat: LabelSet,
    /// Ground positions of `X` in the host, in increasing order.
    pub positions: Vec<usize>,
    pub system: CovectorSystem,
    /// `rho[i]` is the index in `system` of `ρ_X(L[i])`.
    pub rho: Vec<usize>,
}

impl Localization {
    pub fn project(&self, x: &SignVector) -> SignVector {
        x.restrict(&self.positions)
    }

    /// The section `ι_α : L_X → L`, given on covector indices.
    pub fn section(&self, host: &CovectorSystem, alpha: &SignVector) -> Result<Vec<usize>> {
        if !host.contains(alpha) {
            return Err(Error::NotACovector(alpha.to_string()));
        }
        if alpha.zero_set() != self.flat {
            return Err(Error::Precondition(format!(
                "z({alpha}) = {} differs from {}",
                host.render_set(alpha.zero_set()),
                host.render_set(self.flat)
            )));
        }
        self.system
            .covectors()
            .iter()
            .map(|s| {
                let lifted = self.lift(alpha, s);
                host.index_of(&lifted).ok_or_else(|| {
                    Error::Internal(format!("section image {lifted} is not a covector"))
                })
            })
            .collect()
    }

    /// `ι_α(σ)`: `σ` on `X`, `α` elsewhere.
    pub fn lift(&self, alpha: &SignVector, sigma: &SignVector) -> SignVector {
        let mut out = *alpha;
        for (j, &i) in self.positions.iter().enumerate() {
            out.set(i, sigma.get(j));
        }
        out
    }

    /// The two or more covectors `α` with `z(α) = X`, in canonical order.
    pub fn section_bases(&self, host: &CovectorSystem) -> Vec<SignVector> {
        host.covectors()
            .iter()
            .filter(|c| c.zero_set() == self.flat)
            .copied()
            .collect()
    }
}

/// Decone `L^+ = {σ ∈ L : σ_g = +}`.
#[derive(Clone, Debug)]
pub struct AffineCovectorSystem {
    pub base: CovectorSystem,
    pub positive_element: usize,
    pub covectors_plus: Vec<SignVector>,
}

impl AffineCovectorSystem {
    pub fn topes(&self) -> Vec<SignVector> {
        let topes: HashSet<SignVector> = self.base.topes().into_iter().collect();
        self.covectors_plus
            .iter()
            .filter(|c| topes.contains(c))
            .copied()
            .collect()
    }

    /// Covectors of `L^+` that are minimal in `L^+`.
    pub fn vertices(&self) -> Vec<SignVector> {
        let l = &self.covectors_plus;
        l.iter()
            .filter(|x| !l.iter().any(|y| y != *x && y.leq(x)))
            .copied()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    fn sv(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    fn rank1() -> CovectorSystem {
        CovectorSystem::new(labels(1), vec![sv("0"), sv("+"), sv("-")]).unwrap()
    }

    #[test]
    fn rank_one_system() {
        let c = rank1();
        assert!(c.check_axioms().passed());
        assert_eq!(c.rank(), 1);
        assert_eq!(c.topes(), vec![sv("+"), sv("-")]);
        assert_eq!(c.cocircuits(), vec![sv("+"), sv("-")]);
        let d = c.decone(0).unwrap();
        assert_eq!(d.covectors_plus, vec![sv("+")]);
    }

    #[test]
    fn missing_opposite_fails_symmetry() {
        let c = CovectorSystem::new(labels(1), vec![sv("0"), sv("+")]).unwrap();
        let r = c.check_axioms();
        assert!(!r.clause(2).passed());
        assert!(r.clause(1).passed());
    }

    #[test]
    fn simplify_parallel_and_loop() {
        let par = CovectorSystem::new(labels(2), vec![sv("00"), sv("++"), sv("--")]).unwrap();
        let s = par.simplify();
        assert_eq!(s.system.labels(), &["e1".to_string()]);
        assert_eq!(s.representative[1], Some((0, Sign::Plus)));
        let lp = CovectorSystem::new(labels(2), vec![sv("00"), sv("+0"), sv("-0")]).unwrap();
        let s = lp.simplify();
        assert_eq!(s.system.ground_len(), 1);
        assert_eq!(s.representative[1], None);
        assert!(rank1().is_simple());
        assert_eq!(rank1().simplify().system, rank1());
    }

    #[test]
    fn topes_reconstruct_covectors() {
        let c = rank1();
        let t = CovectorSystem::from_topes(labels(1), c.topes()).unwrap();
        assert_eq!(t, c);
    }
}
