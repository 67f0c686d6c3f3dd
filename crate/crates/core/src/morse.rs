//! Acyclic matchings on finite posets: acyclicity and critical cells, the
//! patchwork union, collapsing shellable balls, and the matchings on `L^∨`
//! and on Salvetti fibers whose critical cells form a prescribed subcomplex.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::io::report::Clause;
use crate::lattice::GeometricLattice;
use crate::oriented_matroid::CovectorSystem;
use crate::par::Execution;
use crate::poset::FinitePoset;
use crate::salvetti::{FiberStratification, SalvettiLocalization, SalvettiPoset};
use crate::shelling::{verify_shelling_in, ShellingVerdict};
use crate::sign_vectors::SignVector;
use crate::topes::{convex_first_extension, dual_subcomplex, is_convex, reduced_face_poset};

/// A set of disjoint cover pairs `(lower, upper)` among the cells of `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    domain: FixedBitSet,
    pairs: Vec<(usize, usize)>,
    partner: Vec<Option<usize>>,
}

impl Matching {
    pub fn new(
        p: &FinitePoset,
        domain: FixedBitSet,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Matching> {
        if domain.len() != p.len() {
            return Err(Error::Precondition(
                "matching domain has the wrong size".into(),
            ));
        }
        let mut partner = vec![None; p.len()];
        for &(a, b) in &pairs {
            if !domain.contains(a) || !domain.contains(b) {
                return Err(Error::NotAMatching(format!(
                    "pair ({} -> {}) leaves the domain",
                    p.id(a),
                    p.id(b)
                )));
            }
            if !p.is_cover(a, b) {
                return Err(Error::NotAMatching(format!(
                    "({} -> {}) is not a cover",
                    p.id(a),
                    p.id(b)
                )));
            }
            for x in [a, b] {
                if partner[x].is_some() {
                    return Err(Error::NotAMatching(format!("{} is matched twice", p.id(x))));
                }
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        Ok(Matching {
            domain,
            pairs,
            partner,
        })
    }

    pub fn empty(domain: FixedBitSet) -> Matching {
        let n = domain.len();
        Matching {
            domain,
            pairs: Vec::new(),
            partner: vec![None; n],
        }
    }

    pub fn domain(&self) -> &FixedBitSet {
        &self.domain
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn partner(&self, x: usize) -> Option<usize> {
        self.partner[x]
    }

    /// `C(M)`: unmatched cells of the domain.
    pub fn critical_cells(&self) -> FixedBitSet {
        let mut c = self.domain.clone();
        for &(a, b) in &self.pairs {
            c.set(a, false);
            c.set(b, false);
        }
        c
    }

    /// The same pairs read in the opposite poset.
    pub fn dual(&self) -> Matching {
        Matching {
            domain: self.domain.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
            partner: self.partner.clone(),
        }
    }

    /// One `(a -> b)` line per pair.
    pub fn render(&self, p: &FinitePoset) -> String {
        let mut lines: Vec<String> = self
            .pairs
            .iter()
            .map(|&(a, b)| format!("({} -> {})", p.id(a), p.id(b)))
            .collect();
        lines.sort();
        lines.join("\n")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acyclicity {
    /// A topological order of `G(P,M)` on the domain.
    Acyclic(Vec<usize>),
    /// A directed cycle; the last vertex has an edge back to the first.
    Cyclic(Vec<usize>),
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic(_))
    }
}

/// Arcs of `G(P,M)`: covers point down, matched covers point up.
fn digraph(p: &FinitePoset, m: &Matching) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); p.len()];
    for x in m.domain.ones() {
        for &y in p.upper_covers(x) {
            if !m.domain.contains(y) {
                continue;
            }
            if m.partner[x] == Some(y) {
                out[x].push(y);
            } else {
                out[y].push(x);
            }
        }
    }
    out
}

pub fn is_acyclic(p: &FinitePoset, m: &Matching) -> Acyclicity {
    let out = digraph(p, m);
    let mut indeg = vec![0usize; p.len()];
    for x in m.domain.ones() {
        for &y in &out[x] {
            indeg[y] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = m
        .domain
        .ones()
        .filter(|&x| indeg[x] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(m.domain.count_ones(..));
    while let Some(Reverse(x)) = heap.pop() {
        order.push(x);
        for &y in &out[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                heap.push(Reverse(y));
            }
        }
    }
    if order.len() == m.domain.count_ones(..) {
        return Acyclicity::Acyclic(order);
    }
    let mut pred = vec![None; p.len()];
    for x in m.domain.ones().filter(|&x| indeg[x] > 0) {
        for &y in &out[x] {
            if indeg[y] > 0 {
                pred[y] = Some(x);
            }
        }
    }
    let start = m
        .domain
        .ones()
        .find(|&x| indeg[x] > 0)
        .expect("a vertex on a cycle");
    let mut seen = HashMap::new();
    let mut walk = Vec::new();
    let mut u = start;
    while !seen.contains_key(&u) {
        seen.insert(u, walk.len());
        walk.push(u);
        u = pred[u].expect("remaining vertices have remaining predecessors");
    }
    let mut cycle = walk[seen[&u]..].to_vec();
    cycle.reverse();
    Acyclicity::Cyclic(cycle)
}

pub fn render_cycle(p: &FinitePoset, cycle: &[usize]) -> String {
    let mut parts: Vec<&str> = cycle.iter().map(|&x| p.id(x)).collect();
    if let Some(&first) = parts.first() {
        parts.push(first);
    }
    parts.join(" -> ")
}

fn require_acyclic(p: &FinitePoset, m: &Matching, what: &str) -> Result<()> {
    match is_acyclic(p, m) {
        Acyclicity::Acyclic(_) => Ok(()),
        Acyclicity::Cyclic(c) => Err(Error::Internal(format!(
            "{what} matching has a cycle {}",
            render_cycle(p, &c)
        ))),
    }
}

/// Union of matchings on the fibers `f^{-1}(q)` of an order-preserving map
/// from `domain` to `target`; `f[x]` is read for `x ∈ domain`.
pub fn patchwork(
    p: &FinitePoset,
    domain: &FixedBitSet,
    target: &FinitePoset,
    f: &[usize],
    parts: &[Matching],
) -> Result<Matching> {
    if parts.len() != target.len() {
        return Err(Error::Precondition(
            "one matching per target element is required".into(),
        ));
    }
    for x in domain.ones() {
        for &y in p.upper_covers(x) {
            if domain.contains(y) && !target.leq(f[x], f[y]) {
                return Err(Error::NotOrderPreserving(format!(
                    "{} ≤ {}",
                    p.id(x),
                    p.id(y)
                )));
            }
        }
    }
    let mut pairs = Vec::new();
    for (q, part) in parts.iter().enumerate() {
        let mut fiber = p.empty_set();
        fiber.extend(domain.ones().filter(|&x| f[x] == q));
        if *part.domain() != fiber {
            return Err(Error::Precondition(format!(
                "matching {q} is not on its fiber"
            )));
        }
        require_acyclic(p, part, "fiber")?;
        pairs.extend_from_slice(part.pairs());
    }
    let m = Matching::new(p, domain.clone(), pairs)?;
    require_acyclic(p, &m, "patchwork")?;
    Ok(m)
}

/// Removes all of `target` from `k` by elementary collapses whose pairs lie
/// in `target`; smallest `(id a, id b)` first.
fn collapse(
    p: &FinitePoset,
    k: &mut FixedBitSet,
    target: &FixedBitSet,
    pairs: &mut Vec<(usize, usize)>,
) -> Result<()> {
    let mut left = target.clone();
    left.intersect_with(k);
    while !left.is_clear() {
        let mut best: Option<(usize, usize)> = None;
        for b in left.ones() {
            if p.above(b).intersection(k).count() != 1 {
                continue;
            }
            for &a in p.lower_covers(b) {
                if left.contains(a) && p.above(a).intersection(k).count() == 2 {
                    let better = match best {
                        None => true,
                        Some((x, y)) => (p.id(a), p.id(b)) < (p.id(x), p.id(y)),
                    };
                    if better {
                        best = Some((a, b));
                    }
                }
            }
        }
        let (a, b) = best.ok_or_else(|| {
            let stuck: Vec<&str> = left.ones().map(|x| p.id(x)).collect();
            Error::Construction(format!("no free face among {}", stuck.join(", ")))
        })?;
        for x in [a, b] {
            k.set(x, false);
            left.set(x, false);
        }
        pairs.push((a, b));
    }
    Ok(())
}

/// Collapses the shellable ball `cells` (a down-closed set of cells of `p`,
/// dimension = height) onto the vertex `v` of the first cell of `order`.
pub fn matching_from_shelling(
    p: &FinitePoset,
    cells: &FixedBitSet,
    order: &[usize],
    v: usize,
) -> Result<Matching> {
    if let ShellingVerdict::Invalid { position, reason } =
        verify_shelling_in(p, cells, order, 0, Execution::Sequential)?
    {
        return Err(Error::Precondition(format!(
            "shelling invalid at position {position}: {reason}"
        )));
    }
    let first = order[0];
    if !p.below(first).contains(v) || p.height(v) != 0 {
        return Err(Error::Precondition(format!(
            "{} is not a vertex of {}",
            p.id(v),
            p.id(first)
        )));
    }
    let mut closures = Vec::with_capacity(order.len());
    let mut acc = p.empty_set();
    for &s in order {
        closures.push(acc.clone());
        acc.union_with(p.below(s));
    }
    let mut k = cells.clone();
    let mut pairs = Vec::new();
    for j in (1..order.len()).rev() {
        let mut new = p.below(order[j]).clone();
        new.difference_with(&closures[j]);
        collapse(p, &mut k, &new, &mut pairs)?;
    }
    let mut rest = k.clone();
    rest.set(v, false);
    collapse(p, &mut k, &rest, &mut pairs)?;
    let m = Matching::new(p, cells.clone(), pairs)?;
    require_acyclic(p, &m, "shelling")?;
    let critical: Vec<usize> = m.critical_cells().ones().collect();
    if critical != [v] {
        return Err(Error::Internal(
            "shelling matching has extra critical cells".into(),
        ));
    }
    Ok(m)
}

/// A matching on `L^∨` (the opposite of `c.face_poset()`, indices are
/// covector indices) whose critical cells are `L^∨[Q]`.
pub fn matching_convex_critical(c: &CovectorSystem, q: &[SignVector]) -> Result<Matching> {
    if q.is_empty() {
        return Err(Error::Precondition("Q is empty".into()));
    }
    if !is_convex(c, q)? {
        return Err(Error::NotConvex);
    }
    let face = c.face_poset();
    let dual = face.dual();
    let qs: HashSet<SignVector> = q.iter().copied().collect();
    let n_topes = c.topes().len();
    let m = if qs.len() == n_topes {
        Matching::empty(dual.full_set())
    } else {
        let base = *qs.iter().min().expect("Q is nonempty");
        let ext = convex_first_extension(c, base, q)?;
        let reduced = reduced_face_poset(c, &face);
        let rp = &reduced.poset;
        let local = |t: &SignVector| {
            reduced
                .local_index(c.index_of(t).expect("tope is a covector"))
                .expect("nonzero")
        };
        let order: Vec<usize> = ext
            .iter()
            .rev()
            .take(n_topes - qs.len())
            .map(local)
            .collect();
        let mut cells = rp.empty_set();
        for &t in &order {
            cells.union_with(rp.below(t));
        }
        let v = rp
            .below(order[0])
            .ones()
            .find(|&x| rp.height(x) == 0)
            .expect("a tope has vertices");
        let chari = matching_from_shelling(rp, &cells, &order, v)?;
        let emb = &reduced.embedding;
        let mut pairs: Vec<(usize, usize)> = chari
            .pairs()
            .iter()
            .map(|&(a, b)| (emb[b], emb[a]))
            .collect();
        pairs.push((emb[v], c.index_of(&c.zero()).expect("zero covector")));
        Matching::new(&dual, dual.full_set(), pairs)?
    };
    require_acyclic(&dual, &m, "convex")?;
    let expected: Vec<usize> = dual_subcomplex(c, q)?
        .iter()
        .map(|s| c.index_of(s).expect("covector"))
        .collect();
    if m.critical_cells().ones().collect::<Vec<_>>() != expected {
        return Err(Error::Internal("critical cells differ from L^∨[Q]".into()));
    }
    Ok(m)
}

/// Matching on the fiber `(ρ̃_X ↓ (0,B'))` with critical cells `(ρ̃_X ↓ a)`.
#[derive(Clone, Debug)]
pub struct FiberMatching {
    pub stratification: FiberStratification,
    /// Local index of `(0,B')` in `S_X`.
    pub ambient: usize,
    pub cell: usize,
    pub matching: Matching,
}

/// `a` is an index into `loc.local`, `base` a tope of the localization with `a ≤ (0,base)`.
pub fn matching_salvetti_fiber(
    c: &CovectorSystem,
    lattice: &GeometricLattice,
    s: &SalvettiPoset,
    loc: &SalvettiLocalization,
    a: usize,
    base: &SignVector,
) -> Result<FiberMatching> {
    let strat = FiberStratification::new(c, lattice, s, loc, base)?;
    let cx = &loc.localization.system;
    let ambient = loc
        .local
        .index_of(&cx.zero(), base)
        .ok_or_else(|| Error::NotATope(base.to_string()))?;
    if !loc.local.poset.leq(a, ambient) {
        return Err(Error::Precondition(format!(
            "{} is not below {}",
            loc.local.id(a),
            loc.local.id(ambient)
        )));
    }
    let sigma = loc.local.cells[a].0;
    let proj = |v: &SignVector| loc.localization.project(v);
    let q0: Vec<SignVector> = c
        .topes()
        .into_iter()
        .filter(|t| sigma.leq(&proj(t)))
        .collect();
    let m0 = matching_convex_critical(c, &q0)?;
    let t0 = strat.tope_string[0];
    let cell_of =
        |f: &SignVector, t: &SignVector| s.index_of(f, &f.compose(t)).expect("Salvetti cell");
    let mut parts = Vec::with_capacity(strat.len());
    let covector = |i: usize| c.covector(i);
    let pairs0 = m0
        .pairs()
        .iter()
        .map(|&(x, y)| (cell_of(&covector(x), &t0), cell_of(&covector(y), &t0)))
        .collect();
    parts.push(Matching::new(&s.poset, strat.strata[0].clone(), pairs0)?);
    if strat.len() > 1 {
        let qx: Vec<SignVector> = cx.topes().into_iter().filter(|t| sigma.leq(t)).collect();
        let mx = matching_convex_critical(cx, &qx)?;
        for i in 1..strat.len() {
            let mut lift: HashMap<SignVector, usize> = HashMap::new();
            for cell in strat.strata[i].ones() {
                if lift.insert(proj(&s.cells[cell].0), cell).is_some() {
                    return Err(Error::Internal(format!(
                        "N_{i} does not restrict injectively to L_X"
                    )));
                }
            }
            if lift.len() != cx.len() {
                return Err(Error::Internal(format!("N_{i} does not restrict onto L_X")));
            }
            let pairs = mx
                .pairs()
                .iter()
                .map(|&(x, y)| (lift[&cx.covector(x)], lift[&cx.covector(y)]))
                .collect();
            parts.push(Matching::new(&s.poset, strat.strata[i].clone(), pairs)?);
        }
    }
    let chain_ids = (0..strat.len()).map(|i| format!("T{i}")).collect();
    let chain = FinitePoset::from_leq(chain_ids, |i, j| i <= j)?;
    let f: Vec<usize> = strat
        .stratum_of
        .iter()
        .map(|x| x.unwrap_or(usize::MAX))
        .collect();
    let matching = patchwork(&s.poset, &strat.fiber, &chain, &f, &parts)?;
    if matching.critical_cells() != loc.fiber_set(s, a) {
        return Err(Error::Internal(format!(
            "critical cells differ from the fiber over {}",
            loc.local.id(a)
        )));
    }
    Ok(FiberMatching {
        stratification: strat,
        ambient,
        cell: a,
        matching,
    })
}

/// Clause-by-clause evidence that `Γ` is a strong deformation retract of `Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseCertificate {
    pub order: Option<Vec<usize>>,
    pub clauses: Vec<Clause>,
}

impl MorseCertificate {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn require(&self) -> Result<()> {
        match self.clauses.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(Error::Precondition(c.to_string())),
        }
    }
}

pub fn morse_reduction_certificate(
    p: &FinitePoset,
    sigma: &FixedBitSet,
    gamma: &FixedBitSet,
    m: &Matching,
) -> MorseCertificate {
    let mut clauses = Vec::new();
    clauses.push(Clause::check(
        "matching domain is Σ",
        m.domain() == sigma,
        || "domain and Σ differ".into(),
    ));
    let (order, acyclic) = match is_acyclic(p, m) {
        Acyclicity::Acyclic(o) => (Some(o), Clause::pass("acyclic")),
        Acyclicity::Cyclic(c) => (None, Clause::fail("acyclic", render_cycle(p, &c))),
    };
    clauses.push(acyclic);
    let critical = m.critical_cells();
    let witness = critical.symmetric_difference(gamma).next();
    clauses.push(Clause::check(
        "critical cells equal Γ",
        witness.is_none(),
        || {
            let x = witness.expect("a differing cell");
            let side = if gamma.contains(x) {
                "matched cell of Γ"
            } else {
                "critical cell outside Γ"
            };
            format!("{side} {}", p.id(x))
        },
    ));
    let outside = gamma.ones().find(|&y| {
        !sigma.contains(y) || p.below(y).intersection(sigma).any(|x| !gamma.contains(x))
    });
    clauses.push(Clause::check(
        "Γ is an order ideal of Σ",
        outside.is_none(),
        || p.id(outside.expect("a witness")).to_string(),
    ));
    MorseCertificate { order, clauses }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> FinitePoset {
        let ids = ["v1", "v2", "v3", "v4", "e1", "e2", "e3", "e4"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let covers = [
            (0, 4),
            (1, 4),
            (1, 5),
            (2, 5),
            (2, 6),
            (3, 6),
            (3, 7),
            (0, 7),
        ];
        FinitePoset::from_covers(ids, &covers).unwrap()
    }

    #[test]
    fn square_acyclicity() {
        let p = square();
        assert!(is_acyclic(&p, &Matching::empty(p.full_set())).is_acyclic());
        let m = Matching::new(&p, p.full_set(), vec![(0, 4), (1, 5)]).unwrap();
        assert!(is_acyclic(&p, &m).is_acyclic());
        let m = Matching::new(&p, p.full_set(), vec![(0, 4), (1, 5), (2, 6), (3, 7)]).unwrap();
        match is_acyclic(&p, &m) {
            Acyclicity::Cyclic(c) => assert_eq!(c.len(), 8),
            other => panic!("{other:?}"),
        }
        assert!(m.critical_cells().is_clear());
        assert!(Matching::new(&p, p.full_set(), vec![(0, 4), (0, 7)]).is_err());
        assert!(Matching::new(&p, p.full_set(), vec![(0, 5)]).is_err());
    }

    #[test]
    fn edge_collapses_to_first_vertex() {
        let ids = ["v1", "v2", "e"].iter().map(|s| s.to_string()).collect();
        let p = FinitePoset::from_covers(ids, &[(0, 2), (1, 2)]).unwrap();
        let m = matching_from_shelling(&p, &p.full_set(), &[2], 0).unwrap();
        assert_eq!(m.pairs(), &[(1, 2)]);
    }

    #[test]
    fn disk_collapses_to_one_vertex() {
        let ids = ["v1", "v2", "v3", "v4", "e1", "e2", "e3", "e4", "f"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let covers = [
            (0, 4),
            (1, 4),
            (1, 5),
            (2, 5),
            (2, 6),
            (3, 6),
            (3, 7),
            (0, 7),
            (4, 8),
            (5, 8),
            (6, 8),
            (7, 8),
        ];
        let p = FinitePoset::from_covers(ids, &covers).unwrap();
        let m = matching_from_shelling(&p, &p.full_set(), &[8], 0).unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m.critical_cells().ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn certificate_reports_dropped_pair() {
        let p = square();
        let mut gamma = p.empty_set();
        gamma.insert(0);
        let m = Matching::new(&p, p.full_set(), vec![(1, 4), (2, 5), (3, 6)]).unwrap();
        let c = morse_reduction_certificate(&p, &p.full_set(), &gamma, &m);
        assert!(!c.passed());
        assert_eq!(
            c.clauses[2].witness.as_deref(),
            Some("critical cell outside Γ e4")
        );
        gamma.insert(7);
        let c = morse_reduction_certificate(&p, &p.full_set(), &gamma, &m);
        assert!(c.clauses[2].passed);
        assert_eq!(c.clauses[3].witness.as_deref(), Some("e4"));
    }
}
