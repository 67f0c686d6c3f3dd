//! Finite posets, poset maps and order complexes.
//!
//! Elements are addressed by index `0..len` and carry an opaque string id.
//! The order relation is stored explicitly: `below[y]` is the set of all
//! `x <= y`, `above[x]` the set of all `y >= x`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::error::{Error, Result};
use crate::par::{self, Execution};

#[derive(Clone, Debug)]
pub struct FinitePoset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    height: Vec<usize>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.below == other.below
    }
}

impl FinitePoset {
    /// Builds a poset from a `leq(i, j)` predicate, validating the axioms.
    pub fn from_leq<F>(ids: Vec<String>, leq: F) -> Result<FinitePoset>
    where
        F: Fn(usize, usize) -> bool + Sync + Send,
    {
        FinitePoset::from_leq_with(ids, leq, Execution::default())
    }

    pub fn from_leq_with<F>(ids: Vec<String>, leq: F, exec: Execution) -> Result<FinitePoset>
    where
        F: Fn(usize, usize) -> bool + Sync + Send,
    {
        let n = ids.len();
        let below: Vec<FixedBitSet> = par::map_range(exec, n, |y| {
            let mut row = FixedBitSet::with_capacity(n);
            for x in 0..n {
                if x == y || leq(x, y) {
                    row.insert(x);
                }
            }
            row
        });
        FinitePoset::from_below(ids, below)
    }

    /// Builds a poset from an explicit list of related pairs `(x, y)` meaning
    /// `x <= y`. The list must already be reflexive-transitive up to the
    /// diagonal, which is added implicitly.
    pub fn from_relation(ids: Vec<String>, pairs: &[(usize, usize)]) -> Result<FinitePoset> {
        let n = ids.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (y, row) in below.iter_mut().enumerate() {
            row.insert(y);
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::UnknownElement(format!("pair ({x}, {y})")));
            }
            below[y].insert(x);
        }
        FinitePoset::from_below(ids, below)
    }

    /// Builds a poset as the reflexive-transitive closure of the given covers.
    pub fn from_covers(ids: Vec<String>, covers: &[(usize, usize)]) -> Result<FinitePoset> {
        let n = ids.len();
        let mut preds = vec![Vec::new(); n];
        for &(x, y) in covers {
            if x >= n || y >= n {
                return Err(Error::UnknownElement(format!("cover ({x}, {y})")));
            }
            preds[y].push(x);
        }
        let mut below: Vec<Option<FixedBitSet>> = vec![None; n];
        let mut state = vec![0u8; n];
        fn visit(
            y: usize,
            preds: &[Vec<usize>],
            below: &mut [Option<FixedBitSet>],
            state: &mut [u8],
            n: usize,
        ) -> Result<()> {
            if state[y] == 2 {
                return Ok(());
            }
            if state[y] == 1 {
                return Err(Error::InvalidPoset(format!("cycle through element {y}")));
            }
            state[y] = 1;
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(y);
            for &x in &preds[y] {
                visit(x, preds, below, state, n)?;
                row.union_with(below[x].as_ref().expect("visited"));
            }
            below[y] = Some(row);
            state[y] = 2;
            Ok(())
        }
        for y in 0..n {
            visit(y, &preds, &mut below, &mut state, n)?;
        }
        FinitePoset::from_below(
            ids,
            below.into_iter().map(|r| r.expect("visited")).collect(),
        )
    }

    fn from_below(ids: Vec<String>, below: Vec<FixedBitSet>) -> Result<FinitePoset> {
        let n = ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate element id `{id}`")));
            }
        }
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for (y, row) in below.iter().enumerate() {
            if !row.contains(y) {
                return Err(Error::InvalidPoset(format!("`{}` not reflexive", ids[y])));
            }
            for x in row.ones() {
                above[x].insert(y);
            }
        }
        for y in 0..n {
            for x in below[y].ones() {
                if x != y && below[x].contains(y) {
                    return Err(Error::InvalidPoset(format!(
                        "antisymmetry fails for `{}` and `{}`",
                        ids[x], ids[y]
                    )));
                }
                if !below[x].is_subset(&below[y]) {
                    let z = below[x]
                        .difference(&below[y])
                        .next()
                        .expect("nonempty difference");
                    return Err(Error::InvalidPoset(format!(
                        "transitivity fails: `{}` <= `{}` <= `{}`",
                        ids[z], ids[x], ids[y]
                    )));
                }
            }
        }
        // Sizes of principal ideals give a linear extension for the height pass.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&y| below[y].count_ones(..));
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        let mut height = vec![0usize; n];
        for &y in &order {
            let mut cand = below[y].clone();
            cand.set(y, false);
            let strict: Vec<usize> = cand.ones().collect();
            for &z in &strict {
                if cand.contains(z) {
                    let mut bz = below[z].clone();
                    bz.set(z, false);
                    cand.difference_with(&bz);
                }
            }
            let covers: Vec<usize> = cand.ones().collect();
            height[y] = covers.iter().map(|&x| height[x] + 1).max().unwrap_or(0);
            for &x in &covers {
                upper_covers[x].push(y);
            }
            lower_covers[y] = covers;
        }
        for ups in upper_covers.iter_mut() {
            ups.sort_unstable();
        }
        Ok(FinitePoset {
            ids,
            index,
            below,
            above,
            lower_covers,
            upper_covers,
            height,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.below[y].contains(x)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// `P_{<= y}` as a bitset.
    pub fn below(&self, y: usize) -> &FixedBitSet {
        &self.below[y]
    }

    /// `P_{>= x}` as a bitset.
    pub fn above(&self, x: usize) -> &FixedBitSet {
        &self.above[x]
    }

    pub fn lower_covers(&self, y: usize) -> &[usize] {
        &self.lower_covers[y]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    /// Length of the longest chain ending at `x`; minimal elements have height 0.
    pub fn height(&self, x: usize) -> usize {
        self.height[x]
    }

    pub fn max_height(&self) -> Option<usize> {
        self.height.iter().copied().max()
    }

    /// All cover relations `x ⋖ y`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .lower_covers
            .iter()
            .enumerate()
            .flat_map(|(y, xs)| xs.iter().map(move |&x| (x, y)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.lower_covers[y].binary_search(&x).is_ok()
    }

    /// All related pairs `x <= y`, including the diagonal.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.len() {
            for x in self.below[y].ones() {
                out.push((x, y));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.lower_covers[x].is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.upper_covers[x].is_empty())
            .collect()
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// Downward closure of `generators`.
    pub fn order_ideal(&self, generators: &[usize]) -> FixedBitSet {
        let mut out = self.empty_set();
        for &g in generators {
            out.union_with(&self.below[g]);
        }
        out
    }

    /// Downward closure of a set given by element ids.
    pub fn order_ideal_of_ids(&self, generators: &[&str]) -> Result<Vec<String>> {
        let idx: Vec<usize> = generators
            .iter()
            .map(|g| self.index_of(g))
            .collect::<Result<_>>()?;
        Ok(self
            .order_ideal(&idx)
            .ones()
            .map(|i| self.ids[i].clone())
            .collect())
    }

    pub fn order_filter(&self, generators: &[usize]) -> FixedBitSet {
        let mut out = self.empty_set();
        for &g in generators {
            out.union_with(&self.above[g]);
        }
        out
    }

    pub fn is_order_ideal(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|y| self.below[y].is_subset(set))
    }

    pub fn is_order_filter(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.above[x].is_subset(set))
    }

    /// Induced subposet on `members` (in increasing index order), with the
    /// embedding back into `self`.
    pub fn induced(&self, members: &FixedBitSet) -> Subposet {
        let embedding: Vec<usize> = members.ones().collect();
        let mut local = vec![usize::MAX; self.len()];
        for (j, &i) in embedding.iter().enumerate() {
            local[i] = j;
        }
        let m = embedding.len();
        let below: Vec<FixedBitSet> = embedding
            .iter()
            .map(|&y| {
                let mut row = FixedBitSet::with_capacity(m);
                for x in self.below[y].intersection(members) {
                    row.insert(local[x]);
                }
                row
            })
            .collect();
        let ids = embedding.iter().map(|&i| self.ids[i].clone()).collect();
        let poset = FinitePoset::from_below(ids, below).expect("induced subposet of a valid poset");
        Subposet { poset, embedding }
    }

    /// The opposite poset `P^∨` on the same ids.
    pub fn dual(&self) -> FinitePoset {
        FinitePoset::from_below(self.ids.clone(), self.above.clone())
            .expect("dual of a valid poset")
    }

    /// Deterministic linear extension: among available elements the
    /// lexicographically smallest id goes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        self.extend_within(&self.full_set(), &self.empty_set())
    }

    /// Linear extension in which the order ideal `ideal` comes first.
    pub fn linear_extension_ideal_first(&self, ideal: &FixedBitSet) -> Result<Vec<usize>> {
        if !self.is_order_ideal(ideal) {
            return Err(Error::NotAnIdeal(
                "prefix set is not downward closed".into(),
            ));
        }
        let mut out = self.extend_within(ideal, &self.empty_set());
        let rest = self.extend_within(&self.full_set(), ideal);
        out.extend(rest);
        Ok(out)
    }

    /// Lexicographic topological sort of `scope ∖ placed`, assuming every
    /// predecessor outside `scope` is in `placed`.
    fn extend_within(&self, scope: &FixedBitSet, placed: &FixedBitSet) -> Vec<usize> {
        let mut placed = placed.clone();
        let mut pending: Vec<usize> = vec![0; self.len()];
        let mut heap = BinaryHeap::new();
        for y in scope.ones() {
            if placed.contains(y) {
                continue;
            }
            pending[y] = self.lower_covers[y]
                .iter()
                .filter(|&&x| !placed.contains(x))
                .count();
            if pending[y] == 0 {
                heap.push(Reverse((self.ids[y].as_str(), y)));
            }
        }
        let mut out = Vec::new();
        while let Some(Reverse((_, y))) = heap.pop() {
            placed.insert(y);
            out.push(y);
            for &z in &self.upper_covers[y] {
                if scope.contains(z) && !placed.contains(z) {
                    pending[z] -= 1;
                    if pending[z] == 0 {
                        heap.push(Reverse((self.ids[z].as_str(), z)));
                    }
                }
            }
        }
        out
    }

    /// Uniformly picks among available minimal elements at every step.
    pub fn random_linear_extension<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut pending: Vec<usize> = self.lower_covers.iter().map(Vec::len).collect();
        let mut avail: Vec<usize> = (0..self.len()).filter(|&y| pending[y] == 0).collect();
        let mut out = Vec::with_capacity(self.len());
        while !avail.is_empty() {
            let k = rng.random_range(0..avail.len());
            let y = avail.swap_remove(k);
            out.push(y);
            for &z in &self.upper_covers[y] {
                pending[z] -= 1;
                if pending[z] == 0 {
                    avail.push(z);
                }
            }
        }
        out
    }

    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        if order.len() != self.len() {
            return false;
        }
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &x) in order.iter().enumerate() {
            if x >= self.len() || pos[x] != usize::MAX {
                return false;
            }
            pos[x] = k;
        }
        self.covers().iter().all(|&(x, y)| pos[x] < pos[y])
    }

    /// The order complex: every nonempty chain, as sorted vertex lists.
    pub fn order_complex(&self) -> SimplicialComplexRecord {
        let mut faces = Vec::new();
        let mut chain = Vec::new();
        fn grow(p: &FinitePoset, x: usize, chain: &mut Vec<usize>, faces: &mut Vec<Vec<usize>>) {
            chain.push(x);
            let mut face = chain.clone();
            face.sort_unstable();
            faces.push(face);
            for y in p.above[x].ones() {
                if y != x {
                    grow(p, y, chain, faces);
                }
            }
            chain.pop();
        }
        for x in 0..self.len() {
            grow(self, x, &mut chain, &mut faces);
        }
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        SimplicialComplexRecord {
            vertices: self.ids.clone(),
            faces,
        }
    }

    /// Number of chains with `k + 1` elements, for every `k`, by dynamic programming.
    pub fn chain_counts(&self) -> Vec<u128> {
        let topo = self.linear_extension();
        let depth = self.max_height().map_or(0, |h| h + 1);
        // ending[x][k] = chains of k+1 elements with top x
        let mut ending = vec![vec![0u128; depth]; self.len()];
        let mut totals = vec![0u128; depth];
        for &y in &topo {
            ending[y][0] = 1;
            for x in self.below[y].ones() {
                if x == y {
                    continue;
                }
                for k in 1..depth {
                    ending[y][k] += ending[x][k - 1];
                }
            }
            for k in 0..depth {
                totals[k] += ending[y][k];
            }
        }
        while totals.last() == Some(&0) {
            totals.pop();
        }
        totals
    }
}

/// An induced subposet with its embedding into the host poset.
#[derive(Clone, Debug)]
pub struct Subposet {
    pub poset: FinitePoset,
    /// `embedding[j]` is the host index of local element `j`.
    pub embedding: Vec<usize>,
}

impl Subposet {
    pub fn local_index(&self, host: usize) -> Option<usize> {
        self.embedding.binary_search(&host).ok()
    }

    pub fn members(&self, host_len: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(host_len);
        for &i in &self.embedding {
            s.insert(i);
        }
        s
    }
}

/// An order-preserving map between two posets.
#[derive(Clone, Debug)]
pub struct PosetMap<'a> {
    source: &'a FinitePoset,
    target: &'a FinitePoset,
    assignment: Vec<usize>,
}

impl<'a> PosetMap<'a> {
    pub fn new(
        source: &'a FinitePoset,
        target: &'a FinitePoset,
        assignment: Vec<usize>,
    ) -> Result<PosetMap<'a>> {
        if assignment.len() != source.len() {
            return Err(Error::Precondition(format!(
                "assignment covers {} of {} elements",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&q| q >= target.len()) {
            return Err(Error::UnknownElement(format!("target index {bad}")));
        }
        for (x, y) in source.covers() {
            if !target.leq(assignment[x], assignment[y]) {
                return Err(Error::NotOrderPreserving(format!(
                    "`{}` <= `{}` but images `{}`, `{}` are not related",
                    source.id(x),
                    source.id(y),
                    target.id(assignment[x]),
                    target.id(assignment[y])
                )));
            }
        }
        Ok(PosetMap {
            source,
            target,
            assignment,
        })
    }

    pub fn source(&self) -> &'a FinitePoset {
        self.source
    }

    pub fn target(&self) -> &'a FinitePoset {
        self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// `(f ↓ q) = f^{-1}(Q_{<= q})` as an induced subposet.
    pub fn fiber(&self, q: usize) -> Result<Subposet> {
        if q >= self.target.len() {
            return Err(Error::UnknownElement(format!("target index {q}")));
        }
        Ok(self.source.induced(&self.fiber_set(q)))
    }

    pub fn fiber_set(&self, q: usize) -> FixedBitSet {
        let mut members = self.source.empty_set();
        for (x, &fx) in self.assignment.iter().enumerate() {
            if self.target.leq(fx, q) {
                members.insert(x);
            }
        }
        members
    }

    /// The discrete fiber `f^{-1}(q)`.
    pub fn preimage(&self, q: usize) -> FixedBitSet {
        let mut members = self.source.empty_set();
        for (x, &fx) in self.assignment.iter().enumerate() {
            if fx == q {
                members.insert(x);
            }
        }
        members
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = self.target.empty_set();
        for &q in &self.assignment {
            hit.insert(q);
        }
        hit.count_ones(..) == self.target.len()
    }
}

/// A simplicial complex stored as its full list of faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexRecord {
    pub vertices: Vec<String>,
    /// Sorted vertex-index lists, ordered by size then lexicographically.
    pub faces: Vec<Vec<usize>>,
}

impl SimplicialComplexRecord {
    /// Closes a list of facets under taking nonempty subsets.
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let mut all = std::collections::BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if let Some(&v) = f.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::UnknownElement(format!("vertex index {v}")));
            }
            let k = f.len();
            if k > 20 {
                return Err(Error::Precondition(
                    "facet with more than 20 vertices".into(),
                ));
            }
            for bits in 1u32..(1u32 << k) {
                let face: Vec<usize> = (0..k)
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                all.insert(face);
            }
        }
        let mut faces: Vec<Vec<usize>> = all.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(SimplicialComplexRecord { vertices, faces })
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces.iter().map(|f| f.len() - 1).max()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for f in &self.faces {
            out[f.len() - 1] += 1;
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        let set: std::collections::HashSet<&Vec<usize>> = self.faces.iter().collect();
        self.faces.iter().all(|f| {
            f.len() == 1
                || (0..f.len()).all(|skip| {
                    let sub: Vec<usize> = f
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    set.contains(&sub)
                })
        })
    }

    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut maximal = Vec::new();
        for f in &self.faces {
            let covered = self
                .faces
                .iter()
                .any(|g| g.len() == f.len() + 1 && f.iter().all(|v| g.binary_search(v).is_ok()));
            if !covered {
                maximal.push(f.clone());
            }
        }
        maximal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn chain3() -> FinitePoset {
        FinitePoset::from_covers(ids(&["a", "b", "c"]), &[(0, 1), (1, 2)]).unwrap()
    }

    fn antichain2() -> FinitePoset {
        FinitePoset::from_covers(ids(&["a", "b"]), &[]).unwrap()
    }

    fn edge_faces() -> FinitePoset {
        FinitePoset::from_covers(ids(&["v1", "v2", "e"]), &[(0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn covers_examples() {
        assert_eq!(chain3().covers(), vec![(0, 1), (1, 2)]);
        assert!(antichain2().covers().is_empty());
        assert_eq!(edge_faces().covers(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn invalid_relations_are_rejected() {
        let cyc = FinitePoset::from_covers(ids(&["a", "b"]), &[(0, 1), (1, 0)]);
        assert!(matches!(cyc, Err(Error::InvalidPoset(_))));
        let intrans = FinitePoset::from_relation(ids(&["a", "b", "c"]), &[(0, 1), (1, 2)]);
        assert!(matches!(intrans, Err(Error::InvalidPoset(_))));
        let anti = FinitePoset::from_relation(ids(&["a", "b"]), &[(0, 1), (1, 0)]);
        assert!(matches!(anti, Err(Error::InvalidPoset(_))));
    }

    #[test]
    fn ideals() {
        let p = chain3();
        assert_eq!(p.order_ideal_of_ids(&["b"]).unwrap(), ids(&["a", "b"]));
        assert_eq!(p.order_ideal_of_ids(&["c"]).unwrap(), ids(&["a", "b", "c"]));
        assert!(p.order_ideal_of_ids(&[]).unwrap().is_empty());
        assert!(p.order_ideal_of_ids(&["zz"]).is_err());
    }

    #[test]
    fn ideal_first_extensions() {
        let p = chain3();
        let mut i = p.empty_set();
        i.insert(0);
        assert_eq!(p.linear_extension_ideal_first(&i).unwrap(), vec![0, 1, 2]);

        let q = antichain2();
        let mut i = q.empty_set();
        i.insert(1);
        assert_eq!(q.linear_extension_ideal_first(&i).unwrap(), vec![1, 0]);

        let v = FinitePoset::from_covers(ids(&["a", "b", "c"]), &[(0, 2), (1, 2)]).unwrap();
        let mut i = v.empty_set();
        i.insert(0);
        i.insert(1);
        let ext = v.linear_extension_ideal_first(&i).unwrap();
        assert_eq!(ext, vec![0, 1, 2]);
        let mut bad = v.empty_set();
        bad.insert(2);
        assert!(v.linear_extension_ideal_first(&bad).is_err());
    }

    #[test]
    fn order_complex_examples() {
        let p = FinitePoset::from_covers(ids(&["a", "b"]), &[(0, 1)]).unwrap();
        let k = p.order_complex();
        assert_eq!(k.facets(), vec![vec![0, 1]]);
        let q = antichain2().order_complex();
        assert_eq!(q.faces, vec![vec![0], vec![1]]);
    }

    #[test]
    fn fibers_and_duals() {
        let p = chain3();
        let id_map = PosetMap::new(&p, &p, vec![0, 1, 2]).unwrap();
        let f = id_map.fiber(1).unwrap();
        assert_eq!(f.embedding, vec![0, 1]);
        let point = FinitePoset::from_covers(ids(&["*"]), &[]).unwrap();
        let c = PosetMap::new(&p, &point, vec![0, 0, 0]).unwrap();
        assert_eq!(c.fiber(0).unwrap().poset.len(), 3);
        assert!(c.fiber(3).is_err());

        let d = p.dual();
        assert_eq!(d.covers(), vec![(1, 0), (2, 1)]);
        assert_eq!(d.dual(), p);
        assert_eq!(antichain2().dual(), antichain2());
    }

    #[test]
    fn non_monotone_map_is_rejected() {
        let p = chain3();
        assert!(matches!(
            PosetMap::new(&p, &p, vec![2, 1, 0]),
            Err(Error::NotOrderPreserving(_))
        ));
    }
}
