//! Integral homology of order complexes, free ranks of graphs, and
//! certificates that `ρ̃_X` is a poset quasi-fibration.

pub mod snf;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::report::Clause;
use crate::lattice::GeometricLattice;
use crate::morse::{matching_salvetti_fiber, morse_reduction_certificate, MorseCertificate};
use crate::oriented_matroid::CovectorSystem;
use crate::par::{self, Execution};
use crate::poset::{FinitePoset, SimplicialComplexRecord};
use crate::salvetti::{require_modular_corank_one, SalvettiLocalization, SalvettiPoset};
use crate::sign_vectors::LabelSet;

use snf::{invariants, SparseMatrix};

/// Simplicial chains: `bases[k]` lists the `k`-faces, `boundaries[k]` is
/// `∂_k : C_k → C_{k-1}` (empty for `k = 0`).
#[derive(Clone, Debug)]
pub struct ChainComplexRecord {
    pub bases: Vec<Vec<Vec<usize>>>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplexRecord {
    pub fn from_simplicial(k: &SimplicialComplexRecord) -> Result<ChainComplexRecord> {
        let mut bases: Vec<Vec<Vec<usize>>> = Vec::new();
        for f in &k.faces {
            if f.is_empty() {
                continue;
            }
            let d = f.len() - 1;
            if bases.len() <= d {
                bases.resize(d + 1, Vec::new());
            }
            bases[d].push(f.clone());
        }
        let mut boundaries = vec![SparseMatrix::new(
            0,
            vec![Vec::new(); bases.first().map_or(0, |b| b.len())],
        )];
        for d in 1..bases.len() {
            let index: HashMap<&[usize], usize> = bases[d - 1]
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect();
            let mut cols = Vec::with_capacity(bases[d].len());
            for f in &bases[d] {
                let mut col = Vec::with_capacity(f.len());
                for i in 0..f.len() {
                    let mut face = f.clone();
                    face.remove(i);
                    let row = *index.get(face.as_slice()).ok_or_else(|| {
                        Error::Precondition("complex is not closed under faces".into())
                    })?;
                    col.push((row, if i % 2 == 0 { 1 } else { -1 }));
                }
                cols.push(col);
            }
            boundaries.push(SparseMatrix::new(bases[d - 1].len(), cols));
        }
        let record = ChainComplexRecord { bases, boundaries };
        record.check_square_zero()?;
        Ok(record)
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for d in 2..self.boundaries.len() {
            let sq = self.boundaries[d - 1]
                .mul(&self.boundaries[d])
                .ok_or_else(|| Error::Internal("overflow composing boundaries".into()))?;
            if !sq.is_zero() {
                return Err(Error::Internal(format!("∂∂ ≠ 0 in degree {d}")));
            }
        }
        Ok(())
    }

    pub fn homology(&self) -> Homology {
        let ranks: Vec<snf::Invariants> = self.boundaries.iter().map(invariants).collect();
        let top = self.bases.len();
        let mut betti = Vec::with_capacity(top);
        let mut torsion = Vec::with_capacity(top);
        for k in 0..top {
            let out = if k == 0 { 0 } else { ranks[k].rank };
            let inc = ranks.get(k + 1).map_or(0, |r| r.rank);
            betti.push(self.bases[k].len() - out - inc);
            torsion.push(
                ranks
                    .get(k + 1)
                    .map_or_else(Vec::new, |r| r.torsion.clone()),
            );
        }
        while betti.len() > 1
            && betti.last() == Some(&0)
            && torsion.last().is_some_and(|t| t.is_empty())
        {
            betti.pop();
            torsion.pop();
        }
        Homology { betti, torsion }
    }
}

/// Betti numbers and torsion coefficients of `H_k`, `k = 0, 1, ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Homology {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
}

impl Homology {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(|t| t.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.betti.iter().map(|b| b.to_string()).collect();
        write!(f, "b=({})", b.join(","))?;
        if !self.is_torsion_free() {
            let t: Vec<String> = self
                .torsion
                .iter()
                .enumerate()
                .filter(|(_, t)| !t.is_empty())
                .map(|(k, t)| {
                    let fs: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                    format!("H{k}:{}", fs.join(","))
                })
                .collect();
            write!(f, " torsion {}", t.join(" "))?;
        }
        Ok(())
    }
}

pub fn homology(k: &SimplicialComplexRecord) -> Result<Homology> {
    Ok(ChainComplexRecord::from_simplicial(k)?.homology())
}

/// Homology of the order complex of `p`.
pub fn poset_homology(p: &FinitePoset) -> Result<Homology> {
    homology(&p.order_complex())
}

/// Homology of the order complex of the subposet on `cells`.
pub fn subposet_homology(p: &FinitePoset, cells: &FixedBitSet) -> Result<Homology> {
    poset_homology(&p.induced(cells).poset)
}

/// `#edges − #vertices + 1` for a connected complex of dimension ≤ 1 given as
/// the cells of `p` in `cells`.
pub fn graph_free_rank(p: &FinitePoset, cells: &FixedBitSet) -> Result<usize> {
    let sub = p.induced(cells);
    let g = &sub.poset;
    if g.is_empty() {
        return Err(Error::Precondition("graph is empty".into()));
    }
    let mut parent: Vec<usize> = (0..g.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let (mut vertices, mut edges) = (0usize, 0usize);
    for x in 0..g.len() {
        match g.height(x) {
            0 => vertices += 1,
            1 => {
                if g.lower_covers(x).len() != 2 {
                    return Err(Error::Precondition(format!(
                        "edge {} does not have two endpoints",
                        g.id(x)
                    )));
                }
                edges += 1;
                let (a, b) = (g.lower_covers(x)[0], g.lower_covers(x)[1]);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
                parent[x] = rb;
            }
            h => {
                return Err(Error::Precondition(format!(
                    "cell {} has dimension {h}",
                    g.id(x)
                )))
            }
        }
    }
    let components = (0..g.len())
        .filter(|&x| g.height(x) == 0 && find(&mut parent, x) == x)
        .count();
    if components != 1 {
        return Err(Error::Precondition(format!(
            "graph has {components} components"
        )));
    }
    Ok(edges + 1 - vertices)
}

/// Which pairs `a ≤ b` of `S_X` to certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyMode {
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
}

/// Retraction of the ambient fiber `(ρ̃↓(0,B'))` onto `(ρ̃↓a)`.
#[derive(Clone, Debug)]
pub struct RetractionRecord {
    pub cell: usize,
    pub ambient: usize,
    pub certificate: MorseCertificate,
}

#[derive(Clone, Debug)]
pub struct PairRecord {
    pub a: usize,
    pub b: usize,
    pub ambient: usize,
    /// A minimal cell of `S_X` below `a`, whose fiber is a graph.
    pub minimal: usize,
    pub clauses: Vec<Clause>,
}

#[derive(Clone, Debug)]
pub struct QuasiFibrationCertificate {
    pub flat: LabelSet,
    pub expected_rank: usize,
    pub exhaustive: bool,
    pub total_pairs: usize,
    pub retractions: Vec<RetractionRecord>,
    /// Homology of `(ρ̃↓a)` for every cell `a` that occurs.
    pub fiber_homology: BTreeMap<usize, Homology>,
    /// Free rank of the graph `(ρ̃↓m)` for minimal cells `m`.
    pub graph_ranks: BTreeMap<usize, usize>,
    pub pairs: Vec<PairRecord>,
}

impl QuasiFibrationCertificate {
    pub fn passed(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.clauses.iter().all(|c| c.passed))
    }

    pub fn failures(&self) -> impl Iterator<Item = (&PairRecord, &Clause)> {
        self.pairs
            .iter()
            .flat_map(|p| p.clauses.iter().filter(|c| !c.passed).map(move |c| (p, c)))
    }
}

pub fn quasi_fibration_certify(
    c: &CovectorSystem,
    x: LabelSet,
    mode: CertifyMode,
) -> Result<QuasiFibrationCertificate> {
    quasi_fibration_certify_with(c, x, mode, Execution::default())
}

pub fn quasi_fibration_certify_with(
    c: &CovectorSystem,
    x: LabelSet,
    mode: CertifyMode,
    exec: Execution,
) -> Result<QuasiFibrationCertificate> {
    let lattice = GeometricLattice::from_covectors(c);
    require_modular_corank_one(&lattice, x)?;
    let s = SalvettiPoset::new_with(c, exec);
    let loc = SalvettiLocalization::new(c, &s, x)?;
    let sx = &loc.local.poset;
    let expected_rank = c.ground_len() - x.len();
    let all_pairs = sx.relation();
    let total_pairs = all_pairs.len();
    let chosen: Vec<(usize, usize)> = match mode {
        CertifyMode::Exhaustive => all_pairs,
        CertifyMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = sample(&mut rng, total_pairs, pairs.min(total_pairs)).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| all_pairs[i]).collect()
        }
    };
    let tops = loc.local.maximal_cells();
    let minimals = loc.local.minimal_cells();
    let mut plan = Vec::with_capacity(chosen.len());
    let mut jobs: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in &chosen {
        let ambient = *tops
            .iter()
            .find(|&&t| sx.leq(b, t))
            .expect("a maximal cell above b");
        let minimal = *minimals
            .iter()
            .find(|&&m| sx.leq(m, a))
            .expect("a minimal cell below a");
        plan.push((a, b, ambient, minimal));
        jobs.extend([(a, ambient), (b, ambient), (minimal, ambient)]);
    }
    jobs.sort_unstable();
    jobs.dedup();
    let retractions: Vec<RetractionRecord> = par::map_slice(exec, &jobs, |&(cell, ambient)| {
        let base = loc.local.cells[ambient].1;
        let fm = matching_salvetti_fiber(c, &lattice, &s, &loc, cell, &base)?;
        let gamma = loc.fiber_set(&s, cell);
        let certificate =
            morse_reduction_certificate(&s.poset, &fm.stratification.fiber, &gamma, &fm.matching);
        Ok(RetractionRecord {
            cell,
            ambient,
            certificate,
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let mut cells: Vec<usize> = jobs.iter().map(|&(cell, _)| cell).collect();
    cells.dedup();
    let homologies: Vec<Homology> = par::map_slice(exec, &cells, |&a| {
        subposet_homology(&s.poset, &loc.fiber_set(&s, a))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let fiber_homology: BTreeMap<usize, Homology> = cells.iter().copied().zip(homologies).collect();
    let mut graph_ranks = BTreeMap::new();
    for &(_, _, _, m) in &plan {
        if let std::collections::btree_map::Entry::Vacant(e) = graph_ranks.entry(m) {
            e.insert(graph_free_rank(&s.poset, &loc.fiber_set(&s, m))?);
        }
    }
    let retraction = |cell: usize, ambient: usize| {
        let i = jobs.binary_search(&(cell, ambient)).expect("planned job");
        &retractions[i]
    };
    let expected = Homology {
        betti: vec![1, expected_rank],
        torsion: vec![Vec::new(), Vec::new()],
    };
    let pairs = plan
        .into_iter()
        .map(|(a, b, ambient, minimal)| {
            let id = |i: usize| loc.local.id(i).to_string();
            let mut clauses = Vec::new();
            for (name, cell) in [("a", a), ("b", b), ("m", minimal)] {
                let cert = &retraction(cell, ambient).certificate;
                clauses.push(Clause::check(
                    format!("retraction onto fiber over {name}"),
                    cert.passed(),
                    || {
                        let bad = cert
                            .clauses
                            .iter()
                            .find(|c| !c.passed)
                            .map(|c| c.to_string())
                            .unwrap_or_default();
                        format!("{} in fiber over {}: {bad}", id(cell), id(ambient))
                    },
                ));
            }
            let (ha, hb) = (&fiber_homology[&a], &fiber_homology[&b]);
            clauses.push(Clause::check("fiber homology agrees", ha == hb, || {
                format!("{} {ha} vs {} {hb}", id(a), id(b))
            }));
            clauses.push(Clause::check(
                format!("fiber homology is (1,{expected_rank})"),
                *ha == expected,
                || format!("{} {ha}", id(a)),
            ));
            let g = graph_ranks[&minimal];
            clauses.push(Clause::check(
                format!("graph free rank is {expected_rank}"),
                g == expected_rank,
                || format!("rank {g} over {}", id(minimal)),
            ));
            PairRecord {
                a,
                b,
                ambient,
                minimal,
                clauses,
            }
        })
        .collect();
    Ok(QuasiFibrationCertificate {
        flat: x,
        expected_rank,
        exhaustive: mode == CertifyMode::Exhaustive,
        total_pairs,
        retractions,
        fiber_homology,
        graph_ranks,
        pairs,
    })
}

/// Generator counts `(|X_r ∖ X_{r-1}|, ..., |X_1 ∖ X_0|)` along an M-chain.
pub fn semidirect_rank_sequence(c: &CovectorSystem) -> Result<Vec<usize>> {
    let lattice = GeometricLattice::from_covectors(c);
    let chain = lattice
        .is_supersolvable()
        .ok_or_else(|| Error::Precondition("lattice is not supersolvable".into()))?;
    Ok(chain
        .flats
        .windows(2)
        .rev()
        .map(|w| w[1].difference(w[0]).len())
        .collect())
}

pub fn salvetti_homology(c: &CovectorSystem) -> Result<Homology> {
    poset_homology(&SalvettiPoset::new(c).poset)
}

/// `b_1(S) = |E|` for a simple oriented matroid.
pub fn h1_rank_check(c: &CovectorSystem) -> Result<bool> {
    if !c.is_simple() {
        return Err(Error::Precondition("oriented matroid is not simple".into()));
    }
    let h = salvetti_homology(c)?;
    Ok(h.betti.get(1).copied().unwrap_or(0) == c.ground_len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let k =
            SimplicialComplexRecord::from_facets(vec!["a".into(), "b".into()], &[vec![0], vec![1]])
                .unwrap();
        assert_eq!(homology(&k).unwrap().betti, vec![2]);
    }

    #[test]
    fn projective_plane_torsion() {
        let facets: Vec<Vec<usize>> = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [2, 4, 5],
            [1, 3, 5],
        ]
        .iter()
        .map(|f| f.to_vec())
        .collect();
        let k = SimplicialComplexRecord::from_facets(
            (0..6).map(|i| format!("v{i}")).collect(),
            &facets,
        )
        .unwrap();
        let h = homology(&k).unwrap();
        assert_eq!(h.betti, vec![1, 0]);
        assert_eq!(h.torsion[1], vec![BigInt::from(2)]);
    }

    #[test]
    fn graph_ranks() {
        let ids = ["v", "e1", "e2", "e3", "w1", "w2", "w3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let covers = [(0, 1), (4, 1), (0, 2), (5, 2), (0, 3), (6, 3)];
        let tree = FinitePoset::from_covers(ids, &covers).unwrap();
        assert_eq!(graph_free_rank(&tree, &tree.full_set()).unwrap(), 0);
        let wedge = FinitePoset::from_covers(
            ["v", "w1", "w2", "w3", "a1", "b1", "a2", "b2", "a3", "b3"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            &[
                (0, 4),
                (1, 4),
                (0, 5),
                (1, 5),
                (0, 6),
                (2, 6),
                (0, 7),
                (2, 7),
                (0, 8),
                (3, 8),
                (0, 9),
                (3, 9),
            ],
        )
        .unwrap();
        assert_eq!(graph_free_rank(&wedge, &wedge.full_set()).unwrap(), 3);
    }
}
