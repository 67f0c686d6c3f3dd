//! The Salvetti poset of an oriented matroid, its localization maps with
//! sections, principal ideals, fibers, and the stratification of fibers over
//! a modular corank-one flat.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::lattice::GeometricLattice;
use crate::oriented_matroid::{CovectorSystem, Localization};
use crate::par::Execution;
use crate::poset::{FinitePoset, PosetMap, Subposet};
use crate::sign_vectors::{LabelSet, Sign, SignVector};
use crate::topes::dist;

/// Canonical id of the cell `(σ, T)`.
pub fn cell_id(sigma: &SignVector, tope: &SignVector) -> String {
    format!("({sigma};{tope})")
}

/// Parses `(σ;T)`.
pub fn parse_cell(text: &str) -> Result<(SignVector, SignVector)> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("cell `{t}` is not of the form (σ;T)"),
        })?;
    let (a, b) = inner.split_once(';').ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("cell `{t}` lacks `;`"),
    })?;
    Ok((SignVector::parse(a)?, SignVector::parse(b)?))
}

#[derive(Clone, Debug)]
pub struct SalvettiPoset {
    /// Cells `(σ, T)` sorted by canonical id.
    pub cells: Vec<(SignVector, SignVector)>,
    pub poset: FinitePoset,
    index: HashMap<(SignVector, SignVector), usize>,
    /// Rank of the underlying oriented matroid.
    pub rank: usize,
}

/// `(σ,T) ≤ (τ,R)` iff `σ ≥ τ` and `σ ∘ R = T`.
pub fn salvetti_leq(a: &(SignVector, SignVector), b: &(SignVector, SignVector)) -> bool {
    b.0.leq(&a.0) && a.0.compose(&b.1) == a.1
}

impl SalvettiPoset {
    pub fn new(c: &CovectorSystem) -> SalvettiPoset {
        SalvettiPoset::build(c, |_, _| true, Execution::default())
    }

    pub fn new_with(c: &CovectorSystem, exec: Execution) -> SalvettiPoset {
        SalvettiPoset::build(c, |_, _| true, exec)
    }

    /// Cells with `σ_g = T_g = +`.
    pub fn affine(c: &CovectorSystem, g: usize) -> Result<SalvettiPoset> {
        if g >= c.ground_len() {
            return Err(Error::UnknownElement(format!("element index {g}")));
        }
        Ok(SalvettiPoset::build(
            c,
            |s, t| s.get(g) == Sign::Plus && t.get(g) == Sign::Plus,
            Execution::default(),
        ))
    }

    fn build<F>(c: &CovectorSystem, keep: F, exec: Execution) -> SalvettiPoset
    where
        F: Fn(&SignVector, &SignVector) -> bool,
    {
        let topes = c.topes();
        let mut cells = Vec::new();
        for t in &topes {
            for s in c.covectors() {
                if s.leq(t) && keep(s, t) {
                    cells.push((*s, *t));
                }
            }
        }
        cells.sort_unstable();
        let ids = cells.iter().map(|(s, t)| cell_id(s, t)).collect();
        let cl = &cells;
        let poset = FinitePoset::from_leq_with(ids, |i, j| salvetti_leq(&cl[i], &cl[j]), exec)
            .expect("the Salvetti order is a partial order");
        let index = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        SalvettiPoset {
            cells,
            poset,
            index,
            rank: c.rank(),
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, sigma: &SignVector, tope: &SignVector) -> Option<usize> {
        self.index.get(&(*sigma, *tope)).copied()
    }

    pub fn cell_index(&self, text: &str) -> Result<usize> {
        let (s, t) = parse_cell(text)?;
        self.index_of(&s, &t)
            .ok_or_else(|| Error::UnknownElement(text.trim().to_string()))
    }

    pub fn id(&self, i: usize) -> &str {
        self.poset.id(i)
    }

    /// Dimension of `(σ,T)`; equal to its height in the poset.
    pub fn dim(&self, i: usize) -> usize {
        self.poset.height(i)
    }

    /// Cells `(0, T)`.
    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.cells[i].0.is_zero())
            .collect()
    }

    /// Cells `(T, T)`.
    pub fn minimal_cells(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.cells[i].0 == self.cells[i].1)
            .collect()
    }

    /// Asserts the structural invariants: maximal cells are `(0,T)`, minimal
    /// are `(T,T)`, and the poset is pure of length `rank`.
    pub fn check_structure(&self) -> Result<()> {
        let mut maxes = self.poset.maximal_elements();
        maxes.sort_unstable();
        if maxes != self.maximal_cells() {
            return Err(Error::Internal(
                "maximal cells are not the cells (0,T)".into(),
            ));
        }
        let mut mins = self.poset.minimal_elements();
        mins.sort_unstable();
        if mins != self.minimal_cells() {
            return Err(Error::Internal(
                "minimal cells are not the cells (T,T)".into(),
            ));
        }
        if maxes.iter().any(|&m| self.poset.height(m) != self.rank) {
            return Err(Error::NotPure(
                "a maximal cell has the wrong dimension".into(),
            ));
        }
        for (x, y) in self.poset.covers() {
            if self.poset.height(y) != self.poset.height(x) + 1 {
                return Err(Error::NotPure(format!(
                    "cover {} < {} skips a dimension",
                    self.id(x),
                    self.id(y)
                )));
            }
        }
        Ok(())
    }

    /// The isomorphism `S_{≤(0,T)} → L^∨`, `(F,R) ↦ F`, with inverse
    /// `F ↦ (F, F∘T)`; both directions and order are verified.
    pub fn principal_ideal_iso(
        &self,
        c: &CovectorSystem,
        tope: &SignVector,
    ) -> Result<Vec<(usize, usize)>> {
        let top = self
            .index_of(&c.zero(), tope)
            .ok_or_else(|| Error::NotATope(tope.to_string()))?;
        let ideal: Vec<usize> = self.poset.below(top).ones().collect();
        if ideal.len() != c.len() {
            return Err(Error::Internal(format!(
                "ideal below (0,{tope}) has {} cells, expected {}",
                ideal.len(),
                c.len()
            )));
        }
        let mut pairs = Vec::with_capacity(ideal.len());
        for &x in &ideal {
            let (f, r) = self.cells[x];
            if f.compose(tope) != r {
                return Err(Error::Internal(format!(
                    "{} is not of the form (F, F∘T)",
                    self.id(x)
                )));
            }
            pairs.push((x, c.index_of(&f).expect("first coordinate is a covector")));
        }
        for f in c.covectors() {
            if self
                .index_of(f, &f.compose(tope))
                .is_none_or(|i| !self.poset.below(top).contains(i))
            {
                return Err(Error::Internal(format!("(F, F∘T) missing for F = {f}")));
            }
        }
        for &(x, fx) in &pairs {
            for &(y, fy) in &pairs {
                let dual_leq = c.covector(fy).leq(&c.covector(fx));
                if self.poset.leq(x, y) != dual_leq {
                    return Err(Error::Internal("ideal order differs from L^∨".into()));
                }
            }
        }
        Ok(pairs)
    }
}

/// `ρ̃_X : S → S_X`, `(σ,T) ↦ (σ|_X, T|_X)`.
#[derive(Clone, Debug)]
pub struct SalvettiLocalization {
    pub localization: Localization,
    pub local: SalvettiPoset,
    /// `map[i]` is the image in `local` of cell `i` of the host.
    pub map: Vec<usize>,
}

impl SalvettiLocalization {
    pub fn new(c: &CovectorSystem, s: &SalvettiPoset, x: LabelSet) -> Result<SalvettiLocalization> {
        let localization = c.localization(x)?;
        let local = SalvettiPoset::new(&localization.system);
        let map = s
            .cells
            .iter()
            .map(|(sig, t)| {
                let a = localization.project(sig);
                let b = localization.project(t);
                local.index_of(&a, &b).ok_or_else(|| {
                    Error::Internal(format!("image {} is not a local cell", cell_id(&a, &b)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PosetMap::new(&s.poset, &local.poset, map.clone())?;
        Ok(SalvettiLocalization {
            localization,
            local,
            map,
        })
    }

    pub fn flat(&self) -> LabelSet {
        self.localization.flat
    }

    pub fn as_poset_map<'a>(&'a self, s: &'a SalvettiPoset) -> PosetMap<'a> {
        PosetMap::new(&s.poset, &self.local.poset, self.map.clone())
            .expect("verified on construction")
    }

    /// `ι̃_α(σ', T') = (ι_α(σ'), ι_α(T'))`, checked to be an order preserving section.
    pub fn section(
        &self,
        c: &CovectorSystem,
        s: &SalvettiPoset,
        alpha: &SignVector,
    ) -> Result<Vec<usize>> {
        self.localization.section(c, alpha)?;
        let assignment = self
            .local
            .cells
            .iter()
            .map(|(sig, t)| {
                let a = self.localization.lift(alpha, sig);
                let b = self.localization.lift(alpha, t);
                s.index_of(&a, &b).ok_or_else(|| {
                    Error::Internal(format!("section image {} is not a cell", cell_id(&a, &b)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PosetMap::new(&self.local.poset, &s.poset, assignment.clone())?;
        for (i, &j) in assignment.iter().enumerate() {
            if self.map[j] != i {
                return Err(Error::Internal(format!(
                    "ρ̃ ∘ ι̃ differs from the identity at {}",
                    self.local.id(i)
                )));
            }
        }
        Ok(assignment)
    }

    /// `(ρ̃_X ↓ a)` as a set of host cells.
    pub fn fiber_set(&self, s: &SalvettiPoset, a: usize) -> FixedBitSet {
        let mut out = s.poset.empty_set();
        for (i, &m) in self.map.iter().enumerate() {
            if self.local.poset.leq(m, a) {
                out.insert(i);
            }
        }
        out
    }

    pub fn fiber(&self, s: &SalvettiPoset, a: usize) -> Result<Subposet> {
        if a >= self.local.len() {
            return Err(Error::UnknownElement(format!("local cell index {a}")));
        }
        Ok(s.poset.induced(&self.fiber_set(s, a)))
    }

    /// Checks that `ρ̃_X` restricted to `S_{≤(0,T)}` corresponds to `ρ_X` on `L^∨`
    /// under the principal ideal isomorphisms, for every tope `T`.
    pub fn check_commuting_square(&self, c: &CovectorSystem, s: &SalvettiPoset) -> Result<()> {
        let zero_local = self.localization.system.zero();
        for t in c.topes() {
            let tl = self.localization.project(&t);
            for f in c.covectors() {
                let cell = s.index_of(f, &f.compose(&t)).expect("principal ideal cell");
                let fl = self.localization.project(f);
                let expect = self
                    .local
                    .index_of(&fl, &fl.compose(&tl))
                    .expect("local ideal cell");
                if self.map[cell] != expect
                    || !self.local.poset.leq(
                        expect,
                        self.local.index_of(&zero_local, &tl).expect("local top"),
                    )
                {
                    return Err(Error::Internal(format!("square fails at T = {t}, F = {f}")));
                }
            }
        }
        Ok(())
    }
}

/// The fiber `(ρ̃_X ↓ (0,B'))` cut into the strata `N_0, ..., N_k`.
#[derive(Clone, Debug)]
pub struct FiberStratification {
    pub flat: LabelSet,
    /// Local tope `B'`.
    pub base: SignVector,
    /// Lexicographically smaller covector with zero set `X`; `T_0 = ι_α(B')`.
    pub alpha: SignVector,
    pub tope_string: Vec<SignVector>,
    /// `separators[i-1] = e_i`, the single element of `S(T_{i-1}, T_i)`.
    pub separators: Vec<usize>,
    pub fiber: FixedBitSet,
    pub strata: Vec<FixedBitSet>,
    /// `stratum_of[x]` for every fiber cell `x`.
    pub stratum_of: Vec<Option<usize>>,
    /// For `i ≥ 1`: the covectors of `L/{e_i}` that cells of `N_i` map to.
    pub contraction_images: Vec<Vec<(usize, SignVector)>>,
}

impl FiberStratification {
    pub fn new(
        c: &CovectorSystem,
        lattice: &GeometricLattice,
        s: &SalvettiPoset,
        loc: &SalvettiLocalization,
        base: &SignVector,
    ) -> Result<FiberStratification> {
        let x = loc.flat();
        require_modular_corank_one(lattice, x)?;
        if !loc.localization.system.is_tope(base) {
            return Err(Error::NotATope(base.to_string()));
        }
        let alphas = loc.localization.section_bases(c);
        if alphas.len() != 2 || alphas[0] != alphas[1].opposite() {
            return Err(Error::Internal(format!(
                "expected exactly two covectors with zero set {}, found {}",
                c.render_set(x),
                alphas.len()
            )));
        }
        let alpha = alphas[0];
        let t0 = loc.localization.lift(&alpha, base);
        let tk = loc.localization.lift(&alphas[1], base);
        let mut string: Vec<SignVector> = c
            .topes()
            .into_iter()
            .filter(|t| loc.localization.project(t) == *base)
            .collect();
        string.sort_by_key(|t| (dist(&t0, t), *t));
        if string.first() != Some(&t0) || string.last() != Some(&tk) {
            return Err(Error::Internal(
                "end topes of the fiber string are not ι_α(B'), ι_-α(B')".into(),
            ));
        }
        let mut separators = Vec::new();
        for (i, w) in string.windows(2).enumerate() {
            let sep = w[0].separator(&w[1]);
            if sep.len() != 1 || dist(&t0, &w[1]) != i + 1 {
                return Err(Error::Internal(format!(
                    "fiber topes are not linearly ordered at step {}",
                    i + 1
                )));
            }
            separators.push(sep.iter().next().expect("single separator"));
        }
        let zero = c.zero();
        let fiber = loc.fiber_set(
            s,
            loc.local
                .index_of(&loc.localization.system.zero(), base)
                .expect("top cell"),
        );
        let mut stratum_of = vec![None; s.len()];
        let mut strata = Vec::new();
        let mut seen = s.poset.empty_set();
        for t in &string {
            let top = s.index_of(&zero, t).expect("maximal cell");
            let mut n = s.poset.below(top).clone();
            n.difference_with(&seen);
            for i in n.ones() {
                stratum_of[i] = Some(strata.len());
            }
            seen.union_with(s.poset.below(top));
            strata.push(n);
        }
        if seen != fiber {
            return Err(Error::Internal("strata do not cover the fiber".into()));
        }
        let mut contraction_images = vec![Vec::new()];
        for (i, &e) in separators.iter().enumerate() {
            let ti = string[i + 1];
            let rest: Vec<usize> = (0..c.ground_len()).filter(|&f| f != e).collect();
            let mut images = Vec::new();
            for cell in strata[i + 1].ones() {
                let (f, r) = s.cells[cell];
                if f.get(e) != Sign::Zero || f.compose(&ti) != r {
                    return Err(Error::Internal(format!(
                        "{} in N_{} is not (F, F∘T_{}) with F_e = 0",
                        s.id(cell),
                        i + 1,
                        i + 1
                    )));
                }
                images.push((cell, f.restrict(&rest)));
            }
            let contraction = c.contraction(LabelSet::singleton(e))?;
            let mut got: Vec<SignVector> = images.iter().map(|(_, v)| *v).collect();
            got.sort_unstable();
            if got != contraction.covectors() {
                return Err(Error::Internal(format!(
                    "N_{} is not in bijection with L/{{e}}",
                    i + 1
                )));
            }
            for &(a, va) in &images {
                for &(b, vb) in &images {
                    if s.poset.leq(a, b) != vb.leq(&va) {
                        return Err(Error::Internal(format!(
                            "N_{} order differs from the dual",
                            i + 1
                        )));
                    }
                }
            }
            contraction_images.push(images);
        }
        Ok(FiberStratification {
            flat: x,
            base: *base,
            alpha,
            tope_string: string,
            separators,
            fiber,
            strata,
            stratum_of,
            contraction_images,
        })
    }

    pub fn len(&self) -> usize {
        self.tope_string.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tope_string.is_empty()
    }

    /// `J_i`: flats containing `e_i` (all flats for `i = 0`).
    pub fn filter_flats(&self, lattice: &GeometricLattice, i: usize) -> Vec<LabelSet> {
        match i {
            0 => lattice.flats().to_vec(),
            _ => {
                let e = self.separators[i - 1];
                lattice
                    .flats()
                    .iter()
                    .filter(|f| f.contains(e))
                    .copied()
                    .collect()
            }
        }
    }
}

pub fn require_modular_corank_one(lattice: &GeometricLattice, x: LabelSet) -> Result<()> {
    if lattice.corank_of(x)? != 1 {
        return Err(Error::Precondition(format!(
            "{} does not have corank 1",
            lattice.render(x)
        )));
    }
    if let crate::lattice::ModularityVerdict::NotModular { z, y } = lattice.is_modular_flat(x)? {
        return Err(Error::NotModular {
            flat: lattice.render(x),
            z: lattice.render(z),
            y: lattice.render(y),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1() -> CovectorSystem {
        CovectorSystem::new(
            vec!["e".into()],
            ["0", "+", "-"]
                .iter()
                .map(|s| SignVector::parse(s).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_one_salvetti_is_a_circle() {
        let c = rank1();
        let s = SalvettiPoset::new(&c);
        assert_eq!(s.len(), 4);
        s.check_structure().unwrap();
        assert_eq!(s.maximal_cells().len(), 2);
        assert_eq!(s.minimal_cells().len(), 2);
        let plus = SignVector::parse("+").unwrap();
        assert_eq!(s.principal_ideal_iso(&c, &plus).unwrap().len(), 3);
    }

    #[test]
    fn cell_ids_round_trip() {
        let (a, b) = parse_cell("(0+;-+)").unwrap();
        assert_eq!(cell_id(&a, &b), "(0+;-+)");
        assert!(parse_cell("0+;-+").is_err());
    }
}
