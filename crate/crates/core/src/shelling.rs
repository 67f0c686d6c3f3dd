//! Shellings of pure regular cell complexes given by their face posets.
//!
//! A complex is a downward closed set of cells of a [`FinitePoset`] whose
//! heights are the cell dimensions; the boundary `δσ` of a cell is the set of
//! cells strictly below it.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poset::FinitePoset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShellingVerdict {
    Valid,
    /// `position` is 1-based in the given order.
    Invalid {
        position: usize,
        reason: String,
    },
}

impl ShellingVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, ShellingVerdict::Valid)
    }
}

/// Maximal cells of the complex `cells`.
pub fn maximal_cells(p: &FinitePoset, cells: &FixedBitSet) -> Vec<usize> {
    cells
        .ones()
        .filter(|&x| p.upper_covers(x).iter().all(|&y| !cells.contains(y)))
        .collect()
}

/// Common dimension of the maximal cells, or `None` if the complex is not pure.
pub fn pure_dimension(p: &FinitePoset, cells: &FixedBitSet) -> Option<usize> {
    let maxes = maximal_cells(p, cells);
    let d = p.height(*maxes.first()?);
    maxes.iter().all(|&m| p.height(m) == d).then_some(d)
}

fn boundary(p: &FinitePoset, x: usize) -> FixedBitSet {
    let mut b = p.below(x).clone();
    b.set(x, false);
    b
}

/// Checks whether `order` is a shelling of the complex of all cells of `p`.
/// Conditions (ii) and (iii) are checked recursively down to `depth` levels;
/// `depth ≥ dim` checks everything.
pub fn verify_shelling(p: &FinitePoset, order: &[usize], depth: usize) -> Result<ShellingVerdict> {
    verify_shelling_in(p, &p.full_set(), order, depth, Execution::default())
}

pub fn verify_shelling_in(
    p: &FinitePoset,
    cells: &FixedBitSet,
    order: &[usize],
    depth: usize,
    exec: Execution,
) -> Result<ShellingVerdict> {
    let d = pure_dimension(p, cells)
        .ok_or_else(|| Error::NotPure("maximal cells differ in dimension".into()))?;
    let mut maxes = maximal_cells(p, cells);
    maxes.sort_unstable();
    let mut given = order.to_vec();
    given.sort_unstable();
    given.dedup();
    if given != maxes || given.len() != order.len() {
        return Err(Error::Precondition(
            "order is not a permutation of the maximal cells".into(),
        ));
    }
    if d == 0 {
        return Ok(ShellingVerdict::Valid);
    }
    let mut prefix = Vec::with_capacity(order.len());
    let mut acc = p.empty_set();
    for &s in order {
        prefix.push(acc.clone());
        acc.union_with(p.below(s));
    }
    let fail = par::find_first(exec, order.len(), |j| {
        step_failure(p, order[j], &prefix[j], j == 0, d, depth).map(|r| (j + 1, r))
    });
    Ok(match fail {
        None => ShellingVerdict::Valid,
        Some((position, reason)) => ShellingVerdict::Invalid { position, reason },
    })
}

/// Conditions (i)-(iii) for adding `s` after the cells in `before`.
fn step_failure(
    p: &FinitePoset,
    s: usize,
    before: &FixedBitSet,
    first: bool,
    d: usize,
    depth: usize,
) -> Option<String> {
    let bd = boundary(p, s);
    if first {
        if depth > 0 && find_shelling(p, &bd, &p.empty_set(), depth - 1).is_none() {
            return Some(format!("boundary of `{}` has no shelling", p.id(s)));
        }
        return None;
    }
    let mut meet_set = bd.clone();
    meet_set.intersect_with(before);
    let facets: Vec<usize> = meet_set.ones().filter(|&x| p.height(x) == d - 1).collect();
    if facets.is_empty() {
        return Some(format!(
            "`{}` meets the earlier cells in no ({})-cell",
            p.id(s),
            d - 1
        ));
    }
    let mut covered = p.empty_set();
    for &f in &facets {
        covered.union_with(p.below(f));
    }
    if let Some(x) = meet_set.difference(&covered).next() {
        return Some(format!(
            "intersection for `{}` is not pure: `{}` lies in no ({})-cell",
            p.id(s),
            p.id(x),
            d - 1
        ));
    }
    if depth > 0 {
        let mut first_set = p.empty_set();
        for &f in &facets {
            first_set.insert(f);
        }
        if find_shelling(p, &bd, &first_set, depth - 1).is_none() {
            return Some(format!(
                "boundary of `{}` has no shelling starting with the intersection",
                p.id(s)
            ));
        }
    }
    None
}

/// Backtracking search for a shelling of the complex `cells` whose maximal
/// cells in `first` come first. Candidates are tried in index order.
pub fn find_shelling(
    p: &FinitePoset,
    cells: &FixedBitSet,
    first: &FixedBitSet,
    depth: usize,
) -> Option<Vec<usize>> {
    let d = pure_dimension(p, cells)?;
    let maxes = maximal_cells(p, cells);
    if first.ones().any(|f| !maxes.contains(&f)) {
        return None;
    }
    if d == 0 {
        let mut out: Vec<usize> = maxes
            .iter()
            .copied()
            .filter(|m| first.contains(*m))
            .collect();
        out.extend(maxes.iter().copied().filter(|m| !first.contains(*m)));
        return Some(out);
    }
    let mut search = Search {
        p,
        maxes: &maxes,
        first,
        d,
        depth,
        dead: HashSet::new(),
    };
    let mut chosen = Vec::new();
    let mut used = FixedBitSet::with_capacity(maxes.len());
    let acc = p.empty_set();
    search
        .extend(&mut chosen, &mut used, &acc)
        .then(|| chosen.iter().map(|&k| maxes[k]).collect())
}

struct Search<'a> {
    p: &'a FinitePoset,
    maxes: &'a [usize],
    first: &'a FixedBitSet,
    d: usize,
    depth: usize,
    dead: HashSet<FixedBitSet>,
}

impl Search<'_> {
    fn extend(
        &mut self,
        chosen: &mut Vec<usize>,
        used: &mut FixedBitSet,
        acc: &FixedBitSet,
    ) -> bool {
        if chosen.len() == self.maxes.len() {
            return true;
        }
        if self.dead.contains(used) {
            return false;
        }
        let pending_first =
            (0..self.maxes.len()).any(|k| !used.contains(k) && self.first.contains(self.maxes[k]));
        for k in 0..self.maxes.len() {
            let s = self.maxes[k];
            if used.contains(k) || (pending_first && !self.first.contains(s)) {
                continue;
            }
            if step_failure(self.p, s, acc, chosen.is_empty(), self.d, self.depth).is_some() {
                continue;
            }
            let mut next = acc.clone();
            next.union_with(self.p.below(s));
            chosen.push(k);
            used.insert(k);
            if self.extend(chosen, used, &next) {
                return true;
            }
            used.set(k, false);
            chosen.pop();
        }
        self.dead.insert(used.clone());
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Boundary of a square: vertices v1..v4, edges e1 = v1v2, e2 = v2v3, e3 = v3v4, e4 = v4v1.
    pub(crate) fn square_boundary() -> FinitePoset {
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
    fn square_orders() {
        let p = square_boundary();
        assert!(verify_shelling(&p, &[4, 5, 6, 7], 1).unwrap().is_valid());
        let bad = verify_shelling(&p, &[4, 6, 5, 7], 1).unwrap();
        assert_eq!(
            bad,
            ShellingVerdict::Invalid {
                position: 2,
                reason: "`e3` meets the earlier cells in no (0)-cell".into()
            }
        );
    }

    #[test]
    fn points_are_shellable() {
        let p = FinitePoset::from_covers(vec!["a".into(), "b".into()], &[]).unwrap();
        assert!(verify_shelling(&p, &[1, 0], 0).unwrap().is_valid());
    }

    #[test]
    fn search_respects_prefix() {
        let p = square_boundary();
        let mut first = p.empty_set();
        first.insert(6);
        let order = find_shelling(&p, &p.full_set(), &first, 1).unwrap();
        assert_eq!(order[0], 6);
        assert!(verify_shelling(&p, &order, 1).unwrap().is_valid());
    }
}
