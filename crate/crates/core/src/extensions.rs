//! Single-element extensions through signatures on cocircuits, Levi
//! enlargements and the supersolvable extension loop.
//!
//! A signature assigns `+`, `-` or `0` to every cocircuit, antisymmetrically.
//! It is searched depth first with per-coline propagation: on every flat of
//! corank two the cocircuits above it form a cycle, and the restriction of
//! the signature to that cycle must be a rank-2 signature (all zero, or one
//! sign change on each half with at most one zero at each change).

use std::cmp::Ordering;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::lattice::{lex_cmp, GeometricLattice, MChain};
use crate::oriented_matroid::CovectorSystem;
use crate::sign_vectors::{LabelSet, Sign, SignVector};

const PLUS: u8 = 1;
const MINUS: u8 = 2;
const ZERO: u8 = 4;
const ALL: u8 = PLUS | MINUS | ZERO;

fn bit(s: Sign) -> u8 {
    match s {
        Sign::Plus => PLUS,
        Sign::Minus => MINUS,
        Sign::Zero => ZERO,
    }
}

/// Cocircuit signs, one value per `±` pair; `cocircuits[i]` is the
/// canonically smaller member of its pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSignature {
    pub cocircuits: Vec<SignVector>,
    pub values: Vec<Sign>,
}

impl ExtensionSignature {
    pub fn sign_of(&self, y: &SignVector) -> Option<Sign> {
        if let Ok(i) = self.cocircuits.binary_search(y) {
            return Some(self.values[i]);
        }
        self.cocircuits
            .binary_search(&y.opposite())
            .ok()
            .map(|i| self.values[i].negate())
    }

    /// `σ(-Y) = -σ(Y)` on the full cocircuit list of `c`.
    pub fn is_antisymmetric(&self, c: &CovectorSystem) -> bool {
        c.cocircuits()
            .iter()
            .all(|y| match (self.sign_of(y), self.sign_of(&y.opposite())) {
                (Some(a), Some(b)) => a == b.negate(),
                _ => false,
            })
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionResult {
    pub extended: CovectorSystem,
    pub signature: ExtensionSignature,
    /// `(X, X̃)` for every flat `X` of the original system.
    pub flat_lift: Vec<(LabelSet, LabelSet)>,
}

impl ExtensionResult {
    /// Index of the new element.
    pub fn element(&self) -> usize {
        self.extended.ground_len() - 1
    }

    pub fn lift(&self, x: LabelSet) -> Option<LabelSet> {
        self.flat_lift
            .iter()
            .find(|(f, _)| *f == x)
            .map(|(_, l)| *l)
    }
}

/// Restrictions on the signature searched for.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionConstraints {
    /// The new element must lie on each of these flats: `σ(Y) = 0` whenever `X ⊆ z(Y)`.
    pub through: Vec<LabelSet>,
    /// `σ(Y) ≠ 0` for every cocircuit not forced to zero by `through`.
    pub generic: bool,
    /// Drop extensions whose new element is a loop or parallel to an old one.
    pub simple: bool,
    /// Explicit values for particular cocircuits.
    pub fixed: Vec<(SignVector, Sign)>,
}

struct Coline {
    /// Valid patterns as `(variable, value)` lists.
    patterns: Vec<Vec<(usize, Sign)>>,
}

struct Problem {
    reps: Vec<SignVector>,
    colines: Vec<Coline>,
    var_colines: Vec<Vec<usize>>,
}

impl Problem {
    fn new(c: &CovectorSystem, simple: bool) -> Result<Problem> {
        let rank = c.rank();
        if rank < 2 {
            return Err(Error::Precondition(
                "extensions need rank at least 2".into(),
            ));
        }
        let mut reps: Vec<SignVector> = c
            .cocircuits()
            .into_iter()
            .filter(|y| *y < y.opposite())
            .collect();
        reps.sort_unstable();
        let var_of = |y: &SignVector| -> (usize, bool) {
            match reps.binary_search(y) {
                Ok(i) => (i, false),
                Err(_) => (
                    reps.binary_search(&y.opposite()).expect("cocircuit pair"),
                    true,
                ),
            }
        };
        let lattice = GeometricLattice::from_covectors(c);
        let cocircuits = c.cocircuits();
        let mut colines = Vec::new();
        let mut var_colines = vec![Vec::new(); reps.len()];
        for f in lattice.flats_of_rank(rank - 2) {
            let cycle = coline_cycle(c, &cocircuits, f)?;
            let entries: Vec<(usize, bool)> = cycle.iter().map(var_of).collect();
            let n = entries.len();
            let m = n / 2;
            let mut seqs: Vec<Vec<Sign>> = Vec::with_capacity(2 * n + 1);
            let allow_zero_line = !(simple && rank >= 3);
            if allow_zero_line {
                seqs.push(vec![Sign::Zero; n]);
            }
            for s in 0..n {
                let mut plain = vec![Sign::Minus; n];
                for k in 0..m {
                    plain[(s + k) % n] = Sign::Plus;
                }
                seqs.push(plain);
                let mut crossed = vec![Sign::Minus; n];
                crossed[s] = Sign::Zero;
                crossed[(s + m) % n] = Sign::Zero;
                for k in 1..m {
                    crossed[(s + k) % n] = Sign::Plus;
                }
                seqs.push(crossed);
            }
            let mut patterns: Vec<Vec<(usize, Sign)>> = seqs
                .into_iter()
                .map(|seq| {
                    let mut p: Vec<(usize, Sign)> = entries
                        .iter()
                        .zip(seq)
                        .map(|(&(v, flip), s)| (v, if flip { s.negate() } else { s }))
                        .collect();
                    p.sort_unstable_by_key(|&(v, _)| v);
                    p.dedup();
                    p
                })
                .collect();
            patterns
                .sort_unstable_by_key(|p| p.iter().map(|&(_, s)| s.to_char()).collect::<String>());
            patterns.dedup();
            let id = colines.len();
            let mut vars: Vec<usize> = entries.iter().map(|&(v, _)| v).collect();
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                var_colines[v].push(id);
            }
            colines.push(Coline { patterns });
        }
        Ok(Problem {
            reps,
            colines,
            var_colines,
        })
    }

    /// Generalized arc consistency on every coline; `false` on a wipe-out.
    fn propagate(&self, dom: &mut [u8], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; self.colines.len()];
        for &q in &queue {
            queued[q] = true;
        }
        while let Some(q) = queue.pop() {
            queued[q] = false;
            let line = &self.colines[q];
            let mut support: Vec<(usize, u8)> = Vec::new();
            let mut any = false;
            for p in &line.patterns {
                if p.iter().all(|&(v, s)| dom[v] & bit(s) != 0) {
                    any = true;
                    if support.is_empty() {
                        support = p.iter().map(|&(v, s)| (v, bit(s))).collect();
                    } else {
                        for (k, &(_, s)) in p.iter().enumerate() {
                            support[k].1 |= bit(s);
                        }
                    }
                }
            }
            if !any {
                return false;
            }
            for (v, allowed) in support {
                let new = dom[v] & allowed;
                if new != dom[v] {
                    dom[v] = new;
                    for &r in &self.var_colines[v] {
                        if !queued[r] {
                            queued[r] = true;
                            queue.push(r);
                        }
                    }
                }
            }
        }
        true
    }

    fn search<F>(&self, dom: Vec<u8>, emit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Vec<Sign>) -> ControlFlow<()>,
    {
        let pick = (0..dom.len())
            .filter(|&v| dom[v].count_ones() > 1)
            .min_by_key(|&v| (dom[v].count_ones(), v));
        let Some(v) = pick else {
            let values = dom
                .iter()
                .map(|&d| match d {
                    PLUS => Sign::Plus,
                    MINUS => Sign::Minus,
                    _ => Sign::Zero,
                })
                .collect();
            return emit(values);
        };
        for value in [PLUS, MINUS, ZERO] {
            if dom[v] & value == 0 {
                continue;
            }
            let mut next = dom.clone();
            next[v] = value;
            if self.propagate(&mut next, self.var_colines[v].clone()) {
                self.search(next, emit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Cocircuits `Y` with `f ⊆ z(Y)`, in cyclic order; consecutive ones lie
/// below a common covector with zero set exactly `f`.
fn coline_cycle(
    c: &CovectorSystem,
    cocircuits: &[SignVector],
    f: LabelSet,
) -> Result<Vec<SignVector>> {
    let nodes: Vec<SignVector> = cocircuits
        .iter()
        .filter(|y| f.is_subset(y.zero_set()))
        .copied()
        .collect();
    let edges: Vec<[usize; 2]> = c
        .covectors()
        .iter()
        .filter(|x| x.zero_set() == f)
        .map(|x| {
            let ends: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].leq(x)).collect();
            <[usize; 2]>::try_from(ends)
                .map_err(|_| Error::Internal(format!("coline edge {x} does not have two ends")))
        })
        .collect::<Result<_>>()?;
    if nodes.is_empty() || edges.len() != nodes.len() {
        return Err(Error::Internal(format!(
            "coline {} is not a cycle",
            c.render_set(f)
        )));
    }
    let mut cycle = vec![0usize];
    let mut used = vec![false; edges.len()];
    while cycle.len() < nodes.len() {
        let here = *cycle.last().expect("nonempty");
        let (k, e) = edges
            .iter()
            .enumerate()
            .find(|(k, e)| !used[*k] && e.contains(&here))
            .ok_or_else(|| {
                Error::Internal(format!("coline {} is not connected", c.render_set(f)))
            })?;
        used[k] = true;
        cycle.push(if e[0] == here { e[1] } else { e[0] });
    }
    let out: Vec<SignVector> = cycle.iter().map(|&i| nodes[i]).collect();
    if !out.len().is_multiple_of(2)
        || (0..out.len() / 2).any(|i| out[i + out.len() / 2] != out[i].opposite())
    {
        return Err(Error::Internal(format!(
            "coline {} is not centrally symmetric",
            c.render_set(f)
        )));
    }
    Ok(out)
}

/// Whether the signature restricts to a rank-2 signature on every coline.
pub fn coline_consistent(c: &CovectorSystem, sig: &ExtensionSignature) -> Result<bool> {
    let problem = Problem::new(c, false)?;
    if problem.reps != sig.cocircuits {
        return Err(Error::Precondition(
            "signature is not on the cocircuits of this system".into(),
        ));
    }
    Ok(problem.colines.iter().all(|line| {
        line.patterns
            .iter()
            .any(|p| p.iter().all(|&(v, s)| sig.values[v] == s))
    }))
}

/// The covectors `(X, s)`: `X` splits into `+, -, 0` when the cocircuits
/// below it carry both signs, otherwise it keeps their common sign.
pub fn extension_from_signature(
    c: &CovectorSystem,
    sig: &ExtensionSignature,
    label: &str,
) -> Result<ExtensionResult> {
    let n = c.ground_len();
    let cocircuits = c.cocircuits();
    let signed: Vec<(SignVector, Sign)> = cocircuits
        .iter()
        .map(|y| {
            Ok((
                *y,
                sig.sign_of(y)
                    .ok_or_else(|| Error::Precondition(format!("no sign for {y}")))?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut covectors = Vec::with_capacity(c.len() * 2);
    for x in c.covectors() {
        let (mut plus, mut minus) = (false, false);
        for (y, s) in &signed {
            if y.leq(x) {
                plus |= *s == Sign::Plus;
                minus |= *s == Sign::Minus;
            }
        }
        match (plus, minus) {
            (true, true) => {
                for s in [Sign::Plus, Sign::Minus, Sign::Zero] {
                    covectors.push(x.extend_by(s));
                }
            }
            (true, false) => covectors.push(x.extend_by(Sign::Plus)),
            (false, true) => covectors.push(x.extend_by(Sign::Minus)),
            (false, false) => covectors.push(x.extend_by(Sign::Zero)),
        }
    }
    let mut labels = c.labels().to_vec();
    labels.push(label.to_string());
    let extended = CovectorSystem::new(labels, covectors)?;
    let report = extended.check_axioms();
    if let Some(bad) = report.clauses.iter().find(|cl| !cl.passed()) {
        return Err(Error::Construction(format!(
            "signature violates axiom ({}): {}",
            bad.axiom,
            bad.witness.as_deref().unwrap_or("")
        )));
    }
    let back = extended.restriction(LabelSet::full(n))?;
    if back.covectors() != c.covectors() {
        return Err(Error::Internal(
            "extension does not restrict to the original system".into(),
        ));
    }
    let flats = extended.flats();
    let flat_lift = c
        .flats()
        .into_iter()
        .map(|x| {
            let with = x.union(LabelSet::singleton(n));
            (
                x,
                if flats.contains(&with) && !flats.contains(&x) {
                    with
                } else {
                    x
                },
            )
        })
        .collect();
    Ok(ExtensionResult {
        extended,
        signature: sig.clone(),
        flat_lift,
    })
}

fn initial_domains(problem: &Problem, k: &ExtensionConstraints) -> Result<Vec<u8>> {
    let mut dom = vec![ALL; problem.reps.len()];
    for (v, y) in problem.reps.iter().enumerate() {
        let forced = k.through.iter().any(|x| x.is_subset(y.zero_set()));
        if forced {
            dom[v] = ZERO;
        } else if k.generic {
            dom[v] = PLUS | MINUS;
        }
    }
    for (y, s) in &k.fixed {
        let (v, s) = match problem.reps.binary_search(y) {
            Ok(v) => (v, *s),
            Err(_) => match problem.reps.binary_search(&y.opposite()) {
                Ok(v) => (v, s.negate()),
                Err(_) => return Err(Error::NotACovector(format!("{y} is not a cocircuit"))),
            },
        };
        dom[v] &= bit(s);
    }
    Ok(dom)
}

/// Visits every extension allowed by `constraints` in a fixed depth-first
/// order until `visit` breaks. The new element is labelled `label`.
pub fn for_each_extension<F>(
    c: &CovectorSystem,
    constraints: &ExtensionConstraints,
    label: &str,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(ExtensionResult) -> ControlFlow<()>,
{
    let problem = Problem::new(c, constraints.simple)?;
    let mut dom = initial_domains(&problem, constraints)?;
    if dom.contains(&0) || !problem.propagate(&mut dom, (0..problem.colines.len()).collect()) {
        return Ok(());
    }
    let mut failure = None;
    let _ = problem.search(dom, &mut |values| {
        let sig = ExtensionSignature {
            cocircuits: problem.reps.clone(),
            values,
        };
        match extension_from_signature(c, &sig, label) {
            Ok(ext) if constraints.simple && !ext.extended.is_simple() => ControlFlow::Continue(()),
            Ok(ext) => visit(ext),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn single_element_extensions(
    c: &CovectorSystem,
    constraints: &ExtensionConstraints,
    label: &str,
) -> Result<Vec<ExtensionResult>> {
    let mut out = Vec::new();
    for_each_extension(c, constraints, label, |e| {
        out.push(e);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn require_rank3(c: &CovectorSystem) -> Result<()> {
    if c.rank() != 3 {
        return Err(Error::RankMismatch(format!(
            "expected rank 3, found {}",
            c.rank()
        )));
    }
    if !c.is_simple() {
        return Err(Error::Precondition("oriented matroid is not simple".into()));
    }
    Ok(())
}

/// An extension by `label` lying on both rank-2 flats `x1` and `x2`.
pub fn levi_enlargement(
    c: &CovectorSystem,
    x1: LabelSet,
    x2: LabelSet,
    generic: bool,
    label: &str,
) -> Result<ExtensionResult> {
    require_rank3(c)?;
    let lattice = GeometricLattice::from_covectors(c);
    for x in [x1, x2] {
        if !lattice.is_flat(x) || lattice.rank_of(x)? != 2 {
            return Err(Error::NotAFlat(format!(
                "{} is not a rank-2 flat",
                c.render_set(x)
            )));
        }
    }
    if !x1.is_disjoint(x2) {
        return Err(Error::Precondition(format!(
            "{} and {} meet",
            c.render_set(x1),
            c.render_set(x2)
        )));
    }
    let constraints = ExtensionConstraints {
        through: vec![x1, x2],
        generic,
        simple: true,
        fixed: Vec::new(),
    };
    let mut found = None;
    for_each_extension(c, &constraints, label, |e| {
        found = Some(e);
        ControlFlow::Break(())
    })?;
    found.ok_or_else(|| {
        let what = if generic { "generic " } else { "" };
        Error::Construction(format!(
            "no {what}extension through {} and {} found",
            c.render_set(x1),
            c.render_set(x2)
        ))
    })
}

#[derive(Clone, Debug)]
pub struct EnlargementStep {
    pub label: String,
    pub through: (LabelSet, LabelSet),
    pub generic: bool,
    /// Rank-2 flats disjoint from the pivot before and after the step.
    pub disjoint_before: usize,
    pub disjoint_after: usize,
    pub result: ExtensionResult,
}

#[derive(Clone, Debug)]
pub struct SupersolvableExtension {
    pub pivot: LabelSet,
    pub steps: Vec<EnlargementStep>,
    pub result: CovectorSystem,
    pub chain: MChain,
}

/// The rank-2 flat with the fewest disjoint rank-2 flats, ties lexicographic.
pub fn choose_pivot(lattice: &GeometricLattice) -> Option<LabelSet> {
    lattice.flats_of_rank(2).into_iter().min_by(|a, b| {
        match lattice
            .disjoint_rank2(*a)
            .len()
            .cmp(&lattice.disjoint_rank2(*b).len())
        {
            Ordering::Equal => lex_cmp(*a, *b),
            o => o,
        }
    })
}

pub fn supersolvable_extension(c: &CovectorSystem) -> Result<SupersolvableExtension> {
    require_rank3(c)?;
    let lattice = GeometricLattice::from_covectors(c);
    if let Some(chain) = lattice.is_supersolvable() {
        let pivot = chain.flats[2];
        return Ok(SupersolvableExtension {
            pivot,
            steps: Vec::new(),
            result: c.clone(),
            chain,
        });
    }
    let pivot =
        choose_pivot(&lattice).ok_or_else(|| Error::Precondition("no rank-2 flats".into()))?;
    supersolvable_extension_with_pivot(c, pivot)
}

/// Repeated Levi enlargements through the pivot and its first disjoint rank-2 flat.
pub fn supersolvable_extension_with_pivot(
    c: &CovectorSystem,
    pivot: LabelSet,
) -> Result<SupersolvableExtension> {
    require_rank3(c)?;
    let mut current = c.clone();
    let mut x = pivot;
    let mut steps = Vec::new();
    loop {
        let lattice = GeometricLattice::from_covectors(&current);
        if lattice.rank_of(x).ok() != Some(2) {
            return Err(Error::NotAFlat(format!(
                "{} is not a rank-2 flat",
                current.render_set(x)
            )));
        }
        let disjoint = lattice.disjoint_rank2(x);
        if disjoint.is_empty() {
            let chain = lattice.is_supersolvable().ok_or_else(|| {
                Error::Internal("pivot meets every line but lattice is not supersolvable".into())
            })?;
            return Ok(SupersolvableExtension {
                pivot,
                steps,
                result: current,
                chain,
            });
        }
        let y = disjoint[0];
        let label = fresh_label(&current, steps.len() + 1);
        let (result, generic) = match levi_enlargement(&current, x, y, true, &label) {
            Ok(r) => (r, true),
            Err(Error::Construction(_)) => {
                (levi_enlargement(&current, x, y, false, &label)?, false)
            }
            Err(e) => return Err(e),
        };
        let lifted = result.lift(x).expect("pivot is a flat");
        let after = GeometricLattice::from_covectors(&result.extended)
            .disjoint_rank2(lifted)
            .len();
        if after >= disjoint.len() {
            return Err(Error::Construction(format!(
                "disjoint-flat count did not decrease ({} -> {after})",
                disjoint.len()
            )));
        }
        current = result.extended.clone();
        steps.push(EnlargementStep {
            label,
            through: (x, y),
            generic,
            disjoint_before: disjoint.len(),
            disjoint_after: after,
            result,
        });
        x = lifted;
    }
}

fn fresh_label(c: &CovectorSystem, start: usize) -> String {
    (start..)
        .map(|i| format!("g{i}"))
        .find(|l| c.label_index(l).is_err())
        .expect("unbounded labels")
}
