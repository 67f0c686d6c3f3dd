//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssom_core::extensions::supersolvable_extension;
use ssom_core::homotopy::{
    graph_free_rank, quasi_fibration_certify, salvetti_homology, semidirect_rank_sequence,
    CertifyMode,
};
use ssom_core::io::corpus::{corpus, CORPUS_NAMES};
use ssom_core::lattice::GeometricLattice;
use ssom_core::morse::{
    is_acyclic, matching_convex_critical, matching_from_shelling, matching_salvetti_fiber, Matching,
};
use ssom_core::oriented_matroid::CovectorSystem;
use ssom_core::par::Execution;
use ssom_core::poset::FinitePoset;
use ssom_core::salvetti::{FiberStratification, SalvettiLocalization, SalvettiPoset};
use ssom_core::shelling::verify_shelling_in;
use ssom_core::sign_vectors::Sign;
use ssom_core::sign_vectors::{LabelSet, SignVector};
use ssom_core::topes::{
    convex_first_extension, convex_hull, dual_subcomplex, halfspace, reduced_face_poset, TopePoset,
};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> Result<CovectorSystem, String> {
    corpus(name).map_err(|e| format!("{name}: {e}"))
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || {
        format!("{what} took {t:.2?}, limit {limit:?}")
    })
}

fn axioms_and_corpus() -> Outcome {
    for name in CORPUS_NAMES {
        let start = Instant::now();
        let c = load(name)?;
        let report = c.check_axioms();
        ensure(report.passed(), || {
            format!("{name} fails {:?}", report.clauses)
        })?;
        within(start, Duration::from_secs(1), name)?;
    }
    let c = load("sec3-arrangement")?;
    let removed = c.topes()[0];
    let kept: Vec<SignVector> = c
        .covectors()
        .iter()
        .copied()
        .filter(|x| *x != removed)
        .collect();
    let start = Instant::now();
    let mutated = CovectorSystem::new(c.labels().to_vec(), kept).map_err(s)?;
    let report = mutated.check_axioms();
    within(start, Duration::from_secs(1), "mutated")?;
    let witness = report
        .clause(3)
        .witness
        .clone()
        .ok_or("mutated system passes axiom (3)")?;
    Ok(format!(
        "{} members pass; without {removed}: {witness}",
        CORPUS_NAMES.len()
    ))
}

fn example_fidelity() -> Outcome {
    let start = Instant::now();
    let c = load("sec3-arrangement")?;
    let l = GeometricLattice::from_covectors(&c);
    let x = c.parse_set("H1,H2,H3").map_err(s)?;
    ensure(l.is_modular_flat(x).map_err(s)?.is_modular(), || {
        "X is not modular".into()
    })?;
    let sp = SalvettiPoset::new(&c);
    let loc = SalvettiLocalization::new(&c, &sp, x).map_err(s)?;
    let base = loc.localization.system.parse_vector("+++").map_err(s)?;
    let f = FiberStratification::new(&c, &l, &sp, &loc, &base).map_err(s)?;
    ensure(f.tope_string.len() == 3, || {
        format!("tope string of length {}", f.tope_string.len())
    })?;
    let s12 = f.tope_string[1].separator(&f.tope_string[2]);
    let s02 = f.tope_string[0].separator(&f.tope_string[2]);
    ensure(c.render_set(s12) == "{H5}", || {
        format!("S(T1,T2) = {}", c.render_set(s12))
    })?;
    ensure(c.render_set(s02) == "{H4,H5}", || {
        format!("S(T0,T2) = {}", c.render_set(s02))
    })?;
    within(start, Duration::from_secs(1), "example")?;
    let string: Vec<String> = f.tope_string.iter().map(|t| t.to_string()).collect();
    Ok(format!(
        "{} with S(T1,T2) = {{H5}}, S(T0,T2) = {{H4,H5}}",
        string.join(" < ")
    ))
}

fn betti_oracle() -> Outcome {
    let mut shown = Vec::new();
    for name in CORPUS_NAMES {
        let start = Instant::now();
        let c = load(name)?;
        let h = salvetti_homology(&c).map_err(s)?;
        let w: Vec<usize> = GeometricLattice::from_covectors(&c)
            .whitney()
            .iter()
            .map(|&x| x as usize)
            .collect();
        ensure(h.is_torsion_free() && h.betti == w, || {
            format!("{name}: {h} vs whitney {w:?}")
        })?;
        within(start, Duration::from_secs(60), name)?;
        shown.push(format!("{name} {h}"));
    }
    let sec3 = salvetti_homology(&load("sec3-arrangement")?).map_err(s)?;
    ensure(sec3.betti == [1, 5, 8, 4], || format!("sec3 {sec3}"))?;
    let rank1 = salvetti_homology(&load("rank1")?).map_err(s)?;
    ensure(rank1.betti == [1, 1], || format!("rank1 {rank1}"))?;
    Ok(shown.join(", "))
}

fn quasi_fibration() -> Outcome {
    let start = Instant::now();
    let c = load("sec3-arrangement")?;
    let x = c.parse_set("H1,H2,H3").map_err(s)?;
    let cert = quasi_fibration_certify(&c, x, CertifyMode::Exhaustive).map_err(s)?;
    if let Some((p, cl)) = cert.failures().next() {
        return Err(format!("pair ({}, {}): {cl}", p.a, p.b));
    }
    ensure(
        cert.exhaustive && cert.pairs.len() == cert.total_pairs,
        || "not exhaustive".into(),
    )?;
    let bad = cert
        .fiber_homology
        .values()
        .find(|h| h.betti != [1, 2] || !h.is_torsion_free());
    ensure(bad.is_none(), || format!("fiber homology {}", bad.unwrap()))?;
    within(start, Duration::from_secs(300), "certify")?;
    Ok(format!(
        "{} pairs, {} retraction certificates, every fiber b=(1,2)",
        cert.pairs.len(),
        cert.retractions.len()
    ))
}

/// Convex tope sets: hulls of tope pairs, halfspaces and the whole tope set.
fn convex_sets(c: &CovectorSystem, exhaustive: bool) -> Result<Vec<Vec<SignVector>>, String> {
    let topes = c.topes();
    let mut pairs = Vec::new();
    for (i, a) in topes.iter().enumerate() {
        for b in &topes[i..] {
            pairs.push((*a, *b));
        }
    }
    if !exhaustive {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let keep = rand::seq::index::sample(&mut rng, pairs.len(), 60.min(pairs.len()));
        pairs = keep.into_iter().map(|i| pairs[i]).collect();
    }
    let mut out: BTreeSet<Vec<SignVector>> = BTreeSet::new();
    for (a, b) in pairs {
        out.insert(convex_hull(c, &[a, b]).map_err(s)?);
    }
    for e in 0..c.ground_len() {
        for eps in [Sign::Plus, Sign::Minus] {
            let h = halfspace(c, e, eps).map_err(s)?;
            if !h.is_empty() {
                out.insert(h);
            }
        }
    }
    out.insert(topes);
    Ok(out
        .into_iter()
        .map(|mut q| {
            q.sort_unstable();
            q
        })
        .collect())
}

fn check_matching(
    p: &FinitePoset,
    m: &Matching,
    expected: &fixedbitset::FixedBitSet,
) -> Result<(), String> {
    ensure(is_acyclic(p, m).is_acyclic(), || {
        "matching has a cycle".into()
    })?;
    ensure(is_acyclic(&p.dual(), &m.dual()).is_acyclic(), || {
        "dual matching has a cycle".into()
    })?;
    ensure(m.critical_cells() == *expected, || {
        "critical cells differ".into()
    })
}

fn matchings() -> Outcome {
    let mut convex = 0;
    let mut fibers = 0;
    for name in CORPUS_NAMES {
        let c = load(name)?;
        let exhaustive = matches!(
            name,
            "sec3-arrangement" | "uniform-2-3" | "rank1" | "boolean3"
        );
        let dual = c.face_poset().dual();
        for q in convex_sets(&c, exhaustive)? {
            let m = matching_convex_critical(&c, &q)
                .map_err(|e| format!("{name} |Q| = {}: {e}", q.len()))?;
            let mut expected = dual.empty_set();
            for x in dual_subcomplex(&c, &q).map_err(s)? {
                expected.insert(c.index_of(&x).expect("covector"));
            }
            check_matching(&dual, &m, &expected).map_err(|e| format!("{name} convex: {e}"))?;
            convex += 1;
        }
        let l = GeometricLattice::from_covectors(&c);
        if l.rank() < 2 {
            continue;
        }
        let sp = SalvettiPoset::new(&c);
        for x in l.flats_of_rank(l.rank() - 1) {
            if !l.is_modular_flat(x).map_err(s)?.is_modular() {
                continue;
            }
            let loc = SalvettiLocalization::new(&c, &sp, x).map_err(s)?;
            for top in loc.local.maximal_cells() {
                let base = loc.local.cells[top].1;
                for a in loc.local.poset.below(top).ones() {
                    let fm = matching_salvetti_fiber(&c, &l, &sp, &loc, a, &base).map_err(|e| {
                        format!(
                            "{name} X = {}, a = {}: {e}",
                            c.render_set(x),
                            loc.local.id(a)
                        )
                    })?;
                    ensure(fm.matching.domain() == &fm.stratification.fiber, || {
                        "domain is not the fiber".into()
                    })?;
                    check_matching(&sp.poset, &fm.matching, &loc.fiber_set(&sp, a)).map_err(
                        |e| {
                            format!(
                                "{name} X = {}, a = {}: {e}",
                                c.render_set(x),
                                loc.local.id(a)
                            )
                        },
                    )?;
                    fibers += 1;
                }
            }
        }
    }
    Ok(format!("{convex} convex sets and {fibers} fiber instances"))
}

fn shelling() -> Outcome {
    let mut extensions = 0;
    let mut balls = 0;
    for name in CORPUS_NAMES {
        let c = load(name)?;
        if c.rank() > 3 {
            continue;
        }
        let face = c.face_poset();
        let reduced = reduced_face_poset(&c, &face);
        let rp = &reduced.poset;
        let local = |t: &SignVector| {
            reduced
                .local_index(c.index_of(t).expect("tope"))
                .expect("nonzero")
        };
        let topes = c.topes();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..50 {
            let tp = TopePoset::new(&c, topes[k % topes.len()]).map_err(s)?;
            let order: Vec<usize> = tp
                .random_linear_extension(&mut rng)
                .iter()
                .map(local)
                .collect();
            let v = verify_shelling_in(rp, &rp.full_set(), &order, c.rank(), Execution::default())
                .map_err(s)?;
            ensure(v.is_valid(), || {
                format!("{name}: extension {k} is not a shelling: {v:?}")
            })?;
            extensions += 1;
        }
        for q in convex_sets(&c, matches!(name, "sec3-arrangement" | "uniform-2-3"))? {
            if q.len() == topes.len() {
                continue;
            }
            let base = q[0];
            let ext = convex_first_extension(&c, base, &q).map_err(s)?;
            let rest = ext.len() - q.len();
            let halves: [Vec<usize>; 2] = [
                ext[..q.len()].iter().map(local).collect(),
                ext.iter().rev().take(rest).map(local).collect(),
            ];
            for order in halves.iter().filter(|o| !o.is_empty()) {
                let mut cells = rp.empty_set();
                for &t in order {
                    cells.union_with(rp.below(t));
                }
                let v = verify_shelling_in(rp, &cells, order, c.rank(), Execution::default())
                    .map_err(s)?;
                ensure(v.is_valid(), || {
                    format!("{name}: |Q| = {} half is not shelled: {v:?}", q.len())
                })?;
                let vertex = rp
                    .below(order[0])
                    .ones()
                    .find(|&x| rp.height(x) == 0)
                    .expect("vertex");
                let m = matching_from_shelling(rp, &cells, order, vertex).map_err(s)?;
                let crit: Vec<usize> = m.critical_cells().ones().collect();
                ensure(crit == [vertex], || {
                    format!("{name}: collapse leaves {crit:?}")
                })?;
                balls += 1;
            }
        }
    }
    Ok(format!(
        "{extensions} random extensions shell; {balls} balls collapse to a vertex"
    ))
}

fn extension_algorithm() -> Outcome {
    let start = Instant::now();
    let c = load("non-pappus")?;
    let res = supersolvable_extension(&c).map_err(s)?;
    let decreasing = res
        .steps
        .iter()
        .all(|st| st.disjoint_after < st.disjoint_before);
    ensure(decreasing, || "disjoint count does not decrease".into())?;
    let l = GeometricLattice::from_covectors(&res.result);
    let chain = l.is_supersolvable().ok_or("output is not supersolvable")?;
    chain.verify(&l).map_err(s)?;
    ensure(res.result.check_axioms().passed(), || {
        "output fails the axioms".into()
    })?;
    let back = res
        .result
        .restriction(LabelSet::full(c.ground_len()))
        .map_err(s)?;
    ensure(
        back.covectors() == c.covectors() && back.labels() == c.labels(),
        || "restriction differs".into(),
    )?;
    within(start, Duration::from_secs(600), "extend-ss")?;
    let counts: Vec<String> = std::iter::once(res.steps.first().map_or(0, |st| st.disjoint_before))
        .chain(res.steps.iter().map(|st| st.disjoint_after))
        .map(|n| n.to_string())
        .collect();
    Ok(format!(
        "{} steps, disjoint counts {}; {}",
        res.steps.len(),
        counts.join(" > "),
        chain.render(&l)
    ))
}

fn rank_data() -> Outcome {
    let c = load("sec3-arrangement")?;
    let seq = semidirect_rank_sequence(&c).map_err(s)?;
    ensure(seq == [2, 2, 1], || format!("sequence {seq:?}"))?;
    let b1 = salvetti_homology(&c).map_err(s)?.betti[1];
    ensure(seq.iter().sum::<usize>() == b1, || {
        format!("sum differs from b1 = {b1}")
    })?;
    let x = c.parse_set("H1,H2,H3").map_err(s)?;
    let sp = SalvettiPoset::new(&c);
    let loc = SalvettiLocalization::new(&c, &sp, x).map_err(s)?;
    let mut ranks = Vec::new();
    for m in loc.local.minimal_cells() {
        ranks.push(graph_free_rank(&sp.poset, &loc.fiber_set(&sp, m)).map_err(s)?);
    }
    ensure(ranks.iter().all(|&r| r == 2), || {
        format!("graph ranks {ranks:?}")
    })?;
    Ok(format!(
        "(2,2,1), sum 5 = b1, free rank 2 over {} minimal cells",
        ranks.len()
    ))
}

fn properties() -> Outcome {
    let mut checks = 0usize;
    for name in CORPUS_NAMES {
        let c = load(name)?;
        let cov = c.covectors();
        for x in cov {
            ensure(x.compose(x) == *x && x.compose(&x.opposite()) == *x, || {
                format!("{name}: idempotence at {x}")
            })?;
            ensure(x.separator(&x.opposite()) == x.support(), || {
                format!("{name}: S(X,-X) at {x}")
            })?;
            for y in cov {
                let xy = x.compose(y);
                ensure(
                    xy.zero_set() == x.zero_set().intersection(y.zero_set()),
                    || format!("{name}: z law {x} {y}"),
                )?;
                ensure(x.separator(y) == y.separator(x), || {
                    format!("{name}: S symmetry {x} {y}")
                })?;
                ensure(x.leq(&xy), || format!("{name}: X ≤ X∘Y fails at {x} {y}"))?;
                if cov.len() <= 80 {
                    for z in cov {
                        ensure(xy.compose(z) == x.compose(&y.compose(z)), || {
                            format!("{name}: associativity")
                        })?;
                    }
                }
            }
        }
        checks += 1;
        let l = GeometricLattice::from_covectors(&c);
        let sp = SalvettiPoset::new(&c);
        for &x in l.flats() {
            let loc = c.localization(x).map_err(s)?;
            for a in cov {
                for b in cov {
                    let lhs = loc.project(&a.compose(b));
                    ensure(lhs == loc.project(a).compose(&loc.project(b)), || {
                        format!("{name}: ρ at {a} {b}")
                    })?;
                }
            }
            let sloc = SalvettiLocalization::new(&c, &sp, x).map_err(s)?;
            for alpha in loc.section_bases(&c) {
                let iota = loc.section(&c, &alpha).map_err(s)?;
                for (j, &i) in iota.iter().enumerate() {
                    ensure(loc.rho[i] == j, || format!("{name}: ρ∘ι at {alpha}"))?;
                }
                let tilde = sloc.section(&c, &sp, &alpha).map_err(s)?;
                for (j, &i) in tilde.iter().enumerate() {
                    ensure(sloc.map[i] == j, || format!("{name}: ρ̃∘ι̃ at {alpha}"))?;
                }
            }
            if l.is_modular_flat(x).map_err(s)?.is_modular() {
                for &y in l.flats() {
                    let iso = l.brylawski_iso(x, y).map_err(s)?;
                    iso.verify()
                        .map_err(|e| format!("{name}: Brylawski {}: {e}", l.render(y)))?;
                }
            }
        }
    }
    let square = FinitePoset::from_covers(
        (0..8).map(|i| i.to_string()).collect(),
        &[
            (0, 4),
            (1, 4),
            (1, 5),
            (2, 5),
            (2, 6),
            (3, 6),
            (3, 7),
            (0, 7),
        ],
    )
    .map_err(s)?;
    let cyclic = Matching::new(
        &square,
        square.full_set(),
        vec![(0, 4), (1, 5), (2, 6), (3, 7)],
    )
    .map_err(s)?;
    let here = is_acyclic(&square, &cyclic).is_acyclic();
    let there = is_acyclic(&square.dual(), &cyclic.dual()).is_acyclic();
    ensure(!here && !there, || {
        "dual equivalence fails on the cyclic square".into()
    })?;
    Ok(format!("{checks} corpus members, all identities hold"))
}

fn main() -> ExitCode {
    let criteria: [Check; 9] = [
        ("axioms and corpus", axioms_and_corpus),
        ("worked example fidelity", example_fidelity),
        ("Betti numbers equal Whitney numbers", betti_oracle),
        ("quasi-fibration certificate", quasi_fibration),
        ("matching constructions", matchings),
        ("shellings", shelling),
        ("supersolvable extension", extension_algorithm),
        ("rank data", rank_data),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{t:.2?}]", i + 1),
            Err(w) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {w} [{t:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
