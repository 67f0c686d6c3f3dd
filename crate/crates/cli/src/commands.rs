use std::collections::BTreeMap;
use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use fixedbitset::FixedBitSet;
use ssom_core::extensions::{levi_enlargement, supersolvable_extension};
use ssom_core::homotopy::{
    graph_free_rank, h1_rank_check, homology, quasi_fibration_certify_with, salvetti_homology,
    semidirect_rank_sequence, subposet_homology, CertifyMode,
};
use ssom_core::io::corpus::corpus;
use ssom_core::io::format::{parse_complex, parse_matrix, parse_om, print_om};
use ssom_core::io::report::{Clause, Report};
use ssom_core::lattice::{GeometricLattice, ModularityVerdict};
use ssom_core::morse::{
    matching_convex_critical, matching_from_shelling, matching_salvetti_fiber,
    morse_reduction_certificate, Matching,
};
use ssom_core::oriented_matroid::{from_arrangement_with, CovectorSystem};
use ssom_core::par::Execution;
use ssom_core::poset::FinitePoset;
use ssom_core::salvetti::{parse_cell, FiberStratification, SalvettiLocalization, SalvettiPoset};
use ssom_core::shelling::{verify_shelling_in, ShellingVerdict};
use ssom_core::sign_vectors::{LabelSet, Sign, SignVector};
use ssom_core::topes::{convex_first_extension, dual_subcomplex, halfspace, reduced_face_poset};

use crate::{read_input, Cli, Command, Construction, Target};

pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl From<Report> for Output {
    fn from(r: Report) -> Output {
        Output {
            passed: r.passed(),
            text: r.to_string(),
        }
    }
}

fn om_output(c: &CovectorSystem) -> Output {
    Output {
        text: print_om(c),
        passed: true,
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let load = || -> Result<CovectorSystem> { Ok(parse_om(&read_input(&cli.input)?)?) };
    Ok(match &cli.command {
        Command::Corpus { name } => om_output(&corpus(name)?),
        Command::FromArrangement { matrix } => {
            let text = fs::read_to_string(matrix)
                .with_context(|| format!("reading {}", matrix.display()))?;
            om_output(&from_arrangement_with(&parse_matrix(&text)?, exec)?)
        }
        Command::Simplify => om_output(&load()?.simplify().system),
        Command::CheckAxioms => check_axioms(&load()?, exec).into(),
        Command::Lattice => lattice(&load()?).into(),
        Command::Modular { flat } => modular(&load()?, flat)?.into(),
        Command::Supersolvable => supersolvable(&load()?).into(),
        Command::Topes => topes(&load()?).into(),
        Command::Shelling { base, order, depth } => {
            shelling(&load()?, base, order.as_deref(), *depth, exec)?.into()
        }
        Command::Salvetti { list } => salvetti(&load()?, *list, exec)?.into(),
        Command::Localize { flat } => localize(&load()?, flat)?.into(),
        Command::Fiber { flat, cell } => fiber(&load()?, flat, cell)?.into(),
        Command::Stratify { tope, flat } => stratify(&load()?, flat, tope)?.into(),
        Command::Morse {
            construction,
            topes,
            base,
            flat,
            cell,
            tope,
        } => {
            let c = load()?;
            match construction {
                Construction::Shelling => morse_shelling(&c, base.as_deref(), topes.as_deref())?,
                Construction::Convex => morse_convex(
                    &c,
                    topes
                        .as_deref()
                        .ok_or_else(|| anyhow!("--topes is required"))?,
                )?,
                Construction::Fiber => morse_fiber(
                    &c,
                    flat.as_deref()
                        .ok_or_else(|| anyhow!("--flat is required"))?,
                    cell.as_deref()
                        .ok_or_else(|| anyhow!("--cell is required"))?,
                    tope.as_deref(),
                )?,
            }
            .into()
        }
        Command::Homology {
            target,
            flat,
            cell,
            file,
        } => match target {
            Target::ComplexFile => {
                let path = file.as_ref().ok_or_else(|| anyhow!("--file is required"))?;
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let h = homology(&parse_complex(&text)?)?;
                let mut r = Report::new("homology");
                r.field("target", "complex-file").field("homology", &h);
                r.into()
            }
            Target::Salvetti => salvetti_homology_report(&load()?)?.into(),
            Target::Fiber => fiber_homology(
                &load()?,
                flat.as_deref()
                    .ok_or_else(|| anyhow!("--flat is required"))?,
                cell.as_deref()
                    .ok_or_else(|| anyhow!("--cell is required"))?,
            )?
            .into(),
        },
        Command::CertifyQf {
            flat,
            exhaustive,
            samples,
            seed,
        } => {
            let mode = if *exhaustive {
                CertifyMode::Exhaustive
            } else {
                CertifyMode::Sampled {
                    pairs: *samples,
                    seed: *seed,
                }
            };
            certify(&load()?, flat, mode, exec)?.into()
        }
        Command::Ranks => ranks(&load()?)?.into(),
        Command::ExtendLevi {
            flats,
            generic,
            label,
            output,
        } => extend_levi(
            &load()?,
            &flats[0],
            &flats[1],
            *generic,
            label,
            output.as_deref(),
        )?
        .into(),
        Command::ExtendSs { output } => extend_ss(&load()?, output.as_deref())?.into(),
    })
}

fn parse_flat(c: &CovectorSystem, text: &str) -> Result<LabelSet> {
    Ok(c.parse_set(text)?)
}

fn parse_tope(c: &CovectorSystem, text: &str) -> Result<SignVector> {
    let t = c.parse_vector(text)?;
    if !c.is_tope(&t) {
        bail!("{t} is not a tope");
    }
    Ok(t)
}

fn parse_topes(c: &CovectorSystem, text: &str) -> Result<Vec<SignVector>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|t| parse_tope(c, t))
        .collect()
}

fn ids(p: &FinitePoset, set: impl IntoIterator<Item = usize>) -> String {
    set.into_iter()
        .map(|i| p.id(i).to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn check_axioms(c: &CovectorSystem, exec: Execution) -> Report {
    let mut r = Report::new("check-axioms");
    r.field("ground", c.labels().join(" "))
        .field("covectors", c.len());
    for cl in c.check_axioms_with(exec).clauses {
        let name = format!("axiom ({}) {}", cl.axiom, cl.name);
        r.clause(match cl.witness {
            None => Clause::pass(name),
            Some(w) => Clause::fail(name, w),
        });
    }
    r
}

fn lattice(c: &CovectorSystem) -> Report {
    let l = GeometricLattice::from_covectors(c);
    let mut r = Report::new("lattice");
    r.field("rank", l.rank()).field("flats", l.len());
    let w: Vec<String> = l.whitney().iter().map(|x| x.to_string()).collect();
    r.field("whitney", format!("({})", w.join(",")));
    for k in 0..=l.rank() {
        let listing: Vec<String> = l
            .flats_of_rank(k)
            .iter()
            .map(|&f| format!("{} mu={}", l.render(f), l.mobius(f).expect("flat")))
            .collect();
        r.field(format!("rank {k}"), listing.join("\n"));
    }
    r
}

fn modular(c: &CovectorSystem, flat: &str) -> Result<Report> {
    let l = GeometricLattice::from_covectors(c);
    let x = parse_flat(c, flat)?;
    let mut r = Report::new("modular");
    r.field("flat", l.render(x));
    let clause = match l.is_modular_flat(x)? {
        ModularityVerdict::Modular => Clause::pass("modular"),
        ModularityVerdict::NotModular { z, y } => Clause::fail(
            "modular",
            format!(
                "Z = {}, Y = {}: Z ∨ (X ∧ Y) = {} but (Z ∨ X) ∧ Y = {}",
                l.render(z),
                l.render(y),
                l.render(l.join(z, x.intersection(y))),
                l.render(l.join(z, x).intersection(y))
            ),
        ),
    };
    r.clause(clause);
    Ok(r)
}

fn supersolvable(c: &CovectorSystem) -> Report {
    let l = GeometricLattice::from_covectors(c);
    let mut r = Report::new("supersolvable");
    match l.is_supersolvable() {
        Some(chain) => {
            r.field("chain", chain.render(&l));
            r.clause(Clause::check(
                "supersolvable",
                chain.verify(&l).is_ok(),
                || "chain fails verification".into(),
            ));
        }
        None => {
            r.clause(Clause::fail(
                "supersolvable",
                "no maximal chain of modular flats",
            ));
        }
    }
    r
}

fn topes(c: &CovectorSystem) -> Report {
    let t = c.topes();
    let mut r = Report::new("topes");
    r.field("count", t.len());
    r.field(
        "topes",
        t.iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join("\n"),
    );
    r
}

fn shelling(
    c: &CovectorSystem,
    base: &str,
    order: Option<&str>,
    depth: Option<usize>,
    exec: Execution,
) -> Result<Report> {
    let b = parse_tope(c, base)?;
    let order = match order {
        Some(text) => parse_topes(c, text)?,
        None => ssom_core::topes::shelling_order_from_extension(c, b)?,
    };
    let face = c.face_poset_with(exec);
    let reduced = reduced_face_poset(c, &face);
    let local: Vec<usize> = order
        .iter()
        .map(|t| {
            reduced
                .local_index(c.index_of(t).expect("tope"))
                .expect("nonzero")
        })
        .collect();
    let depth = depth.unwrap_or(c.rank());
    let verdict = verify_shelling_in(
        &reduced.poset,
        &reduced.poset.full_set(),
        &local,
        depth,
        exec,
    )?;
    let mut r = Report::new("shelling");
    r.field("base", b).field("depth", depth);
    r.field(
        "order",
        order
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join("\n"),
    );
    r.clause(match verdict {
        ShellingVerdict::Valid => Clause::pass("shelling"),
        ShellingVerdict::Invalid { position, reason } => {
            Clause::fail("shelling", format!("position {position}: {reason}"))
        }
    });
    Ok(r)
}

fn salvetti(c: &CovectorSystem, list: bool, exec: Execution) -> Result<Report> {
    let s = SalvettiPoset::new_with(c, exec);
    let mut r = Report::new("salvetti");
    r.field("cells", s.len()).field("dimension", s.rank);
    let mut f = vec![0usize; s.rank + 1];
    for i in 0..s.len() {
        f[s.dim(i)] += 1;
    }
    let f: Vec<String> = f.iter().map(|x| x.to_string()).collect();
    r.field("f-vector", format!("({})", f.join(",")));
    if list {
        r.field("cell list", ids(&s.poset, 0..s.len()));
    }
    r.clause(match s.check_structure() {
        Ok(()) => Clause::pass("maximal (0,T), minimal (T,T), graded"),
        Err(e) => Clause::fail("maximal (0,T), minimal (T,T), graded", e.to_string()),
    });
    let bad = c.topes().into_iter().find_map(|t| {
        s.principal_ideal_iso(c, &t)
            .err()
            .map(|e| format!("{t}: {e}"))
    });
    r.clause(match bad {
        None => Clause::pass("S≤(0,T) ≅ L^∨ for every tope"),
        Some(w) => Clause::fail("S≤(0,T) ≅ L^∨ for every tope", w),
    });
    Ok(r)
}

fn localize(c: &CovectorSystem, flat: &str) -> Result<Report> {
    let x = parse_flat(c, flat)?;
    let s = SalvettiPoset::new(c);
    let loc = SalvettiLocalization::new(c, &s, x)?;
    let sys = &loc.localization.system;
    let mut r = Report::new("localize");
    r.field("flat", c.render_set(x))
        .field("local covectors", sys.len())
        .field("local topes", sys.topes().len())
        .field("local salvetti cells", loc.local.len());
    let bases = loc.localization.section_bases(c);
    r.field(
        "section bases",
        bases
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    let mut composition = None;
    'outer: for a in c.covectors() {
        for b in c.covectors() {
            let p = &loc.localization;
            if p.project(&a.compose(b)) != p.project(a).compose(&p.project(b)) {
                composition = Some(format!("{a}, {b}"));
                break 'outer;
            }
        }
    }
    r.clause(match composition {
        None => Clause::pass("ρ_X preserves composition"),
        Some(w) => Clause::fail("ρ_X preserves composition", w),
    });
    for alpha in &bases {
        let res = loc
            .localization
            .section(c, alpha)
            .and_then(|_| loc.section(c, &s, alpha));
        r.clause(match res {
            Ok(_) => Clause::pass(format!("ρ∘ι = id and ρ̃∘ι̃ = id for α = {alpha}")),
            Err(e) => Clause::fail(
                format!("ρ∘ι = id and ρ̃∘ι̃ = id for α = {alpha}"),
                e.to_string(),
            ),
        });
    }
    r.clause(match loc.check_commuting_square(c, &s) {
        Ok(()) => Clause::pass("ρ̃_X on S≤(0,T) agrees with ρ_X"),
        Err(e) => Clause::fail("ρ̃_X on S≤(0,T) agrees with ρ_X", e.to_string()),
    });
    Ok(r)
}

fn local_cell(loc: &SalvettiLocalization, text: &str) -> Result<usize> {
    let (sigma, t) = parse_cell(text)?;
    loc.local
        .index_of(&sigma, &t)
        .ok_or_else(|| anyhow!("{text} is not a cell of S_X"))
}

fn fiber(c: &CovectorSystem, flat: &str, cell: &str) -> Result<Report> {
    let x = parse_flat(c, flat)?;
    let s = SalvettiPoset::new(c);
    let loc = SalvettiLocalization::new(c, &s, x)?;
    let a = local_cell(&loc, cell)?;
    let set = loc.fiber_set(&s, a);
    let mut r = Report::new("fiber");
    r.field("flat", c.render_set(x))
        .field("cell", loc.local.id(a))
        .field("size", set.count_ones(..));
    r.field("cells", ids(&s.poset, set.ones()));
    r.clause(Clause::check(
        "fiber is an order ideal",
        s.poset.is_order_ideal(&set),
        || "not down-closed".into(),
    ));
    Ok(r)
}

fn stratification(
    c: &CovectorSystem,
    flat: &str,
    tope: &str,
) -> Result<(
    GeometricLattice,
    SalvettiPoset,
    SalvettiLocalization,
    SignVector,
)> {
    let x = parse_flat(c, flat)?;
    let l = GeometricLattice::from_covectors(c);
    let s = SalvettiPoset::new(c);
    let loc = SalvettiLocalization::new(c, &s, x)?;
    let b = loc.localization.system.parse_vector(tope)?;
    Ok((l, s, loc, b))
}

fn stratify(c: &CovectorSystem, flat: &str, tope: &str) -> Result<Report> {
    let (l, s, loc, b) = stratification(c, flat, tope)?;
    let mut r = Report::new("stratify");
    r.field("flat", c.render_set(loc.flat())).field("base", b);
    match FiberStratification::new(c, &l, &s, &loc, &b) {
        Ok(f) => {
            r.field("alpha", f.alpha);
            r.field(
                "tope string",
                f.tope_string
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(" < "),
            );
            for (i, &e) in f.separators.iter().enumerate() {
                r.field(
                    format!("S(T{},T{})", i, i + 1),
                    format!("{{{}}}", c.labels()[e]),
                );
            }
            let ends = f.tope_string[0].separator(f.tope_string.last().expect("nonempty"));
            r.field(format!("S(T0,T{})", f.len() - 1), c.render_set(ends));
            let sizes: Vec<String> = f
                .strata
                .iter()
                .map(|s| s.count_ones(..).to_string())
                .collect();
            r.field("strata sizes", sizes.join(" "));
            r.clause(Clause::pass("fiber is the disjoint union of the strata"));
            r.clause(Clause::pass("N_i ≅ (L^{e_i})^∨ for i ≥ 1"));
        }
        Err(e) => {
            r.clause(Clause::fail("stratification", e.to_string()));
        }
    }
    Ok(r)
}

fn matching_report(
    title: &str,
    host: &FinitePoset,
    sigma: &FixedBitSet,
    gamma: &FixedBitSet,
    m: &Matching,
) -> Report {
    let cert = morse_reduction_certificate(host, sigma, gamma, m);
    let mut r = Report::new(title);
    r.field("cells", sigma.count_ones(..))
        .field("pairs", m.len());
    r.field("critical", ids(host, m.critical_cells().ones()));
    r.field("matching", m.render(host));
    r.clauses(cert.clauses);
    r
}

fn morse_shelling(c: &CovectorSystem, base: Option<&str>, topes: Option<&str>) -> Result<Report> {
    let b = parse_tope(c, base.ok_or_else(|| anyhow!("--base is required"))?)?;
    let q = match topes {
        Some(t) => parse_topes(c, t)?,
        None => {
            let e = (0..c.ground_len())
                .find(|&e| b.get(e) != Sign::Zero)
                .ok_or_else(|| anyhow!("empty tope"))?;
            halfspace(c, e, b.get(e))?
        }
    };
    let ext = convex_first_extension(c, b, &q)?;
    let face = c.face_poset();
    let reduced = reduced_face_poset(c, &face);
    let rp = &reduced.poset;
    let order: Vec<usize> = ext[..q.len()]
        .iter()
        .map(|t| {
            reduced
                .local_index(c.index_of(t).expect("tope"))
                .expect("nonzero")
        })
        .collect();
    let mut cells = rp.empty_set();
    for &t in &order {
        cells.union_with(rp.below(t));
    }
    let v = rp
        .below(order[0])
        .ones()
        .find(|&x| rp.height(x) == 0)
        .ok_or_else(|| anyhow!("tope without vertices"))?;
    let m = matching_from_shelling(rp, &cells, &order, v)?;
    let mut gamma = rp.empty_set();
    gamma.insert(v);
    Ok(matching_report("morse shelling", rp, &cells, &gamma, &m))
}

fn morse_convex(c: &CovectorSystem, topes: &str) -> Result<Report> {
    let q = parse_topes(c, topes)?;
    let m = matching_convex_critical(c, &q)?;
    let dual = c.face_poset().dual();
    let mut gamma = dual.empty_set();
    for s in dual_subcomplex(c, &q)? {
        gamma.insert(c.index_of(&s).expect("covector"));
    }
    Ok(matching_report(
        "morse convex",
        &dual,
        &dual.full_set(),
        &gamma,
        &m,
    ))
}

fn morse_fiber(c: &CovectorSystem, flat: &str, cell: &str, tope: Option<&str>) -> Result<Report> {
    let x = parse_flat(c, flat)?;
    let l = GeometricLattice::from_covectors(c);
    let s = SalvettiPoset::new(c);
    let loc = SalvettiLocalization::new(c, &s, x)?;
    let a = local_cell(&loc, cell)?;
    let b = match tope {
        Some(t) => loc.localization.system.parse_vector(t)?,
        None => {
            let top = *loc
                .local
                .maximal_cells()
                .iter()
                .find(|&&t| loc.local.poset.leq(a, t))
                .ok_or_else(|| anyhow!("no maximal cell above {cell}"))?;
            loc.local.cells[top].1
        }
    };
    let fm = matching_salvetti_fiber(c, &l, &s, &loc, a, &b)?;
    let gamma = loc.fiber_set(&s, a);
    let mut r = matching_report(
        "morse fiber",
        &s.poset,
        &fm.stratification.fiber,
        &gamma,
        &fm.matching,
    );
    r.fields
        .insert(0, ("ambient".into(), loc.local.id(fm.ambient).to_string()));
    Ok(r)
}

fn salvetti_homology_report(c: &CovectorSystem) -> Result<Report> {
    let h = salvetti_homology(c)?;
    let w = GeometricLattice::from_covectors(c).whitney();
    let w: Vec<usize> = w.iter().map(|&x| x as usize).collect();
    let mut r = Report::new("homology");
    r.field("target", "salvetti").field("homology", &h);
    r.clause(Clause::check("torsion free", h.is_torsion_free(), || {
        h.to_string()
    }));
    r.clause(Clause::check(
        "Betti numbers equal unsigned Whitney numbers",
        h.betti == w,
        || format!("{:?} vs {:?}", h.betti, w),
    ));
    Ok(r)
}

fn fiber_homology(c: &CovectorSystem, flat: &str, cell: &str) -> Result<Report> {
    let x = parse_flat(c, flat)?;
    let s = SalvettiPoset::new(c);
    let loc = SalvettiLocalization::new(c, &s, x)?;
    let a = local_cell(&loc, cell)?;
    let set = loc.fiber_set(&s, a);
    let h = subposet_homology(&s.poset, &set)?;
    let mut r = Report::new("homology");
    r.field("target", "fiber")
        .field("flat", c.render_set(x))
        .field("cell", loc.local.id(a));
    r.field("cells", set.count_ones(..)).field("homology", &h);
    if loc.local.minimal_cells().contains(&a) {
        match graph_free_rank(&s.poset, &set) {
            Ok(g) => r.field("graph free rank", g),
            Err(e) => r.field("graph free rank", e),
        };
    }
    Ok(r)
}

fn certify(c: &CovectorSystem, flat: &str, mode: CertifyMode, exec: Execution) -> Result<Report> {
    let x = parse_flat(c, flat)?;
    let cert = quasi_fibration_certify_with(c, x, mode, exec)?;
    let s = SalvettiPoset::new(c);
    let loc = SalvettiLocalization::new(c, &s, x)?;
    let id = |i: usize| loc.local.id(i).to_string();
    let mut r = Report::new("certify-qf");
    r.field("flat", c.render_set(x))
        .field(
            "mode",
            if cert.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            },
        )
        .field(
            "pairs",
            format!("{} of {}", cert.pairs.len(), cert.total_pairs),
        )
        .field("matchings", cert.retractions.len());
    let hs: Vec<String> = cert
        .fiber_homology
        .iter()
        .map(|(&a, h)| format!("{} {h}", id(a)))
        .collect();
    r.field("fiber homology", hs.join("\n"));
    let gs: Vec<String> = cert
        .graph_ranks
        .iter()
        .map(|(&m, g)| format!("{} {g}", id(m)))
        .collect();
    r.field("graph free ranks", gs.join("\n"));
    let mut grouped: BTreeMap<String, (usize, Option<String>)> = BTreeMap::new();
    let mut names = Vec::new();
    for p in &cert.pairs {
        for cl in &p.clauses {
            let entry = grouped.entry(cl.name.clone()).or_insert_with(|| {
                names.push(cl.name.clone());
                (0, None)
            });
            if !cl.passed {
                entry.0 += 1;
                entry.1.get_or_insert_with(|| {
                    format!(
                        "a = {}, b = {}: {}",
                        id(p.a),
                        id(p.b),
                        cl.witness.clone().unwrap_or_default()
                    )
                });
            }
        }
    }
    for name in names {
        let (fails, witness) = &grouped[&name];
        let label = format!("{name} for all pairs");
        r.clause(match witness {
            None => Clause::pass(label),
            Some(w) => Clause::fail(label, format!("{fails} failing, first {w}")),
        });
    }
    Ok(r)
}

fn ranks(c: &CovectorSystem) -> Result<Report> {
    let seq = semidirect_rank_sequence(c)?;
    let h = salvetti_homology(c)?;
    let b1 = h.betti.get(1).copied().unwrap_or(0);
    let sum: usize = seq.iter().sum();
    let mut r = Report::new("ranks");
    let shown: Vec<String> = seq.iter().map(|x| x.to_string()).collect();
    r.field("sequence", format!("({})", shown.join(",")))
        .field("sum", sum)
        .field("b1", b1);
    r.clause(Clause::check(
        "sum equals |E|",
        sum == c.ground_len(),
        || format!("{sum} vs {}", c.ground_len()),
    ));
    r.clause(Clause::check("sum equals b1", sum == b1, || {
        format!("{sum} vs {b1}")
    }));
    if c.is_simple() {
        let ok = h1_rank_check(c)?;
        r.clause(Clause::check("b1 equals |E|", ok, || {
            format!("{b1} vs {}", c.ground_len())
        }));
    }
    Ok(r)
}

fn write_output(c: &CovectorSystem, path: Option<&std::path::Path>) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, print_om(c)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn extend_levi(
    c: &CovectorSystem,
    x1: &str,
    x2: &str,
    generic: bool,
    label: &str,
    output: Option<&std::path::Path>,
) -> Result<Report> {
    let (a, b) = (parse_flat(c, x1)?, parse_flat(c, x2)?);
    let ext = levi_enlargement(c, a, b, generic, label)?;
    let e = &ext.extended;
    let g = ext.element();
    let l = GeometricLattice::from_covectors(e);
    let mut r = Report::new("extend-levi");
    r.field("element", label).field(
        "through",
        format!("{} {}", c.render_set(a), c.render_set(b)),
    );
    let (la, lb) = (ext.lift(a).expect("flat"), ext.lift(b).expect("flat"));
    r.field(
        "lifted",
        format!("{} {}", e.render_set(la), e.render_set(lb)),
    );
    r.field("covectors", e.len())
        .field("topes", e.topes().len());
    let w: Vec<String> = l.whitney().iter().map(|x| x.to_string()).collect();
    r.field("whitney", format!("({})", w.join(",")));
    r.clause(Clause::check("axioms", e.check_axioms().passed(), || {
        "axiom failure".into()
    }));
    let back = e.restriction(LabelSet::full(c.ground_len()))?;
    r.clause(Clause::check(
        "restriction equals input",
        back.covectors() == c.covectors(),
        || "differs".into(),
    ));
    r.clause(Clause::check(
        "new element on both lifted flats",
        la.contains(g) && lb.contains(g),
        || format!("{} {}", e.render_set(la), e.render_set(lb)),
    ));
    if generic {
        let other = ext.flat_lift.iter().find(|(x, lx)| {
            *x != a
                && *x != b
                && lx.contains(g)
                && GeometricLattice::from_covectors(c).rank_of(*x).ok() == Some(2)
        });
        r.clause(Clause::check(
            "no other rank-2 flat contains the new element",
            other.is_none(),
            || e.render_set(other.expect("witness").1),
        ));
    }
    write_output(e, output)?;
    Ok(r)
}

fn extend_ss(c: &CovectorSystem, output: Option<&std::path::Path>) -> Result<Report> {
    let res = supersolvable_extension(c)?;
    let e = &res.result;
    let l = GeometricLattice::from_covectors(e);
    let mut r = Report::new("extend-ss");
    r.field("pivot", c.render_set(res.pivot))
        .field("steps", res.steps.len());
    let lines: Vec<String> = res
        .steps
        .iter()
        .map(|s| {
            let host = &s.result.extended;
            format!(
                "{} through {} and {}: disjoint {} -> {}{}",
                s.label,
                host.render_set(s.through.0),
                host.render_set(s.through.1),
                s.disjoint_before,
                s.disjoint_after,
                if s.generic { " generic" } else { "" }
            )
        })
        .collect();
    if !lines.is_empty() {
        r.field("chain of extensions", lines.join("\n"));
    }
    r.field("mchain", res.chain.render(&l));
    r.clause(Clause::check(
        "disjoint-flat count strictly decreases",
        res.steps
            .iter()
            .all(|s| s.disjoint_after < s.disjoint_before),
        || "non-decreasing step".into(),
    ));
    r.clause(Clause::check(
        "result is supersolvable",
        res.chain.verify(&l).is_ok(),
        || "chain fails".into(),
    ));
    let back = e.restriction(LabelSet::full(c.ground_len()))?;
    r.clause(Clause::check(
        "restriction equals input",
        back.covectors() == c.covectors(),
        || "differs".into(),
    ));
    write_output(e, output)?;
    Ok(r)
}
