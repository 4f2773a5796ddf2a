//! Acceptance suite: one line per criterion, exit status 1 if any fails.

mod profiles;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forcinglab::bnames::{bool_sim_stages, limit_inequality_check, verify_power_axiom, BoolEps, SubsetReading};
use forcinglab::corpus;
use forcinglab::extensional::{
    check_e, check_simulation, greatest_bisimulation, is_well_founded, membership_from, sim_stages, successor,
    Partition,
};
use forcinglab::filters::{no_filter_spans_complements, rasiowa_sikorski, DenseFamily, Filter};
use forcinglab::fixtures;
use forcinglab::language::{Formula, Signature};
use forcinglab::ralgebra::DEFAULT_EXHAUSTION_CAP as CAP;
use forcinglab::semantics::{
    atomic_dense_family, forces, forces_semantic, forces_semantic_relative, model_of, required_dense_family, verify_quantifier_lemma,
    verify_truth_lemma, AtomicValuation, evaluate,
};
use forcinglab::{PointSet, Poset, RegularAlgebra};

use oracle::{Order, Relation};
use profiles::{Layers, Space};

const SEED: u64 = 20_240_917;

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            summary: String::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 5 {
            eprintln!("    {msg}");
        }
        self.failures.push(msg);
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }
}

fn corpus_posets() -> Vec<Poset> {
    corpus::poset_corpus(4, SEED, 200, 7).expect("corpus")
}

fn describe(p: &Poset) -> String {
    let covers: Vec<String> = p
        .covers()
        .iter()
        .map(|&(a, b)| format!("{}<{}", p.name(a), p.name(b)))
        .collect();
    format!("[{}] {}", p.elements().join(" "), covers.join(" "))
}

fn c1_byrne(posets: &[Poset]) -> Outcome {
    let mut out = Outcome::new();
    for p in posets {
        let alg = RegularAlgebra::build(p.clone()).expect("small poset");
        let universe: Vec<PointSet> = alg.universe().map(|a| a.members()).collect();
        out.check(universe == Order::of(p).regular_sets(), || {
            format!("universe differs from brute force on {}", describe(p))
        });
        out.check(alg.byrne_check().is_pass(), || format!("byrne_check fails on {}", describe(p)));
    }
    out.summary = format!("{} posets", posets.len());
    out
}

fn c2_density(posets: &[Poset]) -> Outcome {
    let mut out = Outcome::new();
    let mut sets = 0usize;
    for p in posets {
        let ord = Order::of(p);
        for x in ord.subsets() {
            sets += 1;
            let dense = p.is_dense(x).unwrap();
            let pc = p.pseudo_complement(x).unwrap();
            out.check(dense == ord.is_dense(x), || format!("is_dense({}) wrong on {}", p.render(x), describe(p)));
            out.check(dense == (x == (x | pc)), || {
                format!("dense iff D = D ∪ D' fails for {} on {}", p.render(x), describe(p))
            });
            out.check(p.is_dense(x | pc).unwrap(), || {
                format!("X ∪ X' not dense for {} on {}", p.render(x), describe(p))
            });
        }
    }
    out.summary = format!("{} posets, {sets} subsets", posets.len());
    out
}

fn c3_closure(posets: &[Poset]) -> Outcome {
    let mut out = Outcome::new();
    let mut pairs = 0usize;
    for p in posets {
        let ord = Order::of(p);
        let downs: Vec<PointSet> = ord.subsets().filter(|&x| ord.is_down_closed(x)).collect();
        let regs: Vec<PointSet> = downs.iter().map(|&x| p.regularize(x).unwrap()).collect();
        for (i, &x) in downs.iter().enumerate() {
            let r = regs[i];
            out.check(r == ord.reg(x), || format!("regularize({}) wrong on {}", p.render(x), describe(p)));
            out.check(x.is_subset(r), || format!("X ⊄ X'' for {} on {}", p.render(x), describe(p)));
            out.check(p.regularize(r).unwrap() == r, || {
                format!("X'' not idempotent for {} on {}", p.render(x), describe(p))
            });
            for (j, &y) in downs.iter().enumerate() {
                pairs += 1;
                if x.is_subset(y) {
                    out.check(r.is_subset(regs[j]), || {
                        format!("monotonicity fails for {} ⊆ {} on {}", p.render(x), p.render(y), describe(p))
                    });
                }
            }
        }
    }
    out.summary = format!("{} posets, {pairs} down-set pairs", posets.len());
    out
}

fn c4_complements(posets: &[Poset]) -> Outcome {
    let mut out = Outcome::new();
    for p in posets {
        let ord = Order::of(p);
        let verdict = no_filter_spans_complements(p, CAP).unwrap();
        // brute force over down-closed X and all filters
        let expected = ord.subsets().filter(|&x| ord.is_down_closed(x)).all(|x| {
            ord.filters()
                .iter()
                .all(|&g| !(g.intersects(x) && g.intersects(ord.pc(x))))
        });
        out.check(verdict.is_pass() && expected, || {
            format!("a filter meets a down-set and its complement on {}", describe(p))
        });
    }
    out.summary = format!("{} posets, down-closed X", posets.len());
    out
}

fn signature(names: usize) -> Signature {
    let names: Vec<String> = (0..names).map(|i| format!("n{i}")).collect();
    Signature::new([("R".to_string(), 1), ("S".to_string(), 2)], &names).expect("valid signature")
}

fn random_valuation(alg: &Arc<RegularAlgebra>, sig: &Signature, rng: &mut ChaCha8Rng) -> AtomicValuation {
    let size = alg.len();
    AtomicValuation::from_fn(sig.clone(), alg.clone(), |_| alg.nth(rng.random_range(0..size)).expect("in range"))
        .expect("valid valuation")
}

/// Union closure of `singles`, or `None` past `limit` families.
fn union_closure(singles: &BTreeSet<u128>, limit: usize) -> Option<BTreeSet<u128>> {
    let mut closure: BTreeSet<u128> = BTreeSet::new();
    for &f in singles {
        let grown: Vec<u128> = closure.iter().map(|&g| g | f).collect();
        closure.insert(f);
        closure.extend(grown);
        if closure.len() > limit {
            return None;
        }
    }
    Some(closure)
}

fn c5_rasiowa_sikorski(posets: &[Poset]) -> Outcome {
    const CLOSURE_LIMIT: usize = 1 << 16;
    let mut out = Outcome::new();
    let sig = signature(1);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let (mut runs, mut families) = (0usize, 0usize);
    for p in posets {
        let alg = Arc::new(RegularAlgebra::build(p.clone()).expect("small poset"));
        let ord = Order::of(p);
        for _ in 0..2 {
            let v = random_valuation(&alg, &sig, &mut rng);
            let space = Space::new(&v);
            let layers = Layers::build(&space, 2, |_| 2, |_, _| {});
            let singles: BTreeSet<u128> = layers.entries().map(|e| e.profile.family).collect();
            let Some(closure) = union_closure(&singles, CLOSURE_LIMIT) else {
                out.fail(format!("family union closure exceeds {CLOSURE_LIMIT} on {}", describe(p)));
                continue;
            };
            for fam in closure {
                families += 1;
                let sets = space.dense_sets_of(fam);
                let family = DenseFamily::canonical(p, sets.clone()).expect("dense sets");
                for point in 0..p.len() {
                    runs += 1;
                    let g = rasiowa_sikorski(p, point, &family).expect("construction");
                    let m = g.members();
                    out.check(
                        ord.is_filter(m) && m.contains(point) && sets.iter().all(|d| d.intersects(m)),
                        || format!("generic filter {} through {} fails on {}", p.render(m), p.name(point), describe(p)),
                    );
                }
            }
        }
    }
    out.summary = format!("{} posets, {families} families, {runs} constructions", posets.len());
    out
}

/// Criteria 6 and 7 share one enumeration.
fn c6_c7_lemmas() -> (Outcome, Outcome) {
    let mut forcing = Outcome::new();
    let mut lemmas = Outcome::new();
    let (mut sentences, mut points, mut quantified, mut distinct_families, mut models) = (0usize, 0, 0, 0, 0);
    let configs = [("tree3", fixtures::tree3()), ("anti2", fixtures::anti2()), ("tree7", fixtures::tree7())];
    let sig = signature(3);
    for (label, poset) in configs {
        let alg = Arc::new(RegularAlgebra::build(poset.clone()).expect("small poset"));
        let all_dense = DenseFamily::all_dense(&poset, CAP).expect("small poset");
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
        for run in 0..50 {
            let v = random_valuation(&alg, &sig, &mut rng);
            let space = Space::new(&v);
            let atoms_generic = space.generic_of_sets(atomic_dense_family(&v).unwrap().sets());
            // The quantifier lemma at one filter depends only on the kind and
            // the child's values, so per pair only the sentences with a
            // maximal set of generic filters need checking.
            let mut by_child: BTreeMap<(bool, Vec<PointSet>), Vec<(u64, Formula)>> = BTreeMap::new();
            let layers = Layers::build(
                &space,
                3,
                |d| 3 - d,
                |child, q| {
                    if q.profile.vars == 0 {
                        let exists = matches!(q.formula, Formula::Exists(..));
                        let slot = by_child.entry((exists, child.profile.values.clone())).or_default();
                        if !slot.iter().any(|&(m, _)| q.profile.generic & !m == 0) {
                            slot.retain(|&(m, _)| m & !q.profile.generic != 0);
                            slot.push((q.profile.generic, q.formula.clone()));
                        }
                    }
                },
            );
            let ctx = |f: &Formula| format!("{label} valuation {run}: `{f}`");
            for e in layers.sentences() {
                let f = &e.formula;
                sentences += 1;
                forcing.check(f.depth() <= 3, || format!("{} has depth {}", ctx(f), f.depth()));
                let value = evaluate(&v, f).unwrap().members();
                forcing.check(value == e.profile.values[0], || format!("{} evaluates differently", ctx(f)));
                let req = required_dense_family(&v, [f]).unwrap();
                let expected: BTreeSet<PointSet> = space.dense_sets_of(e.profile.family).into_iter().collect();
                forcing.check(req.sets().iter().copied().collect::<BTreeSet<_>>() == expected, || {
                    format!("{} requires different dense sets", ctx(f))
                });
                let generic = e.profile.generic;
                let differs = req.sets().len() != all_dense.sets().len();
                if differs {
                    distinct_families += 1;
                }
                for p in 0..poset.len() {
                    points += 1;
                    let semantic = forces_semantic(&v, p, f).unwrap();
                    let definable = forces(&v, p, f).unwrap();
                    let brute = (0..space.filters.len())
                        .filter(|&i| generic >> i & 1 == 1 && space.filters[i].contains(p))
                        .all(|i| value.intersects(space.filters[i]));
                    forcing.check(semantic == definable && semantic == brute, || {
                        format!(
                            "{} at {}: semantic {semantic}, membership {definable}, brute force {brute}",
                            ctx(f),
                            poset.name(p)
                        )
                    });
                    let relative = forces_semantic_relative(&v, p, f, &all_dense).unwrap();
                    lemmas.check(relative == semantic, || {
                        format!("{} at {}: forcing depends on the dense family", ctx(f), poset.name(p))
                    });
                }
                // M[G] is defined once G decides every atom
                for (i, &g) in space.filters.iter().enumerate() {
                    if (generic & atoms_generic) >> i & 1 == 0 {
                        continue;
                    }
                    models += 1;
                    let filter = Filter::new(&poset, g).unwrap();
                    let model = model_of(&v, &filter).unwrap();
                    let classical = e.profile.classical[0] >> i & 1 == 1;
                    lemmas.check(model.satisfies(f).unwrap() == classical, || {
                        format!("{} in M[{}]: classical satisfaction differs", ctx(f), poset.render(g))
                    });
                }
                lemmas.check(verify_truth_lemma(&v, std::slice::from_ref(f)).unwrap().is_pass(), || {
                    format!("{}: truth lemma fails", ctx(f))
                });
                lemmas.check(verify_quantifier_lemma(&v, std::slice::from_ref(f)).unwrap().is_pass(), || {
                    format!("{}: quantifier lemma fails", ctx(f))
                });
            }
            let quantified_sentences: Vec<Formula> =
                by_child.into_values().flatten().map(|(_, f)| f).collect();
            for f in &quantified_sentences {
                quantified += 1;
                lemmas.check(verify_quantifier_lemma(&v, std::slice::from_ref(f)).unwrap().is_pass(), || {
                    format!("{}: quantifier lemma fails", ctx(f))
                });
            }
        }
    }
    forcing.summary = format!(
        "{sentences} sentence profiles of depth ≤ 3 over R/1, S/2, 3 names; {points} point checks; 150 valuations"
    );
    lemmas.summary = format!(
        "truth and quantifier lemmas on {sentences} profiles plus {quantified} quantifications; \
         {models} generic models checked classically; D-independence against all dense sets ({distinct_families} with a distinct family)"
    );
    (forcing, lemmas)
}

fn relation_of(p: &Partition, n: usize) -> Relation {
    (0..n).map(|x| (0..n).map(|y| p.related(x, y)).collect()).collect()
}

fn c8_collapse() -> Outcome {
    let mut out = Outcome::new();
    let equivalences = oracle::equivalences(4);
    assert_eq!(equivalences.len(), 15);
    let mut count = 0usize;
    for e in corpus::eps_structures(4).unwrap() {
        count += 1;
        let mem = oracle::members(&e);
        let staged = sim_stages(&e);
        let rels: Vec<Relation> = staged.stages().iter().map(|s| relation_of(s, 4)).collect();
        let label = || e.render_pairs();
        out.check(rels[0] == oracle::identity(4), || format!("stage 0 not discrete on {}", label()));
        for k in 1..rels.len() {
            out.check(oracle::subset(&rels[k - 1], &rels[k]), || {
                format!("stages not monotone at {k} on {}", label())
            });
            out.check(rels[k] == oracle::successor(&mem, &rels[k - 1]), || {
                format!("stage {k} is not the successor of stage {} on {}", k - 1, label())
            });
        }
        let limit = rels.last().unwrap();
        out.check(oracle::successor(&mem, limit) == *limit, || format!("limit not a fixpoint on {}", label()));
        out.check(successor(&e, staged.limit()) == *staged.limit(), || {
            format!("library successor moves the limit on {}", label())
        });
        for r in &equivalences {
            if oracle::subset(&oracle::successor(&mem, r), r) {
                out.check(oracle::subset(limit, r), || {
                    format!("limit not below a closed equivalence on {}", label())
                });
            }
        }
        let derived = membership_from(&e);
        out.check(oracle::members(&derived) == oracle::derived_membership(&mem, limit), || {
            format!("derived membership differs on {}", label())
        });
        out.check(check_e(&e).is_pass(), || format!("(E) fails on {}", label()));
        out.check(check_simulation(&e).is_pass(), || format!("simulation fails on {}", label()));
        let wf_eps = oracle::well_founded(&mem);
        let wf_in = oracle::well_founded(&oracle::members(&derived));
        out.check(wf_eps == wf_in && is_well_founded(&e) == wf_eps && is_well_founded(&derived) == wf_in, || {
            format!("well-foundedness not preserved on {}", label())
        });
    }
    out.summary = format!("{count} structures on 4 nodes, 15 equivalences each");
    out
}

fn c9_quine_atoms() -> Outcome {
    let mut out = Outcome::new();
    let e = fixtures::eq();
    let least = sim_stages(&e).limit().blocks().len();
    let greatest = greatest_bisimulation(&e).blocks().len();
    out.check(least == 2 && greatest == 1, || format!("least {least} blocks, greatest {greatest}"));
    out.summary = format!("least fixpoint {least} blocks, greatest bisimulation {greatest}");
    out
}

fn c10_names() -> Outcome {
    let mut out = Outcome::new();
    let ns2 = fixtures::ns2();
    out.check(ns2.len() == 5, || format!("NS2 has {} names", ns2.len()));
    let beps = ns2.to_bool_eps();
    let stages = bool_sim_stages(&beps);
    let alg = ns2.algebra();
    let ord = Order::of(alg.poset());
    let n = ns2.len();
    let raw = stages.stages();
    out.check(raw.len() <= n * n + 1, || format!("{} stages for {n} names", raw.len()));
    for (k, st) in raw.iter().enumerate() {
        for x in 0..n {
            out.check(st[x][x] == ord.all(), || format!("stage {k} not reflexive at {x}"));
            for y in 0..n {
                out.check(st[x][y] == st[y][x], || format!("stage {k} not symmetric at ({x}, {y})"));
                if k + 1 < raw.len() {
                    out.check(st[x][y].is_subset(raw[k + 1][x][y]), || format!("stage {k} not below {}", k + 1));
                }
            }
        }
    }
    let limit = raw.last().unwrap();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.check((limit[x][y] & limit[y][z]).is_subset(limit[x][z]), || {
                    format!("transitivity fails at ({x}, {y}, {z})")
                });
            }
        }
    }
    out.check(limit_inequality_check(&beps).is_pass(), || "limit inequality fails".into());
    for name in ns2.names() {
        let check = verify_power_axiom(&ns2, name.id(), SubsetReading::Membership).unwrap();
        out.check(check.passed(), || format!("power axiom for {} has value {}", name.id(), ns2.render(check.value)));
    }
    let two = Arc::new(RegularAlgebra::build(Poset::new::<_, &str>(&["o"], &[]).unwrap()).unwrap());
    let samples = corpus::random_eps_structures(SEED ^ 10, 6, 20).unwrap();
    for e in &samples {
        let two_valued = sim_stages(e);
        let bool_valued = bool_sim_stages(&BoolEps::from_eps_structure(e, two.clone()));
        let agree = two_valued.stages().len() == bool_valued.len()
            && two_valued.stages().iter().enumerate().all(|(k, part)| {
                (0..e.len()).all(|x| {
                    (0..e.len()).all(|y| part.related(x, y) == (bool_valued.value(k, x, y) == two.one()))
                })
            });
        out.check(agree, || format!("two-element stages differ on {}", e.render_pairs()));
    }
    out.summary = format!("NS2 with {} stages; {} seeded structures compared", raw.len(), samples.len());
    out
}

fn write(dir: &PathBuf, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("temporary file");
    path.to_string_lossy().into_owned()
}

fn c11_determinism() -> Outcome {
    let mut out = Outcome::new();
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let formulas = write(
        &dir,
        "formulas.txt",
        "# sentences over vt\nR(n0)\nexists t. R(t)\n(R(n0) or not R(n0))\nforall t. (R(t) -> exists u. R(u))\n",
    );
    let dense = write(&dir, "dense.json", r#"{"dense": [["p0", "p1"], ["r", "p0", "p1"]]}"#);
    let poset = write(&dir, "poset.json", r#"{"elements": ["x", "y", "z"], "leq": [["x", "y"], ["x", "z"]]}"#);
    let eps = write(&dir, "eps.json", r#"{"nodes": ["a", "b"], "eps": [["a", "b"], ["b", "b"]]}"#);
    let commands: Vec<Vec<&str>> = vec![
        vec!["algebra", "--poset", "tree7"],
        vec!["algebra", "--poset", &poset],
        vec!["check-byrne", "--poset", "tree3"],
        vec!["separative", "--poset", "chain2"],
        vec!["generic", "--poset", "tree7", "--at", "e"],
        vec!["generic", "--poset", "tree3", "--at", "r", "--dense-file", &dense],
        vec!["eval", "--valuation", "vt", "--formula", "exists t. R(t)"],
        vec!["forces", "--valuation", "vt", "--at", "r", "--formula", "R(n0)"],
        vec!["verify", "lemmas", "--valuation", "vt", "--formulas", &formulas],
        vec!["collapse", "--input", "eq", "--greatest"],
        vec!["collapse", "--input", &eps],
        vec!["hierarchy", "--stages", "2"],
        vec!["power-check", "--name", "s2:1", "--names", "ns2"],
        vec!["corpus", "--kind", "posets", "--cap", "3"],
        vec!["corpus", "--kind", "eps", "--cap", "6", "--seed", "9"],
    ];
    let bin = env!("CARGO_BIN_EXE_forcinglab");
    let mut runs = 0;
    for args in &commands {
        for format in ["text", "doc"] {
            let invoke = || {
                Command::new(bin)
                    .args(args)
                    .args(["--format", format])
                    .output()
                    .expect("binary runs")
            };
            let (a, b) = (invoke(), invoke());
            runs += 1;
            out.check(a.status.code().is_some_and(|c| c <= 1), || {
                format!("`{}` exited with {:?}", args.join(" "), a.status.code())
            });
            out.check(a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status, || {
                format!("`{} --format {format}` differs between runs", args.join(" "))
            });
        }
    }
    out.summary = format!("{runs} invocations, each run twice");
    out
}

fn main() {
    let mut failed = Vec::new();
    let mut report = |n: usize, title: &str, outcome: Outcome, started: Instant| {
        let status = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        let extra = if outcome.failures.is_empty() {
            String::new()
        } else {
            format!("; {} failures, first: {}", outcome.failures.len(), outcome.failures[0])
        };
        println!(
            "criterion {n:>2} {status} {title}: {}{extra} [{:.1}s]",
            outcome.summary,
            started.elapsed().as_secs_f64()
        );
        if !outcome.failures.is_empty() {
            failed.push(n);
        }
    };
    let posets = corpus_posets();
    let t = Instant::now();
    report(1, "Boolean algebra axioms", c1_byrne(&posets), t);
    let t = Instant::now();
    report(2, "density characterization", c2_density(&posets), t);
    let t = Instant::now();
    report(3, "closure laws", c3_closure(&posets), t);
    let t = Instant::now();
    report(4, "complement-pair exclusion", c4_complements(&posets), t);
    let t = Instant::now();
    report(5, "generic filter construction", c5_rasiowa_sikorski(&posets), t);
    let t = Instant::now();
    let (c6, c7) = c6_c7_lemmas();
    report(6, "forcing by filters equals membership", c6, t);
    report(7, "truth, quantifier and family independence", c7, t);
    let t = Instant::now();
    report(8, "extensional collapse", c8_collapse(), t);
    let t = Instant::now();
    report(9, "self-membered atoms", c9_quine_atoms(), t);
    let t = Instant::now();
    report(10, "Boolean-valued names", c10_names(), t);
    let t = Instant::now();
    report(11, "CLI determinism", c11_determinism(), t);
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
