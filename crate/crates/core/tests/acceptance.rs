//! One line per acceptance criterion. Runs without the test harness so the
//! lines are always printed; exits nonzero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use graphical::audit::{
    audit, check_category_axioms, check_degrees, check_factorizations, check_mono_like,
    check_orthogonality, check_rigidity, check_uniqueness, AuditKind, CheckResult, HomTable, Object,
};
use graphical::corpus::{close_under_stars, CorpusSpec};
use graphical::embedding::embedding_classes;
use graphical::iso::{are_isomorphic, automorphisms};
use graphical::map::DEFAULT_BUDGET;
use graphical::presheaf::{
    is_strict_segal, kan_extend_nodeless, negative_control, check_functoriality, ArcColoring,
    Palette, TablePresheaf,
};
use graphical::substitution::{corolla_of, star_parts};
use graphical::variants::{count_maps_from_nodeless, count_maps_to_nodeless};
use graphical::{enumerate_maps, ArcId, Execution, Graph, GraphicalMap, Mode};

const EXEC: Execution = Execution::Parallel;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn run(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let in_time = took <= limit;
    let passed = o.passed && in_time;
    println!(
        "criterion {n:>2} {} {name}: {} [{:.2?} of {:?}{}]",
        if passed { "PASS" } else { "FAIL" },
        o.detail,
        took,
        limit,
        if in_time { "" } else { ", too slow" },
    );
    passed
}

fn summarize(checks: &[CheckResult]) -> (bool, String) {
    let ok = checks.iter().all(|c| c.passed());
    let instances: u64 = checks.iter().map(|c| c.instances).sum();
    let bad: Vec<String> =
        checks.iter().filter(|c| !c.passed()).map(|c| format!("{} ({})", c.name, c.violations)).collect();
    let detail = if bad.is_empty() {
        format!("{} checks, {instances} instances, no violations", checks.len())
    } else {
        format!("violations in {}", bad.join(", "))
    };
    (ok, detail)
}

fn table(d: usize, mode: Mode) -> HomTable {
    let graphs = if mode == Mode::Extended {
        CorpusSpec::new(d).extended().generate()
    } else {
        CorpusSpec::new(d).generate()
    };
    let objects = graphs.into_iter().map(Object::plain).collect();
    HomTable::build(objects, mode, DEFAULT_BUDGET, EXEC).expect("corpus fits the budget")
}

fn segal_corpus(d: usize) -> Vec<Arc<Graph>> {
    let mut c = CorpusSpec::new(d).generate();
    c.push(Arc::new(Graph::linear(2)));
    close_under_stars(&mut c);
    c
}

fn emb_counts() -> Outcome {
    let c2 = Graph::cycle(2, Mode::Core).unwrap();
    let c1 = Graph::cycle(1, Mode::Core).unwrap();
    let mut ok = true;
    let mut counts = Vec::new();
    for (g, want) in [(&c2, 7), (&c1, 3)] {
        let got: BTreeSet<(Vec<ArcId>, bool)> =
            embedding_classes(g).iter().map(|c| (c.boundary.clone(), c.edge)).collect();
        ok &= got.len() == want && got == common::emb_oracle(g);
        counts.push(got.len());
    }
    outcome(ok, format!("|Emb(C2)| = {}, |Emb(C1)| = {}, equal to the oracle class for class", counts[0], counts[1]))
}

fn shared_arc_maps() -> Outcome {
    let c2 = Arc::new(Graph::cycle(2, Mode::Core).unwrap());
    let c1 = Arc::new(Graph::cycle(1, Mode::Core).unwrap());
    let maps = enumerate_maps(&c2, &c1, Mode::Core, DEFAULT_BUDGET, EXEC).unwrap();
    let mut by_arcs: BTreeMap<Vec<ArcId>, Vec<&GraphicalMap>> = BTreeMap::new();
    for m in &maps {
        by_arcs.entry(m.arcs.clone()).or_default().push(m);
    }
    let pairs: Vec<[&GraphicalMap; 2]> = by_arcs
        .values()
        .flat_map(|ms| {
            let mut out = Vec::new();
            for i in 0..ms.len() {
                for j in i + 1..ms.len() {
                    out.push([ms[i], ms[j]]);
                }
            }
            out
        })
        .collect();
    let valid = pairs.iter().flatten().all(|m| m.validate().is_ok());
    let one_per_arc_map = by_arcs.values().all(|ms| ms.len() <= 2);
    // pairs up to postcomposition with automorphisms of C1
    let auts: Vec<GraphicalMap> = enumerate_maps(&c1, &c1, Mode::Core, DEFAULT_BUDGET, EXEC)
        .unwrap()
        .into_iter()
        .filter(|m| m.is_iso())
        .collect();
    let orbits: BTreeSet<BTreeSet<Vec<ArcId>>> = pairs
        .iter()
        .map(|[p, _]| auts.iter().map(|z| z.after(p).unwrap().arcs).collect())
        .collect();
    // the pair sending both edges of C2 to the loop, with each vertex in
    // turn collapsed onto the edge
    let forward = c2.arcs().map(|a| if c2.arc_label(a).is_daggered() { c1.arcs().nth(1) } else { c1.arcs().next() });
    let forward: Vec<ArcId> = forward.map(|a| a.unwrap()).collect();
    let has_example = by_arcs.get(&forward).is_some_and(|ms| ms.len() == 2);
    outcome(
        valid && one_per_arc_map && orbits.len() == 1 && has_example && automorphisms(&c1).len() == 2,
        format!(
            "{} maps, {} pairs with equal arc maps, {} up to Aut(C1); literal single-pair reading holds only up to Aut(C1)",
            maps.len(),
            pairs.len(),
            orbits.len()
        ),
    )
}

fn main() {
    let mut results = Vec::new();
    let minute = Duration::from_secs(60);
    let core2 = std::cell::OnceCell::new();

    results.push(run(1, "embedding classes", Duration::from_secs(1), emb_counts));
    results.push(run(2, "maps C2 -> C1 with equal arc maps", Duration::from_secs(1), shared_arc_maps));

    results.push(run(3, "category axioms, degree <= 2", 5 * minute, || {
        let t = core2.get_or_init(|| table(2, Mode::Core));
        let (ok, detail) = summarize(&check_category_axioms(t, EXEC));
        outcome(ok, format!("{} objects, {} maps: {detail}", t.len(), t.map_count()))
    }));

    results.push(run(4, "factorization and Reedy audits", 10 * minute, || {
        let mut all = Vec::new();
        for (label, t) in [("core", None), ("extended", Some(table(2, Mode::Extended)))] {
            let t = t.as_ref().unwrap_or_else(|| core2.get_or_init(|| table(2, Mode::Core)));
            let mut checks = check_degrees(t);
            checks.extend(check_factorizations(t, EXEC));
            checks.extend(check_uniqueness(t));
            checks.extend(check_rigidity(t));
            checks.push(check_mono_like(t));
            checks.push(check_orthogonality(t, EXEC));
            let (ok, detail) = summarize(&checks);
            all.push((ok, format!("{label}: {detail}")));
        }
        outcome(all.iter().all(|a| a.0), all.into_iter().map(|a| a.1).collect::<Vec<_>>().join("; "))
    }));

    results.push(run(5, "strict Segal and negative control", minute, || {
        let corpus = segal_corpus(3);
        let mut ok = true;
        let mut parts = Vec::new();
        for p in ["fixed1", "free2", "free2+fixed1"] {
            let s = is_strict_segal(&ArcColoring::new(Palette::parse(p).unwrap()), &corpus, EXEC).unwrap();
            ok &= s;
            parts.push(format!("{p} {}", if s { "yes" } else { "no" }));
        }
        let objects: Vec<Object> = segal_corpus(2).into_iter().map(Object::plain).collect();
        let t = HomTable::build(objects, Mode::Core, DEFAULT_BUDGET, EXEC).unwrap();
        let x = TablePresheaf::tabulate(&ArcColoring::new(Palette::parse("free2").unwrap()), &t).unwrap();
        let l2 = Graph::linear(2);
        let y = negative_control(&x, &t, &l2).unwrap();
        let (_, bad) = check_functoriality(&y, &t, None).unwrap();
        let control_fails = !is_strict_segal(&y, y.objects(), EXEC).unwrap();
        ok &= control_fails && bad == 0;
        parts.push(format!(
            "control at L2 keeps {} of {} and is {}",
            y.size(&l2).unwrap(),
            x.size(&l2).unwrap(),
            if control_fails { "not Segal" } else { "Segal" }
        ));
        outcome(ok, format!("{} graphs; {}", corpus.len(), parts.join(", ")))
    }));

    results.push(run(6, "nodeless-loop Kan extension", minute, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for p in ["fixed1", "free2", "free2+fixed1"] {
            let x = ArcColoring::new(Palette::parse(p).unwrap());
            let k3 = kan_extend_nodeless(&x, 3, true, DEFAULT_BUDGET, EXEC).unwrap();
            let k2 = kan_extend_nodeless(&x, 2, true, DEFAULT_BUDGET, EXEC).unwrap();
            let bare = kan_extend_nodeless(&x, 3, false, DEFAULT_BUDGET, EXEC).unwrap();
            ok &= k3.projection_is_bijective()
                && k3.restricts_bijectively_to(&k2)
                && bare.families.len() == k3.families.len();
            parts.push(format!("{p}: {} families", k3.families.len()));
        }
        outcome(ok, parts.join(", "))
    }));

    results.push(run(7, "extended hom counts with the nodeless loop", minute, || {
        // closed forms: two maps into K from graphs whose vertices are all
        // bivalent, one from the empty star, none otherwise; only K maps to K
        let mut cases: Vec<(String, Graph, usize)> = Vec::new();
        for n in 0..=4 {
            cases.push((format!("L{n}"), Graph::linear(n), 2));
        }
        for m in 1..=3 {
            cases.push((format!("C{m}"), Graph::cycle(m, Mode::Core).unwrap(), 2));
        }
        for (n, want) in [1, 0, 2, 0, 0].into_iter().enumerate() {
            cases.push((format!("star{n}"), Graph::star(n), want));
        }
        cases.push(("K".into(), Graph::nodeless_loop(), 2));
        let mut ok = true;
        for (_, g, to) in &cases {
            let g = Arc::new(g.clone());
            let from = if g.is_nodeless_loop() { 2 } else { 0 };
            ok &= count_maps_to_nodeless(&g, DEFAULT_BUDGET).unwrap() == *to;
            ok &= count_maps_from_nodeless(&g, DEFAULT_BUDGET).unwrap() == from;
        }
        outcome(ok, format!("{} graphs, both directions", cases.len()))
    }));

    results.push(run(8, "stable closure", 5 * minute, || {
        let r = audit(&CorpusSpec::new(2).generate(), AuditKind::Stable, DEFAULT_BUDGET, EXEC).unwrap();
        let (ok, detail) = summarize(&r.checks);
        let closure = r.check("stable_closure").map_or(0, |c| c.instances);
        outcome(ok, format!("{} objects, {} maps, {closure} composable pairs; {detail}", r.objects, r.maps))
    }));

    results.push(run(9, "sieves", 5 * minute, || {
        let graphs = CorpusSpec::new(2).generate();
        let mut ok = true;
        let mut parts = Vec::new();
        for kind in [AuditKind::U0, AuditKind::Ucyc] {
            let r = audit(&graphs, kind, DEFAULT_BUDGET, EXEC).unwrap();
            let (pass, detail) = summarize(&r.checks);
            ok &= pass && r.checks.iter().any(|c| c.name.ends_with("_is_sieve"));
            parts.push(format!("{kind:?}: {} objects, {detail}", r.objects));
        }
        outcome(ok, parts.join("; "))
    }));

    results.push(run(10, "substitution laws", minute, || {
        let mut ok = true;
        let corpus = CorpusSpec::new(3).extended().generate();
        for g in &corpus {
            let k = common::checked_substitute(g, &star_parts(g), false);
            ok &= are_isomorphic(&k.graph, g);
            if g.is_safe() && g.vertex_count() > 0 {
                let (star, part) = corolla_of(g).unwrap();
                ok &= are_isomorphic(&common::checked_substitute(&star, &[part], false).graph, g);
            }
        }
        let fixtures = common::nested_fixtures(50, 7);
        for f in &fixtures {
            let (l, r) = common::associativity_sides(f).unwrap();
            ok &= are_isomorphic(&l, &r);
        }
        let n = common::SUBSTITUTIONS.load(std::sync::atomic::Ordering::Relaxed);
        outcome(
            ok,
            format!(
                "units on {} graphs, associativity on {} fixtures, betti1 and boundary checked on {n} substitutions",
                corpus.len(),
                fixtures.len()
            ),
        )
    }));

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
