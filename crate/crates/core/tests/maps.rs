use std::collections::BTreeSet;
use std::sync::Arc;

use graphical::corpus::CorpusSpec;
use graphical::factor::{classify, factor_reedy};
use graphical::iso::automorphisms;
use graphical::map::DEFAULT_BUDGET;
use graphical::{enumerate_maps, ArcId, Execution, Graph, GraphicalMap, Mode};

/// Every involution-compatible arc function and every flag vector, kept
/// when the map validates.
fn brute_force(g: &Arc<Graph>, h: &Arc<Graph>, mode: Mode) -> BTreeSet<(Vec<ArcId>, Vec<bool>)> {
    let orbits: Vec<ArcId> = g.edges().iter().map(|e| e[0]).collect();
    let m = h.arc_count();
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    let total = m.pow(orbits.len() as u32);
    for code in 0..total {
        let mut arcs = vec![ArcId(0); g.arc_count()];
        let mut c = code;
        for &a in &orbits {
            let b = ArcId((c % m) as u32);
            c /= m;
            arcs[a.index()] = b;
            arcs[g.inv(a).index()] = h.inv(b);
        }
        for f in 0u32..(1 << n) {
            let flags: Vec<bool> = (0..n).map(|v| f >> v & 1 == 1).collect();
            if let Ok(phi) = GraphicalMap::new(g.clone(), h.clone(), arcs.clone(), &flags, mode) {
                out.insert((arcs.clone(), phi.edge_flags()));
            }
        }
    }
    out
}

fn key(phi: &GraphicalMap) -> (Vec<ArcId>, Vec<bool>) {
    (phi.source.arcs().map(|a| phi.apply(a)).collect(), phi.edge_flags())
}

#[test]
fn enumeration_matches_brute_force() {
    for mode in [Mode::Core, Mode::Extended] {
        let mut corpus = CorpusSpec::new(2).generate();
        if mode == Mode::Extended {
            corpus = CorpusSpec::new(2).extended().generate();
        }
        corpus.push(Arc::new(Graph::linear(2)));
        for g in &corpus {
            for h in &corpus {
                let maps = enumerate_maps(g, h, mode, DEFAULT_BUDGET, Execution::Sequential).unwrap();
                let got: BTreeSet<_> = maps.iter().map(key).collect();
                assert_eq!(got.len(), maps.len(), "no map listed twice");
                assert_eq!(got, brute_force(g, h, mode), "{g:?} -> {h:?}");
            }
        }
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let corpus = CorpusSpec::new(3).generate();
    for g in corpus.iter().take(8) {
        for h in &corpus {
            let a = enumerate_maps(g, h, Mode::Core, DEFAULT_BUDGET, Execution::Sequential).unwrap();
            let b = enumerate_maps(g, h, Mode::Core, DEFAULT_BUDGET, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn isos_are_automorphisms() {
    for g in CorpusSpec::new(3).generate() {
        let maps = enumerate_maps(&g, &g, Mode::Core, DEFAULT_BUDGET, Execution::Parallel).unwrap();
        let isos = maps.iter().filter(|m| m.is_iso()).count();
        assert_eq!(isos, automorphisms(&g).len(), "{g:?}");
    }
}

#[test]
fn image_by_key_agrees_with_substitution() {
    let mut corpus = CorpusSpec::new(2).extended().generate();
    corpus.push(Arc::new(Graph::linear(2)));
    for g in &corpus {
        for h in &corpus {
            for phi in enumerate_maps(g, h, Mode::Extended, DEFAULT_BUDGET, Execution::Sequential).unwrap() {
                let im = phi.image_factorization().unwrap();
                assert_eq!(im.embedding.class(), phi.image(), "{phi:?}");
                assert!(im.active.is_active());
                let back = GraphicalMap::from_embedding(&im.embedding, Mode::Extended).after(&im.active);
                assert_eq!(back.unwrap(), phi);
            }
        }
    }
}

#[test]
fn composition_respects_images() {
    // im(ψ ∘ φ) is the image of ψ restricted to im φ
    let corpus = CorpusSpec::new(2).generate();
    for a in &corpus {
        for b in &corpus {
            let ab = enumerate_maps(a, b, Mode::Core, DEFAULT_BUDGET, Execution::Sequential).unwrap();
            for c in &corpus {
                let bc = enumerate_maps(b, c, Mode::Core, DEFAULT_BUDGET, Execution::Sequential).unwrap();
                for phi in &ab {
                    let f = phi.image().representative(b);
                    for psi in &bc {
                        let comp = psi.after(phi).unwrap();
                        comp.validate().unwrap();
                        let restricted = psi.restrict(&f).unwrap();
                        assert_eq!(comp.image(), restricted.image());
                    }
                }
            }
        }
    }
}

#[test]
fn reedy_pieces_are_classified() {
    for g in CorpusSpec::new(2).generate() {
        for h in CorpusSpec::new(2).generate() {
            for phi in enumerate_maps(&g, &h, Mode::Core, DEFAULT_BUDGET, Execution::Sequential).unwrap() {
                let r = factor_reedy(&phi).unwrap();
                assert!(classify(&r.degeneracy).unwrap().in_minus);
                assert!(classify(&r.plus().unwrap()).unwrap().in_plus);
                assert_eq!(r.compose().unwrap(), phi);
            }
        }
    }
}
