mod common;

use std::sync::Arc;

use graphical::corpus::CorpusSpec;
use graphical::iso::are_isomorphic;
use graphical::substitution::{corolla_of, star_parts, Part};
use graphical::{Graph, Mode, VertexId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{associativity_sides, checked_substitute, nested_fixtures};

#[test]
fn unit_laws_on_corpus() {
    for g in CorpusSpec::new(3).generate() {
        let k = checked_substitute(&g, &star_parts(&g), false);
        assert!(are_isomorphic(&k.graph, &g), "{g:?}");
        let (star, part) = corolla_of(&g).unwrap();
        let k = checked_substitute(&star, &[part], false);
        assert!(are_isomorphic(&k.graph, &g), "{g:?}");
    }
}

#[test]
fn associativity_on_fifty_fixtures() {
    for (n, f) in nested_fixtures(50, 7).iter().enumerate() {
        let (left, right) = associativity_sides(f).unwrap();
        assert!(are_isomorphic(&left, &right), "fixture {n}: {left:?} vs {right:?}");
    }
}

#[test]
fn edge_choice_does_not_matter() {
    let pool = common::pool();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in CorpusSpec::new(3).generate().into_iter().filter(|g| g.vertex_count() > 0) {
        for _ in 0..4 {
            let parts: Vec<Part> =
                g.vertices().map(|v| common::random_part(&mut rng, &pool, &g, v)).collect();
            let a = checked_substitute(&g, &parts, false);
            let b = checked_substitute(&g, &parts, true);
            assert!(are_isomorphic(&a.graph, &b.graph));
        }
    }
}

#[test]
fn substituting_edges_deletes_bivalent_vertices() {
    // L2 with both vertices replaced by edges is an edge; C2 becomes the
    // nodeless loop
    let edge = Arc::new(Graph::edge());
    let as_edge = |g: &Graph, v: VertexId| {
        let nb = g.nbhd(v);
        let b = edge.boundary();
        Part { graph: edge.clone(), matching: vec![(g.inv(nb[0]), b[0]), (g.inv(nb[1]), b[1])] }
    };
    let l2 = Graph::linear(2);
    let parts: Vec<Part> = l2.vertices().map(|v| as_edge(&l2, v)).collect();
    assert!(checked_substitute(&l2, &parts, false).graph.is_edge());
    let c2 = Graph::cycle(2, Mode::Core).unwrap();
    let parts: Vec<Part> = c2.vertices().map(|v| as_edge(&c2, v)).collect();
    assert!(checked_substitute(&c2, &parts, false).graph.is_nodeless_loop());
}

#[test]
fn fibers_of_the_projection() {
    // every arc of the result comes from some part, and each part's
    // vertices land injectively
    for f in nested_fixtures(20, 3) {
        let k = checked_substitute(&f.base, &f.parts, false);
        let mut hit = vec![false; k.graph.arc_count()];
        for p in &k.projection {
            for a in p {
                hit[a.index()] = true;
            }
        }
        assert!(hit.iter().all(|&h| h) || f.base.vertex_count() == 0);
        let mut vs: Vec<VertexId> = k.vertex_inclusion.iter().flatten().copied().collect();
        let n = vs.len();
        vs.sort();
        vs.dedup();
        assert_eq!(vs.len(), n);
        assert_eq!(n, k.graph.vertex_count());
    }
}
