//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use graphical::corpus::CorpusSpec;
use graphical::iso::are_isomorphic;
use graphical::substitution::{substitute_with, Part, SubstitutionResult};
use graphical::{ArcId, Error, Graph, Mode, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Embedding classes of a safe graph (or the nodeless loop) by brute force:
/// every edge, and every connected choice of vertices with some internal
/// edges between them snipped. Keys are the images of the source boundary.
pub fn emb_oracle(g: &Graph) -> BTreeSet<(Vec<ArcId>, bool)> {
    let mut out = BTreeSet::new();
    let mut seen_edges = BTreeSet::new();
    for a in g.arcs() {
        let mut e = vec![a, g.inv(a)];
        e.sort();
        if seen_edges.insert(e.clone()) {
            out.insert((e, true));
        }
    }
    let n = g.vertex_count();
    if n == 0 {
        if g.is_nodeless_loop() {
            out.insert((vec![], false));
        }
        return out;
    }
    let tgt = |a: ArcId| g.target(a).map(|v| v.index());
    for w in 1u32..(1 << n) {
        let inside = |v: usize| w >> v & 1 == 1;
        // internal edges with both ends chosen, by their lesser arc
        let within: Vec<ArcId> = g
            .arcs()
            .filter(|&a| a < g.inv(a))
            .filter(|&a| tgt(a).is_some_and(inside) && tgt(g.inv(a)).is_some_and(inside))
            .collect();
        for s in 0u32..(1 << within.len()) {
            let kept: Vec<ArcId> = (0..within.len()).filter(|&k| s >> k & 1 == 0).map(|k| within[k]).collect();
            if !connected(n, w, &kept, |a| (tgt(a).unwrap(), tgt(g.inv(a)).unwrap())) {
                continue;
            }
            let mut key: Vec<ArcId> = g
                .arcs()
                .filter(|&a| tgt(a).is_some_and(inside))
                .filter(|&a| {
                    let b = g.inv(a);
                    let kept_edge = kept.contains(&a.min(b));
                    !kept_edge
                })
                .map(|a| g.inv(a))
                .collect();
            key.sort();
            out.insert((key, false));
        }
    }
    out
}

fn connected(n: usize, w: u32, edges: &[ArcId], ends: impl Fn(ArcId) -> (usize, usize)) -> bool {
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &e in edges {
        let (x, y) = ends(e);
        let (rx, ry) = (find(&mut comp, x), find(&mut comp, y));
        comp[rx] = ry;
    }
    let roots: BTreeSet<usize> = (0..n).filter(|&v| w >> v & 1 == 1).map(|v| find(&mut comp, v)).collect();
    roots.len() == 1
}

/// Substitution that also checks `β₁` additivity and that the boundary map
/// is a bijection `ð(G) → ð(G{H_v})`.
pub fn checked_substitute(base: &Graph, parts: &[Part], reversed: bool) -> SubstitutionResult {
    let r = substitute_with(base, parts, Mode::Extended, reversed).expect("substitution succeeds");
    let b = |g: &Graph| g.betti1().expect("connected");
    assert_eq!(
        b(&r.graph),
        b(base) + parts.iter().map(|p| b(&p.graph)).sum::<usize>(),
        "betti1 is additive"
    );
    let sources: BTreeSet<ArcId> = r.boundary_map.iter().map(|p| p.0).collect();
    let images: BTreeSet<ArcId> = r.boundary_map.iter().map(|p| p.1).collect();
    assert_eq!(sources, base.boundary().into_iter().collect());
    assert_eq!(images, r.graph.boundary().into_iter().collect());
    assert_eq!(r.boundary_map.len(), images.len());
    SUBSTITUTIONS.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    r
}

/// Number of substitutions checked by [`checked_substitute`].
pub static SUBSTITUTIONS: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(0);

/// Connected graphs with up to three internal edges plus the stars and the
/// edge, bucketed by boundary size.
pub fn pool() -> Vec<Vec<Arc<Graph>>> {
    let mut graphs = CorpusSpec::new(3).generate();
    graphs.push(Arc::new(Graph::linear(2)));
    graphs.push(Arc::new(Graph::linear(3)));
    graphs.extend((0..8).map(|n| Arc::new(Graph::star(n))));
    let mut out: Vec<Vec<Arc<Graph>>> = vec![Vec::new(); 8];
    for g in graphs {
        let k = g.boundary_len();
        if k < out.len() && !out[k].iter().any(|h| are_isomorphic(h, &g)) {
            out[k].push(g);
        }
    }
    out
}

/// A part for vertex `v` of `base`: a random pool graph with a random
/// bijection from `i·nbhd(v)` onto its boundary.
pub fn random_part(rng: &mut impl Rng, pool: &[Vec<Arc<Graph>>], base: &Graph, v: VertexId) -> Part {
    let nbhd = base.nbhd(v);
    let h = pool[nbhd.len()].choose(rng).expect("pool covers every valence").clone();
    let mut boundary = h.boundary();
    boundary.shuffle(rng);
    let matching = nbhd.iter().map(|&a| base.inv(a)).zip(boundary).collect();
    Part { graph: h, matching }
}

/// The nested data for `G{H_v}{K_w} ≅ G{H_v{K_w}}`.
pub struct NestedFixture {
    pub base: Arc<Graph>,
    pub parts: Vec<Part>,
    /// For each vertex of each `H_v`, in order.
    pub inner: Vec<Vec<Part>>,
}

pub fn nested_fixtures(count: usize, seed: u64) -> Vec<NestedFixture> {
    let pool = pool();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<Arc<Graph>> = pool.iter().flatten().filter(|g| g.vertex_count() > 0).cloned().collect();
    (0..count)
        .map(|_| {
            let base = bases.choose(&mut rng).unwrap().clone();
            let parts: Vec<Part> = base.vertices().map(|v| random_part(&mut rng, &pool, &base, v)).collect();
            let inner = parts
                .iter()
                .map(|p| p.graph.vertices().map(|w| random_part(&mut rng, &pool, &p.graph, w)).collect())
                .collect();
            NestedFixture { base, parts, inner }
        })
        .collect()
}

/// Both sides of the associativity law for a nested fixture.
pub fn associativity_sides(f: &NestedFixture) -> Result<(Graph, Graph), Error> {
    // left: substitute the H_v, then the K_w into the result
    let first = checked_substitute(&f.base, &f.parts, false);
    let mut left_parts: Vec<Option<Part>> = vec![None; first.graph.vertex_count()];
    for (v, p) in f.parts.iter().enumerate() {
        let pi = &first.projection[v];
        for (w, k) in f.inner[v].iter().enumerate() {
            let image = first.vertex_inclusion[v][w];
            let matching = k.matching.iter().map(|&(x, y)| (pi[x.index()], y)).collect();
            left_parts[image.index()] = Some(Part { graph: k.graph.clone(), matching });
        }
        let _ = p;
    }
    let left_parts: Vec<Part> = left_parts.into_iter().map(|p| p.expect("every vertex covered")).collect();
    let left = checked_substitute(&first.graph, &left_parts, false).graph;

    // right: substitute the K_w into each H_v, then the results into G
    let right_parts: Vec<Part> = f
        .parts
        .iter()
        .zip(&f.inner)
        .map(|(p, ks)| {
            let hk = checked_substitute(&p.graph, ks, false);
            let matching = p
                .matching
                .iter()
                .map(|&(x, y)| {
                    let z = hk.boundary_map.iter().find(|b| b.0 == y).expect("boundary arc").1;
                    (x, z)
                })
                .collect();
            Part { graph: Arc::new(hk.graph), matching }
        })
        .collect();
    let right = checked_substitute(&f.base, &right_parts, false).graph;
    Ok((left, right))
}
