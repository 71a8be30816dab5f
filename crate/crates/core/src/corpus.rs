//! Finite corpora of connected graphs, enumerated up to isomorphism.

use std::sync::Arc;

use crate::graph::{Graph, Mode, RawGraph};
use crate::iso::{find_isomorphism, GraphIso};
use crate::label::Label;

/// Bounds for a generated corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    /// Largest core degree `|V| + |E_i|`.
    pub max_degree: usize,
    /// Largest number of loose ends. Needed because there are infinitely
    /// many stars of each degree.
    pub max_boundary: usize,
    /// Extended corpora also contain the nodeless loop.
    pub mode: Mode,
}

impl CorpusSpec {
    pub fn new(max_degree: usize) -> Self {
        CorpusSpec { max_degree, max_boundary: 3, mode: Mode::Core }
    }

    pub fn extended(mut self) -> Self {
        self.mode = Mode::Extended;
        self
    }

    pub fn generate(&self) -> Vec<Arc<Graph>> {
        let mut out = Vec::new();
        let mut push = |g: Graph| {
            if !out.iter().any(|h: &Arc<Graph>| find_isomorphism(h, &g).is_some()) {
                out.push(Arc::new(g));
            }
        };
        let (d, b) = (self.max_degree, self.max_boundary);
        if b >= 2 {
            push(Graph::edge());
        }
        if d >= 1 {
            for n in 0..=b {
                push(Graph::star(n));
            }
        }
        if b >= 2 {
            for n in 2..=d.div_ceil(2) {
                push(Graph::linear(n));
            }
        }
        for n in 1..=d / 2 {
            push(Graph::cycle(n, Mode::Core).expect("n ≥ 1"));
        }
        for vertices in 1..=d {
            for edges in 0..=d - vertices {
                for g in shapes(vertices, edges, b) {
                    push(g);
                }
            }
        }
        if self.mode == Mode::Extended {
            out.push(Arc::new(Graph::nodeless_loop()));
        }
        out
    }
}

/// Connected graphs with the given numbers of vertices and internal edges
/// and at most `max_boundary` loose ends, possibly with repeats up to iso.
fn shapes(vertices: usize, edges: usize, max_boundary: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..vertices).flat_map(|i| (i..vertices).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for chosen in multisets(pairs.len(), edges) {
        for legs in 0..=max_boundary {
            for spread in multisets(vertices, legs) {
                let edge_list: Vec<(usize, usize)> = chosen.iter().map(|&k| pairs[k]).collect();
                let g = assemble(vertices, &edge_list, &spread);
                if g.is_connected() {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Non-decreasing sequences of length `k` over `0..n`.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; k];
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] + 1 < n) else {
            return out;
        };
        let next = cur[pos] + 1;
        for slot in &mut cur[pos..] {
            *slot = next;
        }
    }
}

fn assemble(vertices: usize, edges: &[(usize, usize)], legs: &[usize]) -> Graph {
    let mut raw = RawGraph::default();
    for v in 1..=vertices {
        raw.add_vertex(Label::from(format!("v{v}")));
    }
    let mut k = 0;
    let mut next = |raw: &mut RawGraph| {
        k += 1;
        let a = raw.add_arc(Label::from(k));
        let b = raw.add_arc(Label::from(k).daggered());
        raw.pair(a, b);
        (a, b)
    };
    for &(i, j) in edges {
        let (a, b) = next(&mut raw);
        raw.target[a] = Some(i);
        raw.target[b] = Some(j);
    }
    for &v in legs {
        let (a, _) = next(&mut raw);
        raw.target[a] = Some(v);
    }
    raw.build().expect("assembled graphs are valid").graph
}

/// The corpus member isomorphic to `g`, with the least isomorphism to it.
pub fn locate(corpus: &[Arc<Graph>], g: &Graph) -> Option<(usize, GraphIso)> {
    corpus
        .iter()
        .enumerate()
        .find_map(|(i, h)| find_isomorphism(g, h).map(|z| (i, z)))
}

/// Adds `†` and the stars needed to compare every corpus graph with its
/// Segal core.
pub fn close_under_stars(corpus: &mut Vec<Arc<Graph>>) {
    let mut needed: Vec<usize> = corpus
        .iter()
        .flat_map(|g| g.vertices().map(|v| g.valence(v)).collect::<Vec<_>>())
        .collect();
    needed.sort_unstable();
    needed.dedup();
    let mut extra = vec![Graph::edge()];
    extra.extend(needed.into_iter().map(Graph::star));
    for g in extra {
        if locate(corpus, &g).is_none() {
            corpus.push(Arc::new(g));
        }
    }
}
