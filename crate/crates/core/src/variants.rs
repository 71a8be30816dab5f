//! Stable graphs and maps, hom counts involving the nodeless loop, and the
//! acyclic sieves.

use std::sync::Arc;

use serde::Serialize;

use crate::embedding::EmbClass;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{Graph, Mode};
use crate::iso::automorphisms;
use crate::map::{enumerate_maps, GraphicalMap};

/// A connected safe graph with a genus at each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    pub graph: Arc<Graph>,
    pub genus: Vec<u32>,
}

impl StableGraph {
    pub fn new(graph: Arc<Graph>, genus: Vec<u32>) -> Result<StableGraph> {
        if !graph.is_connected() {
            return Err(Error::DisconnectedInput);
        }
        if !graph.is_safe() {
            return Err(Error::NodelessLoopInSafeMode);
        }
        if genus.len() != graph.vertex_count() {
            return Err(Error::SourceTargetMismatch {
                reason: "one genus per vertex is required".into(),
            });
        }
        if let Some(v) = graph.vertices().find(|&v| !vertex_stable(&graph, &genus, v.index())) {
            return Err(Error::UnstableGraph { vertex: graph.vertex_label(v).to_string() });
        }
        Ok(StableGraph { graph, genus })
    }

    /// `g(G) = β₁(G) + Σ g(v)`.
    pub fn total_genus(&self) -> u32 {
        total_genus(&self.graph, &self.genus)
    }
}

fn vertex_stable(g: &Graph, genus: &[u32], v: usize) -> bool {
    2 * genus[v] as i64 + g.valence(crate::graph::VertexId(v as u32)) as i64 - 2 > 0
}

/// `2g(v) + |nbhd(v)| − 2 > 0` at every vertex.
pub fn is_stable(g: &Graph, genus: &[u32]) -> bool {
    genus.len() == g.vertex_count() && (0..genus.len()).all(|v| vertex_stable(g, genus, v))
}

pub fn total_genus(g: &Graph, genus: &[u32]) -> u32 {
    g.betti1().unwrap_or(0) as u32 + genus.iter().sum::<u32>()
}

/// `g′(c) = β₁(H) + Σ_{w ∈ V(H)} g′(w)` for a class `c` represented by `H`.
pub fn genus_of_class(target: &Arc<Graph>, genus: &[u32], c: &EmbClass) -> u32 {
    if c.edge {
        return 0;
    }
    let rep = c.representative(target);
    let b1 = rep.source.betti1().unwrap_or(0) as u32;
    b1 + rep.vertices.iter().map(|w| genus[w.index()]).sum::<u32>()
}

/// `φ` respects genus and sends no vertex to an edge.
pub fn is_stable_map(phi: &GraphicalMap, source: &[u32], target: &[u32]) -> bool {
    !phi.has_edge_flag()
        && phi
            .vertices
            .iter()
            .zip(source)
            .all(|(c, &g)| genus_of_class(&phi.target, target, c) == g)
}

/// A graphical map between stable graphs that respects genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableMap {
    pub map: GraphicalMap,
    pub source_genus: Vec<u32>,
    pub target_genus: Vec<u32>,
}

impl StableMap {
    pub fn new(map: GraphicalMap, source_genus: Vec<u32>, target_genus: Vec<u32>) -> Result<Self> {
        if let Some(v) = map.source.vertices().find(|v| {
            map.vertices[v.index()].edge
                || genus_of_class(&map.target, &target_genus, &map.vertices[v.index()])
                    != source_genus[v.index()]
        }) {
            return Err(Error::ClosureViolation { vertex: map.source.vertex_label(v).to_string() });
        }
        Ok(StableMap { map, source_genus, target_genus })
    }

    /// `self ∘ first`, checking that the genus condition survives.
    pub fn after(&self, first: &StableMap) -> Result<StableMap> {
        if first.target_genus != self.source_genus {
            return Err(Error::SourceTargetMismatch { reason: "genus functions differ".into() });
        }
        let map = self.map.after(&first.map)?;
        StableMap::new(map, first.source_genus.clone(), self.target_genus.clone())
    }
}

/// Stable maps `(G, g) → (G′, g′)`.
pub fn enumerate_stable_maps(
    source: &StableGraph,
    target: &StableGraph,
    budget: u128,
    exec: Execution,
) -> Result<Vec<GraphicalMap>> {
    Ok(enumerate_maps(&source.graph, &target.graph, Mode::Core, budget, exec)?
        .into_iter()
        .filter(|m| is_stable_map(m, &source.genus, &target.genus))
        .collect())
}

/// All stable genus functions with values up to `max_genus` on each graph,
/// one per orbit of the automorphism group.
pub fn stable_corpus(graphs: &[Arc<Graph>], max_genus: u32) -> Vec<StableGraph> {
    let mut out = Vec::new();
    for g in graphs.iter().filter(|g| g.is_safe()) {
        let n = g.vertex_count();
        let auts = automorphisms(g);
        let mut genus = vec![0u32; n];
        loop {
            if is_stable(g, &genus) {
                let least = auts
                    .iter()
                    .map(|z| {
                        let mut moved = vec![0; n];
                        for v in 0..n {
                            moved[z.vertices[v].index()] = genus[v];
                        }
                        moved
                    })
                    .min()
                    .expect("identity is an automorphism");
                if least == genus {
                    out.push(StableGraph { graph: g.clone(), genus: genus.clone() });
                }
            }
            let Some(pos) = (0..n).rev().find(|&i| genus[i] < max_genus) else {
                break;
            };
            genus[pos] += 1;
            for slot in &mut genus[pos + 1..] {
                *slot = 0;
            }
        }
    }
    out
}

/// `|Ũ(G, K)|` by enumeration in extended mode.
pub fn count_maps_to_nodeless(g: &Arc<Graph>, budget: u128) -> Result<usize> {
    let k = Arc::new(Graph::nodeless_loop());
    Ok(enumerate_maps(g, &k, Mode::Extended, budget, Execution::Sequential)?.len())
}

/// `|Ũ(K, G)|` by enumeration in extended mode.
pub fn count_maps_from_nodeless(g: &Arc<Graph>, budget: u128) -> Result<usize> {
    let k = Arc::new(Graph::nodeless_loop());
    Ok(enumerate_maps(&k, g, Mode::Extended, budget, Execution::Sequential)?.len())
}

/// Closed form: 2 if every vertex is bivalent, 1 if there are no arcs,
/// 0 otherwise.
pub fn expected_maps_to_nodeless(g: &Graph) -> usize {
    if g.arc_count() == 0 {
        1
    } else if g.vertices().all(|v| g.valence(v) == 2) {
        2
    } else {
        0
    }
}

/// Closed form: 2 into the nodeless loop, 0 elsewhere.
pub fn expected_maps_from_nodeless(g: &Graph) -> usize {
    if g.is_nodeless_loop() {
        2
    } else {
        0
    }
}

/// Membership in the sieves of acyclic graphs and of acyclic graphs with
/// nonempty boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sieves {
    pub acyclic: bool,
    pub acyclic_with_boundary: bool,
}

pub fn is_simply_connected(g: &Graph) -> Result<bool> {
    Ok(g.betti1()? == 0)
}

pub fn sieve_membership(g: &Graph) -> Result<Sieves> {
    let acyclic = is_simply_connected(g)?;
    Ok(Sieves { acyclic, acyclic_with_boundary: acyclic && g.boundary_len() > 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::DEFAULT_BUDGET;

    #[test]
    fn stability_examples() {
        assert!(!is_stable(&Graph::star(2), &[0]));
        assert!(is_stable(&Graph::star(3), &[0]));
        let c1 = Graph::cycle(1, Mode::Core).unwrap();
        assert!(!is_stable(&c1, &[0]));
        assert!(is_stable(&c1, &[1]));
        assert_eq!(total_genus(&c1, &[1]), 2);
    }

    #[test]
    fn class_genus() {
        let c1 = Arc::new(Graph::cycle(1, Mode::Core).unwrap());
        let v = crate::graph::VertexId(0);
        assert_eq!(genus_of_class(&c1, &[3], &EmbClass::of_vertex(&c1, v)), 3);
        assert_eq!(genus_of_class(&c1, &[3], &EmbClass::identity(&c1)), 4);
    }

    #[test]
    fn nodeless_counts() {
        for (g, n) in [(Graph::linear(3), 2), (Graph::star(0), 1), (Graph::star(3), 0)] {
            let g = Arc::new(g);
            assert_eq!(count_maps_to_nodeless(&g, DEFAULT_BUDGET).unwrap(), n);
            assert_eq!(expected_maps_to_nodeless(&g), n);
        }
        let k = Arc::new(Graph::nodeless_loop());
        assert_eq!(count_maps_from_nodeless(&k, DEFAULT_BUDGET).unwrap(), 2);
    }

    #[test]
    fn sieves() {
        let s = sieve_membership(&Graph::linear(2)).unwrap();
        assert!(s.acyclic && s.acyclic_with_boundary);
        assert!(!sieve_membership(&Graph::cycle(2, Mode::Core).unwrap()).unwrap().acyclic);
        let s = sieve_membership(&Graph::star(0)).unwrap();
        assert!(s.acyclic && !s.acyclic_with_boundary);
    }
}
