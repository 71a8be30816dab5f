//! Wide subcategories, the active/embedding and Reedy factorizations, and
//! generator classification.

use std::sync::Arc;

use serde::Serialize;

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::graph::{ArcId, Graph, VertexId};
use crate::map::GraphicalMap;
use crate::substitution::{substitute, Part};

/// Membership of a map in the wide subcategories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MapClassification {
    pub is_active: bool,
    pub is_embedding: bool,
    pub is_iso: bool,
    /// Active and surjective on arcs.
    pub in_minus: bool,
    /// Active, injective on arcs and sending no vertex to an edge. The last
    /// condition only matters in extended mode, where `C₁ → K` is bijective.
    pub in_plus_active: bool,
    /// The active part of the image factorization is injective on arcs.
    pub in_plus: bool,
}

pub fn classify(phi: &GraphicalMap) -> Result<MapClassification> {
    let is_active = phi.is_active();
    let active_part = if is_active { phi.clone() } else { phi.image_factorization()?.active };
    Ok(MapClassification {
        is_active,
        is_embedding: phi.is_embedding(),
        is_iso: phi.is_iso(),
        in_minus: is_active && phi.is_arc_surjective(),
        in_plus_active: is_active && phi.is_arc_injective() && !phi.has_edge_flag(),
        in_plus: active_part.is_arc_injective() && !active_part.has_edge_flag(),
    })
}

/// `φ = k ∘ α` with `α` active and `k` an embedding.
pub fn factor_active_embedding(phi: &GraphicalMap) -> Result<(GraphicalMap, Embedding)> {
    let im = phi.image_factorization()?;
    Ok((im.active, im.embedding))
}

/// `φ = f ∘ δ ∘ φ⁻`.
#[derive(Clone, Debug)]
pub struct ReedyFactorization {
    pub degeneracy: GraphicalMap,
    pub inner: GraphicalMap,
    pub outer: Embedding,
}

impl ReedyFactorization {
    /// `f ∘ δ`, the part in the plus subcategory.
    pub fn plus(&self) -> Result<GraphicalMap> {
        GraphicalMap::from_embedding(&self.outer, self.inner.mode).after(&self.inner)
    }

    pub fn compose(&self) -> Result<GraphicalMap> {
        self.plus()?.after(&self.degeneracy)
    }
}

/// Factors `φ` through the graph obtained by replacing every vertex that
/// `φ` sends to an edge by the exceptional edge.
pub fn factor_reedy(phi: &GraphicalMap) -> Result<ReedyFactorization> {
    let (alpha, outer) = factor_active_embedding(phi)?;
    let g = &phi.source;
    if g.vertex_count() == 0 {
        return Ok(ReedyFactorization {
            degeneracy: GraphicalMap::identity(g.clone(), phi.mode),
            inner: alpha,
            outer,
        });
    }
    let edge = Arc::new(Graph::edge());
    let parts: Vec<Part> = g
        .vertices()
        .map(|v| {
            if phi.vertices[v.index()].edge {
                let nb = g.nbhd(v);
                Part {
                    graph: edge.clone(),
                    matching: vec![(g.inv(nb[0]), ArcId(0)), (g.inv(nb[1]), ArcId(1))],
                }
            } else {
                Part::star_at(g, v)
            }
        })
        .collect();
    let degeneracy = canonical_active(g, &parts, phi.mode)?;
    let middle = degeneracy.target.clone();
    let mut table: Vec<Option<ArcId>> = vec![None; middle.arc_count()];
    for a in g.arcs() {
        let slot = &mut table[degeneracy.apply(a).index()];
        match slot {
            Some(b) if *b != alpha.apply(a) => {
                return Err(Error::NotInSubcategory {
                    reason: "inner part is not well defined".into(),
                })
            }
            _ => *slot = Some(alpha.apply(a)),
        }
    }
    let arcs: Vec<ArcId> = table
        .into_iter()
        .map(|b| b.expect("degeneracies are surjective on arcs"))
        .collect();
    let flags = vec![false; middle.vertex_count()];
    let inner = GraphicalMap::new(middle, alpha.target.clone(), arcs, &flags, phi.mode)?;
    Ok(ReedyFactorization { degeneracy, inner, outer })
}

/// The active map `G → G{H_v}` that sends each vertex to its part.
pub fn canonical_active(g: &Arc<Graph>, parts: &[Part], mode: crate::graph::Mode) -> Result<GraphicalMap> {
    let sub = substitute(g, parts, mode)?;
    let k = Arc::new(sub.graph);
    let matched = |v: VertexId, x: ArcId| {
        let (_, y) = parts[v.index()].matching.iter().find(|(z, _)| *z == x).expect("matched");
        sub.projection[v.index()][y.index()]
    };
    let arcs = g
        .arcs()
        .map(|a| match g.target(g.inv(a)) {
            Some(v) => matched(v, a),
            None => k.inv(matched(g.target(a).expect("connected with vertices"), g.inv(a))),
        })
        .collect();
    let flags: Vec<bool> = parts.iter().map(|p| p.graph.is_edge()).collect();
    GraphicalMap::new(g.clone(), k, arcs, &flags, mode)
}

/// The generator families of the three wide subcategories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Generator {
    OuterCoface,
    InnerCoface,
    Codegeneracy,
    None,
}

/// Decides whether a non-isomorphism of one of the subcategories is one of
/// its generators.
pub fn classify_generator(phi: &GraphicalMap) -> Result<Generator> {
    let c = classify(phi)?;
    if c.is_iso || !(c.is_embedding || c.in_plus_active || c.in_minus) {
        return Err(Error::NotInSubcategory {
            reason: "not a non-invertible embedding, inner face or degeneracy".into(),
        });
    }
    let (s, t) = (&phi.source, &phi.target);
    if c.is_embedding {
        let gap = t.internal_edges().len() as isize - s.internal_edges().len() as isize;
        let into_star = s.is_edge() && t.vertex_count() == 1 && t.internal_edges().is_empty();
        return Ok(if gap == 1 || into_star { Generator::OuterCoface } else { Generator::None });
    }
    let pieces: Vec<Arc<Graph>> =
        phi.vertices.iter().map(|cl| cl.representative(t).source).collect();
    let is_star = |h: &Graph| h.vertex_count() == 1 && h.internal_edges().is_empty();
    let special: Vec<&Arc<Graph>> = pieces.iter().filter(|h| !is_star(h)).collect();
    if special.len() != 1 {
        return Ok(Generator::None);
    }
    let h = special[0];
    Ok(if c.in_plus_active && !h.is_edge() && h.internal_edges().len() == 1 {
        Generator::InnerCoface
    } else if c.in_minus && h.is_edge() {
        Generator::Codegeneracy
    } else {
        Generator::None
    })
}
