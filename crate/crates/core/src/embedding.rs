//! Étale maps, embeddings and the finite set `Emb(G)` of embedding classes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ArcId, Graph, Mode, RawGraph, VertexId};
use crate::iso::{isomorphisms, GraphIso};
use crate::label::{fresh_label, Label};

/// A diagram map `source → target` given by arc and vertex tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    pub arcs: Vec<ArcId>,
    pub vertices: Vec<VertexId>,
}

/// Why a candidate map is not étale (or not an embedding).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EtaleFailure {
    TableSize,
    NotInvolutive { arc: String },
    TargetSquare { arc: String },
    NotLocallyBijective { vertex: String },
    LooseArc { arc: String },
    VertexNotInjective { vertex: String },
}

impl fmt::Display for EtaleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaleFailure::TableSize => write!(f, "tables do not match the graphs"),
            EtaleFailure::NotInvolutive { arc } => write!(f, "involution not preserved at {arc}"),
            EtaleFailure::TargetSquare { arc } => write!(f, "target map not preserved at {arc}"),
            EtaleFailure::NotLocallyBijective { vertex } => {
                write!(f, "neighborhood of {vertex} is not mapped bijectively")
            }
            EtaleFailure::LooseArc { arc } => {
                write!(f, "arc {arc} outside boundary and domain is not sent to such an arc")
            }
            EtaleFailure::VertexNotInjective { vertex } => {
                write!(f, "vertex {vertex} is hit twice")
            }
        }
    }
}

/// Checks the étale conditions; `mode` decides whether the extra
/// condition on arcs outside `ð ⨿ D` applies.
pub fn check_etale(
    source: &Graph,
    target: &Graph,
    arcs: &[ArcId],
    vertices: &[VertexId],
    mode: Mode,
) -> Result<(), EtaleFailure> {
    if arcs.len() != source.arc_count()
        || vertices.len() != source.vertex_count()
        || arcs.iter().any(|b| b.index() >= target.arc_count())
        || vertices.iter().any(|w| w.index() >= target.vertex_count())
    {
        return Err(EtaleFailure::TableSize);
    }
    for a in source.arcs() {
        let b = arcs[a.index()];
        let name = || source.arc_label(a).to_string();
        if arcs[source.inv(a).index()] != target.inv(b) {
            return Err(EtaleFailure::NotInvolutive { arc: name() });
        }
        if let Some(v) = source.target(a) {
            if target.target(b) != Some(vertices[v.index()]) {
                return Err(EtaleFailure::TargetSquare { arc: name() });
            }
        } else if mode == Mode::Extended
            && !source.is_boundary(a)
            && (target.is_boundary(b) || target.in_domain(b))
        {
            return Err(EtaleFailure::LooseArc { arc: name() });
        }
    }
    for v in source.vertices() {
        let w = vertices[v.index()];
        let image: BTreeSet<ArcId> = source.nbhd(v).iter().map(|a| arcs[a.index()]).collect();
        if image.len() != source.valence(v) || image.len() != target.valence(w) {
            return Err(EtaleFailure::NotLocallyBijective {
                vertex: source.vertex_label(v).to_string(),
            });
        }
    }
    Ok(())
}

/// Étale and injective on vertices.
pub fn check_embedding(
    source: &Graph,
    target: &Graph,
    arcs: &[ArcId],
    vertices: &[VertexId],
    mode: Mode,
) -> Result<(), EtaleFailure> {
    check_etale(source, target, arcs, vertices, mode)?;
    let mut seen = vec![false; target.vertex_count()];
    for (v, w) in vertices.iter().enumerate() {
        if std::mem::replace(&mut seen[w.index()], true) {
            return Err(EtaleFailure::VertexNotInjective {
                vertex: source.vertex_label(VertexId(v as u32)).to_string(),
            });
        }
    }
    Ok(())
}

pub fn is_etale(source: &Graph, target: &Graph, arcs: &[ArcId], vertices: &[VertexId]) -> bool {
    check_etale(source, target, arcs, vertices, Mode::Extended).is_ok()
}

pub fn is_embedding(source: &Graph, target: &Graph, arcs: &[ArcId], vertices: &[VertexId]) -> bool {
    check_embedding(source, target, arcs, vertices, Mode::Extended).is_ok()
}

impl Embedding {
    /// Validates the tables and wraps them.
    pub fn new(
        source: Arc<Graph>,
        target: Arc<Graph>,
        arcs: Vec<ArcId>,
        vertices: Vec<VertexId>,
    ) -> Result<Embedding, EtaleFailure> {
        check_embedding(&source, &target, &arcs, &vertices, Mode::Extended)?;
        Ok(Embedding { source, target, arcs, vertices })
    }

    pub fn identity(g: Arc<Graph>) -> Embedding {
        Embedding {
            arcs: g.arcs().collect(),
            vertices: g.vertices().collect(),
            source: g.clone(),
            target: g,
        }
    }

    pub fn apply(&self, a: ArcId) -> ArcId {
        self.arcs[a.index()]
    }

    /// `ð(f)`, the image of the source boundary, in arc order.
    pub fn boundary(&self) -> Vec<ArcId> {
        let mut b: Vec<ArcId> = self.source.boundary().iter().map(|&a| self.apply(a)).collect();
        b.sort_unstable();
        b
    }

    /// The vertex sum `ς(f)`, in vertex order.
    pub fn vertex_sum(&self) -> Vec<VertexId> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }

    pub fn class(&self) -> EmbClass {
        EmbClass { boundary: self.boundary(), edge: self.source.is_edge() }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Embedding) -> Result<Embedding> {
        if *first.target != *self.source {
            return Err(Error::SourceTargetMismatch {
                reason: "embeddings are not composable".into(),
            });
        }
        Ok(Embedding {
            source: first.source.clone(),
            target: self.target.clone(),
            arcs: first.arcs.iter().map(|&a| self.apply(a)).collect(),
            vertices: first.vertices.iter().map(|v| self.vertices[v.index()]).collect(),
        })
    }

    /// Precomposition with an isomorphism into the source.
    pub fn after_iso(&self, z: &GraphIso, source: Arc<Graph>) -> Embedding {
        Embedding {
            source,
            target: self.target.clone(),
            arcs: z.arcs.iter().map(|&a| self.apply(a)).collect(),
            vertices: z.vertices.iter().map(|v| self.vertices[v.index()]).collect(),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.source.arc_count() == self.target.arc_count()
            && self.source.vertex_count() == self.target.vertex_count()
            && self.source.boundary_len() == self.target.boundary_len()
            && self.arcs.iter().collect::<BTreeSet<_>>().len() == self.arcs.len()
    }
}

/// The unique `z` with `f = h ∘ z`, when `f` and `h` are in the same class.
pub fn class_equal(f: &Embedding, h: &Embedding) -> Option<GraphIso> {
    if f.target != h.target || f.class() != h.class() {
        return None;
    }
    isomorphisms(&f.source, &h.source).into_iter().find(|z| {
        z.arcs.iter().enumerate().all(|(a, &b)| h.arcs[b.index()] == f.arcs[a])
            && z.vertices.iter().enumerate().all(|(v, w)| h.vertices[w.index()] == f.vertices[v])
    })
}

/// An element of `Emb(G)`: an embedding into `G` up to isomorphism of the
/// source, identified by the image of the source boundary and by whether
/// the source is the exceptional edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmbClass {
    pub boundary: Vec<ArcId>,
    pub edge: bool,
}

impl EmbClass {
    /// The class of `† → G` hitting the edge of `a`.
    pub fn edge_of(g: &Graph, a: ArcId) -> EmbClass {
        let mut boundary = vec![a, g.inv(a)];
        boundary.sort_unstable();
        EmbClass { boundary, edge: true }
    }

    /// The class of `ι_v`.
    pub fn of_vertex(g: &Graph, v: VertexId) -> EmbClass {
        let mut boundary: Vec<ArcId> = g.nbhd(v).iter().map(|&a| g.inv(a)).collect();
        boundary.sort_unstable();
        EmbClass { boundary, edge: false }
    }

    /// The class of the identity of a connected graph.
    pub fn identity(g: &Graph) -> EmbClass {
        EmbClass { boundary: g.boundary(), edge: g.is_edge() }
    }

    /// The unique non-edge class with the given boundary.
    pub fn with_boundary(g: &Graph, mut boundary: Vec<ArcId>) -> Option<EmbClass> {
        boundary.sort_unstable();
        boundary.dedup();
        piece_vertices(g, &boundary)?;
        Some(EmbClass { boundary, edge: false })
    }

    /// `ς` of the class: the target vertices it covers, in order.
    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        if self.edge {
            Vec::new()
        } else {
            piece_vertices(g, &self.boundary).expect("class keys are valid")
        }
    }

    pub fn is_identity_of(&self, g: &Graph) -> bool {
        *self == EmbClass::identity(g)
    }

    pub fn show(&self, g: &Graph) -> String {
        format!("{}{}", if self.edge { "edge " } else { "" }, g.show_arcs(&self.boundary))
    }

    /// Canonical representative: `†` for edge classes, otherwise the piece
    /// of `g` spanned by the class vertices with snipped edges cut open.
    pub fn representative(&self, g: &Arc<Graph>) -> Embedding {
        if self.edge {
            let e = Arc::new(Graph::edge());
            let a = self.boundary[0];
            return Embedding {
                source: e,
                target: g.clone(),
                arcs: vec![a, g.inv(a)],
                vertices: Vec::new(),
            };
        }
        if g.is_nodeless_loop() {
            return Embedding::identity(g.clone());
        }
        build_piece(g, &self.boundary)
    }
}

/// Vertex set of the non-edge class with boundary `b`, or `None` when no
/// embedding has that boundary.
pub(crate) fn piece_vertices(g: &Graph, b: &[ArcId]) -> Option<Vec<VertexId>> {
    let in_b = |a: ArcId| b.binary_search(&a).is_ok();
    if b.is_empty() {
        let whole = g.boundary().is_empty() && g.is_connected();
        return whole.then(|| g.vertices().collect());
    }
    let mut seeds = Vec::with_capacity(b.len());
    for &x in b {
        seeds.push(g.target(g.inv(x))?);
    }
    let mut inside = vec![false; g.vertex_count()];
    let mut stack = vec![seeds[0]];
    inside[seeds[0].index()] = true;
    while let Some(w) = stack.pop() {
        for &a in g.nbhd(w) {
            let ia = g.inv(a);
            if in_b(ia) {
                continue;
            }
            if in_b(a) {
                return None;
            }
            let u = g.target(ia)?;
            if !inside[u.index()] {
                inside[u.index()] = true;
                stack.push(u);
            }
        }
    }
    if seeds.iter().any(|s| !inside[s.index()]) {
        return None;
    }
    Some(g.vertices().filter(|v| inside[v.index()]).collect())
}

/// Builds the canonical representative of a non-edge class.
fn build_piece(g: &Arc<Graph>, b: &[ArcId]) -> Embedding {
    let w = piece_vertices(g, b).expect("class keys are valid");
    let in_b = |a: ArcId| b.binary_search(&a).is_ok();
    let mut raw = RawGraph::default();
    let mut image = Vec::new();
    let mut copy = vec![usize::MAX; g.arc_count()];
    let mut taken: BTreeSet<Label> = BTreeSet::new();
    for (vi, &v) in w.iter().enumerate() {
        raw.add_vertex(g.vertex_label(v).clone());
        for &a in g.nbhd(v) {
            let ai = raw.add_arc(g.arc_label(a).clone());
            raw.target[ai] = Some(vi);
            copy[a.index()] = ai;
            image.push(a);
            taken.insert(g.arc_label(a).clone());
        }
    }
    for &v in &w {
        for &a in g.nbhd(v) {
            let ia = g.inv(a);
            if in_b(ia) {
                let label = fresh_label(g.arc_label(a).daggered(), |l| taken.contains(l));
                taken.insert(label.clone());
                let fi = raw.add_arc(label);
                raw.pair(copy[a.index()], fi);
                image.push(ia);
            } else {
                raw.pair(copy[a.index()], copy[ia.index()]);
            }
        }
    }
    let built = raw.build().expect("pieces are valid graphs");
    let mut arcs = vec![ArcId(0); image.len()];
    for (old, &a) in image.iter().enumerate() {
        arcs[built.arc_index[old].index()] = a;
    }
    let mut vertices = vec![VertexId(0); w.len()];
    for (old, &v) in w.iter().enumerate() {
        vertices[built.vertex_index[old].index()] = v;
    }
    Embedding { source: Arc::new(built.graph), target: g.clone(), arcs, vertices }
}

/// `ι_v : ☆_v → G`.
pub fn vertex_inclusion(g: &Arc<Graph>, v: VertexId) -> Embedding {
    EmbClass::of_vertex(g, v).representative(g)
}

/// Cuts the internal edge `e`: two half inclusions when `e` disconnects
/// `G`, otherwise one inclusion of `G` with `e` cut open.
pub fn snip_edge(g: &Arc<Graph>, a: ArcId) -> Result<Vec<Embedding>> {
    if !g.is_internal(a) {
        return Err(Error::NotInternalEdge { what: g.arc_label(a).to_string() });
    }
    let ia = g.inv(a);
    let mut all_boundary: Vec<ArcId> = g.boundary();
    all_boundary.extend([a, ia]);
    all_boundary.sort_unstable();
    if let Some(w) = piece_vertices(g, &all_boundary) {
        if w.len() == g.vertex_count() {
            let class = EmbClass { boundary: all_boundary, edge: false };
            return Ok(vec![class.representative(g)]);
        }
    }
    let mut out = Vec::new();
    for side in [a, ia] {
        // the half containing t(side) sees the other end as a loose end
        let mut boundary: Vec<ArcId> =
            g.boundary().into_iter().filter(|&x| reaches(g, side, x)).collect();
        boundary.push(g.inv(side));
        boundary.sort_unstable();
        let class = EmbClass { boundary, edge: false };
        out.push(class.representative(g));
    }
    Ok(out)
}

/// Whether boundary arc `x` hangs off the component of `t(from)` once the
/// edge of `from` is removed.
fn reaches(g: &Graph, from: ArcId, x: ArcId) -> bool {
    let removed = [from, g.inv(from)];
    let start = g.target(from).expect("internal");
    let goal = g.target(g.inv(x)).expect("loose ends hang off vertices");
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![start];
    seen[start.index()] = true;
    while let Some(v) = stack.pop() {
        if v == goal {
            return true;
        }
        for &b in g.nbhd(v) {
            if removed.contains(&b) {
                continue;
            }
            if let Some(u) = g.target(g.inv(b)) {
                if !std::mem::replace(&mut seen[u.index()], true) {
                    stack.push(u);
                }
            }
        }
    }
    false
}

/// All of `Emb(G)` in key order.
pub fn embedding_classes(g: &Graph) -> Vec<EmbClass> {
    let mut out: Vec<EmbClass> = g.edges().iter().map(|&[a, _]| EmbClass::edge_of(g, a)).collect();
    if g.is_nodeless_loop() {
        out.push(EmbClass { boundary: Vec::new(), edge: false });
        out.sort();
        return out;
    }
    let n = g.vertex_count();
    assert!(n < 32, "embedding enumeration supports fewer than 32 vertices");
    for mask in 1u32..(1u32 << n) {
        let w: Vec<VertexId> = g.vertices().filter(|v| mask >> v.0 & 1 == 1).collect();
        let inner: Vec<ArcId> = g
            .internal_edges()
            .into_iter()
            .filter(|&[a, b]| {
                let inside = |x: ArcId| mask >> g.target(x).expect("internal").0 & 1 == 1;
                inside(a) && inside(b)
            })
            .map(|[a, _]| a)
            .collect();
        let outer: Vec<ArcId> = w
            .iter()
            .flat_map(|&v| g.nbhd(v).iter().map(|&a| g.inv(a)))
            .filter(|&x| !g.in_domain(x) || mask >> g.target(x).expect("in domain").0 & 1 == 0)
            .collect();
        for snip in 0u64..(1u64 << inner.len()) {
            let mut boundary = outer.clone();
            for (k, &a) in inner.iter().enumerate() {
                if snip >> k & 1 == 1 {
                    boundary.extend([a, g.inv(a)]);
                }
            }
            boundary.sort_unstable();
            if piece_vertices(g, &boundary).is_some_and(|p| p == w) {
                out.push(EmbClass { boundary, edge: false });
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: &Graph, l: &str) -> ArcId {
        g.arc(l).unwrap()
    }

    #[test]
    fn class_counts() {
        let c2 = Graph::cycle(2, Mode::Core).unwrap();
        assert_eq!(embedding_classes(&c2).len(), 7);
        let c1 = Graph::cycle(1, Mode::Core).unwrap();
        assert_eq!(embedding_classes(&c1).len(), 3);
        assert_eq!(embedding_classes(&Graph::star(3)).len(), 4);
        assert_eq!(embedding_classes(&Graph::nodeless_loop()).len(), 2);
    }

    #[test]
    fn vertex_inclusion_of_a_loop_is_not_arc_injective() {
        let c1 = Arc::new(Graph::cycle(1, Mode::Core).unwrap());
        let f = vertex_inclusion(&c1, VertexId(0));
        assert_eq!(f.source.arc_count(), 4);
        assert_eq!(f.source.boundary_len(), 2);
        assert!(is_embedding(&f.source, &f.target, &f.arcs, &f.vertices));
        assert_eq!(f.vertex_sum(), vec![VertexId(0)]);
    }

    #[test]
    fn snipping() {
        let c1 = Arc::new(Graph::cycle(1, Mode::Core).unwrap());
        let s = snip_edge(&c1, arc(&c1, "1")).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].source.vertex_count(), 1);

        let l2 = Arc::new(Graph::linear(2));
        let s = snip_edge(&l2, arc(&l2, "1")).unwrap();
        assert_eq!(s.len(), 2);
        for f in &s {
            assert!(crate::iso::are_isomorphic(&f.source, &Graph::linear(1)));
        }

        let c2 = Arc::new(Graph::cycle(2, Mode::Core).unwrap());
        let s = snip_edge(&c2, arc(&c2, "2")).unwrap();
        assert_eq!(s.len(), 1);
        assert!(crate::iso::are_isomorphic(&s[0].source, &Graph::linear(2)));
        assert!(matches!(snip_edge(&l2, arc(&l2, "0")), Err(Error::NotInternalEdge { .. })));
    }

    #[test]
    fn representatives_realise_their_keys() {
        let c2 = Arc::new(Graph::cycle(2, Mode::Core).unwrap());
        for c in embedding_classes(&c2) {
            let f = c.representative(&c2);
            assert!(is_embedding(&f.source, &f.target, &f.arcs, &f.vertices));
            assert_eq!(f.class(), c);
        }
    }

    #[test]
    fn the_two_edge_embeddings_differ_by_the_swap() {
        let c2 = Arc::new(Graph::cycle(2, Mode::Core).unwrap());
        let e = Arc::new(Graph::edge());
        let (a, b) = (arc(&c2, "1"), arc(&c2, "1†"));
        let f = Embedding::new(e.clone(), c2.clone(), vec![a, b], vec![]).unwrap();
        let h = Embedding::new(e.clone(), c2.clone(), vec![b, a], vec![]).unwrap();
        let z = class_equal(&f, &h).unwrap();
        assert!(!z.is_identity());
        assert!(class_equal(&f, &f).unwrap().is_identity());
        assert_eq!(c2.label_set(&f.boundary()).len(), 2);
    }
}
