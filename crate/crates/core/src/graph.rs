//! Graphs with loose ends, their standard families and structural queries.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::Label;

/// Index of an arc inside one [`Graph`]. Arcs are numbered in label order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ArcId(pub u32);

/// Index of a vertex inside one [`Graph`]. Vertices are numbered in label order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub u32);

impl ArcId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Which category a computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Core,
    /// Graphs may be nodeless loops.
    Extended,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Core => "core",
            Mode::Extended => "extended",
        })
    }
}

/// A graph in the sense of Joyal and Kock, possibly with an explicit boundary.
///
/// The arc set carries a fixed-point-free involution `i`; a subset `D` of
/// arcs points at vertices via `t`; the boundary is the set of loose ends.
/// Values are immutable and always valid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    arcs: Vec<Label>,
    vertices: Vec<Label>,
    inv: Vec<ArcId>,
    target: Vec<Option<VertexId>>,
    boundary: Vec<bool>,
    nbhd: Vec<Vec<ArcId>>,
}

/// Unvalidated graph data with arbitrary label order. Indices refer to
/// positions in `arcs` and `vertices`.
#[derive(Clone, Debug, Default)]
pub(crate) struct RawGraph {
    pub arcs: Vec<Label>,
    pub inv: Vec<usize>,
    pub target: Vec<Option<usize>>,
    pub boundary: Option<Vec<bool>>,
    pub vertices: Vec<Label>,
}

/// The result of validating a [`RawGraph`]: the graph and where each raw
/// index ended up.
pub(crate) struct Built {
    pub graph: Graph,
    pub arc_index: Vec<ArcId>,
    pub vertex_index: Vec<VertexId>,
}

impl RawGraph {
    pub fn add_arc(&mut self, label: Label) -> usize {
        self.arcs.push(label);
        self.inv.push(usize::MAX);
        self.target.push(None);
        self.arcs.len() - 1
    }

    pub fn pair(&mut self, a: usize, b: usize) {
        self.inv[a] = b;
        self.inv[b] = a;
    }

    pub fn add_vertex(&mut self, label: Label) -> usize {
        self.vertices.push(label);
        self.vertices.len() - 1
    }

    pub fn build(self) -> Result<Built> {
        let n = self.arcs.len();
        let mut arc_order: Vec<usize> = (0..n).collect();
        arc_order.sort_by(|&x, &y| self.arcs[x].cmp(&self.arcs[y]));
        for w in arc_order.windows(2) {
            if self.arcs[w[0]] == self.arcs[w[1]] {
                return Err(Error::DuplicateIdentifier { id: self.arcs[w[0]].to_string() });
            }
        }
        let mut vertex_order: Vec<usize> = (0..self.vertices.len()).collect();
        vertex_order.sort_by(|&x, &y| self.vertices[x].cmp(&self.vertices[y]));
        for w in vertex_order.windows(2) {
            if self.vertices[w[0]] == self.vertices[w[1]] {
                return Err(Error::DuplicateIdentifier { id: self.vertices[w[0]].to_string() });
            }
        }
        let mut arc_index = vec![ArcId(0); n];
        for (new, &old) in arc_order.iter().enumerate() {
            arc_index[old] = ArcId(new as u32);
        }
        let mut vertex_index = vec![VertexId(0); self.vertices.len()];
        for (new, &old) in vertex_order.iter().enumerate() {
            vertex_index[old] = VertexId(new as u32);
        }

        let mut inv = vec![ArcId(0); n];
        let mut target = vec![None; n];
        let mut boundary = vec![false; n];
        for old in 0..n {
            let partner = self.inv[old];
            if partner == old {
                return Err(Error::InvolutionFixedPoint { arc: self.arcs[old].to_string() });
            }
            if partner >= n || self.inv[partner] != old {
                return Err(Error::UnknownArc { arc: format!("partner of {}", self.arcs[old]) });
            }
            let new = arc_index[old].index();
            inv[new] = arc_index[partner];
            target[new] = self.target[old].map(|v| vertex_index[v]);
            boundary[new] = match &self.boundary {
                Some(b) => b[old],
                None => self.target[old].is_none(),
            };
        }
        let graph = Graph::from_sorted(
            arc_order.iter().map(|&o| self.arcs[o].clone()).collect(),
            vertex_order.iter().map(|&o| self.vertices[o].clone()).collect(),
            inv,
            target,
            boundary,
        )?;
        Ok(Built { graph, arc_index, vertex_index })
    }
}

/// Convenience builder working with labels.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    pairs: Vec<(Label, Label)>,
    vertices: Vec<(Label, Vec<Label>)>,
    boundary: Option<Vec<Label>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares the involutive pair `a ↔ b`.
    pub fn pair(mut self, a: impl Into<Label>, b: impl Into<Label>) -> Self {
        self.pairs.push((a.into(), b.into()));
        self
    }

    /// Declares a vertex with the given neighborhood.
    pub fn vertex<L: Into<Label>>(
        mut self,
        v: impl Into<Label>,
        nbhd: impl IntoIterator<Item = L>,
    ) -> Self {
        self.vertices.push((v.into(), nbhd.into_iter().map(Into::into).collect()));
        self
    }

    /// Sets an explicit boundary. Without it the boundary is `A \ D`.
    pub fn boundary<L: Into<Label>>(mut self, arcs: impl IntoIterator<Item = L>) -> Self {
        self.boundary = Some(arcs.into_iter().map(Into::into).collect());
        self
    }

    pub fn build(self) -> Result<Graph> {
        let mut raw = RawGraph::default();
        let mut index: HashMap<Label, usize> = HashMap::new();
        for (a, b) in &self.pairs {
            if a == b {
                return Err(Error::InvolutionFixedPoint { arc: a.to_string() });
            }
            for l in [a, b] {
                if index.contains_key(l) {
                    return Err(Error::DuplicateIdentifier { id: l.to_string() });
                }
                index.insert(l.clone(), raw.add_arc(l.clone()));
            }
            raw.pair(index[a], index[b]);
        }
        for (v, nbhd) in &self.vertices {
            let vi = raw.add_vertex(v.clone());
            for a in nbhd {
                let ai = *index.get(a).ok_or_else(|| Error::UnknownArc { arc: a.to_string() })?;
                if raw.target[ai].is_some() {
                    return Err(Error::ArcInTwoNeighborhoods { arc: a.to_string() });
                }
                raw.target[ai] = Some(vi);
            }
        }
        if let Some(b) = &self.boundary {
            let mut flags = vec![false; raw.arcs.len()];
            for a in b {
                let ai = *index.get(a).ok_or_else(|| Error::UnknownArc { arc: a.to_string() })?;
                flags[ai] = true;
            }
            raw.boundary = Some(flags);
        }
        Ok(raw.build()?.graph)
    }
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Validates already-sorted data and derives neighborhoods.
    fn from_sorted(
        arcs: Vec<Label>,
        vertices: Vec<Label>,
        inv: Vec<ArcId>,
        target: Vec<Option<VertexId>>,
        boundary: Vec<bool>,
    ) -> Result<Graph> {
        let mut nbhd = vec![Vec::new(); vertices.len()];
        for (a, t) in target.iter().enumerate() {
            if let Some(v) = t {
                nbhd[v.index()].push(ArcId(a as u32));
            }
        }
        let g = Graph { arcs, vertices, inv, target, boundary, nbhd };
        g.check_boundary()?;
        Ok(g)
    }

    fn check_boundary(&self) -> Result<()> {
        for a in self.arcs() {
            let ia = self.inv(a);
            if self.is_boundary(a) && self.in_domain(a) {
                return Err(Error::BoundaryViolation {
                    reason: format!("boundary arc {} points at a vertex", self.arc_label(a)),
                });
            }
            if self.in_domain(ia) && !self.in_domain(a) && !self.is_boundary(a) {
                return Err(Error::BoundaryViolation {
                    reason: format!("loose end {} is missing from the boundary", self.arc_label(a)),
                });
            }
            if self.is_boundary(a) && !self.in_domain(ia) && !self.is_boundary(ia) {
                return Err(Error::BoundaryViolation {
                    reason: format!(
                        "boundary is not closed under the involution at {}",
                        self.arc_label(a)
                    ),
                });
            }
        }
        Ok(())
    }

    /// The exceptional edge `†` with arcs `0`, `0†`.
    pub fn edge() -> Graph {
        Graph::linear(0)
    }

    /// The star `☆_n`: one vertex `v` with neighborhood `1..n` and boundary `1†..n†`.
    pub fn star(n: usize) -> Graph {
        let mut b = Graph::builder();
        for k in 1..=n {
            b = b.pair(k, Label::from(k).daggered());
        }
        b.vertex("v", (1..=n).map(Label::from)).build().expect("stars are valid")
    }

    /// The linear graph `L_n` with vertices `1..n` and boundary `{0, n†}`.
    pub fn linear(n: usize) -> Graph {
        let mut b = Graph::builder();
        for k in 0..=n {
            b = b.pair(k, Label::from(k).daggered());
        }
        for k in 1..=n {
            b = b.vertex(k, [Label::from(k - 1).daggered(), Label::from(k)]);
        }
        b.build().expect("linear graphs are valid")
    }

    /// The loop `C_n` with vertices `1..n` and no boundary. `C_0` is the
    /// nodeless loop and exists only in extended mode.
    pub fn cycle(n: usize, mode: Mode) -> Result<Graph> {
        if n == 0 {
            return match mode {
                Mode::Core => Err(Error::NodelessLoopInSafeMode),
                Mode::Extended => Ok(Graph::nodeless_loop()),
            };
        }
        let mut b = Graph::builder();
        for k in 1..=n {
            b = b.pair(k, Label::from(k).daggered());
        }
        for k in 1..=n {
            let prev = if k == 1 { n } else { k - 1 };
            b = b.vertex(k, [Label::from(k), Label::from(prev).daggered()]);
        }
        b.build()
    }

    /// The vertex-free circle with arcs `0`, `0†` and empty boundary.
    pub fn nodeless_loop() -> Graph {
        Graph::builder()
            .pair("0", "0†")
            .boundary(Vec::<Label>::new())
            .build()
            .expect("nodeless loop is a valid extended graph")
    }

    /// A star with an arbitrary labelled neighborhood: arcs `a` and `a†`
    /// for each given label, one vertex.
    pub fn star_on(vertex: Label, labels: &[Label]) -> Result<Graph> {
        let mut b = Graph::builder();
        for l in labels {
            b = b.pair(l.clone(), l.daggered());
        }
        b.vertex(vertex, labels.iter().cloned()).build()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arcs(&self) -> impl DoubleEndedIterator<Item = ArcId> + ExactSizeIterator + Clone {
        (0..self.arcs.len() as u32).map(ArcId)
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator + Clone {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn arc_label(&self, a: ArcId) -> &Label {
        &self.arcs[a.index()]
    }

    pub fn vertex_label(&self, v: VertexId) -> &Label {
        &self.vertices[v.index()]
    }

    pub fn arc_labels(&self) -> &[Label] {
        &self.arcs
    }

    pub fn vertex_labels(&self) -> &[Label] {
        &self.vertices
    }

    pub fn arc_by_label(&self, l: &Label) -> Option<ArcId> {
        self.arcs.binary_search(l).ok().map(|i| ArcId(i as u32))
    }

    pub fn vertex_by_label(&self, l: &Label) -> Option<VertexId> {
        self.vertices.binary_search(l).ok().map(|i| VertexId(i as u32))
    }

    /// Looks up an arc by label, failing with `UnknownArc`.
    pub fn arc(&self, l: &str) -> Result<ArcId> {
        self.arc_by_label(&Label::from(l)).ok_or_else(|| Error::UnknownArc { arc: l.to_owned() })
    }

    /// Looks up a vertex by label, failing with `UnknownVertex`.
    pub fn vertex(&self, l: &str) -> Result<VertexId> {
        self.vertex_by_label(&Label::from(l))
            .ok_or_else(|| Error::UnknownVertex { vertex: l.to_owned() })
    }

    pub fn inv(&self, a: ArcId) -> ArcId {
        self.inv[a.index()]
    }

    pub fn target(&self, a: ArcId) -> Option<VertexId> {
        self.target[a.index()]
    }

    pub fn in_domain(&self, a: ArcId) -> bool {
        self.target[a.index()].is_some()
    }

    pub fn is_boundary(&self, a: ArcId) -> bool {
        self.boundary[a.index()]
    }

    /// `ð(G)` in arc order.
    pub fn boundary(&self) -> Vec<ArcId> {
        self.arcs().filter(|&a| self.is_boundary(a)).collect()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// `nbhd(v) = t⁻¹(v)` in arc order.
    pub fn nbhd(&self, v: VertexId) -> &[ArcId] {
        &self.nbhd[v.index()]
    }

    pub fn neighborhood(&self, v: &str) -> Result<&[ArcId]> {
        Ok(self.nbhd(self.vertex(v)?))
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.nbhd[v.index()].len()
    }

    /// Involution orbits `[a, ia]`, least arc first, in order.
    pub fn edges(&self) -> Vec<[ArcId; 2]> {
        self.arcs().filter(|&a| a < self.inv(a)).map(|a| [a, self.inv(a)]).collect()
    }

    /// Orbits with both arcs in `D`.
    pub fn internal_edges(&self) -> Vec<[ArcId; 2]> {
        self.edges()
            .into_iter()
            .filter(|&[a, b]| self.in_domain(a) && self.in_domain(b))
            .collect()
    }

    pub fn is_internal(&self, a: ArcId) -> bool {
        self.in_domain(a) && self.in_domain(self.inv(a))
    }

    /// True when the boundary is exactly `A \ D`.
    pub fn is_safe(&self) -> bool {
        self.arcs().all(|a| self.is_boundary(a) != self.in_domain(a))
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty() && self.vertices.is_empty()
    }

    /// True for graphs isomorphic to `†`.
    pub fn is_edge(&self) -> bool {
        self.vertices.is_empty() && self.arcs.len() == 2 && self.boundary_len() == 2
    }

    pub fn is_nodeless_loop(&self) -> bool {
        self.vertices.is_empty() && self.arcs.len() == 2 && self.boundary_len() == 0
    }

    /// Connected components, each with the labels it had in `self`.
    pub fn connected_components(&self) -> Vec<Graph> {
        let n = self.arcs.len();
        let mut parent: Vec<usize> = (0..n + self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let union = |p: &mut Vec<usize>, x: usize, y: usize| {
            let (rx, ry) = (find(p, x), find(p, y));
            if rx != ry {
                p[rx.max(ry)] = rx.min(ry);
            }
        };
        for a in self.arcs() {
            union(&mut parent, a.index(), self.inv(a).index());
            if let Some(v) = self.target(a) {
                union(&mut parent, a.index(), n + v.index());
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut member = vec![0; parent.len()];
        for x in 0..parent.len() {
            let r = find(&mut parent, x);
            let pos = match roots.iter().position(|&y| y == r) {
                Some(p) => p,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            member[x] = pos;
        }
        (0..roots.len())
            .map(|c| {
                let keep_arc: Vec<bool> = (0..n).map(|a| member[a] == c).collect();
                let keep_vertex: Vec<bool> =
                    (0..self.vertices.len()).map(|v| member[n + v] == c).collect();
                self.restrict_to(&keep_arc, &keep_vertex)
            })
            .collect()
    }

    /// Nonempty and not a nontrivial disjoint union.
    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.connected_components().len() == 1
    }

    /// The subgraph on the kept arcs and vertices. Kept arcs must be closed
    /// under the involution, and kept arcs in `D` must point at kept vertices.
    fn restrict_to(&self, keep_arc: &[bool], keep_vertex: &[bool]) -> Graph {
        let mut arc_new = vec![u32::MAX; self.arcs.len()];
        let mut arcs = Vec::new();
        for a in self.arcs() {
            if keep_arc[a.index()] {
                arc_new[a.index()] = arcs.len() as u32;
                arcs.push(a);
            }
        }
        let mut vertex_new = vec![u32::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for v in self.vertices() {
            if keep_vertex[v.index()] {
                vertex_new[v.index()] = vertices.len() as u32;
                vertices.push(v);
            }
        }
        Graph::from_sorted(
            arcs.iter().map(|&a| self.arc_label(a).clone()).collect(),
            vertices.iter().map(|&v| self.vertex_label(v).clone()).collect(),
            arcs.iter().map(|&a| ArcId(arc_new[self.inv(a).index()])).collect(),
            arcs.iter()
                .map(|&a| self.target(a).map(|v| VertexId(vertex_new[v.index()])))
                .collect(),
            arcs.iter().map(|&a| self.is_boundary(a)).collect(),
        )
        .expect("restriction of a valid graph is valid")
    }

    /// Deletes every edge that contains one of the given arcs. Vertices are
    /// kept; the boundary is intersected with the remaining arcs.
    pub fn delete(&self, arcs: &[ArcId]) -> Graph {
        let mut keep = vec![true; self.arcs.len()];
        for &a in arcs {
            keep[a.index()] = false;
            keep[self.inv(a).index()] = false;
        }
        self.restrict_to(&keep, &vec![true; self.vertices.len()])
    }

    /// `G` with its boundary edges deleted.
    pub fn core(&self) -> Graph {
        self.delete(&self.boundary())
    }

    /// `|V| + |E_i|` in core mode; in extended mode `†` has degree 0, `☆_0`
    /// degree 1, the nodeless loop degree 2 and every other graph one more
    /// than its core degree.
    pub fn degree(&self, mode: Mode) -> Result<usize> {
        let base = self.vertex_count() + self.internal_edges().len();
        match mode {
            Mode::Core if self.is_nodeless_loop() => Err(Error::NodelessLoopInCoreMode),
            Mode::Core => Ok(base),
            Mode::Extended if self.is_nodeless_loop() => Ok(2),
            Mode::Extended if self.is_edge() => Ok(0),
            Mode::Extended if self.arcs.is_empty() && self.vertices.len() == 1 => Ok(1),
            Mode::Extended => Ok(base + 1),
        }
    }

    /// First Betti number of a connected graph.
    pub fn betti1(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::DisconnectedInput);
        }
        if self.is_nodeless_loop() {
            return Ok(1);
        }
        if self.is_edge() {
            return Ok(0);
        }
        Ok(self.internal_edges().len() + 1 - self.vertex_count())
    }

    /// Arc labels as a set, handy in tests.
    pub fn label_set(&self, arcs: &[ArcId]) -> BTreeSet<Label> {
        arcs.iter().map(|&a| self.arc_label(a).clone()).collect()
    }

    /// Renders a list of arcs as `{a, b, c}`.
    pub fn show_arcs(&self, arcs: &[ArcId]) -> String {
        let names: Vec<&str> = arcs.iter().map(|&a| self.arc_label(a).as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }

    pub(crate) fn to_raw(&self) -> RawGraph {
        RawGraph {
            arcs: self.arcs.clone(),
            inv: self.inv.iter().map(|a| a.index()).collect(),
            target: self.target.iter().map(|t| t.map(|v| v.index())).collect(),
            boundary: Some(self.boundary.clone()),
            vertices: self.vertices.clone(),
        }
    }

    /// The same graph with every arc and vertex label replaced.
    pub fn relabel(
        &self,
        arc: impl Fn(ArcId) -> Label,
        vertex: impl Fn(VertexId) -> Label,
    ) -> Result<(Graph, Vec<ArcId>, Vec<VertexId>)> {
        let mut raw = self.to_raw();
        raw.arcs = self.arcs().map(arc).collect();
        raw.vertices = self.vertices().map(vertex).collect();
        let built = raw.build()?;
        Ok((built.graph, built.arc_index, built.vertex_index))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ arcs: [")?;
        for a in self.arcs() {
            if a.0 > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}↔{}", self.arc_label(a), self.arc_label(self.inv(a)))?;
            if let Some(v) = self.target(a) {
                write!(f, "@{}", self.vertex_label(v))?;
            }
            if self.is_boundary(a) {
                write!(f, "*")?;
            }
        }
        write!(f, "], vertices: {:?} }}", self.vertices.iter().map(|l| l.as_str()).collect::<Vec<_>>())
    }
}
