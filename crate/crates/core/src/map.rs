//! Graphical maps: validation, composition, images and exhaustive enumeration.

use std::fmt;
use std::sync::Arc;

use crate::embedding::{piece_vertices, EmbClass, Embedding};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{ArcId, Graph, Mode, VertexId};
use crate::substitution::{substitute, Part};

/// Default cap on the number of candidate arc maps an enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// A graphical map `φ = (φ₀, φ₁)`: an involutive arc map together with an
/// embedding class for every source vertex.
#[derive(Clone)]
pub struct GraphicalMap {
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    pub arcs: Vec<ArcId>,
    pub vertices: Vec<EmbClass>,
    pub mode: Mode,
}

impl PartialEq for GraphicalMap {
    fn eq(&self, other: &Self) -> bool {
        self.arcs == other.arcs
            && self.vertices == other.vertices
            && self.source == other.source
            && self.target == other.target
    }
}

impl Eq for GraphicalMap {}

impl fmt::Debug for GraphicalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphicalMap {{ ")?;
        for a in self.source.arcs() {
            write!(
                f,
                "{}→{} ",
                self.source.arc_label(a),
                self.target.arc_label(self.apply(a))
            )?;
        }
        for v in self.source.vertices() {
            write!(
                f,
                "| {}→{} ",
                self.source.vertex_label(v),
                self.vertices[v.index()].show(&self.target)
            )?;
        }
        write!(f, "}}")
    }
}

/// The image factorization `φ = k ∘ φ′` computed by substitution.
#[derive(Clone, Debug)]
pub struct ImageFactorization {
    pub active: GraphicalMap,
    pub embedding: Embedding,
}

fn check_mode(source: &Graph, target: &Graph, mode: Mode) -> Result<()> {
    if mode == Mode::Core && !(source.is_safe() && target.is_safe()) {
        return Err(Error::ModeMismatch {
            reason: "nodeless loops need extended mode".into(),
        });
    }
    Ok(())
}

/// Boundary of the non-edge class a vertex would be sent to.
fn vertex_boundary(source: &Graph, arcs: &[ArcId], v: VertexId) -> Vec<ArcId> {
    let mut b: Vec<ArcId> = source.nbhd(v).iter().map(|&a| arcs[source.inv(a).index()]).collect();
    b.sort_unstable();
    b
}

fn edge_shape(source: &Graph, target: &Graph, arcs: &[ArcId], v: VertexId) -> Option<EmbClass> {
    match source.nbhd(v) {
        &[a, b] if arcs[a.index()] == target.inv(arcs[b.index()]) => {
            Some(EmbClass::edge_of(target, arcs[a.index()]))
        }
        _ => None,
    }
}

impl GraphicalMap {
    /// Builds a map from its arc table and the set of vertices sent to edges.
    pub fn new(
        source: Arc<Graph>,
        target: Arc<Graph>,
        arcs: Vec<ArcId>,
        edge_flags: &[bool],
        mode: Mode,
    ) -> Result<GraphicalMap> {
        check_mode(&source, &target, mode)?;
        check_arc_table(&source, &target, &arcs)?;
        if edge_flags.len() != source.vertex_count() {
            return Err(Error::SourceTargetMismatch {
                reason: "one edge flag per source vertex is required".into(),
            });
        }
        let mut vertices = Vec::with_capacity(source.vertex_count());
        for v in source.vertices() {
            let class = if edge_flags[v.index()] {
                edge_shape(&source, &target, &arcs, v).ok_or_else(|| Error::EdgeFlagShapeError {
                    vertex: source.vertex_label(v).to_string(),
                })?
            } else {
                non_edge_class(&source, &target, &arcs, v)?
            };
            vertices.push(class);
        }
        let map = GraphicalMap { source, target, arcs, vertices, mode };
        map.check_global()?;
        Ok(map)
    }

    /// Builds a map from explicit classes and validates every condition.
    pub fn from_classes(
        source: Arc<Graph>,
        target: Arc<Graph>,
        arcs: Vec<ArcId>,
        vertices: Vec<EmbClass>,
        mode: Mode,
    ) -> Result<GraphicalMap> {
        let map = GraphicalMap { source, target, arcs, vertices, mode };
        map.validate()?;
        Ok(map)
    }

    /// Rechecks all defining conditions.
    pub fn validate(&self) -> Result<()> {
        check_mode(&self.source, &self.target, self.mode)?;
        check_arc_table(&self.source, &self.target, &self.arcs)?;
        if self.vertices.len() != self.source.vertex_count() {
            return Err(Error::SourceTargetMismatch {
                reason: "one class per source vertex is required".into(),
            });
        }
        for v in self.source.vertices() {
            let c = &self.vertices[v.index()];
            let expected = if c.edge {
                edge_shape(&self.source, &self.target, &self.arcs, v).ok_or_else(|| {
                    Error::EdgeFlagShapeError { vertex: self.source.vertex_label(v).to_string() }
                })?
            } else {
                non_edge_class(&self.source, &self.target, &self.arcs, v)?
            };
            if *c != expected {
                return Err(Error::NoEmbeddingWithBoundary {
                    vertex: self.source.vertex_label(v).to_string(),
                });
            }
        }
        self.check_global()
    }

    /// Conditions (i) and (iii).
    fn check_global(&self) -> Result<()> {
        let mut used = vec![false; self.target.vertex_count()];
        for c in &self.vertices {
            for w in c.vertices(&self.target) {
                if std::mem::replace(&mut used[w.index()], true) {
                    return Err(Error::VertexOverlap {
                        vertex: self.target.vertex_label(w).to_string(),
                    });
                }
            }
        }
        if !collapse_ok(&self.source, &self.target, self.mode, self.vertices.iter().all(|c| c.edge)) {
            return Err(Error::CollapseViolation);
        }
        Ok(())
    }

    pub fn identity(g: Arc<Graph>, mode: Mode) -> GraphicalMap {
        GraphicalMap::from_embedding(&Embedding::identity(g), mode)
    }

    /// The map `(f, v ↦ [ι_{f(v)}])` of an embedding.
    pub fn from_embedding(f: &Embedding, mode: Mode) -> GraphicalMap {
        GraphicalMap {
            source: f.source.clone(),
            target: f.target.clone(),
            arcs: f.arcs.clone(),
            vertices: f.vertices.iter().map(|&w| EmbClass::of_vertex(&f.target, w)).collect(),
            mode,
        }
    }

    pub fn apply(&self, a: ArcId) -> ArcId {
        self.arcs[a.index()]
    }

    pub fn edge_flags(&self) -> Vec<bool> {
        self.vertices.iter().map(|c| c.edge).collect()
    }

    pub fn has_edge_flag(&self) -> bool {
        self.vertices.iter().any(|c| c.edge)
    }

    /// `ð(φ) = φ₀(ð(G))` in arc order.
    pub fn boundary(&self) -> Vec<ArcId> {
        let mut b: Vec<ArcId> = self.source.boundary().iter().map(|&a| self.apply(a)).collect();
        b.sort_unstable();
        b
    }

    /// `φ₀` restricts to a bijection `ð(G) → ð(G′)`.
    pub fn is_active(&self) -> bool {
        let b = self.boundary();
        b.windows(2).all(|w| w[0] != w[1]) && b == self.target.boundary()
    }

    pub fn is_arc_injective(&self) -> bool {
        let mut seen = vec![false; self.target.arc_count()];
        self.arcs.iter().all(|b| !std::mem::replace(&mut seen[b.index()], true))
    }

    pub fn is_arc_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.arc_count()];
        for b in &self.arcs {
            seen[b.index()] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// The embedding this map comes from, if any.
    pub fn to_embedding(&self) -> Option<Embedding> {
        let mut vertices = Vec::with_capacity(self.source.vertex_count());
        for (v, c) in self.source.vertices().zip(&self.vertices) {
            if c.edge {
                return None;
            }
            let w = match self.source.nbhd(v).first() {
                Some(&a) => self.target.target(self.apply(a))?,
                None => match c.vertices(&self.target)[..] {
                    [w] => w,
                    _ => return None,
                },
            };
            if *c != EmbClass::of_vertex(&self.target, w) {
                return None;
            }
            vertices.push(w);
        }
        Some(Embedding {
            source: self.source.clone(),
            target: self.target.clone(),
            arcs: self.arcs.clone(),
            vertices,
        })
    }

    pub fn is_embedding(&self) -> bool {
        self.to_embedding().is_some()
    }

    pub fn is_iso(&self) -> bool {
        self.source.arc_count() == self.target.arc_count()
            && self.source.vertex_count() == self.target.vertex_count()
            && self.is_arc_injective()
            && self.is_active()
            && self.is_embedding()
    }

    /// The image class `im φ ∈ Emb(G′)`, read off from the boundary of `φ`.
    pub fn image(&self) -> EmbClass {
        if self.source.is_edge() {
            return EmbClass::edge_of(&self.target, self.arcs[0]);
        }
        let boundary = self.boundary();
        if !boundary.is_empty() && self.vertices.iter().all(|c| c.edge) {
            return EmbClass::edge_of(&self.target, boundary[0]);
        }
        EmbClass { boundary, edge: false }
    }

    /// `φ|_f`, the restriction along an embedding into the source.
    pub fn restrict(&self, f: &Embedding) -> Result<GraphicalMap> {
        if *f.target != *self.source {
            return Err(Error::SourceTargetMismatch {
                reason: "restriction along an embedding into another graph".into(),
            });
        }
        Ok(GraphicalMap {
            source: f.source.clone(),
            target: self.target.clone(),
            arcs: f.arcs.iter().map(|&a| self.apply(a)).collect(),
            vertices: f.vertices.iter().map(|w| self.vertices[w.index()].clone()).collect(),
            mode: self.mode,
        })
    }

    /// `self ∘ first`. The class of each vertex is the image of the
    /// restriction of `self` along the class `first` assigns to it.
    pub fn after(&self, first: &GraphicalMap) -> Result<GraphicalMap> {
        if *first.target != *self.source {
            return Err(Error::SourceTargetMismatch {
                reason: "maps are not composable".into(),
            });
        }
        if first.mode != self.mode {
            return Err(Error::ModeMismatch {
                reason: format!("{} map after {} map", self.mode, first.mode),
            });
        }
        let vertices = first
            .vertices
            .iter()
            .map(|c| {
                let mut boundary: Vec<ArcId> = c.boundary.iter().map(|&a| self.apply(a)).collect();
                boundary.sort_unstable();
                let collapsed = !boundary.is_empty()
                    && c.vertices(&self.source).iter().all(|w| self.vertices[w.index()].edge);
                if c.edge || collapsed {
                    EmbClass::edge_of(&self.target, boundary[0])
                } else {
                    EmbClass { boundary, edge: false }
                }
            })
            .collect();
        let map = GraphicalMap {
            source: first.source.clone(),
            target: self.target.clone(),
            arcs: first.arcs.iter().map(|&a| self.apply(a)).collect(),
            vertices,
            mode: self.mode,
        };
        debug_assert_eq!(map.validate(), Ok(()), "composite {map:?}");
        Ok(map)
    }

    /// The image factorization built by substituting the chosen
    /// representatives into the source.
    pub fn image_factorization(&self) -> Result<ImageFactorization> {
        if self.source.vertex_count() == 0 {
            let embedding = Embedding {
                source: self.source.clone(),
                target: self.target.clone(),
                arcs: self.arcs.clone(),
                vertices: Vec::new(),
            };
            return Ok(ImageFactorization {
                active: GraphicalMap::identity(self.source.clone(), self.mode),
                embedding,
            });
        }
        let g = &self.source;
        let reps: Vec<Embedding> =
            self.vertices.iter().map(|c| c.representative(&self.target)).collect();
        let parts: Vec<Part> = g
            .vertices()
            .map(|v| {
                let f = &reps[v.index()];
                let matching = g
                    .nbhd(v)
                    .iter()
                    .map(|&a| {
                        let x = g.inv(a);
                        let y = f
                            .source
                            .boundary()
                            .into_iter()
                            .find(|&y| f.apply(y) == self.apply(x))
                            .expect("condition (ii) matches boundaries");
                        (x, y)
                    })
                    .collect();
                Part { graph: f.source.clone(), matching }
            })
            .collect();
        let sub = substitute(g, &parts, self.mode)?;
        let k_graph = Arc::new(sub.graph);
        let mut k_arcs = vec![None; k_graph.arc_count()];
        let mut k_vertices = vec![VertexId(0); k_graph.vertex_count()];
        for v in g.vertices() {
            let f = &reps[v.index()];
            for y in f.source.arcs() {
                let slot = &mut k_arcs[sub.projection[v.index()][y.index()].index()];
                debug_assert!(slot.is_none_or(|b| b == f.apply(y)));
                *slot = Some(f.apply(y));
            }
            for w in f.source.vertices() {
                k_vertices[sub.vertex_inclusion[v.index()][w.index()].index()] =
                    f.vertices[w.index()];
            }
        }
        let embedding = Embedding::new(
            k_graph.clone(),
            self.target.clone(),
            k_arcs.into_iter().map(|b| b.expect("π is surjective")).collect(),
            k_vertices,
        )
        .expect("the image of a graphical map is an embedding");

        let mut arcs = vec![ArcId(0); g.arc_count()];
        for a in g.arcs() {
            let ia = g.inv(a);
            arcs[a.index()] = if let Some(v) = g.target(ia) {
                let (_, y) = parts[v.index()].matching.iter().find(|(x, _)| *x == a).unwrap();
                sub.projection[v.index()][y.index()]
            } else {
                let v = g.target(a).expect("a connected graph with vertices");
                let (_, y) = parts[v.index()].matching.iter().find(|(x, _)| *x == ia).unwrap();
                k_graph.inv(sub.projection[v.index()][y.index()])
            };
        }
        let flags: Vec<bool> = parts.iter().map(|p| p.graph.is_edge()).collect();
        let active = GraphicalMap::new(g.clone(), k_graph, arcs, &flags, self.mode)?;
        Ok(ImageFactorization { active, embedding })
    }

    /// The tables `m` and `x = m^{|A|}` of the stabilization that moves
    /// arcs across vertices sent to edges.
    pub fn x_stabilization(&self) -> (Vec<ArcId>, Vec<ArcId>) {
        let g = &self.source;
        let m: Vec<ArcId> = g
            .arcs()
            .map(|a| match g.target(a) {
                Some(v) if self.vertices[v.index()].edge => {
                    let other = *g.nbhd(v).iter().find(|&&b| b != a).expect("bivalent");
                    g.inv(other)
                }
                _ => a,
            })
            .collect();
        let mut x = m.clone();
        for _ in 1..g.arc_count() {
            x = x.iter().map(|a| m[a.index()]).collect();
        }
        (m, x)
    }
}

fn check_arc_table(source: &Graph, target: &Graph, arcs: &[ArcId]) -> Result<()> {
    if arcs.len() != source.arc_count() || arcs.iter().any(|b| b.index() >= target.arc_count()) {
        return Err(Error::SourceTargetMismatch {
            reason: "arc table does not match the graphs".into(),
        });
    }
    for a in source.arcs() {
        if arcs[source.inv(a).index()] != target.inv(arcs[a.index()]) {
            return Err(Error::NotInvolutive { arc: source.arc_label(a).to_string() });
        }
    }
    Ok(())
}

fn non_edge_class(source: &Graph, target: &Graph, arcs: &[ArcId], v: VertexId) -> Result<EmbClass> {
    let boundary = vertex_boundary(source, arcs, v);
    let err = || Error::NoEmbeddingWithBoundary { vertex: source.vertex_label(v).to_string() };
    if boundary.windows(2).any(|w| w[0] == w[1]) {
        return Err(err());
    }
    piece_vertices(target, &boundary).ok_or_else(err)?;
    Ok(EmbClass { boundary, edge: false })
}

/// Condition (iii), or (iii′) in extended mode.
fn collapse_ok(source: &Graph, target: &Graph, mode: Mode, all_edges: bool) -> bool {
    if !source.boundary().is_empty() || !all_edges {
        return true;
    }
    mode == Mode::Extended && target.is_nodeless_loop()
}

/// Number of involutive arc maps `A(G) → A(G′)`.
pub fn candidate_count(source: &Graph, target: &Graph) -> u128 {
    (target.arc_count() as u128)
        .checked_pow(source.arc_count() as u32 / 2)
        .unwrap_or(u128::MAX)
}

/// Every graphical map `G → G′`, ordered by arc table and then by edge flags.
pub fn enumerate_maps(
    source: &Arc<Graph>,
    target: &Arc<Graph>,
    mode: Mode,
    budget: u128,
    exec: Execution,
) -> Result<Vec<GraphicalMap>> {
    check_mode(source, target, mode)?;
    let needed = candidate_count(source, target);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let orbits: Vec<ArcId> = source.edges().iter().map(|e| e[0]).collect();
    // a vertex is decided once the orbit of its last neighborhood arc is fixed
    let mut ready: Vec<Vec<VertexId>> = vec![Vec::new(); orbits.len() + 1];
    for v in source.vertices() {
        let last = source
            .nbhd(v)
            .iter()
            .map(|&a| orbits.iter().position(|&o| o == a || o == source.inv(a)).unwrap() + 1)
            .max()
            .unwrap_or(0);
        ready[last].push(v);
    }
    let search = Search { source, target, mode, orbits: &orbits, ready: &ready };
    let unassigned = ArcId(u32::MAX);
    if orbits.is_empty() || target.arc_count() == 0 {
        let mut arcs = vec![unassigned; source.arc_count()];
        let mut options = vec![Vec::new(); source.vertex_count()];
        let mut out = Vec::new();
        if orbits.is_empty() && search.decide(0, &arcs, &mut options) {
            search.leaves(&mut arcs, &options, &mut out);
        }
        return Ok(out);
    }
    Ok(exec::flat_map_range(exec, target.arc_count(), |first| {
        let mut arcs = vec![unassigned; source.arc_count()];
        let mut options = vec![Vec::new(); source.vertex_count()];
        let mut out = Vec::new();
        if search.decide(0, &arcs, &mut options) {
            search.assign(0, ArcId(first as u32), &mut arcs, &mut options, &mut out);
        }
        out
    }))
}

type VertexOptions = Vec<Vec<(EmbClass, Vec<VertexId>)>>;

struct Search<'a> {
    source: &'a Arc<Graph>,
    target: &'a Arc<Graph>,
    mode: Mode,
    orbits: &'a [ArcId],
    ready: &'a [Vec<VertexId>],
}

impl Search<'_> {
    /// Fills in the options of the vertices decided at step `k`.
    fn decide(&self, k: usize, arcs: &[ArcId], options: &mut VertexOptions) -> bool {
        for &v in &self.ready[k] {
            let mut opts = Vec::with_capacity(2);
            let boundary = vertex_boundary(self.source, arcs, v);
            if boundary.windows(2).all(|w| w[0] != w[1]) {
                if let Some(w) = piece_vertices(self.target, &boundary) {
                    opts.push((EmbClass { boundary, edge: false }, w));
                }
            }
            if let Some(c) = edge_shape(self.source, self.target, arcs, v) {
                opts.push((c, Vec::new()));
            }
            if opts.is_empty() {
                return false;
            }
            options[v.index()] = opts;
        }
        true
    }

    fn assign(
        &self,
        k: usize,
        image: ArcId,
        arcs: &mut Vec<ArcId>,
        options: &mut VertexOptions,
        out: &mut Vec<GraphicalMap>,
    ) {
        let a = self.orbits[k];
        arcs[a.index()] = image;
        arcs[self.source.inv(a).index()] = self.target.inv(image);
        if !self.decide(k + 1, arcs, options) {
            return;
        }
        if k + 1 == self.orbits.len() {
            self.leaves(arcs, options, out);
            return;
        }
        for b in self.target.arcs() {
            self.assign(k + 1, b, arcs, options, out);
        }
    }

    /// All valid choices among the per-vertex options, in order.
    fn leaves(&self, arcs: &mut [ArcId], options: &VertexOptions, out: &mut Vec<GraphicalMap>) {
        let n = self.source.vertex_count();
        let mut choice = vec![0usize; n];
        let mut used = vec![false; self.target.vertex_count()];
        self.choose(0, arcs, options, &mut choice, &mut used, out);
    }

    fn choose(
        &self,
        v: usize,
        arcs: &[ArcId],
        options: &VertexOptions,
        choice: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<GraphicalMap>,
    ) {
        if v == options.len() {
            let all_edges = (0..v).all(|u| options[u][choice[u]].0.edge);
            if collapse_ok(self.source, self.target, self.mode, all_edges) {
                out.push(GraphicalMap {
                    source: self.source.clone(),
                    target: self.target.clone(),
                    arcs: arcs.to_vec(),
                    vertices: (0..v).map(|u| options[u][choice[u]].0.clone()).collect(),
                    mode: self.mode,
                });
            }
            return;
        }
        for (i, (_, ws)) in options[v].iter().enumerate() {
            if ws.iter().any(|w| used[w.index()]) {
                continue;
            }
            for w in ws {
                used[w.index()] = true;
            }
            choice[v] = i;
            self.choose(v + 1, arcs, options, choice, used, out);
            for w in ws {
                used[w.index()] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: &Graph, l: &str) -> ArcId {
        g.arc(l).unwrap()
    }

    fn all(g: &Graph, h: &Graph, mode: Mode) -> Vec<GraphicalMap> {
        enumerate_maps(&Arc::new(g.clone()), &Arc::new(h.clone()), mode, DEFAULT_BUDGET, Execution::Sequential)
            .unwrap()
    }

    #[test]
    fn small_hom_sets() {
        assert_eq!(all(&Graph::edge(), &Graph::edge(), Mode::Core).len(), 2);
        let c1 = Graph::cycle(1, Mode::Core).unwrap();
        assert!(all(&c1, &Graph::edge(), Mode::Core).is_empty());
        assert_eq!(all(&Graph::linear(3), &Graph::nodeless_loop(), Mode::Extended).len(), 2);
        assert_eq!(all(&Graph::star(0), &Graph::nodeless_loop(), Mode::Extended).len(), 1);
        assert!(all(&Graph::star(3), &Graph::nodeless_loop(), Mode::Extended).is_empty());
    }

    #[test]
    fn collapse_of_a_loop_needs_extended_mode() {
        let c1 = Arc::new(Graph::cycle(1, Mode::Core).unwrap());
        let e = Arc::new(Graph::edge());
        let arcs = vec![ArcId(0), ArcId(1)];
        let r = GraphicalMap::new(c1.clone(), e, arcs.clone(), &[true], Mode::Core);
        assert_eq!(r, Err(Error::CollapseViolation));
        let k = Arc::new(Graph::nodeless_loop());
        assert!(GraphicalMap::new(c1, k, arcs, &[true], Mode::Extended).is_ok());
    }

    #[test]
    fn equal_arc_maps_distinct_maps() {
        let c2 = Graph::cycle(2, Mode::Core).unwrap();
        let c1 = Graph::cycle(1, Mode::Core).unwrap();
        let maps = all(&c2, &c1, Mode::Core);
        let mut shared = Vec::new();
        for (i, f) in maps.iter().enumerate() {
            for g in &maps[i + 1..] {
                if f.arcs == g.arcs {
                    shared.push(f.arcs.clone());
                }
            }
        }
        // one pair for each of the two arc maps a, ib ↦ c and a, ib ↦ ic
        assert_eq!(shared.len(), 2);
        assert_ne!(shared[0], shared[1]);
    }

    #[test]
    fn collapse_l2_to_l1() {
        let l2 = Arc::new(Graph::linear(2));
        let l1 = Arc::new(Graph::linear(1));
        // vertex 1 becomes the edge 0, vertex 2 the star of L1
        let arcs = ["0", "0†", "0", "0†", "1", "1†"].iter().map(|l| arc(&l1, l)).collect();
        let phi = GraphicalMap::new(l2, l1.clone(), arcs, &[true, false], Mode::Core).unwrap();
        assert!(phi.image().is_identity_of(&l1));
        let im = phi.image_factorization().unwrap();
        assert_eq!(im.embedding.class(), phi.image());
        let (_, x) = phi.x_stabilization();
        assert_ne!(x, phi.source.arcs().collect::<Vec<_>>());
        let back = GraphicalMap::from_embedding(&im.embedding, Mode::Core).after(&im.active).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn identity_laws_on_c2() {
        let c2 = Arc::new(Graph::cycle(2, Mode::Core).unwrap());
        let id = GraphicalMap::identity(c2.clone(), Mode::Core);
        for f in all(&c2, &c2, Mode::Core) {
            assert_eq!(id.after(&f).unwrap(), f);
            assert_eq!(f.after(&id).unwrap(), f);
        }
    }
}
