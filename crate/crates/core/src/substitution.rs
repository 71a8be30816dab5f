//! Graph substitution `G{H_v}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{ArcId, Graph, Mode, RawGraph, VertexId};
use crate::label::Label;

/// The graph put in place of one vertex, with the boundary matching
/// `m_v : i·nbhd(v) → ð(H_v)`.
#[derive(Clone, Debug)]
pub struct Part {
    pub graph: Arc<Graph>,
    /// Pairs `(x, m_v(x))` with `x ∈ i·nbhd(v)` in the base graph.
    pub matching: Vec<(ArcId, ArcId)>,
}

/// The substituted graph and its structure maps.
#[derive(Clone, Debug)]
pub struct SubstitutionResult {
    pub graph: Graph,
    /// For each base vertex `v`, the projection `A(H_v) → A(K)`.
    pub projection: Vec<Vec<ArcId>>,
    /// For each base vertex `v`, the inclusion `V(H_v) → V(K)`.
    pub vertex_inclusion: Vec<Vec<VertexId>>,
    /// `x ↦ π(m_{t(ix)}(x))` for `x ∈ ð(G)`, in base arc order.
    pub boundary_map: Vec<(ArcId, ArcId)>,
}

impl Part {
    /// `ι_v` read as a part: the star at `v` with `m_v(a) = a†`.
    pub fn star_at(base: &Graph, v: VertexId) -> Part {
        let nbhd = base.nbhd(v);
        let labels: Vec<Label> = nbhd.iter().map(|&a| base.arc_label(a).clone()).collect();
        let star = Graph::star_on(base.vertex_label(v).clone(), &labels)
            .or_else(|_| Graph::star_on(base.vertex_label(v).clone(), &numbered(labels.len())))
            .expect("stars are valid");
        let matching = nbhd
            .iter()
            .zip(star.nbhd(VertexId(0)))
            .map(|(&a, &s)| (base.inv(a), star.inv(s)))
            .collect();
        Part { graph: Arc::new(star), matching }
    }

    /// Table form of the matching aligned with `nbhd(v)`.
    fn table(&self, base: &Graph, v: VertexId) -> Result<Vec<ArcId>> {
        let err = |reason: String| Error::InvalidBoundaryMatch {
            vertex: base.vertex_label(v).to_string(),
            reason,
        };
        let nbhd = base.nbhd(v);
        let mut table = vec![None; nbhd.len()];
        let mut hit = vec![false; self.graph.arc_count()];
        for &(x, y) in &self.matching {
            let k = nbhd
                .iter()
                .position(|&a| base.inv(a) == x)
                .ok_or_else(|| err(format!("{} is not in i·nbhd", base.arc_label(x))))?;
            if y.index() >= self.graph.arc_count() || !self.graph.is_boundary(y) {
                return Err(err("target of the matching is not a boundary arc".into()));
            }
            if table[k].is_some() || std::mem::replace(&mut hit[y.index()], true) {
                return Err(err("matching is not injective".into()));
            }
            table[k] = Some(y);
        }
        if self.graph.boundary_len() != nbhd.len() {
            return Err(err(format!(
                "valence {} but the part has {} boundary arcs",
                nbhd.len(),
                self.graph.boundary_len()
            )));
        }
        table
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| err("matching is not total".into()))
    }
}

fn numbered(n: usize) -> Vec<Label> {
    (1..=n).map(Label::from).collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.0[rx.max(ry)] = rx.min(ry);
        }
    }
}

/// Computes `K = G{H_v}` as a coequalizer. `reversed` picks the larger arc
/// of each internal edge as `x¹` instead of the smaller one; the result is
/// the same up to isomorphism.
pub fn substitute_with(
    base: &Graph,
    parts: &[Part],
    mode: Mode,
    reversed: bool,
) -> Result<SubstitutionResult> {
    if parts.len() != base.vertex_count() {
        return Err(Error::InvalidBoundaryMatch {
            vertex: "*".into(),
            reason: format!("{} parts for {} vertices", parts.len(), base.vertex_count()),
        });
    }
    if base.vertex_count() == 0 {
        return Ok(SubstitutionResult {
            graph: base.clone(),
            projection: Vec::new(),
            vertex_inclusion: Vec::new(),
            boundary_map: base.boundary().into_iter().map(|x| (x, x)).collect(),
        });
    }
    let mut tables = Vec::with_capacity(parts.len());
    for (v, part) in base.vertices().zip(parts) {
        if !part.graph.is_connected() {
            return Err(Error::DisconnectedInput);
        }
        tables.push(part.table(base, v)?);
    }
    let mut offset = Vec::with_capacity(parts.len() + 1);
    offset.push(0);
    for p in parts {
        offset.push(offset.last().unwrap() + p.graph.arc_count());
    }
    let total = *offset.last().unwrap();
    let global = |v: VertexId, a: ArcId| offset[v.index()] + a.index();
    // m_v(x) for x ∈ i·nbhd(v), as a global arc index
    let matched = |v: VertexId, x: ArcId| -> usize {
        let k = base.nbhd(v).iter().position(|&a| base.inv(a) == x).expect("x in i·nbhd(v)");
        global(v, tables[v.index()][k])
    };
    let partner = |g: usize| -> usize {
        let v = offset.partition_point(|&o| o <= g) - 1;
        let h = &parts[v].graph;
        offset[v] + h.inv(ArcId((g - offset[v]) as u32)).index()
    };

    let mut uf = UnionFind((0..total).collect());
    for [a, b] in base.internal_edges() {
        let (x1, x2) = if reversed { (b, a) } else { (a, b) };
        let m1 = matched(base.target(x1).unwrap(), base.inv(x1));
        let m2 = matched(base.target(x2).unwrap(), base.inv(x2));
        uf.union(m1, partner(m2));
        uf.union(partner(m1), m2);
    }

    let mut class_of = vec![usize::MAX; total];
    let mut reps: Vec<usize> = Vec::new();
    for g in 0..total {
        let r = uf.find(g);
        if class_of[r] == usize::MAX {
            class_of[r] = reps.len();
            reps.push(g);
        }
        class_of[g] = class_of[r];
    }
    let in_domain = |g: usize| {
        let v = offset.partition_point(|&o| o <= g) - 1;
        parts[v].graph.in_domain(ArcId((g - offset[v]) as u32))
    };
    // name each class after its domain arc when it has one
    for g in 0..total {
        if in_domain(g) {
            reps[class_of[g]] = g;
        }
    }

    let mut raw = RawGraph::default();
    let mut vertex_base = Vec::with_capacity(parts.len());
    for (v, p) in base.vertices().zip(parts) {
        vertex_base.push(raw.vertices.len());
        let prefix = base.vertex_label(v);
        for w in p.graph.vertices() {
            raw.add_vertex(p.graph.vertex_label(w).namespaced(prefix));
        }
    }
    for &g in &reps {
        let v = offset.partition_point(|&o| o <= g) - 1;
        let a = ArcId((g - offset[v]) as u32);
        let h = &parts[v].graph;
        let idx = raw.add_arc(h.arc_label(a).namespaced(base.vertex_label(VertexId(v as u32))));
        raw.target[idx] = h.target(a).map(|w| vertex_base[v] + w.index());
    }
    let mut domain_count = vec![0usize; reps.len()];
    for g in 0..total {
        if in_domain(g) {
            domain_count[class_of[g]] += 1;
        }
    }
    debug_assert!(domain_count.iter().all(|&c| c <= 1), "π is injective on domain arcs");
    for (c, &g) in reps.iter().enumerate() {
        let p = class_of[partner(g)];
        raw.inv[c] = p;
    }

    let boundary_raw: Vec<(ArcId, usize)> = base
        .boundary()
        .into_iter()
        .map(|x| (x, class_of[matched(base.target(base.inv(x)).expect("loose ends hang off vertices"), x)]))
        .collect();
    let mut flags = vec![false; reps.len()];
    for &(_, c) in &boundary_raw {
        flags[c] = true;
    }
    let safe = (0..reps.len()).all(|c| flags[c] == raw.target[c].is_none());
    if !safe && mode == Mode::Core {
        return Err(Error::NodelessLoopInSafeMode);
    }
    raw.boundary = Some(flags);
    let built = raw.build()?;

    let projection = base
        .vertices()
        .map(|v| {
            parts[v.index()]
                .graph
                .arcs()
                .map(|a| built.arc_index[class_of[global(v, a)]])
                .collect()
        })
        .collect();
    let vertex_inclusion = base
        .vertices()
        .map(|v| {
            parts[v.index()]
                .graph
                .vertices()
                .map(|w| built.vertex_index[vertex_base[v.index()] + w.index()])
                .collect()
        })
        .collect();
    let boundary_map = boundary_raw.into_iter().map(|(x, c)| (x, built.arc_index[c])).collect();
    Ok(SubstitutionResult { graph: built.graph, projection, vertex_inclusion, boundary_map })
}

/// `G{H_v}` with the least arc of each internal edge taken as `x¹`.
pub fn substitute(base: &Graph, parts: &[Part], mode: Mode) -> Result<SubstitutionResult> {
    substitute_with(base, parts, mode, false)
}

/// `G{☆_v}`: every vertex replaced by its own star.
pub fn star_parts(base: &Graph) -> Vec<Part> {
    base.vertices().map(|v| Part::star_at(base, v)).collect()
}

/// `☆_G`, a single vertex whose neighborhood mirrors `ð(G)`, together with
/// the part `G` matched along it, so that `☆_G{G} ≅ G`.
pub fn corolla_of(g: &Arc<Graph>) -> Result<(Graph, Part)> {
    let boundary = g.boundary();
    let labels: Vec<Label> = boundary.iter().map(|&a| g.arc_label(a).clone()).collect();
    let star = Graph::star_on(Label::from("v"), &labels)
        .or_else(|_| Graph::star_on(Label::from("v"), &numbered(labels.len())))?;
    let v = VertexId(0);
    let matching = star
        .nbhd(v)
        .iter()
        .zip(&boundary)
        .map(|(&a, &b)| (star.inv(a), b))
        .collect();
    Ok((star, Part { graph: g.clone(), matching }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;

    #[test]
    fn unit_laws_on_small_graphs() {
        for g in [
            Graph::linear(3),
            Graph::cycle(2, Mode::Core).unwrap(),
            Graph::cycle(1, Mode::Core).unwrap(),
            Graph::star(3),
        ] {
            let k = substitute(&g, &star_parts(&g), Mode::Core).unwrap();
            assert!(are_isomorphic(&k.graph, &g), "{g:?} vs {:?}", k.graph);
            let g = Arc::new(g);
            let (star, part) = corolla_of(&g).unwrap();
            if g.boundary_len() > 0 {
                let k = substitute(&star, &[part], Mode::Core).unwrap();
                assert!(are_isomorphic(&k.graph, &g));
            }
        }
    }

    #[test]
    fn loop_of_edges_becomes_the_nodeless_loop() {
        let c1 = Graph::cycle(1, Mode::Core).unwrap();
        let e = Arc::new(Graph::edge());
        let nb = c1.nbhd(VertexId(0));
        let part = Part {
            graph: e.clone(),
            matching: vec![(c1.inv(nb[0]), ArcId(0)), (c1.inv(nb[1]), ArcId(1))],
        };
        let r = substitute(&c1, std::slice::from_ref(&part), Mode::Core);
        assert!(matches!(r, Err(Error::NodelessLoopInSafeMode)));
        let k = substitute(&c1, &[part], Mode::Extended).unwrap();
        assert!(k.graph.is_nodeless_loop());
    }

    #[test]
    fn bad_matching_is_rejected() {
        let l1 = Graph::linear(1);
        let part = Part { graph: Arc::new(Graph::star(3)), matching: vec![] };
        assert!(matches!(
            substitute(&l1, &[part], Mode::Core),
            Err(Error::InvalidBoundaryMatch { .. })
        ));
    }
}
