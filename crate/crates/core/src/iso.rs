//! Isomorphism search between small graphs.

use crate::graph::{ArcId, Graph, VertexId};

/// An isomorphism `G → H`, stored as two index tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphIso {
    pub arcs: Vec<ArcId>,
    pub vertices: Vec<VertexId>,
}

impl GraphIso {
    pub fn identity(g: &Graph) -> GraphIso {
        GraphIso { arcs: g.arcs().collect(), vertices: g.vertices().collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.arcs.iter().enumerate().all(|(i, a)| a.index() == i)
            && self.vertices.iter().enumerate().all(|(i, v)| v.index() == i)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GraphIso) -> GraphIso {
        GraphIso {
            arcs: first.arcs.iter().map(|a| self.arcs[a.index()]).collect(),
            vertices: first.vertices.iter().map(|v| self.vertices[v.index()]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphIso {
        let mut arcs = vec![ArcId(0); self.arcs.len()];
        for (i, a) in self.arcs.iter().enumerate() {
            arcs[a.index()] = ArcId(i as u32);
        }
        let mut vertices = vec![VertexId(0); self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[v.index()] = VertexId(i as u32);
        }
        GraphIso { arcs, vertices }
    }

    /// Checks every defining condition against the two graphs.
    pub fn is_valid(&self, g: &Graph, h: &Graph) -> bool {
        if self.arcs.len() != g.arc_count()
            || self.vertices.len() != g.vertex_count()
            || g.arc_count() != h.arc_count()
            || g.vertex_count() != h.vertex_count()
        {
            return false;
        }
        let mut seen_a = vec![false; h.arc_count()];
        for a in g.arcs() {
            let b = self.arcs[a.index()];
            if std::mem::replace(&mut seen_a[b.index()], true)
                || self.arcs[g.inv(a).index()] != h.inv(b)
                || g.is_boundary(a) != h.is_boundary(b)
                || g.target(a).map(|v| self.vertices[v.index()]) != h.target(b)
            {
                return false;
            }
        }
        let mut seen_v = vec![false; h.vertex_count()];
        self.vertices.iter().all(|w| !std::mem::replace(&mut seen_v[w.index()], true))
    }
}

fn profile(g: &Graph) -> (usize, usize, usize, Vec<usize>) {
    let mut valences: Vec<usize> = g.vertices().map(|v| g.valence(v)).collect();
    valences.sort_unstable();
    let domain = g.arcs().filter(|&a| g.in_domain(a)).count();
    (g.arc_count(), domain, g.boundary_len(), valences)
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    arcs: Vec<Option<ArcId>>,
    vertices: Vec<Option<VertexId>>,
    used_arc: Vec<bool>,
    used_vertex: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, h: &'a Graph) -> Self {
        Search {
            g,
            h,
            arcs: vec![None; g.arc_count()],
            vertices: vec![None; g.vertex_count()],
            used_arc: vec![false; h.arc_count()],
            used_vertex: vec![false; h.vertex_count()],
        }
    }

    fn arc_compatible(&self, a: ArcId, b: ArcId) -> bool {
        !self.used_arc[b.index()]
            && self.g.is_boundary(a) == self.h.is_boundary(b)
            && self.g.in_domain(a) == self.h.in_domain(b)
            && match (self.g.target(a), self.h.target(b)) {
                (Some(v), Some(w)) => match self.vertices[v.index()] {
                    Some(x) => x == w,
                    None => !self.used_vertex[w.index()] && self.g.valence(v) == self.h.valence(w),
                },
                (None, None) => true,
                _ => false,
            }
    }

    /// Maps `a ↦ b` and `ia ↦ ib`. Returns the vertices newly assigned.
    fn assign(&mut self, a: ArcId, b: ArcId) -> Option<Vec<VertexId>> {
        let (ia, ib) = (self.g.inv(a), self.h.inv(b));
        if !self.arc_compatible(a, b) {
            return None;
        }
        let mut fresh = Vec::new();
        self.set_arc(a, b, &mut fresh);
        if !self.arc_compatible(ia, ib) {
            self.unset_arc(a, b, &fresh);
            return None;
        }
        self.set_arc(ia, ib, &mut fresh);
        Some(fresh)
    }

    fn set_arc(&mut self, a: ArcId, b: ArcId, fresh: &mut Vec<VertexId>) {
        self.arcs[a.index()] = Some(b);
        self.used_arc[b.index()] = true;
        if let (Some(v), Some(w)) = (self.g.target(a), self.h.target(b)) {
            if self.vertices[v.index()].is_none() {
                self.vertices[v.index()] = Some(w);
                self.used_vertex[w.index()] = true;
                fresh.push(v);
            }
        }
    }

    fn unset_arc(&mut self, a: ArcId, b: ArcId, fresh: &[VertexId]) {
        self.arcs[a.index()] = None;
        self.used_arc[b.index()] = false;
        self.release(fresh);
    }

    fn release(&mut self, fresh: &[VertexId]) {
        for &v in fresh {
            if let Some(w) = self.vertices[v.index()].take() {
                self.used_vertex[w.index()] = false;
            }
        }
    }

    fn unassign(&mut self, a: ArcId, b: ArcId, fresh: &[VertexId]) {
        let (ia, ib) = (self.g.inv(a), self.h.inv(b));
        self.arcs[a.index()] = None;
        self.arcs[ia.index()] = None;
        self.used_arc[b.index()] = false;
        self.used_arc[ib.index()] = false;
        self.release(fresh);
    }

    fn finish(&self) -> GraphIso {
        let mut vertices = self.vertices.clone();
        let mut free = (0..self.h.vertex_count() as u32)
            .map(VertexId)
            .filter(|w| !self.used_vertex[w.index()] && self.h.valence(*w) == 0);
        for slot in vertices.iter_mut().filter(|s| s.is_none()) {
            *slot = free.next();
        }
        GraphIso {
            arcs: self.arcs.iter().map(|a| a.expect("all arcs assigned")).collect(),
            vertices: vertices.into_iter().map(|v| v.expect("isolated vertices match")).collect(),
        }
    }

    /// Visits isomorphisms in lexicographic order of the arc table; the
    /// visitor returns false to stop.
    fn run(&mut self, from: usize, visit: &mut dyn FnMut(GraphIso) -> bool) -> bool {
        let Some(a) = (from..self.g.arc_count()).map(|i| ArcId(i as u32)).find(|a| self.arcs[a.index()].is_none())
        else {
            return visit(self.finish());
        };
        for b in self.h.arcs() {
            if let Some(fresh) = self.assign(a, b) {
                let go_on = self.run(a.index() + 1, visit);
                self.unassign(a, b, &fresh);
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn search(g: &Graph, h: &Graph, visit: &mut dyn FnMut(GraphIso) -> bool) {
    if g.vertex_count() != h.vertex_count() || profile(g) != profile(h) {
        return;
    }
    Search::new(g, h).run(0, visit);
}

/// The lexicographically least isomorphism `G → H`, if any.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<GraphIso> {
    let mut found = None;
    search(g, h, &mut |iso| {
        found = Some(iso);
        false
    });
    found
}

/// All isomorphisms `G → H` in lexicographic order.
pub fn isomorphisms(g: &Graph, h: &Graph) -> Vec<GraphIso> {
    let mut all = Vec::new();
    search(g, h, &mut |iso| {
        all.push(iso);
        true
    });
    all
}

/// The automorphism group of `G`, identity first.
pub fn automorphisms(g: &Graph) -> Vec<GraphIso> {
    isomorphisms(g, g)
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}
