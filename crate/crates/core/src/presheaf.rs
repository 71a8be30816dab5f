//! Finite set-valued presheaves, the strict Segal condition, the matching
//! object at a star, and the limit computing the value at the nodeless loop.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::audit::HomTable;
use crate::embedding::EmbClass;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{ArcId, Graph, Mode, VertexId};
use crate::map::{enumerate_maps, GraphicalMap};

/// An element of some `X_G`.
pub type Element = Vec<u32>;

/// A contravariant functor to finite sets, evaluated on graphs and maps.
pub trait Presheaf: Sync {
    /// `X_G` in a fixed order.
    fn elements(&self, g: &Arc<Graph>) -> Result<Vec<Element>>;
    /// `X(φ): X_{G′} → X_G` for `φ: G → G′`.
    fn act(&self, phi: &GraphicalMap, x: &Element) -> Result<Element>;
}

/// A finite set with an involution; fixed points are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    pub name: String,
    pub inv: Vec<u32>,
}

impl Palette {
    /// Parses `free<2k>` (k swapped pairs) and `fixed<m>` (m fixed points)
    /// joined by `+`, for example `free2+fixed1`.
    pub fn parse(name: &str) -> Result<Palette> {
        let err = |m: String| Error::Parse { line: 0, message: m };
        let mut inv = Vec::new();
        for part in name.split('+') {
            let (kind, n) = if let Some(n) = part.strip_prefix("free") {
                ("free", n)
            } else if let Some(n) = part.strip_prefix("fixed") {
                ("fixed", n)
            } else {
                return Err(err(format!("unknown palette part `{part}`")));
            };
            let n: u32 = n.parse().map_err(|_| err(format!("bad palette size in `{part}`")))?;
            let base = inv.len() as u32;
            if kind == "free" {
                if n % 2 == 1 {
                    return Err(err(format!("free palettes have even size, got `{part}`")));
                }
                for k in 0..n {
                    inv.push(base + (k ^ 1));
                }
            } else {
                inv.extend(base..base + n);
            }
        }
        if inv.is_empty() {
            return Err(err("empty palette".into()));
        }
        Ok(Palette { name: name.into(), inv })
    }

    pub fn terminal() -> Palette {
        Palette::parse("fixed1").expect("valid")
    }

    pub fn len(&self) -> usize {
        self.inv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv.is_empty()
    }
}

/// `X_G` = involution-preserving colorings `A(G) → P`, acting by
/// precomposition with `φ₀`.
#[derive(Clone, Debug)]
pub struct ArcColoring {
    pub palette: Palette,
}

impl ArcColoring {
    pub fn new(palette: Palette) -> Self {
        ArcColoring { palette }
    }

    pub fn terminal() -> Self {
        ArcColoring::new(Palette::terminal())
    }
}

impl Presheaf for ArcColoring {
    fn elements(&self, g: &Arc<Graph>) -> Result<Vec<Element>> {
        let orbits = g.edges();
        let p = self.palette.len() as u32;
        let mut out = Vec::new();
        let mut choice = vec![0u32; orbits.len()];
        loop {
            let mut x = vec![0u32; g.arc_count()];
            for (e, &c) in orbits.iter().zip(&choice) {
                x[e[0].index()] = c;
                x[e[1].index()] = self.palette.inv[c as usize];
            }
            out.push(x);
            let Some(pos) = (0..choice.len()).rev().find(|&i| choice[i] + 1 < p) else {
                return Ok(out);
            };
            choice[pos] += 1;
            for slot in &mut choice[pos + 1..] {
                *slot = 0;
            }
        }
    }

    fn act(&self, phi: &GraphicalMap, x: &Element) -> Result<Element> {
        if x.len() != phi.target.arc_count() {
            return Err(Error::SourceTargetMismatch { reason: "coloring of another graph".into() });
        }
        Ok(phi.arcs.iter().map(|b| x[b.index()]).collect())
    }
}

/// One element per factor of a product.
pub type Tuple = Vec<Element>;

type MapKey = (Vec<ArcId>, Vec<EmbClass>);

fn key(m: &GraphicalMap) -> MapKey {
    (m.arcs.clone(), m.vertices.clone())
}

/// A presheaf stored as value counts and action tables. Elements of `X_G`
/// are `[0]`, `[1]`, … .
#[derive(Clone, Debug)]
pub struct TablePresheaf {
    objects: Vec<Arc<Graph>>,
    sizes: Vec<usize>,
    actions: HashMap<(usize, usize, MapKey), Vec<u32>>,
}

impl TablePresheaf {
    pub fn objects(&self) -> &[Arc<Graph>] {
        &self.objects
    }

    pub fn size(&self, g: &Graph) -> Option<usize> {
        self.index(g).map(|i| self.sizes[i])
    }

    /// Number of maps with a stored action.
    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    fn index(&self, g: &Graph) -> Option<usize> {
        self.objects.iter().position(|h| **h == *g)
    }

    fn endpoints(&self, phi: &GraphicalMap) -> Result<(usize, usize)> {
        let missing = || Error::MapNotInCorpusSpan { map: format!("{phi:?}") };
        Ok((self.index(&phi.source).ok_or_else(missing)?, self.index(&phi.target).ok_or_else(missing)?))
    }

    /// Closes the given actions under composition. Every corpus map that is
    /// a composite of generators then has an action; others do not.
    pub fn from_generators(
        objects: Vec<Arc<Graph>>,
        sizes: Vec<usize>,
        generators: Vec<(GraphicalMap, Vec<u32>)>,
    ) -> Result<TablePresheaf> {
        if objects.len() != sizes.len() {
            return Err(Error::InconsistentTable { reason: "one size per object".into() });
        }
        let mut x = TablePresheaf { objects, sizes, actions: HashMap::new() };
        let mut maps: Vec<(usize, usize, GraphicalMap)> = Vec::new();
        let insert = |x: &mut TablePresheaf,
                          maps: &mut Vec<(usize, usize, GraphicalMap)>,
                          a: usize,
                          b: usize,
                          m: GraphicalMap,
                          table: Vec<u32>|
         -> Result<()> {
            if table.len() != x.sizes[b] || table.iter().any(|&t| t as usize >= x.sizes[a]) {
                return Err(Error::InconsistentTable {
                    reason: format!("action table of {m:?} has the wrong shape"),
                });
            }
            match x.actions.get(&(a, b, key(&m))) {
                Some(t) if *t != table => Err(Error::InconsistentTable {
                    reason: format!("two different actions for {m:?}"),
                }),
                Some(_) => Ok(()),
                None => {
                    x.actions.insert((a, b, key(&m)), table);
                    maps.push((a, b, m));
                    Ok(())
                }
            }
        };
        for (a, g) in x.objects.clone().iter().enumerate() {
            let id = GraphicalMap::identity(g.clone(), Mode::Core);
            let n = x.sizes[a] as u32;
            insert(&mut x, &mut maps, a, a, id, (0..n).collect())?;
        }
        for (m, table) in generators {
            let (a, b) = x.endpoints(&m)?;
            insert(&mut x, &mut maps, a, b, m, table)?;
        }
        let mut done = 0;
        while done < maps.len() {
            let end = maps.len();
            for i in 0..end {
                for j in 0..end {
                    if i < done && j < done {
                        continue;
                    }
                    let ((a, b, f), (b2, c, g)) = (&maps[i], &maps[j]);
                    if b != b2 {
                        continue;
                    }
                    let (a, b, c) = (*a, *b, *c);
                    let h = g.after(f)?;
                    let tf = &x.actions[&(a, b, key(f))];
                    let tg = &x.actions[&(b, c, key(g))];
                    let table = tg.iter().map(|&y| tf[y as usize]).collect();
                    insert(&mut x, &mut maps, a, c, h, table)?;
                }
            }
            done = end;
        }
        Ok(x)
    }

    /// Tabulates any presheaf on the objects of a hom table.
    pub fn tabulate(x: &dyn Presheaf, table: &HomTable) -> Result<TablePresheaf> {
        let objects: Vec<Arc<Graph>> = table.objects.iter().map(|o| o.graph.clone()).collect();
        let elements: Vec<Vec<Element>> =
            objects.iter().map(|g| x.elements(g)).collect::<Result<_>>()?;
        let lookup: Vec<HashMap<&Element, u32>> = elements
            .iter()
            .map(|es| es.iter().enumerate().map(|(i, e)| (e, i as u32)).collect())
            .collect();
        let mut actions = HashMap::new();
        for a in 0..objects.len() {
            for b in 0..objects.len() {
                for m in table.hom(a, b) {
                    let t = elements[b]
                        .iter()
                        .map(|y| {
                            let z = x.act(m, y)?;
                            lookup[a].get(&z).copied().ok_or_else(|| Error::InconsistentTable {
                                reason: format!("action of {m:?} leaves the value set"),
                            })
                        })
                        .collect::<Result<Vec<u32>>>()?;
                    actions.insert((a, b, key(m)), t);
                }
            }
        }
        let sizes = elements.iter().map(Vec::len).collect();
        Ok(TablePresheaf { objects, sizes, actions })
    }

    /// The subpresheaf that keeps only `keep ⊆ X_G` at one object.
    pub fn restrict_value(&self, g: &Graph, keep: &[u32]) -> Result<TablePresheaf> {
        let o = self.index(g).ok_or_else(|| Error::MissingCorpusObject { what: "object".into() })?;
        let mut renumber = vec![None; self.sizes[o]];
        for (i, &k) in keep.iter().enumerate() {
            renumber[k as usize] = Some(i as u32);
        }
        let mut actions = HashMap::new();
        for ((a, b, k), t) in &self.actions {
            let rows: Vec<u32> = if *b == o { keep.iter().map(|&y| t[y as usize]).collect() } else { t.clone() };
            let rows = if *a == o {
                rows.iter()
                    .map(|&z| {
                        renumber[z as usize].ok_or_else(|| Error::InconsistentTable {
                            reason: "the kept elements are not closed under the action".into(),
                        })
                    })
                    .collect::<Result<Vec<u32>>>()?
            } else {
                rows
            };
            actions.insert((*a, *b, k.clone()), rows);
        }
        let mut sizes = self.sizes.clone();
        sizes[o] = keep.len();
        Ok(TablePresheaf { objects: self.objects.clone(), sizes, actions })
    }
}

impl Presheaf for TablePresheaf {
    fn elements(&self, g: &Arc<Graph>) -> Result<Vec<Element>> {
        let i = self
            .index(g)
            .ok_or_else(|| Error::MissingCorpusObject { what: format!("{g:?}") })?;
        Ok((0..self.sizes[i] as u32).map(|k| vec![k]).collect())
    }

    fn act(&self, phi: &GraphicalMap, x: &Element) -> Result<Element> {
        let (a, b) = self.endpoints(phi)?;
        let t = self
            .actions
            .get(&(a, b, key(phi)))
            .ok_or_else(|| Error::MapNotInCorpusSpan { map: format!("{phi:?}") })?;
        match x[..] {
            [k] if (k as usize) < t.len() => Ok(vec![t[k as usize]]),
            _ => Err(Error::SourceTargetMismatch { reason: "element of another object".into() }),
        }
    }
}

/// The subpresheaf of a tabulated presheaf whose value at `g` is generated
/// by the images of maps out of `g` to other objects. When that is a proper
/// subset the result fails the Segal condition at `g`.
pub fn negative_control(x: &TablePresheaf, table: &HomTable, g: &Graph) -> Result<TablePresheaf> {
    let o = x.index(g).ok_or_else(|| Error::MissingCorpusObject { what: "object".into() })?;
    let mut keep = vec![false; x.sizes[o]];
    for b in (0..table.len()).filter(|&b| b != o) {
        for m in table.hom(o, b) {
            for y in x.elements(&table.objects[b].graph)? {
                keep[x.act(m, &y)?[0] as usize] = true;
            }
        }
    }
    // close under endomorphisms
    loop {
        let mut changed = false;
        for m in table.hom(o, o) {
            for k in 0..keep.len() {
                if keep[k] {
                    let z = x.act(m, &vec![k as u32])?[0] as usize;
                    changed |= !std::mem::replace(&mut keep[z], true);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<u32> = (0..keep.len() as u32).filter(|&k| keep[k as usize]).collect();
    x.restrict_value(g, &keep)
}

/// `X(id) = id` and `X(ψ∘φ) = X(φ)∘X(ψ)` over a hom table. `limit` caps the
/// number of composable pairs visited, in table order.
pub fn check_functoriality(x: &dyn Presheaf, table: &HomTable, limit: Option<usize>) -> Result<(u64, u64)> {
    let n = table.len();
    let elements: Vec<Vec<Element>> =
        table.objects.iter().map(|o| x.elements(&o.graph)).collect::<Result<_>>()?;
    let (mut instances, mut violations) = (0u64, 0u64);
    for a in 0..n {
        let id = GraphicalMap::identity(table.objects[a].graph.clone(), Mode::Core);
        for y in &elements[a] {
            instances += 1;
            violations += u64::from(x.act(&id, y)? != *y);
        }
    }
    let cap = limit.unwrap_or(usize::MAX);
    let mut pairs = 0usize;
    'outer: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for (i, f) in table.hom(a, b).iter().enumerate() {
                    for (j, g) in table.hom(b, c).iter().enumerate() {
                        if pairs == cap {
                            break 'outer;
                        }
                        pairs += 1;
                        let Some(k) = table.compose(a, b, c, i, j) else {
                            violations += 1;
                            continue;
                        };
                        let h = &table.hom(a, c)[k];
                        for y in &elements[c] {
                            instances += 1;
                            let lhs = x.act(h, y)?;
                            let rhs = x.act(f, &x.act(g, y)?)?;
                            violations += u64::from(lhs != rhs);
                        }
                    }
                }
            }
        }
    }
    Ok((instances, violations))
}

/// `ι_v` precomposed with the standard identification `☆_n ≅ ☆_v`.
pub fn vertex_map(g: &Arc<Graph>, v: VertexId) -> GraphicalMap {
    let nbhd = g.nbhd(v);
    let star = Arc::new(Graph::star(nbhd.len()));
    let mut arcs = vec![ArcId(0); star.arc_count()];
    for (s, &a) in star.nbhd(VertexId(0)).iter().zip(nbhd) {
        arcs[s.index()] = a;
        arcs[star.inv(*s).index()] = g.inv(a);
    }
    GraphicalMap::new(star, g.clone(), arcs, &[false], Mode::Core)
        .expect("vertex inclusions are graphical maps")
}

/// The map `† → ☆_n` with `★ ↦ i(s)` and `★† ↦ s` for a neighborhood arc
/// `s` (`outer = true`), or `★ ↦ s`, `★† ↦ i(s)`.
fn leg(n: usize, s: ArcId, outer: bool) -> GraphicalMap {
    let star = Arc::new(Graph::star(n));
    let arcs = if outer { vec![star.inv(s), s] } else { vec![s, star.inv(s)] };
    GraphicalMap::new(Arc::new(Graph::edge()), star, arcs, &[], Mode::Core).expect("legs are maps")
}

/// The Segal limit at `G` together with the Segal map.
#[derive(Clone, Debug)]
pub struct SegalLimit {
    /// Compatible tuples `(x_v)_v`, each `x_v ∈ X_{☆_{|nbhd v|}}`, in
    /// lexicographic order of element indices.
    pub tuples: Vec<Vec<Element>>,
    /// Image of each element of `X_G` under the Segal map.
    pub segal_map: Vec<Vec<Element>>,
}

impl SegalLimit {
    pub fn is_bijective(&self) -> bool {
        let mut image = self.segal_map.clone();
        image.sort();
        let injective = image.windows(2).all(|w| w[0] != w[1]);
        let mut tuples = self.tuples.clone();
        tuples.sort();
        injective && image == tuples
    }
}

fn require(corpus: Option<&[Arc<Graph>]>, g: &Graph) -> Result<()> {
    match corpus {
        Some(c) if !c.iter().any(|h| **h == *g) => {
            Err(Error::MissingCorpusObject { what: format!("{g:?}") })
        }
        _ => Ok(()),
    }
}

/// Computes the Segal limit of `X` at `g`. With `reversed`, every internal
/// edge is read with the opposite choice of first arc. When `corpus` is
/// given, the stars and `†` must belong to it.
pub fn segal_limit(
    x: &dyn Presheaf,
    g: &Arc<Graph>,
    corpus: Option<&[Arc<Graph>]>,
    reversed: bool,
    exec: Execution,
) -> Result<SegalLimit> {
    let x_g = x.elements(g)?;
    if g.vertex_count() == 0 {
        let tuples: Vec<Vec<Element>> = x_g.iter().map(|e| vec![e.clone()]).collect();
        return Ok(SegalLimit { segal_map: tuples.clone(), tuples });
    }
    let edge = Arc::new(Graph::edge());
    require(corpus, &edge)?;
    let mut factors = Vec::new();
    let mut incl = Vec::new();
    for v in g.vertices() {
        let star = Arc::new(Graph::star(g.valence(v)));
        require(corpus, &star)?;
        factors.push(x.elements(&star)?);
        incl.push(vertex_map(g, v));
    }
    // each internal edge gives a constraint between two vertices
    struct Constraint {
        first: usize,
        second: usize,
        outer: Vec<Element>,
        inner: Vec<Element>,
    }
    let mut constraints = Vec::new();
    for e in g.internal_edges() {
        let (x1, x2) = if reversed { (e[1], e[0]) } else { (e[0], e[1]) };
        let (v1, v2) = (g.target(x1).unwrap(), g.target(x2).unwrap());
        let pos = |v: VertexId, a: ArcId| g.nbhd(v).iter().position(|&b| b == a).unwrap();
        let s1 = Graph::star(g.valence(v1)).nbhd(VertexId(0))[pos(v1, x1)];
        let s2 = Graph::star(g.valence(v2)).nbhd(VertexId(0))[pos(v2, x2)];
        let o = leg(g.valence(v1), s1, true);
        let i = leg(g.valence(v2), s2, false);
        let outer = factors[v1.index()].iter().map(|y| x.act(&o, y)).collect::<Result<_>>()?;
        let inner = factors[v2.index()].iter().map(|y| x.act(&i, y)).collect::<Result<_>>()?;
        constraints.push(Constraint { first: v1.index(), second: v2.index(), outer, inner });
    }
    let n = factors.len();
    let check = |choice: &[usize], upto: usize| {
        constraints.iter().all(|c| {
            c.first.max(c.second) != upto || c.outer[choice[c.first]] == c.inner[choice[c.second]]
        })
    };
    let search_from = |first: usize| {
        let mut out = Vec::new();
        let mut choice = vec![0usize; n];
        choice[0] = first;
        if !check(&choice, 0) {
            return out;
        }
        let mut depth = 1;
        if n == 1 {
            out.push(choice.clone());
            return out;
        }
        choice[1] = 0;
        loop {
            if choice[depth] < factors[depth].len() && check(&choice, depth) {
                if depth + 1 == n {
                    out.push(choice.clone());
                    choice[depth] += 1;
                } else {
                    depth += 1;
                    choice[depth] = 0;
                }
                continue;
            }
            if choice[depth] >= factors[depth].len() {
                depth -= 1;
                if depth == 0 {
                    return out;
                }
            }
            choice[depth] += 1;
        }
    };
    let found = exec::flat_map_range(exec, factors[0].len(), search_from);
    let tuples = found
        .into_iter()
        .map(|c| c.iter().enumerate().map(|(v, &k)| factors[v][k].clone()).collect())
        .collect();
    let segal_map = x_g
        .iter()
        .map(|y| incl.iter().map(|m| x.act(m, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(SegalLimit { tuples, segal_map })
}

/// Per-graph outcome of the Segal check.
#[derive(Clone, Debug, Serialize)]
pub struct SegalRow {
    pub graph: String,
    pub value_size: usize,
    pub limit_size: usize,
    pub bijective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SegalReport {
    pub strict_segal: bool,
    pub monochrome: bool,
    pub rows: Vec<SegalRow>,
}

/// `|X_†| = 1`.
pub fn is_monochrome(x: &dyn Presheaf) -> Result<bool> {
    Ok(x.elements(&Arc::new(Graph::edge()))?.len() == 1)
}

/// Checks the Segal map at every corpus graph.
pub fn segal_report(x: &dyn Presheaf, corpus: &[Arc<Graph>], exec: Execution) -> Result<SegalReport> {
    let mut rows = Vec::new();
    for g in corpus.iter().filter(|g| g.is_safe()) {
        let l = segal_limit(x, g, Some(corpus), false, exec)?;
        rows.push(SegalRow {
            graph: g.show_arcs(&g.arcs().collect::<Vec<_>>()),
            value_size: l.segal_map.len(),
            limit_size: l.tuples.len(),
            bijective: l.is_bijective(),
        });
    }
    Ok(SegalReport {
        strict_segal: rows.iter().all(|r| r.bijective),
        monochrome: is_monochrome(x)?,
        rows,
    })
}

pub fn is_strict_segal(x: &dyn Presheaf, corpus: &[Arc<Graph>], exec: Execution) -> Result<bool> {
    Ok(segal_report(x, corpus, exec)?.strict_segal)
}

/// For monochrome `X` the limit is the product `∏_v X_{☆_v}`.
pub fn monochrome_limit(x: &dyn Presheaf, g: &Arc<Graph>) -> Result<Vec<Vec<Element>>> {
    let mut out: Vec<Vec<Element>> = vec![Vec::new()];
    for v in g.vertices() {
        let f = x.elements(&Arc::new(Graph::star(g.valence(v))))?;
        out = out
            .into_iter()
            .flat_map(|t| {
                f.iter().map(move |y| {
                    let mut t = t.clone();
                    t.push(y.clone());
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// The matching object `∏_k X_†` at `☆_n` and the map from `X_{☆_n}`,
/// using the legs `h_k: ★ ↦ k†, ★† ↦ k`.
pub fn matching_object_star(x: &dyn Presheaf, n: usize) -> Result<(Vec<Tuple>, Vec<Tuple>)> {
    let star = Arc::new(Graph::star(n));
    let edge_values = x.elements(&Arc::new(Graph::edge()))?;
    let legs: Vec<GraphicalMap> = star.nbhd(VertexId(0)).iter().map(|&s| leg(n, s, true)).collect();
    let mut product: Vec<Vec<Element>> = vec![Vec::new()];
    for _ in 0..n {
        product = product
            .into_iter()
            .flat_map(|t| {
                edge_values.iter().map(move |y| {
                    let mut t = t.clone();
                    t.push(y.clone());
                    t
                })
            })
            .collect();
    }
    let map = x
        .elements(&star)?
        .iter()
        .map(|y| legs.iter().map(|h| x.act(h, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok((product, map))
}

/// The limit over the oriented maps among `L_0..L_N` and `C_1..C_N`.
#[derive(Clone, Debug)]
pub struct KanExtension {
    pub objects: Vec<Arc<Graph>>,
    /// Compatible families, as element indices per object.
    pub families: Vec<Vec<usize>>,
    /// Index of `L_0` among the objects.
    pub base: usize,
    pub base_size: usize,
}

impl KanExtension {
    /// Projection of each family to `X_{L₀}`.
    pub fn projection(&self) -> Vec<usize> {
        self.families.iter().map(|f| f[self.base]).collect()
    }

    pub fn projection_is_bijective(&self) -> bool {
        let mut p = self.projection();
        p.sort_unstable();
        p.dedup();
        p.len() == self.families.len() && p.len() == self.base_size
    }

    /// Restricts the families of `self` to the objects of `smaller` and
    /// checks that this is a bijection onto its families.
    pub fn restricts_bijectively_to(&self, smaller: &KanExtension) -> bool {
        let Some(pos) = smaller
            .objects
            .iter()
            .map(|g| self.objects.iter().position(|h| h == g))
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        let mut image: Vec<Vec<usize>> =
            self.families.iter().map(|f| pos.iter().map(|&p| f[p]).collect()).collect();
        image.sort();
        let n = image.len();
        image.dedup();
        let mut target = smaller.families.clone();
        target.sort();
        image.len() == n && image == target
    }
}

/// Sends unstarred arcs to unstarred arcs.
pub fn is_oriented(phi: &GraphicalMap) -> bool {
    phi.source
        .arcs()
        .all(|a| phi.source.arc_label(a).is_daggered() == phi.target.arc_label(phi.apply(a)).is_daggered())
}

/// Computes the truncated limit that gives the value of the right Kan
/// extension at the nodeless loop.
pub fn kan_extend_nodeless(
    x: &dyn Presheaf,
    truncation: usize,
    include_loops: bool,
    budget: u128,
    exec: Execution,
) -> Result<KanExtension> {
    if truncation == 0 {
        return Err(Error::CorpusTooSmall { reason: "truncation must be at least 1".into() });
    }
    let mut objects: Vec<Arc<Graph>> = (0..=truncation).map(|n| Arc::new(Graph::linear(n))).collect();
    if include_loops {
        for m in 1..=truncation {
            objects.push(Arc::new(Graph::cycle(m, Mode::Core)?));
        }
    }
    let values: Vec<Vec<Element>> = objects.iter().map(|g| x.elements(g)).collect::<Result<_>>()?;
    let lookup: Vec<HashMap<&Element, usize>> = values
        .iter()
        .map(|es| es.iter().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let n = objects.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    // for each oriented map a → b, the action as an index table X_b → X_a
    let tables = exec::map(exec, &pairs, |&(a, b)| -> Result<Vec<Vec<usize>>> {
        let maps = enumerate_maps(&objects[a], &objects[b], Mode::Core, budget, Execution::Sequential)?;
        maps.iter()
            .filter(|m| is_oriented(m))
            .map(|m| {
                values[b]
                    .iter()
                    .map(|y| {
                        let z = x.act(m, y)?;
                        lookup[a].get(&z).copied().ok_or_else(|| Error::InconsistentTable {
                            reason: "action leaves the value set".into(),
                        })
                    })
                    .collect()
            })
            .collect()
    });
    let mut constraints: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (&(a, b), t) in pairs.iter().zip(tables) {
        for table in t? {
            constraints.push((a, b, table));
        }
    }
    // assign objects from the largest down; each constraint is checked once
    // both ends are set
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&o| std::cmp::Reverse((objects[o].arc_count(), o)));
    let rank: Vec<usize> = {
        let mut r = vec![0; n];
        for (i, &o) in order.iter().enumerate() {
            r[o] = i;
        }
        r
    };
    let mut by_rank: Vec<Vec<&(usize, usize, Vec<usize>)>> = vec![Vec::new(); n];
    for c in &constraints {
        by_rank[rank[c.0].max(rank[c.1])].push(c);
    }
    let mut families = Vec::new();
    let mut choice = vec![usize::MAX; n];
    fn go(
        depth: usize,
        order: &[usize],
        values: &[Vec<Element>],
        by_rank: &[Vec<&(usize, usize, Vec<usize>)>],
        choice: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == order.len() {
            out.push(choice.clone());
            return;
        }
        let o = order[depth];
        for k in 0..values[o].len() {
            choice[o] = k;
            if by_rank[depth].iter().all(|(a, b, t)| t[choice[*b]] == choice[*a]) {
                go(depth + 1, order, values, by_rank, choice, out);
            }
        }
        choice[o] = usize::MAX;
    }
    go(0, &order, &values, &by_rank, &mut choice, &mut families);
    families.sort();
    Ok(KanExtension { base_size: values[0].len(), objects, families, base: 0 })
}
