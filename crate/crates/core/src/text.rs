//! Line-based text formats for graphs, maps and table presheaves.
//!
//! ```text
//! graph L2
//! arc 0 0†
//! arc 1 1†
//! arc 2 2†
//! vertex 1 : 0† 1
//! vertex 2 : 1† 2
//! end
//! ```
//!
//! Blank lines and everything after `#` are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{ArcId, Graph, GraphBuilder, Mode};
use crate::map::GraphicalMap;
use crate::presheaf::TablePresheaf;

#[derive(Clone, Debug)]
pub struct GraphEntry {
    pub name: String,
    pub graph: Arc<Graph>,
    pub genus: Option<Vec<u32>>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct MapEntry {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: GraphicalMap,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct PresheafEntry {
    pub name: String,
    pub presheaf: TablePresheaf,
    pub line: usize,
}

/// `match <v> <arc of G> -> <arc of H_v>`, attached to the last graph
/// declared before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchLine {
    pub line: usize,
    pub part: Option<String>,
    pub vertex: String,
    pub base_arc: String,
    pub part_arc: String,
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub graphs: Vec<GraphEntry>,
    pub maps: Vec<MapEntry>,
    pub presheaves: Vec<PresheafEntry>,
    pub matches: Vec<MatchLine>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

impl Document {
    pub fn graph(&self, name: &str) -> Result<&GraphEntry> {
        self.graphs
            .iter()
            .rev()
            .find(|g| g.name == name)
            .ok_or_else(|| parse_err(0, format!("unknown graph `{name}`")))
    }

    pub fn map(&self, name: &str) -> Result<&MapEntry> {
        self.maps
            .iter()
            .rev()
            .find(|m| m.name == name)
            .ok_or_else(|| parse_err(0, format!("unknown map `{name}`")))
    }

    /// Name of a declared graph equal to `g`.
    pub fn name_of(&self, g: &Graph) -> Option<&str> {
        self.graphs.iter().find(|e| *e.graph == *g).map(|e| e.name.as_str())
    }

    /// Parses more text into this document. Maps and presheaves may refer
    /// to graphs and maps declared earlier, in this or previous text.
    pub fn extend(&mut self, text: &str) -> Result<()> {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect()))
            .filter(|(_, w): &(usize, Vec<&str>)| !w.is_empty())
            .collect();
        let mut i = 0;
        while i < lines.len() {
            let (line, words) = &lines[i];
            let end = lines[i..]
                .iter()
                .position(|(_, w)| w[..] == ["end"])
                .map(|k| i + k);
            let body = |end: Option<usize>| -> Result<&[(usize, Vec<&str>)]> {
                let end = end.ok_or_else(|| parse_err(*line, "block is missing `end`"))?;
                Ok(&lines[i + 1..end])
            };
            match words[0] {
                "graph" => {
                    let entry = parse_graph(*line, words, body(end)?)?;
                    self.graphs.push(entry);
                    i = end.unwrap() + 1;
                }
                "map" => {
                    let entry = self.parse_map(*line, words, body(end)?)?;
                    self.maps.push(entry);
                    i = end.unwrap() + 1;
                }
                "presheaf" => {
                    let entry = self.parse_presheaf(*line, words, body(end)?)?;
                    self.presheaves.push(entry);
                    i = end.unwrap() + 1;
                }
                "match" => {
                    let [_, v, a, "->", b] = words[..] else {
                        return Err(parse_err(*line, "expected `match <v> <arc> -> <arc>`"));
                    };
                    self.matches.push(MatchLine {
                        line: *line,
                        part: self.graphs.last().map(|g| g.name.clone()),
                        vertex: v.into(),
                        base_arc: a.into(),
                        part_arc: b.into(),
                    });
                    i += 1;
                }
                w => return Err(parse_err(*line, format!("unexpected `{w}`"))),
            }
        }
        Ok(())
    }

    fn parse_map(&self, line: usize, header: &[&str], body: &[(usize, Vec<&str>)]) -> Result<MapEntry> {
        let (name, source, target, mode) = match header[..] {
            ["map", n, ":", s, "->", t] => (n, s, t, Mode::Core),
            ["map", n, ":", s, "->", t, m] => (n, s, t, parse_mode(line, m, false)?),
            _ => return Err(parse_err(line, "expected `map <name> : <G> -> <H> [mode=core|extended]`")),
        };
        let missing = |g: &str| parse_err(line, format!("unknown graph `{g}`"));
        let src = self.graph(source).map_err(|_| missing(source))?.graph.clone();
        let tgt = self.graph(target).map_err(|_| missing(target))?.graph.clone();
        let mut arcs: Vec<Option<ArcId>> = vec![None; src.arc_count()];
        let mut flags = vec![false; src.vertex_count()];
        for (l, w) in body {
            match w[..] {
                ["arc", a, "->", b] => {
                    let a = src.arc(a).map_err(|e| e.at(*l))?;
                    let b = tgt.arc(b).map_err(|e| e.at(*l))?;
                    if arcs[a.index()].replace(b).is_some() {
                        return Err(parse_err(*l, "arc assigned twice"));
                    }
                }
                ["vertex", v, "->", kind] => {
                    let v = src.vertex(v).map_err(|e| e.at(*l))?;
                    flags[v.index()] = match kind {
                        "full" => false,
                        "edge" => true,
                        _ => return Err(parse_err(*l, "expected `full` or `edge`")),
                    };
                }
                _ => return Err(parse_err(*l, "expected `arc a -> b` or `vertex v -> full|edge`")),
            }
        }
        let arcs = arcs
            .into_iter()
            .enumerate()
            .map(|(a, b)| {
                b.ok_or_else(|| {
                    parse_err(line, format!("arc `{}` has no image", src.arc_label(ArcId(a as u32))))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let map = GraphicalMap::new(src, tgt, arcs, &flags, mode).map_err(|e| e.at(line))?;
        Ok(MapEntry { name: name.into(), source: source.into(), target: target.into(), map, line })
    }

    fn parse_presheaf(
        &self,
        line: usize,
        header: &[&str],
        body: &[(usize, Vec<&str>)],
    ) -> Result<PresheafEntry> {
        let ["presheaf", name] = header[..] else {
            return Err(parse_err(line, "expected `presheaf <name>`"));
        };
        let mut objects = Vec::new();
        let mut sizes = Vec::new();
        let mut generators = Vec::new();
        for (l, w) in body {
            match w[..] {
                ["value", g, n] => {
                    let g = self.graph(g).map_err(|e| e.at(*l))?;
                    objects.push(g.graph.clone());
                    sizes.push(n.parse().map_err(|_| parse_err(*l, "bad value count"))?);
                }
                ["action", m, ":", ref table @ ..] => {
                    let m = self.map(m).map_err(|e| e.at(*l))?;
                    let table = table
                        .iter()
                        .map(|t| t.parse::<u32>().map_err(|_| parse_err(*l, "bad table entry")))
                        .collect::<Result<Vec<_>>>()?;
                    generators.push((m.map.clone(), table));
                }
                _ => return Err(parse_err(*l, "expected `value <G> <n>` or `action <map> : …`")),
            }
        }
        let presheaf = TablePresheaf::from_generators(objects, sizes, generators).map_err(|e| e.at(line))?;
        Ok(PresheafEntry { name: name.into(), presheaf, line })
    }
}

fn parse_mode(line: usize, word: &str, graph: bool) -> Result<Mode> {
    match (word, graph) {
        ("mode=safe", true) | ("mode=core", false) => Ok(Mode::Core),
        ("mode=extended", _) => Ok(Mode::Extended),
        _ => Err(parse_err(line, format!("unknown mode `{word}`"))),
    }
}

fn parse_graph(line: usize, header: &[&str], body: &[(usize, Vec<&str>)]) -> Result<GraphEntry> {
    let (name, mode) = match header[..] {
        ["graph", n] => (n, Mode::Core),
        ["graph", n, m] => (n, parse_mode(line, m, true)?),
        _ => return Err(parse_err(line, "expected `graph <name> [mode=safe|extended]`")),
    };
    let mut b = GraphBuilder::new();
    let mut genus_lines: Vec<(usize, String, u32)> = Vec::new();
    let mut has_boundary = false;
    for (l, w) in body {
        match w[..] {
            ["arc", a, c] => b = b.pair(a, c),
            ["vertex", v, ":", ref nbhd @ ..] => b = b.vertex(v, nbhd.iter().copied()),
            ["boundary", ":", ref arcs @ ..] => {
                has_boundary = true;
                b = b.boundary(arcs.iter().copied());
            }
            ["genus", v, n] => {
                let n = n.parse().map_err(|_| parse_err(*l, "bad genus"))?;
                genus_lines.push((*l, v.into(), n));
            }
            _ => {
                return Err(parse_err(
                    *l,
                    "expected `arc a a'`, `vertex v : …`, `boundary : …` or `genus v n`",
                ))
            }
        }
    }
    let graph = b.build().map_err(|e| e.at(line))?;
    if mode == Mode::Core && !graph.is_safe() {
        let e = if graph.is_nodeless_loop() {
            Error::NodelessLoopInSafeMode
        } else {
            Error::BoundaryViolation { reason: "a safe graph has boundary A \\ D".into() }
        };
        return Err(e.at(line));
    }
    if mode == Mode::Extended && !has_boundary {
        return Err(parse_err(line, "extended graphs need an explicit boundary line"));
    }
    let genus = if genus_lines.is_empty() {
        None
    } else {
        let mut genus = vec![0; graph.vertex_count()];
        for (l, v, n) in genus_lines {
            genus[graph.vertex(&v).map_err(|e| e.at(l))?.index()] = n;
        }
        Some(genus)
    };
    Ok(GraphEntry { name: name.into(), graph: Arc::new(graph), genus, line })
}

pub fn parse(text: &str) -> Result<Document> {
    let mut d = Document::default();
    d.extend(text)?;
    Ok(d)
}

/// Parses text that must contain exactly one graph.
pub fn parse_graph_text(text: &str) -> Result<GraphEntry> {
    let d = parse(text)?;
    match &d.graphs[..] {
        [g] => Ok(g.clone()),
        _ => Err(parse_err(0, format!("expected one graph, found {}", d.graphs.len()))),
    }
}

fn words(labels: impl IntoIterator<Item = impl std::fmt::Display>) -> String {
    labels.into_iter().fold(String::new(), |mut s, l| {
        let _ = write!(s, " {l}");
        s
    })
}

/// Canonical text of a graph: pairs by their lesser arc, vertices and
/// neighborhoods in identifier order, and a boundary line only when the
/// graph is not safe.
pub fn write_graph(name: &str, g: &Graph, genus: Option<&[u32]>) -> String {
    let mut s = String::new();
    let safe = g.is_safe();
    let _ = writeln!(s, "graph {name}{}", if safe { "" } else { " mode=extended" });
    for [a, b] in g.edges() {
        let _ = writeln!(s, "arc {} {}", g.arc_label(a), g.arc_label(b));
    }
    for v in g.vertices() {
        let nb = g.nbhd(v).iter().map(|&a| g.arc_label(a));
        let _ = writeln!(s, "vertex {} :{}", g.vertex_label(v), words(nb));
    }
    if !safe {
        let _ = writeln!(s, "boundary :{}", words(g.boundary().iter().map(|&a| g.arc_label(a))));
    }
    if let Some(genus) = genus {
        for v in g.vertices() {
            let _ = writeln!(s, "genus {} {}", g.vertex_label(v), genus[v.index()]);
        }
    }
    s.push_str("end\n");
    s
}

/// Canonical text of a map; only `φ₀` and the edge flags are written.
pub fn write_map(name: &str, source: &str, target: &str, m: &GraphicalMap) -> String {
    let mut s = String::new();
    let mode = if m.mode == Mode::Extended { " mode=extended" } else { "" };
    let _ = writeln!(s, "map {name} : {source} -> {target}{mode}");
    for a in m.source.arcs() {
        let _ = writeln!(s, "arc {} -> {}", m.source.arc_label(a), m.target.arc_label(m.apply(a)));
    }
    for v in m.source.vertices() {
        let kind = if m.vertices[v.index()].edge { "edge" } else { "full" };
        let _ = writeln!(s, "vertex {} -> {kind}", m.source.vertex_label(v));
    }
    s.push_str("end\n");
    s
}

/// Groups match lines by part graph, checking every line names a part.
pub fn matches_by_part(d: &Document) -> Result<HashMap<String, Vec<&MatchLine>>> {
    let mut out: HashMap<String, Vec<&MatchLine>> = HashMap::new();
    for m in &d.matches {
        let part = m.part.clone().ok_or_else(|| parse_err(m.line, "match line before any graph"))?;
        out.entry(part).or_default().push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_standard() {
        for g in [Graph::edge(), Graph::star(3), Graph::linear(2), Graph::nodeless_loop()] {
            let text = write_graph("g", &g, None);
            let back = parse_graph_text(&text).unwrap();
            assert_eq!(*back.graph, g, "{text}");
            assert_eq!(write_graph("g", &back.graph, None), text);
        }
    }

    #[test]
    fn errors_have_lines() {
        let e = parse("graph x\narc 1 1\nend\n").unwrap_err();
        assert_eq!(e.code(), "InvolutionFixedPoint");
        assert!(e.to_string().starts_with("line 1"));
        let e = parse("graph x\nfoo\nend\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, message: e.to_string()[8..].to_string() });
        let e = parse("graph k\narc 0 0†\nboundary :\nend\n").unwrap_err();
        assert_eq!(e.code(), "NodelessLoopInSafeMode");
    }

    #[test]
    fn maps_parse() {
        let text = format!(
            "{}{}map c : L2 -> L1\narc 0 -> 0\narc 0† -> 0†\narc 1 -> 0\narc 1† -> 0†\narc 2 -> 1\narc 2† -> 1†\nvertex 1 -> edge\nend\n",
            write_graph("L2", &Graph::linear(2), None),
            write_graph("L1", &Graph::linear(1), None)
        );
        let d = parse(&text).unwrap();
        let m = &d.map("c").unwrap().map;
        assert!(m.has_edge_flag());
        let again = write_map("c", "L2", "L1", m);
        let d2 = parse(&format!("{}{}{again}", write_graph("L2", &Graph::linear(2), None), write_graph("L1", &Graph::linear(1), None))).unwrap();
        assert_eq!(d2.map("c").unwrap().map, *m);
    }
}
