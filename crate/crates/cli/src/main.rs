use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use graphical::audit::{audit, builtin_corpus, close_under_factorizations, AuditKind};
use graphical::corpus::close_under_stars;
use graphical::embedding::embedding_classes;
use graphical::factor::{classify, factor_active_embedding, factor_reedy};
use graphical::iso::{automorphisms, find_isomorphism};
use graphical::map::DEFAULT_BUDGET;
use graphical::presheaf::{
    kan_extend_nodeless, segal_report, ArcColoring, Palette, Presheaf, TablePresheaf,
};
use graphical::substitution::{substitute, Part};
use graphical::text::{self, write_graph, write_map, Document};
use graphical::variants::{is_stable, is_stable_map, sieve_membership, total_genus};
use graphical::{enumerate_maps, Error, Execution, Graph, GraphicalMap, Mode};

#[derive(Parser)]
#[command(name = "graphical", version, about = "Exact computations with graphs, embeddings and graphical maps")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest number of candidate arc maps an enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate graph, map and presheaf files.
    Validate { files: Vec<PathBuf> },
    /// Structural summary of each graph.
    Info {
        files: Vec<PathBuf>,
        #[arg(long)]
        graph: Vec<String>,
    },
    /// Isomorphism between two graphs, or the automorphisms of one.
    Iso {
        files: Vec<PathBuf>,
        #[arg(long)]
        graph: Vec<String>,
    },
    /// The embedding classes of each graph.
    Embeddings {
        files: Vec<PathBuf>,
        #[arg(long)]
        graph: Vec<String>,
    },
    /// All graphical maps between two graphs.
    Maps {
        files: Vec<PathBuf>,
        #[arg(long)]
        graph: Vec<String>,
        #[arg(long, default_value = "core")]
        mode: String,
    },
    /// `second ∘ first` for two maps.
    Compose {
        files: Vec<PathBuf>,
        #[arg(long)]
        map: Vec<String>,
    },
    /// Active/embedding or Reedy factorization of each map.
    Factor {
        files: Vec<PathBuf>,
        #[arg(long, default_value = "act-emb")]
        mode: String,
        #[arg(long)]
        map: Vec<String>,
    },
    /// Substitute part graphs (with `match` lines) into the first graph.
    Substitute {
        files: Vec<PathBuf>,
        #[arg(long, default_value = "core")]
        mode: String,
    },
    /// Strict Segal check over a corpus.
    Segal {
        files: Vec<PathBuf>,
        #[arg(long, default_value = "terminal")]
        presheaf: String,
        #[arg(long)]
        palette: Option<String>,
        #[arg(long)]
        corpus: Option<String>,
    },
    /// The limit giving the value at the nodeless loop.
    KanNodeless {
        files: Vec<PathBuf>,
        #[arg(long, default_value = "terminal")]
        presheaf: String,
        #[arg(long)]
        palette: Option<String>,
        #[arg(long, default_value_t = 3)]
        truncation: usize,
    },
    /// Stability of genus-annotated graphs and of maps between them.
    Stable { files: Vec<PathBuf> },
    /// Exhaustive audit of the category laws over a corpus.
    Audit {
        #[arg(long, default_value = "degree2")]
        corpus: String,
        #[arg(long, default_value = "core")]
        mode: String,
    },
}

/// A failure to read or validate input; exit code 2.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(format!("error[{}]: {e}", e.code()))
    }
}

/// Text, JSON and whether the answer is positive.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

type Outcome = Result<Report, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match run(&cli, exec) {
        Ok(r) => {
            if cli.json {
                let mut v = r.json;
                if let Value::Object(m) = &mut v {
                    m.insert("schema".into(), json!(1));
                    m.insert("ok".into(), json!(r.ok));
                }
                println!("{}", serde_json::to_string_pretty(&v).expect("reports serialize"));
            } else {
                print!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(mut msg)) => {
            if !msg.starts_with("error") {
                msg.insert_str(0, "error: ");
            }
            if cli.json {
                println!("{}", json!({ "schema": 1, "error": msg }));
            } else {
                eprintln!("{msg}");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, exec: Execution) -> Outcome {
    let budget = cli.budget;
    match &cli.command {
        Command::Validate { files } => {
            let d = load(files)?;
            let text = format!(
                "ok: {} graphs, {} maps, {} presheaves\n",
                d.graphs.len(),
                d.maps.len(),
                d.presheaves.len()
            );
            let json = json!({
                "graphs": d.graphs.iter().map(|g| &g.name).collect::<Vec<_>>(),
                "maps": d.maps.iter().map(|m| &m.name).collect::<Vec<_>>(),
                "presheaves": d.presheaves.iter().map(|p| &p.name).collect::<Vec<_>>(),
            });
            Ok(Report { text, json, ok: true })
        }
        Command::Info { files, graph } => {
            let d = load(files)?;
            let mut text = String::new();
            let mut out = Vec::new();
            for (name, g) in select_graphs(&d, graph)? {
                let (t, j) = info(&name, &g);
                text.push_str(&t);
                out.push(j);
            }
            Ok(Report { text, json: json!({ "graphs": out }), ok: true })
        }
        Command::Iso { files, graph } => {
            let d = load(files)?;
            let gs = select_graphs(&d, graph)?;
            match &gs[..] {
                [(n, g)] => {
                    let auts = automorphisms(g);
                    let text = format!("{n}: {} automorphisms\n", auts.len());
                    Ok(Report { text, json: json!({ "graph": n, "automorphisms": auts.len() }), ok: true })
                }
                [(n1, g), (n2, h), ..] => match find_isomorphism(g, h) {
                    Some(z) => {
                        let pairs: Vec<(String, String)> = g
                            .arcs()
                            .map(|a| (g.arc_label(a).to_string(), h.arc_label(z.arcs[a.index()]).to_string()))
                            .collect();
                        let mut text = format!("{n1} ≅ {n2}\n");
                        for (a, b) in &pairs {
                            text.push_str(&format!("  {a} -> {b}\n"));
                        }
                        Ok(Report { text, json: json!({ "isomorphic": true, "arcs": pairs }), ok: true })
                    }
                    None => Ok(Report {
                        text: format!("{n1} and {n2} are not isomorphic\n"),
                        json: json!({ "isomorphic": false }),
                        ok: false,
                    }),
                },
                [] => Err(InputError("no graphs given".into())),
            }
        }
        Command::Embeddings { files, graph } => {
            let d = load(files)?;
            let mut text = String::new();
            let mut out = Vec::new();
            for (name, g) in select_graphs(&d, graph)? {
                let classes = embedding_classes(&g);
                text.push_str(&format!("{name}: {} classes\n", classes.len()));
                let shown: Vec<String> = classes.iter().map(|c| c.show(&g)).collect();
                for s in &shown {
                    text.push_str(&format!("  {s}\n"));
                }
                out.push(json!({ "graph": name, "count": classes.len(), "classes": shown }));
            }
            Ok(Report { text, json: json!({ "graphs": out }), ok: true })
        }
        Command::Maps { files, graph, mode } => {
            let d = load(files)?;
            let mode = map_mode(mode)?;
            let gs = select_graphs(&d, graph)?;
            let [(n1, g), (n2, h), ..] = &gs[..] else {
                return Err(InputError("maps needs two graphs".into()));
            };
            let maps = enumerate_maps(g, h, mode, budget, exec)?;
            let mut text = format!("{} maps {n1} -> {n2}\n", maps.len());
            let mut out = Vec::new();
            for (i, m) in maps.iter().enumerate() {
                let t = write_map(&format!("phi{}", i + 1), n1, n2, m);
                text.push_str(&t);
                out.push(t);
            }
            Ok(Report { text, json: json!({ "count": maps.len(), "maps": out }), ok: true })
        }
        Command::Compose { files, map } => {
            let d = load(files)?;
            let ms = select_maps(&d, map)?;
            let [first, second, ..] = &ms[..] else {
                return Err(InputError("compose needs two maps".into()));
            };
            let c = second.map.after(&first.map)?;
            let t = write_map("composite", &first.source, &second.target, &c);
            Ok(Report { text: t.clone(), json: json!({ "map": t }), ok: true })
        }
        Command::Factor { files, mode, map } => {
            let d = load(files)?;
            let mut text = String::new();
            let mut out = Vec::new();
            for e in select_maps(&d, map)? {
                let phi = &e.map;
                let c = classify(phi)?;
                let mut t = format!("# {}: {}\n", e.name, serde_json::to_string(&c).expect("serializes"));
                match mode.as_str() {
                    "act-emb" => {
                        let (alpha, k) = factor_active_embedding(phi)?;
                        t.push_str(&write_graph("image", &k.source, None));
                        t.push_str(&write_map("active", &e.source, "image", &alpha));
                        let emb = GraphicalMap::from_embedding(&k, phi.mode);
                        t.push_str(&write_map("embedding", "image", &e.target, &emb));
                    }
                    "reedy" => {
                        let r = factor_reedy(phi)?;
                        t.push_str(&write_graph("middle", &r.degeneracy.target, None));
                        t.push_str(&write_graph("image", &r.inner.target, None));
                        t.push_str(&write_map("degeneracy", &e.source, "middle", &r.degeneracy));
                        t.push_str(&write_map("inner", "middle", "image", &r.inner));
                        let outer = GraphicalMap::from_embedding(&r.outer, phi.mode);
                        t.push_str(&write_map("outer", "image", &e.target, &outer));
                    }
                    m => return Err(InputError(format!("unknown factorization `{m}`"))),
                }
                text.push_str(&t);
                out.push(json!({ "map": e.name, "classification": c, "factorization": t }));
            }
            Ok(Report { text, json: json!({ "maps": out }), ok: true })
        }
        Command::Substitute { files, mode } => {
            let d = load(files)?;
            substitute_cmd(&d, map_mode(mode)?)
        }
        Command::Segal { files, presheaf, palette, corpus } => {
            let d = load(files)?;
            let (x, own) = choose_presheaf(&d, presheaf, palette.as_deref())?;
            let corpus = match (corpus, own) {
                (Some(c), _) => load_corpus(c, AuditKind::Core, true)?,
                (None, Some(objects)) => objects,
                (None, None) => load_corpus("degree2", AuditKind::Core, true)?,
            };
            let r = segal_report(x.as_ref(), &corpus, exec)?;
            let yes = |b: bool| if b { "yes" } else { "no" };
            let mut text = format!("strict Segal: {}, monochrome: {}\n", yes(r.strict_segal), yes(r.monochrome));
            for row in r.rows.iter().filter(|r| !r.bijective) {
                text.push_str(&format!(
                    "  fails at {}: |X_G| = {}, |limit| = {}\n",
                    row.graph, row.value_size, row.limit_size
                ));
            }
            Ok(Report { text, json: serde_json::to_value(&r).expect("serializes"), ok: r.strict_segal })
        }
        Command::KanNodeless { files, presheaf, palette, truncation } => {
            let d = load(files)?;
            let (x, _) = choose_presheaf(&d, presheaf, palette.as_deref())?;
            let k = kan_extend_nodeless(x.as_ref(), *truncation, true, budget, exec)?;
            let ok = k.projection_is_bijective();
            let text = format!(
                "limit: {} families, |X_L0| = {}, projection bijective: {}\n",
                k.families.len(),
                k.base_size,
                if ok { "yes" } else { "no" }
            );
            let json = json!({
                "truncation": truncation,
                "families": k.families.len(),
                "base_size": k.base_size,
                "bijective": ok,
            });
            Ok(Report { text, json, ok })
        }
        Command::Stable { files } => {
            let d = load(files)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut ok = true;
            for e in d.graphs.iter().filter(|e| e.genus.is_some()) {
                let genus = e.genus.as_deref().unwrap();
                let s = is_stable(&e.graph, genus);
                ok &= s;
                let total = total_genus(&e.graph, genus);
                text.push_str(&format!("{}: stable {}, total genus {total}\n", e.name, if s { "yes" } else { "no" }));
                rows.push(json!({ "graph": e.name, "stable": s, "total_genus": total }));
            }
            for m in &d.maps {
                let (Some(gs), Some(gt)) = (&d.graph(&m.source)?.genus, &d.graph(&m.target)?.genus) else {
                    continue;
                };
                let s = is_stable_map(&m.map, gs, gt);
                ok &= s;
                text.push_str(&format!("{}: stable map {}\n", m.name, if s { "yes" } else { "no" }));
                rows.push(json!({ "map": m.name, "stable": s }));
            }
            Ok(Report { text, json: json!({ "results": rows }), ok })
        }
        Command::Audit { corpus, mode } => {
            let kind: AuditKind = mode.parse()?;
            let mut graphs = load_corpus(corpus, kind, false)?;
            if Path::new(corpus).is_dir() {
                let mode = if kind == AuditKind::Extended { Mode::Extended } else { Mode::Core };
                if kind != AuditKind::Extended {
                    graphs.retain(|g| g.is_safe());
                }
                let added = close_under_factorizations(&mut graphs, mode, budget, exec)?;
                if added > 0 && !cli.json {
                    eprintln!("note: added {added} graphs to close the corpus under factorizations");
                }
            }
            let r = audit(&graphs, kind, budget, exec)?;
            let mut text = format!("audit {mode}: {} objects, {} maps\n", r.objects, r.maps);
            for c in &r.checks {
                text.push_str(&format!("  {:<28} {:>9} instances  {} violations\n", c.name, c.instances, c.violations));
                for e in &c.examples {
                    text.push_str(&format!("    {e}\n"));
                }
            }
            text.push_str(if r.passed() { "audit: pass\n" } else { "audit: FAIL\n" });
            Ok(Report { text, ok: r.passed(), json: serde_json::to_value(&r).expect("serializes") })
        }
    }
}

fn load(files: &[PathBuf]) -> Result<Document, InputError> {
    let mut d = Document::default();
    for f in files {
        let text = std::fs::read_to_string(f)
            .map_err(|e| InputError(format!("error[Io]: {}: {e}", f.display())))?;
        d.extend(&text)
            .map_err(|e| InputError(format!("error[{}]: {}: {e}", e.code(), f.display())))?;
    }
    Ok(d)
}

fn select_graphs(d: &Document, names: &[String]) -> Result<Vec<(String, Arc<Graph>)>, InputError> {
    if names.is_empty() {
        return Ok(d.graphs.iter().map(|e| (e.name.clone(), e.graph.clone())).collect());
    }
    names
        .iter()
        .map(|n| Ok((n.clone(), d.graph(n)?.graph.clone())))
        .collect()
}

fn select_maps<'a>(d: &'a Document, names: &[String]) -> Result<Vec<&'a text::MapEntry>, InputError> {
    if names.is_empty() {
        return Ok(d.maps.iter().collect());
    }
    names.iter().map(|n| Ok(d.map(n)?)).collect()
}

fn map_mode(s: &str) -> Result<Mode, InputError> {
    match s {
        "core" => Ok(Mode::Core),
        "extended" => Ok(Mode::Extended),
        _ => Err(InputError(format!("unknown mode `{s}`"))),
    }
}

fn info(name: &str, g: &Graph) -> (String, Value) {
    let arcs = |a: &[graphical::ArcId]| g.show_arcs(a);
    let edges: Vec<String> = g.internal_edges().iter().map(|e| arcs(e)).collect();
    let core = g.degree(Mode::Core).ok();
    let extended = g.degree(Mode::Extended).ok();
    let betti = g.betti1().ok();
    let sieves = sieve_membership(g).ok();
    let opt = |x: Option<usize>| x.map_or("n/a".to_string(), |x| x.to_string());
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut t = format!("graph {name}\n");
    t.push_str(&format!("  arcs: {}, vertices: {}\n", g.arc_count(), g.vertex_count()));
    t.push_str(&format!("  boundary: {}\n", arcs(&g.boundary())));
    t.push_str(&format!("  internal edges: {}\n", if edges.is_empty() { "none".into() } else { edges.join(" ") }));
    t.push_str(&format!("  degree: core {}, extended {}\n", opt(core), opt(extended)));
    t.push_str(&format!("  betti1: {}\n", opt(betti)));
    t.push_str(&format!("  connected: {}\n  safe: {}\n", yes(g.is_connected()), yes(g.is_safe())));
    if let Some(s) = sieves {
        t.push_str(&format!("  acyclic: {}, acyclic with boundary: {}\n", yes(s.acyclic), yes(s.acyclic_with_boundary)));
    }
    let j = json!({
        "graph": name,
        "arcs": g.arc_count(),
        "vertices": g.vertex_count(),
        "boundary": arcs(&g.boundary()),
        "internal_edges": edges,
        "degree_core": core,
        "degree_extended": extended,
        "betti1": betti,
        "connected": g.is_connected(),
        "safe": g.is_safe(),
        "sieves": sieves,
    });
    (t, j)
}

fn substitute_cmd(d: &Document, mode: Mode) -> Outcome {
    let base_entry = d.graphs.first().ok_or_else(|| InputError("no base graph".into()))?;
    let base = &base_entry.graph;
    let by_part = text::matches_by_part(d)?;
    let mut parts: Vec<Part> = base.vertices().map(|v| Part::star_at(base, v)).collect();
    let mut replaced = vec![false; base.vertex_count()];
    for (name, lines) in &by_part {
        let h = d.graph(name)?.graph.clone();
        let v = base.vertex(&lines[0].vertex).map_err(|e| e.at(lines[0].line))?;
        if lines.iter().any(|l| l.vertex != lines[0].vertex) {
            return Err(InputError(format!("part `{name}` is matched to several vertices")));
        }
        if std::mem::replace(&mut replaced[v.index()], true) {
            return Err(InputError(format!("vertex `{}` has two parts", lines[0].vertex)));
        }
        let matching = lines
            .iter()
            .map(|l| {
                let a = base.arc(&l.base_arc).map_err(|e| e.at(l.line))?;
                let b = h.arc(&l.part_arc).map_err(|e| e.at(l.line))?;
                Ok((a, b))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        parts[v.index()] = Part { graph: h, matching };
    }
    let r = substitute(base, &parts, mode)?;
    let mut text = write_graph("result", &r.graph, None);
    let betti = |g: &Graph| g.betti1().ok();
    let lhs = betti(base).zip(parts.iter().map(|p| betti(&p.graph)).sum::<Option<usize>>());
    let additive = match (lhs, betti(&r.graph)) {
        (Some((b, s)), Some(k)) => Some(b + s == k),
        _ => None,
    };
    let boundary: Vec<(String, String)> = r
        .boundary_map
        .iter()
        .map(|&(x, y)| (base.arc_label(x).to_string(), r.graph.arc_label(y).to_string()))
        .collect();
    for (x, y) in &boundary {
        text.push_str(&format!("# boundary {x} -> {y}\n"));
    }
    if let Some(ok) = additive {
        text.push_str(&format!("# betti1 additive: {}\n", if ok { "yes" } else { "no" }));
    }
    let json = json!({
        "graph": write_graph("result", &r.graph, None),
        "boundary": boundary,
        "betti1_additive": additive,
    });
    Ok(Report { text, json, ok: true })
}

/// The named presheaf, and its own objects when it is table-backed.
fn choose_presheaf(
    d: &Document,
    name: &str,
    palette: Option<&str>,
) -> Result<(Box<dyn Presheaf>, Option<Vec<Arc<Graph>>>), InputError> {
    match name {
        "terminal" => Ok((Box::new(ArcColoring::terminal()), None)),
        "arc-coloring" => {
            let p = Palette::parse(palette.unwrap_or("free2"))?;
            Ok((Box::new(ArcColoring::new(p)), None))
        }
        _ => {
            let e = d
                .presheaves
                .iter()
                .find(|p| p.name == name)
                .ok_or_else(|| InputError(format!("unknown presheaf `{name}`")))?;
            let x: TablePresheaf = e.presheaf.clone();
            let objects = x.objects().to_vec();
            Ok((Box::new(x), Some(objects)))
        }
    }
}

/// A directory of `.graph` files, or a builtin `degree<N>` corpus.
fn load_corpus(spec: &str, kind: AuditKind, with_stars: bool) -> Result<Vec<Arc<Graph>>, InputError> {
    let path = Path::new(spec);
    let mut graphs = if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| InputError(format!("error[Io]: {spec}: {e}")))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "graph"))
            .collect();
        files.sort();
        load(&files)?.graphs.into_iter().map(|e| e.graph).collect()
    } else {
        let n = spec
            .trim_end_matches('/')
            .strip_prefix("degree")
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| InputError(format!("`{spec}` is neither a directory nor `degree<N>`")))?;
        builtin_corpus(n, kind)
    };
    if with_stars {
        close_under_stars(&mut graphs);
    }
    Ok(graphs)
}
