//! TATG v1 text format.
//!
//! ```text
//! tatg 1
//! name k23
//! vertex v1: 1 3 5
//! edge e1: len 1/2
//! relative A1: +e7 -e9
//! sign F2 = -
//! level 1: e3 e4
//! delta 1 @e3 = 1/6
//! [orbit-spec]
//! genus 0
//! order 2
//! boundary 1/2 +
//! branch 1
//! handle 1 0
//! [end]
//! [spec-tree]
//! piece root: genus 0 order 2 boundary 1/2 + branch 1 branch 0
//! piece torus: parent=root point=2 screw=-1 genus 1 order 1 boundary 9 +
//! [end]
//! ```
//!
//! Darts, edges, vertices and faces are 1-based. Dart `2k-1` runs along
//! edge `ek`, dart `2k` against it. Lines starting with `#` are comments.
//! `serialize` writes sections in the order above, so canonical files
//! round-trip byte for byte.

use std::collections::HashMap;

use num_traits::Zero;

use crate::attach::{SpecPiece, SpecTree};
use crate::construct::realize::OrbitSpec;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::mixed::{DeltaMap, FilteredGraph};
use crate::q::{self, Q};
use crate::ribbon::{a_face_mask, Relative, RibbonGraph};
use crate::tat::Signs;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub name: Option<String>,
    /// 0-based darts per vertex, counterclockwise
    pub rotations: Vec<Vec<usize>>,
    pub lengths: Vec<Q>,
    /// orientation darts per relative cycle
    pub relative: Vec<Vec<usize>>,
    /// explicit (face, sign) entries
    pub signs: Vec<(usize, i8)>,
    /// edges of levels 1..=d
    pub levels: Vec<Vec<usize>>,
    /// (level, member edge, value)
    pub deltas: Vec<(usize, usize, Q)>,
    pub orbit_spec: Option<OrbitSpec>,
    pub spec_tree: Option<SpecTree>,
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::SyntaxError { line, msg: msg.into() }
}

/// `prefix` followed by a positive integer, returned 1-based.
fn id(tok: &str, prefix: &str, line: usize) -> Result<usize> {
    tok.strip_prefix(prefix)
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| syntax(line, format!("expected {prefix}<n>, found '{tok}'")))
}

fn number(tok: &str, line: usize) -> Result<Q> {
    q::parse(tok).ok_or_else(|| syntax(line, format!("expected a rational, found '{tok}'")))
}

fn length(tok: &str, line: usize) -> Result<Q> {
    if let Some((_, d)) = tok.split_once('/') {
        if d.trim().parse::<i128>() == Ok(0) {
            return Err(Error::NonPositiveLength { line });
        }
    }
    let v = number(tok, line)?;
    if v <= Q::zero() {
        return Err(Error::NonPositiveLength { line });
    }
    Ok(v)
}

fn sign(tok: &str, line: usize) -> Result<i8> {
    match tok {
        "+" => Ok(1),
        "-" => Ok(-1),
        "0" => Ok(0),
        _ => Err(syntax(line, format!("expected +, - or 0, found '{tok}'"))),
    }
}

fn sign_str(s: i8) -> &'static str {
    match s {
        1 => "+",
        -1 => "-",
        _ => "0",
    }
}

fn unsigned(tok: &str, line: usize) -> Result<u64> {
    tok.parse().map_err(|_| syntax(line, format!("expected a non-negative integer, found '{tok}'")))
}

/// Parses orbit-spec words (`genus G order N boundary R s branch w handle a b`).
fn orbit_words(words: &[&str], line: usize, spec: &mut OrbitSpec, seen: &mut [bool; 2]) -> Result<()> {
    let mut i = 0;
    let need = |i: usize, k: usize| -> Result<()> {
        if i + k >= words.len() {
            Err(syntax(line, format!("'{}' needs {k} value(s)", words[i])))
        } else {
            Ok(())
        }
    };
    while i < words.len() {
        match words[i] {
            "genus" => {
                need(i, 1)?;
                spec.genus = unsigned(words[i + 1], line)? as usize;
                seen[0] = true;
                i += 2;
            }
            "order" => {
                need(i, 1)?;
                spec.order = unsigned(words[i + 1], line)? as usize;
                seen[1] = true;
                i += 2;
            }
            "boundary" => {
                need(i, 2)?;
                let r = number(words[i + 1], line)?;
                spec.boundaries.push((r, sign(words[i + 2], line)?));
                i += 3;
            }
            "branch" => {
                need(i, 1)?;
                spec.points.push(unsigned(words[i + 1], line)?);
                i += 2;
            }
            "handle" => {
                need(i, 2)?;
                spec.handles.push((unsigned(words[i + 1], line)?, unsigned(words[i + 2], line)?));
                i += 3;
            }
            w => return Err(syntax(line, format!("unknown orbit-spec keyword '{w}'"))),
        }
    }
    Ok(())
}

fn orbit_text(spec: &OrbitSpec, sep: &str) -> String {
    let mut parts = vec![format!("genus {}", spec.genus), format!("order {}", spec.order)];
    for (r, s) in &spec.boundaries {
        parts.push(format!("boundary {} {}", q::fmt(r), sign_str(*s)));
    }
    for w in &spec.points {
        parts.push(format!("branch {w}"));
    }
    for (a, b) in &spec.handles {
        parts.push(format!("handle {a} {b}"));
    }
    parts.join(sep)
}

fn empty_spec() -> OrbitSpec {
    OrbitSpec { genus: 0, order: 0, boundaries: vec![], points: vec![], handles: vec![] }
}

enum Section {
    Main,
    Orbit(usize),
    Tree,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut doc = Document::default();
        let mut header = false;
        let mut vertices: HashMap<usize, (usize, Vec<usize>)> = HashMap::new();
        let mut edges: HashMap<usize, Q> = HashMap::new();
        let mut rels: HashMap<usize, (usize, Vec<(usize, bool)>)> = HashMap::new();
        let mut signs: HashMap<usize, (usize, i8)> = HashMap::new();
        let mut levels: HashMap<usize, (usize, Vec<usize>)> = HashMap::new();
        let mut deltas: Vec<(usize, usize, usize, Q)> = Vec::new();
        let mut section = Section::Main;
        let mut orbit = empty_spec();
        let mut orbit_seen = [false; 2];
        let mut tree: Vec<(usize, SpecPiece, Option<(String, usize)>)> = Vec::new();
        let mut last = 0;
        for (ix, raw) in text.lines().enumerate() {
            let line = ix + 1;
            last = line;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            if !header {
                if s != "tatg 1" {
                    return Err(syntax(line, "expected header 'tatg 1'"));
                }
                header = true;
                continue;
            }
            match section {
                Section::Orbit(start) => {
                    if s == "[end]" {
                        if !orbit_seen[0] || !orbit_seen[1] {
                            return Err(syntax(start, "orbit-spec needs genus and order"));
                        }
                        doc.orbit_spec = Some(std::mem::replace(&mut orbit, empty_spec()));
                        section = Section::Main;
                    } else {
                        let words: Vec<&str> = s.split_whitespace().collect();
                        orbit_words(&words, line, &mut orbit, &mut orbit_seen)?;
                    }
                    continue;
                }
                Section::Tree => {
                    if s == "[end]" {
                        doc.spec_tree = Some(resolve_tree(std::mem::take(&mut tree))?);
                        section = Section::Main;
                        continue;
                    }
                    let rest = s.strip_prefix("piece ").ok_or_else(|| syntax(line, "expected 'piece NAME: ...'"))?;
                    let (name, body) = rest.split_once(':').ok_or_else(|| syntax(line, "missing ':' after piece name"))?;
                    let name = name.trim().to_string();
                    if name.is_empty() || tree.iter().any(|(_, p, _)| p.name == name) {
                        return Err(Error::DuplicateId { line, id: name });
                    }
                    let mut spec = empty_spec();
                    let mut seen = [false; 2];
                    let mut parent_name = None;
                    let mut point = None;
                    let mut screw = Q::zero();
                    let mut words = Vec::new();
                    for w in body.split_whitespace() {
                        if let Some(v) = w.strip_prefix("parent=") {
                            parent_name = Some(v.to_string());
                        } else if let Some(v) = w.strip_prefix("point=") {
                            point = Some(unsigned(v, line)? as usize);
                        } else if let Some(v) = w.strip_prefix("screw=") {
                            screw = number(v, line)?;
                        } else {
                            words.push(w);
                        }
                    }
                    orbit_words(&words, line, &mut spec, &mut seen)?;
                    if !seen[0] || !seen[1] {
                        return Err(syntax(line, "piece needs genus and order"));
                    }
                    let link = match (parent_name, point) {
                        (Some(p), Some(k)) if k >= 1 => Some((p, k - 1)),
                        (None, None) => None,
                        _ => return Err(syntax(line, "parent= and point= (>= 1) go together")),
                    };
                    tree.push((line, SpecPiece { name, spec, parent: None, screw }, link));
                    continue;
                }
                Section::Main => {}
            }
            if s == "[orbit-spec]" {
                section = Section::Orbit(line);
                continue;
            }
            if s == "[spec-tree]" {
                section = Section::Tree;
                continue;
            }
            let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
            let rest = rest.trim();
            match head {
                "name" => doc.name = Some(rest.to_string()),
                "vertex" => {
                    let (v, darts) = rest.split_once(':').ok_or_else(|| syntax(line, "missing ':'"))?;
                    let k = id(v.trim(), "v", line)?;
                    let ds = darts
                        .split_whitespace()
                        .map(|t| t.parse::<usize>().ok().filter(|&d| d >= 1).map(|d| d - 1))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| syntax(line, "darts are positive integers"))?;
                    if ds.is_empty() {
                        return Err(syntax(line, "vertex without darts"));
                    }
                    if vertices.insert(k, (line, ds)).is_some() {
                        return Err(Error::DuplicateId { line, id: format!("v{k}") });
                    }
                }
                "edge" => {
                    let (e, spec) = rest.split_once(':').ok_or_else(|| syntax(line, "missing ':'"))?;
                    let k = id(e.trim(), "e", line)?;
                    let words: Vec<&str> = spec.split_whitespace().collect();
                    if words.len() != 2 || words[0] != "len" {
                        return Err(syntax(line, "expected 'edge eK: len L'"));
                    }
                    let l = length(words[1], line)?;
                    if edges.insert(k, l).is_some() {
                        return Err(Error::DuplicateId { line, id: format!("e{k}") });
                    }
                }
                "relative" => {
                    let (a, darts) = rest.split_once(':').ok_or_else(|| syntax(line, "missing ':'"))?;
                    let k = id(a.trim(), "A", line)?;
                    let mut cyc = Vec::new();
                    for t in darts.split_whitespace() {
                        let (fwd, e) = match t.split_at(1) {
                            ("+", e) => (true, e),
                            ("-", e) => (false, e),
                            _ => return Err(syntax(line, format!("expected +eK or -eK, found '{t}'"))),
                        };
                        cyc.push((id(e, "e", line)?, fwd));
                    }
                    if cyc.is_empty() {
                        return Err(syntax(line, "empty relative cycle"));
                    }
                    if rels.insert(k, (line, cyc)).is_some() {
                        return Err(Error::DuplicateId { line, id: format!("A{k}") });
                    }
                }
                "sign" => {
                    let words: Vec<&str> = rest.split_whitespace().collect();
                    if words.len() != 3 || words[1] != "=" {
                        return Err(syntax(line, "expected 'sign FK = +|-|0'"));
                    }
                    let f = id(words[0], "F", line)?;
                    if signs.insert(f, (line, sign(words[2], line)?)).is_some() {
                        return Err(Error::DuplicateId { line, id: format!("F{f}") });
                    }
                }
                "level" => {
                    let (l, es) = rest.split_once(':').ok_or_else(|| syntax(line, "missing ':'"))?;
                    let k: usize = l.trim().parse().ok().filter(|&k| k >= 1).ok_or_else(|| syntax(line, "level index must be >= 1"))?;
                    let es = es.split_whitespace().map(|t| id(t, "e", line)).collect::<Result<Vec<_>>>()?;
                    if levels.insert(k, (line, es)).is_some() {
                        return Err(Error::DuplicateId { line, id: format!("level {k}") });
                    }
                }
                "delta" => {
                    let words: Vec<&str> = rest.split_whitespace().collect();
                    if words.len() != 4 || words[2] != "=" {
                        return Err(syntax(line, "expected 'delta K @eJ = V'"));
                    }
                    let k: usize = words[0].parse().map_err(|_| syntax(line, "bad level index"))?;
                    let e = id(words[1].strip_prefix('@').unwrap_or(""), "e", line)?;
                    let v = number(words[3], line)?;
                    if v < Q::zero() {
                        return Err(syntax(line, "delta must be non-negative"));
                    }
                    deltas.push((line, k, e, v));
                }
                _ => return Err(syntax(line, format!("unknown keyword '{head}'"))),
            }
        }
        if !header {
            return Err(syntax(last.max(1), "empty document"));
        }
        if !matches!(section, Section::Main) {
            return Err(syntax(last, "section not closed with [end]"));
        }

        let m = edges.len();
        for k in 1..=m {
            if !edges.contains_key(&k) {
                return Err(syntax(last, format!("edges must be numbered e1..e{m}; e{k} is missing")));
            }
        }
        doc.lengths = (1..=m).map(|k| edges[&k]).collect();
        let n = vertices.len();
        let mut placed = vec![false; 2 * m];
        for k in 1..=n {
            let (line, ds) = vertices
                .get(&k)
                .ok_or_else(|| syntax(last, format!("vertices must be numbered v1..v{n}; v{k} is missing")))?;
            for &d in ds {
                if d >= 2 * m {
                    return Err(Error::UnknownId { line: *line, id: format!("dart {}", d + 1) });
                }
                if placed[d] {
                    return Err(Error::DuplicateId { line: *line, id: format!("dart {}", d + 1) });
                }
                placed[d] = true;
            }
            doc.rotations.push(ds.clone());
        }
        if n > 0 {
            if let Some(d) = placed.iter().position(|p| !p) {
                return Err(syntax(last, format!("dart {} is not placed at any vertex", d + 1)));
            }
        } else if m > 0 {
            return Err(syntax(last, "edges without vertices"));
        }
        let edge_ok = |line: usize, e: usize| -> Result<usize> {
            if e > m {
                Err(Error::UnknownId { line, id: format!("e{e}") })
            } else {
                Ok(e - 1)
            }
        };
        let mut ks: Vec<usize> = rels.keys().copied().collect();
        ks.sort_unstable();
        for (i, k) in ks.iter().enumerate() {
            let (line, cyc) = &rels[k];
            if *k != i + 1 {
                return Err(syntax(*line, format!("relative cycles must be numbered A1..; found A{k}")));
            }
            doc.relative.push(
                cyc.iter()
                    .map(|&(e, fwd)| edge_ok(*line, e).map(|e| if fwd { 2 * e } else { 2 * e + 1 }))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let faces = if n > 0 { RibbonGraph::from_rotations(doc.rotations.clone())?.faces().len() } else { 0 };
        let mut fs: Vec<(usize, (usize, i8))> = signs.into_iter().collect();
        fs.sort_unstable();
        for (f, (line, s)) in fs {
            if f > faces {
                return Err(Error::UnknownId { line, id: format!("F{f}") });
            }
            doc.signs.push((f - 1, s));
        }
        let mut ls: Vec<usize> = levels.keys().copied().collect();
        ls.sort_unstable();
        for (i, k) in ls.iter().enumerate() {
            let (line, es) = &levels[k];
            if *k != i + 1 {
                return Err(syntax(*line, format!("levels must be numbered 1..; found {k}")));
            }
            doc.levels.push(es.iter().map(|&e| edge_ok(*line, e)).collect::<Result<Vec<_>>>()?);
        }
        for (line, k, e, v) in deltas {
            if k > doc.levels.len() {
                return Err(Error::UnknownId { line, id: format!("level {k}") });
            }
            doc.deltas.push((k, edge_ok(line, e)?, v));
        }
        Ok(doc)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::from("tatg 1\n");
        if let Some(n) = &self.name {
            out.push_str(&format!("name {n}\n"));
        }
        for (v, r) in self.rotations.iter().enumerate() {
            let ds: Vec<String> = r.iter().map(|d| (d + 1).to_string()).collect();
            out.push_str(&format!("vertex v{}: {}\n", v + 1, ds.join(" ")));
        }
        for (e, l) in self.lengths.iter().enumerate() {
            out.push_str(&format!("edge e{}: len {}\n", e + 1, q::fmt(l)));
        }
        for (k, c) in self.relative.iter().enumerate() {
            let ds: Vec<String> =
                c.iter().map(|&d| format!("{}e{}", if d % 2 == 0 { '+' } else { '-' }, d / 2 + 1)).collect();
            out.push_str(&format!("relative A{}: {}\n", k + 1, ds.join(" ")));
        }
        for (f, s) in &self.signs {
            out.push_str(&format!("sign F{} = {}\n", f + 1, sign_str(*s)));
        }
        for (i, es) in self.levels.iter().enumerate() {
            let ws: Vec<String> = es.iter().map(|e| format!("e{}", e + 1)).collect();
            out.push_str(&format!("level {}: {}\n", i + 1, ws.join(" ")));
        }
        for (k, e, v) in &self.deltas {
            out.push_str(&format!("delta {k} @e{} = {}\n", e + 1, q::fmt(v)));
        }
        if let Some(s) = &self.orbit_spec {
            out.push_str("[orbit-spec]\n");
            out.push_str(&orbit_text(s, "\n"));
            out.push_str("\n[end]\n");
        }
        if let Some(t) = &self.spec_tree {
            out.push_str("[spec-tree]\n");
            for p in &t.pieces {
                let mut line = format!("piece {}:", p.name);
                if let Some((par, pt)) = p.parent {
                    line.push_str(&format!(
                        " parent={} point={} screw={}",
                        t.pieces[par].name,
                        pt + 1,
                        q::fmt(&p.screw)
                    ));
                }
                line.push(' ');
                line.push_str(&orbit_text(&p.spec, " "));
                out.push_str(&line);
                out.push('\n');
            }
            out.push_str("[end]\n");
        }
        out
    }

    pub fn has_graph(&self) -> bool {
        !self.rotations.is_empty()
    }

    pub fn graph(&self) -> Result<RibbonGraph> {
        if !self.has_graph() {
            return Err(syntax(1, "document has no vertices"));
        }
        RibbonGraph::from_rotations(self.rotations.clone())
    }

    pub fn metric(&self) -> Metric {
        Metric(self.lengths.clone())
    }

    pub fn rel(&self) -> Relative {
        Relative::new(self.relative.clone())
    }

    /// `+` on every non-A face and `0` on A-faces, then the explicit entries.
    pub fn signs(&self, g: &RibbonGraph) -> Signs {
        let rel = self.rel();
        let mut s = Signs::all(g, Some(&rel), 1);
        for &(f, v) in &self.signs {
            s.0[f] = v;
        }
        s
    }

    pub fn filtered(&self) -> Result<FilteredGraph> {
        let g = self.graph()?;
        let m = g.edge_count();
        let levels = self
            .levels
            .iter()
            .map(|es| {
                let mut mask = vec![false; m];
                for &e in es {
                    mask[e] = true;
                }
                mask
            })
            .collect();
        Ok(FilteredGraph { graph: g, metric: self.metric(), rel: self.rel(), levels })
    }

    /// The delta map; without delta lines every level-0 component gets 1.
    pub fn delta(&self, fg: &FilteredGraph) -> Result<DeltaMap> {
        if self.deltas.is_empty() {
            let comps = fg.graph.components().len();
            let mut rows = vec![vec![Q::from_integer(1); comps]];
            for i in 1..=fg.depth() {
                rows.push(vec![Q::zero(); fg.level(i)?.components.len()]);
            }
            return Ok(DeltaMap(rows));
        }
        DeltaMap::from_entries(fg, &self.deltas)
    }

    /// Document for a graph; signs are written where they differ from the default.
    pub fn from_graph(name: Option<&str>, g: &RibbonGraph, metric: &Metric, rel: Option<&Relative>, signs: Option<&Signs>) -> Document {
        let mut doc = Document {
            name: name.map(String::from),
            rotations: g.rotations().to_vec(),
            lengths: metric.0.clone(),
            relative: rel.map(|r| r.cycles.clone()).unwrap_or_default(),
            ..Document::default()
        };
        if let Some(s) = signs {
            let a = a_face_mask(g, rel);
            for (f, &v) in s.0.iter().enumerate() {
                let default = if a[f] { 0 } else { 1 };
                if v != default {
                    doc.signs.push((f, v));
                }
            }
        }
        doc
    }

    pub fn from_filtered(name: Option<&str>, fg: &FilteredGraph, delta: &DeltaMap) -> Result<Document> {
        let mut doc = Document::from_graph(name, &fg.graph, &fg.metric, Some(&fg.rel), None);
        doc.levels = fg.levels.iter().map(|m| (0..m.len()).filter(|&e| m[e]).collect()).collect();
        doc.deltas = delta.entries(fg)?;
        Ok(doc)
    }
}

fn resolve_tree(raw: Vec<(usize, SpecPiece, Option<(String, usize)>)>) -> Result<SpecTree> {
    let names: Vec<String> = raw.iter().map(|(_, p, _)| p.name.clone()).collect();
    let mut pieces = Vec::new();
    for (line, mut p, link) in raw {
        if let Some((par, pt)) = link {
            let k = names
                .iter()
                .position(|n| *n == par)
                .ok_or_else(|| Error::UnknownId { line, id: par.clone() })?;
            p.parent = Some((k, pt));
        }
        pieces.push(p);
    }
    Ok(SpecTree { pieces })
}
