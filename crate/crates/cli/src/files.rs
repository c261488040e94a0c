//! JSON file formats and the diagnostics raised while loading them.
//!
//! Every loader checks the fields it needs before handing data to the
//! library, so a bad file is reported with its path, a line number and the
//! offending field rather than a library error with no location.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};
use wlpa_core::algebra::Generator;
use wlpa_core::branching::ActionTable;
use wlpa_core::graph::{Dir, Letter};
use wlpa_core::{Field, RepresentationGraph, WeightedGraph};

/// An input problem, reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub file: String,
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn arg(field: &str, message: impl Into<String>) -> Self {
        InputError {
            file: "<arguments>".into(),
            line: None,
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "file": self.file, "line": self.line, "field": self.field, "message": self.message } })
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}: {}", self.file, l, self.field, self.message),
            None => write!(f, "{}: {}: {}", self.file, self.field, self.message),
        }
    }
}

/// A parsed JSON document plus what is needed to point into it.
pub struct Doc {
    pub path: PathBuf,
    text: String,
    pub value: Value,
}

impl Doc {
    pub fn read(path: &Path) -> Result<Doc, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError {
            file: path.display().to_string(),
            line: None,
            field: "<file>".into(),
            message: e.to_string(),
        })?;
        let value = serde_json::from_str(&text).map_err(|e| InputError {
            file: path.display().to_string(),
            line: Some(e.line()),
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        Ok(Doc {
            path: path.to_path_buf(),
            text,
            value,
        })
    }

    fn inline(path: &Path, text: &str, value: Value) -> Doc {
        Doc {
            path: path.to_path_buf(),
            text: text.to_string(),
            value,
        }
    }

    /// Line of the first quoted `needle` after the first occurrence of the
    /// quoted `key`; falls back to the key's own line.
    fn line_of(&self, key: &str, needle: Option<&str>) -> Option<usize> {
        let key_at = self.text.find(&format!("\"{key}\""))?;
        let at = needle
            .and_then(|n| self.text[key_at..].find(&format!("\"{n}\"")).map(|k| key_at + k))
            .unwrap_or(key_at);
        Some(self.text[..at].matches('\n').count() + 1)
    }

    pub fn err(&self, key: &str, needle: Option<&str>, field: String, message: impl Into<String>) -> InputError {
        InputError {
            file: self.path.display().to_string(),
            line: self.line_of(key, needle),
            field,
            message: message.into(),
        }
    }

    fn array(&self, key: &str) -> Result<&Vec<Value>, InputError> {
        self.value
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| self.err(key, None, key.into(), "missing or not an array"))
    }

    fn opt_array(&self, key: &str) -> Result<Vec<Value>, InputError> {
        match self.value.get(key) {
            None => Ok(vec![]),
            Some(Value::Array(a)) => Ok(a.clone()),
            Some(_) => Err(self.err(key, None, key.into(), "not an array")),
        }
    }

    fn str_field<'v>(&self, key: &str, item: &'v Value, index: usize, name: &str) -> Result<&'v str, InputError> {
        item.get(name).and_then(Value::as_str).ok_or_else(|| {
            self.err(
                key,
                None,
                format!("{key}[{index}].{name}"),
                "missing or not a string",
            )
        })
    }
}

/// `{vertices: [id…], edges: [{id, src, dst, weight?}]}`.
pub fn graph_from_doc(doc: &Doc) -> Result<WeightedGraph, InputError> {
    let mut vertices = Vec::new();
    for (k, v) in doc.array("vertices")?.iter().enumerate() {
        let id = v
            .as_str()
            .ok_or_else(|| doc.err("vertices", None, format!("vertices[{k}]"), "not a string"))?;
        if vertices.iter().any(|w: &String| w == id) {
            return Err(doc.err("vertices", Some(id), format!("vertices[{k}]"), format!("duplicate vertex `{id}`")));
        }
        vertices.push(id.to_string());
    }
    let mut edges = Vec::new();
    for (k, e) in doc.array("edges")?.iter().enumerate() {
        let id = doc.str_field("edges", e, k, "id")?;
        let mut ends = Vec::new();
        for end in ["src", "dst"] {
            let v = doc.str_field("edges", e, k, end)?;
            if !vertices.iter().any(|w| w == v) {
                return Err(doc.err(
                    "edges",
                    Some(v),
                    format!("edges[{k}].{end}"),
                    format!("edge `{id}` references unknown vertex `{v}`"),
                ));
            }
            ends.push(v.to_string());
        }
        let weight = match e.get("weight") {
            None => 1,
            Some(w) => match w.as_u64() {
                Some(w) if (1..=u32::MAX as u64).contains(&w) => w as u32,
                _ => {
                    return Err(doc.err(
                        "edges",
                        Some(id),
                        format!("edges[{k}].weight"),
                        "weight must be a positive integer",
                    ))
                }
            },
        };
        edges.push((id.to_string(), ends[0].clone(), ends[1].clone(), weight));
    }
    WeightedGraph::new(vertices, edges).map_err(|e| doc.err("edges", None, "edges".into(), e.to_string()))
}

pub fn load_graph(path: &Path) -> Result<WeightedGraph, InputError> {
    graph_from_doc(&Doc::read(path)?)
}

/// The `base` of a representation graph or table: an inline graph document or
/// a path relative to the referring file.
fn base_of(doc: &Doc) -> Result<Arc<WeightedGraph>, InputError> {
    match doc.value.get("base") {
        Some(Value::String(rel)) => {
            let p = doc.path.parent().unwrap_or(Path::new(".")).join(rel);
            load_graph(&p).map(Arc::new)
        }
        Some(v @ Value::Object(_)) => {
            let inner = Doc::inline(&doc.path, &doc.text, v.clone());
            graph_from_doc(&inner).map(Arc::new)
        }
        _ => Err(doc.err("base", None, "base".into(), "missing: give a graph object or a path")),
    }
}

pub fn is_rep_doc(doc: &Doc) -> bool {
    doc.value.get("rvertices").is_some()
}

/// `{base, rvertices: [{id, image}], redges: [{id, src, dst, edge, tag}], frontier?: [id…]}`.
/// The lifting axioms are not checked here.
pub fn rep_from_doc(doc: &Doc) -> Result<RepresentationGraph, InputError> {
    let base = base_of(doc)?;
    let mut vertices = Vec::new();
    for (k, v) in doc.array("rvertices")?.iter().enumerate() {
        let id = doc.str_field("rvertices", v, k, "id")?;
        let image = doc.str_field("rvertices", v, k, "image")?;
        if base.vertex(image).is_none() {
            return Err(doc.err(
                "rvertices",
                Some(image),
                format!("rvertices[{k}].image"),
                format!("`{image}` is not a vertex of the base graph"),
            ));
        }
        if vertices.iter().any(|(w, _): &(String, String)| w == id) {
            return Err(doc.err("rvertices", Some(id), format!("rvertices[{k}].id"), format!("duplicate vertex `{id}`")));
        }
        vertices.push((id.to_string(), image.to_string()));
    }
    let mut edges = Vec::new();
    for (k, e) in doc.array("redges")?.iter().enumerate() {
        let id = doc.str_field("redges", e, k, "id")?;
        let mut ends = Vec::new();
        for end in ["src", "dst"] {
            let v = doc.str_field("redges", e, k, end)?;
            if !vertices.iter().any(|(w, _)| w == v) {
                return Err(doc.err(
                    "redges",
                    Some(v),
                    format!("redges[{k}].{end}"),
                    format!("edge `{id}` references unknown vertex `{v}`"),
                ));
            }
            ends.push(v.to_string());
        }
        let edge = doc.str_field("redges", e, k, "edge")?;
        let Some(ek) = base.edge_by_id(edge) else {
            return Err(doc.err(
                "redges",
                Some(edge),
                format!("redges[{k}].edge"),
                format!("`{edge}` is not an edge of the base graph"),
            ));
        };
        let weight = base.edge(ek).weight;
        let tag = e.get("tag").and_then(Value::as_u64).unwrap_or(0);
        if tag == 0 || tag > weight as u64 {
            return Err(doc.err(
                "redges",
                Some(id),
                format!("redges[{k}].tag"),
                format!("tag must lie in 1..={weight}"),
            ));
        }
        edges.push((id.to_string(), ends[0].clone(), ends[1].clone(), edge.to_string(), tag as u32));
    }
    let mut frontier = Vec::new();
    for (k, v) in doc.opt_array("frontier")?.iter().enumerate() {
        let id = v
            .as_str()
            .filter(|id| vertices.iter().any(|(w, _)| w == id))
            .ok_or_else(|| doc.err("frontier", None, format!("frontier[{k}]"), "not a vertex id"))?;
        frontier.push(id.to_string());
    }
    RepresentationGraph::new(base, vertices, edges, frontier)
        .map_err(|e| doc.err("redges", None, "redges".into(), e.to_string()))
}

pub fn load_rep(path: &Path) -> Result<RepresentationGraph, InputError> {
    rep_from_doc(&Doc::read(path)?)
}

/// Loads a representation graph and insists that it satisfies the axioms.
pub fn load_valid_rep(path: &Path) -> Result<RepresentationGraph, InputError> {
    let doc = Doc::read(path)?;
    let f = rep_from_doc(&doc)?;
    f.validate().map_err(|v| {
        let k = f.vertex(&v.vertex).unwrap_or(0);
        doc.err("rvertices", Some(&v.vertex), format!("rvertices[{k}]"), v.to_string())
    })?;
    Ok(f)
}

pub fn graph_to_json(g: &WeightedGraph) -> Value {
    json!({
        "vertices": g.vertex_ids(),
        "edges": g.edges().iter().map(|e| json!({
            "id": e.id,
            "src": g.vertex_id(e.src),
            "dst": g.vertex_id(e.dst),
            "weight": e.weight,
        })).collect::<Vec<_>>(),
    })
}

pub fn rep_to_json(f: &RepresentationGraph) -> Value {
    let g = f.base();
    json!({
        "base": graph_to_json(g),
        "rvertices": (0..f.vertex_count()).map(|u| json!({
            "id": f.vertex_id(u),
            "image": g.vertex_id(f.image(u)),
        })).collect::<Vec<_>>(),
        "redges": f.edges().iter().map(|e| json!({
            "id": e.id,
            "src": f.vertex_id(e.src),
            "dst": f.vertex_id(e.dst),
            "edge": g.edge(e.image.edge).id,
            "tag": e.image.tag,
        })).collect::<Vec<_>>(),
        "frontier": f.frontier().iter().map(|&u| f.vertex_id(u)).collect::<Vec<_>>(),
    })
}

/// `v`, `e[i]` or `e[i]*` over `g`.
pub fn parse_generator(g: &WeightedGraph, s: &str) -> Option<Generator> {
    let s = s.trim();
    if let Some(v) = g.vertex(s) {
        return Some(Generator::Vertex(v));
    }
    let (body, dir) = match s.strip_suffix('*') {
        Some(b) => (b, Dir::Ghost),
        None => (s, Dir::Real),
    };
    let (name, rest) = body.split_once('[')?;
    let tag: u32 = rest.strip_suffix(']')?.parse().ok()?;
    let edge = g.edge_by_id(name)?;
    (1..=g.edge(edge).weight)
        .contains(&tag)
        .then_some(Generator::Letter(Letter { edge, tag, dir }))
}

/// `{base, basis: [id…], frontier?: [id…], entries: [{basis, generator, value}]}`
/// where `value` is a basis id or `null` for zero.
pub fn load_table(path: &Path, field: Field) -> Result<ActionTable, InputError> {
    let doc = Doc::read(path)?;
    let base = base_of(&doc)?;
    let mut basis: Vec<String> = Vec::new();
    for (k, b) in doc.array("basis")?.iter().enumerate() {
        let id = b
            .as_str()
            .ok_or_else(|| doc.err("basis", None, format!("basis[{k}]"), "not a string"))?;
        if basis.iter().any(|w| w == id) {
            return Err(doc.err("basis", Some(id), format!("basis[{k}]"), format!("duplicate basis element `{id}`")));
        }
        basis.push(id.to_string());
    }
    let index = |id: &str| basis.iter().position(|b| b == id);
    let mut entries = BTreeMap::new();
    for (k, e) in doc.array("entries")?.iter().enumerate() {
        let b = doc.str_field("entries", e, k, "basis")?;
        let bi = index(b).ok_or_else(|| {
            doc.err("entries", Some(b), format!("entries[{k}].basis"), format!("unknown basis element `{b}`"))
        })?;
        let gtext = doc.str_field("entries", e, k, "generator")?;
        let gen = parse_generator(&base, gtext).ok_or_else(|| {
            doc.err(
                "entries",
                Some(gtext),
                format!("entries[{k}].generator"),
                format!("`{gtext}` is not a vertex or tagged letter"),
            )
        })?;
        let value = match e.get("value") {
            Some(Value::Null) => None,
            Some(Value::String(t)) => Some(index(t).ok_or_else(|| {
                doc.err("entries", Some(t), format!("entries[{k}].value"), format!("unknown basis element `{t}`"))
            })?),
            _ => {
                return Err(doc.err(
                    "entries",
                    Some(b),
                    format!("entries[{k}].value"),
                    "expected a basis id or null",
                ))
            }
        };
        if entries.insert((bi, gen), value).is_some() {
            return Err(doc.err("entries", Some(gtext), format!("entries[{k}]"), "duplicate entry"));
        }
    }
    let mut frontier = std::collections::BTreeSet::new();
    for (k, v) in doc.opt_array("frontier")?.iter().enumerate() {
        let i = v
            .as_str()
            .and_then(index)
            .ok_or_else(|| doc.err("frontier", None, format!("frontier[{k}]"), "not a basis id"))?;
        frontier.insert(i);
    }
    Ok(ActionTable {
        base,
        field,
        basis,
        entries,
        frontier,
    })
}
