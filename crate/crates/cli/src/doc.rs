//! The document format: a restricted JSON profile with one object per
//! document, tagged by `kind`.
//!
//! Sets are arrays of labels in declaration order. Tables are arrays of rows
//! that name elements by label. Wherever a sub-document is expected, either
//! an inline object or the name of an entry in the top-level `defs` object
//! (or of an imported document) may be given.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use fugal_core::cat::{CatMonadCell, NatTrans, SetFunctor};
use fugal_core::finset::{check_monoid_laws, FinFn, FinMonoid, FinSet};
use fugal_core::fugal::{Elem, Monoid, MonoidMealyMachine};
use fugal_core::guitart::{CatFunctor, FinCat};
use fugal_core::intertwiner::{Intertwiner, IntertwinerTwoCell};
use fugal_core::kleisli::PowersetMealy;
use fugal_core::machines::{MealyMachine, MooreMachine};
use fugal_core::rel::Rel;
use fugal_core::Verdict;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::corpus;

/// Parse failures, one variant per error class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unresolved reference `{name}` at {path}")]
    Unresolved { name: String, path: String },
    #[error("malformed document at {path}: {message}")]
    Shape { path: String, message: String },
    #[error("invariant violation at {path}: {message}")]
    Invariant { path: String, message: String },
    #[error("cannot read `{source_name}`: {message}")]
    Io { source_name: String, message: String },
}

type Res<T> = std::result::Result<T, DocError>;

fn shape<T>(path: &str, message: impl Into<String>) -> Res<T> {
    Err(DocError::Shape {
        path: path.into(),
        message: message.into(),
    })
}

fn invariant(path: &str, err: impl fmt::Display) -> DocError {
    DocError::Invariant {
        path: path.into(),
        message: err.to_string(),
    }
}

/// A replayable failed check: the check name, its inputs and options, and
/// the witness the check reported.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub check: String,
    pub subjects: Vec<Document>,
    pub options: Map<String, Value>,
    pub witness: String,
}

#[derive(Debug, Clone)]
pub enum Document {
    Mealy { machine: MealyMachine, start: usize },
    Moore { machine: MooreMachine, start: usize },
    Monoid { name: String, monoid: Monoid },
    MonoidMachine(MonoidMealyMachine),
    NondetMealy(PowersetMealy),
    Category(FinCat),
    Functor(CatFunctor),
    Relation(Rel),
    SetFunctor(SetFunctor),
    NatTrans(NatTrans),
    Monad(CatMonadCell),
    Intertwiner(Intertwiner),
    TwoCell(IntertwinerTwoCell),
    Counterexample(Counterexample),
}

/// Two documents are equal when they serialise identically.
impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.to_value() == other.to_value()
    }
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Mealy { .. } => "mealy",
            Document::Moore { .. } => "moore",
            Document::Monoid { .. } => "monoid",
            Document::MonoidMachine(_) => "monoid-machine",
            Document::NondetMealy(_) => "nondet-mealy",
            Document::Category(_) => "category",
            Document::Functor(_) => "functor",
            Document::Relation(_) => "relation",
            Document::SetFunctor(_) => "set-functor",
            Document::NatTrans(_) => "nat-trans",
            Document::Monad(_) => "monad",
            Document::Intertwiner(_) => "intertwiner",
            Document::TwoCell(_) => "two-cell",
            Document::Counterexample(_) => "counterexample",
        }
    }

    pub fn mealy(machine: MealyMachine) -> Self {
        Document::Mealy { machine, start: 0 }
    }

    /// Pretty JSON with table rows kept on one line.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, &self.to_value(), 0);
        out
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_object() && is_flat(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (k, (key, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if k + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(xs) if !is_flat(v) => {
            out.push_str("[\n");
            for (k, x) in xs.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, x, depth + 1);
                out.push_str(if k + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        other => out.push_str(&inline(other)),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Sources

/// Where imports are looked up.
pub trait Source {
    /// The text of `reference` and the source its own imports resolve in.
    fn open(&self, reference: &str) -> Res<(String, Box<dyn Source>)>;
}

/// Files relative to a directory.
pub struct DirSource(pub PathBuf);

impl Source for DirSource {
    fn open(&self, reference: &str) -> Res<(String, Box<dyn Source>)> {
        let path = self.0.join(reference);
        if !path.exists() && corpus::get(reference).is_some() {
            return CorpusSource.open(reference);
        }
        let text = std::fs::read_to_string(&path).map_err(|e| DocError::Io {
            source_name: path.display().to_string(),
            message: e.to_string(),
        })?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((text, Box::new(DirSource(dir))))
    }
}

/// The documents shipped with the binary.
pub struct CorpusSource;

impl Source for CorpusSource {
    fn open(&self, reference: &str) -> Res<(String, Box<dyn Source>)> {
        match corpus::get(reference) {
            Some(text) => Ok((text.to_string(), Box::new(CorpusSource))),
            None => Err(DocError::Io {
                source_name: reference.into(),
                message: "no such corpus document".into(),
            }),
        }
    }
}

/// Loads a command-line argument: an existing file, or else a corpus entry.
pub fn load(arg: &str) -> Res<Document> {
    let path = Path::new(arg);
    if path.exists() {
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let text = std::fs::read_to_string(path).map_err(|e| DocError::Io {
            source_name: arg.into(),
            message: e.to_string(),
        })?;
        parse_with(&text, &DirSource(dir))
    } else if let Some(text) = corpus::get(arg) {
        parse_with(text, &CorpusSource)
    } else {
        Err(DocError::Io {
            source_name: arg.into(),
            message: "no such file or corpus document".into(),
        })
    }
}

/// Parses a document whose imports (if any) are corpus entries.
pub fn parse_document(text: &str) -> Res<Document> {
    parse_with(text, &CorpusSource)
}

pub fn parse_with(text: &str, source: &dyn Source) -> Res<Document> {
    parse_nested(text, source, 0)
}

const MAX_IMPORT_DEPTH: usize = 16;

fn parse_nested(text: &str, source: &dyn Source, depth: usize) -> Res<Document> {
    let value = parse_json(text)?;
    let (doc, _) = parse_top(&value, source, depth)?;
    Ok(doc)
}

fn parse_json(text: &str) -> Res<Value> {
    serde_json::from_str(text).map_err(|e| DocError::Syntax {
        line: e.line().max(1),
        column: e.column().max(1),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg.to_string(),
    }
}

/// The main document plus every name it makes available to importers.
fn parse_top(value: &Value, source: &dyn Source, depth: usize) -> Res<(Document, HashMap<String, Document>)> {
    let path = "$";
    let Value::Object(top) = value else {
        return shape(path, "a document must be a JSON object");
    };
    let mut ctx = Ctx {
        defs: Map::new(),
        parsed: HashMap::new(),
        active: Vec::new(),
    };
    if let Some(imports) = top.get("imports") {
        if depth >= MAX_IMPORT_DEPTH {
            return shape("$.imports", "imports nest too deeply (is there a cycle?)");
        }
        for (k, item) in array(imports, "$.imports")?.iter().enumerate() {
            let p = format!("$.imports[{k}]");
            let reference = string(item, &p)?;
            let (text, inner) = source.open(reference)?;
            let (doc, names) = parse_top(&parse_json(&text)?, inner.as_ref(), depth + 1)?;
            ctx.parsed.extend(names);
            ctx.parsed.insert(stem(reference), doc);
        }
    }
    if let Some(defs) = top.get("defs") {
        let Value::Object(defs) = defs else {
            return shape("$.defs", "`defs` must map names to documents");
        };
        ctx.defs = defs.clone();
    }
    let mut body = top.clone();
    body.remove("imports");
    body.remove("defs");
    let doc = ctx.document(&Value::Object(body), path)?;
    let names: Vec<String> = ctx.defs.keys().cloned().collect();
    for name in names {
        ctx.resolve(&name, path)?;
    }
    Ok((doc, ctx.parsed))
}

fn stem(reference: &str) -> String {
    let file = reference.rsplit('/').next().unwrap_or(reference);
    file.strip_suffix(".json").unwrap_or(file).to_string()
}

struct Ctx {
    defs: Map<String, Value>,
    parsed: HashMap<String, Document>,
    active: Vec<String>,
}

// ---------------------------------------------------------------------------
// JSON helpers

fn object<'v>(v: &'v Value, path: &str, kind: &str, allowed: &[&str]) -> Res<&'v Map<String, Value>> {
    let Value::Object(m) = v else {
        return shape(path, "expected an object");
    };
    for key in m.keys() {
        if key != "kind" && key != "name" && !allowed.contains(&key.as_str()) {
            return shape(path, format!("unknown key `{key}` for kind `{kind}`"));
        }
    }
    Ok(m)
}

fn field<'v>(m: &'v Map<String, Value>, key: &str, path: &str) -> Res<&'v Value> {
    m.get(key).ok_or_else(|| DocError::Shape {
        path: path.into(),
        message: format!("missing key `{key}`"),
    })
}

fn string<'v>(v: &'v Value, path: &str) -> Res<&'v str> {
    v.as_str().ok_or_else(|| DocError::Shape {
        path: path.into(),
        message: "expected a string".into(),
    })
}

fn array<'v>(v: &'v Value, path: &str) -> Res<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| DocError::Shape {
        path: path.into(),
        message: "expected an array".into(),
    })
}

fn name_of(m: &Map<String, Value>, default: &str) -> Res<String> {
    match m.get("name") {
        None => Ok(default.into()),
        Some(v) => Ok(string(v, "$.name")?.into()),
    }
}

fn set(v: &Value, path: &str, name: &str) -> Res<FinSet> {
    let labels = array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, x)| string(x, &format!("{path}[{k}]")).map(str::to_string))
        .collect::<Res<Vec<_>>>()?;
    FinSet::new(name, labels).map_err(|e| invariant(path, e))
}

fn member(set: &FinSet, v: &Value, path: &str) -> Res<usize> {
    let label = string(v, path)?;
    set.index_of(label).ok_or_else(|| DocError::Shape {
        path: path.into(),
        message: format!("`{label}` is not an element of `{}`", set.name()),
    })
}

fn rows<'v>(v: &'v Value, path: &str, arity: usize) -> Res<Vec<(String, &'v [Value])>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let p = format!("{path}[{k}]");
            let cells = array(row, &p)?;
            if cells.len() != arity {
                return shape(&p, format!("expected a row of {arity} entries"));
            }
            Ok((p, cells.as_slice()))
        })
        .collect()
}

/// Fills a table indexed by `key` from rows; every key exactly once.
fn total<T: Clone>(n: usize, path: &str, what: &dyn Fn(usize) -> String, entries: Vec<(String, usize, T)>) -> Res<Vec<T>> {
    let mut table: Vec<Option<T>> = vec![None; n];
    for (p, k, value) in entries {
        if table[k].is_some() {
            return shape(&p, format!("duplicate row for {}", what(k)));
        }
        table[k] = Some(value);
    }
    table
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| DocError::Shape {
            path: path.into(),
            message: format!("no row for {}", what(k)),
        }))
        .collect()
}

fn labelled_pairs(v: &Value, path: &str, dom: &FinSet, cod: &FinSet) -> Res<Vec<usize>> {
    let mut entries = Vec::new();
    for (p, cells) in rows(v, path, 2)? {
        let x = member(dom, &cells[0], &format!("{p}[0]"))?;
        let y = member(cod, &cells[1], &format!("{p}[1]"))?;
        entries.push((p, x, y));
    }
    total(dom.len(), path, &|k| format!("`{}`", dom.label(k)), entries)
}

fn function(v: &Value, path: &str, dom: &FinSet, cod: &FinSet) -> Res<FinFn> {
    FinFn::new(dom.clone(), cod.clone(), labelled_pairs(v, path, dom, cod)?).map_err(|e| invariant(path, e))
}

fn expect<'d, T>(doc: &'d Document, path: &str, want: &str, pick: impl FnOnce(&'d Document) -> Option<T>) -> Res<T> {
    let found = doc.kind();
    pick(doc).ok_or_else(|| DocError::Shape {
        path: path.into(),
        message: format!("expected a `{want}` document, found `{found}`"),
    })
}

// ---------------------------------------------------------------------------
// Parsing

impl Ctx {
    fn resolve(&mut self, name: &str, path: &str) -> Res<Document> {
        if let Some(doc) = self.parsed.get(name) {
            return Ok(doc.clone());
        }
        let Some(raw) = self.defs.get(name).cloned() else {
            return Err(DocError::Unresolved {
                name: name.into(),
                path: path.into(),
            });
        };
        if self.active.iter().any(|n| n == name) {
            return shape(path, format!("definition `{name}` refers to itself"));
        }
        self.active.push(name.into());
        let doc = self.sub(&raw, &format!("$.defs.{name}"));
        self.active.pop();
        let doc = doc?;
        self.parsed.insert(name.into(), doc.clone());
        Ok(doc)
    }

    /// An inline document or a reference to a named one.
    fn sub(&mut self, v: &Value, path: &str) -> Res<Document> {
        match v {
            Value::String(name) => self.resolve(name, path),
            _ => self.document(v, path),
        }
    }

    fn document(&mut self, v: &Value, path: &str) -> Res<Document> {
        let Value::Object(m) = v else {
            return shape(path, "expected a document object");
        };
        let kind = string(field(m, "kind", path)?, &format!("{path}.kind"))?;
        match kind {
            "mealy" => self.mealy(v, path),
            "moore" => self.moore(v, path),
            "monoid" => self.monoid(v, path),
            "monoid-machine" => self.monoid_machine(v, path),
            "nondet-mealy" => self.nondet(v, path),
            "category" => self.category(v, path),
            "functor" => self.functor(v, path),
            "relation" => self.relation(v, path),
            "set-functor" => self.set_functor(v, path),
            "nat-trans" => self.nat_trans(v, path),
            "monad" => self.monad(v, path),
            "intertwiner" => self.intertwiner(v, path),
            "two-cell" => self.two_cell(v, path),
            "counterexample" => self.counterexample(v, path),
            other => shape(&format!("{path}.kind"), format!("unknown kind `{other}`")),
        }
    }

    fn mealy(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "mealy", &["states", "input", "output", "rows", "start"])?;
        let name = name_of(m, "m")?;
        let states = set(field(m, "states", path)?, &format!("{path}.states"), "E")?;
        let input = set(field(m, "input", path)?, &format!("{path}.input"), "I")?;
        let output = set(field(m, "output", path)?, &format!("{path}.output"), "O")?;
        let rp = format!("{path}.rows");
        let mut entries = Vec::new();
        for (p, c) in rows(field(m, "rows", path)?, &rp, 4)? {
            let e = member(&states, &c[0], &format!("{p}[0]"))?;
            let a = member(&input, &c[1], &format!("{p}[1]"))?;
            let next = member(&states, &c[2], &format!("{p}[2]"))?;
            let out = member(&output, &c[3], &format!("{p}[3]"))?;
            entries.push((p, e * input.len() + a, (next, out)));
        }
        let ni = input.len();
        let table = total(states.len() * ni, &rp, &|k| pair_text(&states, &input, k / ni, k % ni), entries)?;
        let start = start_state(m, &states, path)?;
        let machine = MealyMachine::new(
            name,
            states,
            input,
            output,
            table.iter().map(|t| t.0).collect(),
            table.iter().map(|t| t.1).collect(),
        )
        .map_err(|e| invariant(path, e))?;
        Ok(Document::Mealy { machine, start })
    }

    fn moore(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "moore", &["states", "input", "output", "rows", "emit", "start"])?;
        let name = name_of(m, "m")?;
        let states = set(field(m, "states", path)?, &format!("{path}.states"), "E")?;
        let input = set(field(m, "input", path)?, &format!("{path}.input"), "I")?;
        let output = set(field(m, "output", path)?, &format!("{path}.output"), "O")?;
        let rp = format!("{path}.rows");
        let mut entries = Vec::new();
        for (p, c) in rows(field(m, "rows", path)?, &rp, 3)? {
            let e = member(&states, &c[0], &format!("{p}[0]"))?;
            let a = member(&input, &c[1], &format!("{p}[1]"))?;
            let next = member(&states, &c[2], &format!("{p}[2]"))?;
            entries.push((p, e * input.len() + a, next));
        }
        let ni = input.len();
        let next = total(states.len() * ni, &rp, &|k| pair_text(&states, &input, k / ni, k % ni), entries)?;
        let emit = labelled_pairs(field(m, "emit", path)?, &format!("{path}.emit"), &states, &output)?;
        let start = start_state(m, &states, path)?;
        let machine = MooreMachine::new(name, states, input, output, next, emit).map_err(|e| invariant(path, e))?;
        Ok(Document::Moore { machine, start })
    }

    fn monoid(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "monoid", &["elements", "unit", "table", "free"])?;
        let name = name_of(m, "M")?;
        if let Some(gens) = m.get("free") {
            if m.contains_key("elements") || m.contains_key("table") || m.contains_key("unit") {
                return shape(path, "a free monoid lists only its generators");
            }
            let gens = set(gens, &format!("{path}.free"), &name)?;
            return Ok(Document::Monoid {
                name,
                monoid: Monoid::free(gens),
            });
        }
        let carrier = set(field(m, "elements", path)?, &format!("{path}.elements"), &name)?;
        let unit = member(&carrier, field(m, "unit", path)?, &format!("{path}.unit"))?;
        let tp = format!("{path}.table");
        let table_rows = array(field(m, "table", path)?, &tp)?;
        if table_rows.len() != carrier.len() {
            return shape(&tp, format!("expected {} rows", carrier.len()));
        }
        let mut table = Vec::with_capacity(carrier.len() * carrier.len());
        for (i, row) in table_rows.iter().enumerate() {
            let p = format!("{tp}[{i}]");
            let cells = array(row, &p)?;
            if cells.len() != carrier.len() {
                return shape(&p, format!("expected {} entries", carrier.len()));
            }
            for (j, cell) in cells.iter().enumerate() {
                table.push(member(&carrier, cell, &format!("{p}[{j}]"))?);
            }
        }
        let monoid = FinMonoid::new(carrier, unit, table).map_err(|e| invariant(path, e))?;
        if let Verdict::Fails(violation) = check_monoid_laws(&monoid) {
            return Err(invariant(path, violation));
        }
        Ok(Document::Monoid {
            name,
            monoid: Monoid::Finite(monoid),
        })
    }

    fn monoid_ref(&mut self, m: &Map<String, Value>, key: &str, path: &str) -> Res<Monoid> {
        let p = format!("{path}.{key}");
        let doc = self.sub(field(m, key, path)?, &p)?;
        expect(&doc, &p, "monoid", |d| match d {
            Document::Monoid { monoid, .. } => Some(monoid.clone()),
            _ => None,
        })
    }

    fn monoid_machine(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "monoid-machine", &["states", "input", "output", "rows"])?;
        let name = name_of(m, "m")?;
        let states = set(field(m, "states", path)?, &format!("{path}.states"), "E")?;
        let input = self.monoid_ref(m, "input", path)?;
        let output = self.monoid_ref(m, "output", path)?;
        let letters = input.letters().clone();
        let rp = format!("{path}.rows");
        let mut entries = Vec::new();
        for (p, c) in rows(field(m, "rows", path)?, &rp, 4)? {
            let e = member(&states, &c[0], &format!("{p}[0]"))?;
            let x = member(&letters, &c[1], &format!("{p}[1]"))?;
            let next = member(&states, &c[2], &format!("{p}[2]"))?;
            let out = element(&output, &c[3], &format!("{p}[3]"))?;
            entries.push((p, e * letters.len() + x, (next, out)));
        }
        let k = letters.len();
        let table = total(states.len() * k, &rp, &|i| pair_text(&states, &letters, i / k, i % k), entries)?;
        let act = table.iter().map(|t| t.0).collect();
        let out = table.into_iter().map(|t| t.1).collect();
        let machine = match input {
            Monoid::Finite(input) => MonoidMealyMachine::from_tables(name, states, input, output, act, out),
            Monoid::Free(handle) => MonoidMealyMachine::from_generators(name, states, handle, output, act, out),
        }
        .map_err(|e| invariant(path, e))?;
        Ok(Document::MonoidMachine(machine))
    }

    fn nondet(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "nondet-mealy", &["states", "input", "output", "rows"])?;
        let name = name_of(m, "n")?;
        let states = set(field(m, "states", path)?, &format!("{path}.states"), "E")?;
        let input = set(field(m, "input", path)?, &format!("{path}.input"), "I")?;
        let output = set(field(m, "output", path)?, &format!("{path}.output"), "O")?;
        let rp = format!("{path}.rows");
        let subset = |s: &FinSet, v: &Value, p: &str| -> Res<Vec<usize>> {
            array(v, p)?
                .iter()
                .enumerate()
                .map(|(k, x)| member(s, x, &format!("{p}[{k}]")))
                .collect()
        };
        let mut entries = Vec::new();
        for (p, c) in rows(field(m, "rows", path)?, &rp, 4)? {
            let e = member(&states, &c[0], &format!("{p}[0]"))?;
            let a = member(&input, &c[1], &format!("{p}[1]"))?;
            let next = subset(&states, &c[2], &format!("{p}[2]"))?;
            let out = subset(&output, &c[3], &format!("{p}[3]"))?;
            entries.push((p, e * input.len() + a, (next, out)));
        }
        let ni = input.len();
        let table = total(states.len() * ni, &rp, &|k| pair_text(&states, &input, k / ni, k % ni), entries)?;
        let (d, s) = table.into_iter().unzip();
        let n = PowersetMealy::new(name, states, input, output, d, s).map_err(|e| invariant(path, e))?;
        Ok(Document::NondetMealy(n))
    }

    fn category(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "category", &["objects", "morphisms", "identities", "compose", "monoid", "chaotic", "discrete"])?;
        let name = name_of(m, "C")?;
        let shortcuts = ["monoid", "chaotic", "discrete"].iter().filter(|k| m.contains_key(**k)).count();
        if shortcuts > 1 || shortcuts == 1 && m.keys().any(|k| ["objects", "morphisms", "identities", "compose"].contains(&k.as_str())) {
            return shape(path, "give either the full tables or exactly one of `monoid`, `chaotic`, `discrete`");
        }
        if m.contains_key("monoid") {
            let Monoid::Finite(monoid) = self.monoid_ref(m, "monoid", path)? else {
                return shape(&format!("{path}.monoid"), "a category needs a finite monoid");
            };
            return Ok(Document::Category(FinCat::from_monoid(&monoid)));
        }
        if let Some(objs) = m.get("chaotic") {
            return Ok(Document::Category(FinCat::chaotic(&set(objs, &format!("{path}.chaotic"), "Ob")?)));
        }
        if let Some(objs) = m.get("discrete") {
            return Ok(Document::Category(FinCat::discrete(&set(objs, &format!("{path}.discrete"), "Ob")?)));
        }
        let objects = set(field(m, "objects", path)?, &format!("{path}.objects"), "Ob")?;
        let mp = format!("{path}.morphisms");
        let mor_rows = rows(field(m, "morphisms", path)?, &mp, 3)?;
        let labels = mor_rows
            .iter()
            .map(|(p, c)| string(&c[0], &format!("{p}[0]")).map(str::to_string))
            .collect::<Res<Vec<_>>>()?;
        let morphisms = FinSet::new("Mor", labels).map_err(|e| invariant(&mp, e))?;
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for (p, c) in &mor_rows {
            src.push(member(&objects, &c[1], &format!("{p}[1]"))?);
            tgt.push(member(&objects, &c[2], &format!("{p}[2]"))?);
        }
        let id = labelled_pairs(field(m, "identities", path)?, &format!("{path}.identities"), &objects, &morphisms)?;
        let nm = morphisms.len();
        let mut comp = vec![None; nm * nm];
        for (p, c) in rows(field(m, "compose", path)?, &format!("{path}.compose"), 3)? {
            let g = member(&morphisms, &c[0], &format!("{p}[0]"))?;
            let f = member(&morphisms, &c[1], &format!("{p}[1]"))?;
            let h = member(&morphisms, &c[2], &format!("{p}[2]"))?;
            if comp[g * nm + f].replace(h).is_some() {
                return shape(&p, "duplicate composite");
            }
        }
        let cat = FinCat::new(name, objects, morphisms, src, tgt, id, comp).map_err(|e| invariant(path, e))?;
        Ok(Document::Category(cat))
    }

    fn category_ref(&mut self, m: &Map<String, Value>, key: &str, path: &str) -> Res<FinCat> {
        let p = format!("{path}.{key}");
        let doc = self.sub(field(m, key, path)?, &p)?;
        expect(&doc, &p, "category", |d| match d {
            Document::Category(c) => Some(c.clone()),
            _ => None,
        })
    }

    fn functor(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "functor", &["dom", "cod", "objects", "morphisms"])?;
        let name = name_of(m, "F")?;
        let dom = self.category_ref(m, "dom", path)?;
        let cod = self.category_ref(m, "cod", path)?;
        let on_obj = labelled_pairs(field(m, "objects", path)?, &format!("{path}.objects"), dom.objects(), cod.objects())?;
        let on_mor = labelled_pairs(field(m, "morphisms", path)?, &format!("{path}.morphisms"), dom.morphisms(), cod.morphisms())?;
        let f = CatFunctor::checked(name, dom, cod, on_obj, on_mor).map_err(|e| invariant(path, e))?;
        Ok(Document::Functor(f))
    }

    fn functor_ref(&mut self, m: &Map<String, Value>, key: &str, path: &str) -> Res<CatFunctor> {
        let p = format!("{path}.{key}");
        let doc = self.sub(field(m, key, path)?, &p)?;
        expect(&doc, &p, "functor", |d| match d {
            Document::Functor(f) => Some(f.clone()),
            _ => None,
        })
    }

    fn relation(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "relation", &["src", "dst", "pairs"])?;
        let src = set(field(m, "src", path)?, &format!("{path}.src"), "A")?;
        let dst = set(field(m, "dst", path)?, &format!("{path}.dst"), "B")?;
        let mut pairs = Vec::new();
        for (p, c) in rows(field(m, "pairs", path)?, &format!("{path}.pairs"), 2)? {
            pairs.push((member(&src, &c[0], &format!("{p}[0]"))?, member(&dst, &c[1], &format!("{p}[1]"))?));
        }
        let r = Rel::new(src, dst, pairs).map_err(|e| invariant(path, e))?;
        Ok(Document::Relation(r))
    }

    fn set_functor(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "set-functor", &["category", "sets", "maps"])?;
        let name = name_of(m, "F")?;
        let c = self.category_ref(m, "category", path)?;
        let sp = format!("{path}.sets");
        let mut entries = Vec::new();
        for (p, cells) in rows(field(m, "sets", path)?, &sp, 2)? {
            let x = member(c.objects(), &cells[0], &format!("{p}[0]"))?;
            let s = set(&cells[1], &format!("{p}[1]"), &format!("{name}({})", c.objects().label(x)))?;
            entries.push((p, x, s));
        }
        let sets = total(c.objects().len(), &sp, &|k| format!("`{}`", c.objects().label(k)), entries)?;
        let mp = format!("{path}.maps");
        let mut maps: Vec<Option<FinFn>> = vec![None; c.morphisms().len()];
        for (p, cells) in rows(field(m, "maps", path)?, &mp, 2)? {
            let f = member(c.morphisms(), &cells[0], &format!("{p}[0]"))?;
            let table = function(&cells[1], &format!("{p}[1]"), &sets[c.src(f)], &sets[c.tgt(f)])?;
            if maps[f].replace(table).is_some() {
                return shape(&p, "duplicate map");
            }
        }
        // Identity morphisms may be left out.
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(f, t)| match t {
                Some(t) => Ok(t),
                None if c.id(c.src(f)) == f => Ok(FinFn::identity(&sets[c.src(f)])),
                None => shape(&mp, format!("no map for `{}`", c.morphisms().label(f))),
            })
            .collect::<Res<Vec<_>>>()?;
        let f = SetFunctor::new(name, c, sets, maps).map_err(|e| invariant(path, e))?;
        Ok(Document::SetFunctor(f))
    }

    fn set_functor_ref(&mut self, m: &Map<String, Value>, key: &str, path: &str) -> Res<SetFunctor> {
        let p = format!("{path}.{key}");
        let doc = self.sub(field(m, key, path)?, &p)?;
        expect(&doc, &p, "set-functor", |d| match d {
            Document::SetFunctor(f) => Some(f.clone()),
            _ => None,
        })
    }

    fn nat_trans(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "nat-trans", &["src", "dst", "components"])?;
        let src = self.set_functor_ref(m, "src", path)?;
        let dst = self.set_functor_ref(m, "dst", path)?;
        if src.dom() != dst.dom() {
            return shape(path, "functors on different categories");
        }
        let c = src.dom().clone();
        let cp = format!("{path}.components");
        let mut entries = Vec::new();
        for (p, cells) in rows(field(m, "components", path)?, &cp, 2)? {
            let x = member(c.objects(), &cells[0], &format!("{p}[0]"))?;
            entries.push((p.clone(), x, function(&cells[1], &format!("{p}[1]"), src.set(x), dst.set(x))?));
        }
        let components = total(c.objects().len(), &cp, &|k| format!("`{}`", c.objects().label(k)), entries)?;
        let t = NatTrans::new(src, dst, components).map_err(|e| invariant(path, e))?;
        Ok(Document::NatTrans(t))
    }

    fn monad(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "monad", &["functor", "eta", "mu"])?;
        let t = self.functor_ref(m, "functor", path)?;
        let c = t.dom().clone();
        let eta = labelled_pairs(field(m, "eta", path)?, &format!("{path}.eta"), c.objects(), c.morphisms())?;
        let mu = labelled_pairs(field(m, "mu", path)?, &format!("{path}.mu"), c.objects(), c.morphisms())?;
        let monad = CatMonadCell::new(t, eta, mu).map_err(|e| invariant(path, e))?;
        Ok(Document::Monad(monad))
    }

    fn mealy_ref(&mut self, m: &Map<String, Value>, key: &str, path: &str) -> Res<MealyMachine> {
        let p = format!("{path}.{key}");
        let doc = self.sub(field(m, key, path)?, &p)?;
        expect(&doc, &p, "mealy", |d| match d {
            Document::Mealy { machine, .. } => Some(machine.clone()),
            _ => None,
        })
    }

    fn intertwiner(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "intertwiner", &["src", "dst", "u", "v", "iota", "eps", "omega"])?;
        let src = self.mealy_ref(m, "src", path)?;
        let dst = self.mealy_ref(m, "dst", path)?;
        let u = set(field(m, "u", path)?, &format!("{path}.u"), "U")?;
        let vv = set(field(m, "v", path)?, &format!("{path}.v"), "V")?;
        let w = u.len();
        let structure = |key: &str, dom: &FinSet, left: &FinSet, right: &FinSet| -> Res<Vec<(usize, usize)>> {
            let kp = format!("{path}.{key}");
            let mut entries = Vec::new();
            for (p, c) in rows(field(m, key, path)?, &kp, 4)? {
                let x = member(dom, &c[0], &format!("{p}[0]"))?;
                let y = member(&u, &c[1], &format!("{p}[1]"))?;
                let l = member(left, &c[2], &format!("{p}[2]"))?;
                let r = member(right, &c[3], &format!("{p}[3]"))?;
                entries.push((p, x * w + y, (l, r)));
            }
            total(dom.len() * w, &kp, &|k| pair_text(dom, &u, k / w, k % w), entries)
        };
        let iota = structure("iota", dst.input(), &u, src.input())?;
        let eps = structure("eps", dst.states(), &vv, src.states())?;
        let omega = structure("omega", dst.output(), &vv, src.output())?;
        let it = Intertwiner::from_fns(
            src,
            dst,
            u,
            vv,
            |x, y| iota[x * w + y],
            |x, y| eps[x * w + y],
            |x, y| omega[x * w + y],
        )
        .map_err(|e| invariant(path, e))?;
        Ok(Document::Intertwiner(it))
    }

    fn two_cell(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "two-cell", &["src", "dst", "f", "g"])?;
        let mut side = |key: &str| -> Res<Intertwiner> {
            let p = format!("{path}.{key}");
            let doc = self.sub(field(m, key, path)?, &p)?;
            expect(&doc, &p, "intertwiner", |d| match d {
                Document::Intertwiner(it) => Some(it.clone()),
                _ => None,
            })
        };
        let (a, b) = (side("src")?, side("dst")?);
        let f = function(field(m, "f", path)?, &format!("{path}.f"), a.u(), b.u())?;
        let g = function(field(m, "g", path)?, &format!("{path}.g"), a.v(), b.v())?;
        let cell = IntertwinerTwoCell::new(a, b, f, g).map_err(|e| invariant(path, e))?;
        Ok(Document::TwoCell(cell))
    }

    fn counterexample(&mut self, v: &Value, path: &str) -> Res<Document> {
        let m = object(v, path, "counterexample", &["check", "subjects", "options", "witness"])?;
        let check = string(field(m, "check", path)?, &format!("{path}.check"))?.to_string();
        let sp = format!("{path}.subjects");
        let subjects = array(field(m, "subjects", path)?, &sp)?
            .iter()
            .enumerate()
            .map(|(k, s)| self.sub(s, &format!("{sp}[{k}]")))
            .collect::<Res<Vec<_>>>()?;
        let options = match m.get("options") {
            None => Map::new(),
            Some(Value::Object(o)) => o.clone(),
            Some(_) => return shape(&format!("{path}.options"), "expected an object"),
        };
        let witness = string(field(m, "witness", path)?, &format!("{path}.witness"))?.to_string();
        Ok(Document::Counterexample(Counterexample {
            check,
            subjects,
            options,
            witness,
        }))
    }
}

fn pair_text(x: &FinSet, y: &FinSet, i: usize, j: usize) -> String {
    format!("(`{}`, `{}`)", x.label(i), y.label(j))
}

fn start_state(m: &Map<String, Value>, states: &FinSet, path: &str) -> Res<usize> {
    match m.get("start") {
        None if states.is_empty() => shape(path, "a machine needs at least one state"),
        None => Ok(0),
        Some(s) => member(states, s, &format!("{path}.start")),
    }
}

/// A finite-monoid element is its label; a free-monoid element is an array
/// of generator labels.
fn element(monoid: &Monoid, v: &Value, path: &str) -> Res<Elem> {
    match monoid {
        Monoid::Finite(m) => Ok(Elem::Fin(member(m.carrier(), v, path)?)),
        Monoid::Free(h) => {
            let letters = array(v, path)?
                .iter()
                .enumerate()
                .map(|(k, x)| member(h.generators(), x, &format!("{path}[{k}]")))
                .collect::<Res<Vec<_>>>()?;
            Ok(Elem::Word(letters))
        }
    }
}

// ---------------------------------------------------------------------------
// Serialisation

fn labels(s: &FinSet) -> Value {
    Value::Array(s.elements().iter().map(|l| Value::String(l.clone())).collect())
}

fn fn_rows(f: &FinFn) -> Value {
    Value::Array(
        f.dom()
            .indices()
            .map(|x| json!([f.dom().label(x), f.cod().label(f.apply(x))]))
            .collect(),
    )
}

pub fn element_value(monoid: &Monoid, x: &Elem) -> Value {
    match (monoid, x) {
        (Monoid::Finite(m), Elem::Fin(i)) => json!(m.carrier().label(*i)),
        (Monoid::Free(h), Elem::Word(w)) => Value::Array(w.iter().map(|&a| json!(h.generators().label(a))).collect()),
        _ => Value::Null,
    }
}

fn monoid_value(name: &str, monoid: &Monoid) -> Value {
    match monoid {
        Monoid::Free(h) => json!({"kind": "monoid", "name": name, "free": labels(h.generators())}),
        Monoid::Finite(m) => {
            let c = m.carrier();
            let table: Vec<Value> = c
                .indices()
                .map(|x| Value::Array(c.indices().map(|y| json!(c.label(m.mul(x, y)))).collect()))
                .collect();
            json!({"kind": "monoid", "name": name, "elements": labels(c), "unit": c.label(m.unit()), "table": table})
        }
    }
}

fn category_value(c: &FinCat) -> Value {
    let (ob, mor) = (c.objects(), c.morphisms());
    let morphisms: Vec<Value> = mor
        .indices()
        .map(|f| json!([mor.label(f), ob.label(c.src(f)), ob.label(c.tgt(f))]))
        .collect();
    let identities: Vec<Value> = ob.indices().map(|x| json!([ob.label(x), mor.label(c.id(x))])).collect();
    let compose: Vec<Value> = c
        .composable_pairs()
        .map(|(g, f)| json!([mor.label(g), mor.label(f), mor.label(c.comp(g, f).expect("composable"))]))
        .collect();
    json!({"kind": "category", "name": c.name(), "objects": labels(ob), "morphisms": morphisms, "identities": identities, "compose": compose})
}

fn functor_value(f: &CatFunctor) -> Value {
    let (d, c) = (f.dom(), f.cod());
    let objects: Vec<Value> = d
        .objects()
        .indices()
        .map(|x| json!([d.objects().label(x), c.objects().label(f.obj(x))]))
        .collect();
    let morphisms: Vec<Value> = d
        .morphisms()
        .indices()
        .map(|m| json!([d.morphisms().label(m), c.morphisms().label(f.mor(m))]))
        .collect();
    json!({"kind": "functor", "name": f.name(), "dom": category_value(d), "cod": category_value(c), "objects": objects, "morphisms": morphisms})
}

fn set_functor_value(f: &SetFunctor) -> Value {
    let c = f.dom();
    let sets: Vec<Value> = c.objects().indices().map(|x| json!([c.objects().label(x), labels(f.set(x))])).collect();
    let maps: Vec<Value> = c
        .morphisms()
        .indices()
        .map(|m| json!([c.morphisms().label(m), fn_rows(f.map(m))]))
        .collect();
    json!({"kind": "set-functor", "name": f.name(), "category": category_value(c), "sets": sets, "maps": maps})
}

fn mealy_value(m: &MealyMachine, start: usize) -> Value {
    let (e, i, o) = (m.states(), m.input(), m.output());
    let rows: Vec<Value> = e
        .indices()
        .flat_map(|x| i.indices().map(move |a| (x, a)))
        .map(|(x, a)| json!([e.label(x), i.label(a), e.label(m.d(x, a)), o.label(m.s(x, a))]))
        .collect();
    json!({"kind": "mealy", "name": m.name(), "states": labels(e), "input": labels(i), "output": labels(o), "rows": rows, "start": e.label(start)})
}

fn intertwiner_value(it: &Intertwiner) -> Value {
    let (m, m2) = (it.src(), it.dst());
    let (u, v) = (it.u(), it.v());
    let table = |dom: &FinSet, left: &FinSet, right: &FinSet, f: &dyn Fn(usize, usize) -> (usize, usize)| -> Value {
        Value::Array(
            dom.indices()
                .flat_map(|x| u.indices().map(move |y| (x, y)))
                .map(|(x, y)| {
                    let (l, r) = f(x, y);
                    json!([dom.label(x), u.label(y), left.label(l), right.label(r)])
                })
                .collect(),
        )
    };
    json!({
        "kind": "intertwiner",
        "src": mealy_value(m, 0),
        "dst": mealy_value(m2, 0),
        "u": labels(u),
        "v": labels(v),
        "iota": table(m2.input(), u, m.input(), &|x, y| it.iota(x, y)),
        "eps": table(m2.states(), v, m.states(), &|x, y| it.eps(x, y)),
        "omega": table(m2.output(), v, m.output(), &|x, y| it.omega(x, y)),
    })
}

impl Document {
    pub fn to_value(&self) -> Value {
        match self {
            Document::Mealy { machine, start } => mealy_value(machine, *start),
            Document::Moore { machine: m, start } => {
                let (e, i, o) = (m.states(), m.input(), m.output());
                let rows: Vec<Value> = e
                    .indices()
                    .flat_map(|x| i.indices().map(move |a| (x, a)))
                    .map(|(x, a)| json!([e.label(x), i.label(a), e.label(m.d(x, a))]))
                    .collect();
                let emit: Vec<Value> = e.indices().map(|x| json!([e.label(x), o.label(m.s(x))])).collect();
                json!({"kind": "moore", "name": m.name(), "states": labels(e), "input": labels(i), "output": labels(o), "rows": rows, "emit": emit, "start": e.label(*start)})
            }
            Document::Monoid { name, monoid } => monoid_value(name, monoid),
            Document::MonoidMachine(m) => {
                let (e, input, output) = (m.states(), m.input(), m.output());
                let letters = input.letters();
                let rows: Vec<Value> = e
                    .indices()
                    .flat_map(|x| letters.indices().map(move |a| (x, a)))
                    .map(|(x, a)| {
                        let (next, out) = m.eval(x, &input.generator(a));
                        json!([e.label(x), letters.label(a), e.label(next), element_value(output, &out)])
                    })
                    .collect();
                json!({
                    "kind": "monoid-machine",
                    "name": m.name(),
                    "states": labels(e),
                    "input": monoid_value(letters.name(), input),
                    "output": monoid_value(output.letters().name(), output),
                    "rows": rows,
                })
            }
            Document::NondetMealy(n) => {
                let (e, i, o) = (n.states(), n.input(), n.output());
                let sub = |s: &FinSet, xs: &[usize]| Value::Array(xs.iter().map(|&x| json!(s.label(x))).collect());
                let rows: Vec<Value> = e
                    .indices()
                    .flat_map(|x| i.indices().map(move |a| (x, a)))
                    .map(|(x, a)| json!([e.label(x), i.label(a), sub(e, n.d(x, a)), sub(o, n.s(x, a))]))
                    .collect();
                json!({"kind": "nondet-mealy", "name": n.name(), "states": labels(e), "input": labels(i), "output": labels(o), "rows": rows})
            }
            Document::Category(c) => category_value(c),
            Document::Functor(f) => functor_value(f),
            Document::Relation(r) => {
                let pairs: Vec<Value> = r.pairs().map(|(a, b)| json!([r.src().label(a), r.dst().label(b)])).collect();
                json!({"kind": "relation", "src": labels(r.src()), "dst": labels(r.dst()), "pairs": pairs})
            }
            Document::SetFunctor(f) => set_functor_value(f),
            Document::NatTrans(t) => {
                let c = t.src().dom();
                let components: Vec<Value> = c
                    .objects()
                    .indices()
                    .map(|x| json!([c.objects().label(x), fn_rows(t.component(x))]))
                    .collect();
                json!({"kind": "nat-trans", "src": set_functor_value(t.src()), "dst": set_functor_value(t.dst()), "components": components})
            }
            Document::Monad(m) => {
                let t = m.functor();
                let c = t.dom();
                let table = |f: &dyn Fn(usize) -> usize| -> Value {
                    Value::Array(
                        c.objects()
                            .indices()
                            .map(|x| json!([c.objects().label(x), c.morphisms().label(f(x))]))
                            .collect(),
                    )
                };
                json!({"kind": "monad", "functor": functor_value(t), "eta": table(&|x| m.eta(x)), "mu": table(&|x| m.mu(x))})
            }
            Document::Intertwiner(it) => intertwiner_value(it),
            Document::TwoCell(tc) => json!({
                "kind": "two-cell",
                "src": intertwiner_value(&tc.src),
                "dst": intertwiner_value(&tc.dst),
                "f": fn_rows(&tc.f),
                "g": fn_rows(&tc.g),
            }),
            Document::Counterexample(ce) => json!({
                "kind": "counterexample",
                "check": ce.check,
                "subjects": ce.subjects.iter().map(Document::to_value).collect::<Vec<_>>(),
                "options": ce.options,
                "witness": ce.witness,
            }),
        }
    }
}

/// Every corpus entry, parsed.
pub fn corpus_documents() -> BTreeMap<&'static str, Res<Document>> {
    corpus::ENTRIES
        .iter()
        .map(|(name, text)| (*name, parse_with(text, &CorpusSource)))
        .collect()
}
