//! The `.orbit` text format.
//!
//! ```text
//! # comments run to the end of the line
//! name zigzag
//! dim 2
//! vertices 2
//! lattice 1 0
//! lattice 0 1
//! position 0 1/2 1/4
//! position 1 1 3/4
//! edge 0 1 0 0
//! edge 0 1 1 0
//! ```
//!
//! `dim` and `vertices` come before any `lattice`, `position` or `edge`
//! record. Vertices are numbered from 0. Coordinates are integers or
//! fractions `p/q`; decimals are accepted only when explicitly enabled.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Edge, Gain, GainGraph};
use crate::linalg::{QMatrix, Rat};
use crate::torus::{OrbitFramework, Torus};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitGraphDocument {
    pub name: Option<String>,
    pub comment: Option<String>,
    pub dim: usize,
    pub vertex_count: usize,
    pub lattice: Option<Vec<Vec<Rat>>>,
    pub positions: Option<Vec<Vec<Rat>>>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept decimal coordinates such as `0.25`, converted exactly.
    pub allow_decimals: bool,
}

impl OrbitGraphDocument {
    pub fn from_graph(graph: &GainGraph) -> Self {
        Self {
            name: None,
            comment: None,
            dim: graph.dim(),
            vertex_count: graph.vertex_count(),
            lattice: None,
            positions: None,
            edges: graph.edges().to_vec(),
        }
    }

    pub fn from_framework(f: &OrbitFramework) -> Self {
        let mut doc = Self::from_graph(f.graph());
        if !f.torus().is_unit() {
            doc.lattice = Some(f.torus().lattice().to_rows());
        }
        doc.positions = Some(f.positions().to_vec());
        doc
    }

    pub fn graph(&self) -> Result<GainGraph> {
        GainGraph::new(self.dim, self.vertex_count, self.edges.clone())
    }

    /// The declared lattice, or the unit lattice.
    pub fn torus(&self) -> Result<Torus> {
        match &self.lattice {
            Some(rows) => Torus::new(QMatrix::from_rows(rows.clone())),
            None => Ok(Torus::unit(self.dim)),
        }
    }

    /// The framework, when positions are present.
    pub fn framework(&self, allow_degenerate: bool) -> Result<Option<OrbitFramework>> {
        let Some(p) = &self.positions else {
            return Ok(None);
        };
        let (g, t) = (self.graph()?, self.torus()?);
        let f = if allow_degenerate {
            OrbitFramework::new_degenerate(g, t, p.clone())?
        } else {
            OrbitFramework::new(g, t, p.clone())?
        };
        Ok(Some(f))
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (text[..byte].chars().count() + 1, tok))
        .collect()
}

fn parse_rational(tok: &str, allow_decimals: bool) -> std::result::Result<Rat, String> {
    if let Some((n, d)) = tok.split_once('/') {
        let n = BigInt::from_str(n).map_err(|_| format!("bad numerator in `{tok}`"))?;
        let d = BigInt::from_str(d).map_err(|_| format!("bad denominator in `{tok}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{tok}`"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(tok) {
        return Ok(Rat::from_integer(n));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if !allow_decimals {
            return Err(format!("decimal `{tok}` needs float mode; write it as a fraction"));
        }
        let digits_ok = !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit());
        let (neg, int) = match int.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int.strip_prefix('+').unwrap_or(int)),
        };
        let int_ok = int.chars().all(|c| c.is_ascii_digit());
        if digits_ok && int_ok {
            let whole = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| format!("bad number `{tok}`"))?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            let value = Rat::new(whole, den);
            return Ok(if neg { -value } else { value });
        }
    }
    Err(format!("expected a number, found `{tok}`"))
}

fn parse_usize(line: usize, (col, tok): (usize, &str), what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_error(line, col, format!("expected {what}, found `{tok}`")))
}

pub fn parse(text: &str) -> Result<OrbitGraphDocument> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<OrbitGraphDocument> {
    let mut name = None;
    let mut comment = None;
    let mut dim: Option<usize> = None;
    let mut vertex_count: Option<usize> = None;
    let mut lattice: Vec<(usize, Vec<Rat>)> = Vec::new();
    let mut positions: Vec<Option<Vec<Rat>>> = Vec::new();
    let mut any_position: Option<usize> = None;
    let mut edges = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(kw_col, keyword)) = toks.first() else {
            continue;
        };
        let args = &toks[1..];
        let rest = || content[content.find(keyword).unwrap_or(0) + keyword.len()..].trim().to_string();
        let header = |field: Option<usize>, what: &str| {
            field.ok_or_else(|| parse_error(line, kw_col, format!("`{what}` must be declared before `{keyword}`")))
        };
        let numbers = |toks: &[(usize, &str)]| -> Result<Vec<Rat>> {
            toks.iter()
                .map(|&(c, t)| parse_rational(t, options.allow_decimals).map_err(|m| parse_error(line, c, m)))
                .collect()
        };
        match keyword {
            "name" => name = Some(rest()),
            "comment" => comment = Some(rest()),
            "dim" | "vertices" => {
                let [arg] = args else {
                    return Err(parse_error(line, kw_col, format!("`{keyword}` takes one value")));
                };
                let slot = if keyword == "dim" { &mut dim } else { &mut vertex_count };
                if slot.is_some() {
                    return Err(parse_error(line, kw_col, format!("`{keyword}` declared twice")));
                }
                let value = parse_usize(line, *arg, "a non-negative integer")?;
                if keyword == "dim" && value == 0 {
                    return Err(parse_error(line, arg.0, "dimension must be at least 1"));
                }
                *slot = Some(value);
                if keyword == "vertices" {
                    positions = vec![None; value];
                }
            }
            "lattice" => {
                let d = header(dim, "dim")?;
                if args.len() != d {
                    return Err(parse_error(line, kw_col, format!("lattice row needs {d} entries, found {}", args.len())));
                }
                if lattice.len() == d {
                    return Err(parse_error(line, kw_col, format!("more than {d} lattice rows")));
                }
                lattice.push((line, numbers(args)?));
            }
            "position" => {
                let d = header(dim, "dim")?;
                let n = header(vertex_count, "vertices")?;
                let Some((&first, coords)) = args.split_first() else {
                    return Err(parse_error(line, kw_col, "`position` needs a vertex and coordinates"));
                };
                let v = parse_usize(line, first, "a vertex id")?;
                if v >= n {
                    return Err(parse_error(line, first.0, format!("vertex {v} out of range (graph has {n} vertices)")));
                }
                if coords.len() != d {
                    return Err(parse_error(line, kw_col, format!("dimension mismatch: expected {d} coordinates, found {}", coords.len())));
                }
                if positions[v].is_some() {
                    return Err(parse_error(line, first.0, format!("position of vertex {v} given twice")));
                }
                positions[v] = Some(numbers(coords)?);
                any_position.get_or_insert(line);
            }
            "edge" => {
                let d = header(dim, "dim")?;
                let n = header(vertex_count, "vertices")?;
                if args.len() < 2 {
                    return Err(parse_error(line, kw_col, "`edge` needs tail, head and gain"));
                }
                let mut ends = [0; 2];
                for (slot, &tok) in ends.iter_mut().zip(args) {
                    *slot = parse_usize(line, tok, "a vertex id")?;
                    if *slot >= n {
                        return Err(parse_error(line, tok.0, format!("vertex {} out of range (graph has {n} vertices)", *slot)));
                    }
                }
                let gain_toks = &args[2..];
                if gain_toks.len() != d {
                    return Err(parse_error(line, kw_col, format!("dimension mismatch: expected gain of length {d}, found {}", gain_toks.len())));
                }
                let gain = gain_toks
                    .iter()
                    .map(|&(c, t)| BigInt::from_str(t).map_err(|_| parse_error(line, c, format!("gain entries are integers, found `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                edges.push(Edge::new(ends[0], ends[1], Gain::new(gain)));
            }
            other => return Err(parse_error(line, kw_col, format!("unknown keyword `{other}`"))),
        }
    }

    let end = text.lines().count().max(1);
    let dim = dim.ok_or_else(|| parse_error(end, 1, "missing `dim`"))?;
    let vertex_count = vertex_count.ok_or_else(|| parse_error(end, 1, "missing `vertices`"))?;
    let lattice = match lattice.len() {
        0 => None,
        k if k == dim => {
            let rows: Vec<Vec<Rat>> = lattice.iter().map(|(_, r)| r.clone()).collect();
            if QMatrix::from_rows(rows.clone()).inverse().is_none() {
                return Err(parse_error(lattice[0].0, 1, "lattice matrix is singular"));
            }
            Some(rows)
        }
        k => return Err(parse_error(lattice[k - 1].0, 1, format!("expected {dim} lattice rows, found {k}"))),
    };
    let positions = match any_position {
        None => None,
        Some(first) => {
            if let Some(v) = positions.iter().position(Option::is_none) {
                return Err(parse_error(first, 1, format!("missing position for vertex {v}")));
            }
            Some(positions.into_iter().map(Option::unwrap).collect())
        }
    };
    Ok(OrbitGraphDocument {
        name,
        comment,
        dim,
        vertex_count,
        lattice,
        positions,
        edges,
    })
}

fn format_rational(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn join<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> String) -> String {
    items.into_iter().map(f).collect::<Vec<_>>().join(" ")
}

/// Canonical text: metadata, header, lattice, positions, edges.
pub fn write(doc: &OrbitGraphDocument) -> String {
    let mut out = String::new();
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "name {}", single_line(name));
    }
    if let Some(comment) = &doc.comment {
        let _ = writeln!(out, "comment {}", single_line(comment));
    }
    let _ = writeln!(out, "dim {}", doc.dim);
    let _ = writeln!(out, "vertices {}", doc.vertex_count);
    for row in doc.lattice.iter().flatten() {
        let _ = writeln!(out, "lattice {}", join(row, format_rational));
    }
    for (v, p) in doc.positions.iter().flatten().enumerate() {
        let _ = writeln!(out, "position {v} {}", join(p, format_rational));
    }
    for e in &doc.edges {
        let _ = writeln!(out, "edge {} {} {}", e.tail, e.head, join(e.gain.coords(), ToString::to_string));
    }
    out
}

fn single_line(s: &str) -> String {
    s.replace(['\n', '\r', '#'], " ").trim().to_string()
}
