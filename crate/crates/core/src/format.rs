//! Text formats for graphs and codes, and the JSON report schema.
//!
//! Graph file:
//!
//! ```text
//! graph <p> <n>
//! <a> <b> <w>        one line per edge, 1-based vertices
//! ```
//!
//! Code file:
//!
//! ```text
//! code <p> <n> <d>
//! edge <a> <b> <w>
//! clique
//! 0,0,0,0,0
//! 1,1,1,1,1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Negative weights are
//! read as `p - |w|`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::code::GraphCode;
use crate::error::{Error, Result};
use crate::oracle::{KlMode, KlReport};
use crate::zp::{Modulus, WeightedGraph, ZpVec};

/// A parsed code file: graph, declared distance and clique vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub graph: WeightedGraph,
    pub d: usize,
    pub clique: Vec<ZpVec>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| Error::parse(line, format!("invalid {what} '{tok}'")))
}

fn header(line: usize, text: &str, keyword: &str, count: usize) -> Result<Vec<u64>> {
    let mut toks = text.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(Error::parse(line, format!("expected '{keyword}' header")));
    }
    let vals: Vec<u64> = (0..count).map(|_| parse_num(line, toks.next(), "header field")).collect::<Result<_>>()?;
    if toks.next().is_some() {
        return Err(Error::parse(line, "trailing tokens in header"));
    }
    Ok(vals)
}

struct EdgeReader {
    p: Modulus,
    n: usize,
    seen: BTreeSet<(usize, usize)>,
    edges: Vec<(usize, usize, i64)>,
}

impl EdgeReader {
    fn push(&mut self, line: usize, toks: &mut std::str::SplitWhitespace<'_>) -> Result<()> {
        let a: usize = parse_num(line, toks.next(), "vertex")?;
        let b: usize = parse_num(line, toks.next(), "vertex")?;
        let w: i64 = parse_num(line, toks.next(), "weight")?;
        if toks.next().is_some() {
            return Err(Error::parse(line, "trailing tokens after edge"));
        }
        for v in [a, b] {
            if v == 0 || v > self.n {
                return Err(Error::parse(line, format!("vertex {v} outside 1..{}", self.n)));
            }
        }
        if a == b {
            return Err(Error::parse(line, format!("self loop at vertex {a}")));
        }
        let p = self.p.get() as i64;
        if w.abs() >= p {
            return Err(Error::parse(line, format!("weight {w} outside (-{p}, {p})")));
        }
        if !self.seen.insert((a.min(b), a.max(b))) {
            return Err(Error::parse(line, format!("duplicate edge {a} {b}")));
        }
        self.edges.push((a - 1, b - 1, w));
        Ok(())
    }

    fn finish(self) -> Result<WeightedGraph> {
        WeightedGraph::from_edges(self.p, self.n, &self.edges)
    }
}

fn modulus_at(line: usize, p: u64) -> Result<Modulus> {
    u32::try_from(p)
        .ok()
        .and_then(|p| Modulus::new(p).ok())
        .ok_or_else(|| Error::parse(line, format!("invalid modulus {p}")))
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let h = header(line, first, "graph", 2)?;
    let mut reader =
        EdgeReader { p: modulus_at(line, h[0])?, n: h[1] as usize, seen: BTreeSet::new(), edges: Vec::new() };
    for (line, text) in lines {
        reader.push(line, &mut text.split_whitespace())?;
    }
    reader.finish()
}

/// Edges in ascending order with weights in `[0, p)`.
pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = format!("graph {} {}\n", g.modulus().get(), g.n());
    for (a, b, w) in g.edges() {
        let _ = writeln!(out, "{} {} {}", a + 1, b + 1, w);
    }
    out
}

fn parse_vector(line: usize, p: Modulus, n: usize, text: &str) -> Result<ZpVec> {
    let entries: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::parse(line, format!("invalid entry '{}'", t.trim()))))
        .collect::<Result<_>>()?;
    if entries.len() != n {
        return Err(Error::parse(line, format!("vector has {} entries, expected {n}", entries.len())));
    }
    Ok(ZpVec::from_signed(p, &entries))
}

pub fn parse_code(text: &str) -> Result<CodeFile> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or_else(|| Error::parse(1, "empty code file"))?;
    let h = header(line, first, "code", 3)?;
    let p = modulus_at(line, h[0])?;
    let n = h[1] as usize;
    let d = h[2] as usize;
    let mut reader = EdgeReader { p, n, seen: BTreeSet::new(), edges: Vec::new() };
    let mut clique = Vec::new();
    let mut in_clique = false;
    let mut last = line;
    for (line, text) in lines {
        last = line;
        if in_clique {
            clique.push(parse_vector(line, p, n, text)?);
            continue;
        }
        let mut toks = text.split_whitespace();
        match toks.next() {
            Some("edge") => reader.push(line, &mut toks)?,
            Some("clique") if toks.next().is_none() => in_clique = true,
            _ => return Err(Error::parse(line, "expected 'edge' or 'clique'")),
        }
    }
    if !in_clique {
        return Err(Error::parse(last, "missing 'clique' block"));
    }
    if !clique.iter().any(ZpVec::is_zero) {
        return Err(Error::parse(last, "clique must contain the zero vector"));
    }
    Ok(CodeFile { graph: reader.finish()?, d, clique })
}

pub fn write_code(graph: &WeightedGraph, d: usize, clique: &[ZpVec]) -> String {
    let mut out = format!("code {} {} {}\n", graph.modulus().get(), graph.n(), d);
    for (a, b, w) in graph.edges() {
        let _ = writeln!(out, "edge {} {} {}", a + 1, b + 1, w);
    }
    out.push_str("clique\n");
    for c in clique {
        let parts: Vec<String> = c.entries().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", parts.join(","));
    }
    out
}

pub fn write_graph_code(code: &GraphCode) -> String {
    write_code(code.graph(), code.d(), code.clique())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub phase: u32,
    pub x: Vec<u32>,
    pub z: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationJson {
    /// `symbolic`, `exhaustive` or `sampled`.
    pub mode: String,
    pub pass: bool,
    pub tolerance: f64,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errors_checked: Option<u64>,
}

impl VerificationJson {
    pub fn symbolic(pass: bool) -> Self {
        VerificationJson {
            mode: "symbolic".into(),
            pass,
            tolerance: 0.0,
            max_deviation: 0.0,
            seed: None,
            errors_checked: None,
        }
    }

    pub fn from_report(r: &KlReport) -> Self {
        let mode = match r.mode {
            KlMode::Exhaustive => "exhaustive",
            KlMode::Sampled { .. } => "sampled",
        };
        VerificationJson {
            mode: mode.into(),
            pass: r.pass,
            tolerance: r.tolerance,
            max_deviation: r.max_deviation,
            seed: r.seed(),
            errors_checked: Some(r.errors_checked),
        }
    }
}

/// The structured document printed by `--json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeReport {
    pub p: u32,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub classification: String,
    pub clique: Vec<Vec<u32>>,
    pub stabilizer_generators: Vec<GeneratorJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
    pub verification: VerificationJson,
}

impl CodeReport {
    pub fn new(code: &GraphCode, verification: VerificationJson) -> Self {
        CodeReport {
            p: code.p(),
            n: code.n(),
            d: code.d(),
            k: code.k(),
            classification: code.classification().to_string(),
            clique: code.clique().iter().map(|c| c.entries().to_vec()).collect(),
            stabilizer_generators: code
                .stabilizer_generators()
                .iter()
                .map(|g| GeneratorJson { phase: g.phase(), x: g.x().entries().to_vec(), z: g.z().entries().to_vec() })
                .collect(),
            degrees: code.degrees().map(<[u32]>::to_vec),
            verification,
        }
    }
}
