use serde::{Deserialize, Serialize};

use super::Hypergraph;
use crate::error::{Error, Result};

/// Hypergraph as it appears in files, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawHypergraph {
    #[serde(default = "default_dim")]
    pub dim: u32,
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<RawEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEdge {
    pub v: Vec<usize>,
    #[serde(default = "default_multiplicity")]
    pub m: u32,
}

fn default_dim() -> u32 {
    2
}

fn default_multiplicity() -> u32 {
    1
}

/// Parses either the JSON or the line-based text format, picking JSON when
/// the first non-blank character is `{`.
pub fn parse_hypergraph(input: &str) -> Result<Hypergraph> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn parse_json(input: &str) -> Result<Hypergraph> {
    let raw: RawHypergraph = serde_json::from_str(input)?;
    Hypergraph::from_raw(&raw)
}

pub fn parse_text(input: &str) -> Result<Hypergraph> {
    let mut dim: Option<u32> = None;
    let mut vertices: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        match keyword {
            "dim" => {
                if dim.is_some() {
                    return Err(err("duplicate dim statement".into()));
                }
                dim = Some(single_number(&rest).map_err(err)?);
            }
            "vertices" => {
                if vertices.is_some() {
                    return Err(err("duplicate vertices statement".into()));
                }
                vertices = Some(single_number(&rest).map_err(err)?);
            }
            "edge" => {
                let (verts, mult) = match rest.iter().position(|w| *w == "*") {
                    Some(star) => {
                        let m = single_number(&rest[star + 1..]).map_err(err)?;
                        (&rest[..star], m)
                    }
                    None => (&rest[..], 1u32),
                };
                let v = verts
                    .iter()
                    .map(|w| w.parse::<usize>().map_err(|_| err(format!("bad vertex {w:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                edges.push(RawEdge { v, m: mult });
            }
            other => return Err(err(format!("unknown statement {other:?}"))),
        }
    }
    let vertices = vertices.ok_or(Error::Parse {
        line: 0,
        message: "missing vertices statement".into(),
    })?;
    Hypergraph::from_raw(&RawHypergraph {
        dim: dim.unwrap_or(2),
        vertices,
        edges,
    })
}

fn single_number<T: std::str::FromStr>(words: &[&str]) -> std::result::Result<T, String> {
    match words {
        [w] => w.parse().map_err(|_| format!("bad number {w:?}")),
        _ => Err(format!("expected one number, got {}", words.len())),
    }
}

impl Hypergraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\nvertices {}\n", self.d, self.n);
        for e in &self.edges {
            out.push_str("edge");
            for v in &e.vertices {
                out.push_str(&format!(" {v}"));
            }
            if e.multiplicity != 1 {
                out.push_str(&format!(" * {}", e.multiplicity));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("hypergraph serializes")
    }
}
