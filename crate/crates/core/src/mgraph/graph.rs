use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An edge traversed forwards or backwards.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OEdge {
    pub edge: u32,
    pub reversed: bool,
}

impl OEdge {
    pub const fn forward(edge: u32) -> Self {
        OEdge {
            edge,
            reversed: false,
        }
    }

    pub const fn inv(self) -> Self {
        OEdge {
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

impl fmt::Debug for OEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{}", if self.reversed { "~" } else { "" }, self.edge)
    }
}

/// Appends `e` to a tight path, cancelling a backtrack.
#[inline]
pub(crate) fn push_tight(path: &mut Vec<OEdge>, e: OEdge) {
    if path.last() == Some(&e.inv()) {
        path.pop();
    } else {
        path.push(e);
    }
}

pub fn tighten<I: IntoIterator<Item = OEdge>>(edges: I) -> Vec<OEdge> {
    let mut out = Vec::new();
    for e in edges {
        push_tight(&mut out, e);
    }
    out
}

pub fn reverse_path(path: &[OEdge]) -> Vec<OEdge> {
    path.iter().rev().map(|e| e.inv()).collect()
}

/// Splits a tight closed path into `(u, c)` with `path = u c ū` and `c`
/// cyclically tight.
pub fn cyclic_split(path: &[OEdge]) -> (&[OEdge], &[OEdge]) {
    let n = path.len();
    let mut k = 0;
    while 2 * k + 1 < n && path[k] == path[n - 1 - k].inv() {
        k += 1;
    }
    (&path[..k], &path[k..n - k])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<S> {
    pub name: String,
    pub from: usize,
    pub to: usize,
    pub length: S,
}

/// A finite connected metric graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph<S> {
    vertices: Vec<String>,
    edges: Vec<Edge<S>>,
}

impl<S: Scalar> MetricGraph<S> {
    /// Validates connectivity, positive lengths, unique names and the
    /// valence condition (valence ≥ 3 everywhere, or a one-vertex rose).
    pub fn new(vertices: Vec<String>, edges: Vec<Edge<S>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if vertices.is_empty() {
            return bad("no vertices".into());
        }
        let mut names = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if names.insert(v.as_str(), i).is_some() {
                return bad(format!("duplicate vertex `{v}`"));
            }
        }
        let mut edge_names = HashMap::new();
        let mut valence = vec![0usize; vertices.len()];
        for e in &edges {
            if edge_names.insert(e.name.as_str(), ()).is_some() {
                return bad(format!("duplicate edge `{}`", e.name));
            }
            if e.name.is_empty() || e.name.starts_with('~') || e.name.contains(char::is_whitespace)
            {
                return bad(format!("edge name `{}` is not usable in paths", e.name));
            }
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return bad(format!("edge `{}` has an unknown endpoint", e.name));
            }
            if !(e.length > S::zero()) {
                return bad(format!("edge `{}` must have positive length", e.name));
            }
            valence[e.from] += 1;
            valence[e.to] += 1;
        }
        let g = MetricGraph { vertices, edges };
        if !g.is_connected() {
            return bad("graph is not connected".into());
        }
        let rose = g.vertices.len() == 1 && !g.edges.is_empty();
        if !rose {
            if let Some(v) = valence.iter().position(|&d| d < 3) {
                return bad(format!(
                    "vertex `{}` has valence {} (need ≥ 3 unless the graph is a one-vertex rose)",
                    g.vertices[v], valence[v]
                ));
            }
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge_index(&self, name: &str) -> Option<u32> {
        self.edges.iter().position(|e| e.name == name).map(|i| i as u32)
    }

    pub fn origin(&self, e: OEdge) -> usize {
        let d = &self.edges[e.edge as usize];
        if e.reversed {
            d.to
        } else {
            d.from
        }
    }

    pub fn terminus(&self, e: OEdge) -> usize {
        self.origin(e.inv())
    }

    pub fn length(&self, e: OEdge) -> &S {
        &self.edges[e.edge as usize].length
    }

    pub fn path_length(&self, path: &[OEdge]) -> S {
        path.iter()
            .fold(S::zero(), |acc, e| acc + self.length(*e).clone())
    }

    /// Oriented edges leaving `v`, in index order.
    pub fn star(&self, v: usize) -> Vec<OEdge> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push(OEdge::forward(i as u32));
            }
            if e.to == v {
                out.push(OEdge::forward(i as u32).inv());
            }
        }
        out
    }

    pub fn is_path_from(&self, start: usize, path: &[OEdge]) -> bool {
        let mut v = start;
        for &e in path {
            if self.origin(e) != v {
                return false;
            }
            v = self.terminus(e);
        }
        true
    }

    pub fn end_vertex(&self, start: usize, path: &[OEdge]) -> usize {
        path.last().map_or(start, |&e| self.terminus(e))
    }

    /// Parses `e ~f g` into oriented edges.
    pub fn parse_path(&self, text: &str) -> Result<Vec<OEdge>> {
        let mut out = Vec::new();
        let mut column = 1;
        for token in text.split_inclusive(char::is_whitespace) {
            let t = token.trim();
            if !t.is_empty() {
                let lead = token.len() - token.trim_start().len();
                let (rev, name) = match t.strip_prefix('~') {
                    Some(n) => (true, n),
                    None => (false, t),
                };
                let idx = self.edge_index(name).ok_or_else(|| {
                    Error::parse(1, column + lead, format!("unknown edge `{name}`"))
                })?;
                out.push(OEdge {
                    edge: idx,
                    reversed: rev,
                });
            }
            column += token.chars().count();
        }
        Ok(out)
    }

    pub fn format_path(&self, path: &[OEdge]) -> String {
        path.iter()
            .map(|e| {
                let n = &self.edges[e.edge as usize].name;
                if e.reversed {
                    format!("~{n}")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The same graph with every length multiplied by `factor`.
    pub fn scaled(&self, factor: &S) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                length: e.length.clone() * factor.clone(),
                ..e.clone()
            })
            .collect();
        MetricGraph::new(self.vertices.clone(), edges)
    }
}

/// JSON edge record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub name: String,
    pub from: String,
    pub to: String,
    pub length: String,
}
