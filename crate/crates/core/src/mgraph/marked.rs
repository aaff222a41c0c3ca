use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::{cyclic_split, push_tight, reverse_path, Edge, EdgeRecord, MetricGraph, OEdge};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{fold_graph, Alphabet, Word};

/// A metric graph with a marking: generator `i` maps to a tight closed edge
/// path at the base vertex. The universal cover is the free tree on which the
/// group acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGraph<S> {
    graph: MetricGraph<S>,
    base: usize,
    alphabet: Alphabet,
    images: Vec<Vec<OEdge>>,
}

/// JSON document for a marked graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkedGraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    pub base_vertex: String,
    pub marking: serde_json::Map<String, serde_json::Value>,
}

impl<S: Scalar> MarkedGraph<S> {
    pub fn new(
        graph: MetricGraph<S>,
        base: usize,
        alphabet: Alphabet,
        images: Vec<Vec<OEdge>>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMarking(m));
        if base >= graph.vertex_count() {
            return bad("base vertex out of range".into());
        }
        if images.len() != alphabet.rank() {
            return bad(format!(
                "{} images for {} generators",
                images.len(),
                alphabet.rank()
            ));
        }
        if graph.rank() != alphabet.rank() {
            return bad(format!(
                "graph has rank {} but the alphabet has {} generators",
                graph.rank(),
                alphabet.rank()
            ));
        }
        for (i, p) in images.iter().enumerate() {
            let name = alphabet.name(i as u32);
            if p.is_empty() {
                return bad(format!("image of `{name}` is the trivial path"));
            }
            if !graph.is_path_from(base, p) || graph.end_vertex(base, p) != base {
                return bad(format!(
                    "image of `{name}` is not a closed edge path at the base vertex"
                ));
            }
            if p.windows(2).any(|w| w[1] == w[0].inv()) {
                return bad(format!("image of `{name}` backtracks"));
            }
        }
        let m = MarkedGraph {
            graph,
            base,
            alphabet,
            images,
        };
        m.check_generates()?;
        Ok(m)
    }

    /// Folds the wedge of image loops; it must fold onto the whole graph.
    fn check_generates(&self) -> Result<()> {
        let mut states = 1;
        let mut edges = Vec::new();
        let mut state_vertex = vec![self.base];
        for p in &self.images {
            let mut prev = 0;
            for (i, &e) in p.iter().enumerate() {
                let next = if i + 1 == p.len() {
                    0
                } else {
                    state_vertex.push(self.graph.terminus(e));
                    states += 1;
                    states - 1
                };
                edges.push((prev, e, next));
                prev = next;
            }
        }
        let (trans, _) = fold_graph(states, &edges, OEdge::inv, 0);
        let labels: usize = trans.iter().map(|m| m.len()).sum();
        let distinct: BTreeSet<OEdge> = trans.iter().flat_map(|m| m.keys().copied()).collect();
        if trans.len() != self.graph.vertex_count()
            || labels != 2 * self.graph.edge_count()
            || distinct.len() != 2 * self.graph.edge_count()
        {
            return Err(Error::InvalidMarking(
                "the image loops do not generate the fundamental group of the graph".into(),
            ));
        }
        Ok(())
    }

    pub fn graph(&self) -> &MetricGraph<S> {
        &self.graph
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn images(&self) -> &[Vec<OEdge>] {
        &self.images
    }

    /// Tight closed path representing `w`.
    pub fn image(&self, w: &Word) -> Vec<OEdge> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for l in w.letters() {
            let p = &self.images[l.generator as usize];
            if l.inverse {
                for e in p.iter().rev() {
                    push_tight(&mut out, e.inv());
                }
            } else {
                for &e in p {
                    push_tight(&mut out, e);
                }
            }
        }
        out
    }

    pub fn checked_image(&self, w: &Word) -> Result<Vec<OEdge>> {
        self.alphabet.check(w)?;
        Ok(self.image(w))
    }

    /// Length of the cyclically tightened image loop.
    pub fn translation_length(&self, w: &Word) -> S {
        let p = self.image(w);
        let (_, c) = cyclic_split(&p);
        self.graph.path_length(c)
    }

    pub fn checked_translation_length(&self, w: &Word) -> Result<S> {
        self.alphabet.check(w)?;
        Ok(self.translation_length(w))
    }

    /// Same marking on the graph with all lengths scaled by `factor`.
    pub fn scaled(&self, factor: &S) -> Result<Self> {
        Ok(MarkedGraph {
            graph: self.graph.scaled(factor)?,
            ..self.clone()
        })
    }

    /// Marking obtained by a breadth-first spanning tree from `base`: each
    /// non-tree edge, in index order, gives the loop through it.
    pub fn standard(graph: MetricGraph<S>, base: usize, alphabet: Alphabet) -> Result<Self> {
        let n = graph.vertex_count();
        let mut to_root: Vec<Option<Vec<OEdge>>> = vec![None; n];
        let mut in_tree = vec![false; graph.edge_count()];
        to_root[base] = Some(Vec::new());
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for e in graph.star(v) {
                let t = graph.terminus(e);
                if to_root[t].is_none() {
                    let mut p = to_root[v].clone().expect("visited");
                    p.push(e);
                    to_root[t] = Some(p);
                    in_tree[e.edge as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        let mut images = Vec::new();
        for (i, tree) in in_tree.iter().enumerate() {
            if *tree {
                continue;
            }
            let e = OEdge::forward(i as u32);
            let mut p = to_root[graph.origin(e)].clone().expect("connected");
            p.push(e);
            p.extend(reverse_path(
                to_root[graph.terminus(e)].as_ref().expect("connected"),
            ));
            images.push(super::graph::tighten(p));
        }
        MarkedGraph::new(graph, base, alphabet, images)
    }

    /// Precomposes the marking with an automorphism given by generator images.
    pub fn precompose(&self, automorphism: &[Word]) -> Result<Self> {
        let images = automorphism.iter().map(|w| self.image(w)).collect();
        MarkedGraph::new(self.graph.clone(), self.base, self.alphabet.clone(), images)
    }

    /// Applies `steps` random Nielsen moves to the marking.
    pub fn random_nielsen<R: Rng + ?Sized>(&self, rng: &mut R, steps: usize) -> Result<Self> {
        let rank = self.alphabet.rank() as u32;
        let mut auto: Vec<Word> = (0..rank).map(Word::generator).collect();
        for _ in 0..steps {
            let i = rng.gen_range(0..rank) as usize;
            if rank == 1 {
                auto[i] = auto[i].inverse();
                continue;
            }
            let mut j = rng.gen_range(0..rank - 1) as usize;
            if j >= i {
                j += 1;
            }
            let other = if rng.gen_bool(0.5) {
                auto[j].clone()
            } else {
                auto[j].inverse()
            };
            auto[i] = match rng.gen_range(0..3) {
                0 => auto[i].concat(&other),
                1 => other.concat(&auto[i]),
                _ => auto[i].inverse(),
            };
        }
        self.precompose(&auto)
    }

    pub fn from_file(file: &MarkedGraphFile) -> Result<Self> {
        let vertex = |name: &str| {
            file.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{name}`")))
        };
        let mut edges = Vec::new();
        for e in &file.edges {
            let length = S::parse_fraction(&e.length).ok_or_else(|| {
                Error::InvalidGraph(format!("edge `{}`: bad length `{}`", e.name, e.length))
            })?;
            edges.push(Edge {
                name: e.name.clone(),
                from: vertex(&e.from)?,
                to: vertex(&e.to)?,
                length,
            });
        }
        let graph = MetricGraph::new(file.vertices.clone(), edges)?;
        let base = vertex(&file.base_vertex)?;
        let alphabet = Alphabet::new(file.marking.keys().cloned())?;
        let mut images = Vec::new();
        for (name, v) in &file.marking {
            let text = v.as_str().ok_or_else(|| {
                Error::InvalidMarking(format!("image of `{name}` must be a string"))
            })?;
            let p = graph.parse_path(text).map_err(|e| match e {
                Error::Parse { column, message, .. } => Error::InvalidMarking(format!(
                    "image of `{name}`, column {column}: {message}"
                )),
                other => other,
            })?;
            images.push(p);
        }
        MarkedGraph::new(graph, base, alphabet, images)
    }

    pub fn to_file(&self) -> MarkedGraphFile {
        let g = &self.graph;
        MarkedGraphFile {
            vertices: g.vertex_names().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    name: e.name.clone(),
                    from: g.vertex_names()[e.from].clone(),
                    to: g.vertex_names()[e.to].clone(),
                    length: e.length.to_fraction(),
                })
                .collect(),
            base_vertex: g.vertex_names()[self.base].clone(),
            marking: self
                .alphabet
                .names()
                .iter()
                .zip(&self.images)
                .map(|(n, p)| (n.clone(), serde_json::Value::String(g.format_path(p))))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MarkedGraphFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        MarkedGraph::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}

/// Small graphs used as building blocks.
pub mod presets {
    use super::*;

    fn edges<S: Scalar>(spec: &[(&str, usize, usize)]) -> Vec<Edge<S>> {
        spec.iter()
            .map(|&(n, f, t)| Edge {
                name: n.to_string(),
                from: f,
                to: t,
                length: S::one(),
            })
            .collect()
    }

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("v{i}")).collect()
    }

    /// Rose with unit petals named after the generators, identity marking.
    pub fn rose<S: Scalar>(alphabet: &Alphabet) -> MarkedGraph<S> {
        let spec: Vec<(&str, usize, usize)> =
            alphabet.names().iter().map(|n| (n.as_str(), 0, 0)).collect();
        let g = MetricGraph::new(names(1), edges(&spec)).expect("rose is valid");
        MarkedGraph::standard(g, 0, alphabet.clone()).expect("rose marking is valid")
    }

    /// Loops `a` at `v1`, `b` at `v2`, bridge `c`; `a ↦ a`, `b ↦ c b c̄`.
    pub fn barbell<S: Scalar>() -> MarkedGraph<S> {
        let g = MetricGraph::new(names(2), edges(&[("a", 0, 0), ("b", 1, 1), ("c", 0, 1)]))
            .expect("barbell is valid");
        let images = vec![g.parse_path("a").unwrap(), g.parse_path("c b ~c").unwrap()];
        MarkedGraph::new(g, 0, Alphabet::new(["a", "b"]).unwrap(), images)
            .expect("barbell marking is valid")
    }

    /// Two vertices joined by `k` edges.
    pub fn theta<S: Scalar>(k: usize) -> MetricGraph<S> {
        let spec: Vec<(String, usize, usize)> = (0..k).map(|i| (format!("e{i}"), 0, 1)).collect();
        let spec: Vec<(&str, usize, usize)> =
            spec.iter().map(|(n, f, t)| (n.as_str(), *f, *t)).collect();
        MetricGraph::new(names(2), edges(&spec)).expect("theta is valid")
    }

    /// Complete graph on four vertices.
    pub fn k4<S: Scalar>() -> MetricGraph<S> {
        MetricGraph::new(
            names(4),
            edges(&[
                ("e01", 0, 1),
                ("e02", 0, 2),
                ("e03", 0, 3),
                ("e12", 1, 2),
                ("e13", 1, 3),
                ("e23", 2, 3),
            ]),
        )
        .expect("K4 is valid")
    }

    /// Same graph, every length replaced by a random `p/q` with
    /// `1 ≤ p ≤ 6`, `1 ≤ q ≤ 3`.
    pub fn random_lengths<S: Scalar, R: Rng + ?Sized>(
        g: &MetricGraph<S>,
        rng: &mut R,
    ) -> MetricGraph<S> {
        let edges = g
            .edges()
            .iter()
            .map(|e| {
                let p: u8 = rng.gen_range(1..=6);
                let q: u8 = rng.gen_range(1..=3);
                Edge {
                    length: S::from_u8(p).unwrap() / S::from_u8(q).unwrap(),
                    ..e.clone()
                }
            })
            .collect();
        MetricGraph::new(g.vertex_names().to_vec(), edges).expect("lengths stay positive")
    }
}
