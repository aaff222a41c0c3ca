//! Bass–Serre trees of trees of groups whose vertex groups are generated by
//! subsets of a free basis and whose edge groups are generated by one shared
//! basis letter.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GogEdge<S> {
    pub from: usize,
    pub to: usize,
    pub letter: u32,
    pub length: S,
}

/// A validated tree of groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphOfGroups<S> {
    alphabet: Alphabet,
    vertex_names: Vec<String>,
    vertex_letters: Vec<u64>,
    edges: Vec<GogEdge<S>>,
    dist: Vec<Vec<S>>,
    first_edge: Vec<Vec<usize>>,
    letter_home: Vec<Option<usize>>,
}

/// Cyclic sequence of `(vertex, syllable)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyllableForm {
    pub syllables: Vec<(usize, Word)>,
}

impl SyllableForm {
    pub fn is_elliptic(&self) -> bool {
        self.syllables.len() <= 1
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GogVertexRecord {
    pub name: String,
    pub letters: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GogEdgeRecord {
    pub from: String,
    pub to: String,
    pub letter: String,
    pub length: String,
}

/// JSON document for a tree of groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GogFile {
    pub alphabet: Vec<String>,
    pub vertices: Vec<GogVertexRecord>,
    pub edges: Vec<GogEdgeRecord>,
}

/// Outcome of [`validate_spec`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn bit(l: u32) -> u64 {
    1u64 << l
}

/// Checks every structural requirement and lists each failure.
pub fn validate_spec<S: Scalar>(file: &GogFile) -> ValidationReport {
    let mut failures = Vec::new();
    match build::<S>(file, &mut failures) {
        Some(_) if failures.is_empty() => {}
        _ if failures.is_empty() => failures.push("invalid specification".into()),
        _ => {}
    }
    ValidationReport { failures }
}

fn build<S: Scalar>(file: &GogFile, failures: &mut Vec<String>) -> Option<GraphOfGroups<S>> {
    let alphabet = match Alphabet::new(file.alphabet.iter().cloned()) {
        Ok(a) => a,
        Err(e) => {
            failures.push(e.to_string());
            return None;
        }
    };
    if alphabet.rank() > 64 {
        failures.push("at most 64 letters are supported".into());
        return None;
    }
    let n = file.vertices.len();
    if n == 0 {
        failures.push("no vertices".into());
        return None;
    }
    let mut vertex_names = Vec::new();
    let mut vertex_letters = vec![0u64; n];
    for (i, v) in file.vertices.iter().enumerate() {
        if vertex_names.contains(&v.name) {
            failures.push(format!("duplicate vertex `{}`", v.name));
        }
        vertex_names.push(v.name.clone());
        for l in &v.letters {
            match alphabet.index_of(l) {
                Some(k) => vertex_letters[i] |= bit(k),
                None => failures.push(format!("vertex `{}`: unknown letter `{l}`", v.name)),
            }
        }
        if vertex_letters[i] == 0 && !v.letters.is_empty() {
            continue;
        }
        if v.letters.is_empty() {
            failures.push(format!("vertex `{}` has an empty letter set", v.name));
        }
    }
    let vertex = |name: &str, failures: &mut Vec<String>| {
        let r = vertex_names.iter().position(|v| v == name);
        if r.is_none() {
            failures.push(format!("edge endpoint `{name}` is not a vertex"));
        }
        r
    };
    let mut edges = Vec::new();
    for e in &file.edges {
        let (Some(from), Some(to)) = (vertex(&e.from, failures), vertex(&e.to, failures)) else {
            continue;
        };
        let Some(letter) = alphabet.index_of(&e.letter) else {
            failures.push(format!("edge {}–{}: unknown letter `{}`", e.from, e.to, e.letter));
            continue;
        };
        let Some(length) = S::parse_fraction(&e.length).filter(|l| *l > S::zero()) else {
            failures.push(format!(
                "edge {}–{}: length `{}` is not a positive fraction",
                e.from, e.to, e.length
            ));
            continue;
        };
        if from == to {
            failures.push(format!("edge {}–{} is a loop", e.from, e.to));
            continue;
        }
        for v in [from, to] {
            if vertex_letters[v] & bit(letter) == 0 {
                failures.push(format!(
                    "edge letter `{}` is missing from vertex `{}`",
                    e.letter, vertex_names[v]
                ));
            }
        }
        edges.push(GogEdge {
            from,
            to,
            letter,
            length,
        });
    }
    if !failures.is_empty() {
        return None;
    }
    if edges.len() + 1 != n {
        failures.push(format!(
            "underlying graph is not a tree: {} vertices, {} edges",
            n,
            edges.len()
        ));
        return None;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        adj[e.from].push(i);
        adj[e.to].push(i);
    }
    let other = |i: usize, v: usize| {
        let e: &GogEdge<S> = &edges[i];
        if e.from == v {
            e.to
        } else {
            e.from
        }
    };
    let mut dist = vec![vec![S::zero(); n]; n];
    let mut first_edge = vec![vec![usize::MAX; n]; n];
    for s in 0..n {
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &i in &adj[v] {
                let w = other(i, v);
                if !seen[w] {
                    seen[w] = true;
                    dist[s][w] = dist[s][v].clone() + edges[i].length.clone();
                    first_edge[s][w] = if v == s { i } else { first_edge[s][v] };
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|x| !x) {
            failures.push("underlying graph is not a tree: it is disconnected".into());
            return None;
        }
    }
    let union = vertex_letters.iter().fold(0u64, |a, b| a | b);
    for l in 0..alphabet.rank() as u32 {
        if union & bit(l) == 0 {
            failures.push(format!("letter `{}` lies in no vertex group", alphabet.name(l)));
        }
    }
    let mut letter_home = vec![None; alphabet.rank()];
    for l in 0..alphabet.rank() as u32 {
        let holders: Vec<usize> = (0..n).filter(|&v| vertex_letters[v] & bit(l) != 0).collect();
        let carried = edges.iter().any(|e| e.letter == l);
        if holders.len() == 1 {
            letter_home[l as usize] = Some(holders[0]);
        }
        if !carried {
            if holders.len() > 1 {
                failures.push(format!(
                    "letter `{}` is not an edge letter but lies in {} vertex groups",
                    alphabet.name(l),
                    holders.len()
                ));
            }
            continue;
        }
        // Vertices holding an edge letter must be exactly a subtree spanned by
        // edges carrying it.
        let mut reach = vec![false; n];
        let start = holders[0];
        reach[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &i in &adj[v] {
                if edges[i].letter == l {
                    let w = other(i, v);
                    if !reach[w] {
                        reach[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        let spanned: Vec<usize> = (0..n).filter(|&v| reach[v]).collect();
        let all_edges_inside = edges
            .iter()
            .filter(|e| e.letter == l)
            .all(|e| reach[e.from] && reach[e.to]);
        if spanned != holders || !all_edges_inside {
            failures.push(format!(
                "vertices containing `{}` are not the subtree of edges labelled by it",
                alphabet.name(l)
            ));
        }
    }
    if !failures.is_empty() {
        return None;
    }
    Some(GraphOfGroups {
        alphabet,
        vertex_names,
        vertex_letters,
        edges,
        dist,
        first_edge,
        letter_home,
    })
}

impl<S: Scalar> GraphOfGroups<S> {
    pub fn from_file(file: &GogFile) -> Result<Self> {
        let mut failures = Vec::new();
        match build(file, &mut failures) {
            Some(g) if failures.is_empty() => Ok(g),
            _ => Err(Error::InvalidSpec(failures.join("; "))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GogFile = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        GraphOfGroups::from_file(&file)
    }

    pub fn to_file(&self) -> GogFile {
        GogFile {
            alphabet: self.alphabet.names().to_vec(),
            vertices: self
                .vertex_names
                .iter()
                .zip(&self.vertex_letters)
                .map(|(name, &mask)| GogVertexRecord {
                    name: name.clone(),
                    letters: (0..self.alphabet.rank() as u32)
                        .filter(|&l| mask & bit(l) != 0)
                        .map(|l| self.alphabet.name(l).to_string())
                        .collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| GogEdgeRecord {
                    from: self.vertex_names[e.from].clone(),
                    to: self.vertex_names[e.to].clone(),
                    letter: self.alphabet.name(e.letter).to_string(),
                    length: e.length.to_fraction(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[GogEdge<S>] {
        &self.edges
    }

    pub fn distance(&self, u: usize, v: usize) -> &S {
        &self.dist[u][v]
    }

    /// Same tree of groups with every edge length replaced.
    pub fn with_lengths(&self, lengths: &[S]) -> Result<Self> {
        if lengths.len() != self.edges.len() {
            return Err(Error::InvalidSpec("one length per edge is required".into()));
        }
        let mut file = self.to_file();
        for (e, l) in file.edges.iter_mut().zip(lengths) {
            e.length = l.to_fraction();
        }
        GraphOfGroups::from_file(&file)
    }

    pub fn scaled(&self, factor: &S) -> Result<Self> {
        let lengths: Vec<S> = self
            .edges
            .iter()
            .map(|e| e.length.clone() * factor.clone())
            .collect();
        self.with_lengths(&lengths)
    }

    fn contains(&self, v: usize, l: Letter) -> bool {
        self.vertex_letters[v] & bit(l.generator) != 0
    }

    fn first_holder(&self, l: Letter) -> usize {
        (0..self.vertex_names.len())
            .find(|&v| self.contains(v, l))
            .expect("validated coverage")
    }

    /// Cyclic syllable decomposition with backtracking removed.
    pub fn normalize(&self, w: &Word) -> Result<SyllableForm> {
        self.alphabet.check(w)?;
        Ok(self.normalize_unchecked(w))
    }

    fn normalize_unchecked(&self, w: &Word) -> SyllableForm {
        let (c, _) = w.cyclic_reduce();
        let letters = c.letters();
        let n = letters.len();
        if n == 0 {
            return SyllableForm {
                syllables: Vec::new(),
            };
        }
        let home = |l: Letter| self.letter_home[l.generator as usize];
        let start = (0..n).find(|&i| home(letters[i]).is_some());
        let Some(start) = start else {
            // Only edge letters: elliptic if one vertex holds them all.
            let mask = letters.iter().fold(0u64, |m, l| m | bit(l.generator));
            if let Some(v) = (0..self.vertex_names.len()).find(|&v| self.vertex_letters[v] & mask == mask) {
                return SyllableForm {
                    syllables: vec![(v, c.as_word())],
                };
            }
            return self.reduce_syllables(self.assign(letters));
        };
        let rotated: Vec<Letter> = letters[start..].iter().chain(&letters[..start]).copied().collect();
        self.reduce_syllables(self.assign(&rotated))
    }

    /// Greedy left-absorbing assignment of letters to vertices.
    fn assign(&self, letters: &[Letter]) -> Vec<(usize, Vec<Letter>)> {
        let n = letters.len();
        let mut out: Vec<(usize, Vec<Letter>)> = Vec::new();
        for (i, &l) in letters.iter().enumerate() {
            if let Some((v, syl)) = out.last_mut() {
                if self.contains(*v, l) {
                    syl.push(l);
                    continue;
                }
            }
            let v = match self.letter_home[l.generator as usize] {
                Some(v) => v,
                None => (1..n)
                    .map(|k| letters[(i + k) % n])
                    .find_map(|m| self.letter_home[m.generator as usize])
                    .filter(|&v| self.contains(v, l))
                    .unwrap_or_else(|| self.first_holder(l)),
            };
            out.push((v, vec![l]));
        }
        out
    }

    fn pure_edge_power(&self, syl: &[Letter]) -> Option<u32> {
        let g = syl[0].generator;
        if self.letter_home[g as usize].is_none() && syl.iter().all(|l| l.generator == g) {
            Some(g)
        } else {
            None
        }
    }

    fn reduce_syllables(&self, mut syl: Vec<(usize, Vec<Letter>)>) -> SyllableForm {
        loop {
            // Merge cyclically adjacent syllables at the same vertex.
            let mut merged: Vec<(usize, Vec<Letter>)> = Vec::with_capacity(syl.len());
            for (v, s) in syl.drain(..) {
                match merged.last_mut() {
                    Some((u, t)) if *u == v => t.extend(s),
                    _ => merged.push((v, s)),
                }
            }
            if merged.len() > 1 && merged[0].0 == merged[merged.len() - 1].0 {
                let (_, mut last) = merged.pop().expect("nonempty");
                last.append(&mut merged[0].1);
                merged[0].1 = last;
            }
            syl = merged;
            let k = syl.len();
            if k <= 1 {
                break;
            }
            let mut changed = false;
            for i in 0..k {
                let Some(letter) = self.pure_edge_power(&syl[i].1) else {
                    continue;
                };
                let v = syl[i].0;
                let prev = syl[(i + k - 1) % k].0;
                let next = syl[(i + 1) % k].0;
                // Backtracking: both neighbours lie beyond the same edge, whose
                // group contains the syllable.
                let ep = self.first_edge[v][prev];
                if ep == self.first_edge[v][next] && self.edges[ep].letter == letter {
                    let e = &self.edges[ep];
                    syl[i].0 = if e.from == v { e.to } else { e.from };
                    changed = true;
                    break;
                }
                // Canonical absorption into a neighbour holding the letter.
                let l = syl[i].1[0];
                if self.contains(prev, l) {
                    syl[i].0 = prev;
                    changed = true;
                    break;
                }
                if self.contains(next, l) {
                    syl[i].0 = next;
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        SyllableForm {
            syllables: syl
                .into_iter()
                .map(|(v, s)| (v, Word::reduce(s)))
                .collect(),
        }
    }

    /// Sum of tree distances between cyclically consecutive syllables.
    pub fn translation_length(&self, w: &Word) -> S {
        let form = self.normalize_unchecked(w);
        let k = form.syllables.len();
        if k <= 1 {
            return S::zero();
        }
        (0..k).fold(S::zero(), |acc, i| {
            acc + self.dist[form.syllables[i].0][form.syllables[(i + 1) % k].0].clone()
        })
    }

    pub fn checked_translation_length(&self, w: &Word) -> Result<S> {
        self.alphabet.check(w)?;
        Ok(self.translation_length(w))
    }

    /// Whether `w` fixes a point: its cyclic reduction uses letters of a
    /// single vertex group.
    pub fn is_elliptic_by_support(&self, w: &Word) -> bool {
        let (c, _) = w.cyclic_reduce();
        let mask = c.letters().iter().fold(0u64, |m, l| m | bit(l.generator));
        self.vertex_letters.iter().any(|&v| v & mask == mask)
    }
}
