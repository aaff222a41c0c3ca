use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::metric::OrbitMetric;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    /// Sample indices placed at this node; empty for branch points.
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge<S> {
    pub a: usize,
    pub b: usize,
    pub length: S,
}

/// A finite metric tree whose labelled nodes realise an [`OrbitMetric`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTree<S> {
    pub sample: Vec<Word>,
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge<S>>,
    /// Node carrying each sample index.
    pub position: Vec<usize>,
}

impl<S: Scalar> FiniteTree<S> {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.a].push((e.b, k));
            adj[e.b].push((e.a, k));
        }
        adj
    }

    /// Distances from node `src` to every node.
    pub fn node_distances(&self, src: usize) -> Vec<S> {
        let adj = self.adjacency();
        self.distances_with(&adj, src)
    }

    fn distances_with(&self, adj: &[Vec<(usize, usize)>], src: usize) -> Vec<S> {
        let mut dist: Vec<Option<S>> = vec![None; self.nodes.len()];
        dist[src] = Some(S::zero());
        let mut stack = vec![src];
        while let Some(v) = stack.pop() {
            let dv = dist[v].clone().expect("visited");
            for &(u, k) in &adj[v] {
                if dist[u].is_none() {
                    dist[u] = Some(dv.clone() + self.edges[k].length.clone());
                    stack.push(u);
                }
            }
        }
        dist.into_iter().map(|d| d.expect("tree is connected")).collect()
    }

    /// Distance matrix between sample points.
    pub fn sample_distances(&self) -> Vec<Vec<S>> {
        let adj = self.adjacency();
        let n = self.sample.len();
        (0..n)
            .map(|i| {
                let dn = self.distances_with(&adj, self.position[i]);
                (0..n).map(|j| dn[self.position[j]].clone()).collect()
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.a == v || e.b == v).count()
    }

    /// Node path from `a` to `b`.
    fn path(&self, adj: &[Vec<(usize, usize)>], a: usize, b: usize) -> Vec<(usize, usize)> {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        seen[a] = true;
        let mut stack = vec![a];
        while let Some(v) = stack.pop() {
            if v == b {
                break;
            }
            for &(u, k) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, k));
                    stack.push(u);
                }
            }
        }
        let mut out = Vec::new();
        let mut v = b;
        while v != a {
            let (p, k) = parent[v].expect("connected");
            out.push((v, k));
            v = p;
        }
        out.reverse();
        out
    }

    /// Bipartitions of the sample cut out by each edge, keyed by the side
    /// not containing sample index 0, with the edge length.
    pub fn splits(&self) -> Vec<(Vec<usize>, S)> {
        let adj = self.adjacency();
        let root = self.position[0];
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            // The side of `e` away from the root.
            let root_side = self.side(&adj, root, k);
            let far = if root_side.contains(&e.a) { e.b } else { e.a };
            let comp = self.side(&adj, far, k);
            let mut labels: Vec<usize> = comp
                .iter()
                .flat_map(|&v| self.nodes[v].labels.iter().copied())
                .collect();
            labels.sort_unstable();
            out.push((labels, e.length.clone()));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn side(&self, adj: &[Vec<(usize, usize)>], start: usize, cut: usize) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut out = vec![start];
        while let Some(v) = stack.pop() {
            for &(u, k) in &adj[v] {
                if k != cut && !seen[u] {
                    seen[u] = true;
                    out.push(u);
                    stack.push(u);
                }
            }
        }
        out
    }

    /// Same sample, same splits and same edge lengths.
    pub fn same_shape(&self, other: &FiniteTree<S>) -> bool {
        if self.sample != other.sample {
            return false;
        }
        let colocated = |t: &FiniteTree<S>| -> Vec<Vec<usize>> {
            let mut v: Vec<Vec<usize>> = t
                .nodes
                .iter()
                .map(|n| {
                    let mut l = n.labels.clone();
                    l.sort_unstable();
                    l
                })
                .filter(|l| !l.is_empty())
                .collect();
            v.sort();
            v
        };
        self.splits() == other.splits() && colocated(self) == colocated(other)
    }

    fn node_label(&self, v: usize, al: &Alphabet) -> Option<String> {
        let labels = &self.nodes[v].labels;
        (!labels.is_empty()).then(|| {
            let s: Vec<String> = labels.iter().map(|&i| al.format(&self.sample[i])).collect();
            s.join(" | ")
        })
    }

    /// Newick text rooted at the identity's node; every label is quoted and
    /// lengths are exact fractions.
    pub fn to_newick(&self, al: &Alphabet) -> String {
        let adj = self.adjacency();
        let root = self.position[0];
        let mut out = String::new();
        self.newick_rec(&adj, root, None, al, &mut out);
        out.push(';');
        out
    }

    fn newick_rec(
        &self,
        adj: &[Vec<(usize, usize)>],
        v: usize,
        parent: Option<usize>,
        al: &Alphabet,
        out: &mut String,
    ) {
        let children: Vec<(usize, usize)> =
            adj[v].iter().copied().filter(|&(u, _)| Some(u) != parent).collect();
        if !children.is_empty() {
            out.push('(');
            for (n, (u, k)) in children.iter().enumerate() {
                if n > 0 {
                    out.push(',');
                }
                self.newick_rec(adj, *u, Some(v), al, out);
                out.push(':');
                out.push_str(&self.edges[*k].length.to_fraction());
            }
            out.push(')');
        }
        if let Some(l) = self.node_label(v, al) {
            out.push('\'');
            out.push_str(&l.replace('\'', "''"));
            out.push('\'');
        }
    }

    pub fn to_document(&self, al: &Alphabet, scope: &str) -> TreeDocument {
        TreeDocument {
            scope: scope.to_string(),
            sample: self.sample.iter().map(|w| al.format(w)).collect(),
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| TreeNodeRecord {
                    id,
                    labels: n.labels.iter().map(|&i| al.format(&self.sample[i])).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| TreeEdgeRecord {
                    from: e.a,
                    to: e.b,
                    length: e.length.to_fraction(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeNodeRecord {
    pub id: usize,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeEdgeRecord {
    pub from: usize,
    pub to: usize,
    pub length: String,
}

/// JSON form of a [`FiniteTree`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeDocument {
    pub scope: String,
    pub sample: Vec<String>,
    pub nodes: Vec<TreeNodeRecord>,
    pub edges: Vec<TreeEdgeRecord>,
}

/// Realises `om` exactly, inserting sample points in index order.
pub fn build_tree<S: Scalar>(om: &OrbitMetric<S>) -> Result<FiniteTree<S>> {
    let order: Vec<usize> = (0..om.len()).collect();
    build_tree_in_order(om, &order)
}

/// Realises `om` inserting points in `order`; each new point `z` hangs off
/// the path from the first point to the earlier point `y` maximising the
/// Gromov product `(y | z)`.
pub fn build_tree_in_order<S: Scalar>(om: &OrbitMetric<S>, order: &[usize]) -> Result<FiniteTree<S>> {
    let n = om.len();
    let mut check = order.to_vec();
    check.sort_unstable();
    if check != (0..n).collect::<Vec<_>>() || n == 0 {
        return Err(Error::Precondition("insertion order must be a permutation of the sample".into()));
    }
    let d = &om.d;
    let fail = |msg: String| Error::NotTreeMetric(msg);
    let mut t: FiniteTree<S> = FiniteTree {
        sample: om.sample.clone(),
        nodes: vec![TreeNode { labels: vec![order[0]] }],
        edges: Vec::new(),
        position: vec![usize::MAX; n],
    };
    t.position[order[0]] = 0;
    let x0 = order[0];
    for (step, &z) in order.iter().enumerate().skip(1) {
        let placed = &order[..step];
        let gromov = |y: usize| (d[x0][y].clone() + d[x0][z].clone() - d[y][z].clone()).half();
        let mut best = (x0, S::zero());
        for &y in placed {
            let g = gromov(y);
            if g > best.1 {
                best = (y, g);
            }
        }
        let (y, t_off) = best;
        let pendant = d[x0][z].clone() - t_off.clone();
        if pendant < S::zero() || t_off > d[x0][y] {
            return Err(fail(format!("inconsistent Gromov product inserting sample point {z}")));
        }
        let adj = t.adjacency();
        let path = t.path(&adj, t.position[x0], t.position[y]);
        // Walk `t_off` along the path from x0.
        let mut acc = S::zero();
        let mut cur = t.position[x0];
        let mut attach = None;
        for (next, k) in path {
            if acc == t_off {
                attach = Some(cur);
                break;
            }
            let len = t.edges[k].length.clone();
            let end = acc.clone() + len.clone();
            if end > t_off {
                // Split edge k at offset t_off − acc from `cur`.
                let mid = t.nodes.len();
                t.nodes.push(TreeNode { labels: Vec::new() });
                let first = t_off.clone() - acc.clone();
                let e = t.edges[k].clone();
                let (from_cur, to_next) = (first.clone(), len - first);
                t.edges[k] = TreeEdge { a: cur, b: mid, length: from_cur };
                debug_assert!(e.a == cur || e.b == cur);
                t.edges.push(TreeEdge { a: mid, b: next, length: to_next });
                attach = Some(mid);
                break;
            }
            acc = end;
            cur = next;
        }
        let attach = match attach {
            Some(v) => v,
            None if acc == t_off => cur,
            None => return Err(fail(format!("attachment point beyond the path for sample point {z}"))),
        };
        if pendant.is_zero() {
            t.nodes[attach].labels.push(z);
            t.position[z] = attach;
        } else {
            let v = t.nodes.len();
            t.nodes.push(TreeNode { labels: vec![z] });
            t.edges.push(TreeEdge { a: attach, b: v, length: pendant });
            t.position[z] = v;
        }
    }
    let got = t.sample_distances();
    for i in 0..n {
        for j in 0..n {
            if got[i][j] != d[i][j] {
                return Err(fail(format!(
                    "reconstruction gives d({i},{j}) = {} but the metric has {}",
                    got[i][j].to_fraction(),
                    d[i][j].to_fraction()
                )));
            }
        }
    }
    Ok(t)
}

/// Every sample label and tree edge, for comparisons that ignore node ids.
pub fn split_map<S: Scalar>(t: &FiniteTree<S>) -> BTreeMap<Vec<usize>, String> {
    t.splits().into_iter().map(|(k, v)| (k, v.to_fraction())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn metric(rows: &[&[i64]]) -> OrbitMetric<Rational> {
        OrbitMetric {
            sample: (0..rows.len()).map(|i| Word::generator(0).pow(i as i64)).collect(),
            d: rows
                .iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
                .collect(),
        }
    }

    #[test]
    fn path_of_three() {
        let om = metric(&[&[0, 1, 1], &[1, 0, 2], &[1, 2, 0]]);
        let t = build_tree(&om).unwrap();
        assert_eq!(t.nodes.len(), 3);
        assert_eq!(t.edges.len(), 2);
        assert_eq!(t.degree(t.position[0]), 2);
        let two = metric(&[&[0, 3], &[3, 0]]);
        let t2 = build_tree(&two).unwrap();
        assert_eq!(t2.edges, vec![TreeEdge { a: 0, b: 1, length: Rational::from_integer(3) }]);
    }

    #[test]
    fn quartet_with_two_branch_points() {
        // ((0,1),(2,3)) with unit pendant edges and a middle edge of 2.
        let om = metric(&[&[0, 2, 4, 4], &[2, 0, 4, 4], &[4, 4, 0, 2], &[4, 4, 2, 0]]);
        let t = build_tree(&om).unwrap();
        let branch: Vec<usize> = (0..t.nodes.len()).filter(|&v| t.nodes[v].labels.is_empty()).collect();
        assert_eq!(branch.len(), 2);
        assert!(branch.iter().all(|&v| t.degree(v) >= 3));
        for order in [[3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
            let u = build_tree_in_order(&om, &order).unwrap();
            assert!(t.same_shape(&u));
        }
        let al = Alphabet::new(["a"]).unwrap();
        let nw = t.to_newick(&al);
        assert!(nw.ends_with("'1';"), "{nw}");
        assert!(nw.contains(":2/1"));
    }

    #[test]
    fn colocated_points_and_failure() {
        let om = metric(&[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]]);
        let t = build_tree(&om).unwrap();
        assert_eq!(t.position[0], t.position[1]);
        let bad = metric(&[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]]);
        assert!(matches!(build_tree(&bad), Err(Error::NotTreeMetric(_))));
    }
}
