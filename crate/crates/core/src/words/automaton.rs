//! Stallings folding: subgroup graphs of finitely generated subgroups of a
//! free group, with membership by walking from the base state.

use std::collections::{BTreeMap, HashMap};

use super::word::{Letter, Word};

#[derive(Clone, Debug)]
pub struct SubgroupAutomaton {
    base: usize,
    transitions: Vec<BTreeMap<Letter, usize>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

/// Folds a labelled graph given as `(source, label, target)` triples.
/// Returns the folded transition maps and the image of `base`.
pub(crate) fn fold_graph<L: Copy + Ord + std::hash::Hash>(
    states: usize,
    edges: &[(usize, L, usize)],
    invert: impl Fn(L) -> L,
    base: usize,
) -> (Vec<BTreeMap<L, usize>>, usize) {
    let mut uf = UnionFind::new(states);
    loop {
        let mut seen: HashMap<(usize, L), usize> = HashMap::new();
        let mut merged = false;
        for &(s, l, t) in edges {
            for (s, l, t) in [(s, l, t), (t, invert(l), s)] {
                let (s, t) = (uf.find(s), uf.find(t));
                match seen.get(&(s, l)) {
                    Some(&t2) => {
                        let t2 = uf.find(t2);
                        if t2 != t {
                            uf.union(t, t2);
                            merged = true;
                        }
                    }
                    None => {
                        seen.insert((s, l), t);
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let next_id = |r: usize, ids: &mut HashMap<usize, usize>| {
        let n = ids.len();
        *ids.entry(r).or_insert(n)
    };
    let base_root = uf.find(base);
    let new_base = next_id(base_root, &mut ids);
    let mut trans: Vec<BTreeMap<L, usize>> = Vec::new();
    for &(s, l, t) in edges {
        let (s, t) = (uf.find(s), uf.find(t));
        let (s, t) = (next_id(s, &mut ids), next_id(t, &mut ids));
        if trans.len() < ids.len() {
            trans.resize_with(ids.len(), BTreeMap::new);
        }
        trans[s].insert(l, t);
        trans[t].insert(invert(l), s);
    }
    trans.resize_with(ids.len().max(1), BTreeMap::new);
    (trans, new_base)
}

impl SubgroupAutomaton {
    /// Folds the wedge of loops spelling the generators.
    pub fn build(generators: &[Word]) -> Self {
        let mut states = 1;
        let mut edges = Vec::new();
        for g in generators {
            let n = g.len();
            if n == 0 {
                continue;
            }
            let mut prev = 0;
            for (i, &l) in g.letters().iter().enumerate() {
                let next = if i + 1 == n {
                    0
                } else {
                    states += 1;
                    states - 1
                };
                edges.push((prev, l, next));
                prev = next;
            }
        }
        let (transitions, base) = fold_graph(states, &edges, Letter::inv, 0);
        let mut aut = SubgroupAutomaton { base, transitions };
        aut.trim();
        aut
    }

    /// Repeatedly removes non-base states of valence one.
    fn trim(&mut self) {
        let n = self.transitions.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for s in 0..n {
                if !alive[s] || s == self.base {
                    continue;
                }
                let degree = self.transitions[s]
                    .values()
                    .filter(|&&t| alive[t])
                    .count();
                if degree <= 1 {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut k = 0;
        for s in 0..n {
            if alive[s] {
                remap[s] = k;
                k += 1;
            }
        }
        let transitions = (0..n)
            .filter(|&s| alive[s])
            .map(|s| {
                self.transitions[s]
                    .iter()
                    .filter(|(_, &t)| alive[t])
                    .map(|(&l, &t)| (l, remap[t]))
                    .collect()
            })
            .collect();
        self.transitions = transitions;
        self.base = remap[self.base];
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn transition(&self, state: usize, l: Letter) -> Option<usize> {
        self.transitions[state].get(&l).copied()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.transitions.iter().map(|m| m.len()).sum::<usize>() / 2
    }

    /// Rank of the subgroup: `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.states()
    }

    pub fn member(&self, w: &Word) -> bool {
        let mut s = self.base;
        for &l in w.letters() {
            match self.transition(s, l) {
                Some(t) => s = t,
                None => return false,
            }
        }
        s == self.base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_words, Alphabet};
    use std::collections::HashSet;

    #[test]
    fn basis_subset_membership() {
        let al = Alphabet::new(["a", "b", "c", "g"]).unwrap();
        let aut = SubgroupAutomaton::build(&[al.parse("a").unwrap(), al.parse("g").unwrap()]);
        assert!(aut.member(&al.parse("a g a'").unwrap()));
        assert!(!aut.member(&al.parse("b").unwrap()));
        assert_eq!(aut.states(), 1);
        assert_eq!(aut.rank(), 2);
    }

    #[test]
    fn index_of_square() {
        let al = Alphabet::new(["a"]).unwrap();
        let aut = SubgroupAutomaton::build(&[al.parse("a^2").unwrap()]);
        assert!(!aut.member(&al.parse("a^3").unwrap()));
        assert!(aut.member(&al.parse("a^-4").unwrap()));
        assert_eq!(aut.states(), 2);
    }

    #[test]
    fn folding_merges_common_prefixes() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let gens = [al.parse("a b a'").unwrap(), al.parse("a b' a'").unwrap()];
        let aut = SubgroupAutomaton::build(&gens);
        assert_eq!(aut.rank(), 1);
        assert!(aut.member(&al.parse("a b^5 a'").unwrap()));
        assert!(!aut.member(&al.parse("b").unwrap()));
        // The base keeps its single edge.
        assert_eq!(aut.states(), 2);
    }

    #[test]
    fn full_group_from_nielsen_generators() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let gens = [al.parse("a b a").unwrap(), al.parse("a b").unwrap()];
        let aut = SubgroupAutomaton::build(&gens);
        assert_eq!(aut.states(), 1);
        assert_eq!(aut.rank(), 2);
    }

    /// Naive membership: all products of at most `k` generators or inverses.
    fn naive_closure(gens: &[Word], k: usize) -> HashSet<Word> {
        let mut all: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        all.sort();
        all.dedup();
        let mut frontier: HashSet<Word> = [Word::identity()].into_iter().collect();
        let mut seen = frontier.clone();
        for _ in 0..k {
            let mut next = HashSet::new();
            for w in &frontier {
                for g in &all {
                    let p = w.concat(g);
                    if seen.insert(p.clone()) {
                        next.insert(p);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    #[test]
    fn agrees_with_naive_membership() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let gen_sets: Vec<Vec<Word>> = vec![
            vec![al.parse("a^2").unwrap(), al.parse("b").unwrap()],
            vec![al.parse("a b").unwrap(), al.parse("b a").unwrap()],
            vec![al.parse("a b a'").unwrap()],
            vec![al.parse("a^2 b").unwrap(), al.parse("b a").unwrap()],
        ];
        for gens in gen_sets {
            let aut = SubgroupAutomaton::build(&gens);
            let closure = naive_closure(&gens, 6);
            let wide = naive_closure(&gens, 8);
            for w in enumerate_words(2, 6) {
                if closure.contains(&w) {
                    assert!(aut.member(&w), "{w:?} should be a member");
                }
            }
            // Short members need few generator factors for these subgroups.
            for w in enumerate_words(2, 4) {
                if aut.member(&w) {
                    assert!(wide.contains(&w), "{w:?}");
                }
            }
        }
    }
}
