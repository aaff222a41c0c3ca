//! Shortlex enumeration of reduced and cyclically reduced words.

use super::word::{least_rotation, CyclicWord, Letter, Word};

/// Every freely reduced word of length `≤ max_len`, in shortlex order.
pub fn enumerate_words(rank: usize, max_len: usize) -> ReducedWords {
    ReducedWords {
        alphabet_size: 2 * rank as u32,
        max_len,
        codes: Vec::new(),
        fresh: true,
    }
}

/// One representative (the least rotation) of every conjugacy class with
/// cyclic length `≤ max_len`, in shortlex order, including the identity.
pub fn enumerate_cyclic_words(rank: usize, max_len: usize) -> impl Iterator<Item = CyclicWord> {
    enumerate_words(rank, max_len).filter_map(|w| {
        let l = w.letters();
        if !w.is_cyclically_reduced() || least_rotation(l) != 0 {
            return None;
        }
        Some(CyclicWord::from_canonical_unchecked(l.to_vec()))
    })
}

/// Number of reduced words of length exactly `n` in a free group of rank `r`.
pub fn reduced_count(rank: usize, n: usize) -> u128 {
    if n == 0 {
        1
    } else {
        2 * rank as u128 * (2 * rank as u128 - 1).pow(n as u32 - 1)
    }
}

pub struct ReducedWords {
    alphabet_size: u32,
    max_len: usize,
    codes: Vec<u32>,
    fresh: bool,
}

impl ReducedWords {
    fn smallest_after(&self, prev: Option<u32>) -> u32 {
        match prev {
            Some(p) if p ^ 1 == 0 => 1,
            _ => 0,
        }
    }

    /// Advances `codes` to the next reduced word of the same length.
    fn advance_same_length(&mut self) -> bool {
        let n = self.codes.len();
        let mut i = n;
        while i > 0 {
            i -= 1;
            let prev = if i == 0 { None } else { Some(self.codes[i - 1]) };
            let mut c = self.codes[i] + 1;
            if prev.is_some_and(|p| c == p ^ 1) {
                c += 1;
            }
            if c < self.alphabet_size {
                self.codes[i] = c;
                for j in i + 1..n {
                    self.codes[j] = self.smallest_after(Some(self.codes[j - 1]));
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Word {
        Word::from_reduced_unchecked(self.codes.iter().map(|&c| Letter::from_code(c)).collect())
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.alphabet_size == 0 {
            if self.fresh {
                self.fresh = false;
                return Some(Word::identity());
            }
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(Word::identity());
        }
        if self.advance_same_length() {
            return Some(self.current());
        }
        let n = self.codes.len() + 1;
        if n > self.max_len {
            return None;
        }
        self.codes.clear();
        for _ in 0..n {
            let prev = self.codes.last().copied();
            self.codes.push(self.smallest_after(prev));
        }
        Some(self.current())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn tiny_rank_one() {
        let ws: Vec<Word> = enumerate_words(1, 1).collect();
        assert_eq!(
            ws,
            vec![
                Word::identity(),
                Word::generator(0),
                Word::generator(0).inverse()
            ]
        );
    }

    #[test]
    fn counts_match_growth_formula() {
        assert_eq!(enumerate_words(2, 1).count(), 5);
        assert_eq!(enumerate_words(2, 2).count(), 17);
        for rank in 1..=3 {
            for n in 0..=4 {
                let total: u128 = (0..=n).map(|k| reduced_count(rank, k)).sum();
                let ws: Vec<Word> = enumerate_words(rank, n).collect();
                assert_eq!(ws.len() as u128, total);
                let set: HashSet<&Word> = ws.iter().collect();
                assert_eq!(set.len(), ws.len());
            }
        }
    }

    #[test]
    fn emitted_in_shortlex_order() {
        let ws: Vec<Word> = enumerate_words(2, 4).collect();
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn cyclic_classes_by_brute_force() {
        for rank in 1..=2 {
            for n in 0..=5 {
                let mut brute: HashSet<CyclicWord> = HashSet::new();
                for w in enumerate_words(rank, n) {
                    let c = CyclicWord::of(&w);
                    if c.len() <= n {
                        brute.insert(c);
                    }
                }
                let listed: Vec<CyclicWord> = enumerate_cyclic_words(rank, n).collect();
                let set: HashSet<CyclicWord> = listed.iter().cloned().collect();
                assert_eq!(set.len(), listed.len());
                assert_eq!(set, brute);
            }
        }
    }

    #[test]
    fn rank_one_cyclic_classes() {
        let cs: Vec<usize> = enumerate_cyclic_words(1, 3).map(|c| c.len()).collect();
        assert_eq!(cs, vec![0, 1, 1, 2, 2, 3, 3]);
    }
}
