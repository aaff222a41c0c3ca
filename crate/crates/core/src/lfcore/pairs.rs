//! Canonical order on ordered pairs of distinct nontrivial elements:
//! by `max(|g|, |h|)`, then `g`, then `h` in shortlex.

use rayon::prelude::*;

use crate::words::{enumerate_words, Word};

pub(crate) fn pair_key(g: &Word, h: &Word, i: usize, j: usize) -> (usize, usize, usize) {
    (g.len().max(h.len()), i, j)
}

/// Nontrivial reduced words of length `≤ max_len`, shortlex.
pub fn nontrivial_words(rank: usize, max_len: usize) -> Vec<Word> {
    enumerate_words(rank, max_len).skip(1).collect()
}

/// All canonical pairs over words of length `≤ max_len`, lazily.
pub fn canonical_pairs(rank: usize, max_len: usize) -> impl Iterator<Item = (Word, Word)> {
    let all = nontrivial_words(rank, max_len);
    (1..=max_len).flat_map(move |n| {
        let level: Vec<Word> = all.iter().take_while(|w| w.len() <= n).cloned().collect();
        let level2 = level.clone();
        level.into_iter().flat_map(move |g| {
            let row: Vec<(Word, Word)> = level2
                .iter()
                .filter(|h| **h != g && g.len().max(h.len()) == n)
                .map(|h| (g.clone(), h.clone()))
                .collect();
            row
        })
    })
}

/// Number of canonical pairs over words of length `≤ max_len`.
pub fn canonical_pair_count(rank: usize, max_len: usize) -> u128 {
    let n: u128 = (1..=max_len)
        .map(|k| crate::words::reduced_count(rank, k))
        .sum();
    n * n.saturating_sub(1)
}

/// First pair in canonical order where `f` returns `Some`.
pub fn find_first_pair<T, F>(rank: usize, max_len: usize, f: F) -> Option<(Word, Word, T)>
where
    T: Send,
    F: Fn(&Word, &Word) -> Option<T> + Sync,
{
    let all = nontrivial_words(rank, max_len);
    for n in 1..=max_len {
        let end = all.partition_point(|w| w.len() <= n);
        let level = &all[..end];
        let hit = level.par_iter().find_map_first(|g| {
            level
                .iter()
                .filter(|h| *h != g && g.len().max(h.len()) == n)
                .find_map(|h| f(g, h).map(|t| (g.clone(), h.clone(), t)))
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}
