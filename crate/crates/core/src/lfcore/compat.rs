use rayon::prelude::*;

use super::classify::{classify_pair, pair_values, PairClass, PairKind};
use super::oracle::LengthOracle;
use super::pairs::{canonical_pair_count, find_first_pair};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatVerdict<S> {
    /// The pair lies in `O^ℓ ∩ D^m` or `D^ℓ ∩ O^m`.
    IncompatibleCombinatorics {
        g: Word,
        h: Word,
        class_l: PairClass<S>,
        class_m: PairClass<S>,
    },
    /// The pair overlaps for both, with opposite strict orderings.
    IncoherentOrientation {
        g: Word,
        h: Word,
        class_l: PairClass<S>,
        class_m: PairClass<S>,
    },
    /// No witness among the pairs checked; says nothing beyond them.
    CompatibleUpToBound { pairs_checked: u128 },
}

impl<S: Scalar> CompatVerdict<S> {
    pub fn is_compatible_up_to_bound(&self) -> bool {
        matches!(self, CompatVerdict::CompatibleUpToBound { .. })
    }

    pub fn witness(&self) -> Option<(&Word, &Word)> {
        match self {
            CompatVerdict::IncompatibleCombinatorics { g, h, .. }
            | CompatVerdict::IncoherentOrientation { g, h, .. } => Some((g, h)),
            CompatVerdict::CompatibleUpToBound { .. } => None,
        }
    }

    /// Re-derives the witness from the two oracles with [`classify_pair`].
    pub fn recheck<L, M>(&self, l: &L, m: &M) -> Result<()>
    where
        L: LengthOracle<S> + ?Sized,
        M: LengthOracle<S> + ?Sized,
    {
        let Some((g, h)) = self.witness() else {
            return Ok(());
        };
        let cl = classify_pair(l, g, h)?;
        let cm = classify_pair(m, g, h)?;
        match (self, witness_kind(&cl, &cm)) {
            (CompatVerdict::IncompatibleCombinatorics { .. }, Some(WitnessKind::Combinatorics))
            | (CompatVerdict::IncoherentOrientation { .. }, Some(WitnessKind::Orientation)) => {
                Ok(())
            }
            _ => Err(Error::Certificate(format!(
                "pair is classified {:?}/{:?} for the two oracles",
                cl.kind, cm.kind
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WitnessKind {
    Combinatorics,
    Orientation,
}

fn witness_kind<S: Scalar>(cl: &PairClass<S>, cm: &PairClass<S>) -> Option<WitnessKind> {
    use PairKind::*;
    match (cl.kind, cm.kind) {
        (Overlap, Disjoint) | (Disjoint, Overlap) => Some(WitnessKind::Combinatorics),
        (Overlap, Overlap) if cl.orientation() != cm.orientation() => Some(WitnessKind::Orientation),
        _ => None,
    }
}

fn test_pair<S, L, M>(l: &L, m: &M, g: &Word, h: &Word) -> Option<CompatVerdict<S>>
where
    S: Scalar,
    L: LengthOracle<S> + ?Sized,
    M: LengthOracle<S> + ?Sized,
{
    let cl = pair_values(l, g, h);
    if cl.kind == PairKind::Neither {
        return None;
    }
    let cm = pair_values(m, g, h);
    let (g, h) = (g.clone(), h.clone());
    match witness_kind(&cl, &cm)? {
        WitnessKind::Combinatorics => Some(CompatVerdict::IncompatibleCombinatorics {
            g,
            h,
            class_l: cl,
            class_m: cm,
        }),
        WitnessKind::Orientation => Some(CompatVerdict::IncoherentOrientation {
            g,
            h,
            class_l: cl,
            class_m: cm,
        }),
    }
}

fn same_alphabet<S: Scalar, L, M>(l: &L, m: &M) -> Result<()>
where
    L: LengthOracle<S> + ?Sized,
    M: LengthOracle<S> + ?Sized,
{
    if l.alphabet() != m.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            l.alphabet().names(),
            m.alphabet().names()
        )));
    }
    Ok(())
}

/// Scans `pairs` in the given order and returns the first witness.
pub fn compatible_on<S, L, M>(l: &L, m: &M, pairs: &[(Word, Word)]) -> Result<CompatVerdict<S>>
where
    S: Scalar,
    L: LengthOracle<S> + ?Sized,
    M: LengthOracle<S> + ?Sized,
{
    same_alphabet(l, m)?;
    for (g, h) in pairs {
        l.alphabet().check(g)?;
        l.alphabet().check(h)?;
    }
    let hit = pairs
        .par_iter()
        .filter(|(g, h)| g != h)
        .find_map_first(|(g, h)| test_pair(l, m, g, h));
    Ok(hit.unwrap_or(CompatVerdict::CompatibleUpToBound {
        pairs_checked: pairs.iter().filter(|(g, h)| g != h).count() as u128,
    }))
}

/// [`compatible_on`] over all canonical pairs of words of length `≤ max_len`.
pub fn compatible_on_words<S, L, M>(l: &L, m: &M, max_len: usize) -> Result<CompatVerdict<S>>
where
    S: Scalar,
    L: LengthOracle<S> + ?Sized,
    M: LengthOracle<S> + ?Sized,
{
    same_alphabet(l, m)?;
    let rank = l.alphabet().rank();
    Ok(
        match find_first_pair(rank, max_len, |g, h| test_pair(l, m, g, h)) {
            Some((_, _, v)) => v,
            None => CompatVerdict::CompatibleUpToBound {
                pairs_checked: canonical_pair_count(rank, max_len),
            },
        },
    )
}
