use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// A generator or its formal inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: u32, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub const fn positive(generator: u32) -> Self {
        Letter::new(generator, false)
    }

    pub const fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    /// Position in the canonical order: declaration order, each inverse right
    /// after its letter.
    pub const fn code(self) -> u32 {
        2 * self.generator + self.inverse as u32
    }

    pub const fn from_code(code: u32) -> Self {
        Letter::new(code / 2, code % 2 == 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}{}", self.generator, if self.inverse { "'" } else { "" })
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code().cmp(&other.code())
    }
}

/// A freely reduced word. Every constructor reduces.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<Letter>", from = "Vec<Letter>")]
pub struct Word {
    letters: Vec<Letter>,
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word::reduce(letters)
    }
}

impl From<Word> for Vec<Letter> {
    fn from(w: Word) -> Self {
        w.letters
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "Word(1)");
        }
        write!(f, "Word(")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l:?}")?;
        }
        write!(f, ")")
    }
}

/// Shortlex: shorter words first, then lexicographic in the canonical letter order.
impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(index: u32) -> Self {
        Word {
            letters: vec![Letter::positive(index)],
        }
    }

    /// Free reduction with a single stack pass.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[1] != p[0].inv()));
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<u32> {
        self.letters.iter().map(|l| l.generator).max()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// `u · self · u⁻¹`.
    pub fn conjugate(&self, u: &Word) -> Word {
        u.concat(self).concat(&u.inverse())
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let k = n.unsigned_abs();
        if k == 0 || base.is_identity() {
            return Word::identity();
        }
        let (core, conj) = base.cyclic_core();
        let mut letters = conj.letters.clone();
        for _ in 0..k {
            letters.extend_from_slice(&core.letters);
        }
        letters.extend(conj.inverse().letters);
        Word::reduce(letters)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) => self.letters.len() == 1 || *f != l.inv(),
            _ => true,
        }
    }

    /// Strips matching ends: returns `(c, u)` with `self = u c u⁻¹`, `c`
    /// cyclically reduced but not rotated.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inv() {
            k += 1;
        }
        let core = Word {
            letters: self.letters[k..n - k].to_vec(),
        };
        let conj = Word {
            letters: self.letters[..k].to_vec(),
        };
        (core, conj)
    }

    /// Returns the canonical cyclic representative `c` and a conjugator `u`
    /// with `self = u · c · u⁻¹`.
    pub fn cyclic_reduce(&self) -> (CyclicWord, Word) {
        let (core, conj) = self.cyclic_core();
        let shift = least_rotation(&core.letters);
        // core = p s, canonical = s p = p⁻¹ core p, so self = (u p) (s p) (u p)⁻¹.
        let p = Word {
            letters: core.letters[..shift].to_vec(),
        };
        let mut rotated = core.letters[shift..].to_vec();
        rotated.extend_from_slice(&core.letters[..shift]);
        (CyclicWord { letters: rotated }, conj.concat(&p))
    }

    /// The primitive root `r` and exponent `k ≥ 1` with `self = r^k`.
    pub fn root(&self) -> (Word, u64) {
        if self.is_identity() {
            return (Word::identity(), 1);
        }
        let (core, conj) = self.cyclic_core();
        let n = core.len();
        for p in 1..=n {
            if n % p == 0 && (p..n).all(|i| core.letters[i] == core.letters[i - p]) {
                let r = Word {
                    letters: core.letters[..p].to_vec(),
                };
                return (r.conjugate(&conj), (n / p) as u64);
            }
        }
        unreachable!("p = n always divides")
    }

    /// Letters used, without regard to sign.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.letters.iter().map(|l| l.generator)
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.concat(&rhs)
    }
}

/// Index of the lexicographically least rotation.
pub(crate) fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let mut best = 0;
    for cand in 1..n {
        for k in 0..n {
            let a = s[(cand + k) % n];
            let b = s[(best + k) % n];
            match a.cmp(&b) {
                Ordering::Less => {
                    best = cand;
                    break;
                }
                Ordering::Greater => break,
                Ordering::Equal => {}
            }
        }
    }
    best
}

/// A conjugacy class: the least rotation of a cyclically reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclic{:?}", self.as_word())
    }
}

impl CyclicWord {
    pub fn of(w: &Word) -> Self {
        w.cyclic_reduce().0
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn as_word(&self) -> Word {
        Word::from_reduced_unchecked(self.letters.clone())
    }

    pub(crate) fn from_canonical_unchecked(letters: Vec<Letter>) -> Self {
        CyclicWord { letters }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Letter {
        Letter::positive(0)
    }
    fn b() -> Letter {
        Letter::positive(1)
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce([a(), a().inv(), b()]).letters(), &[b()]);
        assert!(Word::reduce([]).is_identity());
        assert_eq!(
            Word::reduce([a(), b(), b().inv(), a()]).letters(),
            &[a(), a()]
        );
    }

    #[test]
    fn group_operations() {
        let ab = Word::reduce([a(), b()]);
        let b_inv_a = Word::reduce([b().inv(), a()]);
        assert_eq!(ab.concat(&b_inv_a).letters(), &[a(), a()]);
        assert_eq!(ab.inverse().letters(), &[b().inv(), a().inv()]);
        let conj = Word::generator(1).conjugate(&Word::generator(0));
        assert_eq!(conj.letters(), &[a(), b(), a().inv()]);
        assert_eq!(ab.conjugate(&Word::identity()), ab);
        assert_eq!(ab.inverse().inverse(), ab);
    }

    #[test]
    fn cyclic_reduce_examples() {
        let w = Word::reduce([a(), b(), a().inv()]);
        let (c, u) = w.cyclic_reduce();
        assert_eq!(c.letters(), &[b()]);
        assert_eq!(u.letters(), &[a()]);

        let w = Word::reduce([a(), b()]);
        let (c, u) = w.cyclic_reduce();
        assert_eq!(c.letters(), &[a(), b()]);
        assert!(u.is_identity());

        let w = Word::reduce([a(), a(), b(), a().inv(), a().inv()]);
        let (c, u) = w.cyclic_reduce();
        assert_eq!(c.letters(), &[b()]);
        assert_eq!(u.letters(), &[a(), a()]);
    }

    #[test]
    fn cyclic_reduce_rotates_into_conjugator() {
        // b a is rotated to a b; b a = b (a b) b⁻¹.
        let w = Word::reduce([b(), a()]);
        let (c, u) = w.cyclic_reduce();
        assert_eq!(c.letters(), &[a(), b()]);
        assert_eq!(c.as_word().conjugate(&u), w);
    }

    #[test]
    fn powers_and_roots() {
        let w = Word::reduce([a(), b(), a().inv()]);
        assert_eq!(w.pow(3).letters(), &[a(), b(), b(), b(), a().inv()]);
        assert_eq!(w.pow(-1), w.inverse());
        assert!(w.pow(0).is_identity());
        let (r, k) = w.pow(4).root();
        assert_eq!((r, k), (w.clone(), 4));
        let abab = Word::reduce([a(), b(), a(), b()]);
        assert_eq!(abab.root(), (Word::reduce([a(), b()]), 2));
    }

    #[test]
    fn shortlex_order() {
        let mut ws = vec![
            Word::reduce([b()]),
            Word::reduce([a(), a()]),
            Word::identity(),
            Word::reduce([a().inv()]),
            Word::reduce([a()]),
        ];
        ws.sort();
        assert_eq!(
            ws,
            vec![
                Word::identity(),
                Word::reduce([a()]),
                Word::reduce([a().inv()]),
                Word::reduce([b()]),
                Word::reduce([a(), a()]),
            ]
        );
    }
}
