use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::word::{CyclicWord, Letter, Word};
use crate::error::{Error, Result};

/// Named generators of a free group, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, u32>,
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(names: Vec<String>) -> Result<Self> {
        Alphabet::new(names)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<I, T>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("rank must be at least 1".into()));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::InvalidAlphabet(format!(
                    "`{n}` is not an identifier"
                )));
            }
            if index.insert(n.clone(), i as u32).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{n}`")));
            }
        }
        Ok(Alphabet { names, index })
    }

    /// `a, b, c, …` for small ranks, `x1, x2, …` beyond 26.
    pub fn standard(rank: usize) -> Self {
        let names: Vec<String> = if rank <= 26 {
            (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (1..=rank).map(|i| format!("x{i}")).collect()
        };
        Alphabet::new(names).expect("generated names are valid")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, generator: u32) -> &str {
        &self.names[generator as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.index_of(name)
            .map(Letter::positive)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g as usize >= self.rank() => Err(Error::AlphabetMismatch(format!(
                "word uses generator #{} but the alphabet has rank {}",
                g + 1,
                self.rank()
            ))),
            _ => Ok(()),
        }
    }

    /// Reduces a letter sequence after checking it against this alphabet.
    pub fn reduce(&self, raw: &[Letter]) -> Result<Word> {
        if let Some(l) = raw.iter().find(|l| l.generator as usize >= self.rank()) {
            return Err(Error::UnknownLetter(format!("#{}", l.generator + 1)));
        }
        Ok(Word::reduce(raw.iter().copied()))
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        self.parse_at(text, 1)
    }

    /// Parses one word; `line` is used for error positions.
    ///
    /// Syntax: letter names juxtaposed (whitespace optional when unambiguous,
    /// longest name wins), each optionally followed by `'`, `⁻¹`, `^-1`, `^n`
    /// or `^-n`. `1` and the empty string denote the identity.
    pub fn parse_at(&self, text: &str, line: usize) -> Result<Word> {
        let chars: Vec<char> = text.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        let mut seen_token = false;
        let mut identity_token = false;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '·' {
                i += 1;
                continue;
            }
            let column = i + 1;
            if c == '1' && !chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                identity_token = true;
                seen_token = true;
                i += 1;
                continue;
            }
            let gen = self.longest_name_at(&chars, i).ok_or_else(|| {
                let tail: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_alphanumeric() || **c == '_')
                    .collect();
                if tail.is_empty() {
                    Error::parse(line, column, format!("unexpected character `{c}`"))
                } else {
                    Error::parse(line, column, format!("unknown letter `{tail}`"))
                }
            })?;
            i += self.names[gen as usize].chars().count();
            let (exponent, next) = parse_exponent(&chars, i, line)?;
            i = next;
            let l = Letter::new(gen, exponent < 0);
            for _ in 0..exponent.unsigned_abs() {
                letters.push(l);
            }
            seen_token = true;
        }
        if identity_token && !letters.is_empty() {
            return Err(Error::parse(
                line,
                1,
                "`1` denotes the identity and cannot be combined with letters",
            ));
        }
        let _ = seen_token;
        Ok(Word::reduce(letters))
    }

    fn longest_name_at(&self, chars: &[char], i: usize) -> Option<u32> {
        let mut best: Option<(usize, u32)> = None;
        for (g, name) in self.names.iter().enumerate() {
            let n = name.chars().count();
            if i + n <= chars.len()
                && name.chars().zip(&chars[i..i + n]).all(|(a, b)| a == *b)
                && best.is_none_or(|(m, _)| n > m)
            {
                best = Some((n, g as u32));
            }
        }
        best.map(|(_, g)| g)
    }

    /// Space-separated names with `'` marking inverses; `1` for the identity.
    pub fn format(&self, w: &Word) -> String {
        self.format_letters(w.letters())
    }

    pub fn format_cyclic(&self, c: &CyclicWord) -> String {
        self.format_letters(c.letters())
    }

    fn format_letters(&self, letters: &[Letter]) -> String {
        if letters.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, l) in letters.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(self.name(l.generator));
            if l.inverse {
                out.push('\'');
            }
        }
        out
    }
}

/// Reads an optional exponent suffix starting at `i`.
fn parse_exponent(chars: &[char], mut i: usize, line: usize) -> Result<(i64, usize)> {
    let mut sign = 1i64;
    while i < chars.len() && chars[i] == '\'' {
        sign = -sign;
        i += 1;
    }
    if i + 1 < chars.len() && chars[i] == '⁻' && chars[i + 1] == '¹' {
        return Ok((-sign, i + 2));
    }
    if i < chars.len() && chars[i] == '^' {
        let start = i + 1;
        let mut j = start;
        if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
            j += 1;
        }
        let digits_start = j;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        if digits_start == j {
            return Err(Error::parse(line, i + 1, "expected an integer after `^`"));
        }
        let text: String = chars[start..j].iter().collect();
        let e: i64 = text
            .parse()
            .map_err(|_| Error::parse(line, start + 1, format!("bad exponent `{text}`")))?;
        if e.unsigned_abs() > 1 << 20 {
            return Err(Error::parse(line, start + 1, "exponent too large"));
        }
        return Ok((sign * e, j));
    }
    Ok((sign, i))
}
