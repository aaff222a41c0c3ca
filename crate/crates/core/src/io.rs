//! Loading tree descriptions and word lists from files.

use std::path::Path;

use crate::error::{Error, Result};
use crate::gog::GraphOfGroups;
use crate::lfcore::{LengthOracle, Provenance};
use crate::mgraph::MarkedGraph;
use crate::scalar::Scalar;
use crate::words::{Alphabet, Word};

/// A tree given either as a marked metric graph or as a graph of groups.
#[derive(Clone, Debug)]
pub enum TreeInput<S> {
    Marked(MarkedGraph<S>),
    Gog(GraphOfGroups<S>),
}

impl<S: Scalar> TreeInput<S> {
    /// Chooses the format from the top-level keys: `marking` for a marked
    /// graph, `alphabet` for a graph of groups.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::parse(1, 1, "expected a JSON object"))?;
        if obj.contains_key("marking") {
            Ok(TreeInput::Marked(MarkedGraph::from_json(text)?))
        } else if obj.contains_key("alphabet") {
            Ok(TreeInput::Gog(GraphOfGroups::from_json(text)?))
        } else {
            Err(Error::parse(
                1,
                1,
                "tree file needs a `marking` (marked graph) or `alphabet` (graph of groups) key",
            ))
        }
    }

    pub fn as_marked(&self) -> Option<&MarkedGraph<S>> {
        match self {
            TreeInput::Marked(t) => Some(t),
            TreeInput::Gog(_) => None,
        }
    }

    pub fn scaled(&self, factor: &S) -> Result<Self> {
        Ok(match self {
            TreeInput::Marked(t) => TreeInput::Marked(t.scaled(factor)?),
            TreeInput::Gog(t) => TreeInput::Gog(t.scaled(factor)?),
        })
    }
}

impl<S: Scalar> LengthOracle<S> for TreeInput<S> {
    fn eval(&self, w: &Word) -> S {
        match self {
            TreeInput::Marked(t) => t.translation_length(w),
            TreeInput::Gog(t) => t.translation_length(w),
        }
    }
    fn alphabet(&self) -> &Alphabet {
        match self {
            TreeInput::Marked(t) => t.alphabet(),
            TreeInput::Gog(t) => t.alphabet(),
        }
    }
    fn provenance(&self) -> Provenance {
        match self {
            TreeInput::Marked(t) => t.provenance(),
            TreeInput::Gog(t) => t.provenance(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_tree<S: Scalar>(path: &Path) -> Result<TreeInput<S>> {
    TreeInput::from_json(&read_text(path)?)
}

/// One word per line; blank lines and text after `#` are ignored.
pub fn parse_words(alphabet: &Alphabet, text: &str) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(alphabet.parse_at(body, i + 1)?);
    }
    Ok(out)
}
