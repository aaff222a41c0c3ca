use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gog::GraphOfGroups;
use crate::mgraph::MarkedGraph;
use crate::scalar::Scalar;
use crate::words::{Alphabet, Word};

/// Where an oracle's values come from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Mgraph { label: String },
    Gog { label: String },
    Sum { left: Box<Provenance>, right: Box<Provenance> },
    Scaled { factor: String, inner: Box<Provenance> },
    DerivedBased { inner: Box<Provenance>, g: String, h: String },
    Custom { label: String },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Mgraph { label } => write!(f, "mgraph:{label}"),
            Provenance::Gog { label } => write!(f, "gog:{label}"),
            Provenance::Sum { left, right } => write!(f, "({left} + {right})"),
            Provenance::Scaled { factor, inner } => write!(f, "{factor}·{inner}"),
            Provenance::DerivedBased { inner, g, h } => write!(f, "based[{inner}; {g}, {h}]"),
            Provenance::Custom { label } => write!(f, "{label}"),
        }
    }
}

/// A function from group elements to nonnegative scalars.
pub trait LengthOracle<S: Scalar>: Send + Sync {
    /// Value at `w`; `w` must be over [`LengthOracle::alphabet`].
    fn eval(&self, w: &Word) -> S;
    fn alphabet(&self) -> &Alphabet;
    fn provenance(&self) -> Provenance;

    fn checked_eval(&self, w: &Word) -> Result<S> {
        self.alphabet().check(w)?;
        Ok(self.eval(w))
    }
}

impl<S: Scalar, O: LengthOracle<S> + ?Sized> LengthOracle<S> for &O {
    fn eval(&self, w: &Word) -> S {
        (**self).eval(w)
    }
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
}

impl<S: Scalar, O: LengthOracle<S> + ?Sized> LengthOracle<S> for Box<O> {
    fn eval(&self, w: &Word) -> S {
        (**self).eval(w)
    }
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
}

impl<S: Scalar, O: LengthOracle<S> + ?Sized> LengthOracle<S> for Arc<O> {
    fn eval(&self, w: &Word) -> S {
        (**self).eval(w)
    }
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
}

impl<S: Scalar> LengthOracle<S> for MarkedGraph<S> {
    fn eval(&self, w: &Word) -> S {
        self.translation_length(w)
    }
    fn alphabet(&self) -> &Alphabet {
        MarkedGraph::alphabet(self)
    }
    fn provenance(&self) -> Provenance {
        Provenance::Mgraph {
            label: "marked graph".into(),
        }
    }
}

impl<S: Scalar> LengthOracle<S> for GraphOfGroups<S> {
    fn eval(&self, w: &Word) -> S {
        self.translation_length(w)
    }
    fn alphabet(&self) -> &Alphabet {
        GraphOfGroups::alphabet(self)
    }
    fn provenance(&self) -> Provenance {
        Provenance::Gog {
            label: "graph of groups".into(),
        }
    }
}

/// Wraps an oracle with a fixed provenance label.
pub struct Named<O> {
    pub inner: O,
    pub provenance: Provenance,
}

impl<S: Scalar, O: LengthOracle<S>> LengthOracle<S> for Named<O> {
    fn eval(&self, w: &Word) -> S {
        self.inner.eval(w)
    }
    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }
    fn provenance(&self) -> Provenance {
        self.provenance.clone()
    }
}

/// Pointwise sum of two oracles over the same alphabet.
pub struct SumOracle<A, B> {
    left: A,
    right: B,
}

pub fn sum_oracle<S: Scalar, A: LengthOracle<S>, B: LengthOracle<S>>(
    left: A,
    right: B,
) -> Result<SumOracle<A, B>> {
    if left.alphabet() != right.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            left.alphabet().names(),
            right.alphabet().names()
        )));
    }
    Ok(SumOracle { left, right })
}

impl<S: Scalar, A: LengthOracle<S>, B: LengthOracle<S>> LengthOracle<S> for SumOracle<A, B> {
    fn eval(&self, w: &Word) -> S {
        self.left.eval(w) + self.right.eval(w)
    }
    fn alphabet(&self) -> &Alphabet {
        self.left.alphabet()
    }
    fn provenance(&self) -> Provenance {
        Provenance::Sum {
            left: Box::new(self.left.provenance()),
            right: Box::new(self.right.provenance()),
        }
    }
}

/// `factor · inner`.
pub struct ScaledOracle<O, S> {
    inner: O,
    factor: S,
}

impl<O, S: Scalar> ScaledOracle<O, S> {
    pub fn new(inner: O, factor: S) -> Result<Self> {
        if !(factor > S::zero()) {
            return Err(Error::Domain("scale factor must be positive".into()));
        }
        Ok(ScaledOracle { inner, factor })
    }
}

impl<S: Scalar, O: LengthOracle<S>> LengthOracle<S> for ScaledOracle<O, S> {
    fn eval(&self, w: &Word) -> S {
        self.inner.eval(w) * self.factor.clone()
    }
    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }
    fn provenance(&self) -> Provenance {
        Provenance::Scaled {
            factor: self.factor.to_fraction(),
            inner: Box::new(self.inner.provenance()),
        }
    }
}

/// An oracle given by a closure.
pub struct FnOracle<F> {
    alphabet: Alphabet,
    label: String,
    f: F,
}

impl<F> FnOracle<F> {
    pub fn new(alphabet: Alphabet, label: impl Into<String>, f: F) -> Self {
        FnOracle {
            alphabet,
            label: label.into(),
            f,
        }
    }
}

impl<S: Scalar, F: Fn(&Word) -> S + Send + Sync> LengthOracle<S> for FnOracle<F> {
    fn eval(&self, w: &Word) -> S {
        (self.f)(w)
    }
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn provenance(&self) -> Provenance {
        Provenance::Custom {
            label: self.label.clone(),
        }
    }
}
