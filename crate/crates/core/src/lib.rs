pub mod cert;
pub mod corerect;
pub mod error;
pub mod gog;
pub mod io;
pub mod lfcore;
pub mod mgraph;
pub mod pipeline;
pub mod refine;
pub mod scalar;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use words::{Alphabet, CyclicWord, Letter, SubgroupAutomaton, Word};

/// Exact rationals with 64-bit numerator and denominator.
pub type Rational = num_rational::Ratio<i64>;
