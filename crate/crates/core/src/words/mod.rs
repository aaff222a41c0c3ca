//! Free group words, conjugacy classes, enumeration and subgroup membership.

mod alphabet;
mod automaton;
mod enumerate;
mod word;

pub use alphabet::Alphabet;
pub use automaton::SubgroupAutomaton;
pub(crate) use automaton::fold_graph;
pub use enumerate::{enumerate_cyclic_words, enumerate_words, reduced_count, ReducedWords};
pub use word::{CyclicWord, Letter, Word};
