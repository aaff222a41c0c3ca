//! Length-function calculus: pair classification, axioms, compatibility,
//! good pairs and based length functions derived from translation lengths.

mod axioms;
mod classify;
mod compat;
mod dagger;
mod goodpair;
mod oracle;
mod pairs;

pub use axioms::{check_axioms, Axiom, AxiomReport, AxiomVerdict, Violation};
pub use classify::{
    char_distance, classify_pair, overlap_orientation, pair_values, Orientation, PairClass,
    PairKind,
};
pub use compat::{compatible_on, compatible_on_words, CompatVerdict};
pub use dagger::{
    based_length_dagger, based_sum_identity, BasedSumReport, BasedSumViolation, DaggerOracle,
};
pub use goodpair::{
    good_pair_from_independent, is_good_pair, power_good_pair, simultaneous_good_pair,
    GoodPairCertificate, PowerGoodPair, SimultaneousGoodPair, INDEPENDENCE_ASSUMPTION,
};
pub use oracle::{
    sum_oracle, FnOracle, LengthOracle, Named, Provenance, ScaledOracle, SumOracle,
};
pub use pairs::{canonical_pair_count, canonical_pairs, find_first_pair, nontrivial_words};
