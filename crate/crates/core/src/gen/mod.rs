//! Instance generation: seeded streams of valid instances, enumeration of
//! integer conjugate exponents, mutations for negative controls,
//! counterexample search with shrinking, and tightness search.

mod enumerate;
mod instances;
mod mutate;
mod rng;
mod search;
mod spec;

pub use enumerate::{enumerate_integer_conjugate_tuples, exponents_from_weights, MAX_ENUMERATION_M};
pub use instances::{
    gen_conjugate_exponents_rational, gen_entry, gen_exponents, gen_indexed, gen_instance,
    gen_matrix, gen_polygon_and_transversal, gen_sorted_matrix, gen_stream, GEOMETRY_ATTEMPTS,
};
pub use mutate::{mutate_to_false, MutatedInstance, MutationKind};
pub use rng::{instance_seed, Seed, SplitMix64};
pub use search::{
    counterexample_search, shrink, tightness_search, Counterexample, SearchOutcome, ShrinkStep,
    TightnessResult, MAX_SHRINK_STEPS,
};
pub use spec::{ExponentMode, GenSpec};
