//! Multidimensional continued fraction expansions realized as substitution
//! systems, with exact discrepancy and balance measurements.
//!
//! The pipeline factors a nonnegative integer vector `v` as
//! `v = M_1 ... M_n * t` through repeated continued-fraction steps, realizes
//! each matrix as a substitution whose incidence matrix it is, and rebuilds a
//! finite word with letter frequencies exactly `v / sum(v)`. The [`metrics`]
//! module measures how balanced those words are and [`sweep`] reproduces the
//! discrepancy statistics over all rational frequency triplets with a fixed
//! denominator.

pub mod error;
pub mod lattice;
pub mod metrics;
pub mod steps;
pub mod subst;
pub mod sweep;
pub mod wordgen;

pub use error::{Error, Result, StepError};
pub use lattice::{
    argsort_with_ties, FreqVector, Int, IntVector, Letter, ParikhVector, Rational, StepMatrix,
    Word,
};
pub use metrics::{
    balance, discrepancy, discrepancy_with, empirical_frequency, factor_complexity, report,
    tijdeman_bound, DiscrepancyConvention, MetricReport,
};
pub use steps::{
    expand, expand_with_rng, ExpansionStatus, ExpansionTrace, FallbackRule, RuleTag, StepOutcome,
};
pub use subst::Substitution;
pub use sweep::{
    dat_file_name, emit_dat, emit_records_jsonl, emit_table, enumerate_triplets, format_sig4,
    run_sweep, ternary_project, tijdeman_fraction, RecordStatus, StatSummary, SweepConfig,
    SweepOutput, SweepRecord,
};
pub use wordgen::{
    expand_float, generate_word, seed_letter, word_from_trace, FloatExpansion, GeneratedWord,
    FLOAT_DEPTH_DEFAULT, FLOAT_EPS_DEFAULT,
};
