//! Finite-state toolkit for local-grammar disambiguation.
//!
//! The pipeline in one sentence: compile a finite set of label sequences
//! (a *local grammar*) into a failure-function-augmented matcher
//! ([`build_factor_matcher`]), then run that matcher over the paths of an
//! acyclic *text automaton* — the analyses of a sentence — removing either
//! every path containing a forbidden factor ([`apply_negative`]) or every
//! path that abandons a mandatory pattern midway ([`apply_positive`]).
//!
//! Supporting cast:
//!
//! * [`automaton`] — the shared automaton type plus trim/classify;
//! * [`determinize`] / [`minimize`] — subset construction and partition
//!   refinement, both canonical in their numbering;
//! * [`paths`] — path counting, bounded language equality, isomorphism;
//! * [`codec`] / [`matcher`] — the `.fsa` and `.fsm3` text formats;
//! * [`text`] — lexicons and sentence-to-automaton conversion;
//! * [`oracle`] — deliberately naive reference implementations used to
//!   cross-check everything above;
//! * [`random`] — seeded instance generators for benchmarks and property
//!   tests.

pub mod apply;
pub mod automaton;
pub mod codec;
pub mod determinize;
pub mod label;
pub mod matcher;
pub mod minimize;
pub mod oracle;
pub mod paths;
pub mod random;
pub mod text;

#[cfg(test)]
pub(crate) mod testutil;

pub use apply::{
    apply_negative, apply_positive, compile_grammar, disambiguate, reference_scan_positive,
    ApplyStats, Mode,
};
pub use automaton::{trim, Automaton, AutomatonError, Classification, PreconditionError, StateId};
pub use codec::{parse_fsa, serialize_fsa, FsaParseError, FsaParseErrorKind};
pub use determinize::determinize;
pub use label::{Label, LabelError, UNKNOWN_TEXT, WILDCARD_TEXT};
pub use matcher::{
    build_factor_matcher, parse_fsm3, serialize_fsm3, AlphabetError, BuildTrace,
    FailureAutomaton, Fsm3ParseError, Fsm3ParseErrorKind, Lookup, Recognition, ScanMetrics,
};
pub use minimize::minimize;
pub use paths::{
    count_paths, isomorphic, languages_equal_bounded, longest_accepted_len, PathReport,
};
pub use text::{
    ambiguity_report, analyze_tokens, build_text_automaton, parse_lexicon, AmbiguityReport,
    AnalyzedToken, LexParseError, LexParseErrorKind, Lexicon, TextError,
};
pub use random::{random_acyclic_automaton, random_instance, random_word_set, RandomSpec, RandomSpecError};
