//! Lexicons and sentence-to-automaton conversion.
//!
//! A lexicon maps surface forms to sets of analyses (label sequences). A
//! sentence of `k` tokens becomes an acyclic automaton with boundary states
//! `0..=k` — state `j` is "the first `j` tokens are read" — and one branch
//! per analysis between consecutive boundaries, with fresh intermediate
//! states for analyses longer than one label. The automaton's paths are
//! exactly the analysis combinations of the sentence.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::automaton::{Automaton, PreconditionError, StateId};
use crate::determinize::determinize;
use crate::label::{Label, LabelError, UNKNOWN_TEXT, WILDCARD_TEXT};
use crate::paths::count_paths;

/// Surface forms mapped to their analyses. Duplicate lines merge; duplicate
/// analyses collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, BTreeSet<Vec<Label>>>,
}

impl Lexicon {
    pub fn analyses(&self, surface: &str) -> Option<&BTreeSet<Vec<Label>>> {
        self.entries.get(surface)
    }

    /// Number of distinct surface forms.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Reasons a lexicon line is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexParseErrorKind {
    #[error("expected '<surface>\\t<label> [label ...]'")]
    MissingTab,
    #[error("surface form is empty")]
    EmptySurface,
    #[error("surface form {0:?} contains whitespace")]
    SurfaceWithWhitespace(String),
    #[error("analysis is empty")]
    EmptyAnalysis,
    #[error("invalid label: {0}")]
    BadLabel(#[from] LabelError),
    #[error("label {0:?} is reserved and cannot appear in an analysis")]
    ReservedLabel(String),
}

/// A lexicon parse failure at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct LexParseError {
    pub line: usize,
    pub kind: LexParseErrorKind,
}

fn lex_err(line: usize, kind: LexParseErrorKind) -> LexParseError {
    LexParseError { line, kind }
}

/// Parses the `.lex` text format: one `surface<TAB>label [label ...]` entry
/// per line, `#` starting a comment, blank lines ignored. The reserved
/// labels `<?>` and `<UNK>` may not appear in analyses.
pub fn parse_lexicon(input: &str) -> Result<Lexicon, LexParseError> {
    let mut entries: BTreeMap<String, BTreeSet<Vec<Label>>> = BTreeMap::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some((surface_raw, analysis_raw)) = line.split_once('\t') else {
            return Err(lex_err(line_no, LexParseErrorKind::MissingTab));
        };
        let surface = surface_raw.trim();
        if surface.is_empty() {
            return Err(lex_err(line_no, LexParseErrorKind::EmptySurface));
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(lex_err(
                line_no,
                LexParseErrorKind::SurfaceWithWhitespace(surface.to_string()),
            ));
        }
        let mut analysis = Vec::new();
        for token in analysis_raw.split_whitespace() {
            if token == WILDCARD_TEXT || token == UNKNOWN_TEXT {
                return Err(lex_err(
                    line_no,
                    LexParseErrorKind::ReservedLabel(token.to_string()),
                ));
            }
            let label = Label::new(token).map_err(|e| lex_err(line_no, e.into()))?;
            analysis.push(label);
        }
        if analysis.is_empty() {
            return Err(lex_err(line_no, LexParseErrorKind::EmptyAnalysis));
        }
        entries
            .entry(surface.to_string())
            .or_default()
            .insert(analysis);
    }
    Ok(Lexicon { entries })
}

/// One sentence token resolved against a lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzedToken {
    pub surface: String,
    /// The analyses used for the automaton; for an unknown word under the
    /// permissive policy this is the single two-label analysis
    /// `<UNK> <surface>`.
    pub analyses: BTreeSet<Vec<Label>>,
    /// False iff the permissive unknown-word policy was applied.
    pub known: bool,
}

/// Reasons a sentence cannot be turned into a text automaton.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("token {index} {surface:?} is not in the lexicon")]
    UnknownToken { index: usize, surface: String },
    #[error("token {surface:?} cannot be used as a label: {source}")]
    UnusableSurface {
        surface: String,
        source: LabelError,
    },
}

/// Resolves each token against the lexicon. Unknown tokens error under
/// `strict`; otherwise they receive the analysis `<UNK> <surface>`, which
/// errors only if the surface itself cannot be a label.
pub fn analyze_tokens(
    tokens: &[&str],
    lexicon: &Lexicon,
    strict: bool,
) -> Result<Vec<AnalyzedToken>, TextError> {
    if tokens.is_empty() {
        return Err(TextError::EmptySentence);
    }
    tokens
        .iter()
        .enumerate()
        .map(|(index, &surface)| match lexicon.analyses(surface) {
            Some(analyses) => Ok(AnalyzedToken {
                surface: surface.to_string(),
                analyses: analyses.clone(),
                known: true,
            }),
            None if strict => Err(TextError::UnknownToken {
                index,
                surface: surface.to_string(),
            }),
            None => {
                let surface_label =
                    Label::new(surface).map_err(|source| TextError::UnusableSurface {
                        surface: surface.to_string(),
                        source,
                    })?;
                Ok(AnalyzedToken {
                    surface: surface.to_string(),
                    analyses: [vec![Label::unknown(), surface_label]].into_iter().collect(),
                    known: false,
                })
            }
        })
        .collect()
}

/// Builds the text automaton of a sentence: boundary states `0..=k`, one
/// path per analysis combination, final state `k`.
pub fn build_text_automaton(
    tokens: &[&str],
    lexicon: &Lexicon,
    strict: bool,
) -> Result<Automaton, TextError> {
    let analyzed = analyze_tokens(tokens, lexicon, strict)?;
    let k = analyzed.len() as StateId;
    let mut next_id = k + 1;
    let mut transitions: Vec<(StateId, Label, StateId)> = Vec::new();
    for (j, token) in analyzed.iter().enumerate() {
        let (from, to) = (j as StateId, j as StateId + 1);
        for analysis in &token.analyses {
            let mut cur = from;
            for (pos, &label) in analysis.iter().enumerate() {
                let dst = if pos + 1 == analysis.len() {
                    to
                } else {
                    let fresh = next_id;
                    next_id += 1;
                    fresh
                };
                transitions.push((cur, label, dst));
                cur = dst;
            }
        }
    }
    Ok(Automaton::from_parts(next_id, 0, [k], transitions)
        .expect("boundary and intermediate ids are dense"))
}

/// Path-count comparison of a text automaton before and after pruning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbiguityReport {
    /// Distinct analysis sequences before (parallel duplicates collapse).
    pub paths_before: u64,
    /// Distinct analysis sequences after.
    pub paths_after: u64,
    /// `paths_after / paths_before`; 1.0 when both are zero, infinite when
    /// only the denominator is zero.
    pub ratio: f64,
}

/// Counts distinct accepted sequences on both machines (determinizing where
/// needed, so parallel equal paths are not double-counted) and reports the
/// reduction ratio. Errors on cyclic input.
pub fn ambiguity_report(
    before: &Automaton,
    after: &Automaton,
) -> Result<AmbiguityReport, PreconditionError> {
    let count = |a: &Automaton| -> Result<u64, PreconditionError> {
        if !a.is_acyclic() {
            return Err(PreconditionError::Cyclic);
        }
        let det = if a.is_deterministic() {
            a.clone()
        } else {
            determinize(a)
        };
        Ok(count_paths(&det, 0)
            .path_count
            .expect("acyclic automata have finite path counts"))
    };
    let paths_before = count(before)?;
    let paths_after = count(after)?;
    let ratio = if paths_before == 0 {
        if paths_after == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        paths_after as f64 / paths_before as f64
    };
    Ok(AmbiguityReport {
        paths_before,
        paths_after,
        ratio,
    })
}
