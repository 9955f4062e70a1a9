//! The `.fsa` text format.
//!
//! ```text
//! # comments run to end of line
//! lga-fsa v1
//! initial 0
//! final 3            # zero or more lines, each listing one or more ids
//! 0 1 a              # <src> <dst> <label>
//! ```
//!
//! Declared state ids may be arbitrary non-negative integers; parsing
//! renumbers them densely, preserving their numeric order. Serialization
//! emits the canonical form: header, `initial`, one `final` line (omitted
//! when the final set is empty), then transitions sorted by
//! (source, label, target). Parsing the serialization of an automaton gives
//! back an equal automaton.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automaton::{Automaton, StateId};
use crate::label::{Label, LabelError};

/// A `.fsa` parse failure, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct FsaParseError {
    pub line: usize,
    pub kind: FsaParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FsaParseErrorKind {
    MissingHeader,
    BadHeader(String),
    MissingInitial,
    DuplicateInitial,
    BadStateId(String),
    BadLabel(LabelError),
    MalformedLine(String),
    DuplicateTransition(u64, String, u64),
    EmptyFinalLine,
}

impl fmt::Display for FsaParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FsaParseErrorKind::*;
        match self {
            MissingHeader => write!(f, "expected header `lga-fsa v1`"),
            BadHeader(got) => write!(f, "bad header {got:?}, expected `lga-fsa v1`"),
            MissingInitial => write!(f, "expected `initial <id>` after the header"),
            DuplicateInitial => write!(f, "duplicate `initial` line"),
            BadStateId(tok) => write!(f, "bad state id {tok:?}"),
            BadLabel(err) => write!(f, "{err}"),
            MalformedLine(line) => {
                write!(f, "malformed line {line:?}, expected `<src> <dst> <label>`")
            }
            DuplicateTransition(src, label, dst) => {
                write!(f, "duplicate transition {src} -{label}-> {dst}")
            }
            EmptyFinalLine => write!(f, "`final` line lists no states"),
        }
    }
}

const HEADER: &str = "lga-fsa v1";

/// Yields `(1-based line number, content)` for every line that still has
/// content after stripping `#` comments and surrounding whitespace.
pub(crate) fn significant_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input.lines().enumerate().filter_map(|(idx, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((idx + 1, line))
        }
    })
}

fn parse_id(token: &str, line: usize) -> Result<u64, FsaParseError> {
    token.parse::<u64>().map_err(|_| FsaParseError {
        line,
        kind: FsaParseErrorKind::BadStateId(token.to_string()),
    })
}

/// Parses the `.fsa` text format.
pub fn parse_fsa(input: &str) -> Result<Automaton, FsaParseError> {
    let mut lines = significant_lines(input);
    let header_error_line = 1;
    match lines.next() {
        None => {
            return Err(FsaParseError {
                line: header_error_line,
                kind: FsaParseErrorKind::MissingHeader,
            })
        }
        Some((line, text)) if text != HEADER => {
            return Err(FsaParseError {
                line,
                kind: FsaParseErrorKind::BadHeader(text.to_string()),
            })
        }
        Some(_) => {}
    }

    // The line right after the header must declare the initial state.
    let initial = match lines.next() {
        Some((line, text)) => {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            if tokens[0] != "initial" {
                return Err(FsaParseError {
                    line,
                    kind: FsaParseErrorKind::MissingInitial,
                });
            }
            if tokens.len() != 2 {
                return Err(FsaParseError {
                    line,
                    kind: FsaParseErrorKind::MalformedLine(text.to_string()),
                });
            }
            parse_id(tokens[1], line)?
        }
        None => {
            return Err(FsaParseError {
                line: header_error_line,
                kind: FsaParseErrorKind::MissingInitial,
            })
        }
    };

    let mut finals: BTreeSet<u64> = BTreeSet::new();
    let mut transitions: Vec<(u64, Label, u64)> = Vec::new();
    let mut seen: BTreeSet<(u64, Label, u64)> = BTreeSet::new();
    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match tokens[0] {
            "initial" => {
                return Err(FsaParseError {
                    line,
                    kind: FsaParseErrorKind::DuplicateInitial,
                });
            }
            "final" => {
                if tokens.len() == 1 {
                    return Err(FsaParseError {
                        line,
                        kind: FsaParseErrorKind::EmptyFinalLine,
                    });
                }
                for token in &tokens[1..] {
                    finals.insert(parse_id(token, line)?);
                }
            }
            _ => {
                if tokens.len() != 3 {
                    return Err(FsaParseError {
                        line,
                        kind: FsaParseErrorKind::MalformedLine(text.to_string()),
                    });
                }
                let src = parse_id(tokens[0], line)?;
                let dst = parse_id(tokens[1], line)?;
                let label = Label::new(tokens[2]).map_err(|e| FsaParseError {
                    line,
                    kind: FsaParseErrorKind::BadLabel(e),
                })?;
                if !seen.insert((src, label, dst)) {
                    return Err(FsaParseError {
                        line,
                        kind: FsaParseErrorKind::DuplicateTransition(
                            src,
                            label.as_str().to_string(),
                            dst,
                        ),
                    });
                }
                transitions.push((src, label, dst));
            }
        }
    }

    // Dense renumbering, preserving the numeric order of declared ids.
    let mut declared: BTreeSet<u64> = BTreeSet::new();
    declared.insert(initial);
    declared.extend(finals.iter().copied());
    for &(src, _, dst) in &transitions {
        declared.insert(src);
        declared.insert(dst);
    }
    let id_map: BTreeMap<u64, StateId> = declared
        .iter()
        .enumerate()
        .map(|(rank, &id)| (id, rank as StateId))
        .collect();
    Ok(Automaton::from_parts(
        declared.len() as u32,
        id_map[&initial],
        finals.iter().map(|f| id_map[f]),
        transitions
            .iter()
            .map(|&(src, label, dst)| (id_map[&src], label, id_map[&dst])),
    )
    .expect("dense renumbering keeps ids in range"))
}

/// Serializes an automaton in the canonical `.fsa` form.
pub fn serialize_fsa(a: &Automaton) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("initial {}\n", a.initial()));
    if !a.finals().is_empty() {
        out.push_str("final");
        for f in a.finals() {
            out.push_str(&format!(" {f}"));
        }
        out.push('\n');
    }
    for (src, label, dst) in a.transition_triples() {
        out.push_str(&format!("{src} {dst} {label}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{demo_grammar, FIG6_FSA};

    #[test]
    fn parses_the_demo_grammar_fixture() {
        let a = parse_fsa(FIG6_FSA).unwrap();
        assert_eq!(a.state_count(), 4);
        assert_eq!(a.transition_count(), 7);
        assert_eq!(a.finals().iter().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(a, demo_grammar());
    }

    #[test]
    fn round_trip_is_identity_on_normalized_text() {
        let a = parse_fsa(FIG6_FSA).unwrap();
        let text = serialize_fsa(&a);
        let b = parse_fsa(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(serialize_fsa(&b), text);
    }

    #[test]
    fn renumbers_sparse_ids_preserving_order() {
        let input = "lga-fsa v1\ninitial 5\nfinal 30\n5 10 x\n10 30 y\n";
        let a = parse_fsa(input).unwrap();
        assert_eq!(a.state_count(), 3);
        assert_eq!(a.initial(), 0);
        assert!(a.is_final(2));
        let text = serialize_fsa(&a);
        assert!(text.contains("0 1 x\n1 2 y\n"));
    }

    #[test]
    fn missing_initial_is_a_header_error() {
        let err = parse_fsa("lga-fsa v1\nfinal 0\n").unwrap_err();
        assert_eq!(err.kind, FsaParseErrorKind::MissingInitial);
    }

    #[test]
    fn missing_header_is_reported_at_line_one() {
        let err = parse_fsa("# only a comment\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.kind, FsaParseErrorKind::MissingHeader);
        let err = parse_fsa("initial 0\n").unwrap_err();
        assert!(matches!(err.kind, FsaParseErrorKind::BadHeader(_)));
    }

    #[test]
    fn duplicate_transition_is_rejected_with_line() {
        let err = parse_fsa("lga-fsa v1\ninitial 0\nfinal 1\n0 1 a\n0 1 a\n").unwrap_err();
        assert_eq!(err.line, 5);
        assert!(matches!(err.kind, FsaParseErrorKind::DuplicateTransition(0, _, 1)));
    }

    #[test]
    fn reserved_label_misuse_is_rejected() {
        let err = parse_fsa("lga-fsa v1\ninitial 0\nfinal 1\n0 1 <eps>\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(matches!(
            err.kind,
            FsaParseErrorKind::BadLabel(LabelError::Reserved(_))
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let input = "# grammar\nlga-fsa v1\n\ninitial 0   # start\nfinal 1\n0 1 a # arc\n";
        let a = parse_fsa(input).unwrap();
        assert_eq!(a.state_count(), 2);
        assert_eq!(a.transition_count(), 1);
    }

    #[test]
    fn wildcard_and_unknown_labels_parse() {
        let a = parse_fsa("lga-fsa v1\ninitial 0\nfinal 1\n0 1 <?>\n0 1 <UNK>\n").unwrap();
        assert_eq!(a.transition_count(), 2);
    }
}
