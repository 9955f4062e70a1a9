use std::collections::BTreeSet;
use std::path::Path;

use lga_core::oracle::{enumerate_language, naive_contains_factor};
use lga_core::{compile_grammar, reference_scan_positive, Automaton, Label, Mode};

use crate::error::CliError;
use crate::util::{apply_matcher, load_fsa};

const ENUMERATION_CAP: usize = 10_000;

/// Re-derives the application result by brute force — enumerate every text
/// sequence, filter with the naive word-set oracle (negative) or the
/// reference scan (positive) — and compares languages exactly.
pub fn run(
    text_path: &Path,
    grammar_path: &Path,
    positive: bool,
    max_len: Option<usize>,
) -> Result<(), CliError> {
    let text = load_fsa(text_path)?;
    let grammar = load_fsa(grammar_path)?;
    for (path, a) in [(text_path, &text), (grammar_path, &grammar)] {
        if !a.is_acyclic() {
            return Err(CliError::Constraint(format!(
                "{}: oracle-check requires acyclic automata",
                path.display()
            )));
        }
    }
    let text_words = enumerate_bounded(&text, text_path)?;
    let grammar_words: BTreeSet<Vec<Label>> = enumerate_bounded(&grammar, grammar_path)?
        .into_iter()
        .collect();

    let (fa, _) = compile_grammar(&grammar)
        .map_err(|e| CliError::Invariant(format!("grammar failed to compile: {e}")))?;
    let mode = if positive { Mode::Positive } else { Mode::Negative };
    let (out, _) = apply_matcher(&text, &fa, mode, false)?;

    let len_ok = |w: &[Label]| max_len.is_none_or(|m| w.len() <= m);
    let candidates = text_words.iter().filter(|w| len_ok(w)).count();
    let expected: BTreeSet<Vec<Label>> = text_words
        .iter()
        .filter(|w| len_ok(w))
        .filter(|w| match mode {
            Mode::Negative => !naive_contains_factor(&grammar_words, w),
            Mode::Positive => reference_scan_positive(&fa, w),
        })
        .cloned()
        .collect();
    let actual: BTreeSet<Vec<Label>> = enumerate_language(&out, ENUMERATION_CAP + 1)
        .into_iter()
        .filter(|w| len_ok(w))
        .collect();

    if expected != actual {
        let witness = match expected.symmetric_difference(&actual).next() {
            Some(w) if expected.contains(w) => format!(
                "a length-{} sequence survives the oracle but not the application",
                w.len()
            ),
            Some(w) => format!(
                "a length-{} sequence survives the application but not the oracle",
                w.len()
            ),
            None => unreachable!("unequal sets differ somewhere"),
        };
        return Err(CliError::Invariant(format!(
            "oracle mismatch in {mode} mode: {witness}"
        )));
    }
    println!("ok: {} of {candidates} sequences survive ({mode})", expected.len());
    Ok(())
}

fn enumerate_bounded(a: &Automaton, path: &Path) -> Result<Vec<Vec<Label>>, CliError> {
    let words = enumerate_language(a, ENUMERATION_CAP + 1);
    if words.len() > ENUMERATION_CAP {
        return Err(CliError::Constraint(format!(
            "{}: more than {ENUMERATION_CAP} distinct sequences — too large for the brute-force oracle",
            path.display()
        )));
    }
    Ok(words)
}
