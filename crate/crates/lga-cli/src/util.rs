//! File plumbing and small helpers shared by the subcommands.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use lga_core::{
    apply_negative, apply_positive, count_paths, determinize, minimize, parse_fsa, parse_fsm3,
    ApplyStats, Automaton, FailureAutomaton, Label, Mode,
};

use crate::error::CliError;

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_fsa(path: &Path) -> Result<Automaton, CliError> {
    parse_fsa(&read_to_string(path)?).map_err(|e| CliError::parse(path, e))
}

pub fn load_fsm3(path: &Path) -> Result<FailureAutomaton, CliError> {
    parse_fsm3(&read_to_string(path)?).map_err(|e| CliError::parse(path, e))
}

/// Writes via a temp file in the target directory plus an atomic rename, so
/// a failed command never leaves a partial output file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .ok_or_else(|| io_err(std::io::Error::other("path has no file name")))?;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|source| {
        let _ = fs::remove_file(&tmp);
        io_err(source)
    })
}

/// All labels appearing on transitions of `a`.
pub fn label_set(a: &Automaton) -> BTreeSet<Label> {
    (0..a.state_count())
        .flat_map(|q| a.transitions(q).iter().map(|&(l, _)| l))
        .collect()
}

/// Applies a compiled matcher and, unless disabled, normalizes the result
/// to its minimal DFA, updating the output-side stats to match.
pub fn apply_matcher(
    text: &Automaton,
    fa: &FailureAutomaton,
    mode: Mode,
    minimize_result: bool,
) -> Result<(Automaton, ApplyStats), CliError> {
    let (mut out, mut stats) = match mode {
        Mode::Negative => apply_negative(text, fa),
        Mode::Positive => apply_positive(text, fa),
    };
    if minimize_result {
        let det = if out.is_deterministic() {
            out
        } else {
            determinize(&out)
        };
        out = minimize(&det)
            .map_err(|e| CliError::Invariant(format!("result minimization failed: {e}")))?;
        stats.states_out = out.state_count();
        stats.transitions_out = out.transition_count();
        stats.paths_out = count_paths(&out, 0).path_count;
    }
    Ok((out, stats))
}

/// The statistics object reported for an automaton: sizes, classification,
/// and the path count (`null` when a cycle lies on an accepting path).
pub fn stats_object(a: &Automaton) -> serde_json::Map<String, serde_json::Value> {
    let paths = count_paths(a, 0).path_count;
    let mut object = serde_json::Map::new();
    object.insert("states".into(), a.state_count().into());
    object.insert("transitions".into(), a.transition_count().into());
    object.insert("finals".into(), (a.finals().len() as u64).into());
    object.insert("acyclic".into(), a.is_acyclic().into());
    object.insert("deterministic".into(), a.is_deterministic().into());
    object.insert("paths".into(), paths.map_or(serde_json::Value::Null, Into::into));
    object.insert("labels".into(), (label_set(a).len() as u64).into());
    object
}

/// `#` starts a comment; returns the 1-based line number and the remaining
/// significant content for each non-blank line.
pub fn significant_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (i + 1, line)
        })
        .filter(|(_, line)| !line.is_empty())
}
