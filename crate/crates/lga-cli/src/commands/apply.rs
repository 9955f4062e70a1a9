use std::path::Path;

use lga_core::{serialize_fsa, ApplyStats, Automaton, Mode};

use crate::error::CliError;
use crate::util::{apply_matcher, load_fsa, load_fsm3, stats_object, write_atomic};

pub fn run(
    text_path: &Path,
    matcher_path: &Path,
    positive: bool,
    no_minimize: bool,
    output: &Path,
    stats_path: Option<&Path>,
) -> Result<(), CliError> {
    let text = load_fsa(text_path)?;
    let fa = load_fsm3(matcher_path)?;
    let mode = if positive { Mode::Positive } else { Mode::Negative };
    let (out, stats) = apply_matcher(&text, &fa, mode, !no_minimize)?;
    write_atomic(output, &serialize_fsa(&out))?;
    if let Some(path) = stats_path {
        write_atomic(path, &stats_json(&out, &stats))?;
    }
    Ok(())
}

/// The stats-file payload: the output automaton's statistics object plus
/// the application-specific fields.
fn stats_json(out: &Automaton, stats: &ApplyStats) -> String {
    let null = serde_json::Value::Null;
    let mut object = stats_object(out);
    object.insert(
        "dropped_transitions".into(),
        stats.dropped_transitions.into(),
    );
    object.insert(
        "paths_in".into(),
        stats.paths_in.map_or(null.clone(), Into::into),
    );
    object.insert("paths_out".into(), stats.paths_out.map_or(null, Into::into));
    object.insert("mode".into(), stats.mode.to_string().into());
    let mut text = serde_json::Value::Object(object).to_string();
    text.push('\n');
    text
}
