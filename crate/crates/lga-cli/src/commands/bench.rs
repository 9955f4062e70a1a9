use std::time::Instant;

use lga_core::oracle::enumerate_language;
use lga_core::{compile_grammar, count_paths, random_instance, Mode, RandomSpec};

use crate::error::CliError;
use crate::util::apply_matcher;

pub fn run(
    sequences: u32,
    min_len: u32,
    alphabet: u32,
    grammar_states: u32,
    seed: u64,
    json: bool,
) -> Result<(), CliError> {
    let spec = RandomSpec {
        sequence_count: sequences,
        min_length: min_len,
        alphabet_size: alphabet,
        grammar_states,
        seed,
    };
    let (text, grammar) =
        random_instance(&spec).map_err(|e| CliError::Constraint(e.to_string()))?;
    let grammar_words = enumerate_language(&grammar, usize::MAX).len() as u64;

    let compile_start = Instant::now();
    let (fa, _) = compile_grammar(&grammar)
        .map_err(|e| CliError::Invariant(format!("generated grammar failed to compile: {e}")))?;
    let compile_ms = compile_start.elapsed().as_millis() as u64;

    let apply_start = Instant::now();
    let (result, stats) = apply_matcher(&text, &fa, Mode::Negative, true)?;
    let apply_ms = apply_start.elapsed().as_millis() as u64;

    let text_paths = count_paths(&text, 0)
        .path_count
        .expect("generated text automata are acyclic");
    let result_paths = stats.paths_out.expect("pruned text automata are acyclic");
    let removed_paths = text_paths - result_paths;
    let growth_ratio = f64::from(fa.state_count()) / f64::from(grammar.state_count());

    // Spot checks: up to 1,000 sampled paths per side. Every surviving path
    // must scan clean; every removed path must contain a compiled factor.
    let surviving = count_paths(&result, 1000).sample_paths;
    let removed: Vec<_> = enumerate_language(&text, usize::MAX)
        .into_iter()
        .filter(|w| !result.accepts(w))
        .take(1000)
        .collect();
    if surviving.is_empty() || removed.is_empty() {
        return Err(CliError::Invariant(
            "spot check needs surviving and removed paths, but one side is empty".into(),
        ));
    }
    if let Some(w) = surviving.iter().find(|w| !fa.scan_factors(w).0.is_empty()) {
        return Err(CliError::Invariant(format!(
            "spot check failed: surviving path of length {} contains a compiled factor",
            w.len()
        )));
    }
    if let Some(w) = removed.iter().find(|w| fa.scan_factors(w).0.is_empty()) {
        return Err(CliError::Invariant(format!(
            "spot check failed: removed path of length {} contains no compiled factor",
            w.len()
        )));
    }

    let fields: Vec<(&str, serde_json::Value)> = vec![
        ("seed", seed.into()),
        ("sequences", sequences.into()),
        ("text_states", text.state_count().into()),
        ("text_paths", text_paths.into()),
        ("grammar_states", grammar.state_count().into()),
        ("grammar_words", grammar_words.into()),
        ("matcher_states", fa.state_count().into()),
        ("growth_ratio", growth_ratio.into()),
        ("compile_ms", compile_ms.into()),
        ("apply_ms", apply_ms.into()),
        ("result_states", result.state_count().into()),
        ("result_paths", result_paths.into()),
        ("removed_paths", removed_paths.into()),
        ("checked_surviving", (surviving.len() as u64).into()),
        ("checked_removed", (removed.len() as u64).into()),
        ("spot_checks", "ok".into()),
    ];
    if json {
        let object: serde_json::Map<String, serde_json::Value> = fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        println!("{}", serde_json::Value::Object(object));
    } else {
        for (key, value) in fields {
            let key = key.replace('_', "-");
            match value {
                serde_json::Value::Number(n) if key == "growth-ratio" => {
                    println!("{key}: {:.3}", n.as_f64().unwrap_or(f64::NAN));
                }
                serde_json::Value::String(s) => println!("{key}: {s}"),
                other => println!("{key}: {other}"),
            }
        }
    }
    Ok(())
}
