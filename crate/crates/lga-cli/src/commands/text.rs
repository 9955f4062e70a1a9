use std::fs;
use std::path::Path;

use lga_core::{build_text_automaton, parse_lexicon, serialize_fsa, Automaton};

use crate::error::CliError;
use crate::util::{read_to_string, significant_lines, write_atomic};

/// Builds one sentence automaton per significant line, named after the
/// 1-based line number (`0001.fsa`, ...). Every sentence is analyzed before
/// any file is written, so a bad sentence leaves the directory untouched.
pub fn run(
    sentences_path: &Path,
    lexicon_path: &Path,
    strict: bool,
    output_dir: &Path,
) -> Result<(), CliError> {
    let lexicon = parse_lexicon(&read_to_string(lexicon_path)?)
        .map_err(|e| CliError::parse(lexicon_path, e))?;
    let sentences = read_to_string(sentences_path)?;

    let mut built: Vec<(usize, Automaton)> = Vec::new();
    for (line_no, line) in significant_lines(&sentences) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let automaton = build_text_automaton(&tokens, &lexicon, strict).map_err(|e| {
            CliError::Constraint(format!(
                "{} line {line_no}: {e}",
                sentences_path.display()
            ))
        })?;
        built.push((line_no, automaton));
    }

    fs::create_dir_all(output_dir).map_err(|source| CliError::Io {
        path: output_dir.to_path_buf(),
        source,
    })?;
    for (line_no, automaton) in &built {
        let path = output_dir.join(format!("{line_no:04}.fsa"));
        write_atomic(&path, &serialize_fsa(automaton))?;
    }
    println!("wrote {} automata", built.len());
    Ok(())
}
