use std::path::Path;

use lga_core::{compile_grammar, serialize_fsm3, PreconditionError, WILDCARD_TEXT};

use crate::error::CliError;
use crate::util::{label_set, load_fsa, write_atomic};

pub fn run(grammar_path: &Path, output: &Path, wildcard: bool) -> Result<(), CliError> {
    let grammar = load_fsa(grammar_path)?;
    if !wildcard && label_set(&grammar).iter().any(|l| l.as_str() == WILDCARD_TEXT) {
        return Err(CliError::Constraint(format!(
            "{}: grammar uses the wildcard label {WILDCARD_TEXT}; pass --wildcard to allow it",
            grammar_path.display()
        )));
    }
    let (fa, trace) = compile_grammar(&grammar).map_err(|e| match e {
        PreconditionError::Cyclic => CliError::Constraint(format!(
            "{}: grammar must be acyclic to compile",
            grammar_path.display()
        )),
        other => CliError::Invariant(format!("grammar normalization failed: {other}")),
    })?;
    write_atomic(output, &serialize_fsm3(&fa))?;
    println!("states: {}", fa.state_count());
    println!("transitions: {}", fa.transition_count());
    println!("copies: {}", trace.copies);
    println!("enqueues: {}", trace.enqueues);
    println!("transitions-examined: {}", trace.transitions_examined);
    println!("failure-steps: {}", trace.failure_steps);
    Ok(())
}
