//! Application of a compiled matcher to an acyclic text automaton.
//!
//! A text automaton represents the analyses of a sentence as an acyclic set
//! of label paths. Applying a matcher walks text and matcher side by side
//! over every path at once (a product of the two machines) and removes:
//!
//! * **negative** mode: every transition that would complete a forbidden
//!   factor — the surviving language is exactly the paths containing no
//!   word of the compiled set;
//! * **positive** mode: every transition a constrained matcher state cannot
//!   take — once a path has entered a mandatory pattern it must finish it.
//!
//! Dead branches left behind by the removals are trimmed away.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::automaton::{trim, Automaton, PreconditionError, StateId};
use crate::determinize::determinize;
use crate::label::Label;
use crate::matcher::{build_factor_matcher, BuildTrace, FailureAutomaton};
use crate::minimize::minimize;
use crate::paths::count_paths;

/// Which of the two pruning disciplines to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Negative,
    Positive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Negative => "negative",
            Mode::Positive => "positive",
        })
    }
}

/// Size and path bookkeeping for one application.
///
/// `transitions_examined = transitions kept + dropped_transitions` counts
/// text transitions considered during the product walk (before trimming).
/// Path counts are `None` when the corresponding machine is cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApplyStats {
    pub states_in: u32,
    pub states_out: u32,
    pub transitions_in: u64,
    pub transitions_out: u64,
    pub paths_in: Option<u64>,
    pub paths_out: Option<u64>,
    pub dropped_transitions: u64,
    pub transitions_examined: u64,
    pub mode: Mode,
}

/// Removes from `text` every path containing a word of the matcher's
/// compiled set as a factor.
pub fn apply_negative(text: &Automaton, fa: &FailureAutomaton) -> (Automaton, ApplyStats) {
    apply_inner(text, fa, Mode::Negative)
}

/// Removes from `text` every path on which a constrained matcher state is
/// forced to give up (see [`FailureAutomaton::positive_step`]).
pub fn apply_positive(text: &Automaton, fa: &FailureAutomaton) -> (Automaton, ApplyStats) {
    apply_inner(text, fa, Mode::Positive)
}

fn apply_inner(text: &Automaton, fa: &FailureAutomaton, mode: Mode) -> (Automaton, ApplyStats) {
    let mut stats = ApplyStats {
        states_in: text.state_count(),
        states_out: 0,
        transitions_in: text.transition_count(),
        transitions_out: 0,
        paths_in: count_paths(text, 0).path_count,
        paths_out: None,
        dropped_transitions: 0,
        transitions_examined: 0,
        mode,
    };

    // A matching initial state means the empty factor is forbidden; it is a
    // suffix at every position, so nothing survives. The product below
    // cannot express that (it only filters transitions), hence the escape.
    if mode == Mode::Negative && fa.is_match_state(fa.initial()) {
        let out = Automaton::empty_language();
        stats.states_out = out.state_count();
        stats.paths_out = Some(0);
        return (out, stats);
    }

    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut finals: Vec<StateId> = Vec::new();
    let mut transitions: Vec<(StateId, Label, StateId)> = Vec::new();
    let mut queue: VecDeque<StateId> = VecDeque::new();

    let mut register = |pair: (StateId, StateId),
                        pairs: &mut Vec<(StateId, StateId)>,
                        finals: &mut Vec<StateId>,
                        queue: &mut VecDeque<StateId>| {
        *ids.entry(pair).or_insert_with(|| {
            let id = pairs.len() as StateId;
            pairs.push(pair);
            if text.is_final(pair.0) {
                finals.push(id);
            }
            queue.push_back(id);
            id
        })
    };

    let start = (text.initial(), fa.initial());
    register(start, &mut pairs, &mut finals, &mut queue);

    while let Some(id) = queue.pop_front() {
        let (u_text, u_match) = pairs[id as usize];
        for &(label, v_text) in text.transitions(u_text) {
            stats.transitions_examined += 1;
            let v_match = match mode {
                Mode::Negative => {
                    let next = fa.failure_lookup(u_match, Some(label)).next;
                    if fa.is_match_state(next) {
                        stats.dropped_transitions += 1;
                        continue;
                    }
                    next
                }
                Mode::Positive => match fa.positive_step(u_match, Some(label)) {
                    Some(next) => next,
                    None => {
                        stats.dropped_transitions += 1;
                        continue;
                    }
                },
            };
            let target = register((v_text, v_match), &mut pairs, &mut finals, &mut queue);
            transitions.push((id, label, target));
        }
    }

    let raw = Automaton::from_parts(
        pairs.len() as u32,
        0,
        finals.iter().copied(),
        transitions,
    )
    .expect("product ids are dense");
    let out = trim(&raw);
    stats.states_out = out.state_count();
    stats.transitions_out = out.transition_count();
    stats.paths_out = count_paths(&out, 0).path_count;
    (out, stats)
}

/// Whether a single label sequence survives positive application: runs the
/// constrained walk from the initial state and reports if it ever halts.
pub fn reference_scan_positive(fa: &FailureAutomaton, w: &[Label]) -> bool {
    let mut state = fa.initial();
    for &label in w {
        match fa.positive_step(state, Some(label)) {
            Some(next) => state = next,
            None => return false,
        }
    }
    true
}

/// Normalizes a grammar automaton and compiles it into a matcher: trim,
/// determinize when needed, minimize, then the failure construction.
/// Errors only if the useful part of the grammar contains a cycle.
pub fn compile_grammar(
    grammar: &Automaton,
) -> Result<(FailureAutomaton, BuildTrace), PreconditionError> {
    let trimmed = trim(grammar);
    if !trimmed.is_acyclic() {
        return Err(PreconditionError::Cyclic);
    }
    let det = if trimmed.is_deterministic() {
        trimmed
    } else {
        determinize(&trimmed)
    };
    let minimal = minimize(&det).expect("determinized grammars minimize");
    build_factor_matcher(&minimal)
}

/// End-to-end disambiguation: compiles the grammar, applies it to the text
/// in the requested mode, and optionally minimizes the surviving automaton
/// (determinizing first when necessary). Stats reflect the final result.
pub fn disambiguate(
    text: &Automaton,
    grammar: &Automaton,
    mode: Mode,
    minimize_result: bool,
) -> Result<(Automaton, ApplyStats), PreconditionError> {
    let (fa, _) = compile_grammar(grammar)?;
    let (mut out, mut stats) = apply_inner(text, &fa, mode);
    if minimize_result {
        let det = if out.is_deterministic() {
            out
        } else {
            determinize(&out)
        };
        out = minimize(&det).expect("determinized results minimize");
        stats.states_out = out.state_count();
        stats.transitions_out = out.transition_count();
        stats.paths_out = count_paths(&out, 0).path_count;
    }
    Ok((out, stats))
}
