//! Failure-function-augmented deterministic matchers.
//!
//! [`build_factor_matcher`] turns a finite word set L, given as an acyclic
//! deterministic trim automaton, into a machine for "ends with a word of L"
//! over an open alphabet. Instead of materializing a transition per symbol,
//! each state carries a failure value: on a missing label the machine backs
//! off along failure links, bottoming out in an implicit self-loop at the
//! initial state. Lookup therefore works for any token, including ones never
//! seen at build time.
//!
//! A state of the input may be reachable along access paths that demand
//! different failure values; the construction then duplicates it (same
//! outgoing transitions and finality, distinct failure value). Duplicates of
//! the same origin are tracked so each distinct failure value is
//! materialized once.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{Automaton, PreconditionError, StateId};
use crate::codec::significant_lines;
use crate::label::{Label, LabelError};

/// Counters describing one run of the matcher construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildTrace {
    /// Queue insertions; equals the state count of the result.
    pub enqueues: u64,
    /// States duplicated because two access paths disagreed on the failure
    /// value.
    pub copies: u64,
    /// Failure-link steps taken while resolving failure values.
    pub failure_steps: u64,
    /// Transitions processed; equals the transition count of the result.
    pub transitions_examined: u64,
}

/// Outcome of a single failure-aware lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lookup {
    /// State after consuming the token.
    pub next: StateId,
    /// Failure links followed before the token was resolved.
    pub steps: u64,
    /// False iff the machine stayed at the initial state for lack of any
    /// matching transition.
    pub advanced: bool,
}

/// Per-scan work counters; `advances + failure_steps` is linear in the
/// input length.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanMetrics {
    pub advances: u64,
    pub failure_steps: u64,
}

/// Result of running a matcher over a whole sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognition {
    /// Whether the final state is a match state.
    pub accepted: bool,
    /// Start state followed by every state visited: each failure stop and
    /// each landing. A token that causes no movement records the initial
    /// state once.
    pub trace: Vec<StateId>,
    /// End positions (0-based, end-exclusive) where a word of the compiled
    /// set is a suffix of the input read so far.
    pub ends: Vec<usize>,
    pub metrics: ScanMetrics,
}

/// Deterministic partial transition map plus failure function.
///
/// Invariants, checked on load and maintained by construction: the failure
/// value of the initial state is itself; every other failure value is
/// strictly closer to the initial state (in transition-graph BFS depth) than
/// its owner; every state is reachable through transitions alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureAutomaton {
    initial: StateId,
    delta: Vec<BTreeMap<Label, StateId>>,
    fail: Vec<StateId>,
    finals_raw: BTreeSet<StateId>,
    /// States whose failure chain (including the state itself) meets
    /// `finals_raw`; these are the match states.
    finals_closed: BTreeSet<StateId>,
    /// Free-to-back-off flags: true iff no outgoing transition of the state
    /// targets a raw final state.
    ft: Vec<bool>,
    /// The wildcard label, when any transition carries it.
    wildcard: Option<Label>,
}

impl FailureAutomaton {
    fn assemble(
        initial: StateId,
        delta: Vec<BTreeMap<Label, StateId>>,
        fail: Vec<StateId>,
        finals_raw: BTreeSet<StateId>,
    ) -> FailureAutomaton {
        let finals_closed = close_finals(&fail, &finals_raw);
        let ft = delta
            .iter()
            .map(|row| !row.values().any(|t| finals_raw.contains(t)))
            .collect();
        let wildcard = delta
            .iter()
            .flat_map(|row| row.keys())
            .find(|l| l.is_wildcard())
            .copied();
        FailureAutomaton {
            initial,
            delta,
            fail,
            finals_raw,
            finals_closed,
            ft,
            wildcard,
        }
    }

    pub fn state_count(&self) -> u32 {
        self.delta.len() as u32
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn fail(&self, state: StateId) -> StateId {
        self.fail[state as usize]
    }

    /// Outgoing transitions of a state, in label order.
    pub fn delta(&self, state: StateId) -> &BTreeMap<Label, StateId> {
        &self.delta[state as usize]
    }

    pub fn transition_count(&self) -> u64 {
        self.delta.iter().map(|row| row.len() as u64).sum()
    }

    /// Final states as declared by the compiled word set.
    pub fn finals_raw(&self) -> &BTreeSet<StateId> {
        &self.finals_raw
    }

    /// Match states: a word of the compiled set is a suffix of every access
    /// path of these states.
    pub fn finals_closed(&self) -> &BTreeSet<StateId> {
        &self.finals_closed
    }

    pub fn is_match_state(&self, state: StateId) -> bool {
        self.finals_closed.contains(&state)
    }

    /// Whether the state may back off without skipping a potential match:
    /// true iff none of its transitions targets a raw final state.
    pub fn ft(&self, state: StateId) -> bool {
        self.ft[state as usize]
    }

    /// Distinct labels appearing on transitions.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.delta
            .iter()
            .flat_map(|row| row.keys().copied())
            .collect()
    }

    /// One transition lookup at `state` without following failure links:
    /// the exact label wins, then a wildcard transition. `None` as the
    /// label stands for a token that cannot match exactly (e.g. one never
    /// interned); only wildcard transitions apply to it.
    fn edge(&self, state: StateId, label: Option<Label>) -> Option<StateId> {
        let row = &self.delta[state as usize];
        if let Some(l) = label {
            if let Some(&t) = row.get(&l) {
                return Some(t);
            }
        }
        if let Some(w) = self.wildcard {
            if let Some(&t) = row.get(&w) {
                return Some(t);
            }
        }
        None
    }

    /// Consumes one token starting at `state`: follows failure links until
    /// a transition matches, or stays at the initial state if none ever
    /// does.
    pub fn failure_lookup(&self, state: StateId, label: Option<Label>) -> Lookup {
        let mut v = state;
        let mut steps = 0;
        loop {
            if let Some(next) = self.edge(v, label) {
                return Lookup {
                    next,
                    steps,
                    advanced: true,
                };
            }
            if v == self.initial {
                return Lookup {
                    next: self.initial,
                    steps,
                    advanced: false,
                };
            }
            v = self.fail[v as usize];
            steps += 1;
        }
    }

    /// Constrained variant of [`failure_lookup`](Self::failure_lookup) used
    /// by positive application: backing off is only allowed from states
    /// whose [`ft`](Self::ft) flag is set. Returns the state after the
    /// token, or `None` when the walk halts at a constrained state that
    /// lacks the label — the token breaks a mandatory pattern there.
    pub fn positive_step(&self, state: StateId, label: Option<Label>) -> Option<StateId> {
        let mut v = state;
        loop {
            if let Some(next) = self.edge(v, label) {
                return Some(next);
            }
            if v == self.initial {
                return Some(self.initial);
            }
            if !self.ft(v) {
                return None;
            }
            v = self.fail[v as usize];
        }
    }

    /// Runs the matcher over a full sequence, recording the visited-state
    /// trace and all match end positions.
    pub fn recognize_ends_with(&self, w: &[Label]) -> Recognition {
        let mut trace = vec![self.initial];
        let mut ends = Vec::new();
        let mut metrics = ScanMetrics::default();
        let mut state = self.initial;
        if self.is_match_state(state) {
            ends.push(0);
        }
        for (pos, &label) in w.iter().enumerate() {
            let mut moved = false;
            loop {
                if let Some(next) = self.edge(state, Some(label)) {
                    state = next;
                    metrics.advances += 1;
                    trace.push(state);
                    break;
                }
                if state == self.initial {
                    if !moved {
                        trace.push(state);
                    }
                    break;
                }
                state = self.fail[state as usize];
                metrics.failure_steps += 1;
                trace.push(state);
                moved = true;
            }
            if self.is_match_state(state) {
                ends.push(pos + 1);
            }
        }
        Recognition {
            accepted: self.is_match_state(state),
            trace,
            ends,
            metrics,
        }
    }

    /// Match end positions over a token stream, where `None` marks a token
    /// with no possible exact transition. Memory use is independent of the
    /// stream length (apart from the returned positions).
    pub fn scan_tokens(
        &self,
        tokens: impl IntoIterator<Item = Option<Label>>,
    ) -> (Vec<usize>, ScanMetrics) {
        let mut ends = Vec::new();
        let mut metrics = ScanMetrics::default();
        let mut state = self.initial;
        if self.is_match_state(state) {
            ends.push(0);
        }
        for (pos, token) in tokens.into_iter().enumerate() {
            let lookup = self.failure_lookup(state, token);
            state = lookup.next;
            metrics.failure_steps += lookup.steps;
            if lookup.advanced {
                metrics.advances += 1;
            }
            if self.is_match_state(state) {
                ends.push(pos + 1);
            }
        }
        (ends, metrics)
    }

    /// Match end positions for a label sequence: all `e` with a compiled
    /// word as a suffix of `w[..e]`.
    pub fn scan_factors(&self, w: &[Label]) -> (Vec<usize>, ScanMetrics) {
        self.scan_tokens(w.iter().map(|&l| Some(l)))
    }

    /// Materializes the implicit failure transitions into a complete DFA
    /// over the given alphabet. Final states are the match states, so the
    /// result accepts exactly the sequences whose suffix is a compiled
    /// word. Errors if a transition label is missing from the alphabet.
    pub fn expand_to_dfa(&self, alphabet: &BTreeSet<Label>) -> Result<Automaton, AlphabetError> {
        if let Some(&missing) = self.labels().difference(alphabet).next() {
            return Err(AlphabetError(missing));
        }
        let mut transitions = Vec::with_capacity(self.delta.len() * alphabet.len());
        for state in 0..self.state_count() {
            for &label in alphabet {
                let next = self.failure_lookup(state, Some(label)).next;
                transitions.push((state, label, next));
            }
        }
        Ok(Automaton::from_parts(
            self.state_count(),
            self.initial,
            self.finals_closed.iter().copied(),
            transitions,
        )
        .expect("expansion reuses valid state ids"))
    }

    /// Checks the structural invariants (see the type docs). Returns the
    /// offending state on failure.
    fn validate(&self) -> Result<(), InvariantViolation> {
        let n = self.delta.len();
        if self.fail[self.initial as usize] != self.initial {
            return Err(InvariantViolation::InitialFail(self.initial));
        }
        // BFS depth over transitions only.
        let mut depth: Vec<Option<u32>> = vec![None; n];
        depth[self.initial as usize] = Some(0);
        let mut queue = VecDeque::from([self.initial]);
        while let Some(u) = queue.pop_front() {
            let d = depth[u as usize].expect("queued states have a depth");
            for &t in self.delta[u as usize].values() {
                if depth[t as usize].is_none() {
                    depth[t as usize] = Some(d + 1);
                    queue.push_back(t);
                }
            }
        }
        for state in 0..n as StateId {
            let Some(d) = depth[state as usize] else {
                return Err(InvariantViolation::Unreachable(state));
            };
            if state == self.initial {
                continue;
            }
            let f = self.fail[state as usize];
            let fd = depth[f as usize].ok_or(InvariantViolation::Unreachable(f))?;
            if fd >= d {
                return Err(InvariantViolation::FailDepth(state));
            }
        }
        Ok(())
    }
}

/// A transition label not covered by the expansion alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("alphabet does not cover transition label '{0}'")]
pub struct AlphabetError(pub Label);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InvariantViolation {
    InitialFail(StateId),
    Unreachable(StateId),
    FailDepth(StateId),
}

/// Match-state closure: a state matches iff its failure chain (itself
/// included) meets the raw final set. The chain bottoms out at the initial
/// state, whose failure value is itself. A chain longer than the state
/// count (possible only for invalid input that validation rejects anyway)
/// is cut off as a non-match.
fn close_finals(fail: &[StateId], raw: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let n = fail.len();
    let mut memo: Vec<Option<bool>> = vec![None; n];
    for start in 0..n as StateId {
        let mut path = Vec::new();
        let mut cur = start;
        let value = loop {
            if let Some(v) = memo[cur as usize] {
                break v;
            }
            if raw.contains(&cur) {
                break true;
            }
            if fail[cur as usize] == cur || path.len() > n {
                break false;
            }
            path.push(cur);
            cur = fail[cur as usize];
        };
        memo[cur as usize] = Some(value);
        for p in path {
            memo[p as usize] = Some(value);
        }
    }
    (0..n as StateId)
        .filter(|&q| memo[q as usize] == Some(true))
        .collect()
}

/// Compiles an acyclic deterministic trim automaton for a finite word set L
/// into a failure-augmented matcher for "ends with a word of L".
///
/// Breadth-first over the transition graph: each transition's target
/// receives as failure value the state reached by reading the same label
/// from the source's failure value (backing off as needed). When a target
/// already holds a different failure value, the target is duplicated — an
/// existing duplicate with the desired value is reused, otherwise a copy
/// with the same transitions and finality is appended. Duplication, rather
/// than overwriting, is what keeps the suffix semantics exact for every
/// access path.
pub fn build_factor_matcher(
    grammar: &Automaton,
) -> Result<(FailureAutomaton, BuildTrace), PreconditionError> {
    if !grammar.is_deterministic() {
        return Err(PreconditionError::NotDeterministic);
    }
    if !grammar.is_acyclic() {
        return Err(PreconditionError::Cyclic);
    }
    if grammar.state_count() == 1 && grammar.finals().is_empty() {
        // Canonical empty word set: a single non-matching state. (It fails
        // the trim test below only because it has no final state at all.)
        let fa = FailureAutomaton::assemble(0, vec![BTreeMap::new()], vec![0], BTreeSet::new());
        let trace = BuildTrace {
            enqueues: 1,
            ..BuildTrace::default()
        };
        return Ok((fa, trace));
    }
    if !grammar.is_trim() {
        return Err(PreconditionError::NotTrim);
    }

    let initial = grammar.initial();
    let original_count = grammar.state_count() as usize;
    let mut delta: Vec<BTreeMap<Label, StateId>> = (0..original_count)
        .map(|q| grammar.transitions(q as StateId).iter().copied().collect())
        .collect();
    let mut final_flags: Vec<bool> = (0..original_count)
        .map(|q| grammar.is_final(q as StateId))
        .collect();
    let mut fail: Vec<Option<StateId>> = vec![None; original_count];
    // Origin of each state: itself for originals, the copied original for
    // duplicates. All states sharing an origin live in one registry list,
    // pairwise distinct in failure value.
    let mut origin: Vec<StateId> = (0..original_count as StateId).collect();
    let mut registry: HashMap<StateId, Vec<StateId>> = HashMap::new();

    let mut trace = BuildTrace::default();
    let mut queue = VecDeque::from([initial]);
    fail[initial as usize] = Some(initial);
    trace.enqueues = 1;

    while let Some(u) = queue.pop_front() {
        // Process outgoing transitions in descending label order; this
        // fixes which access path keeps the original id when a target must
        // be duplicated, making state numbering reproducible.
        let outgoing: Vec<(Label, StateId)> = delta[u as usize]
            .iter()
            .rev()
            .map(|(&l, &t)| (l, t))
            .collect();
        for (label, target) in outgoing {
            trace.transitions_examined += 1;
            // Failure value for the target: read `label` from the source's
            // failure value, backing off while undefined. The initial state
            // contributes no advance for its own transitions — their
            // targets fail straight to it.
            let mut v = fail[u as usize].expect("dequeued states have failure values");
            while v != initial && !delta[v as usize].contains_key(&label) {
                v = fail[v as usize].expect("failure chain stays within resolved states");
                trace.failure_steps += 1;
            }
            if u != initial {
                if let Some(&t) = delta[v as usize].get(&label) {
                    v = t;
                }
            }
            match fail[target as usize] {
                None => {
                    fail[target as usize] = Some(v);
                    registry.entry(origin[target as usize]).or_default().push(target);
                    queue.push_back(target);
                    trace.enqueues += 1;
                }
                Some(existing) if existing == v => {}
                Some(_) => {
                    let key = origin[target as usize];
                    let variants = registry.get(&key).expect("target was registered");
                    let rewired = match variants
                        .iter()
                        .copied()
                        .find(|&w| fail[w as usize] == Some(v))
                    {
                        Some(w) => w,
                        None => {
                            let w = delta.len() as StateId;
                            let copied_row = delta[target as usize].clone();
                            delta.push(copied_row);
                            final_flags.push(final_flags[target as usize]);
                            fail.push(Some(v));
                            origin.push(key);
                            registry.get_mut(&key).expect("registry list exists").push(w);
                            queue.push_back(w);
                            trace.enqueues += 1;
                            trace.copies += 1;
                            w
                        }
                    };
                    delta[u as usize].insert(label, rewired);
                }
            }
        }
    }

    let fail: Vec<StateId> = fail
        .into_iter()
        .map(|f| f.expect("trim input leaves no undiscovered state"))
        .collect();
    let finals_raw = final_flags
        .iter()
        .enumerate()
        .filter_map(|(q, &is_final)| is_final.then_some(q as StateId))
        .collect();
    let fa = FailureAutomaton::assemble(initial, delta, fail, finals_raw);
    debug_assert_eq!(fa.validate(), Ok(()));
    Ok((fa, trace))
}

const FSM3_HEADER: &str = "lga-fsm3 v1";

/// Serializes a matcher in the `.fsm3` text format: header, initial state,
/// state count, one `state` line per state (ascending id) with failure
/// value and raw finality, then transitions in state-then-label order. The
/// match-state closure is derived data and never stored.
pub fn serialize_fsm3(fa: &FailureAutomaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FSM3_HEADER}");
    let _ = writeln!(out, "initial {}", fa.initial);
    let _ = writeln!(out, "states {}", fa.state_count());
    for state in 0..fa.state_count() {
        let _ = writeln!(
            out,
            "state {state} fail={} final={}",
            fa.fail(state),
            u8::from(fa.finals_raw.contains(&state))
        );
    }
    for state in 0..fa.state_count() {
        for (&label, &dst) in fa.delta(state) {
            let _ = writeln!(out, "{state} {dst} {label}");
        }
    }
    out
}

/// Reasons a `.fsm3` document is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Fsm3ParseErrorKind {
    #[error("missing header line '{FSM3_HEADER}'")]
    MissingHeader,
    #[error("unrecognized header '{0}', expected '{FSM3_HEADER}'")]
    BadHeader(String),
    #[error("expected 'initial <id>' before any other content")]
    MissingInitial,
    #[error("expected 'states <count>' after the initial line")]
    MissingStates,
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("invalid state id '{0}'")]
    BadStateId(String),
    #[error("state id {0} out of range for {1} states")]
    StateIdOutOfRange(u64, u32),
    #[error("invalid label: {0}")]
    BadLabel(#[from] LabelError),
    #[error("invalid flag value '{0}', expected 0 or 1")]
    BadFlag(String),
    #[error("duplicate 'state {0}' line")]
    DuplicateStateLine(StateId),
    #[error("missing 'state {0}' line")]
    MissingStateLine(StateId),
    #[error("duplicate transition from state {0} on label '{1}'")]
    DuplicateTransition(StateId, Label),
    #[error("the initial state must have itself as failure value")]
    InitialFail,
    #[error("state {0} is not reachable through transitions")]
    UnreachableState(StateId),
    #[error("failure value of state {0} is not closer to the initial state")]
    FailDepth(StateId),
}

/// A `.fsm3` parse or validation failure at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct Fsm3ParseError {
    pub line: usize,
    pub kind: Fsm3ParseErrorKind,
}

fn fsm3_err(line: usize, kind: Fsm3ParseErrorKind) -> Fsm3ParseError {
    Fsm3ParseError { line, kind }
}

fn parse_fsm3_id(token: &str, line: usize, states: u32) -> Result<StateId, Fsm3ParseError> {
    let value: u64 = token
        .parse()
        .map_err(|_| fsm3_err(line, Fsm3ParseErrorKind::BadStateId(token.to_string())))?;
    if value >= u64::from(states) {
        return Err(fsm3_err(
            line,
            Fsm3ParseErrorKind::StateIdOutOfRange(value, states),
        ));
    }
    Ok(value as StateId)
}

/// Parses the `.fsm3` text format and re-validates the matcher invariants;
/// the match-state closure and back-off flags are recomputed, never read.
pub fn parse_fsm3(input: &str) -> Result<FailureAutomaton, Fsm3ParseError> {
    let mut lines = significant_lines(input);
    match lines.next() {
        None => return Err(fsm3_err(1, Fsm3ParseErrorKind::MissingHeader)),
        Some((_, line)) if line == FSM3_HEADER => {}
        Some((n, line)) => {
            return Err(fsm3_err(n, Fsm3ParseErrorKind::BadHeader(line.to_string())))
        }
    }
    let (initial_line, initial_raw) = match lines.next() {
        Some((n, line)) => match line.strip_prefix("initial ") {
            Some(rest) => (n, rest.trim()),
            None => return Err(fsm3_err(n, Fsm3ParseErrorKind::MissingInitial)),
        },
        None => return Err(fsm3_err(1, Fsm3ParseErrorKind::MissingInitial)),
    };
    let (states_decl_line, states): (usize, u32) = match lines.next() {
        Some((n, line)) => match line.strip_prefix("states ") {
            Some(rest) => {
                let count = rest.trim().parse().map_err(|_| {
                    fsm3_err(n, Fsm3ParseErrorKind::BadStateId(rest.trim().to_string()))
                })?;
                (n, count)
            }
            None => return Err(fsm3_err(n, Fsm3ParseErrorKind::MissingStates)),
        },
        None => return Err(fsm3_err(1, Fsm3ParseErrorKind::MissingStates)),
    };
    if states == 0 {
        return Err(fsm3_err(states_decl_line, Fsm3ParseErrorKind::MissingStates));
    }
    let initial = parse_fsm3_id(initial_raw, initial_line, states)?;

    let mut fail: Vec<Option<StateId>> = vec![None; states as usize];
    let mut final_flags: Vec<bool> = vec![false; states as usize];
    let mut state_lines: Vec<usize> = vec![0; states as usize];
    let mut delta: Vec<BTreeMap<Label, StateId>> = vec![BTreeMap::new(); states as usize];

    for (n, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() == Some(&"state") {
            if fields.len() != 4 {
                return Err(fsm3_err(n, Fsm3ParseErrorKind::Malformed(line.to_string())));
            }
            let id = parse_fsm3_id(fields[1], n, states)?;
            let fail_field = fields[2]
                .strip_prefix("fail=")
                .ok_or_else(|| fsm3_err(n, Fsm3ParseErrorKind::Malformed(line.to_string())))?;
            let final_field = fields[3]
                .strip_prefix("final=")
                .ok_or_else(|| fsm3_err(n, Fsm3ParseErrorKind::Malformed(line.to_string())))?;
            if fail[id as usize].is_some() {
                return Err(fsm3_err(n, Fsm3ParseErrorKind::DuplicateStateLine(id)));
            }
            fail[id as usize] = Some(parse_fsm3_id(fail_field, n, states)?);
            final_flags[id as usize] = match final_field {
                "0" => false,
                "1" => true,
                other => return Err(fsm3_err(n, Fsm3ParseErrorKind::BadFlag(other.to_string()))),
            };
            state_lines[id as usize] = n;
        } else {
            let [src, dst, label] = fields[..] else {
                return Err(fsm3_err(n, Fsm3ParseErrorKind::Malformed(line.to_string())));
            };
            let src = parse_fsm3_id(src, n, states)?;
            let dst = parse_fsm3_id(dst, n, states)?;
            let label = Label::new(label).map_err(|e| fsm3_err(n, e.into()))?;
            if delta[src as usize].insert(label, dst).is_some() {
                return Err(fsm3_err(n, Fsm3ParseErrorKind::DuplicateTransition(src, label)));
            }
        }
    }

    let fail: Vec<StateId> = fail
        .into_iter()
        .enumerate()
        .map(|(id, f)| {
            f.ok_or_else(|| {
                fsm3_err(
                    states_decl_line,
                    Fsm3ParseErrorKind::MissingStateLine(id as StateId),
                )
            })
        })
        .collect::<Result<_, _>>()?;
    let finals_raw = final_flags
        .iter()
        .enumerate()
        .filter_map(|(q, &is_final)| is_final.then_some(q as StateId))
        .collect();
    let fa = FailureAutomaton::assemble(initial, delta, fail, finals_raw);
    match fa.validate() {
        Ok(()) => Ok(fa),
        Err(InvariantViolation::InitialFail(_)) => Err(fsm3_err(
            state_lines[fa.initial as usize],
            Fsm3ParseErrorKind::InitialFail,
        )),
        Err(InvariantViolation::Unreachable(q)) => Err(fsm3_err(
            state_lines[q as usize],
            Fsm3ParseErrorKind::UnreachableState(q),
        )),
        Err(InvariantViolation::FailDepth(q)) => Err(fsm3_err(
            state_lines[q as usize],
            Fsm3ParseErrorKind::FailDepth(q),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::oracle::{ends_with_dfa, trie_of_words};
    use crate::paths::languages_equal_bounded;
    use crate::testutil::{demo_grammar, labels, word};

    fn demo_matcher() -> (FailureAutomaton, BuildTrace) {
        build_factor_matcher(&demo_grammar()).unwrap()
    }

    #[test]
    fn demo_grammar_compiles_with_two_copies() {
        let (fa, trace) = demo_matcher();
        let [a, b, c, d] = labels(["a", "b", "c", "d"]);
        assert_eq!(fa.state_count(), 6);
        assert_eq!(trace.copies, 2);
        assert_eq!(trace.enqueues, 6);
        assert_eq!(trace.transitions_examined, 8);
        assert_eq!(trace.failure_steps, 0);

        let rows: Vec<Vec<(Label, StateId)>> = (0..6)
            .map(|q| fa.delta(q).iter().map(|(&l, &t)| (l, t)).collect())
            .collect();
        assert_eq!(rows[0], vec![(a, 1), (b, 1)]);
        assert_eq!(rows[1], vec![(a, 4), (b, 4), (c, 2), (d, 2)]);
        assert_eq!(rows[2], vec![(d, 3)]);
        assert_eq!(rows[3], vec![]);
        assert_eq!(rows[4], vec![(d, 5)]);
        assert_eq!(rows[5], vec![]);

        let fails: Vec<StateId> = (0..6).map(|q| fa.fail(q)).collect();
        assert_eq!(fails, vec![0, 0, 0, 0, 1, 2]);
        assert_eq!(fa.finals_raw().iter().copied().collect::<Vec<_>>(),[3, 5]);
        assert_eq!(
            fa.finals_closed().iter().copied().collect::<Vec<_>>(),
            [3, 5]
        );
        assert_eq!(fa.transition_count(), 8);
    }

    #[test]
    fn demo_matcher_ft_flags() {
        let (fa, _) = demo_matcher();
        // States 2 and 4 have a transition into a raw final state; backing
        // off from them could skip a mandatory match.
        let flags: Vec<bool> = (0..6).map(|q| fa.ft(q)).collect();
        assert_eq!(flags, vec![true, true, false, true, false, true]);
    }

    #[test]
    fn single_word_grammar_needs_no_copies() {
        let g = trie_of_words(&[word("a b")].into_iter().collect());
        let (fa, trace) = build_factor_matcher(&g).unwrap();
        assert_eq!(fa.state_count(), 3);
        assert_eq!(trace.copies, 0);
        assert_eq!((0..3).map(|q| fa.fail(q)).collect::<Vec<_>>(), [0, 0, 0]);
    }

    #[test]
    fn overlapping_words_link_failures_into_the_other_branch() {
        let words = [word("a b"), word("b a b c")].into_iter().collect();
        let g = trie_of_words(&words);
        let (fa, trace) = build_factor_matcher(&g).unwrap();
        // Trie ids: 0 -a-> 1 -b-> 2 (final); 0 -b-> 3 -a-> 4 -b-> 5 -c-> 6 (final).
        assert_eq!(fa.state_count(), 7);
        assert_eq!(trace.copies, 0);
        let fails: Vec<StateId> = (0..7).map(|q| fa.fail(q)).collect();
        assert_eq!(fails, vec![0, 0, 3, 0, 1, 2, 0]);
        // State 5 ("b a b" read) has the final "a b" state on its chain.
        assert!(fa.is_match_state(5));
        assert!(!fa.finals_raw().contains(&5));
        assert_eq!(
            fa.finals_closed().iter().copied().collect::<Vec<_>>(),
            [2, 5, 6]
        );
    }

    #[test]
    fn recognition_trace_backs_off_once_on_the_demo_input() {
        let (fa, _) = demo_matcher();
        let r = fa.recognize_ends_with(&word("a a c d"));
        assert!(r.accepted);
        assert_eq!(r.trace, vec![0, 1, 4, 1, 2, 3]);
        assert_eq!(r.ends, vec![4]);
        assert_eq!(r.metrics.advances, 4);
        assert_eq!(r.metrics.failure_steps, 1);
    }

    #[test]
    fn recognition_rejects_when_no_suffix_matches() {
        let (fa, _) = demo_matcher();
        let r = fa.recognize_ends_with(&word("a a c a"));
        assert!(!r.accepted);
        assert_eq!(*r.trace.last().unwrap(), 1);
    }

    #[test]
    fn unknown_labels_stay_at_the_initial_state() {
        let (fa, _) = demo_matcher();
        let r = fa.recognize_ends_with(&word("z z z"));
        assert!(!r.accepted);
        assert_eq!(r.trace, vec![0, 0, 0, 0]);
        assert_eq!(r.metrics.advances, 0);
        assert_eq!(r.metrics.failure_steps, 0);
    }

    #[test]
    fn scan_reports_every_match_end() {
        let (fa, _) = demo_matcher();
        assert_eq!(fa.scan_factors(&word("a a c d")).0, vec![4]);
        assert_eq!(fa.scan_factors(&word("b b d d a b d")).0, vec![3, 4, 7]);
        assert_eq!(fa.scan_factors(&word("z z z")).0, Vec::<usize>::new());
    }

    #[test]
    fn empty_word_grammar_matches_every_position() {
        let mut words: BTreeSet<Vec<Label>> = BTreeSet::new();
        words.insert(Vec::new());
        let g = trie_of_words(&words);
        let (fa, _) = build_factor_matcher(&g).unwrap();
        assert!(fa.is_match_state(fa.initial()));
        assert_eq!(fa.scan_factors(&word("x y")).0, vec![0, 1, 2]);
    }

    #[test]
    fn failure_lookup_counts_steps() {
        let (fa, _) = demo_matcher();
        let [a, c, z] = labels(["a", "c", "z"]);
        assert_eq!(
            fa.failure_lookup(4, Some(c)),
            Lookup {
                next: 2,
                steps: 1,
                advanced: true
            }
        );
        assert_eq!(
            fa.failure_lookup(2, Some(a)),
            Lookup {
                next: 1,
                steps: 1,
                advanced: true
            }
        );
        assert_eq!(
            fa.failure_lookup(0, Some(z)),
            Lookup {
                next: 0,
                steps: 0,
                advanced: false
            }
        );
        assert_eq!(
            fa.failure_lookup(4, None),
            Lookup {
                next: 0,
                steps: 2,
                advanced: false
            }
        );
    }

    #[test]
    fn expansion_agrees_with_the_slow_suffix_dfa() {
        let (fa, _) = demo_matcher();
        let sigma: BTreeSet<Label> = labels(["a", "b", "c", "d"]).into_iter().collect();
        let dfa = fa.expand_to_dfa(&sigma).unwrap();
        assert_eq!(dfa.state_count(), 6);
        assert_eq!(dfa.transition_count(), 24);
        assert!(dfa.is_deterministic());

        let words: BTreeSet<Vec<Label>> = crate::oracle::enumerate_language(&demo_grammar(), 100)
            .into_iter()
            .collect();
        let slow = ends_with_dfa(&words, &sigma);
        assert!(languages_equal_bounded(&dfa, &slow, 8));
    }

    #[test]
    fn expansion_over_a_larger_alphabet_adds_initial_edges() {
        let (fa, _) = demo_matcher();
        let sigma: BTreeSet<Label> = labels(["a", "b", "c", "d", "e"]).into_iter().collect();
        let [e] = labels(["e"]);
        let dfa = fa.expand_to_dfa(&sigma).unwrap();
        for state in 0..dfa.state_count() {
            assert_eq!(dfa.step(state, e), Some(0));
        }
    }

    #[test]
    fn expansion_requires_a_covering_alphabet() {
        let (fa, _) = demo_matcher();
        let sigma: BTreeSet<Label> = labels(["a", "b", "c"]).into_iter().collect();
        let [d] = labels(["d"]);
        assert_eq!(fa.expand_to_dfa(&sigma), Err(AlphabetError(d)));
    }

    #[test]
    fn wildcard_transition_applies_to_unseen_tokens() {
        let words = [vec![Label::wildcard()]].into_iter().collect();
        let g = trie_of_words(&words);
        let (fa, _) = build_factor_matcher(&g).unwrap();
        assert_eq!(fa.scan_factors(&word("x y")).0, vec![1, 2]);
        assert_eq!(fa.scan_tokens([None, None]).0, vec![1, 2]);
    }

    #[test]
    fn exact_label_beats_wildcard() {
        let [a] = labels(["a"]);
        let words = [vec![a], vec![Label::wildcard()]].into_iter().collect();
        let g = trie_of_words(&words);
        let (fa, _) = build_factor_matcher(&g).unwrap();
        // Trie: 0 -<?>-> 1 (final), 0 -a-> 2 (final); labels sort by text.
        let exact = fa.failure_lookup(0, Some(a)).next;
        let fallback = fa.failure_lookup(0, Some(labels(["q"])[0])).next;
        assert_ne!(exact, fallback);
        assert_eq!(fa.delta(0)[&a], exact);
        assert_eq!(fa.delta(0)[&Label::wildcard()], fallback);
    }

    #[test]
    fn one_letter_blowup_duplicates_the_fork() {
        // Words a·a and a·b: the matcher must track whether the previous
        // token was an 'a' while also tracking progress, doubling the
        // shared leaf state.
        let words: BTreeSet<Vec<Label>> = [word("a a"), word("a b")].into_iter().collect();
        let g = crate::minimize::minimize(&trie_of_words(&words)).unwrap();
        assert_eq!(g.state_count(), 3);
        let (fa, trace) = build_factor_matcher(&g).unwrap();
        assert_eq!(fa.state_count(), 4);
        assert_eq!(trace.copies, 1);
        let sigma: BTreeSet<Label> = labels(["a", "b"]).into_iter().collect();
        let slow = ends_with_dfa(&words, &sigma);
        assert!(languages_equal_bounded(
            &fa.expand_to_dfa(&sigma).unwrap(),
            &slow,
            8
        ));
    }

    #[test]
    fn empty_word_set_compiles_to_a_single_silent_state() {
        let g = Automaton::empty_language();
        let (fa, trace) = build_factor_matcher(&g).unwrap();
        assert_eq!(fa.state_count(), 1);
        assert!(fa.finals_closed().is_empty());
        assert_eq!(trace.enqueues, 1);
        assert_eq!(fa.scan_factors(&word("a b c")).0, Vec::<usize>::new());
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let [a] = labels(["a"]);
        let cyclic = Automaton::from_parts(1, 0, [0], [(0, a, 0)]).unwrap();
        assert_eq!(build_factor_matcher(&cyclic), Err(PreconditionError::Cyclic));

        let nondet = Automaton::from_parts(3, 0, [1, 2], [(0, a, 1), (0, a, 2)]).unwrap();
        assert_eq!(
            build_factor_matcher(&nondet),
            Err(PreconditionError::NotDeterministic)
        );

        let not_trim = Automaton::from_parts(3, 0, [1], [(0, a, 1), (2, a, 1)]).unwrap();
        assert_eq!(
            build_factor_matcher(&not_trim),
            Err(PreconditionError::NotTrim)
        );
    }

    #[test]
    fn fsm3_round_trip_preserves_the_matcher() {
        let (fa, _) = demo_matcher();
        let text = serialize_fsm3(&fa);
        let reparsed = parse_fsm3(&text).unwrap();
        assert_eq!(fa, reparsed);
        assert_eq!(serialize_fsm3(&reparsed), text);
    }

    #[test]
    fn fsm3_serialization_is_stable() {
        let g = trie_of_words(&[word("a b")].into_iter().collect());
        let (fa, _) = build_factor_matcher(&g).unwrap();
        let expected = "lga-fsm3 v1\n\
                        initial 0\n\
                        states 3\n\
                        state 0 fail=0 final=0\n\
                        state 1 fail=0 final=0\n\
                        state 2 fail=0 final=1\n\
                        0 1 a\n\
                        1 2 b\n";
        assert_eq!(serialize_fsm3(&fa), expected);
    }

    #[test]
    fn fsm3_accepts_comments_and_blank_lines() {
        let text = "# a matcher\nlga-fsm3 v1\n\ninitial 0\nstates 2\n\
                    state 0 fail=0 final=0 # root\nstate 1 fail=0 final=1\n0 1 a\n";
        let fa = parse_fsm3(text).unwrap();
        assert_eq!(fa.state_count(), 2);
        assert!(fa.is_match_state(1));
    }

    #[test]
    fn fsm3_rejects_failure_values_that_do_not_decrease_depth() {
        let text = "lga-fsm3 v1\ninitial 0\nstates 3\n\
                    state 0 fail=0 final=0\nstate 1 fail=2 final=0\nstate 2 fail=0 final=1\n\
                    0 1 a\n1 2 b\n";
        let err = parse_fsm3(text).unwrap_err();
        assert_eq!(err.kind, Fsm3ParseErrorKind::FailDepth(1));
        assert_eq!(err.line, 5);
    }

    #[test]
    fn fsm3_rejects_unreachable_states() {
        let text = "lga-fsm3 v1\ninitial 0\nstates 2\n\
                    state 0 fail=0 final=1\nstate 1 fail=0 final=0\n";
        let err = parse_fsm3(text).unwrap_err();
        assert_eq!(err.kind, Fsm3ParseErrorKind::UnreachableState(1));
    }

    #[test]
    fn fsm3_rejects_structural_mistakes() {
        let missing_state = "lga-fsm3 v1\ninitial 0\nstates 2\nstate 0 fail=0 final=0\n0 1 a\n";
        assert_eq!(
            parse_fsm3(missing_state).unwrap_err().kind,
            Fsm3ParseErrorKind::MissingStateLine(1)
        );

        let duplicate_state =
            "lga-fsm3 v1\ninitial 0\nstates 1\nstate 0 fail=0 final=1\nstate 0 fail=0 final=1\n";
        assert_eq!(
            parse_fsm3(duplicate_state).unwrap_err().kind,
            Fsm3ParseErrorKind::DuplicateStateLine(0)
        );

        let bad_header = "lga-fsa v1\ninitial 0\nstates 1\nstate 0 fail=0 final=1\n";
        assert!(matches!(
            parse_fsm3(bad_header).unwrap_err().kind,
            Fsm3ParseErrorKind::BadHeader(_)
        ));

        let out_of_range = "lga-fsm3 v1\ninitial 0\nstates 2\n\
                            state 0 fail=0 final=0\nstate 1 fail=0 final=1\n0 5 a\n";
        assert!(matches!(
            parse_fsm3(out_of_range).unwrap_err().kind,
            Fsm3ParseErrorKind::StateIdOutOfRange(5, 2)
        ));

        let bad_initial_fail = "lga-fsm3 v1\ninitial 0\nstates 2\n\
                                state 0 fail=1 final=0\nstate 1 fail=0 final=1\n0 1 a\n";
        assert!(matches!(
            parse_fsm3(bad_initial_fail).unwrap_err().kind,
            Fsm3ParseErrorKind::FailDepth(_) | Fsm3ParseErrorKind::InitialFail
        ));

        let duplicate_transition = "lga-fsm3 v1\ninitial 0\nstates 2\n\
                                    state 0 fail=0 final=0\nstate 1 fail=0 final=1\n\
                                    0 1 a\n0 1 a\n";
        assert!(matches!(
            parse_fsm3(duplicate_transition).unwrap_err().kind,
            Fsm3ParseErrorKind::DuplicateTransition(0, _)
        ));
    }

    #[test]
    fn positive_step_respects_back_off_flags() {
        let (fa, _) = demo_matcher();
        let [a, d, z] = labels(["a", "d", "z"]);
        // State 4 has d -> 5 (raw final): it may not back off.
        assert_eq!(fa.positive_step(4, Some(d)), Some(5));
        assert_eq!(fa.positive_step(4, Some(a)), None);
        assert_eq!(fa.positive_step(4, None), None);
        // State 1 is unconstrained and falls back to the initial loop.
        assert_eq!(fa.positive_step(1, Some(z)), Some(0));
        // The initial state always stays available.
        assert_eq!(fa.positive_step(0, Some(z)), Some(0));
        assert_eq!(fa.positive_step(0, Some(a)), Some(1));
    }
}
