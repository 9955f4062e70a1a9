//! The automaton representation shared by every stage of the pipeline,
//! plus structural classification and trimming.
//!
//! An [`Automaton`] is a labeled directed multigraph with one initial state
//! and a set of final states. Transition functions are partial: there is no
//! explicit dead state anywhere in the toolkit. State ids are dense
//! (`0..state_count`), and every algorithm that constructs an automaton
//! numbers its output in breadth-first discovery order with label-sorted
//! tie-breaking, so results are deterministic and serializations are
//! byte-stable.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::label::Label;

/// Dense state identifier.
pub type StateId = u32;

/// Structural defects rejected by [`Automaton::from_parts`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("initial state {0} out of range (state count {1})")]
    InitialOutOfRange(StateId, u32),
    #[error("final state {0} out of range (state count {1})")]
    FinalOutOfRange(StateId, u32),
    #[error("transition {0} -{1}-> {2} has an endpoint out of range (state count {3})")]
    TransitionOutOfRange(StateId, Label, StateId, u32),
}

/// Violated operation precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreconditionError {
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton is not trim")]
    NotTrim,
    #[error("automaton is cyclic")]
    Cyclic,
}

/// Result of [`Automaton::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub acyclic: bool,
    pub deterministic: bool,
}

/// Labeled directed multigraph with one initial state and a final-state set.
#[derive(Clone, PartialEq, Eq)]
pub struct Automaton {
    state_count: u32,
    initial: StateId,
    finals: BTreeSet<StateId>,
    /// Per-state transition lists, sorted by (label text, target), no
    /// duplicate (label, target) pairs.
    transitions: Vec<Vec<(Label, StateId)>>,
}

impl Automaton {
    /// Builds an automaton from raw parts, sorting and deduplicating the
    /// transition lists and checking that every id is in range.
    pub fn from_parts(
        state_count: u32,
        initial: StateId,
        finals: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, Label, StateId)>,
    ) -> Result<Self, AutomatonError> {
        if initial >= state_count {
            return Err(AutomatonError::InitialOutOfRange(initial, state_count));
        }
        let mut final_set = BTreeSet::new();
        for f in finals {
            if f >= state_count {
                return Err(AutomatonError::FinalOutOfRange(f, state_count));
            }
            final_set.insert(f);
        }
        let mut lists: Vec<Vec<(Label, StateId)>> = vec![Vec::new(); state_count as usize];
        for (src, label, dst) in transitions {
            if src >= state_count || dst >= state_count {
                return Err(AutomatonError::TransitionOutOfRange(
                    src,
                    label,
                    dst,
                    state_count,
                ));
            }
            lists[src as usize].push((label, dst));
        }
        for list in &mut lists {
            list.sort();
            list.dedup();
        }
        Ok(Automaton {
            state_count,
            initial,
            finals: final_set,
            transitions: lists,
        })
    }

    /// The one-state automaton with no finals: the canonical empty language.
    pub fn empty_language() -> Self {
        Automaton {
            state_count: 1,
            initial: 0,
            finals: BTreeSet::new(),
            transitions: vec![Vec::new()],
        }
    }

    pub fn state_count(&self) -> u32 {
        self.state_count
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals.contains(&state)
    }

    /// Outgoing transitions of `state`, sorted by (label, target).
    pub fn transitions(&self, state: StateId) -> &[(Label, StateId)] {
        &self.transitions[state as usize]
    }

    /// All transitions as (src, label, dst), in (src, label, dst) order.
    pub fn transition_triples(
        &self,
    ) -> impl Iterator<Item = (StateId, Label, StateId)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(src, list)| {
            list.iter()
                .map(move |&(label, dst)| (src as StateId, label, dst))
        })
    }

    pub fn transition_count(&self) -> u64 {
        self.transitions.iter().map(|l| l.len() as u64).sum()
    }

    /// The set of labels occurring on transitions.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.transition_triples().map(|(_, l, _)| l).collect()
    }

    /// For deterministic automata: the target of the unique transition of
    /// `state` labeled `label`, if any.
    pub fn step(&self, state: StateId, label: Label) -> Option<StateId> {
        let list = &self.transitions[state as usize];
        // Insertion point of the first entry with this label.
        let idx = list.partition_point(|&(l, _)| l < label);
        list.get(idx)
            .filter(|&&(l, _)| l == label)
            .map(|&(_, dst)| dst)
    }

    /// Whether the automaton accepts the label sequence. Subset simulation,
    /// so nondeterministic inputs are handled exactly.
    pub fn accepts(&self, w: &[Label]) -> bool {
        let mut current: Vec<StateId> = vec![self.initial];
        for &label in w {
            let mut next: Vec<StateId> = Vec::new();
            for &q in &current {
                let list = self.transitions(q);
                let mut idx = list.partition_point(|&(l, _)| l < label);
                while let Some(&(l, dst)) = list.get(idx) {
                    if l != label {
                        break;
                    }
                    if !next.contains(&dst) {
                        next.push(dst);
                    }
                    idx += 1;
                }
            }
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|&q| self.is_final(q))
    }

    /// True iff no state has two transitions sharing a label.
    pub fn is_deterministic(&self) -> bool {
        self.transitions
            .iter()
            .all(|list| list.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// True iff the whole graph (reachable or not) has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        // Iterative three-color DFS.
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.state_count as usize];
        for root in 0..self.state_count {
            if color[root as usize] != WHITE {
                continue;
            }
            let mut stack: Vec<(StateId, usize)> = vec![(root, 0)];
            color[root as usize] = GRAY;
            while let Some(&mut (state, ref mut next)) = stack.last_mut() {
                if let Some(&(_, dst)) = self.transitions[state as usize].get(*next) {
                    *next += 1;
                    match color[dst as usize] {
                        GRAY => return false,
                        WHITE => {
                            color[dst as usize] = GRAY;
                            stack.push((dst, 0));
                        }
                        _ => {}
                    }
                } else {
                    color[state as usize] = BLACK;
                    stack.pop();
                }
            }
        }
        true
    }

    pub fn classify(&self) -> Classification {
        Classification {
            acyclic: self.is_acyclic(),
            deterministic: self.is_deterministic(),
        }
    }

    /// States reachable from the initial state.
    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count as usize];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial as usize] = true;
        while let Some(u) = queue.pop_front() {
            for &(_, dst) in self.transitions(u) {
                if !seen[dst as usize] {
                    seen[dst as usize] = true;
                    queue.push_back(dst);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); self.state_count as usize];
        for (src, _, dst) in self.transition_triples() {
            rev[dst as usize].push(src);
        }
        let mut seen = vec![false; self.state_count as usize];
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &f in &self.finals {
            if !seen[f as usize] {
                seen[f as usize] = true;
                queue.push_back(f);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &src in &rev[u as usize] {
                if !seen[src as usize] {
                    seen[src as usize] = true;
                    queue.push_back(src);
                }
            }
        }
        seen
    }

    /// True iff every state is both reachable and co-reachable, or the
    /// automaton is the canonical one-state empty language.
    pub fn is_trim(&self) -> bool {
        let reach = self.reachable();
        let coreach = self.coreachable();
        if reach.iter().zip(&coreach).all(|(&r, &c)| r && c) {
            return true;
        }
        self.state_count == 1 && self.finals.is_empty() && self.transitions[0].is_empty()
    }
}

impl std::fmt::Debug for Automaton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Automaton(states={}, initial={}, finals={:?})",
            self.state_count, self.initial, self.finals
        )?;
        for (src, label, dst) in self.transition_triples() {
            writeln!(f, "  {src} -{label}-> {dst}")?;
        }
        Ok(())
    }
}

/// Restricts `a` to states that are both reachable and co-reachable,
/// renumbering the result in breadth-first order. The language is preserved.
/// If no final state is reachable the result is the one-state empty
/// language.
pub fn trim(a: &Automaton) -> Automaton {
    let reach = a.reachable();
    let coreach = a.coreachable();
    let keep: Vec<bool> = reach
        .iter()
        .zip(&coreach)
        .map(|(&r, &c)| r && c)
        .collect();
    if !keep[a.initial as usize] {
        return Automaton::empty_language();
    }
    let kept_transitions = |state: StateId| {
        a.transitions(state)
            .iter()
            .filter(|&&(_, dst)| keep[dst as usize])
            .copied()
    };
    // Breadth-first renumbering over the kept subgraph.
    let mut id_map = vec![u32::MAX; a.state_count as usize];
    let mut order: Vec<StateId> = Vec::new();
    let mut queue = VecDeque::from([a.initial]);
    id_map[a.initial as usize] = 0;
    order.push(a.initial);
    while let Some(u) = queue.pop_front() {
        for (_, dst) in kept_transitions(u) {
            if id_map[dst as usize] == u32::MAX {
                id_map[dst as usize] = order.len() as u32;
                order.push(dst);
                queue.push_back(dst);
            }
        }
    }
    let finals = a
        .finals
        .iter()
        .filter(|&&f| id_map[f as usize] != u32::MAX)
        .map(|&f| id_map[f as usize]);
    let transitions = order.iter().flat_map(|&old| {
        kept_transitions(old)
            .map(|(label, dst)| (id_map[old as usize], label, id_map[dst as usize]))
            .collect::<Vec<_>>()
    });
    Automaton::from_parts(order.len() as u32, 0, finals, transitions)
        .expect("trim produces valid ids")
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::testutil::demo_grammar;

    fn lab(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn from_parts_validates_ranges() {
        let a = lab("a");
        assert!(matches!(
            Automaton::from_parts(1, 1, [], []),
            Err(AutomatonError::InitialOutOfRange(1, 1))
        ));
        assert!(matches!(
            Automaton::from_parts(1, 0, [2], []),
            Err(AutomatonError::FinalOutOfRange(2, 1))
        ));
        assert!(matches!(
            Automaton::from_parts(1, 0, [], [(0, a, 3)]),
            Err(AutomatonError::TransitionOutOfRange(0, _, 3, 1))
        ));
    }

    #[test]
    fn from_parts_sorts_and_dedups() {
        let (a, b) = (lab("a"), lab("b"));
        let m = Automaton::from_parts(2, 0, [1], [(0, b, 1), (0, a, 1), (0, b, 1)]).unwrap();
        assert_eq!(m.transitions(0), &[(a, 1), (b, 1)]);
        assert_eq!(m.transition_count(), 2);
    }

    #[test]
    fn classify_demo_grammar() {
        let g = demo_grammar();
        let c = g.classify();
        assert!(c.acyclic);
        assert!(c.deterministic);
    }

    #[test]
    fn classify_self_loop_is_cyclic_deterministic() {
        let a = lab("a");
        let m = Automaton::from_parts(1, 0, [0], [(0, a, 0)]).unwrap();
        let c = m.classify();
        assert!(!c.acyclic);
        assert!(c.deterministic);
    }

    #[test]
    fn classify_duplicate_label_is_nondeterministic() {
        let a = lab("a");
        let m = Automaton::from_parts(3, 0, [1, 2], [(0, a, 1), (0, a, 2)]).unwrap();
        assert!(!m.classify().deterministic);
    }

    #[test]
    fn step_finds_unique_target() {
        let g = demo_grammar();
        assert_eq!(g.step(0, lab("a")), Some(1));
        assert_eq!(g.step(0, lab("d")), None);
        assert_eq!(g.step(2, lab("d")), Some(3));
    }

    #[test]
    fn accepts_simulates_nondeterministic_machines() {
        let g = demo_grammar();
        let w = |s: &str| -> Vec<Label> { s.split_whitespace().map(lab).collect() };
        assert!(g.accepts(&w("a c d")));
        assert!(g.accepts(&w("b b d")));
        assert!(!g.accepts(&w("a c")));
        assert!(!g.accepts(&w("a c d d")));
        assert!(!g.accepts(&w("z")));

        // Two a-edges from the initial state; only one leads to acceptance.
        let (a, b) = (lab("a"), lab("b"));
        let m = Automaton::from_parts(4, 0, [3], [(0, a, 1), (0, a, 2), (2, b, 3)]).unwrap();
        assert!(m.accepts(&[a, b]));
        assert!(!m.accepts(&[a]));
        assert!(!m.accepts(&[a, b, b]));
    }

    #[test]
    fn trim_drops_unreachable_state() {
        let (a, b) = (lab("a"), lab("b"));
        // State 2 is unreachable; language {a}.
        let m = Automaton::from_parts(3, 0, [1], [(0, a, 1), (2, b, 1)]).unwrap();
        let t = trim(&m);
        assert_eq!(t.state_count(), 2);
        assert_eq!(t.transition_count(), 1);
        assert!(t.is_trim());
    }

    #[test]
    fn trim_of_empty_final_set_is_empty_language() {
        let a = lab("a");
        let m = Automaton::from_parts(2, 0, [], [(0, a, 1)]).unwrap();
        let t = trim(&m);
        assert_eq!(t.state_count(), 1);
        assert!(t.finals().is_empty());
        assert_eq!(t.transition_count(), 0);
        assert!(t.is_trim());
    }

    #[test]
    fn trim_is_idempotent() {
        let (a, b) = (lab("a"), lab("b"));
        let m = Automaton::from_parts(
            5,
            0,
            [2],
            [(0, a, 1), (1, b, 2), (0, b, 3), (4, a, 2)],
        )
        .unwrap();
        let once = trim(&m);
        let twice = trim(&once);
        assert_eq!(once, twice);
    }
}
