//! Subset-construction determinization.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::label::Label;

/// Determinizes an automaton by the subset construction. The language is
/// preserved exactly. Subsets are named canonically (sorted member lists)
/// and the output is numbered in breadth-first discovery order with
/// label-sorted tie-breaking, so the result is independent of the input's
/// state numbering. Already-deterministic inputs come back isomorphic.
pub fn determinize(a: &Automaton) -> Automaton {
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let mut transitions: Vec<(StateId, Label, StateId)> = Vec::new();
    let mut finals: Vec<StateId> = Vec::new();
    let mut queue: VecDeque<StateId> = VecDeque::new();

    let start = vec![a.initial()];
    ids.insert(start.clone(), 0);
    subsets.push(start);
    queue.push_back(0);

    while let Some(id) = queue.pop_front() {
        let members = subsets[id as usize].clone();
        if members.iter().any(|&m| a.is_final(m)) {
            finals.push(id);
        }
        // Gather per-label target sets; BTreeMap iterates labels in text
        // order, which fixes the discovery order.
        let mut by_label: BTreeMap<Label, BTreeSet<StateId>> = BTreeMap::new();
        for &m in &members {
            for &(label, dst) in a.transitions(m) {
                by_label.entry(label).or_default().insert(dst);
            }
        }
        for (label, targets) in by_label {
            let key: Vec<StateId> = targets.into_iter().collect();
            let next = subsets.len() as StateId;
            let target_id = *ids.entry(key.clone()).or_insert_with(|| {
                subsets.push(key);
                queue.push_back(next);
                next
            });
            transitions.push((id, label, target_id));
        }
    }

    Automaton::from_parts(subsets.len() as u32, 0, finals, transitions)
        .expect("subset ids are dense")
}
