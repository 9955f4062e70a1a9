//! DFA minimization by partition refinement.

use std::collections::BTreeMap;

use crate::automaton::{trim, Automaton, PreconditionError, StateId};
use crate::label::Label;

/// Minimizes a deterministic automaton. The result is the minimal partial
/// DFA for the language over the labels that occur in the input: the absent
/// transitions act as one implicit dead sink, which the refinement treats as
/// its own class (two states with different defined-label sets are always
/// distinguishable on a trim machine). The input is trimmed first; the
/// output is renumbered in breadth-first order with label-sorted
/// tie-breaking.
pub fn minimize(a: &Automaton) -> Result<Automaton, PreconditionError> {
    if !a.is_deterministic() {
        return Err(PreconditionError::NotDeterministic);
    }
    let t = trim(a);
    if t.finals().is_empty() {
        return Ok(t); // Already the one-state empty language.
    }

    // Moore refinement. Signatures list only defined transitions: on a trim
    // machine every defined target is live, so "defined" vs "absent" is a
    // genuine distinction and the implicit sink never merges with a real
    // state.
    let n = t.state_count() as usize;
    let mut class: Vec<u32> = (0..n)
        .map(|q| u32::from(t.is_final(q as StateId)))
        .collect();
    let mut class_count = if t.finals().len() == n { 1 } else { 2 };
    loop {
        type Signature = (u32, Vec<(Label, u32)>);
        let mut next_ids: BTreeMap<Signature, u32> = BTreeMap::new();
        let mut next_class = vec![0u32; n];
        for q in 0..n {
            let sig: Signature = (
                class[q],
                t.transitions(q as StateId)
                    .iter()
                    .map(|&(label, dst)| (label, class[dst as usize]))
                    .collect(),
            );
            let fresh = next_ids.len() as u32;
            next_class[q] = *next_ids.entry(sig).or_insert(fresh);
        }
        let next_count = next_ids.len() as u32;
        // Splits only ever refine, so an unchanged count means the partition
        // is stable; still adopt the relabeled classes so ids stay dense.
        let stable = next_count == class_count;
        class = next_class;
        class_count = next_count;
        if stable {
            break;
        }
    }

    // Collapse classes, then renumber canonically.
    let rep_of_class: BTreeMap<u32, StateId> = (0..n)
        .map(|q| (class[q], q as StateId))
        .rev()
        .collect();
    let transitions = rep_of_class.iter().flat_map(|(&c, &rep)| {
        t.transitions(rep)
            .iter()
            .map(|&(label, dst)| (c, label, class[dst as usize]))
            .collect::<Vec<_>>()
    });
    let finals = t.finals().iter().map(|&f| class[f as usize]);
    let merged = Automaton::from_parts(
        class_count,
        class[t.initial() as usize],
        finals,
        transitions,
    )
    .expect("class ids are dense");
    Ok(trim(&merged)) // trim's BFS renumbering canonicalizes the result.
}
