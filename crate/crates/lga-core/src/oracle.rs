//! Brute-force reference constructions.
//!
//! Everything in this module favors obviousness over speed: tries built by
//! direct insertion, suffix checks by slice comparison, exhaustive word
//! enumeration. These serve as independent ground truth for the optimized
//! matcher and application pipelines, both in tests and in the
//! `oracle-check` command.

use std::collections::BTreeSet;

use crate::automaton::{Automaton, StateId};
use crate::determinize::determinize;
use crate::label::Label;
use crate::paths::count_paths;

/// Deterministic trie accepting exactly the given word set. The empty word,
/// if present, makes the root final. An empty set yields the single-state
/// empty language.
pub fn trie_of_words(words: &BTreeSet<Vec<Label>>) -> Automaton {
    let mut next: Vec<Vec<(Label, StateId)>> = vec![Vec::new()];
    let mut finals: BTreeSet<StateId> = BTreeSet::new();
    for word in words {
        let mut cur: StateId = 0;
        for &label in word {
            cur = match next[cur as usize].iter().find(|&&(l, _)| l == label) {
                Some(&(_, dst)) => dst,
                None => {
                    let fresh = next.len() as StateId;
                    next.push(Vec::new());
                    next[cur as usize].push((label, fresh));
                    fresh
                }
            };
        }
        finals.insert(cur);
    }
    let transitions = next
        .iter()
        .enumerate()
        .flat_map(|(src, list)| list.iter().map(move |&(l, dst)| (src as StateId, l, dst)));
    Automaton::from_parts(next.len() as u32, 0, finals.iter().copied(), transitions)
        .expect("trie ids are dense by construction")
}

/// Every word over `alphabet` of length at most `max_len`, shortest first,
/// lexicographic within a length. Includes the empty word.
pub fn all_words(alphabet: &BTreeSet<Label>, max_len: usize) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Label>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next_layer = Vec::with_capacity(layer.len() * alphabet.len());
        for word in &layer {
            for &l in alphabet {
                let mut w = word.clone();
                w.push(l);
                next_layer.push(w);
            }
        }
        out.extend(next_layer.iter().cloned());
        layer = next_layer;
    }
    out
}

/// All positions `e` in `0..=w.len()` such that some word of the set is a
/// suffix of `w[..e]`, by direct slice comparison.
pub fn naive_match_ends(words: &BTreeSet<Vec<Label>>, w: &[Label]) -> Vec<usize> {
    (0..=w.len())
        .filter(|&e| {
            words
                .iter()
                .any(|p| p.len() <= e && w[e - p.len()..e] == p[..])
        })
        .collect()
}

/// Whether any word of the set occurs in `w` as a contiguous factor.
pub fn naive_contains_factor(words: &BTreeSet<Vec<Label>>, w: &[Label]) -> bool {
    !naive_match_ends(words, w).is_empty()
}

/// DFA for "ends with a word of the set" over a fixed alphabet, built the
/// slow way: a trie with self-loops on the root for every alphabet symbol,
/// then subset construction.
pub fn ends_with_dfa(words: &BTreeSet<Vec<Label>>, alphabet: &BTreeSet<Label>) -> Automaton {
    let trie = trie_of_words(words);
    let mut transitions: Vec<(StateId, Label, StateId)> = Vec::new();
    for src in 0..trie.state_count() {
        for &(l, dst) in trie.transitions(src) {
            transitions.push((src, l, dst));
        }
    }
    for &l in alphabet {
        transitions.push((trie.initial(), l, trie.initial()));
    }
    let nfa = Automaton::from_parts(
        trie.state_count(),
        trie.initial(),
        trie.finals().iter().copied(),
        transitions,
    )
    .expect("trie ids remain valid");
    determinize(&nfa)
}

/// The accepted label sequences of an automaton, up to `cap` of them in
/// lexicographic order. For an acyclic automaton a result shorter than
/// `cap` is the complete language.
pub fn enumerate_language(a: &Automaton, cap: usize) -> Vec<Vec<Label>> {
    count_paths(a, cap).sample_paths
}
