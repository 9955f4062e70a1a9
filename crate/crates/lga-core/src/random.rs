//! Seeded random instances for benchmarks and property tests.
//!
//! Everything here is deterministic in the seed (a fixed ChaCha8 stream and
//! a fixed draw order), so benchmark numbers and property-test corpora are
//! reproducible across runs and machines.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::automaton::{trim, Automaton, StateId};
use crate::label::Label;
use crate::minimize::minimize;
use crate::oracle::trie_of_words;

/// Parameters of a random text/grammar instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    /// Label sequences drawn for the text automaton.
    pub sequence_count: u32,
    /// Sequences are uniformly `min_length..=min_length + 10` labels long.
    pub min_length: u32,
    /// Labels are `t0..t{alphabet_size-1}`, drawn uniformly.
    pub alphabet_size: u32,
    /// The grammar grows until it has at least this many states (or its
    /// word pool is exhausted).
    pub grammar_states: u32,
    pub seed: u64,
}

/// A zero where a positive count is required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{field} must be positive")]
pub struct RandomSpecError {
    pub field: &'static str,
}

impl RandomSpec {
    pub fn validate(&self) -> Result<(), RandomSpecError> {
        let fields = [
            ("sequence_count", self.sequence_count),
            ("min_length", self.min_length),
            ("alphabet_size", self.alphabet_size),
            ("grammar_states", self.grammar_states),
        ];
        match fields.iter().find(|&&(_, value)| value == 0) {
            Some(&(field, _)) => Err(RandomSpecError { field }),
            None => Ok(()),
        }
    }
}

/// Draws a text automaton (minimized deterministic trie of random
/// sequences) and a grammar automaton (minimized trie of shorter random
/// words, grown until it reaches `grammar_states` states). Both outputs are
/// acyclic, deterministic, trim, and fully determined by the seed.
pub fn random_instance(spec: &RandomSpec) -> Result<(Automaton, Automaton), RandomSpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let labels: Vec<Label> = (0..spec.alphabet_size)
        .map(|i| Label::new(&format!("t{i}")).expect("generated labels are valid"))
        .collect();

    let mut sequences: BTreeSet<Vec<Label>> = BTreeSet::new();
    for _ in 0..spec.sequence_count {
        let len = rng.random_range(spec.min_length..=spec.min_length + 10) as usize;
        sequences.insert(random_word(&mut rng, &labels, len));
    }
    let text = minimize(&trie_of_words(&sequences)).expect("tries are deterministic");

    let grammar = grow_grammar(&mut rng, &labels, spec.grammar_states);
    Ok((text, grammar))
}

fn random_word<R: Rng>(rng: &mut R, labels: &[Label], len: usize) -> Vec<Label> {
    (0..len)
        .map(|_| labels[rng.random_range(0..labels.len())])
        .collect()
}

/// Grows a word set in batches until its minimal automaton is big enough.
///
/// Shaped like hand-written rule sets rather than uniform noise: every word
/// starts with one of a few anchor labels (rule families trigger on
/// specific categories), and lengths 2..=5 are weighted 1/8, 1/2, 1/4, 1/8.
/// Anchoring keeps word-overlap — a suffix of one word being a prefix of
/// another — rare, which is what keeps matcher duplication low.
fn grow_grammar(rng: &mut ChaCha8Rng, labels: &[Label], target_states: u32) -> Automaton {
    let anchor_count = (labels.len() / 10).max(2).min(labels.len());
    let anchors = &labels[..anchor_count];
    let distinct_words: u128 = (2..=5u32)
        .map(|l| anchor_count as u128 * (labels.len() as u128).saturating_pow(l - 1))
        .sum();
    let word_cap = distinct_words.min(u128::from(target_states) * 64);
    let mut words: BTreeSet<Vec<Label>> = BTreeSet::new();
    loop {
        for _ in 0..16 {
            let len = match rng.random_range(0..8u32) {
                0 => 2,
                1..=4 => 3,
                5..=6 => 4,
                _ => 5,
            };
            let mut word = vec![anchors[rng.random_range(0..anchors.len())]];
            word.extend(random_word(rng, labels, len - 1));
            words.insert(word);
        }
        let grammar = minimize(&trie_of_words(&words)).expect("tries are deterministic");
        if grammar.state_count() >= target_states || words.len() as u128 >= word_cap {
            return grammar;
        }
    }
}

/// Random acyclic automaton for property testing: transitions only go from
/// lower to higher state ids, so the result is a DAG; with `deterministic`
/// set, no state carries duplicate labels. The result is trimmed and may
/// collapse to the empty language.
pub fn random_acyclic_automaton<R: Rng>(
    rng: &mut R,
    max_states: u32,
    labels: &[Label],
    deterministic: bool,
) -> Automaton {
    let n = rng.random_range(2..=max_states.max(2));
    let mut transitions: Vec<(StateId, Label, StateId)> = Vec::new();
    let fan_cap = 3.min(labels.len());
    for src in 0..n - 1 {
        let fan = rng.random_range(0..=fan_cap);
        if deterministic {
            let mut indices: Vec<usize> = (0..labels.len()).collect();
            indices.shuffle(rng);
            for &li in indices.iter().take(fan) {
                let dst = rng.random_range(src + 1..n);
                transitions.push((src, labels[li], dst));
            }
        } else {
            for _ in 0..fan {
                let li = rng.random_range(0..labels.len());
                let dst = rng.random_range(src + 1..n);
                transitions.push((src, labels[li], dst));
            }
        }
    }
    let mut finals: Vec<StateId> = vec![n - 1];
    for q in 0..n - 1 {
        if rng.random_range(0..4u32) == 0 {
            finals.push(q);
        }
    }
    let raw = Automaton::from_parts(n, 0, finals, transitions).expect("forward ids stay in range");
    trim(&raw)
}

/// Random short word set for matcher property tests; occasionally includes
/// the empty word when `allow_empty` is set.
pub fn random_word_set<R: Rng>(
    rng: &mut R,
    labels: &[Label],
    max_words: usize,
    max_len: usize,
    allow_empty: bool,
) -> BTreeSet<Vec<Label>> {
    let count = rng.random_range(1..=max_words);
    let mut words = BTreeSet::new();
    for _ in 0..count {
        let len = if allow_empty && rng.random_range(0..16u32) == 0 {
            0
        } else {
            rng.random_range(1..=max_len)
        };
        words.insert(random_word(rng, labels, len));
    }
    words
}
