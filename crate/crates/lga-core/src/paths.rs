//! Path counting and enumeration, bounded language comparison, and
//! isomorphism checking — the measurement and oracle plumbing used by every
//! other module's tests.

use std::collections::{HashSet, VecDeque};

use crate::automaton::{trim, Automaton, PreconditionError, StateId};
use crate::determinize::determinize;
use crate::label::Label;

/// Ambiguity report for an automaton: the number of distinct initial→final
/// paths, and a bounded, lexicographically ordered sample of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathReport {
    /// `Some(n)` for automata whose accepting paths are finite in number;
    /// `None` when a cycle lies on an accepting path.
    pub path_count: Option<u64>,
    /// Accepted label sequences in lexicographic order, up to the sample
    /// limit. Exactly the accepted language when the limit is not hit.
    pub sample_paths: Vec<Vec<Label>>,
}

/// Counts initial→final paths by topological dynamic programming
/// (saturating at `u64::MAX`), and enumerates a lexicographic sample.
///
/// The count is the number of accepting *paths* of the automaton as given;
/// for deterministic automata this equals the number of distinct accepted
/// label sequences. Samples are always distinct sequences: nondeterministic
/// automata are determinized (language-preserving) before enumeration, and
/// for cyclic automata the enumeration is cut off at a bounded depth.
pub fn count_paths(a: &Automaton, sample_limit: usize) -> PathReport {
    let reach = a.reachable();
    let coreach = a.coreachable();
    let useful: Vec<bool> = reach
        .iter()
        .zip(&coreach)
        .map(|(&r, &c)| r && c)
        .collect();

    let path_count = if useful[a.initial() as usize] {
        count_useful_paths(a, &useful)
    } else {
        Some(0)
    };

    let sample_paths = if sample_limit == 0 || path_count == Some(0) {
        Vec::new()
    } else {
        let det = if a.is_deterministic() {
            trim(a)
        } else {
            trim(&determinize(a))
        };
        let depth_cap = match path_count {
            Some(_) => usize::MAX, // acyclic on useful states: paths are simple
            None => 2 * det.state_count() as usize + 16,
        };
        enumerate_lexicographic(&det, sample_limit, depth_cap)
    };
    PathReport {
        path_count,
        sample_paths,
    }
}

/// Kahn topological order over useful states and edges; `None` if the
/// useful subgraph has a cycle.
fn useful_topo_order(a: &Automaton, useful: &[bool]) -> Option<Vec<StateId>> {
    let n = a.state_count() as usize;
    let mut indegree = vec![0u32; n];
    let mut useful_count = 0u32;
    for q in 0..n {
        if !useful[q] {
            continue;
        }
        useful_count += 1;
        for &(_, dst) in a.transitions(q as StateId) {
            if useful[dst as usize] {
                indegree[dst as usize] += 1;
            }
        }
    }
    let mut queue: VecDeque<StateId> = (0..n as u32)
        .filter(|&q| useful[q as usize] && indegree[q as usize] == 0)
        .collect();
    let mut order: Vec<StateId> = Vec::with_capacity(useful_count as usize);
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for &(_, dst) in a.transitions(q) {
            if useful[dst as usize] {
                indegree[dst as usize] -= 1;
                if indegree[dst as usize] == 0 {
                    queue.push_back(dst);
                }
            }
        }
    }
    (order.len() == useful_count as usize).then_some(order)
}

/// DP over the useful subgraph; `None` if it has a cycle.
fn count_useful_paths(a: &Automaton, useful: &[bool]) -> Option<u64> {
    let order = useful_topo_order(a, useful)?;
    let mut from: Vec<u64> = vec![0; a.state_count() as usize];
    for &q in order.iter().rev() {
        let mut total: u64 = u64::from(a.is_final(q));
        for &(_, dst) in a.transitions(q) {
            if useful[dst as usize] {
                total = total.saturating_add(from[dst as usize]);
            }
        }
        from[q as usize] = total;
    }
    Some(from[a.initial() as usize])
}

/// Length of the longest accepted label sequence. `Some(0)` when the
/// language is empty or contains only the empty word; `None` when a cycle
/// lies on an accepting path, so no longest word exists.
pub fn longest_accepted_len(a: &Automaton) -> Option<usize> {
    let reach = a.reachable();
    let coreach = a.coreachable();
    let useful: Vec<bool> = reach
        .iter()
        .zip(&coreach)
        .map(|(&r, &c)| r && c)
        .collect();
    if !useful[a.initial() as usize] {
        return Some(0);
    }
    let order = useful_topo_order(a, &useful)?;
    // Longest useful path from each state to a final state. Every useful
    // state has one: the witness path to a final runs through useful states.
    let mut best: Vec<Option<usize>> = vec![None; a.state_count() as usize];
    for &q in order.iter().rev() {
        let mut b = a.is_final(q).then_some(0);
        for &(_, dst) in a.transitions(q) {
            if useful[dst as usize] {
                if let Some(d) = best[dst as usize] {
                    b = Some(b.map_or(d + 1, |cur| cur.max(d + 1)));
                }
            }
        }
        best[q as usize] = b;
    }
    Some(best[a.initial() as usize].expect("useful initial state reaches a final state"))
}

/// Lexicographic DFS over a deterministic automaton. With a depth cap the
/// result is the lexicographic enumeration of the accepted sequences no
/// longer than the cap.
fn enumerate_lexicographic(det: &Automaton, limit: usize, depth_cap: usize) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = Vec::new();
    let mut word: Vec<Label> = Vec::new();
    // Stack of (state, next transition index).
    let mut stack: Vec<(StateId, usize)> = vec![(det.initial(), 0)];
    if det.is_final(det.initial()) {
        out.push(Vec::new());
    }
    while let Some(&mut (state, ref mut next)) = stack.last_mut() {
        if out.len() >= limit {
            break;
        }
        match det.transitions(state).get(*next) {
            Some(&(label, dst)) if word.len() < depth_cap => {
                *next += 1;
                word.push(label);
                stack.push((dst, 0));
                if det.is_final(dst) {
                    out.push(word.clone());
                }
            }
            _ => {
                stack.pop();
                word.pop();
            }
        }
    }
    out
}

/// True iff `a` and `b` accept exactly the same label sequences of length
/// ≤ `max_len`. For acyclic automata with `max_len` at least the longest
/// path length, this is exact language equality. Inputs may be
/// nondeterministic (they are determinized internally) or cyclic.
pub fn languages_equal_bounded(a: &Automaton, b: &Automaton, max_len: usize) -> bool {
    let da = if a.is_deterministic() { a.clone() } else { determinize(a) };
    let db = if b.is_deterministic() { b.clone() } else { determinize(b) };
    // Breadth-first product walk; `None` is the implicit sink.
    type Pair = (Option<StateId>, Option<StateId>);
    let start: Pair = (Some(da.initial()), Some(db.initial()));
    let mut seen: HashSet<Pair> = HashSet::from([start]);
    let mut queue: VecDeque<(Pair, usize)> = VecDeque::from([(start, 0)]);
    while let Some(((sa, sb), depth)) = queue.pop_front() {
        let fa = sa.is_some_and(|q| da.is_final(q));
        let fb = sb.is_some_and(|q| db.is_final(q));
        if fa != fb {
            return false;
        }
        if depth == max_len {
            continue;
        }
        let mut labels: Vec<Label> = Vec::new();
        if let Some(q) = sa {
            labels.extend(da.transitions(q).iter().map(|&(l, _)| l));
        }
        if let Some(q) = sb {
            labels.extend(db.transitions(q).iter().map(|&(l, _)| l));
        }
        labels.sort();
        labels.dedup();
        for label in labels {
            let na = sa.and_then(|q| da.step(q, label));
            let nb = sb.and_then(|q| db.step(q, label));
            let pair = (na, nb);
            if pair == (None, None) {
                continue;
            }
            if seen.insert(pair) {
                queue.push_back((pair, depth + 1));
            }
        }
    }
    true
}

/// True iff a relabeling of states maps `a` onto `b`, preserving the
/// initial state, the final set, and every transition. Both inputs must be
/// deterministic and trim; the check is one parallel breadth-first walk.
pub fn isomorphic(a: &Automaton, b: &Automaton) -> Result<bool, PreconditionError> {
    for m in [a, b] {
        if !m.is_deterministic() {
            return Err(PreconditionError::NotDeterministic);
        }
        if !m.is_trim() {
            return Err(PreconditionError::NotTrim);
        }
    }
    if a.state_count() != b.state_count()
        || a.finals().len() != b.finals().len()
        || a.transition_count() != b.transition_count()
    {
        return Ok(false);
    }
    let mut map: Vec<Option<StateId>> = vec![None; a.state_count() as usize];
    let mut mapped_to: Vec<bool> = vec![false; b.state_count() as usize];
    map[a.initial() as usize] = Some(b.initial());
    mapped_to[b.initial() as usize] = true;
    let mut queue = VecDeque::from([a.initial()]);
    while let Some(u) = queue.pop_front() {
        let v = map[u as usize].expect("queued states are mapped");
        if a.is_final(u) != b.is_final(v) {
            return Ok(false);
        }
        let ta = a.transitions(u);
        let tb = b.transitions(v);
        if ta.len() != tb.len() {
            return Ok(false);
        }
        for (&(la, da), &(lb, db)) in ta.iter().zip(tb) {
            if la != lb {
                return Ok(false);
            }
            match map[da as usize] {
                Some(mapped) => {
                    if mapped != db {
                        return Ok(false);
                    }
                }
                None => {
                    if mapped_to[db as usize] {
                        return Ok(false); // not injective
                    }
                    map[da as usize] = Some(db);
                    mapped_to[db as usize] = true;
                    queue.push_back(da);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{demo_grammar, demo_text, labels, word};

    #[test]
    fn counts_the_demo_text_paths() {
        // Three slots with 2, 4, and 3 alternatives: 24 paths.
        let t = demo_text();
        let report = count_paths(&t, 0);
        assert_eq!(report.path_count, Some(24));
    }

    #[test]
    fn linear_chain_has_one_path() {
        let [a] = labels(["a"]);
        let chain =
            Automaton::from_parts(4, 0, [3], [(0, a, 1), (1, a, 2), (2, a, 3)]).unwrap();
        assert_eq!(count_paths(&chain, 0).path_count, Some(1));
    }

    #[test]
    fn samples_enumerate_lexicographically() {
        let t = demo_text();
        let report = count_paths(&t, usize::MAX);
        assert_eq!(report.sample_paths.len(), 24);
        assert_eq!(report.sample_paths[0], word("a a a"));
        assert_eq!(report.sample_paths[23], word("b d d"));
        let mut sorted = report.sample_paths.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, report.sample_paths);
    }

    #[test]
    fn cycle_on_accepting_path_is_unbounded() {
        let [a, b] = labels(["a", "b"]);
        let m = Automaton::from_parts(2, 0, [1], [(0, a, 0), (0, b, 1)]).unwrap();
        let report = count_paths(&m, 3);
        assert_eq!(report.path_count, None);
        // L = a*b; the depth-capped enumeration yields three distinct words
        // of that shape, in ascending lexicographic order.
        assert_eq!(report.sample_paths.len(), 3);
        for w in &report.sample_paths {
            let (last, init) = w.split_last().unwrap();
            assert_eq!(*last, b);
            assert!(init.iter().all(|&l| l == a));
        }
        let mut sorted = report.sample_paths.clone();
        sorted.sort();
        assert_eq!(sorted, report.sample_paths);
    }

    #[test]
    fn unreachable_cycle_does_not_mark_unbounded() {
        let [a] = labels(["a"]);
        let m = Automaton::from_parts(3, 0, [1], [(0, a, 1), (2, a, 2)]).unwrap();
        assert_eq!(count_paths(&m, 0).path_count, Some(1));
    }

    #[test]
    fn longest_accepted_len_measures_the_useful_subgraph() {
        let [a, b, c] = labels(["a", "b", "c"]);
        assert_eq!(longest_accepted_len(&demo_text()), Some(3));
        // Mixed lengths: {a, a b c} has a longest word of 3.
        let mixed = Automaton::from_parts(
            4,
            0,
            [1, 3],
            [(0, a, 1), (1, b, 2), (2, c, 3)],
        )
        .unwrap();
        assert_eq!(longest_accepted_len(&mixed), Some(3));
        // A dead branch with a cycle does not count.
        let dead = Automaton::from_parts(3, 0, [1], [(0, a, 1), (0, b, 2), (2, c, 2)]).unwrap();
        assert_eq!(longest_accepted_len(&dead), Some(1));
        // Cycle on an accepting path: unbounded.
        let unbounded = Automaton::from_parts(2, 0, [1], [(0, a, 0), (0, b, 1)]).unwrap();
        assert_eq!(longest_accepted_len(&unbounded), None);
        // Degenerate languages.
        assert_eq!(longest_accepted_len(&Automaton::empty_language()), Some(0));
        let epsilon = Automaton::from_parts(1, 0, [0], []).unwrap();
        assert_eq!(longest_accepted_len(&epsilon), Some(0));
    }

    #[test]
    fn bounded_equality_accepts_identical_and_rejects_final_flip() {
        let g = demo_grammar();
        assert!(languages_equal_bounded(&g, &g, 8));
        let [a, b, c, d] = labels(["a", "b", "c", "d"]);
        let flipped = Automaton::from_parts(
            4,
            0,
            [2, 3],
            [
                (0, a, 1),
                (0, b, 1),
                (1, a, 2),
                (1, b, 2),
                (1, c, 2),
                (1, d, 2),
                (2, d, 3),
            ],
        )
        .unwrap();
        assert!(!languages_equal_bounded(&g, &flipped, 8));
    }

    #[test]
    fn bounded_equality_sees_through_nondeterminism() {
        let [a, b] = labels(["a", "b"]);
        let nondet =
            Automaton::from_parts(4, 0, [2, 3], [(0, a, 1), (1, b, 2), (0, a, 3)]).unwrap();
        let det = Automaton::from_parts(3, 0, [1, 2], [(0, a, 1), (1, b, 2)]).unwrap();
        assert!(languages_equal_bounded(&nondet, &det, 4));
    }

    #[test]
    fn isomorphic_accepts_renumbering_and_rejects_size_mismatch() {
        let g = demo_grammar();
        // Renumber: swap ids 1 and 2.
        let [a, b, c, d] = labels(["a", "b", "c", "d"]);
        let renumbered = Automaton::from_parts(
            4,
            0,
            [3],
            [
                (0, a, 2),
                (0, b, 2),
                (2, a, 1),
                (2, b, 1),
                (2, c, 1),
                (2, d, 1),
                (1, d, 3),
            ],
        )
        .unwrap();
        assert!(isomorphic(&g, &renumbered).unwrap());
        let chain = Automaton::from_parts(2, 0, [1], [(0, a, 1)]).unwrap();
        assert!(!isomorphic(&g, &chain).unwrap());
    }

    #[test]
    fn isomorphic_checks_preconditions() {
        let [a] = labels(["a"]);
        let nondet = Automaton::from_parts(3, 0, [1, 2], [(0, a, 1), (0, a, 2)]).unwrap();
        let chain = Automaton::from_parts(2, 0, [1], [(0, a, 1)]).unwrap();
        assert_eq!(
            isomorphic(&nondet, &chain),
            Err(PreconditionError::NotDeterministic)
        );
        let untrimmed = Automaton::from_parts(3, 0, [1], [(0, a, 1)]).unwrap();
        assert_eq!(
            isomorphic(&untrimmed, &chain),
            Err(PreconditionError::NotTrim)
        );
    }
}
