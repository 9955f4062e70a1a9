//! Shared fixtures and small helpers for the unit tests.

use crate::automaton::Automaton;
use crate::codec::parse_fsa;
use crate::label::Label;

/// Canonical serialization of the four-state demo grammar
/// L = { x y d : x ∈ {a,b}, y ∈ {a,b,c,d} }.
pub(crate) const FIG6_FSA: &str = "lga-fsa v1\n\
initial 0\n\
final 3\n\
0 1 a\n\
0 1 b\n\
1 2 a\n\
1 2 b\n\
1 2 c\n\
1 2 d\n\
2 3 d\n";

/// The demo grammar as an automaton.
pub(crate) fn demo_grammar() -> Automaton {
    parse_fsa(FIG6_FSA).unwrap()
}

/// Three-slot demo text automaton {a,b}·{a,b,c,d}·{a,b,d}: 24 paths.
pub(crate) fn demo_text() -> Automaton {
    let [a, b, c, d] = labels(["a", "b", "c", "d"]);
    Automaton::from_parts(
        4,
        0,
        [3],
        [
            (0, a, 1),
            (0, b, 1),
            (1, a, 2),
            (1, b, 2),
            (1, c, 2),
            (1, d, 2),
            (2, a, 3),
            (2, b, 3),
            (2, d, 3),
        ],
    )
    .unwrap()
}

/// Interns a fixed-size array of label texts.
pub(crate) fn labels<const N: usize>(names: [&str; N]) -> [Label; N] {
    names.map(|s| Label::new(s).unwrap())
}

/// Interns a whitespace-separated label sequence.
pub(crate) fn word(s: &str) -> Vec<Label> {
    s.split_whitespace().map(|t| Label::new(t).unwrap()).collect()
}
