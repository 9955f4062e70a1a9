//! Interned transition labels.
//!
//! Labels are arbitrary non-empty tokens without whitespace (POS tags,
//! feature bundles like `m:s`, canonical forms, plain letters). They are
//! interned into a global table so that comparing and hashing a label is an
//! integer operation, and so that labels can be shared freely between
//! automata. Tokens beginning with `<` are reserved; only the wildcard `<?>`
//! and the unknown-word marker `<UNK>` are registered.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use thiserror::Error;

/// The reserved wildcard token (matches any label during matcher lookup).
pub const WILDCARD_TEXT: &str = "<?>";
/// The reserved analysis label for unknown words.
pub const UNKNOWN_TEXT: &str = "<UNK>";

/// Reasons a token is not a valid label.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("label is empty")]
    Empty,
    #[error("label {0:?} contains whitespace")]
    Whitespace(String),
    #[error("label {0:?} contains the comment character '#'")]
    CommentChar(String),
    #[error("label {0:?} uses the reserved '<' prefix (only \"<?>\" and \"<UNK>\" are registered)")]
    Reserved(String),
}

struct Interner {
    ids: HashMap<&'static str, u32>,
    texts: Vec<&'static str>,
}

static INTERNER: LazyLock<RwLock<Interner>> = LazyLock::new(|| {
    RwLock::new(Interner {
        ids: HashMap::new(),
        texts: Vec::new(),
    })
});

/// An interned label. Copyable, hashable, ordered by its text.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Label(u32);

impl Label {
    /// Validates and interns a token.
    pub fn new(text: &str) -> Result<Self, LabelError> {
        if text.is_empty() {
            return Err(LabelError::Empty);
        }
        if text.chars().any(char::is_whitespace) {
            return Err(LabelError::Whitespace(text.to_string()));
        }
        if text.contains('#') {
            return Err(LabelError::CommentChar(text.to_string()));
        }
        if text.starts_with('<') && text != WILDCARD_TEXT && text != UNKNOWN_TEXT {
            return Err(LabelError::Reserved(text.to_string()));
        }
        Ok(Self::intern(text))
    }

    /// The wildcard label `<?>`.
    pub fn wildcard() -> Self {
        Self::intern(WILDCARD_TEXT)
    }

    /// The unknown-word label `<UNK>`.
    pub fn unknown() -> Self {
        Self::intern(UNKNOWN_TEXT)
    }

    /// Looks a token up without interning it. Returns `None` for tokens that
    /// were never interned; callers treat those as labels that cannot occur
    /// in any automaton. This keeps streaming scans from accumulating
    /// foreign vocabulary.
    pub fn lookup(text: &str) -> Option<Self> {
        INTERNER.read().unwrap().ids.get(text).copied().map(Label)
    }

    /// The label's text. Interned strings live for the whole process.
    pub fn as_str(self) -> &'static str {
        INTERNER.read().unwrap().texts[self.0 as usize]
    }

    pub fn is_wildcard(self) -> bool {
        self.as_str() == WILDCARD_TEXT
    }

    fn intern(text: &str) -> Self {
        if let Some(&id) = INTERNER.read().unwrap().ids.get(text) {
            return Label(id);
        }
        let mut inner = INTERNER.write().unwrap();
        if let Some(&id) = inner.ids.get(text) {
            return Label(id);
        }
        let leaked: &'static str = Box::leak(text.to_string().into_boxed_str());
        let id = u32::try_from(inner.texts.len()).expect("interner overflow");
        inner.texts.push(leaked);
        inner.ids.insert(leaked, id);
        Label(id)
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            return std::cmp::Ordering::Equal;
        }
        self.as_str().cmp(other.as_str())
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({})", self.as_str())
    }
}
