use std::fmt;

/// Outcome of an exhaustive or bounded law check.
///
/// `Fails` carries the first counterexample in canonical iteration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }

    /// Turns the first `Some` produced by the search into a failure.
    pub fn from_search(found: Option<W>) -> Self {
        match found {
            None => Verdict::Holds,
            Some(w) => Verdict::Fails(w),
        }
    }
}

impl<W: fmt::Display> fmt::Display for Verdict<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "ok"),
            Verdict::Fails(w) => write!(f, "counterexample: {w}"),
        }
    }
}
