use crate::scalar::Scalar;

/// One root estimate with its cached evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<S> {
    pub index: usize,
    pub x: S,
    /// Absent only for a terminal iterate that could not be evaluated
    /// (non-finite, escaped, or outside the domain).
    pub fx: Option<S>,
    /// Absent for derivative-free steps.
    pub dfx: Option<S>,
}

/// Root estimates in generation order; `index` runs 0, 1, 2, ...
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterateHistory<S> {
    entries: Vec<IterationRecord<S>>,
}

impl<S: Scalar> IterateHistory<S> {
    pub fn new() -> Self {
        IterateHistory {
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, x: S, fx: Option<S>, dfx: Option<S>) -> &IterationRecord<S> {
        let index = self.entries.len();
        self.entries.push(IterationRecord { index, x, fx, dfx });
        &self.entries[index]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[IterationRecord<S>] {
        &self.entries
    }

    pub fn last(&self) -> Option<&IterationRecord<S>> {
        self.entries.last()
    }

    /// The newest `n` records, oldest first.
    pub fn tail(&self, n: usize) -> &[IterationRecord<S>] {
        &self.entries[self.entries.len().saturating_sub(n)..]
    }

    pub fn xs(&self) -> Vec<S> {
        self.entries.iter().map(|r| r.x.clone()).collect()
    }

    /// `|x_last - x_previous|`, if there are two iterates.
    pub fn last_increment(&self) -> Option<S> {
        match self.entries.as_slice() {
            [.., prev, last] => Some((last.x.clone() - prev.x.clone()).abs()),
            _ => None,
        }
    }
}
