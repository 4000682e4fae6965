use super::alphabet::Alphabet;
use super::states::StateSet;
use crate::error::{Error, Result};

/// Deterministic finite automaton over input symbols (no end-markers).
///
/// `transitions[q][s]` is the successor of state `q` on the `s`-th alphabet
/// symbol; `None` marks a missing transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    transitions: Vec<Vec<Option<usize>>>,
    start: usize,
    accept: StateSet,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        transitions: Vec<Vec<Option<usize>>>,
        start: usize,
        accept: StateSet,
    ) -> Result<Self> {
        let n = transitions.len();
        if n == 0 {
            return Err(Error::Invariant("automaton needs at least one state".into()));
        }
        if start >= n {
            return Err(Error::Invariant(format!("start state {} out of range", start + 1)));
        }
        for row in &transitions {
            if row.len() != alphabet.len() {
                return Err(Error::Invariant("one transition slot per symbol required".into()));
            }
            if row.iter().flatten().any(|&t| t >= n) {
                return Err(Error::Invariant("transition target out of range".into()));
            }
        }
        accept.check_range(n, "accept")?;
        Ok(Self { alphabet, transitions, start, accept })
    }

    /// Complete automaton from a total transition function.
    pub fn complete(
        alphabet: Alphabet,
        transitions: Vec<Vec<usize>>,
        start: usize,
        accept: StateSet,
    ) -> Result<Self> {
        let transitions = transitions
            .into_iter()
            .map(|row| row.into_iter().map(Some).collect())
            .collect();
        Self::new(alphabet, transitions, start, accept)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accept(&self) -> &StateSet {
        &self.accept
    }

    pub fn next(&self, state: usize, symbol: usize) -> Option<usize> {
        self.transitions[state][symbol]
    }

    pub fn is_complete(&self) -> bool {
        self.transitions.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// State reached on `w`, or `None` if a transition is missing.
    pub fn run(&self, w: &str) -> Result<Option<usize>> {
        let mut q = self.start;
        for c in w.chars() {
            let s = self.alphabet.index_of(c)? - 1;
            match self.next(q, s) {
                Some(t) => q = t,
                None => return Ok(None),
            }
        }
        Ok(Some(q))
    }

    pub fn accepts(&self, w: &str) -> Result<bool> {
        Ok(self.run(w)?.is_some_and(|q| self.accept.contains(q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_ab() {
        // (ab)*: 0 start/accept, 1 after a, 2 dead.
        let d = Dfa::complete(
            Alphabet::ab(),
            vec![vec![1, 2], vec![2, 0], vec![2, 2]],
            0,
            StateSet::from_indices([0]),
        )
        .unwrap();
        assert!(d.accepts("").unwrap());
        assert!(d.accepts("abab").unwrap());
        assert!(!d.accepts("aba").unwrap());
        assert!(!d.accepts("ba").unwrap());
        assert!(d.is_complete());
    }

    #[test]
    fn partial_runs_reject() {
        let d = Dfa::new(Alphabet::ab(), vec![vec![Some(0), None]], 0, StateSet::from_indices([0]))
            .unwrap();
        assert!(!d.is_complete());
        assert!(d.accepts("aa").unwrap());
        assert!(!d.accepts("ab").unwrap());
    }
}
