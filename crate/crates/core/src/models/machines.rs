use std::fmt::Debug;

use num::traits::Zero;
use num::BigRational;

use super::alphabet::Alphabet;
use super::states::{Partition, StateSet};
use crate::error::{Error, Result};
use crate::numkit::{
    validate_family, CMatrix, Entry, FamilyKind, Matrix, RMatrix, SparseColumns, C64,
    VALIDATION_TOL,
};

/// Shared surface of the machines that can carry postselection sets.
pub trait BaseMachine: Clone + Debug + PartialEq + Send + Sync {
    fn alphabet(&self) -> &Alphabet;
    fn state_count(&self) -> usize;
    fn accept(&self) -> &StateSet;
    fn with_accept(&self, accept: StateSet) -> Result<Self>;
}

fn check_square<T: Entry>(m: &Matrix<T>, n: usize, label: &str) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::Invariant(format!(
            "matrix for `{label}` is {}x{}, expected {n}x{n}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Real-time probabilistic automaton. `transitions[t]` is the column-stochastic
/// matrix for tape symbol `t`; `A[j][i]` is the probability of moving from
/// state `i` to state `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PfaMachine {
    alphabet: Alphabet,
    transitions: Vec<RMatrix>,
    sparse: Vec<SparseColumns<BigRational>>,
    accept: StateSet,
}

impl PfaMachine {
    pub fn new(alphabet: Alphabet, transitions: Vec<RMatrix>, accept: StateSet) -> Result<Self> {
        if transitions.len() != alphabet.tape_len() {
            return Err(Error::Invariant(format!(
                "expected {} transition matrices, got {}",
                alphabet.tape_len(),
                transitions.len()
            )));
        }
        let n = transitions[0].rows();
        for (t, m) in transitions.iter().enumerate() {
            let label = alphabet.tape_label(t);
            check_square(m, n, &label)?;
            let report = validate_family(FamilyKind::ColumnStochastic, std::slice::from_ref(m), 0.0)?;
            if !report.pass() {
                return Err(Error::Invariant(format!(
                    "matrix for `{label}` is not column-stochastic (violation {:e})",
                    report.max_violation()
                )));
            }
        }
        accept.check_range(n, "accept")?;
        let sparse = transitions.iter().map(SparseColumns::from_matrix).collect();
        Ok(Self { alphabet, transitions, sparse, accept })
    }

    pub fn transitions(&self) -> &[RMatrix] {
        &self.transitions
    }

    /// Column-compressed transition matrix for `tape_symbol`.
    pub fn sparse(&self, tape_symbol: usize) -> &SparseColumns<BigRational> {
        &self.sparse[tape_symbol]
    }

    pub fn transition(&self, tape_symbol: usize) -> &RMatrix {
        &self.transitions[tape_symbol]
    }

    /// States reachable with positive probability after `¢` and any number of
    /// input symbols (i.e. before the `$` transition).
    pub fn reachable_before_end(&self) -> StateSet {
        let n = self.state_count();
        let successors = |from: &StateSet, m: &RMatrix| -> StateSet {
            from.iter()
                .flat_map(|i| (0..n).filter(move |&j| !m.get(j, i).is_zero()))
                .collect()
        };
        let mut seen = successors(&StateSet::from_indices([0]), self.transition(0));
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = StateSet::new();
            for t in 1..self.alphabet.dollar() {
                for j in successors(&frontier, self.transition(t)).iter() {
                    if !seen.contains(j) {
                        seen.insert(j);
                        next.insert(j);
                    }
                }
            }
            frontier = next;
        }
        seen
    }
}

impl BaseMachine for PfaMachine {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.transitions[0].rows()
    }

    fn accept(&self) -> &StateSet {
        &self.accept
    }

    fn with_accept(&self, accept: StateSet) -> Result<Self> {
        accept.check_range(self.state_count(), "accept")?;
        Ok(Self { accept, ..self.clone() })
    }
}

/// Real-time quantum automaton with general admissible operators.
#[derive(Clone, Debug, PartialEq)]
pub struct QfaMachine {
    alphabet: Alphabet,
    kraus: Vec<Vec<CMatrix>>,
    accept: StateSet,
}

impl QfaMachine {
    pub fn new(alphabet: Alphabet, kraus: Vec<Vec<CMatrix>>, accept: StateSet) -> Result<Self> {
        if kraus.len() != alphabet.tape_len() {
            return Err(Error::Invariant(format!(
                "expected {} Kraus collections, got {}",
                alphabet.tape_len(),
                kraus.len()
            )));
        }
        let n = kraus
            .first()
            .and_then(|ops| ops.first())
            .map(|m| m.rows())
            .ok_or_else(|| Error::Invariant("Kraus collections must be nonempty".into()))?;
        for (t, ops) in kraus.iter().enumerate() {
            let label = alphabet.tape_label(t);
            if ops.is_empty() {
                return Err(Error::Invariant(format!("no Kraus elements for `{label}`")));
            }
            for m in ops {
                check_square(m, n, &label)?;
                if !m.is_finite() {
                    return Err(Error::Invariant(format!("non-finite entry for `{label}`")));
                }
            }
            let report = validate_family(FamilyKind::Admissible, ops, VALIDATION_TOL)?;
            if !report.pass() {
                return Err(Error::Invariant(format!(
                    "Kraus collection for `{label}` is not admissible (violation {:e})",
                    report.max_violation()
                )));
            }
        }
        accept.check_range(n, "accept")?;
        Ok(Self { alphabet, kraus, accept })
    }

    /// Probabilistic embedding: `E_(j,i) = sqrt(A[j,i]) |j><i|` for every
    /// positive entry of every transition matrix.
    pub fn embed(pfa: &PfaMachine) -> Self {
        let n = pfa.state_count();
        let kraus = pfa
            .transitions()
            .iter()
            .map(|a| {
                let mut ops = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let p = a.get(j, i);
                        if !p.is_zero() {
                            let mut e = CMatrix::zeros(n, n);
                            e.set(j, i, C64::new(p.to_c64().re.sqrt(), 0.0));
                            ops.push(e);
                        }
                    }
                }
                ops
            })
            .collect();
        Self { alphabet: pfa.alphabet().clone(), kraus, accept: pfa.accept().clone() }
    }

    pub fn kraus(&self) -> &[Vec<CMatrix>] {
        &self.kraus
    }

    pub fn operators(&self, tape_symbol: usize) -> &[CMatrix] {
        &self.kraus[tape_symbol]
    }
}

impl BaseMachine for QfaMachine {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn state_count(&self) -> usize {
        self.kraus[0][0].rows()
    }

    fn accept(&self) -> &StateSet {
        &self.accept
    }

    fn with_accept(&self, accept: StateSet) -> Result<Self> {
        accept.check_range(self.state_count(), "accept")?;
        Ok(Self { accept, ..self.clone() })
    }
}

/// Kondacs-Watrous automaton: a unitary step followed by a projective
/// measurement into accept / reject / restart / continue after every symbol.
///
/// Without restart states it is the plain (halting) variant.
#[derive(Clone, Debug, PartialEq)]
pub struct KwqfaMachine {
    alphabet: Alphabet,
    unitaries: Vec<CMatrix>,
    sparse: Vec<SparseColumns<C64>>,
    partition: Partition,
}

impl KwqfaMachine {
    pub fn new(alphabet: Alphabet, unitaries: Vec<CMatrix>, partition: Partition) -> Result<Self> {
        if unitaries.len() != alphabet.tape_len() {
            return Err(Error::Invariant(format!(
                "expected {} unitaries, got {}",
                alphabet.tape_len(),
                unitaries.len()
            )));
        }
        let n = unitaries[0].rows();
        for (t, u) in unitaries.iter().enumerate() {
            let label = alphabet.tape_label(t);
            check_square(u, n, &label)?;
            let report = validate_family(FamilyKind::Unitary, std::slice::from_ref(u), VALIDATION_TOL)?;
            if !report.pass() {
                return Err(Error::Invariant(format!(
                    "matrix for `{label}` is not unitary (violation {:e})",
                    report.max_violation()
                )));
            }
        }
        partition.check(n)?;
        let sparse = unitaries.iter().map(SparseColumns::from_matrix).collect();
        Ok(Self { alphabet, unitaries, sparse, partition })
    }

    pub fn sparse(&self, tape_symbol: usize) -> &SparseColumns<C64> {
        &self.sparse[tape_symbol]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.unitaries[0].rows()
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn unitary(&self, tape_symbol: usize) -> &CMatrix {
        &self.unitaries[tape_symbol]
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn nonhalting(&self) -> StateSet {
        self.partition.nonhalting(self.state_count())
    }

    pub fn has_restart(&self) -> bool {
        !self.partition.restart.is_empty()
    }
}

/// When a probabilistic restart machine inspects its state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltTiming {
    /// After every transition.
    PerStep,
    /// Only after the `$` transition; halting and restart states must be
    /// unreachable earlier.
    AtEndOnly,
}

/// Probabilistic automaton with restart. The wrapped PFA's accept set is `Q_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestartPfa {
    pfa: PfaMachine,
    reject: StateSet,
    restart: StateSet,
    halt: HaltTiming,
}

impl RestartPfa {
    pub fn new(pfa: PfaMachine, reject: StateSet, restart: StateSet, halt: HaltTiming) -> Result<Self> {
        let n = pfa.state_count();
        let partition = Partition::new(pfa.accept().clone(), reject.clone(), restart.clone());
        partition.check(n)?;
        if halt == HaltTiming::AtEndOnly {
            let early = pfa.reachable_before_end();
            let bad: Vec<usize> = early
                .iter()
                .filter(|&i| partition.accept.contains(i) || partition.reject.contains(i) || partition.restart.contains(i))
                .collect();
            if let Some(&q) = bad.first() {
                return Err(Error::Invariant(format!(
                    "halting/restart state {} is reachable before `$` in an at-end machine",
                    q + 1
                )));
            }
        }
        Ok(Self { pfa, reject, restart, halt })
    }

    pub fn pfa(&self) -> &PfaMachine {
        &self.pfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pfa.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.pfa.state_count()
    }

    pub fn accept(&self) -> &StateSet {
        self.pfa.accept()
    }

    pub fn reject(&self) -> &StateSet {
        &self.reject
    }

    pub fn restart(&self) -> &StateSet {
        &self.restart
    }

    pub fn halt(&self) -> HaltTiming {
        self.halt
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.accept().clone(), self.reject.clone(), self.restart.clone())
    }
}

/// Quantum automaton with restart, measured once per round after `$`.
/// Every state outside `Q_a` and `Q_r` is a restart state.
#[derive(Clone, Debug, PartialEq)]
pub struct RestartQfa {
    qfa: QfaMachine,
    reject: StateSet,
}

impl RestartQfa {
    pub fn new(qfa: QfaMachine, reject: StateSet) -> Result<Self> {
        reject.check_range(qfa.state_count(), "reject")?;
        if !qfa.accept().is_disjoint(&reject) {
            return Err(Error::Invariant("accept and reject sets must be disjoint".into()));
        }
        Ok(Self { qfa, reject })
    }

    pub fn qfa(&self) -> &QfaMachine {
        &self.qfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.qfa.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.qfa.state_count()
    }

    pub fn accept(&self) -> &StateSet {
        self.qfa.accept()
    }

    pub fn reject(&self) -> &StateSet {
        &self.reject
    }

    pub fn restart(&self) -> StateSet {
        self.accept().union(&self.reject).complement(self.state_count())
    }
}

/// A base machine with postselection accept and reject sets.
///
/// Positive postselection mass on every input is a semantic property,
/// checked when the machine is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct PostMachine<B> {
    base: B,
    post_accept: StateSet,
    post_reject: StateSet,
}

impl<B: BaseMachine> PostMachine<B> {
    pub fn new(base: B, post_accept: StateSet, post_reject: StateSet) -> Result<Self> {
        let n = base.state_count();
        post_accept.check_range(n, "postaccept")?;
        post_reject.check_range(n, "postreject")?;
        if !post_accept.is_disjoint(&post_reject) {
            return Err(Error::Invariant(
                "postselection accept and reject sets must be disjoint".into(),
            ));
        }
        Ok(Self { base, post_accept, post_reject })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.base.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.base.state_count()
    }

    pub fn post_accept(&self) -> &StateSet {
        &self.post_accept
    }

    pub fn post_reject(&self) -> &StateSet {
        &self.post_reject
    }

    pub fn postselection(&self) -> StateSet {
        self.post_accept.union(&self.post_reject)
    }
}

/// Decision taken by a Latvian machine when the postselection mass is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tau {
    Accept,
    Reject,
}

impl Tau {
    pub fn flipped(self) -> Self {
        match self {
            Tau::Accept => Tau::Reject,
            Tau::Reject => Tau::Accept,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatvianPostMachine<B> {
    post: PostMachine<B>,
    tau: Tau,
}

impl<B: BaseMachine> LatvianPostMachine<B> {
    pub fn new(post: PostMachine<B>, tau: Tau) -> Self {
        Self { post, tau }
    }

    pub fn post(&self) -> &PostMachine<B> {
        &self.post
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.post.alphabet()
    }
}

/// How a machine is claimed to recognize a language.
#[derive(Clone, Debug, PartialEq)]
pub enum Judgment {
    /// Members exactly the words with `f_a > lambda`.
    StrictCutpoint(BigRational),
    /// Members exactly the words with `f_a >= lambda`.
    NonstrictCutpoint(BigRational),
    /// `f_a >= 1 - eps` on members, `f_r >= 1 - eps` on nonmembers.
    BoundedError(BigRational),
    /// Probability-one decisions.
    ZeroError,
    /// Members exactly the words with `f_a > 0`.
    CutpointZero,
}

impl Judgment {
    pub fn bounded(epsilon: BigRational) -> Result<Self> {
        let half = BigRational::new(1.into(), 2.into());
        if epsilon < BigRational::zero() || epsilon >= half {
            return Err(Error::Domain(format!("error bound {epsilon} must lie in [0, 1/2)")));
        }
        Ok(Judgment::BoundedError(epsilon))
    }
}
