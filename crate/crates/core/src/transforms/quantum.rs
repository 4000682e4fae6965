//! Quantum restart machines: Kondacs-Watrous simulation, linearization and
//! compilation back into Kondacs-Watrous form.

use num::traits::One;
use num::BigRational;

use crate::error::{Error, Result};
use crate::models::{Alphabet, KwqfaMachine, Partition, QfaMachine, RestartQfa, StateSet};
use crate::numkit::{orthonormal_extend, unitary_complete, CMatrix, SparseColumns, C64, ORTHO_TOL};
use crate::semantics::{restart_overall, Recognizer, RoundOutcome, Verdict};

fn projector(n: usize, set: &StateSet) -> CMatrix {
    let mut p = CMatrix::zeros(n, n);
    for i in set.iter() {
        p.set(i, i, C64::new(1.0, 0.0));
    }
    p
}

/// Per symbol: `U P_n` (continue from nonhalting states) plus the projectors
/// onto restart, accept and reject states, which keep halted mass in place.
pub fn kwqfa_restart_to_qfa_restart(m: &KwqfaMachine) -> Result<RestartQfa> {
    let n = m.state_count();
    let p = m.partition();
    let keep_n = projector(n, &m.nonhalting());
    let holds: Vec<CMatrix> = [&p.restart, &p.accept, &p.reject]
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| projector(n, s))
        .collect();
    let kraus = m
        .unitaries()
        .iter()
        .map(|u| {
            let mut ops = vec![u.dot(&keep_n)];
            ops.extend(holds.iter().cloned());
            ops
        })
        .collect();
    let qfa = QfaMachine::new(m.alphabet().clone(), kraus, p.accept.clone())?;
    RestartQfa::new(qfa, p.reject.clone())
}

/// Vectorized density evolution of a quantum restart machine, with two
/// extra coordinates collecting the accept and reject probability on `$`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearizedSystem {
    alphabet: Alphabet,
    matrices: Vec<CMatrix>,
    sparse: Vec<SparseColumns<C64>>,
    selector: CMatrix,
}

impl LinearizedSystem {
    /// Assembles a system from its `(k+2) x (k+2)` matrices and `2 x k` selector.
    pub fn from_parts(alphabet: Alphabet, matrices: Vec<CMatrix>, selector: CMatrix) -> Result<Self> {
        let k = selector.cols();
        if selector.rows() != 2 {
            return Err(Error::DimensionMismatch("selector must have two rows".into()));
        }
        if matrices.len() != alphabet.tape_len() {
            return Err(Error::Invariant(format!(
                "expected {} matrices, got {}",
                alphabet.tape_len(),
                matrices.len()
            )));
        }
        if matrices.iter().any(|m| m.rows() != k + 2 || m.cols() != k + 2) {
            return Err(Error::DimensionMismatch(format!("matrices must be {0}x{0}", k + 2)));
        }
        let sparse = matrices.iter().map(SparseColumns::from_matrix).collect();
        Ok(Self { alphabet, matrices, sparse, selector })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `n^2 + 2`.
    pub fn dimension(&self) -> usize {
        self.selector.cols() + 2
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn selector(&self) -> &CMatrix {
        &self.selector
    }

    /// Final vector after `¢w$`, starting from `vec(|q1><q1|)`.
    pub fn evolve(&self, w: &str) -> Result<Vec<C64>> {
        let mut v = CMatrix::basis(self.dimension(), 0);
        for t in self.alphabet.tape(w)? {
            v = self.sparse[t].apply(&v);
        }
        Ok(v)
    }

    pub fn round(&self, w: &str) -> Result<RoundOutcome<f64>> {
        let v = self.evolve(w)?;
        let d = self.dimension();
        Ok(RoundOutcome::new(v[d - 2].re, v[d - 1].re))
    }
}

impl Recognizer for LinearizedSystem {
    type P = f64;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn verdict(&self, w: &str) -> Result<Verdict<f64>> {
        Ok(restart_overall(&self.round(w)?))
    }
}

/// `A_s = sum_i E_i (x) conj(E_i)` acting on row-major `vec(rho)`, padded
/// with an identity block on the two collector coordinates; the `$` matrix
/// additionally moves the accept/reject diagonal into the collectors.
pub fn linearize(m: &RestartQfa) -> Result<LinearizedSystem> {
    let n = m.state_count();
    let k = n * n;
    let mut selector = CMatrix::zeros(2, k);
    for i in m.accept().iter() {
        selector.set(0, i * n + i, C64::new(1.0, 0.0));
    }
    for i in m.reject().iter() {
        selector.set(1, i * n + i, C64::new(1.0, 0.0));
    }
    let dollar = m.alphabet().dollar();
    let matrices = m
        .qfa()
        .kraus()
        .iter()
        .enumerate()
        .map(|(t, ops)| {
            let a = ops
                .iter()
                .map(|e| e.kron(&e.conj()))
                .reduce(|x, y| x.add(&y))
                .expect("Kraus collections are nonempty");
            let padded = a.direct_sum(&CMatrix::identity(2));
            if t == dollar {
                let mut collect = CMatrix::zeros(k + 2, k + 2);
                for r in 0..2 {
                    for c in 0..k {
                        collect.set(k + r, c, *selector.get(r, c));
                    }
                    collect.set(k + r, k + r, C64::new(1.0, 0.0));
                }
                collect.dot(&padded)
            } else {
                padded
            }
        })
        .collect();
    LinearizedSystem::from_parts(m.alphabet().clone(), matrices, selector)
}

/// Result of compiling a quantum restart machine into Kondacs-Watrous form.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledKwqfa {
    pub machine: KwqfaMachine,
    /// Per-step amplitude scaling: one round multiplies amplitudes by `l^-|¢w$|`.
    pub l: f64,
    pub epsilon_out: Option<BigRational>,
}

/// Builds a `3(n^2 + 2)`-state Kondacs-Watrous restart machine whose single
/// round accepts (rejects) with probability `(l^-|¢w$| p_a)^2` (resp. `p_r`).
///
/// States `0..n^2` are nonhalting, `n^2` accepts, `n^2 + 1` rejects, and the
/// `2(n^2 + 2)` padding states restart.
pub fn qfa_restart_to_kwqfa_restart(m: &RestartQfa, epsilon: Option<&BigRational>) -> Result<CompiledKwqfa> {
    let sys = linearize(m)?;
    let ext = orthonormal_extend(sys.matrices())?;
    let unitaries = (0..sys.matrices().len())
        .map(|s| unitary_complete(&ext.isometry(sys.matrices(), s), ORTHO_TOL))
        .collect::<Result<Vec<_>>>()?;
    let d = sys.dimension();
    let k = d - 2;
    let partition = Partition::new(
        StateSet::from_indices([k]),
        StateSet::from_indices([k + 1]),
        (d..3 * d).collect(),
    );
    let machine = KwqfaMachine::new(m.alphabet().clone(), unitaries, partition)?;
    Ok(CompiledKwqfa { machine, l: ext.l, epsilon_out: epsilon.map(epsilon_prime) })
}

/// Error bound after squaring both single-round probabilities:
/// `eps^2 / (1 - 2 eps + 2 eps^2)`.
pub fn epsilon_prime(epsilon: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = &one + &one;
    let e2 = epsilon * epsilon;
    &e2 / (&one - &two * epsilon + &two * &e2)
}
