use num::traits::Zero;
use num::BigRational;

use super::{Probability, RoundOutcome, Verdict};
use crate::error::Result;
use crate::models::{BaseMachine, HaltTiming, KwqfaMachine, PfaMachine, QfaMachine, RestartPfa, RestartQfa};
use crate::numkit::{CMatrix, RMatrix, C64};

/// Base machines whose final configuration can be read as a mass per state.
pub trait Evolve: BaseMachine {
    type P: Probability;

    /// Probability of ending in each state after reading `¢w$`.
    fn masses(&self, w: &str) -> Result<Vec<Self::P>>;
}

impl Evolve for PfaMachine {
    type P = BigRational;

    fn masses(&self, w: &str) -> Result<Vec<BigRational>> {
        pfa_distribution(self, w)
    }
}

impl Evolve for QfaMachine {
    type P = f64;

    fn masses(&self, w: &str) -> Result<Vec<f64>> {
        let rho = qfa_density(self, w, false)?;
        Ok((0..rho.rows()).map(|i| rho.get(i, i).re).collect())
    }
}

fn sum_over<P: Probability>(v: &[P], states: impl Iterator<Item = usize>) -> P {
    states.fold(P::zero(), |acc, i| acc + v[i].clone())
}

/// Final state distribution of a probabilistic automaton on `¢w$`.
pub fn pfa_distribution(m: &PfaMachine, w: &str) -> Result<Vec<BigRational>> {
    let tape = m.alphabet().tape(w)?;
    let mut v = RMatrix::basis(m.state_count(), 0);
    for t in tape {
        v = m.sparse(t).apply(&v);
    }
    Ok(v)
}

pub fn pfa_accept(m: &PfaMachine, w: &str) -> Result<BigRational> {
    let v = pfa_distribution(m, w)?;
    Ok(sum_over(&v, m.accept().iter()))
}

/// Density matrix after `¢w$`. With `hermitize`, every step is followed by
/// `rho <- (rho + rho^dagger) / 2`.
pub fn qfa_density(m: &QfaMachine, w: &str, hermitize: bool) -> Result<CMatrix> {
    let tape = m.alphabet().tape(w)?;
    let n = m.state_count();
    let mut rho = CMatrix::zeros(n, n);
    rho.set(0, 0, C64::new(1.0, 0.0));
    for t in tape {
        let mut next = CMatrix::zeros(n, n);
        for e in m.operators(t) {
            next = next.add(&e.dot(&rho).dot(&e.adjoint()));
        }
        if hermitize {
            next = next.add(&next.adjoint()).scale(&C64::new(0.5, 0.0));
        }
        rho = next;
    }
    Ok(rho)
}

pub fn qfa_accept(m: &QfaMachine, w: &str) -> Result<f64> {
    let rho = qfa_density(m, w, false)?;
    Ok(m.accept().iter().map(|i| rho.get(i, i).re).sum())
}

/// One round of a probabilistic restart machine.
pub fn restart_round_pfa(m: &RestartPfa, w: &str) -> Result<RoundOutcome<BigRational>> {
    let pfa = m.pfa();
    match m.halt() {
        HaltTiming::AtEndOnly => {
            let v = pfa_distribution(pfa, w)?;
            Ok(RoundOutcome::new(sum_over(&v, m.accept().iter()), sum_over(&v, m.reject().iter())))
        }
        HaltTiming::PerStep => {
            let tape = pfa.alphabet().tape(w)?;
            let mut v = RMatrix::basis(pfa.state_count(), 0);
            let mut accept = BigRational::zero();
            let mut reject = BigRational::zero();
            for t in tape {
                v = pfa.sparse(t).apply(&v);
                for i in m.accept().iter() {
                    accept += std::mem::take(&mut v[i]);
                }
                for i in m.reject().iter() {
                    reject += std::mem::take(&mut v[i]);
                }
                for i in m.restart().iter() {
                    v[i] = BigRational::zero();
                }
            }
            Ok(RoundOutcome::new(accept, reject))
        }
    }
}

/// One round of a quantum restart machine, measured after `$`.
pub fn restart_round_qfa(m: &RestartQfa, w: &str) -> Result<RoundOutcome<f64>> {
    let rho = qfa_density(m.qfa(), w, false)?;
    let mass = |set: &crate::models::StateSet| set.iter().map(|i| rho.get(i, i).re).sum::<f64>();
    Ok(RoundOutcome::new(mass(m.accept()), mass(m.reject())))
}

/// Outcome probabilities of one measurement of a Kondacs-Watrous machine.
#[derive(Clone, Debug, PartialEq)]
pub struct KwStep {
    pub accept: f64,
    pub reject: f64,
    pub restart: f64,
}

/// Per-step measurement profile of one round.
#[derive(Clone, Debug, PartialEq)]
pub struct KwTrace {
    pub steps: Vec<KwStep>,
    /// Nonhalting mass left after `$`.
    pub residual: f64,
}

impl KwTrace {
    pub fn accept(&self) -> f64 {
        self.steps.iter().map(|s| s.accept).sum()
    }

    pub fn reject(&self) -> f64 {
        self.steps.iter().map(|s| s.reject).sum()
    }

    pub fn restart(&self) -> f64 {
        self.steps.iter().map(|s| s.restart).sum()
    }

    pub fn total(&self) -> f64 {
        self.accept() + self.reject() + self.restart() + self.residual
    }
}

/// Evolves the unnormalized nonhalting vector, recording the accept, reject and
/// restart mass measured after every symbol.
pub fn kw_trace(m: &KwqfaMachine, w: &str) -> Result<KwTrace> {
    let tape = m.alphabet().tape(w)?;
    let p = m.partition();
    let mut psi: Vec<C64> = CMatrix::basis(m.state_count(), 0);
    let mut steps = Vec::with_capacity(tape.len());
    for t in tape {
        let mut phi = m.sparse(t).apply(&psi);
        let mut take = |set: &crate::models::StateSet| {
            set.iter().map(|i| std::mem::take(&mut phi[i]).norm_sqr()).sum::<f64>()
        };
        let accept = take(&p.accept);
        let reject = take(&p.reject);
        let restart = take(&p.restart);
        steps.push(KwStep { accept, reject, restart });
        psi = phi;
    }
    let residual = psi.iter().map(|z| z.norm_sqr()).sum();
    Ok(KwTrace { steps, residual })
}

pub fn restart_round_kw(m: &KwqfaMachine, w: &str) -> Result<RoundOutcome<f64>> {
    let trace = kw_trace(m, w)?;
    Ok(RoundOutcome::new(trace.accept(), trace.reject()))
}

/// Plain (halting) reading: accept with the measured accept mass, reject otherwise.
pub fn kwqfa_halting_verdict(m: &KwqfaMachine, w: &str) -> Result<Verdict<f64>> {
    Ok(Verdict::direct(kw_trace(m, w)?.accept()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Alphabet, Partition, StateSet};
    use crate::numkit::ratio;

    fn split_machine() -> PfaMachine {
        let cent = RMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(0, 1)],
            vec![ratio(1, 2), ratio(1, 1)],
        ])
        .unwrap();
        let id = RMatrix::identity(2);
        PfaMachine::new(Alphabet::ab(), vec![cent, id.clone(), id.clone(), id], StateSet::from_indices([1]))
            .unwrap()
    }

    #[test]
    fn single_split() {
        assert_eq!(pfa_accept(&split_machine(), "a").unwrap(), ratio(1, 2));
    }

    #[test]
    fn two_element_channel() {
        let h = 0.5f64.sqrt();
        let i = CMatrix::identity(2).scale(&C64::new(h, 0.0));
        let x = CMatrix::from_rows(vec![
            vec![C64::new(0.0, 0.0), C64::new(h, 0.0)],
            vec![C64::new(h, 0.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        let id = vec![CMatrix::identity(2)];
        let m = QfaMachine::new(
            Alphabet::new(['a']).unwrap(),
            vec![id.clone(), vec![i, x], id],
            StateSet::from_indices([1]),
        )
        .unwrap();
        assert!((qfa_accept(&m, "a").unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn embedded_pfa_matches() {
        let p = split_machine();
        let q = QfaMachine::embed(&p);
        for w in ["", "a", "ab"] {
            let exact = pfa_accept(&p, w).unwrap().to_f64_lossy();
            assert!((qfa_accept(&q, w).unwrap() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn per_step_siphons_halting_mass() {
        // q1 --cent--> accept 1/3, q1 2/3; q1 --a--> reject; dollar identity.
        let cent = RMatrix::from_rows(vec![
            vec![ratio(2, 3), ratio(0, 1), ratio(0, 1)],
            vec![ratio(1, 3), ratio(1, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(1, 1)],
        ])
        .unwrap();
        let a = RMatrix::from_rows(vec![
            vec![ratio(0, 1), ratio(0, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)],
            vec![ratio(1, 1), ratio(0, 1), ratio(1, 1)],
        ])
        .unwrap();
        let id = RMatrix::identity(3);
        let pfa = PfaMachine::new(Alphabet::new(['a']).unwrap(), vec![cent, a, id], StateSet::from_indices([1]))
            .unwrap();
        let m = RestartPfa::new(pfa, StateSet::from_indices([2]), StateSet::new(), HaltTiming::PerStep).unwrap();
        let r = restart_round_pfa(&m, "aa").unwrap();
        assert_eq!(r, RoundOutcome::new(ratio(1, 3), ratio(2, 3)));
        let r = restart_round_pfa(&m, "").unwrap();
        assert_eq!(r, RoundOutcome::new(ratio(1, 3), ratio(0, 1)));
    }

    #[test]
    fn kw_mass_is_conserved() {
        let h = 0.5f64.sqrt();
        let u = CMatrix::from_rows(vec![
            vec![C64::new(h, 0.0), C64::new(-h, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ])
        .unwrap();
        let id = CMatrix::identity(3);
        let m = KwqfaMachine::new(
            Alphabet::new(['a']).unwrap(),
            vec![id.clone(), u, id],
            Partition::new(StateSet::from_indices([1]), StateSet::new(), StateSet::from_indices([2])),
        )
        .unwrap();
        let t = kw_trace(&m, "aaa").unwrap();
        assert!((t.total() - 1.0).abs() < 1e-12);
        assert!((t.accept() - 0.875).abs() < 1e-12);
    }
}
