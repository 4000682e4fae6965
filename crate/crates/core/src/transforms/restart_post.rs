//! Restart machines and postselection machines, in both directions.

use num::traits::{One, Zero};
use num::BigRational;

use crate::error::{Error, Result};
use crate::models::{
    BaseMachine, HaltTiming, PfaMachine, PostMachine, QfaMachine, RestartPfa, RestartQfa, StateSet,
};
use crate::numkit::RMatrix;

/// Accept states become postselection-accept states, reject states
/// postselection-reject states, everything else is left out of `Q_p`.
pub fn restart_to_post(m: &RestartPfa) -> Result<PostMachine<PfaMachine>> {
    if m.halt() != HaltTiming::AtEndOnly {
        return Err(Error::Precondition(
            "machine halts mid-word; apply defer_halting first".into(),
        ));
    }
    PostMachine::new(m.pfa().clone(), m.accept().clone(), m.reject().clone())
}

pub fn restart_qfa_to_post(m: &RestartQfa) -> Result<PostMachine<QfaMachine>> {
    PostMachine::new(m.qfa().clone(), m.accept().clone(), m.reject().clone())
}

/// Nonpostselection states become restart states.
///
/// The running machine is copied into states `0..n` and the `$` transition
/// lands in a second copy `n..2n` carrying the accept/reject/restart roles,
/// so no role state is visited before the end of the tape.
pub fn post_to_restart(m: &PostMachine<PfaMachine>) -> Result<RestartPfa> {
    let n = m.state_count();
    let base = m.base();
    let dollar = base.alphabet().dollar();
    let transitions = base
        .transitions()
        .iter()
        .enumerate()
        .map(|(t, a)| {
            let mut out = RMatrix::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    let p = a.get(j, i);
                    if !p.is_zero() {
                        let target = if t == dollar { n + j } else { j };
                        out.set(target, i, p.clone());
                    }
                }
                out.set(n + i, n + i, BigRational::one());
            }
            out
        })
        .collect();
    let accept = m.post_accept().shifted(n);
    let reject = m.post_reject().shifted(n);
    let restart = m.postselection().complement(n).shifted(n);
    let pfa = PfaMachine::new(base.alphabet().clone(), transitions, accept)?;
    RestartPfa::new(pfa, reject, restart, HaltTiming::AtEndOnly)
}

pub fn post_qfa_to_restart(m: &PostMachine<QfaMachine>) -> Result<RestartQfa> {
    let qfa = m.base().with_accept(m.post_accept().clone())?;
    RestartQfa::new(qfa, m.post_reject().clone())
}

/// Postpones every mid-word halt or restart to the `$` transition.
///
/// Three carrier states (accept, reject, restart) absorb mass that would
/// halt early; on `$` they release it into the first state of `Q_a`, `Q_r`
/// and `Q_restart` respectively.
pub fn defer_halting(m: &RestartPfa) -> Result<RestartPfa> {
    if m.halt() == HaltTiming::AtEndOnly {
        return Ok(m.clone());
    }
    let pfa = m.pfa();
    let n = pfa.state_count();
    let partition = m.partition();
    let nonhalting = partition.nonhalting(n);
    let (acc, rej, rst) = (n, n + 1, n + 2);
    let carrier_of = |j: usize| {
        if partition.accept.contains(j) {
            Some(acc)
        } else if partition.reject.contains(j) {
            Some(rej)
        } else if partition.restart.contains(j) {
            Some(rst)
        } else {
            None
        }
    };
    let dollar = pfa.alphabet().dollar();
    let transitions = pfa
        .transitions()
        .iter()
        .enumerate()
        .map(|(t, a)| {
            let mut out = RMatrix::zeros(n + 3, n + 3);
            for i in 0..n {
                let live = nonhalting.contains(i) || (t == 0 && i == 0);
                if !live {
                    out.set(i, i, BigRational::one());
                    continue;
                }
                for j in 0..n {
                    let p = a.get(j, i);
                    if p.is_zero() {
                        continue;
                    }
                    let target = if t == dollar { j } else { carrier_of(j).unwrap_or(j) };
                    let sum = out.get(target, i).clone() + p.clone();
                    out.set(target, i, sum);
                }
            }
            for (carrier, set) in [(acc, &partition.accept), (rej, &partition.reject), (rst, &partition.restart)] {
                let target = match (t == dollar, set.iter().next()) {
                    (true, Some(q)) => q,
                    _ => carrier,
                };
                out.set(target, carrier, BigRational::one());
            }
            out
        })
        .collect();
    let deferred = PfaMachine::new(pfa.alphabet().clone(), transitions, m.accept().clone())?;
    RestartPfa::new(deferred, m.reject().clone(), m.restart().clone(), HaltTiming::AtEndOnly)
}

/// States that no run visits.
pub fn unreachable_states(m: &PfaMachine) -> StateSet {
    let mut seen = m.reachable_before_end();
    seen.insert(0);
    let dollar = m.transition(m.alphabet().dollar());
    let after: StateSet = seen
        .iter()
        .flat_map(|i| (0..m.state_count()).filter(move |&j| !dollar.get(j, i).is_zero()))
        .collect();
    seen.union(&after).complement(m.state_count())
}
