//! Latvian postselection: conversions to and from ordinary postselection.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::traits::{One, Zero};
use num::BigRational;

use crate::error::{Error, Result};
use crate::models::{
    BaseMachine, Dfa, LatvianPostMachine, PfaMachine, PostMachine, QfaMachine, StateSet, Tau,
};
use crate::numkit::RMatrix;

use super::closure::Tensor;

fn successors(m: &PfaMachine, from: &BTreeSet<usize>, t: usize) -> BTreeSet<usize> {
    let a = m.sparse(t);
    from.iter().flat_map(|&i| a.column(i).iter().map(|(j, _)| *j)).collect()
}

/// Deterministic automaton for the strings on which `m` leaves no mass in
/// its postselection states.
///
/// Subsets of states reachable with positive probability (after `¢`) are
/// tracked by subset construction; a subset accepts when `$` cannot move
/// any of it into `Q_p`. The start subset is state 0.
pub fn zero_support_dfa(m: &PostMachine<PfaMachine>) -> Result<Dfa> {
    let pfa = m.base();
    let alphabet = pfa.alphabet().clone();
    let post = m.postselection();
    let start = successors(pfa, &BTreeSet::from([0]), alphabet.cent());
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start.clone()];
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(alphabet.len());
        for t in 1..=alphabet.len() {
            let next = successors(pfa, &s, t);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    index.insert(next.clone(), id);
                    subsets.push(next.clone());
                    queue.push_back(next);
                    id
                }
            };
            row.push(id);
        }
        table.push(row);
    }
    let accept: StateSet = subsets
        .iter()
        .enumerate()
        .filter(|(_, s)| successors(pfa, s, alphabet.dollar()).iter().all(|q| !post.contains(*q)))
        .map(|(i, _)| i)
        .collect();
    Dfa::complete(alphabet, table, 0, accept)
}

/// A complete automaton as a 0/1 probabilistic machine; `¢` and `$` do not
/// move. The start state is relabelled to index 0 if necessary.
pub fn dfa_as_pfa(d: &Dfa) -> Result<PfaMachine> {
    if !d.is_complete() {
        return Err(Error::Precondition("automaton has missing transitions".into()));
    }
    let n = d.state_count();
    let relabel = |q: usize| {
        if q == d.start() {
            0
        } else if q == 0 {
            d.start()
        } else {
            q
        }
    };
    let alphabet = d.alphabet().clone();
    let mut transitions = vec![RMatrix::identity(n)];
    for s in 0..alphabet.len() {
        let mut a = RMatrix::zeros(n, n);
        for q in 0..n {
            let next = d.next(q, s).expect("complete automaton");
            a.set(relabel(next), relabel(q), BigRational::one());
        }
        transitions.push(a);
    }
    transitions.push(RMatrix::identity(n));
    let accept = d.accept().iter().map(relabel).collect();
    PfaMachine::new(alphabet, transitions, accept)
}

/// Runs the machine alongside the zero-support automaton so that strings
/// with no postselection mass are decided by `tau` through ordinary
/// postselection.
pub fn latvian_to_post(m: &LatvianPostMachine<PfaMachine>) -> Result<PostMachine<PfaMachine>> {
    let post = m.post();
    let n = post.state_count();
    let dfa = zero_support_dfa(post)?;
    let d = dfa_as_pfa(&dfa)?;
    let nd = d.state_count();
    let a_d = d.accept().clone();
    let rest_d = a_d.complement(nd);
    let base = post.base().with_accept(StateSet::new())?.tensor(&d.with_accept(StateSet::new())?)?;
    let silent = post.postselection().complement(n).product(&a_d, nd);
    let pa = post.post_accept().product(&rest_d, nd);
    let pr = post.post_reject().product(&rest_d, nd);
    let (accept, reject) = match m.tau() {
        Tau::Accept => (silent.union(&pa), pr),
        Tau::Reject => (pa, silent.union(&pr)),
    };
    PostMachine::new(base, accept, reject)
}

/// Which side of a cutpoint-zero machine becomes the zero-error language.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatvianSide {
    /// Accepting states postselect acceptance, `tau = R`.
    Nqal,
    /// Accepting states postselect rejection, `tau = A`.
    Conqal,
}

pub fn cutpoint_zero_to_latvian(m: &QfaMachine, side: LatvianSide) -> Result<LatvianPostMachine<QfaMachine>> {
    let accept = m.accept().clone();
    let post = match side {
        LatvianSide::Nqal => PostMachine::new(m.clone(), accept, StateSet::new())?,
        LatvianSide::Conqal => PostMachine::new(m.clone(), StateSet::new(), accept)?,
    };
    let tau = match side {
        LatvianSide::Nqal => Tau::Reject,
        LatvianSide::Conqal => Tau::Accept,
    };
    Ok(LatvianPostMachine::new(post, tau))
}

/// Whether `m` leaves no mass in its postselection states on `w`.
pub fn has_zero_post_mass(m: &PostMachine<PfaMachine>, w: &str) -> Result<bool> {
    let v = crate::semantics::pfa_distribution(m.base(), w)?;
    Ok(m.postselection().iter().all(|i| v[i].is_zero()))
}
