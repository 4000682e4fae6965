//! From postselection to cutpoint recognition.

use crate::error::Result;
use crate::models::{BaseMachine, PfaMachine, PostMachine, QfaMachine, StateSet};
use crate::numkit::{ratio, CMatrix, RMatrix, C64};

/// Base machines that can absorb the cutpoint construction.
pub trait CutpointBase: BaseMachine {
    /// Adds an accepting sink; on `$`, mass outside `post` moves to the sink
    /// with probability 1/2. Accepting states become `accept` plus the sink.
    fn with_half_sink(&self, post: &StateSet, accept: &StateSet) -> Result<Self>;
}

impl CutpointBase for PfaMachine {
    fn with_half_sink(&self, post: &StateSet, accept: &StateSet) -> Result<Self> {
        let n = self.state_count();
        let dollar = self.alphabet().dollar();
        let half = ratio(1, 2);
        let transitions = self
            .transitions()
            .iter()
            .enumerate()
            .map(|(t, a)| {
                let mut out = a.direct_sum(&RMatrix::identity(1));
                if t == dollar {
                    let mut split = RMatrix::identity(n + 1);
                    for i in post.complement(n).iter() {
                        split.set(i, i, half.clone());
                        split.set(n, i, half.clone());
                    }
                    out = split.dot(&out);
                }
                out
            })
            .collect();
        let mut accept = accept.clone();
        accept.insert(n);
        PfaMachine::new(self.alphabet().clone(), transitions, accept)
    }
}

impl CutpointBase for QfaMachine {
    fn with_half_sink(&self, post: &StateSet, accept: &StateSet) -> Result<Self> {
        let n = self.state_count();
        let dollar = self.alphabet().dollar();
        let h = C64::new(0.5f64.sqrt(), 0.0);
        let one = C64::new(1.0, 0.0);
        let nonpost = post.complement(n);
        let mut split = vec![{
            let mut k0 = CMatrix::zeros(n + 1, n + 1);
            for i in 0..n {
                k0.set(i, i, if post.contains(i) { one } else { h });
            }
            k0.set(n, n, one);
            k0
        }];
        for i in nonpost.iter() {
            let mut k = CMatrix::zeros(n + 1, n + 1);
            k.set(n, i, h);
            split.push(k);
        }
        let kraus = self
            .kraus()
            .iter()
            .enumerate()
            .map(|(t, ops)| {
                let lifted: Vec<CMatrix> = ops
                    .iter()
                    .enumerate()
                    .map(|(k, e)| {
                        let tail = if k == 0 { CMatrix::identity(1) } else { CMatrix::zeros(1, 1) };
                        e.direct_sum(&tail)
                    })
                    .collect();
                if t == dollar {
                    split.iter().flat_map(|k| lifted.iter().map(move |e| k.dot(e))).collect()
                } else {
                    lifted
                }
            })
            .collect();
        let mut accept = accept.clone();
        accept.insert(n);
        QfaMachine::new(self.alphabet().clone(), kraus, accept)
    }
}

/// Cutpoint-1/2 machine: acceptance is `p_a + (1 - p_a - p_r) / 2`.
pub fn post_to_cutpoint<B: CutpointBase>(m: &PostMachine<B>) -> Result<B> {
    m.base().with_half_sink(&m.postselection(), m.post_accept())
}

/// Which language a cutpoint-zero machine recognizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Language,
    Complement,
}

/// Zero-error postselection machine to a cutpoint-zero recognizer of its
/// language (accepting `Q_pa`) or of the complement (accepting `Q_pr`).
pub fn zero_error_post_to_cutpoint_zero<B: BaseMachine>(m: &PostMachine<B>, side: Side) -> Result<B> {
    let accept = match side {
        Side::Language => m.post_accept(),
        Side::Complement => m.post_reject(),
    };
    m.base().with_accept(accept.clone())
}
