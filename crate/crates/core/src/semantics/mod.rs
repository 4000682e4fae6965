//! Exact evaluation of every machine kind and bounded-length recognition checks.

mod evolve;
mod recognize;

use std::fmt::{Debug, Display};

use num::traits::{Num, ToPrimitive};
use num::BigRational;

use crate::error::{Error, Result};

pub use evolve::{
    kw_trace, kwqfa_halting_verdict, pfa_accept, pfa_distribution, qfa_accept, qfa_density,
    restart_round_kw, restart_round_pfa, restart_round_qfa, Evolve, KwStep, KwTrace,
};
pub use recognize::{
    check_machine, check_recognition, evaluate, Counterexample, Evaluation, RecognitionReport,
    Recognizer,
};

/// Probability values: exact rationals or doubles.
pub trait Probability:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + ToPrimitive + Send + Sync
{
    const EXACT: bool;

    fn from_ratio(q: &BigRational) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Probability for BigRational {
    const EXACT: bool = true;

    fn from_ratio(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Probability for f64 {
    const EXACT: bool = false;

    fn from_ratio(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

/// Single-round (or pre-postselection) accept and reject probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundOutcome<P> {
    pub accept: P,
    pub reject: P,
}

impl<P: Probability> RoundOutcome<P> {
    pub fn new(accept: P, reject: P) -> Self {
        Self { accept, reject }
    }

    /// Probability that a round halts.
    pub fn halting(&self) -> P {
        self.accept.clone() + self.reject.clone()
    }
}

/// Overall acceptance and rejection of a string.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<P> {
    pub f_accept: P,
    pub f_reject: P,
    /// False when the normalizing mass is zero.
    pub valid: bool,
    pub round: Option<RoundOutcome<P>>,
}

impl<P: Probability> Verdict<P> {
    /// Verdict of a machine without restart or postselection.
    pub fn direct(f_accept: P) -> Self {
        let f_reject = P::one() - f_accept.clone();
        Self { f_accept, f_reject, valid: true, round: None }
    }
}

/// Normalizes a round outcome: `f_a = p_a / (p_a + p_r)`.
pub fn restart_overall<P: Probability>(r: &RoundOutcome<P>) -> Verdict<P> {
    let total = r.halting();
    if total.is_zero() {
        return Verdict { f_accept: P::zero(), f_reject: P::zero(), valid: false, round: Some(r.clone()) };
    }
    Verdict {
        f_accept: r.accept.clone() / total.clone(),
        f_reject: r.reject.clone() / total,
        valid: true,
        round: Some(r.clone()),
    }
}

/// Worst-case expected running time `s / p` of a restart machine that halts
/// with probability `p` per round of at most `s` steps.
pub fn expected_runtime<P: Probability>(p: &P, s: usize) -> Result<P> {
    if s == 0 {
        return Err(Error::Domain("round length must be at least 1".into()));
    }
    if p.is_zero() {
        return Err(Error::DivergentRuntime);
    }
    if *p < P::zero() || *p > P::one() {
        return Err(Error::Domain(format!("halting probability {p} outside (0, 1]")));
    }
    let s = (0..s).fold(P::zero(), |acc, _| acc + P::one());
    Ok(s / p.clone())
}

/// Steps per round on input `w`: the whole tape `¢w$`.
pub fn round_length(w: &str) -> usize {
    w.chars().count() + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::ratio;

    #[test]
    fn overall_examples() {
        let v = restart_overall(&RoundOutcome::new(ratio(1, 5), ratio(3, 10)));
        assert_eq!(v.f_accept, ratio(2, 5));
        assert_eq!(v.f_reject, ratio(3, 5));
        let v = restart_overall(&RoundOutcome::new(ratio(1, 7), ratio(0, 1)));
        assert_eq!(v.f_accept, ratio(1, 1));
        let v = restart_overall(&RoundOutcome::new(ratio(0, 1), ratio(0, 1)));
        assert!(!v.valid);
    }

    #[test]
    fn runtime_examples() {
        assert_eq!(expected_runtime(&ratio(1, 1), 7).unwrap(), ratio(7, 1));
        assert_eq!(expected_runtime(&ratio(1, 4), 10).unwrap(), ratio(40, 1));
        assert_eq!(expected_runtime(&ratio(0, 1), 3), Err(Error::DivergentRuntime));
        assert_eq!(expected_runtime(&0.5f64, 4).unwrap(), 8.0);
    }
}
