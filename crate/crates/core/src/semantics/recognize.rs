use num::traits::{One, Zero};
use num::BigRational;
use rayon::prelude::*;

use super::evolve::{
    kwqfa_halting_verdict, pfa_accept, qfa_accept, restart_round_kw, restart_round_pfa,
    restart_round_qfa, Evolve,
};
use super::{restart_overall, Probability, RoundOutcome, Verdict};
use crate::error::Result;
use crate::models::{
    Alphabet, BaseMachine, Judgment, KwqfaMachine, LatvianPostMachine, Machine, PfaMachine,
    PostMachine, QfaMachine, RestartPfa, RestartQfa, Tau,
};

/// Width of the band around a float threshold inside which a comparison is
/// reported as ambiguous instead of decided.
pub const AMBIGUITY_BAND: f64 = 1e-9;

/// Anything that assigns overall acceptance and rejection to strings.
pub trait Recognizer: Sync {
    type P: Probability;

    fn alphabet(&self) -> &Alphabet;

    fn verdict(&self, w: &str) -> Result<Verdict<Self::P>>;
}

impl Recognizer for PfaMachine {
    type P = BigRational;

    fn alphabet(&self) -> &Alphabet {
        BaseMachine::alphabet(self)
    }

    fn verdict(&self, w: &str) -> Result<Verdict<BigRational>> {
        pfa_accept(self, w).map(Verdict::direct)
    }
}

impl Recognizer for QfaMachine {
    type P = f64;

    fn alphabet(&self) -> &Alphabet {
        BaseMachine::alphabet(self)
    }

    fn verdict(&self, w: &str) -> Result<Verdict<f64>> {
        qfa_accept(self, w).map(Verdict::direct)
    }
}

impl Recognizer for RestartPfa {
    type P = BigRational;

    fn alphabet(&self) -> &Alphabet {
        self.alphabet()
    }

    fn verdict(&self, w: &str) -> Result<Verdict<BigRational>> {
        Ok(restart_overall(&restart_round_pfa(self, w)?))
    }
}

impl Recognizer for RestartQfa {
    type P = f64;

    fn alphabet(&self) -> &Alphabet {
        self.alphabet()
    }

    fn verdict(&self, w: &str) -> Result<Verdict<f64>> {
        Ok(restart_overall(&restart_round_qfa(self, w)?))
    }
}

/// Restart reading of a Kondacs-Watrous machine.
impl Recognizer for KwqfaMachine {
    type P = f64;

    fn alphabet(&self) -> &Alphabet {
        self.alphabet()
    }

    fn verdict(&self, w: &str) -> Result<Verdict<f64>> {
        Ok(restart_overall(&restart_round_kw(self, w)?))
    }
}

fn post_round<B: Evolve>(m: &PostMachine<B>, w: &str) -> Result<RoundOutcome<B::P>> {
    let v = m.base().masses(w)?;
    let sum = |set: &crate::models::StateSet| set.iter().fold(B::P::zero(), |acc, i| acc + v[i].clone());
    Ok(RoundOutcome::new(sum(m.post_accept()), sum(m.post_reject())))
}

impl<B: Evolve> Recognizer for PostMachine<B> {
    type P = B::P;

    fn alphabet(&self) -> &Alphabet {
        self.alphabet()
    }

    fn verdict(&self, w: &str) -> Result<Verdict<B::P>> {
        Ok(restart_overall(&post_round(self, w)?))
    }
}

impl<B: Evolve> Recognizer for LatvianPostMachine<B> {
    type P = B::P;

    fn alphabet(&self) -> &Alphabet {
        self.alphabet()
    }

    fn verdict(&self, w: &str) -> Result<Verdict<B::P>> {
        let round = post_round(self.post(), w)?;
        let mut v = restart_overall(&round);
        if !v.valid {
            let (a, r) = match self.tau() {
                Tau::Accept => (B::P::one(), B::P::zero()),
                Tau::Reject => (B::P::zero(), B::P::one()),
            };
            v = Verdict { f_accept: a, f_reject: r, valid: true, round: Some(round) };
        }
        Ok(v)
    }
}

/// A verdict in whichever arithmetic the machine uses.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Evaluation {
    Exact(Verdict<BigRational>),
    Float(Verdict<f64>),
}

impl From<Verdict<BigRational>> for Evaluation {
    fn from(v: Verdict<BigRational>) -> Self {
        Evaluation::Exact(v)
    }
}

impl From<Verdict<f64>> for Evaluation {
    fn from(v: Verdict<f64>) -> Self {
        Evaluation::Float(v)
    }
}

impl Evaluation {
    pub fn valid(&self) -> bool {
        match self {
            Evaluation::Exact(v) => v.valid,
            Evaluation::Float(v) => v.valid,
        }
    }

    pub fn f_accept(&self) -> f64 {
        match self {
            Evaluation::Exact(v) => v.f_accept.to_f64_lossy(),
            Evaluation::Float(v) => v.f_accept,
        }
    }

    pub fn f_reject(&self) -> f64 {
        match self {
            Evaluation::Exact(v) => v.f_reject.to_f64_lossy(),
            Evaluation::Float(v) => v.f_reject,
        }
    }
}

/// Evaluates any machine on `w`.
pub fn evaluate(m: &Machine, w: &str) -> Result<Evaluation> {
    Ok(match m {
        Machine::Pfa(m) => m.verdict(w)?.into(),
        Machine::Qfa(m) => m.verdict(w)?.into(),
        Machine::Kwqfa(m) => kwqfa_halting_verdict(m, w)?.into(),
        Machine::KwqfaRestart(m) => m.verdict(w)?.into(),
        Machine::PfaRestart(m) => m.verdict(w)?.into(),
        Machine::QfaRestart(m) => m.verdict(w)?.into(),
        Machine::PostPfa(m) => m.verdict(w)?.into(),
        Machine::PostQfa(m) => m.verdict(w)?.into(),
        Machine::LpostPfa(m) => m.verdict(w)?.into(),
        Machine::LpostQfa(m) => m.verdict(w)?.into(),
        Machine::Linearized(m) => m.verdict(w)?.into(),
    })
}

/// A string on which the machine disagrees with the claimed judgment.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub word: String,
    pub member: bool,
    pub f_accept: String,
    pub f_reject: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecognitionReport {
    pub judgment: Judgment,
    pub max_len: usize,
    pub checked: usize,
    /// In enumeration order.
    pub counterexamples: Vec<Counterexample>,
    /// Float values too close to a threshold to decide.
    pub ambiguous: Vec<String>,
    /// Strings where the ratio criterion on `(p_a, p_r)` disagreed with the
    /// direct criterion on `(f_a, f_r)`.
    pub ratio_mismatches: Vec<String>,
}

impl RecognitionReport {
    pub fn pass(&self) -> bool {
        self.counterexamples.is_empty() && self.ratio_mismatches.is_empty()
    }
}

enum Check {
    Pass,
    Fail(String),
    Ambiguous,
}

struct Judged {
    check: Check,
    ratio_agrees: bool,
}

fn near<P: Probability>(x: &P, t: &P) -> bool {
    !P::EXACT && (x.to_f64_lossy() - t.to_f64_lossy()).abs() <= AMBIGUITY_BAND
}

fn judge<P: Probability>(v: &Verdict<P>, member: bool, judgment: &Judgment) -> Judged {
    if !v.valid {
        return Judged { check: Check::Fail("zero normalizing mass".into()), ratio_agrees: true };
    }
    let fa = &v.f_accept;
    let fr = &v.f_reject;
    let decide = |ok: bool, ambiguous: bool, why: String| {
        if ambiguous {
            Check::Ambiguous
        } else if ok {
            Check::Pass
        } else {
            Check::Fail(why)
        }
    };
    let threshold_error = match judgment {
        Judgment::BoundedError(e) => Some(P::from_ratio(e)),
        Judgment::ZeroError => Some(P::zero()),
        _ => None,
    };
    let check = match judgment {
        Judgment::StrictCutpoint(l) => {
            let l = P::from_ratio(l);
            let above = *fa > l;
            decide(above == member, near(fa, &l), format!("f_a = {fa} vs cutpoint {l} (strict)"))
        }
        Judgment::NonstrictCutpoint(l) => {
            let l = P::from_ratio(l);
            let above = *fa >= l;
            decide(above == member, near(fa, &l), format!("f_a = {fa} vs cutpoint {l} (nonstrict)"))
        }
        Judgment::CutpointZero => {
            let above = *fa > P::zero();
            decide(above == member, false, format!("f_a = {fa} vs cutpoint 0"))
        }
        Judgment::BoundedError(_) | Judgment::ZeroError => {
            let e = threshold_error.clone().unwrap_or_else(P::zero);
            let t = P::one() - e;
            let (f, why) = if member {
                (fa, format!("member with f_a = {fa} < {t}"))
            } else {
                (fr, format!("nonmember with f_r = {fr} < {t}"))
            };
            if *judgment == Judgment::ZeroError {
                decide(*f >= t || near(f, &t), false, why)
            } else {
                decide(*f >= t, near(f, &t), why)
            }
        }
    };
    let ratio_agrees = match (&threshold_error, &v.round, &check) {
        (Some(e), Some(r), Check::Pass | Check::Fail(_)) => {
            let one_minus = P::one() - e.clone();
            let (good, bad) = if member { (&r.accept, &r.reject) } else { (&r.reject, &r.accept) };
            let lhs = one_minus * bad.clone();
            let rhs = e.clone() * good.clone();
            let total = r.halting();
            let ratio_ok = lhs <= rhs && !total.is_zero();
            let borderline = !P::EXACT
                && (lhs.to_f64_lossy() - rhs.to_f64_lossy()).abs() <= AMBIGUITY_BAND * total.to_f64_lossy();
            borderline || ratio_ok == matches!(check, Check::Pass)
        }
        _ => true,
    };
    Judged { check, ratio_agrees }
}

fn check_with(
    alphabet: &Alphabet,
    eval: &(dyn Fn(&str) -> Result<Evaluation> + Sync),
    language: &(dyn Fn(&str) -> bool + Sync),
    judgment: &Judgment,
    max_len: usize,
) -> Result<RecognitionReport> {
    let words = alphabet.words_up_to(max_len);
    let results: Vec<Result<(String, bool, Evaluation)>> = words
        .par_iter()
        .map(|w| {
            let member = language(w);
            eval(w).map(|e| (w.clone(), member, e))
        })
        .collect();
    let mut report = RecognitionReport {
        judgment: judgment.clone(),
        max_len,
        checked: 0,
        counterexamples: Vec::new(),
        ambiguous: Vec::new(),
        ratio_mismatches: Vec::new(),
    };
    for r in results {
        let (word, member, eval) = r?;
        report.checked += 1;
        let (judged, fa, fr) = match &eval {
            Evaluation::Exact(v) => (judge(v, member, judgment), v.f_accept.to_string(), v.f_reject.to_string()),
            Evaluation::Float(v) => (judge(v, member, judgment), v.f_accept.to_string(), v.f_reject.to_string()),
        };
        match judged.check {
            Check::Pass => {}
            Check::Ambiguous => report.ambiguous.push(word.clone()),
            Check::Fail(reason) => report.counterexamples.push(Counterexample {
                word: word.clone(),
                member,
                f_accept: fa,
                f_reject: fr,
                reason,
            }),
        }
        if !judged.ratio_agrees {
            report.ratio_mismatches.push(word);
        }
    }
    Ok(report)
}

/// Checks `judgment` on every string of length at most `max_len`, in
/// length-then-lexicographic order.
pub fn check_recognition<R: Recognizer>(
    m: &R,
    language: &(dyn Fn(&str) -> bool + Sync),
    judgment: &Judgment,
    max_len: usize,
) -> Result<RecognitionReport>
where
    Verdict<R::P>: Into<Evaluation>,
{
    check_with(m.alphabet(), &|w| m.verdict(w).map(Into::into), language, judgment, max_len)
}

/// [`check_recognition`] for a machine of any kind.
pub fn check_machine(
    m: &Machine,
    language: &(dyn Fn(&str) -> bool + Sync),
    judgment: &Judgment,
    max_len: usize,
) -> Result<RecognitionReport> {
    check_with(m.alphabet(), &|w| evaluate(m, w), language, judgment, max_len)
}
