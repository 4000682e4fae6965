//! Invariant suites run by the `verify` command.

use num::traits::{One, Signed, Zero};
use num::BigRational;

use crate::error::Result;
use crate::fixtures::{
    dfa_fixtures, embedded_restart_qfa, embedding_fixture, random_kwqfa, random_restart_qfa,
    restart_fixtures,
};
use crate::models::{emit_machine, parse_machine, Alphabet, HaltTiming, Machine};
use crate::semantics::{
    evaluate, pfa_accept, qfa_accept, restart_overall, restart_round_kw, restart_round_pfa,
    restart_round_qfa, Probability, Recognizer,
};
use crate::transforms::{
    defer_halting, dfa_as_pfa, kwqfa_restart_to_qfa_restart, linearize, post_to_restart,
    restart_to_post, zero_error_post_to_cutpoint_zero, Side,
};
use crate::zoo::{build_lpal, dfa_to_zero_error_post, LpalParams};

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn words(max_len: usize) -> Vec<String> {
    Alphabet::ab().words_up_to(max_len)
}

/// Emitting and re-parsing a fixture gives back the same machine.
pub fn format_round_trip() -> Result<SuiteResult> {
    let mut s = SuiteResult::new("format round-trip");
    let mut machines: Vec<(String, Machine)> =
        restart_fixtures()?.into_iter().map(|(n, m)| (n, Machine::PfaRestart(m))).collect();
    machines.push(("lpal".into(), Machine::KwqfaRestart(build_lpal(&LpalParams::default())?)));
    machines.push(("random-qfa".into(), Machine::QfaRestart(random_restart_qfa(1, 2)?)));
    for (name, m) in machines {
        let text = emit_machine(&m);
        let back = parse_machine(&text)?;
        s.check(back == m && emit_machine(&back) == text, || format!("{name}: round-trip differs"));
    }
    Ok(s)
}

/// Kraus embedding of each rational fixture accepts with the same probability.
pub fn embedding(max_len: usize) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("probabilistic embedding");
    for (name, m) in restart_fixtures()? {
        let q = embedded_restart_qfa(&m)?;
        for w in words(max_len) {
            let exact = pfa_accept(m.pfa(), &w)?.to_f64_lossy();
            let quantum = qfa_accept(q.qfa(), &w)?;
            s.check((exact - quantum).abs() <= 1e-12, || format!("{name} on {w:?}: {exact} vs {quantum}"));
        }
    }
    Ok(s)
}

/// Renormalized acceptance equals the geometric series over rounds.
pub fn geometric_series(max_len: usize) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("geometric series");
    for (name, m) in restart_fixtures()? {
        for w in words(max_len) {
            let round = restart_round_pfa(&m, &w)?;
            let v = restart_overall(&round);
            let halting = round.halting();
            if halting.is_zero() {
                s.check(!v.valid, || format!("{name} on {w:?}: zero halting mass marked valid"));
                continue;
            }
            let (accept, restart) = (round.accept.to_f64_lossy(), 1.0 - halting.to_f64_lossy());
            let mut power = 1.0;
            let mut sum = 0.0;
            for _ in 0..=100 {
                sum += power * accept;
                power *= restart;
            }
            let gap = v.f_accept.to_f64_lossy() - sum;
            s.check(gap >= -1e-12 && gap <= power + 1e-12, || {
                format!("{name} on {w:?}: series gap {gap} outside residual bound {power}")
            });
        }
    }
    Ok(s)
}

/// Restart and postselection forms of each fixture agree exactly.
pub fn restart_post_round_trip(max_len: usize) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("restart/postselection round-trip");
    for (name, m) in restart_fixtures()? {
        let deferred = if m.halt() == HaltTiming::PerStep { defer_halting(&m)? } else { m.clone() };
        let post = restart_to_post(&deferred)?;
        let back = post_to_restart(&post)?;
        for w in words(max_len) {
            let v = m.verdict(&w)?;
            let (p, b) = (post.verdict(&w)?, back.verdict(&w)?);
            let same = |x: &crate::semantics::Verdict<BigRational>| {
                x.f_accept == v.f_accept && x.f_reject == v.f_reject && x.valid == v.valid
            };
            s.check(same(&p) && same(&b), || format!("{name} on {w:?}: verdicts differ"));
        }
    }
    Ok(s)
}

/// The Kraus simulation of a Kondacs-Watrous machine has the same rounds,
/// and linearizing it gives the same final accept and reject entries.
pub fn quantum_simulation(max_len: usize) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("quantum restart simulation");
    let mut machines = vec![("lpal".to_string(), build_lpal(&LpalParams::default())?)];
    for seed in 0..5 {
        machines.push((format!("random-kw-{seed}"), random_kwqfa(seed, 3 + seed as usize % 2)?));
    }
    for (name, m) in machines {
        let q = kwqfa_restart_to_qfa_restart(&m)?;
        let lin = linearize(&q)?;
        for w in words(max_len) {
            let a = restart_round_kw(&m, &w)?;
            let b = restart_round_qfa(&q, &w)?;
            let c = lin.round(&w)?;
            let close = |x: &crate::semantics::RoundOutcome<f64>, y: &crate::semantics::RoundOutcome<f64>| {
                (x.accept - y.accept).abs() <= 1e-9 && (x.reject - y.reject).abs() <= 1e-9
            };
            s.check(close(&a, &b) && close(&b, &c), || format!("{name} on {w:?}: {a:?} / {b:?} / {c:?}"));
        }
    }
    let m = embedding_fixture()?;
    let q = embedded_restart_qfa(&m)?;
    let lin = linearize(&q)?;
    for w in words(max_len) {
        let exact = restart_round_pfa(&m, &w)?;
        let c = lin.round(&w)?;
        s.check(
            (exact.accept.to_f64_lossy() - c.accept).abs() <= 1e-12
                && (exact.reject.to_f64_lossy() - c.reject).abs() <= 1e-12,
            || format!("embedding on {w:?}: linearized {c:?}"),
        );
    }
    Ok(s)
}

/// Zero-error machines from automata, and their cutpoint-zero forms, agree
/// with the automata.
pub fn regular_zero_error(max_len: usize) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("automata as zero-error machines");
    for (name, d, _) in dfa_fixtures()? {
        let post = dfa_to_zero_error_post(&d)?;
        let language = zero_error_post_to_cutpoint_zero(&post, Side::Language)?;
        let complement = zero_error_post_to_cutpoint_zero(&post, Side::Complement)?;
        let pfa = dfa_as_pfa(&d)?;
        for w in words(max_len) {
            let member = d.accepts(&w)?;
            let v = post.verdict(&w)?;
            let ok = v.valid
                && v.f_accept == if member { BigRational::one() } else { BigRational::zero() }
                && pfa_accept(&language, &w)?.is_positive() == member
                && pfa_accept(&complement, &w)?.is_positive() != member
                && pfa_accept(&pfa, &w)?.is_positive() == member;
            s.check(ok, || format!("{name} on {w:?}"));
        }
    }
    Ok(s)
}

/// Every machine the `zoo` command emits evaluates on every short string.
pub fn zoo_evaluates(max_len: usize) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("zoo machines evaluate");
    for name in crate::zoo::ZOO_NAMES {
        let m = crate::zoo::build_named(name, None)?;
        for w in words(max_len.min(6)) {
            let ok = evaluate(&m, &w).is_ok();
            s.check(ok, || format!("{name} on {w:?}"));
        }
    }
    Ok(s)
}

/// All suites at the given string length bound.
pub fn run_all(max_len: usize) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        format_round_trip()?,
        embedding(max_len.min(5))?,
        geometric_series(max_len)?,
        restart_post_round_trip(max_len)?,
        quantum_simulation(max_len)?,
        regular_zero_error(max_len)?,
        zoo_evaluates(max_len)?,
    ])
}
