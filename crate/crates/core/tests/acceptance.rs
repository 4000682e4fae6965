//! End-to-end acceptance checks; prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num::traits::{One, Zero};
use num::BigRational;

use common::{counts, is_palindrome, kw_round, pfa_round, pfa_vector, q, qfa_diagonal, unitarity_defect, words};
use rtfa::fixtures::{
    dfa_fixtures, embedded_restart_qfa, embedding_fixture, random_kwqfa, random_restart_qfa, restart_fixtures,
};
use rtfa::models::{
    Alphabet, BaseMachine, HaltTiming, Judgment, LatvianPostMachine, Machine, PfaMachine, PostMachine, StateSet, Tau,
};
use rtfa::montecarlo::{estimate, DEFAULT_ROUND_CAP};
use rtfa::numkit::RMatrix;
use rtfa::semantics::{
    check_recognition, expected_runtime, restart_round_kw, restart_round_pfa, restart_round_qfa, round_length,
    Probability, Recognizer,
};
use rtfa::transforms::{
    amplify, choose_k, cutpoint_zero_to_latvian, defer_halting, epsilon_prime, kwqfa_restart_to_qfa_restart,
    latvian_to_post, linearize, post_complement, post_intersection, post_qfa_to_restart, post_to_restart,
    post_union, qfa_restart_to_kwqfa_restart, restart_qfa_to_post, restart_to_post,
    zero_error_post_to_cutpoint_zero, LatvianSide, Side,
};
use rtfa::zoo::{
    build_leq, build_leq_post, build_leqeq, build_lpal, build_lpal_complement, dfa_to_zero_error_post, LeqParams,
    LpalParams,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: rtfa::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn f64_of(x: &BigRational) -> f64 {
    x.to_f64_lossy()
}

/// Exact normalization and the geometric series over rounds.
fn normalization() -> Check {
    let mut checked = 0;
    for (name, m) in lib(restart_fixtures())? {
        for w in words(8) {
            let (pa, pr) = pfa_round(&m, &w);
            let v = lib(m.verdict(&w))?;
            let total = &pa + &pr;
            if total.is_zero() {
                ensure(!v.valid, || format!("{name} {w:?}: zero mass marked valid"))?;
                continue;
            }
            ensure(v.f_accept == &pa / &total && v.f_reject == &pr / &total, || {
                format!("{name} {w:?}: f_a = {} but p_a / (p_a + p_r) = {}", v.f_accept, &pa / &total)
            })?;
            let (a, r) = (f64_of(&pa), 1.0 - f64_of(&total));
            let (mut sum, mut power) = (0.0, 1.0);
            for _ in 0..=100 {
                sum += power * a;
                power *= r;
            }
            let gap = f64_of(&v.f_accept) - sum;
            ensure(gap >= -1e-12 && gap <= power + 1e-12, || {
                format!("{name} {w:?}: series gap {gap} exceeds residual {power}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (machine, string) pairs exact; series within residual bound"))
}

/// Expected runtime against sampled runtime.
fn runtime() -> Check {
    let m = lib(build_leq(&LeqParams::default()))?;
    let (pa, pr) = pfa_round(&m, "ab");
    let p = &pa + &pr;
    ensure(p == q(1, 1024), || format!("round halting probability {p}, expected 1/1024"))?;
    let exact = lib(expected_runtime(&p, round_length("ab")))?;
    ensure(exact == q(4096, 1), || format!("expected runtime {exact}"))?;
    let e = lib(estimate(&Machine::PfaRestart(m), "ab", 100_000, 2024, DEFAULT_ROUND_CAP))?;
    let rel = (e.mean_steps - 4096.0).abs() / 4096.0;
    ensure(rel <= 0.05, || format!("mean steps {} off by {:.2}%", e.mean_steps, rel * 100.0))?;
    ensure((e.empirical_f_accept - 0.75).abs() <= 0.01, || format!("empirical f_a {}", e.empirical_f_accept))?;
    Ok(format!(
        "exact 4096, sampled mean {:.1} ({:.2}% off), f_a {:.4}",
        e.mean_steps,
        rel * 100.0,
        e.empirical_f_accept
    ))
}

/// Restart and postselection forms agree.
fn round_trip() -> Check {
    let mut checked = 0;
    for (name, m) in lib(restart_fixtures())? {
        let source = if m.halt() == HaltTiming::PerStep { lib(defer_halting(&m))? } else { m.clone() };
        let post = lib(restart_to_post(&source))?;
        let back = lib(post_to_restart(&post))?;
        for w in words(8) {
            let (pa, pr) = pfa_round(&m, &w);
            let total = &pa + &pr;
            for (label, v) in [("post", lib(post.verdict(&w))?), ("restart", lib(back.verdict(&w))?)] {
                if total.is_zero() {
                    ensure(!v.valid, || format!("{name} {w:?} via {label}: should be invalid"))?;
                } else {
                    ensure(v.valid && v.f_accept == &pa / &total && v.f_reject == &pr / &total, || {
                        format!("{name} {w:?} via {label}: ({}, {})", v.f_accept, v.f_reject)
                    })?;
                }
            }
            checked += 1;
        }
    }
    for seed in 0..5 {
        let m = lib(random_restart_qfa(seed, 3))?;
        let post = lib(restart_qfa_to_post(&m))?;
        let back = lib(post_qfa_to_restart(&post))?;
        for w in words(6) {
            let d = qfa_diagonal(m.qfa(), &w);
            let (pa, pr) = (d[1], d[2]);
            for v in [lib(post.verdict(&w))?, lib(back.verdict(&w))?] {
                ensure((v.f_accept - pa / (pa + pr)).abs() <= 1e-12, || format!("qfa seed {seed} {w:?}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} strings, rational fixtures exact, quantum within 1e-12"))
}

fn leq_member(w: &str) -> bool {
    let (a, b) = counts(w);
    a == b
}

fn leqeq_member(w: &str) -> bool {
    match w.as_bytes().first() {
        Some(b'a') => leq_member(&w[1..]),
        Some(b'b') => !leq_member(&w[1..]),
        _ => false,
    }
}

/// Closure under union and intersection.
fn closure() -> Check {
    let leq = lib(build_leq_post(&LeqParams::default()))?;
    let leqeq = lib(build_leqeq(&q(1, 4)))?;
    let co_leq = lib(post_complement(&leq))?;
    let dfas = lib(dfa_fixtures())?;
    let even_a = lib(dfa_to_zero_error_post(&dfas[1].1))?;
    let ends_b = lib(dfa_to_zero_error_post(&dfas[2].1))?;
    type Lang = fn(&str) -> bool;
    type Operand<'a> = (&'a PostMachine<PfaMachine>, Lang);
    let pairs: Vec<(&str, Operand, Operand)> = vec![
        ("leq x even-a", (&leq, leq_member), (&even_a, |w| w.matches('a').count().is_multiple_of(2))),
        ("leq x leqeq", (&leq, leq_member), (&leqeq, leqeq_member)),
        ("leqeq x ends-b", (&leqeq, leqeq_member), (&ends_b, |w| w.ends_with('b'))),
        ("co-leq x leqeq", (&co_leq, |w| !leq_member(w)), (&leqeq, leqeq_member)),
    ];
    let eps = q(1, 4);
    let (mut checked, mut tight_union, mut tight_inter) = (0, 0, 0);
    for (name, (m1, l1), (m2, l2)) in pairs {
        let u = lib(post_union(m1, m2, Some(&eps)))?;
        let i = lib(post_intersection(m1, m2, Some(&eps)))?;
        for w in words(8) {
            let (in1, in2) = (l1(&w), l2(&w));
            let fu = lib(u.verdict(&w))?.f_accept;
            let fi = lib(i.verdict(&w))?.f_accept;
            if in1 || in2 {
                ensure(fu >= q(3, 4), || format!("{name} union {w:?}: member f_a = {fu}"))?;
                tight_union += usize::from(fu >= q(15, 16));
            } else {
                ensure(fu <= q(7, 16), || format!("{name} union {w:?}: nonmember f_a = {fu}"))?;
                tight_union += usize::from(fu <= q(1, 16));
            }
            if in1 && in2 {
                ensure(fi >= q(9, 16), || format!("{name} intersection {w:?}: member f_a = {fi}"))?;
                tight_inter += usize::from(fi >= q(15, 16));
            } else {
                ensure(fi <= q(1, 4), || format!("{name} intersection {w:?}: nonmember f_a = {fi}"))?;
                tight_inter += usize::from(fi <= q(1, 16));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} strings x 2 operations; 15/16 and 1/16 bounds hold on {tight_union}/{checked} (union), {tight_inter}/{checked} (intersection)"
    ))
}

/// Error reduction by parallel copies.
fn amplification() -> Check {
    let plan = lib(choose_k(&q(1, 4), Some(&q(1, 16))))?;
    ensure(plan.k == 3, || format!("choose_k gave {}", plan.k))?;
    let base = lib(build_leq_post(&LeqParams::default()))?;
    let amp = lib(amplify(&base, plan.k))?;
    let report = lib(check_recognition(&amp, &leq_member, &Judgment::BoundedError(q(1, 16)), 10))?;
    ensure(report.pass(), || format!("{} counterexamples", report.counterexamples.len()))?;
    for w in words(8) {
        let v = pfa_vector(base.base(), &w);
        let (pa, pr) = (common::mass(&v, base.post_accept()), common::mass(&v, base.post_reject()));
        let round = lib(amp.verdict(&w))?.round.ok_or("amplified verdict has no round")?;
        let (qa, qr) = (round.accept, round.reject);
        ensure(qa == &pa * &pa * &pa && qr == &pr * &pr * &pr, || format!("{w:?}: masses are not cubes"))?;
        ensure(&qa * &pr * &pr * &pr == &qr * &pa * &pa * &pa, || format!("{w:?}: ratio is not cubed"))?;
    }
    Ok(format!(
        "k = 3, epsilon_out = {}, {} strings pass at 1/16, cubed ratios exact",
        plan.epsilon_out, report.checked
    ))
}

/// Compilation of quantum restart machines into Kondacs-Watrous form.
fn compiler() -> Check {
    let mut machines = vec![("embedding".to_string(), lib(embedded_restart_qfa(&lib(embedding_fixture())?))?)];
    for seed in 0..10 {
        machines.push((format!("random-{seed}"), lib(random_restart_qfa(seed, 2))?));
    }
    let mut worst_unitary: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for (name, m) in &machines {
        let n = m.state_count();
        let c = lib(qfa_restart_to_kwqfa_restart(m, Some(&q(1, 3))))?;
        ensure(c.machine.state_count() == 3 * n * n + 6, || {
            format!("{name}: {} states, expected {}", c.machine.state_count(), 3 * n * n + 6)
        })?;
        for u in c.machine.unitaries() {
            worst_unitary = worst_unitary.max(unitarity_defect(u));
        }
        ensure(worst_unitary <= 1e-9, || format!("{name}: unitarity defect {worst_unitary:e}"))?;
        for w in words(5) {
            let d = qfa_diagonal(m.qfa(), &w);
            let pa: f64 = m.accept().iter().map(|i| d[i]).sum();
            let pr: f64 = m.reject().iter().map(|i| d[i]).sum();
            let (na, nr) = kw_round(&c.machine, &w);
            let expected = pa * pa / (pa * pa + pr * pr);
            let got = na / (na + nr);
            worst_ratio = worst_ratio.max((expected - got).abs());
            ensure((expected - got).abs() <= 1e-6, || format!("{name} {w:?}: {got} vs {expected}"))?;
            let scale = c.l.powi(-(round_length(&w) as i32));
            ensure((na - (scale * pa).powi(2)).abs() <= 1e-12, || format!("{name} {w:?}: accept amplitude"))?;
        }
    }
    let eps = f64_of(&epsilon_prime(&q(1, 3)));
    ensure((eps - 0.2).abs() <= 1e-9, || format!("epsilon' = {eps}"))?;
    let (na, nr) = kw_round(&lib(qfa_restart_to_kwqfa_restart(&machines[0].1, None))?.machine, "");
    ensure((na / (na + nr) - 0.8).abs() <= 1e-9, || "embedding fixture on \"\" is not 4/5".into())?;
    Ok(format!(
        "11 machines, unitarity defect <= {worst_unitary:.1e}, squared-ratio error <= {worst_ratio:.1e}, eps' = 1/5"
    ))
}

/// Vectorized density evolution.
fn linearization() -> Check {
    let mut machines = vec![lib(embedded_restart_qfa(&lib(embedding_fixture())?))?];
    for seed in 0..5 {
        machines.push(lib(random_restart_qfa(seed, 2))?);
        machines.push(lib(random_restart_qfa(50 + seed, 3))?);
    }
    let mut worst: f64 = 0.0;
    for m in &machines {
        let lin = lib(linearize(m))?;
        let d = lin.dimension();
        for w in words(6) {
            let v = lib(lin.evolve(&w))?;
            let diag = qfa_diagonal(m.qfa(), &w);
            let pa: f64 = m.accept().iter().map(|i| diag[i]).sum();
            let pr: f64 = m.reject().iter().map(|i| diag[i]).sum();
            worst = worst.max((v[d - 2].re - pa).abs()).max((v[d - 1].re - pr).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("{} machines, max deviation {worst:.1e}", machines.len()))
}

/// The `L_eq` witness on every string up to length 12.
fn leq_witness() -> Check {
    let params = LeqParams::default();
    let m = lib(build_leq(&params))?;
    let report = lib(check_recognition(&m, &leq_member, &Judgment::BoundedError(q(1, 4)), 12))?;
    ensure(report.pass(), || format!("{} counterexamples", report.counterexamples.len()))?;
    let (rho, alpha) = (q(3, 4), q(1, 32));
    let pow = |k: usize| (0..k).fold(BigRational::one(), |acc, _| acc * &alpha);
    for w in words(8) {
        let (x, y) = counts(&w);
        let r = lib(restart_round_pfa(&m, &w))?;
        let pa = &rho * pow(x + y);
        let pr = (BigRational::one() - &rho) / q(2, 1) * (pow(2 * x) + pow(2 * y));
        ensure(r.accept == pa && r.reject == pr, || format!("{w:?}: round differs from closed form"))?;
    }
    Ok(format!("{} strings, 0 counterexamples, closed form exact up to length 8", report.checked))
}

/// The `L_pal` witness.
fn lpal_witness() -> Check {
    let m = lib(build_lpal(&LpalParams::default()))?;
    let mut worst_nonpal: f64 = 0.0;
    let mut checked = 0;
    for w in words(10) {
        let r = lib(restart_round_kw(&m, &w))?;
        ensure((r.reject == 0.0) == is_palindrome(&w), || format!("{w:?}: p_r = {:e}", r.reject))?;
        ensure(r.accept + r.reject > 0.0, || format!("{w:?}: no halting mass"))?;
        let (oa, or) = kw_round(&m, &w);
        ensure((oa - r.accept).abs() <= 1e-9 && (or - r.reject).abs() <= 1e-9, || format!("{w:?}: oracle differs"))?;
        let v = lib(m.verdict(&w))?;
        ensure(v.valid, || format!("{w:?}: invalid"))?;
        if !is_palindrome(&w) {
            worst_nonpal = worst_nonpal.max(v.f_accept);
            ensure(v.f_accept <= 0.2, || format!("{w:?}: f_a = {}", v.f_accept))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} strings, p_r = 0 exactly on palindromes, nonpalindrome f_a <= {worst_nonpal:.4}"))
}

/// Kraus simulation of Kondacs-Watrous machines.
fn kw_simulation() -> Check {
    let mut machines = vec![("lpal".to_string(), lib(build_lpal(&LpalParams::default()))?)];
    for seed in 0..20 {
        machines.push((format!("random-{seed}"), lib(random_kwqfa(seed, 3))?));
    }
    for seed in 0..5 {
        machines.push((format!("random4-{seed}"), lib(random_kwqfa(100 + seed, 4))?));
    }
    let mut worst: f64 = 0.0;
    for (name, m) in &machines {
        let sim = lib(kwqfa_restart_to_qfa_restart(m))?;
        for w in words(8) {
            let (pa, pr) = kw_round(m, &w);
            let r = lib(restart_round_qfa(&sim, &w))?;
            worst = worst.max((r.accept - pa).abs()).max((r.reject - pr).abs());
            ensure(worst <= 1e-9, || format!("{name} {w:?}: deviation {worst:e}"))?;
        }
    }
    Ok(format!("{} machines, max deviation {worst:.1e}", machines.len()))
}

/// Machine whose postselection mass is zero exactly on `a*`: reading `b`
/// moves half the mass to a track that `$` sends to the postselection states.
fn latvian_fixture(tau: Tau) -> Result<LatvianPostMachine<PfaMachine>, String> {
    let n = 5;
    let (start, marked, pa, pr, sink) = (0, 1, 2, 3, 4);
    let id = RMatrix::identity(n);
    let mut b = RMatrix::identity(n);
    b.set(start, start, q(1, 2));
    b.set(marked, start, q(1, 2));
    let mut dollar = RMatrix::identity(n);
    dollar.set(start, start, q(0, 1));
    dollar.set(sink, start, q(1, 1));
    dollar.set(marked, marked, q(0, 1));
    dollar.set(pa, marked, q(2, 3));
    dollar.set(pr, marked, q(1, 3));
    let pfa = lib(PfaMachine::new(Alphabet::ab(), vec![id.clone(), id, b, dollar], StateSet::new()))?;
    let post = lib(PostMachine::new(pfa, StateSet::from_indices([pa]), StateSet::from_indices([pr])))?;
    Ok(LatvianPostMachine::new(post, tau))
}

/// Latvian postselection conversions.
fn latvian() -> Check {
    let mut checked = 0;
    let mut zero_mass = 0;
    for tau in [Tau::Accept, Tau::Reject] {
        let lm = latvian_fixture(tau)?;
        let post = lib(latvian_to_post(&lm))?;
        for w in words(8) {
            let v = pfa_vector(lm.post().base(), &w);
            let (pa, pr) = (common::mass(&v, lm.post().post_accept()), common::mass(&v, lm.post().post_reject()));
            let total = &pa + &pr;
            let expected = if total.is_zero() {
                zero_mass += 1;
                if tau == Tau::Accept { BigRational::one() } else { BigRational::zero() }
            } else {
                &pa / &total
            };
            let got = lib(post.verdict(&w))?;
            ensure(got.valid && got.f_accept == expected, || format!("tau {tau:?} {w:?}: {} vs {expected}", got.f_accept))?;
            let direct = lib(lm.verdict(&w))?;
            ensure(direct.f_accept == expected, || format!("tau {tau:?} {w:?}: direct verdict"))?;
            checked += 1;
        }
    }
    let lpal_co = lib(build_lpal_complement(&LpalParams::default()))?;
    for (side, member_is_nonpal) in [(LatvianSide::Nqal, true), (LatvianSide::Conqal, false)] {
        let lm = lib(cutpoint_zero_to_latvian(&lpal_co, side))?;
        let report = lib(check_recognition(&lm, &|w| is_palindrome(w) != member_is_nonpal, &Judgment::ZeroError, 8))?;
        ensure(report.pass() && report.ambiguous.is_empty(), || {
            format!("{side:?} on nonpalindromes: {} counterexamples", report.counterexamples.len())
        })?;
        checked += report.checked;
    }
    for (name, d, _) in lib(dfa_fixtures())? {
        let cz = lib(zero_error_post_to_cutpoint_zero(&lib(dfa_to_zero_error_post(&d))?, Side::Language))?;
        let qfa = rtfa::models::QfaMachine::embed(&cz);
        for (side, flip) in [(LatvianSide::Nqal, false), (LatvianSide::Conqal, true)] {
            let lm = lib(cutpoint_zero_to_latvian(&qfa, side))?;
            let lang = |w: &str| d.accepts(w).unwrap_or(false) != flip;
            let report = lib(check_recognition(&lm, &lang, &Judgment::ZeroError, 8))?;
            ensure(report.pass() && report.ambiguous.is_empty(), || format!("{name} {side:?}: fails"))?;
            checked += report.checked;
        }
    }
    Ok(format!("{checked} checks, {zero_mass} zero-mass inputs decided by tau"))
}

fn dfa_oracle(name: &str) -> fn(&str) -> bool {
    match name {
        "(ab)*" => |w| w.len() % 2 == 0 && w.as_bytes().chunks(2).all(|c| c == b"ab"),
        "even-a" => |w| w.bytes().filter(|&c| c == b'a').count() % 2 == 0,
        "ends-b" => |w| w.ends_with('b'),
        "contains-aa" => |w| w.contains("aa"),
        "len-mod-3" => |w| w.len() % 3 == 0,
        _ => |_| unreachable!("unknown fixture"),
    }
}

/// Regular languages as zero-error machines.
fn regular() -> Check {
    let mut checked = 0;
    let fixtures = lib(dfa_fixtures())?;
    ensure(fixtures.len() == 5, || "expected 5 automata".into())?;
    for (name, d, _) in fixtures {
        let oracle = dfa_oracle(&name);
        let post = lib(dfa_to_zero_error_post(&d))?;
        let lang = lib(zero_error_post_to_cutpoint_zero(&post, Side::Language))?;
        let co = lib(zero_error_post_to_cutpoint_zero(&post, Side::Complement))?;
        for w in words(10) {
            let member = lib(d.accepts(&w))?;
            ensure(member == oracle(&w), || format!("{name} {w:?}: automaton disagrees with oracle"))?;
            let v = lib(post.verdict(&w))?;
            let want = if member { BigRational::one() } else { BigRational::zero() };
            ensure(v.valid && v.f_accept == want, || format!("{name} {w:?}: zero-error verdict {}", v.f_accept))?;
            let pl = common::mass(&pfa_vector(&lang, &w), lang.accept());
            let pc = common::mass(&pfa_vector(&co, &w), co.accept());
            ensure((pl > BigRational::zero()) == member && (pc > BigRational::zero()) != member, || {
                format!("{name} {w:?}: cutpoint-zero machines disagree")
            })?;
            checked += 1;
        }
    }
    Ok(format!("5 automata, {checked} strings"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 12] = [
        ("restart normalization and geometric series", normalization),
        ("expected runtime vs Monte Carlo", runtime),
        ("restart/postselection round-trip", round_trip),
        ("union and intersection bounds", closure),
        ("amplification", amplification),
        ("Kondacs-Watrous compiler", compiler),
        ("linearization", linearization),
        ("L_eq witness", leq_witness),
        ("L_pal witness", lpal_witness),
        ("Kondacs-Watrous simulation", kw_simulation),
        ("Latvian conversions", latvian),
        ("regular languages with zero error", regular),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
