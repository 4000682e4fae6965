//! Reference evaluators written directly from the definitions, sharing no
//! code with the library's evaluators.
#![allow(dead_code)]

use num::traits::{One, Zero};
use num::{BigRational, Complex};

use rtfa::models::{BaseMachine, HaltTiming, KwqfaMachine, PfaMachine, QfaMachine, RestartPfa, StateSet};

pub type C = Complex<f64>;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn tape(m: &impl BaseMachine, w: &str) -> Vec<usize> {
    let symbols = m.alphabet().symbols();
    let mut t = vec![0];
    t.extend(w.chars().map(|c| 1 + symbols.iter().position(|&s| s == c).expect("symbol in alphabet")));
    t.push(symbols.len() + 1);
    t
}

/// All strings over `{a, b}` of length at most `n`, shortest first.
pub fn words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        layer = layer.iter().flat_map(|w| [format!("{w}a"), format!("{w}b")]).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Dense `v <- A v` over the full tape.
pub fn pfa_vector(m: &PfaMachine, w: &str) -> Vec<BigRational> {
    let n = m.state_count();
    let mut v = vec![BigRational::zero(); n];
    v[0] = BigRational::one();
    for t in tape(m, w) {
        let a = m.transition(t);
        v = (0..n)
            .map(|j| (0..n).fold(BigRational::zero(), |acc, i| acc + a.get(j, i) * &v[i]))
            .collect();
    }
    v
}

pub fn mass(v: &[BigRational], s: &StateSet) -> BigRational {
    s.iter().fold(BigRational::zero(), |acc, i| acc + &v[i])
}

/// Single-round `(p_a, p_r)` of a restart PFA, with per-step siphoning when
/// the machine halts per step.
pub fn pfa_round(m: &RestartPfa, w: &str) -> (BigRational, BigRational) {
    let pfa = m.pfa();
    if m.halt() == HaltTiming::AtEndOnly {
        let v = pfa_vector(pfa, w);
        return (mass(&v, m.accept()), mass(&v, m.reject()));
    }
    let n = pfa.state_count();
    let mut v = vec![BigRational::zero(); n];
    v[0] = BigRational::one();
    let (mut pa, mut pr) = (BigRational::zero(), BigRational::zero());
    for t in tape(pfa, w) {
        let a = pfa.transition(t);
        v = (0..n)
            .map(|j| (0..n).fold(BigRational::zero(), |acc, i| acc + a.get(j, i) * &v[i]))
            .collect();
        for (i, x) in v.iter_mut().enumerate() {
            if m.accept().contains(i) {
                pa += std::mem::take(x);
            } else if m.reject().contains(i) {
                pr += std::mem::take(x);
            } else if m.restart().contains(i) {
                *x = BigRational::zero();
            }
        }
    }
    (pa, pr)
}

pub fn cmat_mul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn dense(m: &rtfa::numkit::CMatrix) -> Vec<Vec<C>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| *m.get(i, j)).collect()).collect()
}

fn dagger(a: &[Vec<C>]) -> Vec<Vec<C>> {
    (0..a[0].len()).map(|i| (0..a.len()).map(|j| a[j][i].conj()).collect()).collect()
}

/// Diagonal of `rho` after `¢w$` under `rho <- sum E rho E^dagger`.
pub fn qfa_diagonal(m: &QfaMachine, w: &str) -> Vec<f64> {
    let n = m.state_count();
    let mut rho = vec![vec![C::new(0.0, 0.0); n]; n];
    rho[0][0] = C::new(1.0, 0.0);
    for t in tape(m, w) {
        let mut next = vec![vec![C::new(0.0, 0.0); n]; n];
        for e in m.operators(t) {
            let e = dense(e);
            let term = cmat_mul(&cmat_mul(&e, &rho), &dagger(&e));
            for i in 0..n {
                for j in 0..n {
                    next[i][j] += term[i][j];
                }
            }
        }
        rho = next;
    }
    (0..n).map(|i| rho[i][i].re).collect()
}

/// Single round of a Kondacs-Watrous machine by explicit measurement:
/// halting amplitudes are removed after every unitary step.
pub fn kw_round(m: &KwqfaMachine, w: &str) -> (f64, f64) {
    let n = m.state_count();
    let mut psi = vec![C::new(0.0, 0.0); n];
    psi[0] = C::new(1.0, 0.0);
    let p = m.partition();
    let (mut pa, mut pr) = (0.0, 0.0);
    let symbols = m.alphabet().symbols();
    let mut t = vec![0];
    t.extend(w.chars().map(|c| 1 + symbols.iter().position(|&s| s == c).unwrap()));
    t.push(symbols.len() + 1);
    for s in t {
        let u = dense(m.unitary(s));
        psi = (0..n).map(|i| (0..n).map(|k| u[i][k] * psi[k]).sum()).collect();
        for (i, amp) in psi.iter_mut().enumerate() {
            if p.accept.contains(i) {
                pa += amp.norm_sqr();
            } else if p.reject.contains(i) {
                pr += amp.norm_sqr();
            } else if !p.restart.contains(i) {
                continue;
            }
            *amp = C::new(0.0, 0.0);
        }
    }
    (pa, pr)
}

/// Largest entry of `|U^dagger U - I|`.
pub fn unitarity_defect(u: &rtfa::numkit::CMatrix) -> f64 {
    let d = dense(u);
    let g = cmat_mul(&dagger(&d), &d);
    let mut worst: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((z - C::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `|w|_a`, `|w|_b`.
pub fn counts(w: &str) -> (usize, usize) {
    let a = w.chars().filter(|&c| c == 'a').count();
    (a, w.chars().count() - a)
}

pub fn is_palindrome(w: &str) -> bool {
    let b = w.as_bytes();
    (0..b.len() / 2).all(|i| b[i] == b[b.len() - 1 - i])
}
