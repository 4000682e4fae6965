//! Witness machines for the nonregular languages `L_eq`, `L_pal` and
//! `a L_eq + b (complement of L_eq)`, plus regular languages from automata.

use num::traits::{One, Zero};
use num::BigRational;

use crate::error::{Error, Result};
use crate::models::{
    Alphabet, BaseMachine, Dfa, HaltTiming, KwqfaMachine, Partition, PfaMachine, PostMachine,
    QfaMachine, RestartPfa, StateSet,
};
use crate::numkit::{orthonormal_extend, ratio, unitary_complete, CMatrix, RMatrix, C64, ORTHO_TOL};
use crate::semantics::Probability;
use crate::transforms::{dfa_as_pfa, kwqfa_restart_to_qfa_restart, post_complement, restart_to_post};

/// Parameters of the `L_eq` restart machine.
#[derive(Clone, Debug, PartialEq)]
pub struct LeqParams {
    rho: BigRational,
    alpha: BigRational,
    epsilon: BigRational,
}

impl LeqParams {
    /// Checks `rho >= 1 - eps` and `alpha <= eps (1 - rho) / (2 rho (1 - eps))`,
    /// which bound both error ratios by `eps / (1 - eps)`.
    pub fn new(rho: BigRational, alpha: BigRational, epsilon: BigRational) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let half = ratio(1, 2);
        if !(rho > half && rho < one) {
            return Err(Error::Domain(format!("rho = {rho} must lie in (1/2, 1)")));
        }
        if !(alpha > zero && alpha < one) {
            return Err(Error::Domain(format!("alpha = {alpha} must lie in (0, 1)")));
        }
        if !(epsilon > zero && epsilon < half) {
            return Err(Error::Domain(format!("epsilon = {epsilon} must lie in (0, 1/2)")));
        }
        if rho < &one - &epsilon {
            return Err(Error::Domain(format!("rho = {rho} is below 1 - epsilon")));
        }
        let two = &one + &one;
        let alpha_max = &epsilon * (&one - &rho) / (two * &rho * (&one - &epsilon));
        if alpha > alpha_max {
            return Err(Error::Domain(format!("alpha = {alpha} exceeds {alpha_max}")));
        }
        Ok(Self { rho, alpha, epsilon })
    }

    /// `rho = 1 - eps`, `alpha = eps^2 / (2 (1 - eps)^2)`.
    pub fn for_epsilon(epsilon: BigRational) -> Result<Self> {
        let one = BigRational::one();
        let q = &one - &epsilon;
        let alpha = &epsilon * &epsilon / (ratio(2, 1) * &q * &q);
        Self::new(q, alpha, epsilon)
    }

    pub fn rho(&self) -> &BigRational {
        &self.rho
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    /// `(rho alpha^(x+y), (1 - rho)/2 (alpha^2x + alpha^2y))` for `x` a's and `y` b's.
    pub fn closed_form(&self, x: usize, y: usize) -> (BigRational, BigRational) {
        let pow = |k: usize| (0..k).fold(BigRational::one(), |acc, _| acc * &self.alpha);
        let accept = &self.rho * pow(x + y);
        let reject = (BigRational::one() - &self.rho) / ratio(2, 1) * (pow(2 * x) + pow(2 * y));
        (accept, reject)
    }
}

impl Default for LeqParams {
    fn default() -> Self {
        Self::new(ratio(3, 4), ratio(1, 32), ratio(1, 4)).expect("default parameters are valid")
    }
}

/// `|w|_a = |w|_b`.
pub fn in_leq(w: &str) -> bool {
    let a = w.chars().filter(|&c| c == 'a').count();
    a * 2 == w.chars().count()
}

/// Palindromes over `{a, b}`.
pub fn in_lpal(w: &str) -> bool {
    w.chars().eq(w.chars().rev())
}

/// `a w` with `w` in `L_eq`, or `b w` with `w` not in `L_eq`.
pub fn in_leqeq(w: &str) -> bool {
    let mut chars = w.chars();
    match chars.next() {
        Some('a') => in_leq(chars.as_str()),
        Some('b') => !in_leq(chars.as_str()),
        _ => false,
    }
}

/// Restart machine for `L_eq` that halts or restarts only on `$`.
///
/// States: 1 start, 2 accept track, 3 and 4 reject tracks (decaying on `a`
/// and `b` respectively), 5 dead, 6 accept, 7 reject, 8 restart.
pub fn build_leq(params: &LeqParams) -> Result<RestartPfa> {
    let n = 8;
    let (start, acc_track, r1, r2, dead, acc, rej, rst) = (0, 1, 2, 3, 4, 5, 6, 7);
    let one = BigRational::one();
    let rho = params.rho.clone();
    let alpha = params.alpha.clone();
    let alpha2 = &alpha * &alpha;
    let side = (&one - &rho) / ratio(2, 1);

    let mut cent = RMatrix::identity(n);
    cent.set(start, start, BigRational::zero());
    cent.set(acc_track, start, rho);
    cent.set(r1, start, side.clone());
    cent.set(r2, start, side);

    let symbol = |decaying: usize, steady: usize| {
        let mut m = RMatrix::identity(n);
        m.set(acc_track, acc_track, alpha.clone());
        m.set(dead, acc_track, &one - &alpha);
        m.set(decaying, decaying, alpha2.clone());
        m.set(dead, decaying, &one - &alpha2);
        m.set(steady, steady, one.clone());
        m
    };
    let a = symbol(r1, r2);
    let b = symbol(r2, r1);

    let mut dollar = RMatrix::identity(n);
    for (from, to) in [(acc_track, acc), (r1, rej), (r2, rej), (dead, rst)] {
        dollar.set(from, from, BigRational::zero());
        dollar.set(to, from, one.clone());
    }

    let pfa = PfaMachine::new(Alphabet::ab(), vec![cent, a, b, dollar], StateSet::from_indices([acc]))?;
    RestartPfa::new(pfa, StateSet::from_indices([rej]), StateSet::from_indices([rst]), HaltTiming::AtEndOnly)
}

/// Postselection form of [`build_leq`].
pub fn build_leq_post(params: &LeqParams) -> Result<PostMachine<PfaMachine>> {
    restart_to_post(&build_leq(params)?)
}

/// Postselection machine for `a L_eq + b (complement of L_eq)`: the first
/// symbol selects a copy of the `L_eq` machine or of its complement.
pub fn build_leqeq(epsilon: &BigRational) -> Result<PostMachine<PfaMachine>> {
    let inner = build_leq_post(&LeqParams::for_epsilon(epsilon.clone())?)?;
    let flipped = post_complement(&inner)?;
    let pfa = inner.base();
    let k = pfa.state_count();
    let (block_a, block_b, empty) = (1, 1 + k, 1 + 2 * k);
    let n = 2 + 2 * k;
    let after_cent = pfa.transition(0).column(0);
    let alphabet = pfa.alphabet().clone();
    let transitions = (0..alphabet.tape_len())
        .map(|t| {
            let mut m = RMatrix::zeros(n, n);
            let a = pfa.transition(t);
            for offset in [block_a, block_b] {
                for i in 0..k {
                    for j in 0..k {
                        m.set(offset + j, offset + i, a.get(j, i).clone());
                    }
                }
            }
            m.set(empty, empty, BigRational::one());
            match alphabet.tape_label(t).as_str() {
                "cent" => m.set(0, 0, BigRational::one()),
                "dollar" => m.set(empty, 0, BigRational::one()),
                label => {
                    let offset = if label == "a" { block_a } else { block_b };
                    for (j, p) in after_cent.iter().enumerate() {
                        m.set(offset + j, 0, p.clone());
                    }
                }
            }
            m
        })
        .collect();
    let base = PfaMachine::new(alphabet, transitions, StateSet::new())?;
    let accept = inner.post_accept().shifted(block_a).union(&flipped.post_accept().shifted(block_b));
    let mut reject = inner.post_reject().shifted(block_a).union(&flipped.post_reject().shifted(block_b));
    reject.insert(empty);
    PostMachine::new(base, accept, reject)
}

/// Parameters of the `L_pal` machine.
#[derive(Clone, Debug, PartialEq)]
pub struct LpalParams {
    mu: BigRational,
    epsilon: BigRational,
}

impl LpalParams {
    /// `mu` weights the accept amplitude; nonpalindromes are accepted with
    /// probability at most `mu^2 / (mu^2 + 1) <= eps`.
    pub fn new(mu: BigRational, epsilon: BigRational) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if !(mu > zero && mu < one) {
            return Err(Error::Domain(format!("mu = {mu} must lie in (0, 1)")));
        }
        if !(epsilon > zero && epsilon < ratio(1, 2)) {
            return Err(Error::Domain(format!("epsilon = {epsilon} must lie in (0, 1/2)")));
        }
        if &mu * &mu > &epsilon / (&one - &epsilon) {
            return Err(Error::Domain(format!("mu^2 = {} exceeds eps / (1 - eps)", &mu * &mu)));
        }
        Ok(Self { mu, epsilon })
    }

    /// Largest `mu = 2^-k` meeting the error target.
    pub fn for_epsilon(epsilon: BigRational) -> Result<Self> {
        let one = BigRational::one();
        if !(epsilon > BigRational::zero() && epsilon < ratio(1, 2)) {
            return Err(Error::Domain(format!("epsilon = {epsilon} must lie in (0, 1/2)")));
        }
        let bound = &epsilon / (&one - &epsilon);
        let mut mu = ratio(1, 2);
        while &mu * &mu > bound {
            mu /= ratio(2, 1);
        }
        Self::new(mu, epsilon)
    }

    pub fn mu(&self) -> &BigRational {
        &self.mu
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }
}

impl Default for LpalParams {
    fn default() -> Self {
        Self::new(ratio(1, 2), ratio(1, 5)).expect("default parameters are valid")
    }
}

/// Digit of a symbol in the base-4 encodings.
fn digit(c: char) -> i64 {
    if c == 'a' {
        1
    } else {
        2
    }
}

/// `(x, y)`: `w` read as a base-4 number with its first symbol least
/// significant, and with its first symbol most significant.
pub fn lpal_encodings(w: &str) -> (i64, i64) {
    let mut x = 0;
    let mut y = 0;
    let mut place = 1;
    for c in w.chars() {
        x += digit(c) * place;
        place *= 4;
        y = 4 * y + digit(c);
    }
    (x, y)
}

/// Kondacs-Watrous restart machine for palindromes.
///
/// A five-track linear system (start, u1, x, u2, y) computes both base-4
/// encodings of the input; on `$` the reject amplitude is `x - y` and the
/// accept amplitude `mu * u2`. The per-symbol maps are embedded into
/// unitaries, with the scaling constant raised to a power of two so that
/// all amplitudes on the nonhalting tracks stay dyadic.
///
/// States: 1-5 tracks, 6 accept, 7 reject, 8-21 restart.
pub fn build_lpal(params: &LpalParams) -> Result<KwqfaMachine> {
    let m = 7;
    let (start, u1, x, u2, y, qa, qr) = (0, 1, 2, 3, 4, 5, 6);
    let c = |v: f64| C64::new(v, 0.0);
    let halting_identity = |mat: &mut CMatrix| {
        mat.set(qa, qa, c(1.0));
        mat.set(qr, qr, c(1.0));
    };
    let mut cent = CMatrix::zeros(m, m);
    cent.set(u1, start, c(1.0));
    cent.set(u2, start, c(1.0));
    halting_identity(&mut cent);
    let symbol = |d: f64| {
        let mut s = CMatrix::zeros(m, m);
        s.set(u1, u1, c(4.0));
        s.set(x, u1, c(d));
        s.set(x, x, c(1.0));
        s.set(u2, u2, c(1.0));
        s.set(y, u2, c(d));
        s.set(y, y, c(4.0));
        halting_identity(&mut s);
        s
    };
    let mut dollar = CMatrix::zeros(m, m);
    dollar.set(qr, x, c(1.0));
    dollar.set(qr, y, c(-1.0));
    dollar.set(qa, u2, c(params.mu.to_f64_lossy()));
    halting_identity(&mut dollar);

    let family = vec![cent, symbol(1.0), symbol(2.0), dollar];
    let ext = orthonormal_extend(&family)?;
    let ext = ext.rescaled(&family, ext.l.log2().ceil().exp2())?;
    let unitaries = (0..family.len())
        .map(|s| unitary_complete(&ext.isometry(&family, s), ORTHO_TOL))
        .collect::<Result<Vec<_>>>()?;
    let partition = Partition::new(StateSet::from_indices([qa]), StateSet::from_indices([qr]), (m..3 * m).collect());
    KwqfaMachine::new(Alphabet::ab(), unitaries, partition)
}

/// Quantum automaton accepting with positive probability exactly the
/// nonpalindromes: the reject states of the simulated [`build_lpal`]
/// machine become accepting.
pub fn build_lpal_complement(params: &LpalParams) -> Result<QfaMachine> {
    let restart = kwqfa_restart_to_qfa_restart(&build_lpal(params)?)?;
    restart.qfa().with_accept(restart.reject().clone())
}

/// Zero-error postselection machine for the language of a complete automaton.
pub fn dfa_to_zero_error_post(d: &Dfa) -> Result<PostMachine<PfaMachine>> {
    let pfa = dfa_as_pfa(d)?;
    let accept = pfa.accept().clone();
    let reject = accept.complement(pfa.state_count());
    PostMachine::new(pfa, accept, reject)
}

/// Names accepted by [`build_named`].
pub const ZOO_NAMES: [&str; 5] = ["leq", "leq-post", "leqeq", "lpal", "lpal-complement"];

/// Builds a zoo machine by name, for the command line.
pub fn build_named(name: &str, epsilon: Option<&BigRational>) -> Result<crate::models::Machine> {
    use crate::models::Machine;
    let leq = || match epsilon {
        Some(e) => LeqParams::for_epsilon(e.clone()),
        None => Ok(LeqParams::default()),
    };
    let lpal = || match epsilon {
        Some(e) => LpalParams::for_epsilon(e.clone()),
        None => Ok(LpalParams::default()),
    };
    Ok(match name {
        "leq" => Machine::PfaRestart(build_leq(&leq()?)?),
        "leq-post" => Machine::PostPfa(build_leq_post(&leq()?)?),
        "leqeq" => Machine::PostPfa(build_leqeq(epsilon.unwrap_or(&ratio(1, 4)))?),
        "lpal" => Machine::KwqfaRestart(build_lpal(&lpal()?)?),
        "lpal-complement" => Machine::Qfa(build_lpal_complement(&lpal()?)?),
        other => {
            return Err(Error::Domain(format!(
                "unknown zoo machine `{other}` (known: {})",
                ZOO_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::restart_round_pfa;

    #[test]
    fn leq_examples() {
        let m = build_leq(&LeqParams::default()).unwrap();
        let r = restart_round_pfa(&m, "ab").unwrap();
        assert_eq!((r.accept, r.reject), (ratio(3, 4096), ratio(1, 4096)));
        let r = restart_round_pfa(&m, "").unwrap();
        assert_eq!((r.accept, r.reject), (ratio(3, 4), ratio(1, 4)));
    }

    #[test]
    fn leq_parameter_checks() {
        assert!(LeqParams::new(ratio(3, 4), ratio(1, 17), ratio(1, 4)).is_err());
        assert!(LeqParams::new(ratio(2, 3), ratio(1, 32), ratio(1, 4)).is_err());
        let p = LeqParams::for_epsilon(ratio(1, 4)).unwrap();
        assert_eq!(p.alpha(), &ratio(1, 18));
    }

    #[test]
    fn encodings() {
        assert_eq!(lpal_encodings("ab"), (9, 6));
        assert_eq!(lpal_encodings("aa"), (5, 5));
        assert_eq!(lpal_encodings(""), (0, 0));
    }

    #[test]
    fn lpal_mu_search() {
        assert_eq!(LpalParams::for_epsilon(ratio(1, 5)).unwrap().mu(), &ratio(1, 2));
        assert_eq!(LpalParams::for_epsilon(ratio(1, 10)).unwrap().mu(), &ratio(1, 4));
    }

    #[test]
    fn lpal_examples() {
        use crate::semantics::restart_round_kw;
        let m = build_lpal(&LpalParams::default()).unwrap();
        assert_eq!(m.state_count(), 21);
        let r = restart_round_kw(&m, "ab").unwrap();
        assert!((r.accept / (r.accept + r.reject) - 1.0 / 37.0).abs() < 1e-12);
        let r = restart_round_kw(&m, "abba").unwrap();
        assert_eq!(r.reject, 0.0);
        assert!(r.accept > 0.0);
    }

    #[test]
    fn leqeq_membership() {
        assert!(in_leqeq("a"));
        assert!(!in_leqeq("b"));
        assert!(!in_leqeq(""));
        assert!(in_leqeq("aab"));
        assert!(in_leqeq("ba"));
    }
}
