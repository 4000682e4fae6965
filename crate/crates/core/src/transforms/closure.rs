//! Complement, union, intersection and error reduction of postselection machines.

use num::traits::{One, ToPrimitive, Zero};
use num::BigRational;

use crate::error::{Error, Result};
use crate::models::{BaseMachine, PfaMachine, PostMachine, QfaMachine};
use crate::numkit::ratio;

/// Base machines that can run side by side as a tensor product.
pub trait Tensor: BaseMachine {
    /// Product machine; state `(i, j)` has index `i * other.state_count() + j`.
    fn tensor(&self, other: &Self) -> Result<Self>;
}

fn same_alphabet<B: BaseMachine>(a: &B, b: &B) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::Precondition(format!(
            "alphabets differ: {{{}}} vs {{{}}}",
            a.alphabet(),
            b.alphabet()
        )));
    }
    Ok(())
}

impl Tensor for PfaMachine {
    fn tensor(&self, other: &Self) -> Result<Self> {
        same_alphabet(self, other)?;
        let transitions = self
            .transitions()
            .iter()
            .zip(other.transitions())
            .map(|(a, b)| a.kron(b))
            .collect();
        let accept = self.accept().product(other.accept(), other.state_count());
        PfaMachine::new(self.alphabet().clone(), transitions, accept)
    }
}

impl Tensor for QfaMachine {
    fn tensor(&self, other: &Self) -> Result<Self> {
        same_alphabet(self, other)?;
        let kraus = self
            .kraus()
            .iter()
            .zip(other.kraus())
            .map(|(xs, ys)| xs.iter().flat_map(|x| ys.iter().map(move |y| x.kron(y))).collect())
            .collect();
        let accept = self.accept().product(other.accept(), other.state_count());
        QfaMachine::new(self.alphabet().clone(), kraus, accept)
    }
}

/// Swaps the postselection accept and reject sets.
pub fn post_complement<B: BaseMachine>(m: &PostMachine<B>) -> Result<PostMachine<B>> {
    PostMachine::new(m.base().clone(), m.post_reject().clone(), m.post_accept().clone())
}

fn check_declared_error(epsilon: Option<&BigRational>) -> Result<()> {
    if let Some(e) = epsilon {
        if *e > ratio(1, 4) {
            return Err(Error::Precondition(format!(
                "operands need error bound at most 1/4 (declared {e}); amplify them first"
            )));
        }
    }
    Ok(())
}

/// Union of two postselection machines with error at most 1/4.
///
/// Accepting pairs: `Q_p1 x Q_p2` minus `Q_pr1 x Q_pr2`; rejecting pairs:
/// `Q_pr1 x Q_pr2`.
pub fn post_union<B: Tensor>(
    m1: &PostMachine<B>,
    m2: &PostMachine<B>,
    epsilon: Option<&BigRational>,
) -> Result<PostMachine<B>> {
    check_declared_error(epsilon)?;
    let n2 = m2.state_count();
    let base = m1.base().tensor(m2.base())?;
    let reject = m1.post_reject().product(m2.post_reject(), n2);
    let accept = m1.postselection().product(&m2.postselection(), n2).difference(&reject);
    PostMachine::new(base, accept, reject)
}

/// Intersection of two postselection machines with error at most 1/4.
///
/// Accepting pairs: `Q_pa1 x Q_pa2`; rejecting pairs: `Q_p1 x Q_p2` minus those.
pub fn post_intersection<B: Tensor>(
    m1: &PostMachine<B>,
    m2: &PostMachine<B>,
    epsilon: Option<&BigRational>,
) -> Result<PostMachine<B>> {
    check_declared_error(epsilon)?;
    let n2 = m2.state_count();
    let base = m1.base().tensor(m2.base())?;
    let accept = m1.post_accept().product(m2.post_accept(), n2);
    let reject = m1.postselection().product(&m2.postselection(), n2).difference(&accept);
    PostMachine::new(base, accept, reject)
}

/// `k` copies run in parallel; a copy-tuple is postselected only when all
/// copies agree.
pub fn amplify<B: Tensor>(m: &PostMachine<B>, k: usize) -> Result<PostMachine<B>> {
    if k == 0 {
        return Err(Error::Domain("amplification needs k >= 1".into()));
    }
    let n = m.state_count();
    let mut base = m.base().clone();
    let mut accept = m.post_accept().clone();
    let mut reject = m.post_reject().clone();
    let mut size = n;
    for _ in 1..k {
        base = base.tensor(m.base())?;
        accept = accept.product(m.post_accept(), n);
        reject = reject.product(m.post_reject(), n);
        size *= n;
    }
    debug_assert_eq!(size, base.state_count());
    PostMachine::new(base, accept, reject)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplificationPlan {
    pub k: usize,
    pub epsilon_in: BigRational,
    pub epsilon_out: BigRational,
}

/// Smallest `k` with `(eps / (1 - eps))^k <= target / (1 - target)`;
/// `target` defaults to `eps^2`.
pub fn choose_k(epsilon: &BigRational, target: Option<&BigRational>) -> Result<AmplificationPlan> {
    let half = ratio(1, 2);
    if *epsilon <= BigRational::zero() || *epsilon >= half {
        return Err(Error::Domain(format!("error bound {epsilon} must lie in (0, 1/2)")));
    }
    let default_target = epsilon * epsilon;
    let target = target.unwrap_or(&default_target);
    if *target <= BigRational::zero() || *target >= BigRational::one() {
        return Err(Error::Domain(format!("target error {target} must lie in (0, 1)")));
    }
    let one = BigRational::one();
    let r = epsilon / (&one - epsilon);
    let bound = target / (&one - target);
    let mut k = 1;
    let mut power = r.clone();
    while power > bound {
        power *= &r;
        k += 1;
    }
    if *target == default_target {
        let closed = closed_form_k(epsilon);
        if closed != k {
            return Err(Error::Invariant(format!(
                "closed form gives k = {closed}, search gives k = {k}"
            )));
        }
    }
    let epsilon_out = &power / (&one + &power);
    Ok(AmplificationPlan { k, epsilon_in: epsilon.clone(), epsilon_out })
}

/// `1 + ceil(log(1/eps + 1) / log(1/eps - 1))`, snapping to an integer when
/// the quotient is within rounding noise of one.
pub fn closed_form_k(epsilon: &BigRational) -> usize {
    let e = epsilon.to_f64().unwrap_or(f64::NAN);
    let x = (1.0 / e + 1.0).ln() / (1.0 / e - 1.0).ln();
    let snapped = if (x - x.round()).abs() < 1e-9 { x.round() } else { x.ceil() };
    1 + snapped as usize
}
