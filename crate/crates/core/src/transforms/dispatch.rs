//! Transform selection by name, for machines whose kind is known only at runtime.

use std::fmt;
use std::str::FromStr;

use num::BigRational;

use super::{
    amplify, cutpoint_zero_to_latvian, defer_halting, kwqfa_restart_to_qfa_restart, latvian_to_post,
    linearize, post_complement, post_intersection, post_qfa_to_restart, post_to_cutpoint,
    post_to_restart, post_union, qfa_restart_to_kwqfa_restart, restart_qfa_to_post, restart_to_post,
    zero_error_post_to_cutpoint_zero, LatvianSide, Side,
};
use crate::error::{Error, Result};
use crate::models::{Machine, QfaMachine};

/// A named transform, as accepted by `convert --to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Post,
    Restart,
    Defer,
    KwqfaRestart,
    QfaRestart,
    Linearized,
    Complement,
    Union,
    Intersection,
    Amplify(usize),
    Cutpoint,
    CutpointZero(Side),
    LatvianToPost,
    Latvian(LatvianSide),
}

impl Target {
    /// Whether the transform takes a second operand.
    pub fn is_binary(self) -> bool {
        matches!(self, Target::Union | Target::Intersection)
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "post" => Target::Post,
            "restart" => Target::Restart,
            "defer" => Target::Defer,
            "kwqfa-restart" => Target::KwqfaRestart,
            "qfa-restart" => Target::QfaRestart,
            "linearized" => Target::Linearized,
            "complement" => Target::Complement,
            "union" => Target::Union,
            "intersection" => Target::Intersection,
            "cutpoint" => Target::Cutpoint,
            "cutpoint-zero" => Target::CutpointZero(Side::Language),
            "cutpoint-zero:complement" => Target::CutpointZero(Side::Complement),
            "latvian-to-post" => Target::LatvianToPost,
            "latvian:nqal" => Target::Latvian(LatvianSide::Nqal),
            "latvian:conqal" => Target::Latvian(LatvianSide::Conqal),
            _ => match s.strip_prefix("amplify:") {
                Some(k) => Target::Amplify(
                    k.parse()
                        .ok()
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| Error::Domain(format!("bad amplification factor `{k}`")))?,
                ),
                None => return Err(Error::Domain(format!("unknown transform `{s}`"))),
            },
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Post => write!(f, "post"),
            Target::Restart => write!(f, "restart"),
            Target::Defer => write!(f, "defer"),
            Target::KwqfaRestart => write!(f, "kwqfa-restart"),
            Target::QfaRestart => write!(f, "qfa-restart"),
            Target::Linearized => write!(f, "linearized"),
            Target::Complement => write!(f, "complement"),
            Target::Union => write!(f, "union"),
            Target::Intersection => write!(f, "intersection"),
            Target::Amplify(k) => write!(f, "amplify:{k}"),
            Target::Cutpoint => write!(f, "cutpoint"),
            Target::CutpointZero(Side::Language) => write!(f, "cutpoint-zero"),
            Target::CutpointZero(Side::Complement) => write!(f, "cutpoint-zero:complement"),
            Target::LatvianToPost => write!(f, "latvian-to-post"),
            Target::Latvian(LatvianSide::Nqal) => write!(f, "latvian:nqal"),
            Target::Latvian(LatvianSide::Conqal) => write!(f, "latvian:conqal"),
        }
    }
}

fn unsupported(target: Target, m: &Machine) -> Error {
    Error::UnsupportedCombination(format!("`{target}` does not apply to a {} machine", m.kind()))
}

/// Applies `target` to `m` (and `with`, for binary transforms).
///
/// `epsilon` is the operands' declared error bound for union and
/// intersection, and the input error bound reported by the compiler.
pub fn convert(
    m: &Machine,
    target: Target,
    with: Option<&Machine>,
    epsilon: Option<&BigRational>,
) -> Result<Machine> {
    if target.is_binary() != with.is_some() {
        return Err(Error::Precondition(if target.is_binary() {
            format!("`{target}` needs a second machine")
        } else {
            format!("`{target}` takes a single machine")
        }));
    }
    Ok(match (target, m) {
        (Target::Post, Machine::PfaRestart(r)) => Machine::PostPfa(restart_to_post(r)?),
        (Target::Post, Machine::QfaRestart(r)) => Machine::PostQfa(restart_qfa_to_post(r)?),
        (Target::Post, Machine::KwqfaRestart(k)) => {
            Machine::PostQfa(restart_qfa_to_post(&kwqfa_restart_to_qfa_restart(k)?)?)
        }
        (Target::Restart, Machine::PostPfa(p)) => Machine::PfaRestart(post_to_restart(p)?),
        (Target::Restart, Machine::PostQfa(p)) => Machine::QfaRestart(post_qfa_to_restart(p)?),
        (Target::Defer, Machine::PfaRestart(r)) => Machine::PfaRestart(defer_halting(r)?),
        (Target::QfaRestart, Machine::KwqfaRestart(k)) => Machine::QfaRestart(kwqfa_restart_to_qfa_restart(k)?),
        (Target::KwqfaRestart, Machine::QfaRestart(q)) => {
            Machine::KwqfaRestart(qfa_restart_to_kwqfa_restart(q, epsilon)?.machine)
        }
        (Target::Linearized, Machine::QfaRestart(q)) => Machine::Linearized(linearize(q)?),
        (Target::Linearized, Machine::KwqfaRestart(k)) => {
            Machine::Linearized(linearize(&kwqfa_restart_to_qfa_restart(k)?)?)
        }
        (Target::Complement, Machine::PostPfa(p)) => Machine::PostPfa(post_complement(p)?),
        (Target::Complement, Machine::PostQfa(p)) => Machine::PostQfa(post_complement(p)?),
        (Target::Union | Target::Intersection, _) => {
            let other = with.expect("checked above");
            let union = target == Target::Union;
            match (m, other) {
                (Machine::PostPfa(a), Machine::PostPfa(b)) => Machine::PostPfa(if union {
                    post_union(a, b, epsilon)?
                } else {
                    post_intersection(a, b, epsilon)?
                }),
                (Machine::PostQfa(a), Machine::PostQfa(b)) => Machine::PostQfa(if union {
                    post_union(a, b, epsilon)?
                } else {
                    post_intersection(a, b, epsilon)?
                }),
                _ => {
                    return Err(Error::UnsupportedCombination(format!(
                        "`{target}` needs two postselection machines of one kind, got {} and {}",
                        m.kind(),
                        other.kind()
                    )))
                }
            }
        }
        (Target::Amplify(k), Machine::PostPfa(p)) => Machine::PostPfa(amplify(p, k)?),
        (Target::Amplify(k), Machine::PostQfa(p)) => Machine::PostQfa(amplify(p, k)?),
        (Target::Cutpoint, Machine::PostPfa(p)) => Machine::Pfa(post_to_cutpoint(p)?),
        (Target::Cutpoint, Machine::PostQfa(p)) => Machine::Qfa(post_to_cutpoint(p)?),
        (Target::CutpointZero(side), Machine::PostPfa(p)) => {
            Machine::Pfa(zero_error_post_to_cutpoint_zero(p, side)?)
        }
        (Target::CutpointZero(side), Machine::PostQfa(p)) => {
            Machine::Qfa(zero_error_post_to_cutpoint_zero(p, side)?)
        }
        (Target::LatvianToPost, Machine::LpostPfa(l)) => Machine::PostPfa(latvian_to_post(l)?),
        (Target::Latvian(side), Machine::Qfa(q)) => Machine::LpostQfa(cutpoint_zero_to_latvian(q, side)?),
        (Target::Latvian(side), Machine::Pfa(p)) => {
            Machine::LpostQfa(cutpoint_zero_to_latvian(&QfaMachine::embed(p), side)?)
        }
        _ => return Err(unsupported(target, m)),
    })
}
