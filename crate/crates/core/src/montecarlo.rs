//! Sampling simulator for restart machines.
//!
//! Trial `i` draws from ChaCha8 seeded with `seed` on stream `i`, so results
//! do not depend on how trials are scheduled across threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{BaseMachine, HaltTiming, KwqfaMachine, Machine, RestartPfa, RestartQfa};
use crate::semantics::{
    expected_runtime, kw_trace, restart_overall, restart_round_kw, restart_round_pfa,
    restart_round_qfa, round_length, Probability, RoundOutcome,
};

/// Default limit on rounds per trial.
pub const DEFAULT_ROUND_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct TrialStats {
    pub trials: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub total_steps: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Continue,
    Accept,
    Reject,
    Restart,
}

/// Per-state transition tables of a probabilistic restart machine.
#[derive(Clone, Debug)]
struct Walk {
    /// `columns[t][i]`: cumulative distribution over successors of `i` on `t`.
    columns: Vec<Vec<Vec<(f64, usize)>>>,
    roles: Vec<Role>,
    per_step: bool,
}

impl Walk {
    fn new(m: &RestartPfa) -> Self {
        let pfa = m.pfa();
        let n = pfa.state_count();
        let columns = (0..pfa.alphabet().tape_len())
            .map(|t| {
                let sparse = pfa.sparse(t);
                (0..n)
                    .map(|i| {
                        let mut acc = 0.0;
                        sparse
                            .column(i)
                            .iter()
                            .map(|(j, p)| {
                                acc += p.to_f64_lossy();
                                (acc, *j)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let role_of = |i: usize| {
            if m.accept().contains(i) {
                Role::Accept
            } else if m.reject().contains(i) {
                Role::Reject
            } else if m.restart().contains(i) {
                Role::Restart
            } else {
                Role::Continue
            }
        };
        Self { columns, roles: (0..n).map(role_of).collect(), per_step: m.halt() == HaltTiming::PerStep }
    }

    /// One round; returns the halting outcome (if any) and symbols read.
    fn round<R: Rng>(&self, tape: &[usize], rng: &mut R) -> (Option<Outcome>, u64) {
        let mut q = 0;
        for (k, &t) in tape.iter().enumerate() {
            let column = &self.columns[t][q];
            let u: f64 = rng.gen();
            let scaled = u * column.last().map_or(1.0, |c| c.0);
            q = column.iter().find(|c| scaled < c.0).unwrap_or(column.last().expect("stochastic column")).1;
            let last = k + 1 == tape.len();
            if self.per_step || last {
                match self.roles[q] {
                    Role::Accept => return (Some(Outcome::Accept), k as u64 + 1),
                    Role::Reject => return (Some(Outcome::Reject), k as u64 + 1),
                    Role::Restart => return (None, k as u64 + 1),
                    Role::Continue => {}
                }
            }
        }
        (None, tape.len() as u64)
    }
}

/// Exact outcome distribution of one round: `(cumulative, outcome, steps)`.
#[derive(Clone, Debug)]
struct Profile {
    events: Vec<(f64, Option<Outcome>, u64)>,
}

impl Profile {
    fn push(&mut self, p: f64, outcome: Option<Outcome>, steps: u64) {
        if p > 0.0 {
            let acc = self.events.last().map_or(0.0, |e| e.0) + p;
            self.events.push((acc, outcome, steps));
        }
    }

    fn from_qfa(m: &RestartQfa, w: &str) -> Result<Self> {
        let r = restart_round_qfa(m, w)?;
        let s = round_length(w) as u64;
        let mut p = Profile { events: Vec::new() };
        p.push(r.accept, Some(Outcome::Accept), s);
        p.push(r.reject, Some(Outcome::Reject), s);
        p.push((1.0 - r.accept - r.reject).max(0.0), None, s);
        Ok(p)
    }

    fn from_kw(m: &KwqfaMachine, w: &str) -> Result<Self> {
        let trace = kw_trace(m, w)?;
        let mut p = Profile { events: Vec::new() };
        for (k, step) in trace.steps.iter().enumerate() {
            let steps = k as u64 + 1;
            p.push(step.accept, Some(Outcome::Accept), steps);
            p.push(step.reject, Some(Outcome::Reject), steps);
            p.push(step.restart, None, steps);
        }
        p.push(trace.residual, None, trace.steps.len() as u64);
        Ok(p)
    }

    fn round<R: Rng>(&self, rng: &mut R) -> (Option<Outcome>, u64) {
        let total = self.events.last().map_or(0.0, |e| e.0);
        let u = rng.gen::<f64>() * total;
        let e = self.events.iter().find(|e| u < e.0).or(self.events.last());
        e.map_or((None, 0), |e| (e.1, e.2))
    }
}

/// A restart machine prepared for repeated sampling on one input.
#[derive(Clone, Debug)]
pub struct Sampler {
    kind: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Walk { walk: Walk, tape: Vec<usize> },
    Profile(Profile),
}

impl Sampler {
    /// Probabilistic machines are sampled transition by transition; quantum
    /// machines sample each round from its exact outcome probabilities.
    pub fn new(m: &Machine, w: &str) -> Result<Self> {
        let kind = match m {
            Machine::PfaRestart(r) => {
                SamplerKind::Walk { walk: Walk::new(r), tape: r.alphabet().tape(w)? }
            }
            Machine::QfaRestart(r) => SamplerKind::Profile(Profile::from_qfa(r, w)?),
            Machine::KwqfaRestart(k) => SamplerKind::Profile(Profile::from_kw(k, w)?),
            other => {
                return Err(Error::UnsupportedCombination(format!(
                    "sampling needs a restart machine, got {}",
                    other.kind()
                )))
            }
        };
        Ok(Self { kind })
    }

    fn round<R: Rng>(&self, rng: &mut R) -> (Option<Outcome>, u64) {
        match &self.kind {
            SamplerKind::Walk { walk, tape } => walk.round(tape, rng),
            SamplerKind::Profile(p) => p.round(rng),
        }
    }
}

/// Runs rounds until one halts. `Err(Divergence)` carries trial index 0;
/// [`estimate`] replaces it with the failing trial.
pub fn sample_run<R: Rng>(s: &Sampler, rng: &mut R, round_cap: u64) -> Result<(Outcome, u64)> {
    let mut steps = 0;
    for _ in 0..round_cap {
        let (outcome, k) = s.round(rng);
        steps += k;
        if let Some(o) = outcome {
            return Ok((o, steps));
        }
    }
    Err(Error::Divergence { trial: 0, cap: round_cap })
}

/// Generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Empirical statistics next to the exact values they estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub stats: TrialStats,
    pub exact_f_accept: f64,
    /// `s / p`; `None` when no round can halt.
    pub exact_runtime: Option<f64>,
    pub empirical_f_accept: f64,
    pub mean_steps: f64,
    /// Binomial standard deviation of the empirical acceptance frequency.
    pub sigma: f64,
    /// Fewer than 30 trials.
    pub low_confidence: bool,
}

impl Estimate {
    /// Whether the exact acceptance lies within `k` standard deviations.
    pub fn within_sigmas(&self, k: f64) -> bool {
        (self.empirical_f_accept - self.exact_f_accept).abs() <= k * self.sigma.max(1.0 / self.stats.trials as f64)
    }
}

fn exact_profile(m: &Machine, w: &str) -> Result<(f64, Option<f64>)> {
    let s = round_length(w);
    let round = match m {
        Machine::PfaRestart(r) => {
            let round = restart_round_pfa(r, w)?;
            RoundOutcome::new(round.accept.to_f64_lossy(), round.reject.to_f64_lossy())
        }
        Machine::QfaRestart(r) => restart_round_qfa(r, w)?,
        Machine::KwqfaRestart(k) => restart_round_kw(k, w)?,
        other => {
            return Err(Error::UnsupportedCombination(format!(
                "sampling needs a restart machine, got {}",
                other.kind()
            )))
        }
    };
    Ok((restart_overall(&round).f_accept, expected_runtime(&round.halting(), s).ok()))
}

/// Runs `trials` independent samples in parallel and compares them with the
/// exact acceptance probability and expected runtime.
pub fn estimate(m: &Machine, w: &str, trials: u64, seed: u64, round_cap: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let sampler = Sampler::new(m, w)?;
    let (exact_f_accept, exact_runtime) = exact_profile(m, w)?;
    let runs: Vec<(Outcome, u64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            sample_run(&sampler, &mut trial_rng(seed, i), round_cap).map_err(|e| match e {
                Error::Divergence { cap, .. } => Error::Divergence { trial: i, cap },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let mut stats = TrialStats { trials, seed, ..TrialStats::default() };
    for (o, steps) in runs {
        match o {
            Outcome::Accept => stats.accepts += 1,
            Outcome::Reject => stats.rejects += 1,
        }
        stats.total_steps += steps;
    }
    let n = trials as f64;
    let empirical_f_accept = stats.accepts as f64 / n;
    Ok(Estimate {
        stats,
        exact_f_accept,
        exact_runtime,
        empirical_f_accept,
        mean_steps: stats.total_steps as f64 / n,
        sigma: (exact_f_accept * (1.0 - exact_f_accept) / n).sqrt(),
        low_confidence: trials < 30,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{build_leq, LeqParams};

    #[test]
    fn deterministic_for_fixed_seed() {
        let m = Machine::PfaRestart(build_leq(&LeqParams::default()).unwrap());
        let a = estimate(&m, "a", 200, 7, DEFAULT_ROUND_CAP).unwrap();
        let b = estimate(&m, "a", 200, 7, DEFAULT_ROUND_CAP).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.stats.accepts + a.stats.rejects, 200);
        assert!(a.stats.total_steps >= 200);
    }

    #[test]
    fn single_trial_is_low_confidence() {
        let m = Machine::PfaRestart(build_leq(&LeqParams::default()).unwrap());
        let e = estimate(&m, "", 1, 1, DEFAULT_ROUND_CAP).unwrap();
        assert!(e.low_confidence);
        assert_eq!(e.stats.trials, 1);
    }
}
