//! Seeded random machines and small hand-built machines shared by the
//! invariant suites.

use num::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::models::{
    Alphabet, Dfa, HaltTiming, KwqfaMachine, Partition, PfaMachine, QfaMachine, RestartPfa,
    RestartQfa, StateSet,
};
use crate::numkit::{inner, norm, ratio, CMatrix, RMatrix, C64};
use crate::zoo::{build_leq, LeqParams};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Column over `targets` with small random integer weights, normalized.
fn random_column<R: Rng>(rng: &mut R, targets: &[usize], n: usize) -> Vec<BigRational> {
    let weights: Vec<i64> = loop {
        let w: Vec<i64> = targets.iter().map(|_| rng.gen_range(0..4)).collect();
        if w.iter().any(|&x| x > 0) {
            break w;
        }
    };
    let total: i64 = weights.iter().sum();
    let mut col = vec![ratio(0, 1); n];
    for (&t, &w) in targets.iter().zip(&weights) {
        col[t] = ratio(w, total);
    }
    col
}

fn set_column(m: &mut RMatrix, j: usize, col: Vec<BigRational>) {
    for (i, p) in col.into_iter().enumerate() {
        m.set(i, j, p);
    }
}

/// Restart PFA with `work` nonhalting states followed by one accept, one
/// reject and one restart state.
///
/// With [`HaltTiming::AtEndOnly`] only `$` reaches the halting states; with
/// [`HaltTiming::PerStep`] every symbol may.
pub fn random_restart_pfa(seed: u64, work: usize, halt: HaltTiming) -> Result<RestartPfa> {
    let mut rng = rng(seed);
    let alphabet = Alphabet::ab();
    let n = work + 3;
    let (acc, rej, rst) = (work, work + 1, work + 2);
    let inner_targets: Vec<usize> = (0..work).collect();
    let all: Vec<usize> = (0..n).collect();
    let transitions = (0..alphabet.tape_len())
        .map(|t| {
            let mut m = RMatrix::identity(n);
            let targets = if t == alphabet.dollar() || halt == HaltTiming::PerStep {
                &all
            } else {
                &inner_targets
            };
            for j in 0..work {
                let col = random_column(&mut rng, targets, n);
                set_column(&mut m, j, col);
            }
            m
        })
        .collect();
    let pfa = PfaMachine::new(alphabet, transitions, StateSet::from_indices([acc]))?;
    RestartPfa::new(pfa, StateSet::from_indices([rej]), StateSet::from_indices([rst]), halt)
}

/// Restart PFA whose single round accepts with 1/2 and rejects with 1/4 on
/// any string without `b`; each `b` may move it to a track with the roles
/// swapped.
pub fn embedding_fixture() -> Result<RestartPfa> {
    let n = 5;
    let (start, swapped, acc, rej, rst) = (0, 1, 2, 3, 4);
    let alphabet = Alphabet::ab();
    let id = RMatrix::identity(n);
    let mut b = RMatrix::identity(n);
    b.set(start, start, ratio(1, 2));
    b.set(swapped, start, ratio(1, 2));
    let mut dollar = RMatrix::identity(n);
    for (from, pa, pr) in [(start, ratio(1, 2), ratio(1, 4)), (swapped, ratio(1, 4), ratio(1, 2))] {
        dollar.set(from, from, ratio(0, 1));
        dollar.set(acc, from, pa);
        dollar.set(rej, from, pr);
        dollar.set(rst, from, ratio(1, 4));
    }
    let pfa = PfaMachine::new(alphabet, vec![id.clone(), id, b, dollar], StateSet::from_indices([acc]))?;
    RestartPfa::new(pfa, StateSet::from_indices([rej]), StateSet::from_indices([rst]), HaltTiming::AtEndOnly)
}

/// [`embedding_fixture`] as a quantum restart machine.
pub fn embedded_restart_qfa(m: &RestartPfa) -> Result<RestartQfa> {
    RestartQfa::new(QfaMachine::embed(m.pfa()), m.reject().clone())
}

/// The ten rational restart fixtures: the `L_eq` witness, the embedding
/// fixture, five random machines halting on `$` and three halting per step.
pub fn restart_fixtures() -> Result<Vec<(String, RestartPfa)>> {
    let mut out = vec![
        ("leq".to_string(), build_leq(&LeqParams::default())?),
        ("embedding".to_string(), embedding_fixture()?),
    ];
    for seed in 0..5 {
        out.push((format!("random-end-{seed}"), random_restart_pfa(seed, 2 + seed as usize % 2, HaltTiming::AtEndOnly)?));
    }
    for seed in 0..3 {
        out.push((format!("random-step-{seed}"), random_restart_pfa(100 + seed, 2, HaltTiming::PerStep)?));
    }
    Ok(out)
}

fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| random_complex(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let p = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let r = norm(&v);
        if r > 1e-6 {
            cols.push(v.into_iter().map(|z| z / r).collect());
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random quantum restart machine over `{a, b}` with two Kraus elements per
/// symbol. State 1 (index 0) is the start; for `n = 2` the accept and
/// reject sets are `{1}` and `{2}`; for larger `n`, `{2}` and `{3}`, the rest
/// restarting.
pub fn random_restart_qfa(seed: u64, n: usize) -> Result<RestartQfa> {
    let mut rng = rng(seed);
    let alphabet = Alphabet::ab();
    let kraus = (0..alphabet.tape_len())
        .map(|_| {
            let u = random_unitary(&mut rng, 2 * n);
            (0..2).map(|k| CMatrix::from_fn(n, n, |i, j| *u.get(k * n + i, j))).collect()
        })
        .collect();
    let (accept, reject) = if n == 2 { (0, 1) } else { (1, 2) };
    let qfa = QfaMachine::new(alphabet, kraus, StateSet::from_indices([accept]))?;
    RestartQfa::new(qfa, StateSet::from_indices([reject]))
}

/// Random Kondacs-Watrous restart machine: index 0 is the only nonhalting
/// state when `n = 3`; otherwise indices `n - 3` and `n - 2` accept and
/// reject and `n - 1` restarts.
pub fn random_kwqfa(seed: u64, n: usize) -> Result<KwqfaMachine> {
    let mut rng = rng(seed);
    let alphabet = Alphabet::ab();
    let unitaries = (0..alphabet.tape_len()).map(|_| random_unitary(&mut rng, n)).collect();
    let partition = if n == 3 {
        Partition::new(StateSet::from_indices([1]), StateSet::from_indices([2]), StateSet::new())
    } else {
        Partition::new(
            StateSet::from_indices([n - 3]),
            StateSet::from_indices([n - 2]),
            StateSet::from_indices([n - 1]),
        )
    };
    KwqfaMachine::new(alphabet, unitaries, partition)
}

/// Name, automaton and membership predicate.
pub type DfaFixture = (String, Dfa, fn(&str) -> bool);

/// Five complete automata over `{a, b}` with membership predicates.
pub fn dfa_fixtures() -> Result<Vec<DfaFixture>> {
    let ab = Alphabet::ab();
    let d = |table: Vec<Vec<usize>>, start: usize, accept: &[usize]| {
        Dfa::complete(ab.clone(), table, start, StateSet::from_indices(accept.iter().copied()))
    };
    Ok(vec![
        (
            "(ab)*".to_string(),
            d(vec![vec![1, 2], vec![2, 0], vec![2, 2]], 0, &[0])?,
            |w: &str| w.len().is_multiple_of(2) && w.as_bytes().chunks(2).all(|c| c == b"ab"),
        ),
        (
            "even-a".to_string(),
            d(vec![vec![1, 0], vec![0, 1]], 0, &[0])?,
            |w: &str| w.matches('a').count().is_multiple_of(2),
        ),
        ("ends-b".to_string(), d(vec![vec![0, 1], vec![0, 1]], 0, &[1])?, |w: &str| w.ends_with('b')),
        (
            "contains-aa".to_string(),
            d(vec![vec![1, 0], vec![2, 0], vec![2, 2]], 0, &[2])?,
            |w: &str| w.contains("aa"),
        ),
        (
            "len-mod-3".to_string(),
            d(vec![vec![1, 1], vec![2, 2], vec![0, 0]], 1, &[1])?,
            |w: &str| w.len().is_multiple_of(3),
        ),
    ])
}
