//! Line-oriented machine file format.
//!
//! ```text
//! kind: pfa-restart
//! states: 3
//! alphabet: a b
//! accept: 2
//! reject: 3
//! restart:
//! halt: at-end
//! matrix cent:
//!   1 0 0
//!   ...
//! ```
//!
//! Entries are integers, decimals or `p/q` rationals for probabilistic kinds
//! and `(re,im)` pairs for quantum kinds. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num::{BigInt, BigRational};

use super::alphabet::Alphabet;
use super::machines::{
    BaseMachine, HaltTiming, KwqfaMachine, LatvianPostMachine, PfaMachine, PostMachine, QfaMachine,
    RestartPfa, RestartQfa, Tau,
};
use super::states::{Partition, StateSet};
use super::Machine;
use crate::error::{Error, Result};
use crate::numkit::{CMatrix, DynMatrix, RMatrix, Scalar, C64};
use crate::transforms::LinearizedSystem;

const KEY_ORDER: [&str; 10] = [
    "kind", "states", "alphabet", "accept", "reject", "restart", "postaccept", "postreject", "tau",
    "halt",
];

fn allowed_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "pfa" | "qfa" => &["accept"],
        "kwqfa" | "qfa-restart" => &["accept", "reject"],
        "kwqfa-restart" => &["accept", "reject", "restart"],
        "pfa-restart" => &["accept", "reject", "restart", "halt"],
        "post-pfa" | "post-qfa" => &["postaccept", "postreject"],
        "lpost-pfa" | "lpost-qfa" => &["postaccept", "postreject", "tau"],
        "linearized" => &["accept", "reject"],
        _ => return None,
    })
}

fn is_quantum(kind: &str) -> bool {
    matches!(
        kind,
        "qfa" | "kwqfa" | "kwqfa-restart" | "qfa-restart" | "post-qfa" | "lpost-qfa" | "linearized"
    )
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Splits on whitespace, keeping `( .. )` groups together.
fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parses an exact rational from `p/q`, an integer, or a finite decimal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mut num = BigInt::from_str(&digits).ok()?;
        if negative {
            num = -num;
        }
        let den = num::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(num, den));
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

fn parse_scalar(tok: &str) -> Option<Scalar> {
    if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (re, im) = inner.split_once(',')?;
        let re = f64::from_str(re.trim()).ok()?;
        let im = f64::from_str(im.trim()).ok()?;
        if !re.is_finite() || !im.is_finite() {
            return None;
        }
        return Some(Scalar::Complex(C64::new(re, im)));
    }
    parse_rational(tok).map(Scalar::Rational)
}

struct MatrixBlock {
    line: usize,
    label: String,
    kraus_index: Option<usize>,
    rows: Vec<Vec<Scalar>>,
}

struct Sections {
    keys: BTreeMap<String, (usize, String)>,
    blocks: Vec<MatrixBlock>,
}

fn split_sections(text: &str) -> Result<Sections> {
    let mut keys: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut blocks: Vec<MatrixBlock> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("matrix ") {
            let header = rest
                .strip_suffix(':')
                .ok_or_else(|| err(line_no, "matrix header must end with `:`"))?;
            let parts: Vec<&str> = header.split_whitespace().collect();
            let (label, kraus_index) = match parts.as_slice() {
                [label] => (label.to_string(), None),
                [label, k] => {
                    let k: usize = k
                        .parse()
                        .ok()
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| err(line_no, format!("bad Kraus index `{k}`")))?;
                    (label.to_string(), Some(k))
                }
                _ => return Err(err(line_no, "malformed matrix header")),
            };
            blocks.push(MatrixBlock { line: line_no, label, kraus_index, rows: Vec::new() });
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            if key.chars().all(|c| c.is_ascii_lowercase() || c == '-') && !key.is_empty() {
                if !blocks.is_empty() {
                    return Err(err(line_no, format!("key `{key}` after matrix data")));
                }
                if !KEY_ORDER.contains(&key) {
                    return Err(err(line_no, format!("unknown key `{key}`")));
                }
                if keys.insert(key.to_string(), (line_no, value.trim().to_string())).is_some() {
                    return Err(err(line_no, format!("duplicate key `{key}`")));
                }
                continue;
            }
        }
        let block = blocks
            .last_mut()
            .ok_or_else(|| err(line_no, format!("unexpected line `{line}`")))?;
        let row = tokenize(line)
            .iter()
            .map(|tok| parse_scalar(tok).ok_or_else(|| err(line_no, format!("bad entry `{tok}`"))))
            .collect::<Result<Vec<_>>>()?;
        block.rows.push(row);
    }
    Ok(Sections { keys, blocks })
}

fn parse_indices(line: usize, value: &str) -> Result<StateSet> {
    let idx = value
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| err(line, format!("bad state index `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    StateSet::from_one_based(idx).map_err(|e| err(line, e.to_string()))
}

/// Parses a machine description, checking every model invariant.
pub fn parse_machine(text: &str) -> Result<Machine> {
    let sections = split_sections(text)?;
    let keys = &sections.keys;
    let (kind_line, kind) = keys.get("kind").cloned().ok_or_else(|| err(1, "missing `kind`"))?;
    let allowed = allowed_keys(&kind).ok_or_else(|| Error::UnknownKind(kind.clone()))?;
    for (key, (line, _)) in keys {
        if !matches!(key.as_str(), "kind" | "states" | "alphabet") && !allowed.contains(&key.as_str()) {
            return Err(err(*line, format!("key `{key}` is not valid for kind `{kind}`")));
        }
    }
    let (states_line, states) = keys.get("states").cloned().ok_or_else(|| err(kind_line, "missing `states`"))?;
    let n: usize = states
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| err(states_line, format!("bad state count `{states}`")))?;
    let (alpha_line, alpha) = keys.get("alphabet").cloned().ok_or_else(|| err(kind_line, "missing `alphabet`"))?;
    let mut symbols = Vec::new();
    for tok in alpha.split_whitespace() {
        let mut chars = tok.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => symbols.push(c),
            _ => return Err(err(alpha_line, format!("alphabet symbols are single characters, got `{tok}`"))),
        }
    }
    let alphabet = Alphabet::new(symbols).map_err(|e| err(alpha_line, e.to_string()))?;
    let set = |key: &str| -> Result<StateSet> {
        match keys.get(key) {
            Some((line, value)) => parse_indices(*line, value),
            None => Ok(StateSet::new()),
        }
    };

    let quantum = is_quantum(&kind);
    let mut select: Option<CMatrix> = None;
    let mut rational: Vec<Option<RMatrix>> = vec![None; alphabet.tape_len()];
    let mut complex: Vec<BTreeMap<usize, CMatrix>> = vec![BTreeMap::new(); alphabet.tape_len()];
    for block in sections.blocks {
        let line = block.line;
        if kind == "linearized" && block.label == "select" {
            let cols = n.checked_sub(2).filter(|&c| c > 0).ok_or_else(|| err(line, "linearized system too small"))?;
            if block.rows.len() != 2 || block.rows.iter().any(|r| r.len() != cols) {
                return Err(err(line, format!("`select` must be 2x{cols}")));
            }
            let entries = block.rows.iter().flatten().map(Scalar::to_c64).collect();
            select = Some(CMatrix::new(2, cols, entries)?);
            continue;
        }
        let t = alphabet
            .parse_tape_label(&block.label)
            .ok_or_else(|| err(line, format!("unknown symbol `{}`", block.label)))?;
        if block.rows.len() != n || block.rows.iter().any(|r| r.len() != n) {
            return Err(err(line, format!("matrix `{}` must have {n} rows of {n} entries", block.label)));
        }
        let entries: Vec<Scalar> = block.rows.into_iter().flatten().collect();
        if quantum {
            let m = CMatrix::new(n, n, entries.iter().map(Scalar::to_c64).collect())?;
            let slot = &mut complex[t];
            let k = block.kraus_index.unwrap_or(slot.len() + 1);
            if kind != "qfa" && kind != "qfa-restart" && kind != "post-qfa" && kind != "lpost-qfa" && k != 1 {
                return Err(err(line, "Kraus indices are only valid for qfa kinds"));
            }
            if slot.insert(k, m).is_some() {
                return Err(err(line, format!("duplicate matrix `{}` {k}", block.label)));
            }
        } else {
            if block.kraus_index.is_some() {
                return Err(err(line, "Kraus indices are only valid for quantum kinds"));
            }
            let m = match DynMatrix::from_scalars(n, n, entries).map_err(|e| err(line, e.to_string()))? {
                DynMatrix::Rational(m) => m,
                DynMatrix::Complex(_) => {
                    return Err(err(line, "probabilistic machines need rational entries"))
                }
            };
            if rational[t].replace(m).is_some() {
                return Err(err(line, format!("duplicate matrix `{}`", block.label)));
            }
        }
    }

    let missing = |t: usize| err(kind_line, format!("missing matrix for `{}`", alphabet.tape_label(t)));
    let pfa_with = |accept: StateSet| -> Result<PfaMachine> {
        let mats = rational
            .iter()
            .enumerate()
            .map(|(t, m)| m.clone().ok_or_else(|| missing(t)))
            .collect::<Result<Vec<_>>>()?;
        PfaMachine::new(alphabet.clone(), mats, accept)
    };
    let kraus_lists = || -> Result<Vec<Vec<CMatrix>>> {
        complex
            .iter()
            .enumerate()
            .map(|(t, ops)| {
                if ops.is_empty() {
                    return Err(missing(t));
                }
                if ops.keys().copied().ne(1..=ops.len()) {
                    return Err(err(kind_line, format!(
                        "Kraus indices for `{}` must be 1..={}",
                        alphabet.tape_label(t),
                        ops.len()
                    )));
                }
                Ok(ops.values().cloned().collect())
            })
            .collect()
    };
    let unitaries = || -> Result<Vec<CMatrix>> {
        Ok(kraus_lists()?.into_iter().map(|mut v| v.remove(0)).collect())
    };
    let tau = || -> Result<Tau> {
        match keys.get("tau") {
            Some((_, v)) if v == "A" => Ok(Tau::Accept),
            Some((_, v)) if v == "R" => Ok(Tau::Reject),
            Some((line, v)) => Err(err(*line, format!("tau must be A or R, got `{v}`"))),
            None => Err(err(kind_line, "missing `tau`")),
        }
    };

    let machine = match kind.as_str() {
        "pfa" => Machine::Pfa(pfa_with(set("accept")?)?),
        "qfa" => Machine::Qfa(QfaMachine::new(alphabet.clone(), kraus_lists()?, set("accept")?)?),
        "kwqfa" | "kwqfa-restart" => {
            let partition = Partition::new(set("accept")?, set("reject")?, set("restart")?);
            let m = KwqfaMachine::new(alphabet.clone(), unitaries()?, partition)?;
            if kind == "kwqfa" {
                Machine::Kwqfa(m)
            } else {
                Machine::KwqfaRestart(m)
            }
        }
        "pfa-restart" => {
            let halt = match keys.get("halt") {
                Some((_, v)) if v == "per-step" => HaltTiming::PerStep,
                Some((_, v)) if v == "at-end" => HaltTiming::AtEndOnly,
                Some((line, v)) => return Err(err(*line, format!("halt must be per-step or at-end, got `{v}`"))),
                None => return Err(err(kind_line, "missing `halt`")),
            };
            let pfa = pfa_with(set("accept")?)?;
            Machine::PfaRestart(RestartPfa::new(pfa, set("reject")?, set("restart")?, halt)?)
        }
        "qfa-restart" => {
            let qfa = QfaMachine::new(alphabet.clone(), kraus_lists()?, set("accept")?)?;
            Machine::QfaRestart(RestartQfa::new(qfa, set("reject")?)?)
        }
        "post-pfa" | "lpost-pfa" => {
            let post = PostMachine::new(pfa_with(StateSet::new())?, set("postaccept")?, set("postreject")?)?;
            if kind == "post-pfa" {
                Machine::PostPfa(post)
            } else {
                Machine::LpostPfa(LatvianPostMachine::new(post, tau()?))
            }
        }
        "post-qfa" | "lpost-qfa" => {
            let qfa = QfaMachine::new(alphabet.clone(), kraus_lists()?, StateSet::new())?;
            let post = PostMachine::new(qfa, set("postaccept")?, set("postreject")?)?;
            if kind == "post-qfa" {
                Machine::PostQfa(post)
            } else {
                Machine::LpostQfa(LatvianPostMachine::new(post, tau()?))
            }
        }
        "linearized" => {
            let select = select.ok_or_else(|| err(kind_line, "missing `select` matrix"))?;
            let sys = LinearizedSystem::from_parts(alphabet.clone(), unitaries()?, select)?;
            let (qa, qr) = (set("accept")?, set("reject")?);
            if qa != StateSet::from_indices([n - 2]) || qr != StateSet::from_indices([n - 1]) {
                return Err(err(kind_line, format!("linearized systems accept at {} and reject at {}", n - 1, n)));
            }
            Machine::Linearized(sys)
        }
        _ => unreachable!(),
    };
    if machine.state_count() != n {
        return Err(err(states_line, "state count does not match matrices"));
    }
    Ok(machine)
}

fn fmt_c64(z: &C64) -> String {
    format!("({:.16e},{:.16e})", z.re, z.im)
}

fn push_key(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let value = value.to_string();
    if value.is_empty() {
        let _ = writeln!(out, "{key}:");
    } else {
        let _ = writeln!(out, "{key}: {value}");
    }
}

fn push_rational(out: &mut String, label: &str, m: &RMatrix) {
    let _ = writeln!(out, "matrix {label}:");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

fn push_complex(out: &mut String, header: &str, m: &CMatrix) {
    let _ = writeln!(out, "matrix {header}:");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(fmt_c64).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

fn push_pfa(out: &mut String, pfa: &PfaMachine) {
    for (t, m) in pfa.transitions().iter().enumerate() {
        push_rational(out, &pfa.alphabet().tape_label(t), m);
    }
}

fn push_kraus(out: &mut String, qfa: &QfaMachine) {
    for (t, ops) in qfa.kraus().iter().enumerate() {
        for (k, m) in ops.iter().enumerate() {
            push_complex(out, &format!("{} {}", qfa.alphabet().tape_label(t), k + 1), m);
        }
    }
}

fn push_unitaries(out: &mut String, alphabet: &Alphabet, us: &[CMatrix]) {
    for (t, m) in us.iter().enumerate() {
        push_complex(out, &alphabet.tape_label(t), m);
    }
}

/// Canonical text form: keys in fixed order, matrices in tape order, rationals
/// in lowest terms, complex parts with 17 significant digits.
pub fn emit_machine(machine: &Machine) -> String {
    let mut out = String::new();
    push_key(&mut out, "kind", machine.kind());
    push_key(&mut out, "states", machine.state_count());
    push_key(&mut out, "alphabet", machine.alphabet());
    match machine {
        Machine::Pfa(m) => {
            push_key(&mut out, "accept", m.accept());
            push_pfa(&mut out, m);
        }
        Machine::Qfa(m) => {
            push_key(&mut out, "accept", m.accept());
            push_kraus(&mut out, m);
        }
        Machine::Kwqfa(m) | Machine::KwqfaRestart(m) => {
            let p = m.partition();
            push_key(&mut out, "accept", &p.accept);
            push_key(&mut out, "reject", &p.reject);
            if matches!(machine, Machine::KwqfaRestart(_)) {
                push_key(&mut out, "restart", &p.restart);
            }
            push_unitaries(&mut out, m.alphabet(), m.unitaries());
        }
        Machine::PfaRestart(m) => {
            push_key(&mut out, "accept", m.accept());
            push_key(&mut out, "reject", m.reject());
            push_key(&mut out, "restart", m.restart());
            let halt = match m.halt() {
                HaltTiming::PerStep => "per-step",
                HaltTiming::AtEndOnly => "at-end",
            };
            push_key(&mut out, "halt", halt);
            push_pfa(&mut out, m.pfa());
        }
        Machine::QfaRestart(m) => {
            push_key(&mut out, "accept", m.accept());
            push_key(&mut out, "reject", m.reject());
            push_kraus(&mut out, m.qfa());
        }
        Machine::PostPfa(m) => {
            push_post_keys(&mut out, m);
            push_pfa(&mut out, m.base());
        }
        Machine::PostQfa(m) => {
            push_post_keys(&mut out, m);
            push_kraus(&mut out, m.base());
        }
        Machine::LpostPfa(m) => {
            push_post_keys(&mut out, m.post());
            push_key(&mut out, "tau", tau_label(m.tau()));
            push_pfa(&mut out, m.post().base());
        }
        Machine::LpostQfa(m) => {
            push_post_keys(&mut out, m.post());
            push_key(&mut out, "tau", tau_label(m.tau()));
            push_kraus(&mut out, m.post().base());
        }
        Machine::Linearized(sys) => {
            let d = sys.dimension();
            push_key(&mut out, "accept", d - 1);
            push_key(&mut out, "reject", d);
            push_unitaries(&mut out, sys.alphabet(), sys.matrices());
            push_complex(&mut out, "select", sys.selector());
        }
    }
    out
}

fn tau_label(t: Tau) -> &'static str {
    match t {
        Tau::Accept => "A",
        Tau::Reject => "R",
    }
}

fn push_post_keys<B: BaseMachine>(out: &mut String, m: &PostMachine<B>) {
    push_key(out, "postaccept", m.post_accept());
    push_key(out, "postreject", m.post_reject());
}
