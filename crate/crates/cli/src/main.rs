mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::BigRational;
use regex::Regex;

use rtfa::models::{emit_machine, parse_machine, parse_rational, Judgment, Machine};
use rtfa::montecarlo::{estimate, DEFAULT_ROUND_CAP};
use rtfa::semantics::{
    check_machine, evaluate, expected_runtime, round_length, Evaluation, Probability, Verdict,
};
use rtfa::transforms::{convert, Target};
use rtfa::zoo::{build_named, in_leq, in_leqeq, in_lpal};

use report::Table;

/// Exact simulator for real-time probabilistic and quantum automata with
/// restart and postselection.
#[derive(Parser, Debug)]
#[command(name = "rtfa", version)]
struct Cli {
    /// Tab-separated output.
    #[arg(long, global = true)]
    tsv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Acceptance probabilities of one or more strings.
    Eval {
        machine: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Checks that a machine recognizes a language on all short strings.
    Classify {
        machine: PathBuf,
        /// eq, pal, eqeq-bar or regex:<pattern>.
        #[arg(long)]
        lang: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Cutpoint, as p/q.
        #[arg(long)]
        lambda: Option<String>,
        /// Error bound, as p/q.
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Applies a transform and writes the resulting machine.
    Convert {
        machine: PathBuf,
        #[arg(long)]
        to: String,
        /// Second operand of union and intersection.
        #[arg(long)]
        with: Option<PathBuf>,
        /// Declared error bound of the operands.
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs the invariant suites.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Emits a witness machine: leq, leq-post, leqeq, lpal or lpal-complement.
    Zoo {
        name: String,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo estimate for a restart machine.
    Mc {
        machine: PathBuf,
        word: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ROUND_CAP)]
        round_cap: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Strict,
    Nonstrict,
    Bounded,
    Zero,
    CutpointZero,
}

/// Failure of a command: `Usage` exits with 2, `Check` with 1.
enum Failure {
    Usage(String),
    Check,
}

impl From<rtfa::Error> for Failure {
    fn from(e: rtfa::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Eval { machine, words } => eval(&load(machine)?, words, cli.tsv),
        Command::Classify { machine, lang, mode, lambda, epsilon, max_len } => {
            let judgment = judgment(*mode, lambda.as_deref(), epsilon.as_deref())?;
            classify(&load(machine)?, lang, &judgment, *max_len, cli.tsv)
        }
        Command::Convert { machine, to, with, epsilon, output } => {
            let target: Target = to.parse()?;
            let other = with.as_deref().map(load).transpose()?;
            let eps = epsilon.as_deref().map(rational).transpose()?;
            let out = convert(&load(machine)?, target, other.as_ref(), eps.as_ref())?;
            write_machine(&out, output.as_deref())
        }
        Command::Verify { max_len } => verify(*max_len, cli.tsv),
        Command::Zoo { name, epsilon, output } => {
            let eps = epsilon.as_deref().map(rational).transpose()?;
            write_machine(&build_named(name, eps.as_ref())?, output.as_deref())
        }
        Command::Mc { machine, word, trials, seed, round_cap } => {
            mc(&load(machine)?, word, *trials, *seed, *round_cap, cli.tsv)
        }
    }
}

fn load(path: &Path) -> Result<Machine, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_machine(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn rational(s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::Usage(format!("`{s}` is not an exact rational (use p/q)")))
}

fn write_machine(m: &Machine, output: Option<&Path>) -> Outcome {
    let text = emit_machine(m);
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_restart(m: &Machine) -> bool {
    matches!(
        m,
        Machine::PfaRestart(_) | Machine::QfaRestart(_) | Machine::KwqfaRestart(_) | Machine::Linearized(_)
    )
}

fn eval(m: &Machine, words: &[String], tsv: bool) -> Outcome {
    let mut table = Table::new(&["word", "p^a", "p^r", "f^a", "f^r", "valid", "runtime"]);
    for w in words {
        let row = match evaluate(m, w)? {
            Evaluation::Exact(v) => verdict_row(w, &v, is_restart(m)),
            Evaluation::Float(v) => verdict_row(w, &v, is_restart(m)),
        };
        table.push(row);
    }
    print!("{}", table.render(tsv));
    Ok(())
}

fn verdict_row<P: Probability>(w: &str, v: &Verdict<P>, restart: bool) -> Vec<String> {
    let (pa, pr, rt) = match &v.round {
        Some(r) => {
            let rt = match expected_runtime(&r.halting(), round_length(w)) {
                _ if !restart => "-".to_string(),
                Ok(t) => t.to_string(),
                Err(_) => "inf".to_string(),
            };
            (r.accept.to_string(), r.reject.to_string(), rt)
        }
        None => ("-".into(), "-".into(), "-".into()),
    };
    vec![w.to_string(), pa, pr, v.f_accept.to_string(), v.f_reject.to_string(), v.valid.to_string(), rt]
}

fn judgment(mode: Mode, lambda: Option<&str>, epsilon: Option<&str>) -> Result<Judgment, Failure> {
    let need = |v: Option<&str>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--mode needs --{flag}"))).and_then(rational)
    };
    Ok(match mode {
        Mode::Strict => Judgment::StrictCutpoint(need(lambda, "lambda")?),
        Mode::Nonstrict => Judgment::NonstrictCutpoint(need(lambda, "lambda")?),
        Mode::Bounded => Judgment::bounded(need(epsilon, "epsilon")?)?,
        Mode::Zero => Judgment::ZeroError,
        Mode::CutpointZero => Judgment::CutpointZero,
    })
}

type Language = Box<dyn Fn(&str) -> bool + Sync>;

fn language(name: &str) -> Result<Language, Failure> {
    Ok(match name {
        "eq" => Box::new(in_leq),
        "pal" => Box::new(in_lpal),
        "eqeq-bar" => Box::new(in_leqeq),
        other => match other.strip_prefix("regex:") {
            Some(pattern) => {
                let re = Regex::new(&format!("^(?:{pattern})$"))
                    .map_err(|e| Failure::Usage(format!("bad pattern: {e}")))?;
                Box::new(move |w: &str| re.is_match(w))
            }
            None => return Err(Failure::Usage(format!("unknown language `{other}`"))),
        },
    })
}

fn classify(m: &Machine, lang: &str, judgment: &Judgment, max_len: usize, tsv: bool) -> Outcome {
    let predicate = language(lang)?;
    let report = check_machine(m, &*predicate, judgment, max_len)?;
    let verdict = if report.pass() { "PASS" } else { "FAIL" };
    println!(
        "{verdict}, {} counterexamples ({} strings up to length {max_len}, {} ambiguous, {} ratio mismatches)",
        report.counterexamples.len(),
        report.checked,
        report.ambiguous.len(),
        report.ratio_mismatches.len()
    );
    if !report.counterexamples.is_empty() {
        let mut table = Table::new(&["word", "member", "f^a", "f^r", "reason"]);
        for c in report.counterexamples.iter().take(20) {
            table.push(vec![
                format!("{:?}", c.word),
                c.member.to_string(),
                c.f_accept.clone(),
                c.f_reject.clone(),
                c.reason.clone(),
            ]);
        }
        print!("{}", table.render(tsv));
    }
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn verify(max_len: usize, tsv: bool) -> Outcome {
    let suites = rtfa::verify::run_all(max_len)?;
    let mut table = Table::new(&["suite", "checked", "failures", "status"]);
    for s in &suites {
        let status = if s.pass() { "PASS" } else { "FAIL" };
        table.push(vec![s.name.to_string(), s.checked.to_string(), s.failures.len().to_string(), status.into()]);
    }
    print!("{}", table.render(tsv));
    for s in &suites {
        for f in s.failures.iter().take(5) {
            eprintln!("{}: {f}", s.name);
        }
    }
    if suites.iter().all(|s| s.pass()) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn mc(m: &Machine, word: &str, trials: u64, seed: u64, round_cap: u64, tsv: bool) -> Outcome {
    let e = estimate(m, word, trials, seed, round_cap)?;
    let mut table = Table::new(&["quantity", "empirical", "exact"]);
    table.push(vec!["f^a".into(), e.empirical_f_accept.to_string(), e.exact_f_accept.to_string()]);
    let exact_rt = e.exact_runtime.map_or("inf".into(), |r| r.to_string());
    table.push(vec!["mean steps".into(), e.mean_steps.to_string(), exact_rt]);
    print!("{}", table.render(tsv));
    let s = e.stats;
    println!(
        "trials {} accepts {} rejects {} total steps {} seed {}{}",
        s.trials,
        s.accepts,
        s.rejects,
        s.total_steps,
        s.seed,
        if e.low_confidence { " (low confidence)" } else { "" }
    );
    Ok(())
}
