//! Machine definitions, state-role partitions and the machine file format.

mod alphabet;
mod dfa;
mod format;
mod machines;
mod states;

pub use alphabet::{Alphabet, CENT, DOLLAR};
pub use dfa::Dfa;
pub use format::{emit_machine, parse_machine, parse_rational};
pub use machines::{
    BaseMachine, HaltTiming, Judgment, KwqfaMachine, LatvianPostMachine, PfaMachine, PostMachine,
    QfaMachine, RestartPfa, RestartQfa, Tau,
};
pub use states::{Partition, StateSet};

use crate::transforms::LinearizedSystem;

/// Any machine that can be read from or written to a machine file.
#[derive(Clone, Debug, PartialEq)]
pub enum Machine {
    Pfa(PfaMachine),
    Qfa(QfaMachine),
    Kwqfa(KwqfaMachine),
    PfaRestart(RestartPfa),
    QfaRestart(RestartQfa),
    KwqfaRestart(KwqfaMachine),
    PostPfa(PostMachine<PfaMachine>),
    PostQfa(PostMachine<QfaMachine>),
    LpostPfa(LatvianPostMachine<PfaMachine>),
    LpostQfa(LatvianPostMachine<QfaMachine>),
    Linearized(LinearizedSystem),
}

impl Machine {
    /// The `kind:` tag used in machine files.
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Pfa(_) => "pfa",
            Machine::Qfa(_) => "qfa",
            Machine::Kwqfa(_) => "kwqfa",
            Machine::PfaRestart(_) => "pfa-restart",
            Machine::QfaRestart(_) => "qfa-restart",
            Machine::KwqfaRestart(_) => "kwqfa-restart",
            Machine::PostPfa(_) => "post-pfa",
            Machine::PostQfa(_) => "post-qfa",
            Machine::LpostPfa(_) => "lpost-pfa",
            Machine::LpostQfa(_) => "lpost-qfa",
            Machine::Linearized(_) => "linearized",
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Machine::Pfa(m) => m.alphabet(),
            Machine::Qfa(m) => m.alphabet(),
            Machine::Kwqfa(m) | Machine::KwqfaRestart(m) => m.alphabet(),
            Machine::PfaRestart(m) => m.alphabet(),
            Machine::QfaRestart(m) => m.alphabet(),
            Machine::PostPfa(m) => m.alphabet(),
            Machine::PostQfa(m) => m.alphabet(),
            Machine::LpostPfa(m) => m.alphabet(),
            Machine::LpostQfa(m) => m.alphabet(),
            Machine::Linearized(m) => m.alphabet(),
        }
    }

    pub fn state_count(&self) -> usize {
        match self {
            Machine::Pfa(m) => m.state_count(),
            Machine::Qfa(m) => m.state_count(),
            Machine::Kwqfa(m) | Machine::KwqfaRestart(m) => m.state_count(),
            Machine::PfaRestart(m) => m.state_count(),
            Machine::QfaRestart(m) => m.state_count(),
            Machine::PostPfa(m) => m.state_count(),
            Machine::PostQfa(m) => m.state_count(),
            Machine::LpostPfa(m) => m.post().state_count(),
            Machine::LpostQfa(m) => m.post().state_count(),
            Machine::Linearized(m) => m.dimension(),
        }
    }
}
