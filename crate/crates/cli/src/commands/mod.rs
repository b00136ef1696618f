pub mod parent;
pub mod pt;
pub mod specfun;
pub mod sweep;

use std::fmt;
use std::io;
use std::path::Path;

use rabi_core::model::ModelParams;

use crate::args::{Command, ModelArgs};
use crate::output::{emit, emit_script, Table};

#[derive(Debug)]
pub enum CliError {
    Core(rabi_core::Error),
    Config(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use rabi_core::Error as E;
        match self {
            CliError::Core(E::Convergence(_) | E::Truncation(_) | E::Overflow(_)) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Config(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<rabi_core::Error> for CliError {
    fn from(e: rabi_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// What a finished subcommand reports back besides its files.
pub struct Outcome {
    /// False when the data were written but the truncation check failed.
    pub converged: bool,
}

pub fn run(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Sweep(a) => sweep::run(cmd, a),
        Command::PtCompare(a) => pt::run(cmd, a),
        Command::ParentCheck(a) => parent::run(cmd, a),
        Command::SpecfunEval(a) => specfun::run(cmd, a),
    }
}

pub(crate) fn params(m: &ModelArgs, g: f64) -> CliResult<ModelParams> {
    Ok(ModelParams::new(m.omega, g, m.epsilon, m.delta)?)
}

/// Version and command echo, the first two metadata lines of every table.
pub(crate) fn stamp(table: &mut Table, cmd: &Command) {
    table.meta(
        "version",
        format!("{} {}", crate::args::BIN, env!("CARGO_PKG_VERSION")),
    );
    table.meta("command", cmd.echo());
}

pub(crate) fn finish(table: &Table, out: Option<&Path>, script: Option<String>) -> CliResult<()> {
    emit(table, out)?;
    if let (Some(path), Some(body)) = (out, script) {
        emit_script(path, &body)?;
    }
    Ok(())
}

pub(crate) fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}
