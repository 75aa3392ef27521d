//! The `dglie` command-line front end: document parsing, command dispatch and
//! result documents.

pub mod commands;
pub mod document;

use std::fmt;

use dglie::dgla::Limits;
use serde::Serialize;

use document::{InputDigest, SCHEMA_VERSION};

/// Environment variable overriding the dimension bound of cutoff constructions.
pub const MAX_DIM_VAR: &str = "DGLIE_MAX_DIM";

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    /// A mathematical failure: invalid structure or inconsistent computation.
    Math(String),
    Core(dglie::Error),
}

impl From<dglie::Error> for CliError {
    fn from(e: dglie::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Math(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    /// 1 for mathematical failures, 2 for input and configuration problems.
    pub fn exit_code(&self) -> u8 {
        use dglie::Error as E;
        match self {
            CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Math(_) => 1,
            CliError::Core(e) => match e {
                E::Invalid(_) | E::InvalidComplex { .. } | E::NotAChainMap { .. } | E::Inconsistent(_) => 1,
                E::DegreeOutOfRange(_)
                | E::DuplicateLabel { .. }
                | E::DimensionMismatch(_)
                | E::MalformedInput(_)
                | E::CutoffTooLarge(_)
                | E::IndexOutOfFiltration { .. }
                | E::TargetMismatch
                | E::UnsupportedPresentation(_)
                | E::InvalidScalar(_) => 2,
            },
        }
    }
}

/// Settings shared by all commands.
#[derive(Clone, Copy, Debug, Default)]
pub struct Config {
    pub limits: Limits,
}

impl Config {
    /// Reads the dimension bound override from the environment.
    pub fn from_env() -> Result<Self, CliError> {
        let mut limits = Limits::default();
        if let Ok(v) = std::env::var(MAX_DIM_VAR) {
            limits.max_dimension = v.trim().parse().map_err(|_| CliError::Parse(format!("{MAX_DIM_VAR}=`{v}` is not a number")))?;
        }
        Ok(Config { limits })
    }
}

/// What a command produced: the machine-readable body, a human rendering, and
/// whether the mathematical check it performs passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub command: &'static str,
    pub arguments: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub result: serde_json::Value,
    pub text: String,
    pub success: bool,
}

#[derive(Serialize)]
struct CommandEcho<'a> {
    name: &'a str,
    arguments: &'a serde_json::Value,
}

#[derive(Serialize)]
struct ResultDocument<'a> {
    schema_version: u32,
    command: CommandEcho<'a>,
    inputs: &'a [InputDigest],
    status: &'a str,
    result: &'a serde_json::Value,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.success {
            0
        } else {
            1
        }
    }

    /// The result document; identical inputs give identical bytes.
    pub fn to_json(&self) -> String {
        document::render(&ResultDocument {
            schema_version: SCHEMA_VERSION,
            command: CommandEcho { name: self.command, arguments: &self.arguments },
            inputs: &self.inputs,
            status: if self.success { "ok" } else { "failed" },
            result: &self.result,
        })
    }
}
