//! Session files, experiment commands and reports for the `bassline` tool.

pub mod commands;
pub mod report;
pub mod session;

pub use commands::{execute, run_command, Cli, CliError, CommandKind};
pub use report::{emit_report, parse_report, Format, Report, Value};
pub use session::{parse_session, parse_session_with, Session, SessionError};
