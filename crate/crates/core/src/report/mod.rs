//! JSON documents for traces and verification reports, and the command
//! implementations behind the `ccn-secrecy` binary.

mod commands;
mod document;

pub use commands::{
    cmd_mincut, cmd_oracle, cmd_run, cmd_table1, cmd_verify, exit_for, oracle_check,
    scheme_from_args, table1, table1_scheme, Exit, OracleCheck, SchemeArgs, Target,
};
pub use document::{
    OracleStatus, ReportDocument, ReportRow, TraceDocument, TransmissionEntry, VariableEntry,
    FORMAT_VERSION,
};
