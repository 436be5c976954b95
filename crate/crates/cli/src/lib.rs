//! Library surface of the `qfrob` CLI: the expression parser, the
//! definition-file loader, the command runner, and report rendering.
//! The binary in `main.rs` is a thin argument-parsing shell over this.

pub mod commands;
pub mod parser;
pub mod report;
pub mod schema;

pub use commands::{run_command, Command};
pub use parser::{parse_expression, ParseError};
pub use report::{OverallResult, Report};
pub use schema::{load_definition, load_definition_str, Definition, LoadError};
