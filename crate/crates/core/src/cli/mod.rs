//! Command-line front end: `.sl` space files, reports and subcommands.

pub mod gallery;
pub mod report;
pub mod run;
pub mod spacefile;

pub use report::{emit, Format, Report, Table};
pub use run::{main_with_args, parse_point, Cli, CliError, Command};
pub use spacefile::{Diagnostic, FormDomain, NamedForm, ParseErrors, SpaceFile};
