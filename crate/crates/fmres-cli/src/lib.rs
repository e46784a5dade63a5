//! Command-line front end for the resilience toolkit.
//!
//! The binary orchestrates the library pipeline: panel preprocessing,
//! descriptive statistics, posterior estimation, impulse responses,
//! resilience indices, connectedness tables and mediation regressions.
//! Every run is driven by an effective configuration assembled from an
//! optional flat key=value file plus command-line flags (flags win), and
//! every output file starts with a comment line carrying the toolkit
//! version and a hash of that effective configuration, so artifacts are
//! traceable to the exact settings that produced them.

pub mod cli;
pub mod commands;
pub mod config;
pub mod lock;
pub mod manifest;
pub mod output;

use fmres_core::Error;

/// Map an error to the process exit code: 2 for anything wrong with the
/// inputs, 3 for numerical breakdowns, 4 for filesystem failures.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Invalid(_) | Error::Dimension(_) => 2,
        Error::Numerical { .. } => 3,
        Error::Io { .. } => 4,
    }
}

/// Parse arguments, dispatch, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let parsed = match cli::Cli::try_parse_from(args) {
        Ok(p) => p,
        Err(e) => {
            // Clap handles --help/--version as "errors" with success status.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(parsed) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fmres: error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(exit_code_for(&Error::invalid("x")), 2);
        assert_eq!(exit_code_for(&Error::dimension("x")), 2);
        assert_eq!(exit_code_for(&Error::parse(3, "x")), 2);
        assert_eq!(exit_code_for(&Error::numerical("stage", "x")), 3);
        assert_eq!(
            exit_code_for(&Error::io(
                "/nonexistent",
                std::io::Error::new(std::io::ErrorKind::NotFound, "gone"),
            )),
            4
        );
    }

    #[test]
    fn help_exits_zero_and_usage_error_exits_two() {
        assert_eq!(run(["fmres", "--help"]), 0);
        assert_eq!(run(["fmres", "no-such-subcommand"]), 2);
    }
}
