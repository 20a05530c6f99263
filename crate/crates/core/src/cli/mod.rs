//! Session files: parsing, pretty-printing, command dispatch and reports.

mod run;
mod syntax;

pub use run::{
    run_command, run_session, run_text, Fragment, Report, RunOptions, Status, DEFAULT_HRANGE, DEFAULT_WINDOW,
};
pub use syntax::{
    parse_complex, parse_module, parse_ring, parse_session, parse_subset, Command, Decl, Item, Session, Setting, Value,
    HEADER,
};

/// Environment variable overriding the Gröbner cache directory.
pub const CACHE_ENV: &str = "ANNWB_CACHE_DIR";

#[cfg(test)]
mod tests;
