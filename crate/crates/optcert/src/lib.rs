//! File formats and scenario plumbing for the `optcert` command line tool.
//!
//! The numerics live in `optcert_core`; this crate writes its results as CSV
//! and expands command line selections into runnable scenarios.

pub mod io;
pub mod scenario;

pub use io::{sci, write_field, write_mesh, write_table, TABLE_HEADER};
pub use scenario::{featured_alphas, parse_alphas, scenario_tag, Selection};
