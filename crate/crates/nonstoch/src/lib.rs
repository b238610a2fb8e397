//! Data pipeline and command-line tool around [`nonstoch_core`]: CSV
//! ingestion, row-wise strip-policy sanitization, privacy sweeps and
//! utility metrics.

pub mod cli;
pub mod config;
pub mod curve;
pub mod dataio;
pub mod output;

pub use config::{ConfigError, PolicyConfig, RhoList, TestSpec};
pub use curve::{utility_curve, utility_steps, CurveError, CurveOptions, CurveStep};
pub use dataio::{
    generate_fixture, load_csv, read_csv, sanitize_table, sanitize_table_with, write_csv, ColumnMap,
    DataError, DataTable, MissingPolicy, SanitizationReport,
};
