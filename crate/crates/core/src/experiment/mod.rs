//! Config parsing, run orchestration and deterministic CSV output.

mod config;
mod output;
mod run;

pub use config::{parse_config, ConfigError, ExperimentConfig, Kind, Value};
pub use output::{csv_bytes, emit_csv, read_csv, sha256_file, write_atomic, Cell};
pub use run::{
    bound_constant, lemma_suite, run, track, OutputRecord, RadiusTrack, RunManifest, MANIFEST_NAME,
};
