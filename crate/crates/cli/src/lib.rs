//! Configuration, sampling drivers, output formats and verification runs
//! for the `birkhoff` command-line tool.

pub mod config;
pub mod output;
pub mod run;
pub mod sample;

pub use config::{load_config, parse_config, ConfigError, OutputFormat, RunConfig, Tolerances};
pub use run::{
    exit, run_crosscheck, run_verify, ASign, CrosscheckReport, RunError, VerifyReport, Which,
};
pub use sample::{sample_hm, sample_nls, SampleError};
