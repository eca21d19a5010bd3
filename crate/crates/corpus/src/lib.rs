//! Benchmark set systems and the batch experiment runner.

pub mod experiment;
pub mod generators;
pub mod spec;

pub use experiment::{
    read_csv, run_experiment, run_one, to_csv_string, write_csv, ExperimentConfig, ExperimentRecord,
};
pub use generators::{generator, generators, FamilyGenerator};
pub use spec::{generate, parse_spec_list, standard_corpus, FamilySpec};
