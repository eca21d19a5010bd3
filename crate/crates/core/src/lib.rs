//! Finite-matrix toolkit for uniform definitions of types: VC combinatorics,
//! ε-approximations, teaching sets by k-isolation, exact zero-sum games, and
//! majority-vote certificates that reproduce a type from a few signed points.

pub mod approx;
pub mod bits;
pub mod certificate;
pub mod committee;
pub mod error;
pub mod game;
pub mod io;
pub mod pipeline;
pub mod pool;
pub mod rational;
pub mod setsystem;
pub mod signed;
pub mod skolem;
pub mod teaching;
pub mod template;

pub use approx::{approx_error, find_approximation, min_approximation_size, Measure, Multiset};
pub use bits::BitRow;
pub use certificate::{decode, decode_bits, eval_exists, eval_forall, Certificate};
pub use committee::{build_committee, Committee};
pub use error::{Error, Result};
pub use game::{game_value, solver_by_name, GameMatrix, GameSolution, GameSolver, MixedStrategy};
pub use pipeline::{compress_all, compress_type, Compression, Compressor, PipelineConfig, SystemSummary};
pub use pool::{build_pool, claim_n_tuple, HypothesisPool};
pub use rational::Rational;
pub use setsystem::{PointSet, SetSystem, TypeOverA};
pub use signed::{induced_signs, Sign, SignedTuple};
pub use skolem::{build_skolem_table, witness_strategy, SkolemTable, WitnessStrategy};
pub use teaching::{
    isolate, isolate_under_constraint, k_budget, min_teaching_set, t_budget, teaching_sequence,
    ConstraintIsolation, ConstraintIsolator, IsolationBudget, TeachingSet,
};
pub use template::{count_types_check, make_template, PaddedCertificate, TypeCountReport, UniformTemplate};
