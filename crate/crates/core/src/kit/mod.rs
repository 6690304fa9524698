//! Multi-bit extraction, junk-source extraction, the iterated-bit generator,
//! and the statistical checks used to exercise them.

mod extract;
mod prg;
pub mod stats;

pub use extract::{
    distance_from_uniform, extract_stream, extractor_distance, extractor_distance_bound, multibit,
    push_forward, JunkSource, TABLE_MAX_LEN,
};
pub use prg::{floyd_cycle, is_permutation, prg_generate, Cycle, Predicate, PrgState};
pub use stats::{
    battery, monobit_test, runs_test, BatteryVerdict, MonobitResult, RunsResult, RunsVerdict,
};
