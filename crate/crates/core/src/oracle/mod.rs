//! One-way function and guesser models, and estimators of their success rates.

mod estimate;
mod function;
mod guesser;

pub use estimate::{
    correlation_exact, guesser_rate, inverter_rate, GuesserRate, Inverter, PlantedInstance,
    RateEstimate, Z95,
};
pub use function::{
    almost_bijection, pad, AlmostBijection, KeyedBijection, OneWayFunction, PaddedFunction,
    RandomTableFunction, ZeroFunction,
};
pub use guesser::{
    AbstainingGuesser, AdversarialSignGuesser, BuiltinGuesser, CorrectSet, CountingGuesser,
    DeterministicSnapshotGuesser, Guesser, GuesserSpec, NoisyGuesser, PerfectGuesser, PlantGuesser,
};
