//! JSON descriptions of experiment instances and junk sources.

use std::path::Path;

use anyhow::{bail, Context};
use gl_decode_core::gf2::BitVector;
use gl_decode_core::kit::JunkSource;
use gl_decode_core::oracle::{
    GuesserSpec, KeyedBijection, OneWayFunction, PlantGuesser, RandomTableFunction, ZeroFunction,
};
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// `{"n": 12, "function": {...}, "guesser": {...}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub n: usize,
    pub function: FunctionDesc,
    pub guesser: GuesserDesc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDesc {
    Zero,
    RandomTable { seed: u64 },
    KeyedBijection { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GuesserDesc {
    Perfect,
    Noisy {
        epsilon: f64,
    },
    Abstaining {
        epsilon: f64,
        q: f64,
    },
    /// Correct where `selector · r = 0`, sign-flipped elsewhere.
    Adversarial {
        selector: String,
    },
    Silent,
}

impl Instance {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading instance {}", path.display()))?;
        let inst: Self = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("malformed instance {}: {e}", path.display())))?;
        inst.function()?;
        inst.guesser()?;
        Ok(inst)
    }

    pub fn function(&self) -> anyhow::Result<Box<dyn OneWayFunction>> {
        let n = self.n;
        let f: Box<dyn OneWayFunction> = match self.function {
            FunctionDesc::Zero => Box::new(ZeroFunction::new(n, n).map_err(usage)?),
            FunctionDesc::RandomTable { seed } => {
                Box::new(RandomTableFunction::new(n, n, seed).map_err(usage)?)
            }
            FunctionDesc::KeyedBijection { seed } => {
                Box::new(KeyedBijection::new(n, seed).map_err(usage)?)
            }
        };
        Ok(f)
    }

    pub fn guesser(&self) -> anyhow::Result<GuesserSpec> {
        let spec = match &self.guesser {
            GuesserDesc::Perfect => GuesserSpec::Perfect,
            GuesserDesc::Noisy { epsilon } => GuesserSpec::Noisy { epsilon: *epsilon },
            GuesserDesc::Abstaining { epsilon, q } => GuesserSpec::Abstaining {
                epsilon: *epsilon,
                answer_prob: *q,
            },
            GuesserDesc::Adversarial { selector } => {
                let selector: BitVector = selector.parse().map_err(usage)?;
                if selector.len() != self.n {
                    bail!(UsageError(
                        "adversarial selector length must equal n".into()
                    ));
                }
                GuesserSpec::Adversarial { selector }
            }
            GuesserDesc::Silent => GuesserSpec::Silent,
        };
        // planting validates epsilon / q ranges
        spec.plant(&BitVector::zeros(self.n.max(1)).map_err(usage)?)
            .map_err(usage)?;
        Ok(spec)
    }
}

/// Junk source description for `extract`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceDesc {
    Uniform {
        n: usize,
    },
    /// Peak probability `4^-level`, `steps` equal-mass steps.
    Staircase {
        n: usize,
        level: u32,
        steps: u32,
        seed: u64,
    },
    Table {
        n: usize,
        probs: Vec<f64>,
        max_prob: f64,
    },
    Flat {
        n: usize,
        support: Vec<String>,
    },
}

impl SourceDesc {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading source {}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("malformed source {}: {e}", path.display())).into())
    }

    pub fn build(&self) -> anyhow::Result<JunkSource> {
        let src = match self {
            Self::Uniform { n } => JunkSource::uniform(*n),
            Self::Staircase {
                n,
                level,
                steps,
                seed,
            } => JunkSource::staircase(*n, *level, *steps, *seed),
            Self::Table { n, probs, max_prob } => {
                JunkSource::from_table(*n, probs.clone(), *max_prob)
            }
            Self::Flat { n, support } => {
                let support = support
                    .iter()
                    .map(|s| s.parse::<BitVector>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(usage)?;
                JunkSource::flat(*n, support)
            }
        };
        src.map_err(|e| usage(e).into())
    }
}

fn usage(e: impl std::fmt::Display) -> UsageError {
    UsageError(e.to_string())
}
