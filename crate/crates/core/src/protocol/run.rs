use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::round::{execute_round, RoundOptions, RoundRecord, RoundSetup};
use super::{Algorithm, ClientSecrets, RoundType};
use crate::devices::{noisy_source_state, sample_device_errors, NoiseParams, ServerBehavior};
use crate::error::{Error, Result};
use crate::rng::round_rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub alg: Algorithm,
    pub n: u64,
    /// Probability that the TTP makes a given round a test round.
    pub test_fraction: f64,
    pub noise: NoiseParams,
    pub behavior: ServerBehavior,
    #[serde(default)]
    pub options: RoundOptions,
}

impl ProtocolConfig {
    pub fn new(alg: Algorithm, n: u64, noise: NoiseParams) -> Self {
        ProtocolConfig {
            alg,
            n,
            test_fraction: 0.5,
            noise,
            behavior: ServerBehavior::Honest,
            options: RoundOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "at least one round is required"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::param(
                "test_fraction",
                format!("{} is outside the open interval (0, 1)", self.test_fraction),
            ));
        }
        self.noise.validate()?;
        self.behavior.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: ProtocolConfig,
    pub seed: u64,
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    pub fn tests(&self) -> impl Iterator<Item = &RoundRecord> {
        self.rounds.iter().filter(|r| r.round_type == RoundType::Test)
    }

    pub fn computations(&self) -> impl Iterator<Item = &RoundRecord> {
        self.rounds.iter().filter(|r| r.round_type == RoundType::Computation)
    }
}

/// Executes `config.n` rounds in parallel. Round `i` draws only from stream
/// `i` of the seeded generator, in a fixed order: round type, client A,
/// client B, device errors, then the two measurements.
pub fn run_protocol(config: &ProtocolConfig, seed: u64) -> Result<Transcript> {
    config.validate()?;
    let source = noisy_source_state(&config.noise)?;
    let setup = RoundSetup {
        alg: config.alg,
        source: &source,
        behavior: &config.behavior,
        options: config.options,
    };
    let rounds = (0..config.n)
        .into_par_iter()
        .map(|index| {
            let mut rng = round_rng(seed, index);
            let round_type = if rng.random::<f64>() < config.test_fraction {
                RoundType::Test
            } else {
                RoundType::Computation
            };
            let secrets = [ClientSecrets::sample(&mut rng), ClientSecrets::sample(&mut rng)];
            let errors = sample_device_errors(&config.noise, &mut rng);
            let mut record = execute_round(setup, round_type, secrets, errors, &mut rng)?;
            record.index = index;
            Ok(record)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Transcript {
        config: config.clone(),
        seed,
        rounds,
    })
}
