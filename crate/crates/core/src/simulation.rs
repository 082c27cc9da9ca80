//! Delivery policies run over a horizon, for comparing how fast the running
//! mean exposure approaches its goal.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::{ControllerState, PlackettLuce};
use crate::caratheodory::gls_decompose;
use crate::error::{ExpoError, Result};
use crate::metrics::{trajectory, TrajectoryReport};
use crate::pareto::{feasible_target, pareto_front_with, scalarization_match, ParetoConfig};
use crate::scheduler::{deliver_indices, DeliveryMode, DEFAULT_WARMUP};
use crate::types::{PbmModel, Ranking, RelevanceVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    /// Decomposition of a front point, delivered as a balanced word.
    ExpoBalanced,
    /// Decomposition of a front point, sampled i.i.d.
    ExpoSampled,
    PlackettLuce,
    Controller,
}

impl PolicyKind {
    pub fn is_seeded(self) -> bool {
        matches!(self, Self::ExpoSampled | Self::PlackettLuce)
    }

    /// Default parameter: scalarization weight 0 (fairness endpoint) for the
    /// expohedron policies, temperature 1 for Plackett-Luce, gain 1 for the
    /// controller.
    pub fn default_param(self) -> f64 {
        match self {
            Self::ExpoBalanced | Self::ExpoSampled => 0.0,
            Self::PlackettLuce | Self::Controller => 1.0,
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ExpoBalanced => "expo-bw",
            Self::ExpoSampled => "expo-sampled",
            Self::PlackettLuce => "pl",
            Self::Controller => "ctrl",
        })
    }
}

impl FromStr for PolicyKind {
    type Err = ExpoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expo-bw" => Ok(Self::ExpoBalanced),
            "expo-sampled" => Ok(Self::ExpoSampled),
            "pl" => Ok(Self::PlackettLuce),
            "ctrl" => Ok(Self::Controller),
            other => Err(ExpoError::InvalidInput(format!("unknown policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub horizon: usize,
    pub seed: u64,
    pub warmup: usize,
    pub pareto: ParetoConfig,
}

impl SimulationConfig {
    pub fn new(horizon: usize, seed: u64) -> Self {
        Self {
            horizon,
            seed,
            warmup: DEFAULT_WARMUP,
            pareto: ParetoConfig::default(),
        }
    }
}

/// Rankings delivered by `policy` with parameter `param` (scalarization
/// weight, temperature or gain).
pub fn policy_sequence(
    policy: PolicyKind,
    param: f64,
    model: &PbmModel,
    rho: &RelevanceVector,
    config: &SimulationConfig,
) -> Result<Vec<Ranking>> {
    if config.horizon == 0 {
        return Err(ExpoError::InvalidInput("horizon must be at least 1".into()));
    }
    let target = feasible_target(model, rho)?.exposure;
    match policy {
        PolicyKind::ExpoBalanced | PolicyKind::ExpoSampled => {
            let front = pareto_front_with(model, &target, rho, &config.pareto)?;
            let point = scalarization_match(&front, param)?;
            let dist = gls_decompose(&point.exposure, model)?;
            let mode = if policy == PolicyKind::ExpoBalanced {
                DeliveryMode::Balanced
            } else {
                DeliveryMode::Sampled
            };
            let indices = deliver_indices(&dist, config.horizon, mode, config.seed, config.warmup)?;
            Ok(indices.into_iter().map(|i| dist.entries()[i].ranking.clone()).collect())
        }
        PolicyKind::PlackettLuce => {
            let pl = PlackettLuce::new(rho, param)?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            Ok((0..config.horizon).map(|_| pl.sample(&mut rng)).collect())
        }
        PolicyKind::Controller => {
            let mut state = ControllerState::new(model.len(), param)?;
            (0..config.horizon)
                .map(|_| state.step(rho, target.values(), model))
                .collect()
        }
    }
}

/// Trajectory of `policy`, measured against the feasible target.
pub fn simulate_query(
    policy: PolicyKind,
    param: f64,
    model: &PbmModel,
    rho: &RelevanceVector,
    config: &SimulationConfig,
) -> Result<TrajectoryReport> {
    let seq = policy_sequence(policy, param, model, rho, config)?;
    let target = feasible_target(model, rho)?.exposure;
    trajectory(&seq, model, rho, &target)
}
