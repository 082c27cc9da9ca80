//! Delivery of a ranking distribution over time.
//!
//! The balanced mode emits an `(N - 1)`-balanced word: every letter keeps a
//! virtual time `phi_i`, the letter with the smallest virtual time is emitted
//! and its clock advances by `1 / alpha_i` (stride scheduling). The sampled
//! mode draws i.i.d. from the categorical distribution instead.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ExpoError, Result};
use crate::types::{Ranking, RankingDistribution};

/// Steps discarded before a balanced word is emitted.
pub const DEFAULT_WARMUP: usize = 200;

/// State of the balanced-word generator.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedWordState {
    phi: Vec<f64>,
    densities: Vec<f64>,
    /// Original letter index of each retained (non-zero) density.
    letters: Vec<usize>,
    steps: u64,
    warmup: usize,
}

impl BalancedWordState {
    pub fn new(densities: &[f64]) -> Result<Self> {
        Self::with_warmup(densities, DEFAULT_WARMUP)
    }

    /// Zero densities are pruned; the rest must be finite, non-negative and
    /// sum to one within `1e-9`. The first `warmup` letters are generated and
    /// discarded with `phi` starting at zero.
    pub fn with_warmup(densities: &[f64], warmup: usize) -> Result<Self> {
        if densities.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(ExpoError::InvalidInput(format!("invalid densities {densities:?}")));
        }
        let total: f64 = densities.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(ExpoError::InvalidInput(format!("densities sum to {total}, expected 1")));
        }
        let letters: Vec<usize> = (0..densities.len()).filter(|&i| densities[i] > 0.0).collect();
        if letters.is_empty() {
            return Err(ExpoError::InvalidInput("no letter with positive density".into()));
        }
        let mut state = Self {
            phi: vec![0.0; letters.len()],
            densities: letters.iter().map(|&i| densities[i]).collect(),
            letters,
            steps: 0,
            warmup,
        };
        for _ in 0..warmup {
            state.next_letter();
        }
        let floor = state.phi.iter().copied().fold(f64::INFINITY, f64::min);
        state.phi.iter_mut().for_each(|p| *p -= floor);
        state.steps = 0;
        Ok(state)
    }

    /// Emit the letter with the smallest virtual time (lowest index on ties).
    pub fn next_letter(&mut self) -> usize {
        let mut best = 0;
        for i in 1..self.phi.len() {
            if self.phi[i] < self.phi[best] {
                best = i;
            }
        }
        self.phi[best] += 1.0 / self.densities[best];
        self.steps += 1;
        self.letters[best]
    }

    /// Letters emitted since the warmup ended.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn warmup(&self) -> usize {
        self.warmup
    }

    pub fn virtual_times(&self) -> &[f64] {
        &self.phi
    }
}

impl Iterator for BalancedWordState {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        Some(self.next_letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeliveryMode {
    Balanced,
    Sampled,
}

impl std::str::FromStr for DeliveryMode {
    type Err = ExpoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balanced" => Ok(Self::Balanced),
            "sampled" => Ok(Self::Sampled),
            other => Err(ExpoError::InvalidInput(format!("unknown delivery mode {other:?}"))),
        }
    }
}

/// Indices into `dist.entries()` for `horizon` consecutive deliveries.
pub fn deliver_indices(
    dist: &RankingDistribution,
    horizon: usize,
    mode: DeliveryMode,
    seed: u64,
    warmup: usize,
) -> Result<Vec<usize>> {
    if horizon == 0 {
        return Err(ExpoError::InvalidInput("horizon must be at least 1".into()));
    }
    let weights = dist.weights();
    match mode {
        DeliveryMode::Balanced => Ok(BalancedWordState::with_warmup(&weights, warmup)?
            .take(horizon)
            .collect()),
        DeliveryMode::Sampled => {
            let index = WeightedIndex::new(&weights)
                .map_err(|e| ExpoError::InvalidInput(format!("cannot sample: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..horizon).map(|_| index.sample(&mut rng)).collect())
        }
    }
}

/// `horizon` rankings drawn from `dist`. The seed is ignored in balanced mode.
pub fn deliver(
    dist: &RankingDistribution,
    horizon: usize,
    mode: DeliveryMode,
    seed: u64,
) -> Result<Vec<Ranking>> {
    let indices = deliver_indices(dist, horizon, mode, seed, DEFAULT_WARMUP)?;
    Ok(indices
        .into_iter()
        .map(|i| dist.entries()[i].ranking.clone())
        .collect())
}
