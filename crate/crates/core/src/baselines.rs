//! Comparison policies: Plackett-Luce sampling with a temperature, and a
//! greedy exposure controller.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, ExpoError, Result};
use crate::types::{PbmModel, Ranking, RelevanceVector};

/// Plackett-Luce model with scores `rho / tau`: items are drawn one rank at
/// a time with probability proportional to `exp(rho_i / tau)` among those
/// not yet placed.
#[derive(Debug, Clone, PartialEq)]
pub struct PlackettLuce {
    scores: Vec<f64>,
}

impl PlackettLuce {
    pub fn new(rho: &RelevanceVector, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(ExpoError::InvalidInput(format!("temperature must be positive, got {tau}")));
        }
        Ok(Self {
            scores: rho.values().iter().map(|r| r / tau).collect(),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Ranking {
        let mut remaining: Vec<usize> = (0..self.scores.len()).collect();
        let mut order = Vec::with_capacity(remaining.len());
        let mut weights = Vec::with_capacity(remaining.len());
        while remaining.len() > 1 {
            let top = remaining
                .iter()
                .map(|&i| self.scores[i])
                .fold(f64::NEG_INFINITY, f64::max);
            weights.clear();
            weights.extend(remaining.iter().map(|&i| (self.scores[i] - top).exp()));
            let total: f64 = weights.iter().sum();
            let mut u = rng.gen::<f64>() * total;
            let mut pick = remaining.len() - 1;
            for (k, w) in weights.iter().enumerate() {
                if u < *w {
                    pick = k;
                    break;
                }
                u -= w;
            }
            order.push(remaining.remove(pick));
        }
        order.extend(remaining);
        Ranking::new(order).expect("sampled order is a permutation")
    }
}

/// One Plackett-Luce draw with a dedicated seeded generator.
pub fn pl_sample(rho: &RelevanceVector, tau: f64, seed: u64) -> Result<Ranking> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(PlackettLuce::new(rho, tau)?.sample(&mut rng))
}

/// Greedy exposure controller. Each step boosts every item's relevance by
/// `gain` times its accumulated exposure deficit and delivers the PRP
/// ranking of the boosted scores.
///
/// This is a reimplementation of the deficit-bonus idea, not a port of any
/// particular published controller.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    cumulative_exposure: Vec<f64>,
    cumulative_target: Vec<f64>,
    gain: f64,
    steps: u64,
}

impl ControllerState {
    pub fn new(n: usize, gain: f64) -> Result<Self> {
        if !(gain >= 0.0 && gain.is_finite()) {
            return Err(ExpoError::InvalidInput(format!("gain must be non-negative, got {gain}")));
        }
        Ok(Self {
            cumulative_exposure: vec![0.0; n],
            cumulative_target: vec![0.0; n],
            gain,
            steps: 0,
        })
    }

    /// Cumulative target minus cumulative exposure, per item.
    pub fn deficit(&self) -> Vec<f64> {
        self.cumulative_target
            .iter()
            .zip(&self.cumulative_exposure)
            .map(|(t, e)| t - e)
            .collect()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn cumulative_exposure(&self) -> &[f64] {
        &self.cumulative_exposure
    }

    pub fn step(
        &mut self,
        rho: &RelevanceVector,
        target_per_step: &[f64],
        model: &PbmModel,
    ) -> Result<Ranking> {
        let n = self.cumulative_exposure.len();
        check_len(n, rho.len())?;
        check_len(n, target_per_step.len())?;
        check_len(n, model.len())?;
        let boosted: Vec<f64> = rho
            .values()
            .iter()
            .zip(self.deficit())
            .map(|(r, d)| r + self.gain * d)
            .collect();
        let ranking = Ranking::by_descending_score(&boosted);
        for (rank, &item) in ranking.order().iter().enumerate() {
            self.cumulative_exposure[item] += model.gamma()[rank];
        }
        self.cumulative_target
            .iter_mut()
            .zip(target_per_step)
            .for_each(|(c, t)| *c += t);
        self.steps += 1;
        Ok(ranking)
    }
}
