//! Utility and unfairness of exposure vectors, and amortized trajectories of
//! delivered ranking sequences.

use serde::Serialize;

use crate::error::{check_len, ExpoError, Result};
use crate::types::{dot, ExposureVector, PbmModel, Ranking, RelevanceVector};

/// `rho . x`; equals DCG of a ranking when `x` is its DCG exposure.
pub fn utility(x: &ExposureVector, rho: &RelevanceVector) -> Result<f64> {
    check_len(rho.len(), x.len())?;
    Ok(dot(rho.values(), x.values()))
}

/// Exposure of the probability-ranking-principle ranking (by decreasing relevance).
pub fn prp_exposure(rho: &RelevanceVector, model: &PbmModel) -> Result<ExposureVector> {
    check_len(model.len(), rho.len())?;
    model.exposure_of(&Ranking::by_descending_score(rho.values()))
}

/// Largest utility any exposure in the expohedron achieves.
pub fn ideal_utility(rho: &RelevanceVector, model: &PbmModel) -> Result<f64> {
    utility(&prp_exposure(rho, model)?, rho)
}

/// Utility divided by the ideal (PRP) utility.
pub fn ndcg(x: &ExposureVector, rho: &RelevanceVector, model: &PbmModel) -> Result<f64> {
    check_len(model.len(), x.len())?;
    if rho.values().iter().all(|r| *r == 0.0) {
        return Err(ExpoError::InvalidInput("NDCG undefined for all-zero relevance".into()));
    }
    Ok(utility(x, rho)? / ideal_utility(rho, model)?)
}

/// Euclidean distance between the exposure and the target.
pub fn unfairness(x: &ExposureVector, target: &ExposureVector) -> Result<f64> {
    check_len(target.len(), x.len())?;
    Ok(x.distance(target))
}

/// Unfairness divided by the total exposure of the model.
pub fn normalized_unfairness(
    x: &ExposureVector,
    target: &ExposureVector,
    model: &PbmModel,
) -> Result<f64> {
    Ok(unfairness(x, target)? / model.total())
}

/// Running averages of a delivered sequence: entry `t` describes the mean
/// exposure after `t + 1` rankings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub mean_exposures: Vec<ExposureVector>,
    pub ndcg: Vec<f64>,
    pub normalized_unfairness: Vec<f64>,
}

impl TrajectoryReport {
    pub fn horizon(&self) -> usize {
        self.ndcg.len()
    }
}

pub fn trajectory(
    seq: &[Ranking],
    model: &PbmModel,
    rho: &RelevanceVector,
    target: &ExposureVector,
) -> Result<TrajectoryReport> {
    if seq.is_empty() {
        return Err(ExpoError::InvalidInput("empty ranking sequence".into()));
    }
    let n = model.len();
    check_len(n, rho.len())?;
    check_len(n, target.len())?;
    let ideal = ideal_utility(rho, model)?;
    let mut cumulative = vec![0.0; n];
    let mut report = TrajectoryReport {
        mean_exposures: Vec::with_capacity(seq.len()),
        ndcg: Vec::with_capacity(seq.len()),
        normalized_unfairness: Vec::with_capacity(seq.len()),
    };
    for (t, ranking) in seq.iter().enumerate() {
        check_len(n, ranking.len())?;
        for (rank, &item) in ranking.order().iter().enumerate() {
            cumulative[item] += model.gamma()[rank];
        }
        let steps = (t + 1) as f64;
        let mean = ExposureVector::from(cumulative.iter().map(|c| c / steps).collect::<Vec<_>>());
        let u = dot(rho.values(), mean.values());
        report.ndcg.push(if ideal > 0.0 { u / ideal } else { 0.0 });
        report
            .normalized_unfairness
            .push(mean.distance(target) / model.total());
        report.mean_exposures.push(mean);
    }
    Ok(report)
}
