//! Domain types shared by every module: exposure models, exposure vectors,
//! rankings and distributions over rankings.

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, ExpoError, Result};

/// Position-based exposure model: `gamma[k]` is the exposure of rank `k`
/// (rank 0 is the top). Entries are positive and non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct PbmModel {
    gamma: Vec<f64>,
    gamma_asc: Vec<f64>,
    prefix_asc: Vec<f64>,
}

impl PbmModel {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(ExpoError::InvalidInput("exposure model needs at least one rank".into()));
        }
        if let Some(k) = gamma.iter().position(|g| !g.is_finite() || *g <= 0.0) {
            return Err(ExpoError::InvalidInput(format!(
                "exposure of rank {k} must be positive and finite, got {}",
                gamma[k]
            )));
        }
        if let Some(k) = gamma.windows(2).position(|w| w[0] < w[1]) {
            return Err(ExpoError::InvalidInput(format!(
                "exposure must not increase with rank (rank {k}: {} < {})",
                gamma[k],
                gamma[k + 1]
            )));
        }
        let gamma_asc: Vec<f64> = gamma.iter().rev().copied().collect();
        let prefix_asc = prefix_sums(&gamma_asc);
        Ok(Self {
            gamma,
            gamma_asc,
            prefix_asc,
        })
    }

    /// DCG discounts `1/log2(k + 2)` for ranks `k = 1..=n`.
    pub fn dcg(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|k| 1.0 / ((k + 2) as f64).log2()).collect())
    }

    /// DCG discounts `1/log2(k + 1)` for ranks `k = 1..=n` (top rank gets 1).
    pub fn dcg_unit(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|k| 1.0 / ((k + 1) as f64).log2()).collect())
    }

    /// Rank-biased precision: `(1 - p) p^(k - 1)` for ranks `k = 1..=n`.
    pub fn rbp(n: usize, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(ExpoError::InvalidInput(format!("RBP persistence must lie in (0, 1), got {p}")));
        }
        Self::new((0..n).map(|k| (1.0 - p) * p.powi(k as i32)).collect())
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Exposure per rank, non-increasing.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Exposure per rank sorted ascending.
    pub fn gamma_ascending(&self) -> &[f64] {
        &self.gamma_asc
    }

    /// `G_k`: sum of the `k + 1` smallest exposures, for `k` in `0..n`.
    pub fn ascending_prefix_sums(&self) -> &[f64] {
        &self.prefix_asc
    }

    /// Total exposure handed out by any ranking.
    pub fn total(&self) -> f64 {
        self.prefix_asc[self.prefix_asc.len() - 1]
    }

    /// Absolute tolerance for prefix-sum comparisons at the scale of this model.
    pub fn tolerance(&self) -> f64 {
        (crate::geometry::REL_TOL * self.total()).max(crate::geometry::ABS_TOL)
    }

    /// The uniform exposure vector, centre of the expohedron.
    pub fn barycenter(&self) -> ExposureVector {
        let n = self.len();
        ExposureVector::from(vec![self.total() / n as f64; n])
    }

    pub fn exposure_of(&self, ranking: &Ranking) -> Result<ExposureVector> {
        check_len(self.len(), ranking.len())?;
        let mut values = vec![0.0; self.len()];
        for (rank, &item) in ranking.order().iter().enumerate() {
            values[item] = self.gamma[rank];
        }
        Ok(ExposureVector::from(values))
    }
}

pub(crate) fn prefix_sums(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Exposure allocated to each item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExposureVector(Vec<f64>);

impl ExposureVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn distance(&self, other: &ExposureVector) -> f64 {
        euclidean(&self.0, &other.0)
    }

    pub fn max_abs_diff(&self, other: &ExposureVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `self + scale * direction`
    pub fn offset(&self, direction: &[f64], scale: f64) -> ExposureVector {
        ExposureVector(self.0.iter().zip(direction).map(|(v, d)| v + scale * d).collect())
    }

    /// Convex combination `(1 - t) self + t other`.
    pub fn lerp(&self, other: &ExposureVector, t: f64) -> ExposureVector {
        ExposureVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        )
    }
}

impl From<Vec<f64>> for ExposureVector {
    fn from(values: Vec<f64>) -> Self {
        ExposureVector(values)
    }
}

impl Index<usize> for ExposureVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Relevance probability of each item, in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RelevanceVector(Vec<f64>);

impl RelevanceVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|r| !(0.0..=1.0).contains(r)) {
            return Err(ExpoError::InvalidInput(format!(
                "relevance of item {i} must lie in [0, 1], got {}",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// True when every item has the same relevance.
    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

impl TryFrom<Vec<f64>> for RelevanceVector {
    type Error = ExpoError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<RelevanceVector> for Vec<f64> {
    fn from(r: RelevanceVector) -> Self {
        r.0
    }
}

/// A ranking, stored as the item placed at each rank (`order[0]` is on top).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &item in &order {
            if item >= n || seen[item] {
                return Err(ExpoError::InvalidInput(format!(
                    "ranking {order:?} is not a permutation of 0..{n}"
                )));
            }
            seen[item] = true;
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Items by decreasing score; equal scores keep index order.
    pub fn by_descending_score(scores: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
        Self(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rank of every item (inverse permutation).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (rank, &item) in self.0.iter().enumerate() {
            pos[item] = rank;
        }
        pos
    }
}

impl TryFrom<Vec<usize>> for Ranking {
    type Error = ExpoError;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Self::new(order)
    }
}

impl From<Ranking> for Vec<usize> {
    fn from(r: Ranking) -> Self {
        r.0
    }
}

/// Convex combination of rankings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingDistribution {
    entries: Vec<WeightedRanking>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedRanking {
    pub weight: f64,
    pub ranking: Ranking,
}

impl RankingDistribution {
    /// Validates weights (non-negative, finite, summing to one within `1e-9`)
    /// and that all rankings share one length. Zero weights are dropped and
    /// repeated rankings merged.
    pub fn new(entries: Vec<WeightedRanking>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(ExpoError::InvalidInput("distribution has no rankings".into()));
        };
        let n = first.ranking.len();
        let mut total = 0.0;
        for e in &entries {
            check_len(n, e.ranking.len())?;
            if !e.weight.is_finite() || e.weight < 0.0 {
                return Err(ExpoError::InvalidInput(format!("invalid weight {}", e.weight)));
            }
            total += e.weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(ExpoError::InvalidInput(format!("weights sum to {total}, expected 1")));
        }
        let mut merged: Vec<WeightedRanking> = Vec::with_capacity(entries.len());
        for e in entries.into_iter().filter(|e| e.weight > 0.0) {
            match merged.iter_mut().find(|m| m.ranking == e.ranking) {
                Some(m) => m.weight += e.weight,
                None => merged.push(e),
            }
        }
        Ok(Self { entries: merged })
    }

    pub fn single(ranking: Ranking) -> Self {
        Self {
            entries: vec![WeightedRanking { weight: 1.0, ranking }],
        }
    }

    pub fn entries(&self) -> &[WeightedRanking] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn item_count(&self) -> usize {
        self.entries[0].ranking.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.weight).collect()
    }

    /// Expected exposure `sum_i w_i * exposure(ranking_i)`.
    pub fn expectation(&self, model: &PbmModel) -> Result<ExposureVector> {
        let mut acc = vec![0.0; model.len()];
        for e in &self.entries {
            check_len(model.len(), e.ranking.len())?;
            for (rank, &item) in e.ranking.order().iter().enumerate() {
                acc[item] += e.weight * model.gamma()[rank];
            }
        }
        Ok(ExposureVector::from(acc))
    }
}

/// One vertex of the traced Pareto polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub exposure: ExposureVector,
    pub utility: f64,
    pub unfairness: f64,
}

/// Piecewise-linear Pareto front, from the fairness endpoint (index 0) to
/// the utility-maximal endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFront {
    pub target: ExposureVector,
    pub points: Vec<FrontPoint>,
    /// Number of boundary intersections performed while tracing.
    pub iterations: usize,
}

impl ParetoFront {
    pub fn first(&self) -> &FrontPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &FrontPoint {
        &self.points[self.points.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
