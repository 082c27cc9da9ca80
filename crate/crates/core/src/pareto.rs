//! Exact utility/unfairness Pareto front inside the expohedron, and
//! feasible meritocratic targets.
//!
//! Work happens after relabelling items so that relevance is ascending. The
//! front starts at the target and moves along the relevance direction,
//! projected onto the sum-zero hyperplane, until it hits the boundary. Each
//! hit adds at least one tight prefix constraint; the direction is then
//! projected onto the new face (subtracting its mean on every block between
//! consecutive splits) and the walk continues until utility is maximal.

pub use crate::types::{FrontPoint, ParetoFront, RelevanceVector};

use std::collections::BTreeSet;

use crate::error::{check_len, ExpoError, Result};
use crate::geometry::{majorization_violation, majorizes, ray_boundary_lambda, ray_lambda_in_order, splits_in_order};
use crate::types::{dot, ExposureVector, PbmModel};

/// Relative utility gap at which tracing stops.
pub const UTILITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoConfig {
    pub utility_tol: f64,
}

impl Default for ParetoConfig {
    fn default() -> Self {
        Self {
            utility_tol: UTILITY_TOL,
        }
    }
}

/// Raw record of a trace, in the relevance-sorted basis.
#[derive(Debug, Clone)]
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct Trace {
    /// `basis[k]` is the item at sorted position `k`.
    pub basis: Vec<usize>,
    pub points: Vec<Vec<f64>>,
    pub splits: Vec<Vec<usize>>,
    /// Direction followed from each point except the last.
    pub directions: Vec<Vec<f64>>,
    pub iterations: usize,
}

/// Pareto front for `rho` starting at `target`, with default tolerances.
pub fn pareto_front(
    model: &PbmModel,
    target: &ExposureVector,
    rho: &RelevanceVector,
) -> Result<ParetoFront> {
    pareto_front_with(model, target, rho, &ParetoConfig::default())
}

pub fn pareto_front_with(
    model: &PbmModel,
    target: &ExposureVector,
    rho: &RelevanceVector,
    config: &ParetoConfig,
) -> Result<ParetoFront> {
    let trace = trace(model, target, rho, config)?;
    let n = model.len();
    let points = trace
        .points
        .iter()
        .map(|sorted| {
            let mut x = vec![0.0; n];
            for (k, &item) in trace.basis.iter().enumerate() {
                x[item] = sorted[k];
            }
            let exposure = ExposureVector::from(x);
            FrontPoint {
                utility: dot(rho.values(), exposure.values()),
                unfairness: exposure.distance(target),
                exposure,
            }
        })
        .collect();
    Ok(ParetoFront {
        target: target.clone(),
        points,
        iterations: trace.iterations,
    })
}

/// Remove the mean of `values` on every block between consecutive splits.
fn project_off_blocks(values: &mut [f64], splits: &BTreeSet<usize>) {
    let mut start = 0;
    for &s in splits {
        let block = &mut values[start..s];
        let mean = block.iter().sum::<f64>() / block.len() as f64;
        block.iter_mut().for_each(|v| *v -= mean);
        start = s;
    }
}

/// Shift every block so that its sum matches the exposure block sum.
fn snap_to_face(values: &mut [f64], splits: &BTreeSet<usize>, model: &PbmModel) {
    let g = model.ascending_prefix_sums();
    let mut start = 0;
    let mut prev = 0.0;
    for &s in splits {
        let block = &mut values[start..s];
        let shift = (g[s - 1] - prev - block.iter().sum::<f64>()) / block.len() as f64;
        block.iter_mut().for_each(|v| *v += shift);
        prev = g[s - 1];
        start = s;
    }
}

/// Normal of the face hyperplane added by split `new_split`, orthogonal to
/// the constraints of the enclosing splits: ones on `(lower, new_split]`,
/// `-psi` on `(new_split, upper]` with `psi` the ratio of block lengths.
/// Positions are 1-based prefix lengths in the sorted basis.
pub fn face_normal(n: usize, splits: &BTreeSet<usize>, new_split: usize) -> Vec<f64> {
    let lower = splits.range(..new_split).next_back().copied().unwrap_or(0);
    let upper = splits.range(new_split + 1..).next().copied().unwrap_or(n);
    let psi = (new_split - lower) as f64 / (upper - new_split) as f64;
    let mut nu = vec![0.0; n];
    nu[lower..new_split].iter_mut().for_each(|v| *v = 1.0);
    nu[new_split..upper].iter_mut().for_each(|v| *v = -psi);
    nu
}

pub(crate) fn trace(
    model: &PbmModel,
    target: &ExposureVector,
    rho: &RelevanceVector,
    config: &ParetoConfig,
) -> Result<Trace> {
    let n = model.len();
    check_len(n, target.len())?;
    check_len(n, rho.len())?;
    if rho.is_constant() {
        return Err(ExpoError::InvalidInput("all relevance values are equal".into()));
    }
    let violation = majorization_violation(target, model)?;
    if violation > model.tolerance() {
        return Err(ExpoError::OutsidePolytope { violation });
    }
    let r = rho.values();
    let t = target.values();
    let mut basis: Vec<usize> = (0..n).collect();
    basis.sort_by(|&a, &b| r[a].total_cmp(&r[b]).then(t[a].total_cmp(&t[b])).then(a.cmp(&b)));
    let tol = model.tolerance();
    for w in basis.windows(2) {
        if t[w[0]] > t[w[1]] + tol {
            return Err(ExpoError::ZoneMismatch {
                lower: w[0],
                higher: w[1],
            });
        }
    }

    let rho_sorted: Vec<f64> = basis.iter().map(|&i| r[i]).collect();
    let mut v: Vec<f64> = basis.iter().map(|&i| t[i]).collect();
    let identity: Vec<usize> = (0..n).collect();
    let max_utility = dot(&rho_sorted, model.gamma_ascending());
    let utility_scale = max_utility.abs().max(f64::MIN_POSITIVE);
    let mean = rho_sorted.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = rho_sorted.iter().map(|x| x - mean).collect();
    let centered_norm = centered.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut splits: BTreeSet<usize> = splits_in_order(&v, &identity, model).into_iter().collect();
    let mut points = vec![v.clone()];
    let mut split_log = vec![splits.iter().copied().collect::<Vec<_>>()];
    let mut directions = Vec::new();
    let mut iterations = 0;

    loop {
        let gap = max_utility - dot(&rho_sorted, &v);
        if gap <= config.utility_tol * utility_scale {
            break;
        }
        let mut dir = centered.clone();
        project_off_blocks(&mut dir, &splits);
        let dir_norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if dir_norm <= 1e-12 * centered_norm {
            break;
        }
        if iterations >= n {
            return Err(ExpoError::NumericDegeneracy {
                step: iterations,
                splits: splits.into_iter().collect(),
                detail: "front did not reach maximal utility".into(),
            });
        }
        let lambda = ray_lambda_in_order(&v, &dir, &identity, model).map_err(|_| {
            ExpoError::NumericDegeneracy {
                step: iterations,
                splits: splits.iter().copied().collect(),
                detail: "no blocking constraint along the projected relevance".into(),
            }
        })?;
        if lambda <= 0.0 {
            return Err(ExpoError::NumericDegeneracy {
                step: iterations,
                splits: splits.iter().copied().collect(),
                detail: format!("stalled with step length {lambda:e}"),
            });
        }
        v.iter_mut().zip(&dir).for_each(|(x, d)| *x += lambda * d);
        iterations += 1;
        let next: BTreeSet<usize> = splits_in_order(&v, &identity, model).into_iter().collect();
        if !next.is_superset(&splits) || next.len() <= splits.len() {
            return Err(ExpoError::NumericDegeneracy {
                step: iterations,
                splits: next.into_iter().collect(),
                detail: "boundary hit did not add a split".into(),
            });
        }
        splits = next;
        snap_to_face(&mut v, &splits, model);
        directions.push(dir);
        points.push(v.clone());
        split_log.push(splits.iter().copied().collect());
    }

    // Close a sub-tolerance remainder exactly: project onto the face that
    // maximises utility (tight at every change of relevance).
    let gap = max_utility - dot(&rho_sorted, &v);
    if gap > 1e-13 * utility_scale {
        let mut top: BTreeSet<usize> = (1..n)
            .filter(|&k| rho_sorted[k - 1] < rho_sorted[k])
            .collect();
        top.insert(n);
        top.extend(splits.iter().copied());
        let mut end = v.clone();
        snap_to_face(&mut end, &top, model);
        if dot(&rho_sorted, &end) > dot(&rho_sorted, &v) {
            directions.push(end.iter().zip(&v).map(|(a, b)| a - b).collect());
            points.push(end);
            split_log.push(top.into_iter().collect());
        }
    }

    Ok(Trace {
        basis,
        points,
        splits: split_log,
        directions,
        iterations,
    })
}

/// Fair target blended towards the barycenter just enough to be feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleTarget {
    pub exposure: ExposureVector,
    /// Blend weight `b` of the barycenter; zero when the meritocratic
    /// target is already feasible.
    pub blend: f64,
}

/// `(1 - b) (|gamma|_1 / |rho|_1) rho + b (|gamma|_1 / n) 1` with the
/// smallest `b >= 0` that lies in the expohedron.
pub fn feasible_target(model: &PbmModel, rho: &RelevanceVector) -> Result<FeasibleTarget> {
    let n = model.len();
    check_len(n, rho.len())?;
    let mass = rho.sum();
    if mass <= 0.0 {
        return Err(ExpoError::InvalidInput("relevance vector sums to zero".into()));
    }
    let scale = model.total() / mass;
    let merit = ExposureVector::from(rho.values().iter().map(|r| r * scale).collect::<Vec<_>>());
    if majorizes(&merit, model)? {
        return Ok(FeasibleTarget {
            exposure: merit,
            blend: 0.0,
        });
    }
    let center = model.barycenter();
    let dir: Vec<f64> = merit.values().iter().zip(center.values()).map(|(m, c)| m - c).collect();
    let lambda = ray_boundary_lambda(&center, &dir, model)?.min(1.0);
    Ok(FeasibleTarget {
        exposure: center.offset(&dir, lambda),
        blend: 1.0 - lambda,
    })
}

/// Point of a front maximising `alpha * utility - (1 - alpha) * unfairness^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarizedPoint {
    pub exposure: ExposureVector,
    /// Segment index `s`: the point lies between front points `s` and `s + 1`.
    pub segment: usize,
    /// Position along the segment in `[0, 1]`.
    pub t: f64,
    pub objective: f64,
}

/// Maximise the scalarized objective over the continuous polyline. Utility is
/// linear and squared unfairness quadratic along each segment, so each
/// segment has a closed-form optimum.
pub fn scalarization_match(front: &ParetoFront, alpha: f64) -> Result<ScalarizedPoint> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(ExpoError::InvalidInput(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if front.is_empty() {
        return Err(ExpoError::InvalidInput("empty front".into()));
    }
    let objective = |p: &FrontPoint| alpha * p.utility - (1.0 - alpha) * p.unfairness * p.unfairness;
    let first = front.first();
    let mut best = ScalarizedPoint {
        exposure: first.exposure.clone(),
        segment: 0,
        t: 0.0,
        objective: objective(first),
    };
    let target = front.target.values();
    for (s, pair) in front.points.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let delta: Vec<f64> = b.exposure.values().iter().zip(a.exposure.values()).map(|(x, y)| x - y).collect();
        let offset: Vec<f64> = a.exposure.values().iter().zip(target).map(|(x, y)| x - y).collect();
        let du = b.utility - a.utility;
        let c = dot(&offset, &delta);
        let q = dot(&delta, &delta);
        let f = |t: f64| {
            alpha * (a.utility + t * du) - (1.0 - alpha) * (a.unfairness * a.unfairness + 2.0 * t * c + t * t * q)
        };
        let curvature = 2.0 * (1.0 - alpha) * q;
        let t = if curvature > 0.0 {
            ((alpha * du - 2.0 * (1.0 - alpha) * c) / curvature).clamp(0.0, 1.0)
        } else if alpha * du > 0.0 {
            1.0
        } else {
            0.0
        };
        let value = f(t);
        if value > best.objective {
            best = ScalarizedPoint {
                exposure: a.exposure.lerp(&b.exposure, t),
                segment: s,
                t,
                objective: value,
            };
        }
    }
    Ok(best)
}
