//! Brute-force verifiers used by the test suites. They share only the domain
//! types with the production code and recompute everything else themselves.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ExpoError, Result};
use crate::types::{ExposureVector, ParetoFront, PbmModel, RelevanceVector};

/// Largest `n` for which all `n!` vertices are enumerated.
pub const MAX_ENUMERATION: usize = 8;
/// Hull residual below which a point counts as a member.
pub const MEMBERSHIP_RESIDUAL: f64 = 1e-9;
/// Margin a sample must beat a front point by, on both objectives.
pub const DOMINATION_MARGIN: f64 = 1e-9;

/// Every permutation of `gamma`, one exposure vector per ranking.
#[derive(Debug, Clone)]
pub struct VertexEnumeration {
    vertices: Vec<Vec<f64>>,
}

impl VertexEnumeration {
    pub fn new(model: &PbmModel) -> Result<Self> {
        let n = model.len();
        if n > MAX_ENUMERATION {
            return Err(ExpoError::TooLarge { n, max: MAX_ENUMERATION });
        }
        let gamma = model.gamma();
        let vertices = (0..n)
            .permutations(n)
            .map(|order| {
                let mut v = vec![0.0; n];
                for (rank, item) in order.into_iter().enumerate() {
                    v[item] = gamma[rank];
                }
                v
            })
            .collect();
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Distance-like residual of `x` from the convex hull of all vertices:
/// `min || [x; s] - [V; s 1^T] w ||` over `w >= 0`, solved by the
/// Lawson-Hanson active-set method. The appended row (scaled by the mean
/// exposure `s`) enforces that the weights sum to one.
pub fn hull_residual(x: &ExposureVector, model: &PbmModel) -> Result<f64> {
    let n = model.len();
    if x.len() != n {
        return Err(ExpoError::DimensionMismatch { expected: n, got: x.len() });
    }
    let vertices = VertexEnumeration::new(model)?;
    let scale = model.gamma().iter().sum::<f64>() / n as f64;
    let m = vertices.len();
    let a = DMatrix::from_fn(n + 1, m, |row, col| {
        if row < n {
            vertices.vertices()[col][row]
        } else {
            scale
        }
    });
    let b = DVector::from_fn(n + 1, |row, _| if row < n { x[row] } else { scale });
    let w = nnls(&a, &b, 3 * m + 50);
    Ok((&b - &a * &w).norm())
}

pub fn hull_membership_oracle(x: &ExposureVector, model: &PbmModel) -> Result<bool> {
    Ok(hull_residual(x, model)? < MEMBERSHIP_RESIDUAL)
}

fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_outer: usize) -> DVector<f64> {
    let m = a.ncols();
    let mut x = DVector::zeros(m);
    let mut passive = vec![false; m];
    // columns whose admission was immediately undone; skipped until x moves
    let mut rejected = vec![false; m];
    let grad_tol = 1e-13 * (a.norm() * b.norm()).max(1.0);
    for _ in 0..max_outer {
        let grad = a.transpose() * (b - a * &x);
        let candidate = (0..m)
            .filter(|&j| !passive[j] && !rejected[j])
            .max_by(|&i, &j| grad[i].total_cmp(&grad[j]));
        let Some(j) = candidate else { break };
        if grad[j] <= grad_tol {
            break;
        }
        passive[j] = true;
        let before = x.clone();
        for _ in 0..m {
            let idx: Vec<usize> = (0..m).filter(|&i| passive[i]).collect();
            if idx.is_empty() {
                break;
            }
            let sub = a.select_columns(&idx);
            let z = match sub.svd(true, true).solve(b, 1e-14) {
                Ok(z) => z,
                Err(_) => break,
            };
            if z.iter().all(|&v| v > 0.0) {
                for (k, &i) in idx.iter().enumerate() {
                    x[i] = z[k];
                }
                break;
            }
            let mut step = 1.0f64;
            let mut blocking = idx[0];
            for (k, &i) in idx.iter().enumerate() {
                if z[k] <= 0.0 {
                    let t = x[i] / (x[i] - z[k]);
                    if t < step {
                        step = t;
                        blocking = i;
                    }
                }
            }
            for (k, &i) in idx.iter().enumerate() {
                x[i] += step * (z[k] - x[i]);
                if i == blocking || x[i] <= 1e-15 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
        if (&x - &before).amax() == 0.0 {
            rejected[j] = true;
            passive[j] = false;
        } else {
            rejected.iter_mut().for_each(|r| *r = false);
        }
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Beats front point `i` on both objectives.
    Vertex(usize),
    /// Less unfair than the front at the same utility, on segment `i`.
    Segment(usize),
    /// Exceeds the utility of the front's last point.
    BeyondEnd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationViolation {
    pub kind: ViolationKind,
    pub sample: ExposureVector,
    pub utility: f64,
    pub unfairness: f64,
    /// Amount by which the sample beats the front.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DominationReport {
    pub samples: usize,
    pub violations: Vec<DominationViolation>,
}

impl DominationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draw `samples` random feasible exposures (random convex combinations of
/// random rankings) and report every one that beats the front.
pub fn nondomination_oracle(
    front: &ParetoFront,
    model: &PbmModel,
    rho: &RelevanceVector,
    target: &ExposureVector,
    samples: usize,
    seed: u64,
) -> Result<DominationReport> {
    let n = model.len();
    if rho.len() != n || target.len() != n {
        return Err(ExpoError::DimensionMismatch { expected: n, got: rho.len().min(target.len()) });
    }
    let r = rho.values();
    let t = target.values();
    let utility = |x: &[f64]| x.iter().zip(r).map(|(a, b)| a * b).sum::<f64>();
    let unfairness = |x: &[f64]| x.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let points: Vec<(f64, f64, &[f64])> = front
        .points
        .iter()
        .map(|p| {
            let x = p.exposure.values();
            (utility(x), unfairness(x), x)
        })
        .collect();
    let gamma = model.gamma();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DominationReport { samples, violations: Vec::new() };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut x = vec![0.0; n];

    for _ in 0..samples {
        x.iter_mut().for_each(|v| *v = 0.0);
        let k = rng.gen_range(1..=n + 1);
        let weights: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = weights.iter().sum();
        for w in &weights {
            perm.shuffle(&mut rng);
            for (rank, &item) in perm.iter().enumerate() {
                x[item] += w / total * gamma[rank];
            }
        }
        let (u, f) = (utility(&x), unfairness(&x));
        let mut record = |kind, margin| {
            report.violations.push(DominationViolation {
                kind,
                sample: ExposureVector::from(x.clone()),
                utility: u,
                unfairness: f,
                margin,
            })
        };

        if let Some(&(last_u, _, _)) = points.last() {
            if u > last_u + DOMINATION_MARGIN {
                record(ViolationKind::BeyondEnd, u - last_u);
                continue;
            }
        }
        if let Some(i) = points
            .iter()
            .position(|&(pu, pf, _)| u >= pu + DOMINATION_MARGIN && f <= pf - DOMINATION_MARGIN)
        {
            let margin = (u - points[i].0).min(points[i].1 - f);
            record(ViolationKind::Vertex(i), margin);
            continue;
        }
        for (s, pair) in points.windows(2).enumerate() {
            let (ua, _, xa) = pair[0];
            let (ub, _, xb) = pair[1];
            if u < ua || u > ub || ub <= ua {
                continue;
            }
            let tau = (u - ua) / (ub - ua);
            let on_front: Vec<f64> = xa.iter().zip(xb).map(|(a, b)| a + tau * (b - a)).collect();
            let front_f = unfairness(&on_front);
            if f <= front_f - DOMINATION_MARGIN {
                record(ViolationKind::Segment(s), front_f - f);
            }
            break;
        }
    }
    Ok(report)
}
