//! Carathéodory decomposition of an expohedron point into at most `n`
//! rankings by recursive ray shooting (the GLS method).
//!
//! Starting from `p = x`, pick the vertex `v` co-ordered with `p`, shoot a
//! half-line from `v` through `p` and stop where it leaves the polytope. That
//! exit point `q` lies on a face of strictly lower dimension, and
//! `p = beta v + (1 - beta) q` with `beta = |p - q| / |v - q|`. Recurse on
//! `q` until it is itself a vertex.

pub use crate::types::{RankingDistribution, WeightedRanking};

use crate::error::{ExpoError, Result};
use crate::geometry::{
    bisect_boundary, coordered_ranking, face_of, face_with_tolerance, project_onto_face, vertex_on_face_of, FaceDescriptor,
};
use crate::types::{ExposureVector, PbmModel, Ranking};

/// Weights below this are dropped from the output.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Loosest relative tolerance used to recognise the face an exit point lies on.
pub const SNAP_LIMIT: f64 = 1e-7;

/// One iteration of the decomposition, kept for diagnostics and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct GlsStep {
    /// Point being decomposed at this step.
    pub point: ExposureVector,
    /// Number of tight prefix constraints of `point`.
    pub splits: usize,
    pub vertex: ExposureVector,
    pub ranking: Ranking,
    /// Share of the original unit mass assigned to `vertex`.
    pub weight: f64,
}

/// Full decomposition record: every step, including weights later pruned.
#[derive(Debug, Clone, PartialEq)]
pub struct GlsTrace {
    pub steps: Vec<GlsStep>,
}

impl GlsTrace {
    pub fn raw_weights(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.weight).collect()
    }
}

/// Decompose `x` into a convex combination of at most `n` rankings.
pub fn gls_decompose(x: &ExposureVector, model: &PbmModel) -> Result<RankingDistribution> {
    let trace = gls_trace(x, model)?;
    distribution_from_trace(&trace)
}

/// Run the decomposition and return every intermediate step.
pub fn gls_trace(x: &ExposureVector, model: &PbmModel) -> Result<GlsTrace> {
    let n = model.len();
    let mut point = x.clone();
    let mut face = face_of(&point, model)?;
    let mut mass = 1.0;
    let mut steps = Vec::with_capacity(n);
    // a point this close to its vertex gives a ray direction made of noise
    let vertex_tol = (SNAP_LIMIT * model.total()).max(model.tolerance());

    for step in 0..n {
        let vertex = vertex_on_face_of(&point, model)?;
        let ranking = coordered_ranking(&point);
        let splits = face.splits().len();
        if face.is_vertex() || point.max_abs_diff(&vertex) <= vertex_tol {
            steps.push(GlsStep { point, splits, vertex, ranking, weight: mass });
            return Ok(GlsTrace { steps });
        }
        let exit = bisect_boundary(&vertex, &point, model)?;
        let Some((exit, exit_face)) = lower_face(exit, splits, model)? else {
            return Err(ExpoError::NumericDegeneracy {
                step,
                splits: face.splits().to_vec(),
                detail: format!("face dimension did not decrease from {splits} splits"),
            });
        };
        let span = vertex.distance(&exit);
        let beta = (point.distance(&exit) / span).clamp(0.0, 1.0);
        steps.push(GlsStep {
            point,
            splits,
            vertex,
            ranking,
            weight: mass * beta,
        });
        mass *= 1.0 - beta;
        point = exit;
        face = exit_face;
    }
    Err(ExpoError::NumericDegeneracy {
        step: n,
        splits: face.splits().to_vec(),
        detail: "no vertex reached after n steps".into(),
    })
}

/// Face of `exit` with more tight prefixes than `splits`. Rounding noise of
/// earlier steps is amplified along long rays, so detection is retried at
/// looser tolerances (up to `SNAP_LIMIT` relative) and the point is snapped
/// onto the face found.
fn lower_face(
    exit: ExposureVector,
    splits: usize,
    model: &PbmModel,
) -> Result<Option<(ExposureVector, FaceDescriptor)>> {
    let base = model.tolerance();
    let limit = (SNAP_LIMIT * model.total()).max(base);
    let mut tol = base;
    loop {
        let face = face_with_tolerance(&exit, model, tol)?;
        if face.splits().len() > splits {
            let exit = if tol > base { project_onto_face(&exit, &face, model)? } else { exit };
            return Ok(Some((exit, face)));
        }
        if tol >= limit {
            return Ok(None);
        }
        tol = (tol * 10.0).min(limit);
    }
}

fn distribution_from_trace(trace: &GlsTrace) -> Result<RankingDistribution> {
    let kept: Vec<WeightedRanking> = trace
        .steps
        .iter()
        .filter(|s| s.weight >= PRUNE_THRESHOLD)
        .map(|s| WeightedRanking {
            weight: s.weight,
            ranking: s.ranking.clone(),
        })
        .collect();
    let total: f64 = kept.iter().map(|e| e.weight).sum();
    RankingDistribution::new(
        kept.into_iter()
            .map(|e| WeightedRanking {
                weight: e.weight / total,
                ranking: e.ranking,
            })
            .collect(),
    )
}
