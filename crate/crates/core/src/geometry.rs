//! Expohedron machinery: membership via majorization, order-preserving zones,
//! face identification, vertex selection and ray/boundary intersection.
//!
//! A point `x` lies in the expohedron of `gamma` iff it is majorized by
//! `gamma`: for every `k` the `k` smallest entries of `x` sum to at least
//! `G_k`, the sum of the `k` smallest exposures, with equality at `k = n`.
//! The indices where equality holds (the splits), together with the
//! ascending order of `x` (its zone), identify the lowest-dimensional face
//! containing `x`.

use crate::error::{check_len, ExpoError, Result};
#[cfg(test)]
use crate::types::prefix_sums;
pub use crate::types::{ExposureVector, PbmModel, Ranking};

/// Relative tolerance for prefix-sum comparisons (scaled by the total exposure).
pub const REL_TOL: f64 = 1e-9;
/// Absolute tolerance floor.
pub const ABS_TOL: f64 = 1e-12;
/// Number of halvings performed by [`bisect_boundary`].
pub const BISECTION_STEPS: usize = 80;

// The bisection predicate is stricter than split detection so that the
// bracketed point sits well inside the split-detection band.
const BISECTION_REL_TOL: f64 = 1e-12;

/// Face of the expohedron: a zone (ascending order of the items) and the
/// 1-based prefix lengths at which the sorted prefix sums are tight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDescriptor {
    ascending: Vec<usize>,
    splits: Vec<usize>,
}

impl FaceDescriptor {
    pub fn new(ascending: Vec<usize>, mut splits: Vec<usize>) -> Result<Self> {
        let n = ascending.len();
        Ranking::new(ascending.clone())?;
        splits.sort_unstable();
        splits.dedup();
        if splits.iter().any(|&s| s == 0 || s > n) {
            return Err(ExpoError::InvalidInput(format!("splits {splits:?} outside 1..={n}")));
        }
        if splits.last() != Some(&n) {
            splits.push(n);
        }
        Ok(Self { ascending, splits })
    }

    /// Items sorted by increasing exposure within the zone.
    pub fn ascending_items(&self) -> &[usize] {
        &self.ascending
    }

    /// The zone as a ranking: item with the largest coordinate first.
    pub fn zone(&self) -> Ranking {
        Ranking::new(self.ascending.iter().rev().copied().collect()).expect("zone is a permutation")
    }

    pub fn splits(&self) -> &[usize] {
        &self.splits
    }

    pub fn dimension(&self) -> usize {
        self.ascending.len() - self.splits.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.dimension() == 0
    }
}

/// Items by decreasing coordinate; ties keep index order.
pub fn rank_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
    order
}

/// Items by increasing coordinate: the reverse of [`rank_order`], so a
/// tied pair is ordered the same way by both.
pub fn ascending_order(x: &[f64]) -> Vec<usize> {
    let mut order = rank_order(x);
    order.reverse();
    order
}

fn validate_point(x: &ExposureVector, model: &PbmModel) -> Result<()> {
    check_len(model.len(), x.len())?;
    if !x.is_finite() {
        return Err(ExpoError::InvalidInput("exposure vector has non-finite entries".into()));
    }
    Ok(())
}

/// Largest amount by which `x` violates majorization by `gamma`: the maximum
/// of `G_k - X_k` over proper prefixes and `|G_n - X_n|`. Non-positive means
/// the inequalities hold exactly.
pub fn majorization_violation(x: &ExposureVector, model: &PbmModel) -> Result<f64> {
    validate_point(x, model)?;
    Ok(violation_unchecked(x.values(), model))
}

fn violation_unchecked(x: &[f64], model: &PbmModel) -> f64 {
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let g = model.ascending_prefix_sums();
    let n = sorted.len();
    let mut acc = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for (k, v) in sorted.iter().enumerate() {
        acc += v;
        let gap = if k + 1 == n { (g[k] - acc).abs() } else { g[k] - acc };
        worst = worst.max(gap);
    }
    worst
}

/// Whether `x` lies in the expohedron of `model` (is majorized by `gamma`),
/// with comparisons at [`PbmModel::tolerance`].
pub fn majorizes(x: &ExposureVector, model: &PbmModel) -> Result<bool> {
    Ok(majorization_violation(x, model)? <= model.tolerance())
}

/// The ranking that places items in decreasing order of `x`.
pub fn coordered_ranking(x: &ExposureVector) -> Ranking {
    Ranking::new(rank_order(x.values())).expect("rank order is a permutation")
}

/// Vertex of the expohedron co-ordered with `x`: the largest exposure goes
/// to the largest coordinate of `x`, and so on. It lies on every face that
/// contains `x`.
pub fn vertex_on_face_of(x: &ExposureVector, model: &PbmModel) -> Result<ExposureVector> {
    validate_point(x, model)?;
    model.exposure_of(&coordered_ranking(x))
}

/// Lowest-dimensional face containing `x`.
pub fn face_of(x: &ExposureVector, model: &PbmModel) -> Result<FaceDescriptor> {
    face_with_tolerance(x, model, model.tolerance())
}

/// [`face_of`] with an explicit absolute tolerance for tight prefixes.
pub(crate) fn face_with_tolerance(x: &ExposureVector, model: &PbmModel, tol: f64) -> Result<FaceDescriptor> {
    let violation = majorization_violation(x, model)?;
    if violation > tol {
        return Err(ExpoError::OutsidePolytope { violation });
    }
    let ascending = ascending_order(x.values());
    let g = model.ascending_prefix_sums();
    let n = x.len();
    let mut acc = 0.0;
    let mut splits = Vec::new();
    for (k, &item) in ascending.iter().enumerate() {
        acc += x[item];
        if k + 1 == n || (acc - g[k]).abs() <= tol {
            splits.push(k + 1);
        }
    }
    Ok(FaceDescriptor { ascending, splits })
}

/// Step length to the boundary along `v + lambda d`, with prefix sums taken
/// in the fixed item `order` (ascending for every point on the ray).
///
/// `lambda = min { (G_k - V_k) / D_k : D_k < 0 }` over proper prefixes.
pub fn ray_lambda_in_order(
    v: &[f64],
    d: &[f64],
    order: &[usize],
    model: &PbmModel,
) -> Result<f64> {
    let n = model.len();
    check_len(n, v.len())?;
    check_len(n, d.len())?;
    check_len(n, order.len())?;
    let g = model.ascending_prefix_sums();
    let scale: f64 = d.iter().map(|x| x.abs()).sum();
    let eps = 1e-12 * scale;
    let mut vk = 0.0;
    let mut dk = 0.0;
    let mut best: Option<f64> = None;
    for (k, &item) in order.iter().enumerate().take(n - 1) {
        vk += v[item];
        dk += d[item];
        if dk < -eps {
            let lambda = ((g[k] - vk) / dk).max(0.0);
            best = Some(best.map_or(lambda, |b: f64| b.min(lambda)));
        }
    }
    best.ok_or(ExpoError::UnboundedRay)
}

/// Largest `lambda` with `v + lambda d` still in the expohedron, for `v` in
/// the polytope and `d` a sum-zero direction that keeps the ordering of the
/// coordinates fixed along the ray.
pub fn ray_boundary_lambda(v: &ExposureVector, d: &[f64], model: &PbmModel) -> Result<f64> {
    validate_point(v, model)?;
    check_len(model.len(), d.len())?;
    let scale: f64 = d.iter().map(|x| x.abs()).sum();
    let drift: f64 = d.iter().sum();
    if drift.abs() > REL_TOL * scale + ABS_TOL {
        return Err(ExpoError::InvalidInput(format!(
            "direction must sum to zero, sums to {drift:e}"
        )));
    }
    let violation = violation_unchecked(v.values(), model);
    if violation > model.tolerance() {
        return Err(ExpoError::OutsidePolytope { violation });
    }
    // zone of v + mu d for small mu > 0: ties in v are broken by d
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(d[a].total_cmp(&d[b])).then(b.cmp(&a)));
    ray_lambda_in_order(v.values(), d, &order, model)
}

/// Exit point of the half-line from vertex `v` through `p`: the point
/// `v + lambda (p - v)` with the largest `lambda >= 1` still in the
/// expohedron, found by bisection and then snapped onto its face with
/// [`project_onto_face`].
pub fn bisect_boundary(
    v: &ExposureVector,
    p: &ExposureVector,
    model: &PbmModel,
) -> Result<ExposureVector> {
    validate_point(v, model)?;
    let violation = majorization_violation(p, model)?;
    if violation > model.tolerance() {
        return Err(ExpoError::OutsidePolytope { violation });
    }
    let dir: Vec<f64> = p.values().iter().zip(v.values()).map(|(a, b)| a - b).collect();
    if dir.iter().all(|d| *d == 0.0) {
        return Err(ExpoError::InvalidInput("ray origin and through-point coincide".into()));
    }
    let strict = (BISECTION_REL_TOL * model.total()).max(ABS_TOL);
    let inside = |lambda: f64| {
        let point: Vec<f64> = v.values().iter().zip(&dir).map(|(a, d)| a + lambda * d).collect();
        violation_unchecked(&point, model) <= strict
    };

    let mut lo = 1.0;
    let mut hi = 2.0;
    let mut doublings = 0;
    while inside(hi) {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 64 {
            return Err(ExpoError::UnboundedRay);
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let raw = v.offset(&dir, lo);
    let face = face_of(&raw, model)?;
    project_onto_face(&raw, &face, model)
}

/// Orthogonal projection of `x` onto the affine subspace where the prefix
/// sums of the face's zone equal `G` at every split.
///
/// The prefix-indicator normals are nested; Gram-Schmidt turns them into the
/// indicators of the blocks between consecutive splits, so the projection
/// shifts each block uniformly until its sum matches the exposure block sum.
pub fn project_onto_face(
    x: &ExposureVector,
    face: &FaceDescriptor,
    model: &PbmModel,
) -> Result<ExposureVector> {
    validate_point(x, model)?;
    check_len(model.len(), face.ascending.len())?;
    let g = model.ascending_prefix_sums();
    let mut out = x.values().to_vec();
    let mut start = 0;
    let mut g_prev = 0.0;
    for &split in &face.splits {
        let block = &face.ascending[start..split];
        let current: f64 = block.iter().map(|&i| x[i]).sum();
        let shift = (g[split - 1] - g_prev - current) / block.len() as f64;
        for &i in block {
            out[i] += shift;
        }
        g_prev = g[split - 1];
        start = split;
    }
    Ok(ExposureVector::from(out))
}

/// Splits of `x` measured in a fixed item order rather than the order of `x`.
pub(crate) fn splits_in_order(x: &[f64], order: &[usize], model: &PbmModel) -> Vec<usize> {
    let g = model.ascending_prefix_sums();
    let tol = model.tolerance();
    let n = order.len();
    let mut acc = 0.0;
    let mut splits = Vec::new();
    for (k, &item) in order.iter().enumerate() {
        acc += x[item];
        if k + 1 == n || (acc - g[k]).abs() <= tol {
            splits.push(k + 1);
        }
    }
    splits
}

/// Prefix sums of `x` taken in the given item order.
#[cfg(test)]
pub(crate) fn ordered_prefix_sums(x: &[f64], order: &[usize]) -> Vec<f64> {
    prefix_sums(&order.iter().map(|&i| x[i]).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig_model() -> PbmModel {
        PbmModel::dcg_unit(3).unwrap()
    }

    fn ev(v: &[f64]) -> ExposureVector {
        ExposureVector::from(v.to_vec())
    }

    fn close(a: &ExposureVector, b: &[f64], tol: f64) -> bool {
        a.values().iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn gamma_majorizes_itself() {
        let m = fig_model();
        assert!(majorizes(&ev(m.gamma()), &m).unwrap());
    }

    #[test]
    fn barycenter_is_inside() {
        let m = fig_model();
        assert!(majorizes(&ev(&[0.71031, 0.71031, 0.71031]), &m).is_ok());
        assert!(majorizes(&m.barycenter(), &m).unwrap());
    }

    #[test]
    fn smallest_entry_violation_detected() {
        let m = fig_model();
        let g1 = m.gamma()[1];
        // same total as gamma, smallest entry below 0.5
        let x = ev(&[1.2, g1, 0.5 - 0.2]);
        assert!((x.sum() - m.total()).abs() < 1e-12);
        assert!(!majorizes(&x, &m).unwrap());
        assert!((majorization_violation(&x, &m).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn total_mismatch_rejected() {
        let m = fig_model();
        let x = ev(&m.gamma().iter().map(|g| 1.01 * g).collect::<Vec<_>>());
        assert!(!majorizes(&x, &m).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let m = fig_model();
        assert_eq!(
            majorizes(&ev(&[1.0, 1.0]), &m),
            Err(ExpoError::DimensionMismatch { expected: 3, got: 2 })
        );
        assert!(vertex_on_face_of(&ev(&[1.0]), &m).is_err());
    }

    #[test]
    fn vertex_of_edge_point() {
        let m = fig_model();
        let v = vertex_on_face_of(&ev(&[0.5, 0.768, 0.863]), &m).unwrap();
        assert!(close(&v, &[0.5, m.gamma()[1], 1.0], 0.0));
    }

    #[test]
    fn vertex_of_sorted_point_is_gamma() {
        let m = PbmModel::dcg(5).unwrap();
        let v = vertex_on_face_of(&ev(&[0.9, 0.8, 0.5, 0.3, 0.1]), &m).unwrap();
        assert_eq!(v.values(), m.gamma());
    }

    #[test]
    fn vertex_ties_are_deterministic() {
        let m = PbmModel::dcg(4).unwrap();
        let x = ev(&[0.7, 0.4, 0.7, 0.2]);
        let v = vertex_on_face_of(&x, &m).unwrap();
        // tied items 0 and 2: the lower index receives the larger exposure
        assert_eq!(v.values(), &[m.gamma()[0], m.gamma()[2], m.gamma()[1], m.gamma()[3]]);
        assert_eq!(v, vertex_on_face_of(&x, &m).unwrap());
        // same values, permuted: the tie is again resolved by index order
        let permuted = ev(&[0.4, 0.7, 0.2, 0.7]);
        let w = vertex_on_face_of(&permuted, &m).unwrap();
        assert_eq!(w.values(), &[m.gamma()[2], m.gamma()[0], m.gamma()[3], m.gamma()[1]]);
    }

    #[test]
    fn face_of_vertex_and_barycenter() {
        let m = fig_model();
        let f = face_of(&ev(m.gamma()), &m).unwrap();
        assert_eq!(f.splits(), &[1, 2, 3]);
        assert_eq!(f.dimension(), 0);
        let f = face_of(&m.barycenter(), &m).unwrap();
        assert_eq!(f.splits(), &[3]);
        assert_eq!(f.dimension(), 2);
    }

    #[test]
    fn face_of_edge_midpoint() {
        let m = fig_model();
        let g1 = m.gamma()[1];
        let a = ev(&[0.5, g1, 1.0]);
        let b = ev(&[0.5, 1.0, g1]);
        let mid = a.lerp(&b, 0.5);
        let f = face_of(&mid, &m).unwrap();
        assert_eq!(f.splits(), &[1, 3]);
        assert_eq!(f.dimension(), 1);
    }

    #[test]
    fn face_of_outside_point_errors() {
        let m = fig_model();
        let x = ev(&[1.2, m.gamma()[1], 0.3]);
        assert!(matches!(face_of(&x, &m), Err(ExpoError::OutsidePolytope { .. })));
    }

    #[test]
    fn zero_direction_is_unbounded() {
        let m = fig_model();
        assert_eq!(
            ray_boundary_lambda(&m.barycenter(), &[0.0; 3], &m),
            Err(ExpoError::UnboundedRay)
        );
    }

    #[test]
    fn non_sum_zero_direction_rejected() {
        let m = fig_model();
        assert!(matches!(
            ray_boundary_lambda(&m.barycenter(), &[0.1, 0.0, 0.0], &m),
            Err(ExpoError::InvalidInput(_))
        ));
    }

    #[test]
    fn ray_from_barycenter_along_relevance() {
        let m = fig_model();
        let rho = [0.55, 0.6, 0.65];
        let mean = rho.iter().sum::<f64>() / 3.0;
        let d: Vec<f64> = rho.iter().map(|r| r - mean).collect();
        let v = m.barycenter();
        let lambda = ray_boundary_lambda(&v, &d, &m).unwrap();
        let r = v.offset(&d, lambda);
        assert!(close(&r, &[0.5, 0.710_309_92, 0.920_619_84], 1e-8));
    }

    #[test]
    fn two_item_segment() {
        let m = PbmModel::dcg_unit(2).unwrap();
        let v = m.barycenter();
        assert!((v[0] - 0.815_464_876_785_728_7).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = [-s, s];
        let lambda = ray_boundary_lambda(&v, &d, &m).unwrap();
        let r = v.offset(&d, lambda);
        assert!(close(&r, &[m.gamma()[1], 1.0], 1e-12));
        // substitution: lambda moves item 0 from the barycenter down to gamma_2
        let expected = (v[0] - m.gamma()[1]) / s;
        assert!((lambda - expected).abs() < 1e-12);
        assert!(majorizes(&r, &m).unwrap());
        assert!(!majorizes(&r.offset(&d, 1e-6), &m).unwrap());
    }

    #[test]
    fn bisection_from_top_vertex_through_barycenter() {
        let m = fig_model();
        let v = ev(m.gamma());
        let r = bisect_boundary(&v, &m.barycenter(), &m).unwrap();
        assert!(close(&r, &[0.5, 0.76794, 0.86299], 1e-5));
        assert_eq!(face_of(&r, &m).unwrap().splits(), &[1, 3]);
    }

    #[test]
    fn bisection_on_boundary_gains_splits() {
        let m = fig_model();
        let g1 = m.gamma()[1];
        // p on edge x_0 = 0.5; its co-ordered vertex is (0.5, g1, 1)
        let p = ev(&[0.5, 0.8, g1 + 0.2]);
        let start = face_of(&p, &m).unwrap();
        assert_eq!(start.splits(), &[1, 3]);
        let v = vertex_on_face_of(&p, &m).unwrap();
        let r = bisect_boundary(&v, &p, &m).unwrap();
        let end = face_of(&r, &m).unwrap();
        assert!(end.splits().len() > start.splits().len());
        assert!(close(&r, &[0.5, 1.0, g1], 1e-9));
    }

    #[test]
    fn bisection_rejects_outside_point() {
        let m = fig_model();
        let p = ev(&[1.2, m.gamma()[1], 0.3]);
        assert!(matches!(
            bisect_boundary(&ev(m.gamma()), &p, &m),
            Err(ExpoError::OutsidePolytope { .. })
        ));
    }

    /// Gram-Schmidt on the prefix indicators of a face, in item coordinates.
    fn orthonormal_normals(face: &FaceDescriptor) -> Vec<Vec<f64>> {
        let n = face.ascending_items().len();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for &s in face.splits() {
            let mut v = vec![0.0; n];
            for &i in &face.ascending_items()[..s] {
                v[i] = 1.0;
            }
            for b in &basis {
                let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
        basis
    }

    #[test]
    fn projection_keeps_in_face_perturbation() {
        let m = PbmModel::dcg(5).unwrap();
        let x = ev(&[0.2, 0.9, 0.35, 0.5, 0.6]);
        // snap x onto the affine hull of (ascending order of x, splits {2, 5})
        let face = FaceDescriptor::new(ascending_order(x.values()), vec![2, 5]).unwrap();
        let x = project_onto_face(&x, &face, &m).unwrap();
        assert_eq!(project_onto_face(&x, &face, &m).unwrap().max_abs_diff(&x), 0.0);
        // +eps / -eps inside the block of positions 3..5
        let items = face.ascending_items();
        let mut y = x.values().to_vec();
        y[items[2]] += 1e-3;
        y[items[4]] -= 1e-3;
        let y = ExposureVector::from(y);
        assert!(project_onto_face(&y, &face, &m).unwrap().max_abs_diff(&y) < 1e-15);
    }

    #[test]
    fn projection_removes_normal_displacement() {
        let m = PbmModel::dcg(5).unwrap();
        let face = FaceDescriptor::new(vec![4, 0, 2, 1, 3], vec![1, 3, 5]).unwrap();
        let base = project_onto_face(&ev(&[0.5, 0.6, 0.55, 0.7, 0.4]), &face, &m).unwrap();
        for normal in orthonormal_normals(&face) {
            let pushed = base.offset(&normal, 1e-4);
            let back = project_onto_face(&pushed, &face, &m).unwrap();
            assert!(back.max_abs_diff(&base) < 1e-15);
        }
    }

    #[test]
    fn projection_matches_gram_schmidt() {
        let m = PbmModel::dcg(6).unwrap();
        let face = FaceDescriptor::new(vec![5, 3, 1, 0, 2, 4], vec![2, 3, 6]).unwrap();
        let x = ev(&[0.31, 0.77, 0.12, 0.95, 0.4, 0.58]);
        let fast = project_onto_face(&x, &face, &m).unwrap();
        // reference: x - sum_b <x - x0, b> b for any x0 on the face
        let x0 = {
            let mut v = vec![0.0; 6];
            let g = m.ascending_prefix_sums();
            let (mut start, mut prev) = (0, 0.0);
            for &s in face.splits() {
                for &i in &face.ascending_items()[start..s] {
                    v[i] = (g[s - 1] - prev) / (s - start) as f64;
                }
                prev = g[s - 1];
                start = s;
            }
            v
        };
        let mut reference = x.values().to_vec();
        for b in orthonormal_normals(&face) {
            let c: f64 = x.values().iter().zip(&x0).zip(&b).map(|((a, z), w)| (a - z) * w).sum();
            reference.iter_mut().zip(&b).for_each(|(r, w)| *r -= c * w);
        }
        assert!(fast.max_abs_diff(&ev(&reference)) < 1e-14);
        let g = m.ascending_prefix_sums();
        let sums = ordered_prefix_sums(fast.values(), face.ascending_items());
        for &s in face.splits() {
            assert!((sums[s - 1] - g[s - 1]).abs() < 1e-15);
        }
    }

    fn random_point(n: usize, weights: &[f64], perms: &[Vec<usize>], m: &PbmModel) -> ExposureVector {
        let total: f64 = weights.iter().sum();
        let mut x = vec![0.0; n];
        for (w, perm) in weights.iter().zip(perms) {
            for (rank, &item) in perm.iter().enumerate() {
                x[item] += w / total * m.gamma()[rank];
            }
        }
        ExposureVector::from(x)
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
    }

    fn instance() -> impl Strategy<Value = (usize, Vec<f64>, Vec<Vec<usize>>)> {
        (2usize..9).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0.01f64..1.0, 1..5),
                prop::collection::vec(perm_strategy(n), 4),
            )
        })
    }

    proptest! {
        #[test]
        fn vertex_is_permutation_of_gamma((n, w, perms) in instance()) {
            let m = PbmModel::dcg(n).unwrap();
            let x = random_point(n, &w, &perms[..w.len().min(4)], &m);
            let v = vertex_on_face_of(&x, &m).unwrap();
            let mut sorted = v.values().to_vec();
            sorted.sort_by(|a, b| b.total_cmp(a));
            prop_assert_eq!(sorted.as_slice(), m.gamma());
        }

        #[test]
        fn vertex_lies_on_every_face_of_point((n, w, perms) in instance()) {
            let m = PbmModel::dcg(n).unwrap();
            let interior = random_point(n, &w, &perms[..w.len().min(4)], &m);
            let from = ExposureVector::from(m.exposure_of(&Ranking::new(perms[0].clone()).unwrap()).unwrap().into_inner());
            let Ok(x) = bisect_boundary(&from, &interior, &m) else { return Ok(()); };
            let fx = face_of(&x, &m).unwrap();
            let v = vertex_on_face_of(&x, &m).unwrap();
            // v satisfies the prefix equalities of x's face in x's zone
            let sums = ordered_prefix_sums(v.values(), fx.ascending_items());
            let g = m.ascending_prefix_sums();
            for &s in fx.splits() {
                prop_assert!((sums[s - 1] - g[s - 1]).abs() <= 1e-9);
            }
            prop_assert_eq!(face_of(&v, &m).unwrap().splits().len(), n);
        }

        #[test]
        fn boundary_point_is_tight((n, w, perms) in instance()) {
            let m = PbmModel::dcg(n).unwrap();
            let x = random_point(n, &w, &perms[..w.len().min(4)], &m);
            let v = m.exposure_of(&Ranking::new(perms[1].clone()).unwrap()).unwrap();
            prop_assume!(x.distance(&v) > 1e-6);
            let r = bisect_boundary(&v, &x, &m).unwrap();
            prop_assert!(majorizes(&r, &m).unwrap());
            prop_assert!(face_of(&r, &m).unwrap().splits().len() >= 2);
            let dir: Vec<f64> = x.values().iter().zip(v.values()).map(|(a, b)| a - b).collect();
            let len = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
            prop_assert!(!majorizes(&r.offset(&dir, 1e-6 / len), &m).unwrap());
        }

        #[test]
        fn ray_exit_is_on_boundary(rho in prop::collection::vec(0.0f64..1.0, 2..10)) {
            let m = PbmModel::dcg(rho.len()).unwrap();
            let mean = rho.iter().sum::<f64>() / rho.len() as f64;
            let d: Vec<f64> = rho.iter().map(|r| r - mean).collect();
            prop_assume!(d.iter().any(|x| x.abs() > 1e-6));
            let v = m.barycenter();
            let lambda = ray_boundary_lambda(&v, &d, &m).unwrap();
            let r = v.offset(&d, lambda);
            prop_assert!(majorizes(&r, &m).unwrap());
            prop_assert!(!majorizes(&r.offset(&d, 1e-6), &m).unwrap());
        }

        #[test]
        fn projection_idempotent_and_nonexpansive(
            x in prop::collection::vec(0.0f64..1.0, 6),
            y in prop::collection::vec(0.0f64..1.0, 6),
            splits in prop::collection::btree_set(1usize..6, 0..5),
        ) {
            let m = PbmModel::dcg(6).unwrap();
            let face = FaceDescriptor::new(ascending_order(&x), splits.into_iter().collect()).unwrap();
            let p = project_onto_face(&ExposureVector::from(x.clone()), &face, &m).unwrap();
            let pp = project_onto_face(&p, &face, &m).unwrap();
            prop_assert!(pp.max_abs_diff(&p) < 1e-14);
            let q = project_onto_face(&ExposureVector::from(y), &face, &m).unwrap();
            // q lies on the affine face; projecting never increases distance to it
            prop_assert!(p.distance(&q) <= ExposureVector::from(x).distance(&q) + 1e-12);
        }

        #[test]
        fn relabelling_commutes((n, w, perms) in instance()) {
            let m = PbmModel::dcg(n).unwrap();
            let x = random_point(n, &w, &perms[..w.len().min(4)], &m);
            let sigma = &perms[3];
            let relabel = |v: &ExposureVector| {
                let mut out = vec![0.0; n];
                for (i, &s) in sigma.iter().enumerate() {
                    out[s] = v[i];
                }
                ExposureVector::from(out)
            };
            prop_assert_eq!(majorizes(&x, &m).unwrap(), majorizes(&relabel(&x), &m).unwrap());
            let fx = face_of(&x, &m).unwrap();
            let fy = face_of(&relabel(&x), &m).unwrap();
            prop_assert_eq!(fx.splits(), fy.splits());
        }
    }
}
