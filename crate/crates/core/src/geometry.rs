//! Convex hulls of small point sets in R^d by brute-force facet
//! enumeration, the volume and facet functional of a hull, and the Monte
//! Carlo estimator that measures them over random beta polytopes.

use rayon::prelude::*;

use crate::closedform::{PolytopeSpec, WieackerParams};
use crate::error::{Error, Result};
use crate::sampling::{point_samplers, RandomSource};
use crate::scalar::Scalar;

/// A facet: `d` vertex indices, the unit outward normal, and the support
/// value `⟨normal, v⟩` shared by its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet<T> {
    pub vertices: Vec<usize>,
    pub normal: Vec<T>,
    pub support: T,
}

impl<T: Scalar> Facet<T> {
    /// Distance from the origin to the facet's affine hull.
    pub fn offset(&self) -> T {
        self.support.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetSet<T> {
    pub d: usize,
    pub facets: Vec<Facet<T>>,
}

impl<T> FacetSet<T> {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }
}

/// Relative tolerance for side tests: 1e-10 in double precision.
fn side_tolerance<T: Scalar>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1e3))
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Determinant by Gaussian elimination with partial pivoting; `m` is
/// row-major `k × k` and is overwritten.
fn determinant<T: Scalar>(m: &mut [T], k: usize) -> T {
    let mut det = T::one();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| m[i * k + col].abs().partial_cmp(&m[j * k + col].abs()).unwrap())
            .unwrap_or(col);
        if m[pivot * k + col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            for c in 0..k {
                m.swap(pivot * k + c, col * k + c);
            }
            det = -det;
        }
        let p = m[col * k + col];
        det = det * p;
        for row in col + 1..k {
            let f = m[row * k + col] / p;
            if f != T::zero() {
                for c in col..k {
                    m[row * k + c] = m[row * k + c] - f * m[col * k + c];
                }
            }
        }
    }
    det
}

/// A vector orthogonal to the `d - 1` edge vectors `v_i - v_0`, from the
/// cofactor expansion; its length is `(d-1)!` times the facet volume.
fn cofactor_normal<T: Scalar, P: AsRef<[T]>>(points: &[P], idx: &[usize], d: usize) -> Vec<T> {
    let base = points[idx[0]].as_ref();
    let rows = d - 1;
    let mut edges = Vec::with_capacity(rows * d);
    for &i in &idx[1..] {
        edges.extend(points[i].as_ref().iter().zip(base).map(|(&x, &y)| x - y));
    }
    let mut minor = vec![T::zero(); rows * rows];
    (0..d)
        .map(|skip| {
            for r in 0..rows {
                for (c_out, c) in (0..d).filter(|&c| c != skip).enumerate() {
                    minor[r * rows + c_out] = edges[r * d + c];
                }
            }
            let det = determinant(&mut minor, rows);
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if r > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx)?;
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            return Ok(());
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_points<T: Scalar, P: AsRef<[T]>>(op: &'static str, points: &[P]) -> Result<usize> {
    let d = points.first().map_or(0, |p| p.as_ref().len());
    if d == 0 {
        return Err(Error::domain(op, "points must have dimension at least 1"));
    }
    if points.iter().any(|p| p.as_ref().len() != d) {
        return Err(Error::domain(op, "points have mixed dimensions"));
    }
    if points.len() < d + 1 {
        return Err(Error::domain(
            op,
            format!("need at least {} points in dimension {d}, got {}", d + 1, points.len()),
        ));
    }
    if points.iter().flat_map(|p| p.as_ref()).any(|x| !x.is_finite()) {
        return Err(Error::domain(op, "coordinates must be finite"));
    }
    Ok(d)
}

/// Facets of `conv(points)`, found by testing every d-subset.
///
/// A subset is a facet when all other points lie strictly on one side of
/// its affine hull. A point within `1e-10 · max|coordinate|` of a candidate
/// hyperplane makes the configuration non-generic and is reported as
/// [`Error::Degenerate`].
pub fn convex_hull_facets<T: Scalar, P: AsRef<[T]>>(points: &[P]) -> Result<FacetSet<T>> {
    const OP: &str = "geometry::convex_hull_facets";
    let d = check_points(OP, points)?;
    let n = points.len();
    let scale = points
        .iter()
        .flat_map(|p| p.as_ref())
        .fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() {
        return Err(Error::Degenerate {
            op: OP,
            detail: "all points coincide with the origin".into(),
        });
    }
    let tol = side_tolerance::<T>() * scale;
    let inv_n = T::from_usize_lossy(n).recip();
    let centroid: Vec<T> = (0..d)
        .map(|c| points.iter().map(|p| p.as_ref()[c]).sum::<T>() * inv_n)
        .collect();

    let mut facets = Vec::new();
    let mut in_subset = vec![false; n];
    for_each_combination(n, d, |idx| {
        let mut normal = cofactor_normal(points, idx, d);
        let norm = dot(&normal, &normal).sqrt();
        if !(norm > tol.powi(d as i32 - 1) * T::lit(1e-3)) {
            return Err(Error::Degenerate {
                op: OP,
                detail: format!("vertices {idx:?} are affinely dependent"),
            });
        }
        normal.iter_mut().for_each(|x| *x = *x / norm);
        let support = dot(&normal, points[idx[0]].as_ref());
        idx.iter().for_each(|&i| in_subset[i] = true);
        let (mut above, mut below) = (false, false);
        for (j, p) in points.iter().enumerate() {
            if in_subset[j] {
                continue;
            }
            let s = dot(&normal, p.as_ref()) - support;
            if s.abs() <= tol {
                idx.iter().for_each(|&i| in_subset[i] = false);
                return Err(Error::Degenerate {
                    op: OP,
                    detail: format!("point {j} lies on the hyperplane through {idx:?}"),
                });
            }
            if s > T::zero() {
                above = true;
            } else {
                below = true;
            }
        }
        idx.iter().for_each(|&i| in_subset[i] = false);
        if above && below {
            return Ok(());
        }
        // Orient away from the centroid, which lies strictly inside.
        let (normal, support) = if dot(&normal, &centroid) > support {
            (normal.into_iter().map(|x| -x).collect(), -support)
        } else {
            (normal, support)
        };
        facets.push(Facet {
            vertices: idx.to_vec(),
            normal,
            support,
        });
        Ok(())
    })?;
    Ok(FacetSet { d, facets })
}

/// m-volume of the simplex on `m + 1` vertices in R^d (m ≤ d), from the
/// Gram determinant of the edge vectors. Returns 0 for affinely dependent
/// vertices and 1 for a single vertex.
pub fn simplex_volume<T: Scalar, P: AsRef<[T]>>(vertices: &[P]) -> T {
    let Some(first) = vertices.first() else {
        return T::zero();
    };
    let base = first.as_ref();
    let m = vertices.len() - 1;
    if m == 0 {
        return T::one();
    }
    let edges: Vec<Vec<T>> = vertices[1..]
        .iter()
        .map(|v| v.as_ref().iter().zip(base).map(|(&x, &y)| x - y).collect())
        .collect();
    let mut gram = vec![T::zero(); m * m];
    for i in 0..m {
        for j in i..m {
            let g = dot(&edges[i], &edges[j]);
            gram[i * m + j] = g;
            gram[j * m + i] = g;
        }
    }
    let diag: T = (0..m).map(|i| gram[i * m + i]).fold(T::one(), |p, g| p * g);
    let det = determinant(&mut gram, m);
    if !(det > T::epsilon() * T::lit(64.0) * diag) {
        return T::zero();
    }
    let factorial = (1..=m).fold(T::one(), |f, k| f * T::from_usize_lossy(k));
    det.sqrt() / factorial
}

fn facet_volume<T: Scalar, P: AsRef<[T]>>(points: &[P], facet: &Facet<T>) -> T {
    let verts: Vec<&[T]> = facet.vertices.iter().map(|&i| points[i].as_ref()).collect();
    simplex_volume(&verts)
}

/// Volume of `conv(points)` given its facets: the sum of the cones from
/// the centroid of `points` over each facet.
pub fn hull_volume<T: Scalar, P: AsRef<[T]>>(points: &[P], hull: &FacetSet<T>) -> T {
    let d = hull.d;
    let inv_n = T::from_usize_lossy(points.len()).recip();
    let centroid: Vec<T> = (0..d)
        .map(|c| points.iter().map(|p| p.as_ref()[c]).sum::<T>() * inv_n)
        .collect();
    let inv_d = T::from_usize_lossy(d).recip();
    hull.facets
        .iter()
        .map(|f| {
            let height = f.support - dot(&f.normal, &centroid);
            inv_d * facet_volume(points, f) * height
        })
        .sum()
}

pub fn polytope_volume<T: Scalar, P: AsRef<[T]>>(points: &[P]) -> Result<T> {
    let hull = convex_hull_facets(points)?;
    Ok(hull_volume(points, &hull))
}

/// `Σ_F offset(F)^a · Vol_{d-1}(F)^b` over the facets of `hull`.
pub fn hull_wieacker<T: Scalar, P: AsRef<[T]>>(points: &[P], hull: &FacetSet<T>, a: T, b: T) -> T {
    hull.facets
        .iter()
        .map(|f| f.offset().powf(a) * facet_volume(points, f).powf(b))
        .sum()
}

#[allow(non_snake_case)]
pub fn wieacker_T<T: Scalar, P: AsRef<[T]>>(points: &[P], a: T, b: T) -> Result<T> {
    let hull = convex_hull_facets(points)?;
    Ok(hull_wieacker(points, &hull, a, b))
}

/// Quantity measured on each random polytope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional<T> {
    Volume,
    Wieacker(WieackerParams<T>),
}

impl<T: Scalar> Functional<T> {
    fn measure(&self, points: &[Vec<f64>]) -> Result<f64> {
        let hull = convex_hull_facets(points)?;
        Ok(match self {
            Functional::Volume => hull_volume(points, &hull),
            Functional::Wieacker(p) => hull_wieacker(
                points,
                &hull,
                p.a().to_f64().unwrap_or(f64::NAN),
                p.b().to_f64().unwrap_or(f64::NAN),
            ),
        })
    }
}

/// Draws per batch; batch `i` uses stream `i` of the seed.
pub const BATCH_SIZE: usize = 10_000;
/// Resampled fraction above which an estimate is abandoned.
pub const MAX_DEGENERACY_RATE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    pub standard_error: T,
    pub samples: usize,
    /// Draws discarded for degeneracy and replaced.
    pub resampled: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        count: 0.0,
        mean: 0.0,
        m2: 0.0,
    };

    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.count == 0.0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }
}

/// Mean and standard error of `functional` over `samples` independent
/// draws of the polytope `spec`.
///
/// Draws are split into batches of [`BATCH_SIZE`] that run in parallel,
/// each on its own stream, and are merged in batch order, so the result is
/// identical for every thread count. Degenerate draws are replaced by
/// fresh ones; if more than [`MAX_DEGENERACY_RATE`] of the draws need
/// replacing the estimate fails.
pub fn mc_estimate<T: Scalar>(
    spec: &PolytopeSpec<T>,
    functional: Functional<T>,
    samples: usize,
    seed: u64,
) -> Result<McEstimate<T>> {
    const OP: &str = "geometry::mc_estimate";
    if samples < 2 {
        return Err(Error::domain(OP, format!("need at least 2 samples, got {samples}")));
    }
    let d = spec.dimension();
    if spec.n() < d + 1 {
        return Err(Error::domain(
            OP,
            format!("need at least {} points in dimension {d}, got {}", d + 1, spec.n()),
        ));
    }
    let samplers = point_samplers(spec)?;
    let max_resamples = (samples as f64 * MAX_DEGENERACY_RATE).floor() as u64;
    let batches = samples.div_ceil(BATCH_SIZE);

    let results: Vec<Result<(Moments, u64)>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let size = BATCH_SIZE.min(samples - b * BATCH_SIZE);
            let mut rng = RandomSource::new(seed, b as u64);
            let mut points = vec![vec![0.0; d]; samplers.len()];
            let mut moments = Moments::EMPTY;
            let mut resampled = 0u64;
            while (moments.count as usize) < size {
                for (s, p) in samplers.iter().zip(points.iter_mut()) {
                    s.sample_into(&mut rng, p);
                }
                match functional.measure(&points) {
                    Ok(x) => moments.push(x),
                    Err(Error::Degenerate { .. }) => {
                        resampled += 1;
                        if resampled > max_resamples {
                            return Err(Error::DegeneracyRate {
                                rate: resampled as f64 / samples as f64,
                                resampled,
                            });
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok((moments, resampled))
        })
        .collect();

    let mut total = Moments::EMPTY;
    let mut resampled = 0u64;
    for r in results {
        let (m, k) = r?;
        total = total.merge(m);
        resampled += k;
    }
    if resampled > max_resamples {
        return Err(Error::DegeneracyRate {
            rate: resampled as f64 / samples as f64,
            resampled,
        });
    }
    let n = total.count;
    let se = (total.m2 / (n - 1.0) / n).sqrt();
    Ok(McEstimate {
        mean: T::lit(total.mean),
        standard_error: T::lit(se),
        samples,
        resampled,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::BetaVector;
    use crate::sampling::BetaPointSampler;
    use crate::specfun::ball_volume;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn square() -> Vec<Vec<f64>> {
        vec![vec![-1.0, -1.0], vec![1.0, -1.0], vec![1.0, 1.0], vec![-1.0, 1.0]]
    }

    fn corner_simplex(d: usize) -> Vec<Vec<f64>> {
        let mut pts = vec![vec![0.0; d]];
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            pts.push(e);
        }
        pts
    }

    fn factorial(d: usize) -> f64 {
        (1..=d).map(|k| k as f64).product()
    }

    fn random_cloud(rng: &mut RandomSource, d: usize, n: usize) -> Vec<Vec<f64>> {
        let s = BetaPointSampler::new(d, 0.0).unwrap();
        (0..n).map(|_| s.sample(rng)).collect()
    }

    #[test]
    fn square_facets() {
        let hull = convex_hull_facets(&square()).unwrap();
        assert_eq!(hull.len(), 4);
        for f in &hull.facets {
            assert!((f.offset() - 1.0).abs() < 1e-15);
            assert!((f.support - 1.0).abs() < 1e-15);
        }
        assert!((polytope_volume(&square()).unwrap() - 4.0).abs() < 1e-14);
        assert!((wieacker_T(&square(), 0.0, 1.0).unwrap() - 8.0).abs() < 1e-14);
        assert!((wieacker_T(&square(), 1.0, 0.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn corner_simplices() {
        for d in 1..=5 {
            let pts = corner_simplex(d);
            assert_eq!(convex_hull_facets(&pts).unwrap().len(), d + 1);
            assert!((simplex_volume(&pts) - 1.0 / factorial(d)).abs() < 1e-15);
            assert!((polytope_volume(&pts).unwrap() - 1.0 / factorial(d)).abs() < 1e-14);
        }
    }

    #[test]
    fn interior_point_is_not_a_vertex() {
        let mut pts = vec![vec![0.9, 0.1], vec![-0.2, 0.8], vec![-0.7, -0.3], vec![0.3, -0.6]];
        let c: Vec<f64> = (0..2).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / 4.0).collect();
        pts.push(c);
        let hull = convex_hull_facets(&pts).unwrap();
        assert_eq!(hull.len(), 4);
        assert!(hull.facets.iter().all(|f| !f.vertices.contains(&4)));
    }

    #[test]
    fn simplex_volume_cases() {
        assert_eq!(simplex_volume(&[vec![-1.0], vec![1.0]]), 2.0);
        assert_eq!(simplex_volume(&[vec![0.2, 0.3]]), 1.0);
        let doubled = [vec![0.1, 0.2, 0.3], vec![0.5, -0.1, 0.0], vec![0.5, -0.1, 0.0]];
        assert_eq!(simplex_volume(&doubled), 0.0);
        // A triangle inside R^3.
        let tri = [vec![0.0f64, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert!((simplex_volume(&tri) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn triangles_have_three_edges() {
        let mut rng = RandomSource::new(21, 0);
        for _ in 0..50 {
            let pts = random_cloud(&mut rng, 2, 3);
            assert_eq!(wieacker_T(&pts, 0.0, 0.0).unwrap(), 3.0);
            let v = polytope_volume(&pts).unwrap();
            assert!((v - simplex_volume(&pts)).abs() < 1e-12);
        }
    }

    #[test]
    fn simplex_hull_matches_gram_volume() {
        let mut rng = RandomSource::new(22, 0);
        for d in 1..=4 {
            let s = BetaPointSampler::new(d, 0.7).unwrap();
            for _ in 0..20 {
                let pts: Vec<Vec<f64>> = (0..=d).map(|_| s.sample(&mut rng)).collect();
                let v = polytope_volume(&pts).unwrap();
                assert!((v - simplex_volume(&pts)).abs() < 1e-12);
            }
        }
    }

    /// Unit normal of the hyperplane through `pts` by Gram–Schmidt: the
    /// component of a generic vector orthogonal to the edges.
    fn gram_schmidt_normal(pts: &[&Vec<f64>]) -> Vec<f64> {
        let d = pts[0].len();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for p in &pts[1..] {
            let mut e: Vec<f64> = p.iter().zip(pts[0]).map(|(x, y)| x - y).collect();
            for b in &basis {
                let c = dot(&e, b);
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let n = dot(&e, &e).sqrt();
            basis.push(e.into_iter().map(|x| x / n).collect());
        }
        let mut v: Vec<f64> = (0..d).map(|i| 1.0 + 0.37 * i as f64).collect();
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&v, &v).sqrt();
        v.into_iter().map(|x| x / n).collect()
    }

    #[test]
    fn hulls_agree_with_brute_force() {
        let mut rng = RandomSource::new(23, 0);
        let mut cases = 0;
        for d in 1..=3 {
            for n in d + 1..=9 {
                for _ in 0..10 {
                    let pts = random_cloud(&mut rng, d, n);
                    let hull = convex_hull_facets(&pts).unwrap();
                    let mut expected = Vec::new();
                    for_each_combination(n, d, |idx| {
                        let sub: Vec<&Vec<f64>> = idx.iter().map(|&i| &pts[i]).collect();
                        let normal = if d == 1 { vec![1.0] } else { gram_schmidt_normal(&sub) };
                        let c = dot(&normal, sub[0]);
                        let sides: Vec<f64> = pts.iter().map(|p| dot(&normal, p) - c).collect();
                        if sides.iter().all(|&s| s <= 1e-12) || sides.iter().all(|&s| s >= -1e-12) {
                            expected.push(idx.to_vec());
                        }
                        Ok(())
                    })
                    .unwrap();
                    let declared: Vec<Vec<usize>> =
                        hull.facets.iter().map(|f| f.vertices.clone()).collect();
                    assert_eq!(declared, expected);
                    for f in &hull.facets {
                        assert!(pts.iter().all(|p| dot(&f.normal, p) <= f.support + 1e-12));
                    }
                    // Ridge closure: each (d-2)-face lies in exactly two facets.
                    if d >= 2 {
                        let mut ridges = std::collections::BTreeMap::new();
                        for f in &hull.facets {
                            for skip in 0..d {
                                let ridge: Vec<usize> = f
                                    .vertices
                                    .iter()
                                    .enumerate()
                                    .filter(|&(i, _)| i != skip)
                                    .map(|(_, &v)| v)
                                    .collect();
                                *ridges.entry(ridge).or_insert(0) += 1;
                            }
                        }
                        assert!(ridges.values().all(|&c| c == 2));
                    }
                    cases += 1;
                }
            }
        }
        assert!(cases >= 200);
    }

    /// Shoelace area of the planar hull, vertices by Andrew's monotone chain.
    fn shoelace_hull_area(pts: &[Vec<f64>]) -> f64 {
        let mut p: Vec<(f64, f64)> = pts.iter().map(|v| (v[0], v[1])).collect();
        p.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
                if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
            for &q in iter {
                while hull.len() >= start + 2
                    && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0
                {
                    hull.pop();
                }
                hull.push(q);
            }
            hull.pop();
        }
        let m = hull.len();
        (0..m)
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % m]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum::<f64>()
            / 2.0
    }

    #[test]
    fn planar_area_matches_shoelace() {
        let mut rng = RandomSource::new(24, 0);
        for n in 3..=12 {
            let pts = random_cloud(&mut rng, 2, n);
            let v = polytope_volume(&pts).unwrap();
            assert!((v - shoelace_hull_area(&pts)).abs() < 1e-13);
        }
    }

    #[test]
    fn euler_relation_in_three_dimensions() {
        let mut rng = RandomSource::new(25, 0);
        for n in 4..=12 {
            let pts = random_cloud(&mut rng, 3, n);
            let hull = convex_hull_facets(&pts).unwrap();
            let mut verts: Vec<usize> = hull.facets.iter().flat_map(|f| f.vertices.clone()).collect();
            verts.sort();
            verts.dedup();
            // A simplicial 3-polytope has F = 2V - 4.
            assert_eq!(hull.len(), 2 * verts.len() - 4);
        }
    }

    fn random_rotation(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
        let mut q: Vec<Vec<f64>> = Vec::new();
        while q.len() < d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            for b in &q {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let n = dot(&v, &v).sqrt();
            q.push(v.into_iter().map(|x| x / n).collect());
        }
        q
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = RandomSource::new(26, 0);
        let mut rot_rng = ChaCha8Rng::seed_from_u64(26);
        for d in 2..=4 {
            for n in d + 1..=d + 5 {
                let pts = random_cloud(&mut rng, d, n);
                let q = random_rotation(&mut rot_rng, d);
                let rotated: Vec<Vec<f64>> =
                    pts.iter().map(|p| q.iter().map(|row| dot(row, p)).collect()).collect();
                let v0 = polytope_volume(&pts).unwrap();
                let v1 = polytope_volume(&rotated).unwrap();
                assert!((v0 - v1).abs() <= 1e-9 * v0);
                for (a, b) in [(0.0, 1.0), (1.0, 1.0), (2.5, 0.5)] {
                    let t0 = wieacker_T(&pts, a, b).unwrap();
                    let t1 = wieacker_T(&rotated, a, b).unwrap();
                    assert!((t0 - t1).abs() <= 1e-9 * t0);
                }
            }
        }
    }

    #[test]
    fn inclusion_and_ball_bounds() {
        let mut rng = RandomSource::new(27, 0);
        let mut extra = ChaCha8Rng::seed_from_u64(27);
        for d in 1..=3 {
            let mut pts = random_cloud(&mut rng, d, d + 1);
            let mut prev = polytope_volume(&pts).unwrap();
            for _ in 0..10 {
                let s = BetaPointSampler::new(d, extra.random_range(-0.9..2.0)).unwrap();
                pts.push(s.sample(&mut rng));
                let v = polytope_volume(&pts).unwrap();
                assert!(v >= prev - 1e-12);
                assert!(v <= ball_volume::<f64>(d));
                prev = v;
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        let collinear = [vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 1.0], vec![0.0, 1.0]];
        assert!(matches!(convex_hull_facets(&collinear), Err(Error::Degenerate { .. })));
        let repeated = [vec![0.1, 0.2], vec![0.1, 0.2], vec![0.7, -0.3]];
        assert!(matches!(convex_hull_facets(&repeated), Err(Error::Degenerate { .. })));
        assert!(matches!(convex_hull_facets(&[vec![0.0, 1.0]]), Err(Error::Domain { .. })));
        assert!(matches!(
            convex_hull_facets(&[vec![0.0], vec![1.0, 2.0]]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn estimates_are_reproducible() {
        let spec = PolytopeSpec::new(2, BetaVector::from_values(&[0.0f64, 1.0, -0.5, 0.0]).unwrap())
            .unwrap();
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_estimate(&spec, Functional::Volume, 35_000, 99).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.mean.to_bits(), four.mean.to_bits());
        assert_eq!(one.standard_error.to_bits(), four.standard_error.to_bits());
        assert_eq!(one.samples, 35_000);
        assert!(mc_estimate(&spec, Functional::Volume, 1, 99).is_err());
    }

    #[test]
    fn moments_merge_matches_direct() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.01).collect();
        let mut whole = Moments::EMPTY;
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::EMPTY;
        let mut b = Moments::EMPTY;
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).abs() < 1e-14);
        assert!((merged.m2 - whole.m2).abs() < 1e-10);
    }
}
