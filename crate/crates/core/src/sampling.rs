//! Seeded sampling of beta-distributed points in the unit ball, the
//! sphere-uniform limit, and the empirical checks on projections and
//! half-spaces.
//!
//! A point with density `f_{d,β}` is `√S · U`, where `U` is uniform on the
//! sphere (a normalized Gaussian vector) and `S ~ Beta(d/2, β + 1)` is drawn
//! as `G₁ / (G₁ + G₂)` from two independent gamma variates.
//!
//! Sampling runs in `f64`; the generic entry points convert at the end.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::closedform::PolytopeSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::specfun::BetaParam;

/// A ChaCha8 stream identified by `(seed, stream)`.
///
/// Equal pairs always yield the same sequence. Parallel work uses one
/// stream per batch so results do not depend on scheduling.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn gaussian_direction<R: RngCore + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = StandardNormal.sample(rng);
            norm2 += *x * *x;
        }
        if norm2 > 0.0 {
            let inv = norm2.sqrt().recip();
            out.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

/// Reusable sampler for `f_{d,β}` (double precision).
#[derive(Debug, Clone, Copy)]
pub struct BetaPointSampler {
    d: usize,
    radial: Gamma<f64>,
    rest: Gamma<f64>,
}

impl BetaPointSampler {
    pub fn new(d: usize, beta: f64) -> Result<Self> {
        const OP: &str = "sampling::sample_beta_point";
        if d == 0 {
            return Err(Error::domain(OP, "dimension must be at least 1"));
        }
        let beta = BetaParam::new(beta)?.value();
        let shape = |k: f64| {
            Gamma::new(k, 1.0).map_err(|e| Error::domain(OP, format!("gamma shape {k}: {e}")))
        };
        Ok(BetaPointSampler {
            d,
            radial: shape(d as f64 / 2.0)?,
            rest: shape(beta + 1.0)?,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Writes one point into `out`, which must have length `d`.
    pub fn sample_into<R: RngCore + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.d);
        let s = loop {
            let g1 = self.radial.sample(rng);
            let g2 = self.rest.sample(rng);
            let total = g1 + g2;
            if total > 0.0 {
                break g1 / total;
            }
        };
        gaussian_direction(rng, out);
        let r = s.sqrt();
        out.iter_mut().for_each(|x| *x *= r);
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        self.sample_into(rng, &mut out);
        out
    }
}

fn to_scalar<T: Scalar>(v: Vec<f64>) -> Vec<T> {
    v.into_iter().map(T::lit).collect()
}

/// One point with density `f_{d,β}` on the unit ball.
pub fn sample_beta_point<T: Scalar>(
    d: usize,
    beta: BetaParam<T>,
    rng: &mut RandomSource,
) -> Result<Vec<T>> {
    let b = beta.value().to_f64().unwrap_or(f64::NAN);
    Ok(to_scalar(BetaPointSampler::new(d, b)?.sample(rng)))
}

/// A uniform point on the unit sphere S^{d-1}.
pub fn sample_sphere_point<T: Scalar>(d: usize, rng: &mut RandomSource) -> Result<Vec<T>> {
    if d == 0 {
        return Err(Error::domain(
            "sampling::sample_sphere_point",
            "dimension must be at least 1",
        ));
    }
    let mut out = vec![0.0; d];
    gaussian_direction(rng, &mut out);
    Ok(to_scalar(out))
}

/// Orthogonal projection onto the span of the first `k` coordinate axes.
pub fn project_first_k<T: Scalar>(x: &[T], k: usize) -> Result<Vec<T>> {
    if k == 0 || k > x.len() {
        return Err(Error::domain(
            "sampling::project_first_k",
            format!("k must lie in 1..={}, got {k}", x.len()),
        ));
    }
    Ok(x[..k].to_vec())
}

/// Fraction of `count` draws from `f_{d,β}` whose last coordinate exceeds `h`.
pub fn empirical_halfspace_prob<T: Scalar>(
    d: usize,
    beta: BetaParam<T>,
    h: T,
    count: usize,
    rng: &mut RandomSource,
) -> Result<T> {
    if count == 0 {
        return Err(Error::domain(
            "sampling::empirical_halfspace_prob",
            "sample count must be at least 1",
        ));
    }
    let sampler = BetaPointSampler::new(d, beta.value().to_f64().unwrap_or(f64::NAN))?;
    let h = h.to_f64().unwrap_or(f64::NAN);
    let mut point = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..count {
        sampler.sample_into(rng, &mut point);
        if point[d - 1] > h {
            hits += 1;
        }
    }
    Ok(T::from_usize_lossy(hits) / T::from_usize_lossy(count))
}

/// Independent draws of the point tuple `(X_1, …, X_n)` of a polytope spec.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch<T> {
    pub spec: PolytopeSpec<T>,
    pub seed: u64,
    pub stream: u64,
    /// `draws[j][i]` is point `i` of draw `j`.
    pub draws: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> SampleBatch<T> {
    pub fn generate(spec: &PolytopeSpec<T>, count: usize, rng: &mut RandomSource) -> Result<Self> {
        let samplers = point_samplers(spec)?;
        let (seed, stream) = (rng.seed(), rng.stream());
        let draws = (0..count)
            .map(|_| {
                samplers
                    .iter()
                    .map(|s| to_scalar(s.sample(rng)))
                    .collect()
            })
            .collect();
        Ok(SampleBatch {
            spec: spec.clone(),
            seed,
            stream,
            draws,
        })
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }
}

/// One sampler per point of `spec`, in order.
pub fn point_samplers<T: Scalar>(spec: &PolytopeSpec<T>) -> Result<Vec<BetaPointSampler>> {
    spec.betas()
        .iter()
        .map(|b| BetaPointSampler::new(spec.dimension(), b.value().to_f64().unwrap_or(f64::NAN)))
        .collect()
}

/// Two-sided one-sample Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

/// KS statistic of `samples` against the continuous CDF `cdf`, with the
/// asymptotic p-value (Stephens' small-sample correction).
pub fn ks_test<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> KsOutcome {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut stat: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        stat = stat.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let sqrt_n = n.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * stat;
    KsOutcome {
        statistic: stat,
        p_value: kolmogorov_survival(lambda),
    }
}

/// P(K > λ) for the Kolmogorov distribution.
fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
