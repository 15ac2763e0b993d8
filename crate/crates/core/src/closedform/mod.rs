//! Closed-form expectations for convex hulls of independent beta points:
//! simplex volume moments, the expected volume, the expected facet
//! functional `T_{a,b}` and the consistency relations between them.
//!
//! Every evaluator reduces to a sum over index subsets of Γ-products times
//! an integral ∫(1 - h²)^γ Π F(h) dh. Subsets are grouped by the β values
//! they involve ([`enumerate_subsets_grouped`]), the group terms are
//! evaluated in parallel, and the reduction runs in canonical group order so
//! the result does not depend on the thread count.

mod subsets;

pub use subsets::{enumerate_subsets_grouped, SubsetGroup};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_abs_power_weighted, integrate_weighted_with, Abscissa, IntegrationOptions,
};
use crate::scalar::Scalar;
use crate::specfun::{beta_cdf_from_ends, ln_ball_volume, ln_beta_norm_const, ln_gamma, BetaParam};

/// Per-point shape parameters `(β_1, …, β_n)`, n ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaVector<T>(Vec<BetaParam<T>>);

impl<T: Scalar> BetaVector<T> {
    pub fn new(betas: Vec<BetaParam<T>>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::domain(
                "closedform::BetaVector",
                "at least one beta is required",
            ));
        }
        Ok(BetaVector(betas))
    }

    pub fn from_values(values: &[T]) -> Result<Self> {
        let betas = values
            .iter()
            .map(|&v| BetaParam::new(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(betas)
    }

    /// `n` copies of `beta`.
    pub fn equal(beta: BetaParam<T>, n: usize) -> Result<Self> {
        Self::new(vec![beta; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the usual `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BetaParam<T>> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[BetaParam<T>] {
        &self.0
    }

    pub fn values(&self) -> Vec<T> {
        self.0.iter().map(|b| b.value()).collect()
    }

    /// Every β moved by `delta`; fails if any result leaves (-1, ∞).
    pub fn shifted(&self, delta: T) -> Result<Self> {
        let betas = self
            .0
            .iter()
            .map(|b| b.shifted(delta))
            .collect::<Result<Vec<_>>>()?;
        Ok(BetaVector(betas))
    }

    /// A copy with `beta` appended.
    pub fn with_appended(&self, beta: BetaParam<T>) -> Self {
        let mut betas = self.0.clone();
        betas.push(beta);
        BetaVector(betas)
    }

    fn sum(&self) -> T {
        self.0.iter().map(|b| b.value()).sum()
    }
}

/// The random polytope `conv(X_1, …, X_n)` in R^d with `X_i ~ f_{d,β_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeSpec<T> {
    d: usize,
    betas: BetaVector<T>,
}

impl<T: Scalar> PolytopeSpec<T> {
    pub fn new(d: usize, betas: BetaVector<T>) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain(
                "closedform::PolytopeSpec",
                "dimension must be at least 1",
            ));
        }
        Ok(PolytopeSpec { d, betas })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn betas(&self) -> &BetaVector<T> {
        &self.betas
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.betas.len()
    }
}

/// Exponents of `T_{a,b} = Σ_F dist(0, aff F)^a Vol_{d-1}(F)^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WieackerParams<T> {
    a: T,
    b: T,
}

impl<T: Scalar> WieackerParams<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(Error::domain(
                    "closedform::WieackerParams",
                    format!("{name} must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(WieackerParams { a, b })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }
}

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Integration controls and the cap on the number of subset groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions<T> {
    pub integration: IntegrationOptions<T>,
    pub budget: u128,
}

impl<T: Scalar> Default for EvalOptions<T> {
    fn default() -> Self {
        EvalOptions {
            integration: IntegrationOptions::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl<T: Scalar> EvalOptions<T> {
    pub fn with_rel_tol(rel_tol: T) -> Self {
        EvalOptions {
            integration: IntegrationOptions::with_rel_tol(rel_tol),
            ..Self::default()
        }
    }
}

/// Result of a closed-form evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T> {
    pub value: T,
    /// Propagated quadrature error estimate (absolute).
    pub error_estimate: T,
    /// Number of subset groups summed.
    pub term_count: usize,
    /// Set when a moment order outside the integers was used.
    pub extrapolated: bool,
}

fn check_moment_order<T: Scalar>(op: &'static str, k: T) -> Result<()> {
    if k.is_finite() && k >= T::zero() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("moment order must be finite and >= 0, got {k}")))
    }
}

/// ln E Vol_{n-1}(conv(X_1, …, X_n))^k for `X_i ~ f_{n-1,β_i}` in R^{n-1}.
pub(crate) fn ln_miles_moment<T: Scalar>(betas: &[BetaParam<T>], k: T) -> T {
    let n = betas.len();
    if n <= 1 {
        return T::zero();
    }
    let half = T::lit(0.5);
    let one = T::one();
    let nf = T::from_usize_lossy(n);
    let m = nf - one;
    let sum: T = betas.iter().map(|b| b.value()).sum();
    let ln_fact = ln_gamma(nf);
    let mut acc = -k * ln_fact
        + ln_gamma(nf * (m + k) * half + sum + one)
        - ln_gamma(m * (nf + k) * half + sum + one);
    for j in 1..n {
        let jf = T::from_usize_lossy(j);
        acc = acc + ln_gamma((jf + k) * half) - ln_gamma(jf * half);
    }
    for b in betas {
        let beta = b.value();
        acc = acc + ln_gamma(m * half + beta + one) - ln_gamma((m + k) * half + beta + one);
    }
    acc
}

/// E Vol_{n-1}^k of the simplex spanned by n independent points with
/// `X_i ~ f_{n-1,β_i}`. Real `k ≥ 0` is accepted; the formula is the
/// analytic continuation from integer orders. Returns 1 for n = 1.
pub fn miles_moment<T: Scalar>(betas: &BetaVector<T>, k: T) -> Result<T> {
    check_moment_order("closedform::miles_moment", k)?;
    Ok(ln_miles_moment(betas.as_slice(), k).exp())
}

/// Shifted parameter `β + (d - 1)/2` of the one-dimensional marginal CDF
/// that appears in the integrands.
fn marginal_param<T: Scalar>(beta: BetaParam<T>, d: usize) -> BetaParam<T> {
    let shift = T::from_usize_lossy(d - 1) * T::lit(0.5);
    beta.shifted(shift).expect("a nonnegative shift keeps beta > -1")
}

/// Product Π F^count over a complement, with the smallest non-integer
/// endpoint exponent of the product (F_c behaves like (1 ± h)^{c+1}).
struct CdfProduct<T> {
    factors: Vec<(BetaParam<T>, i32)>,
    endpoint_order: Option<T>,
}

impl<T: Scalar> CdfProduct<T> {
    fn new(complement: &[(BetaParam<T>, usize)], d: usize) -> Self {
        let mut endpoint_order: Option<T> = None;
        let factors = complement
            .iter()
            .map(|&(b, c)| {
                let shifted = marginal_param(b, d);
                let s = shifted.value() + T::one();
                if s != s.round() {
                    endpoint_order = Some(endpoint_order.map_or(s, |o| o.min(s)));
                }
                (shifted, i32::try_from(c).unwrap_or(i32::MAX))
            })
            .collect();
        CdfProduct {
            factors,
            endpoint_order,
        }
    }

    fn eval(&self, x: Abscissa<T>) -> T {
        self.factors.iter().fold(T::one(), |acc, &(b, c)| {
            acc * beta_cdf_from_ends(b, x.one_plus_h, x.one_minus_h).powi(c)
        })
    }
}

fn multiplicity_as<T: Scalar>(m: u128) -> T {
    T::from_u128(m).unwrap_or_else(T::infinity)
}

/// Evaluates group terms in parallel and reduces them in group order.
/// Each term returns `(value, absolute error)`.
fn sum_groups<T, F>(groups: &[SubsetGroup<T>], term: F) -> Result<Evaluation<T>>
where
    T: Scalar,
    F: Fn(&SubsetGroup<T>) -> Result<(T, T)> + Sync,
{
    let terms: Vec<Result<(T, T)>> = groups.par_iter().map(&term).collect();
    let mut value = T::zero();
    let mut error_estimate = T::zero();
    for t in terms {
        let (v, e) = t?;
        value = value + v;
        error_estimate = error_estimate + e.abs();
    }
    Ok(Evaluation {
        value,
        error_estimate,
        term_count: groups.len(),
        extrapolated: false,
    })
}

fn volume_term<T: Scalar>(d: usize, g: &SubsetGroup<T>, opts: &EvalOptions<T>) -> Result<(T, T)> {
    let half = T::lit(0.5);
    let df = T::from_usize_lossy(d);
    let sum = g.selected_sum();
    let lin = (df + T::one()).powi(2) * half + sum;
    let ln_ratio: T = g
        .selected
        .iter()
        .map(|&(b, c)| {
            let beta = b.value();
            T::from_usize_lossy(c)
                * (ln_gamma((df + T::lit(2.0)) * half + beta)
                    - ln_gamma((df + T::lit(3.0)) * half + beta))
        })
        .sum();
    let ln_pref = ln_ball_volume::<T>(d)
        - (df + T::one()) * half * T::PI().ln()
        - df * T::LN_2();
    let gamma = sum + (df * df + T::lit(2.0) * df - T::one()) * half;
    let product = CdfProduct::new(&g.complement, d);
    let integral = integrate_weighted_with(
        gamma,
        |x| product.eval(x),
        product.endpoint_order,
        &opts.integration,
    )?;
    let coeff = multiplicity_as::<T>(g.multiplicity) * lin * (ln_pref + ln_ratio).exp();
    Ok((coeff * integral.value, coeff * integral.error_estimate))
}

fn require_points(op: &'static str, n: usize, needed: usize, d: usize) -> Result<()> {
    if n < needed {
        return Err(Error::domain(
            op,
            format!("{needed} points are needed in dimension {d}, got {n}"),
        ));
    }
    Ok(())
}

/// E Vol_d of the random polytope, as a sum over (d+1)-subsets of the
/// points of Γ-products times a one-dimensional integral.
pub fn expected_volume<T: Scalar>(spec: &PolytopeSpec<T>) -> Result<Evaluation<T>> {
    expected_volume_with(spec, &EvalOptions::default())
}

pub fn expected_volume_with<T: Scalar>(
    spec: &PolytopeSpec<T>,
    opts: &EvalOptions<T>,
) -> Result<Evaluation<T>> {
    let d = spec.d;
    require_points("closedform::expected_volume", spec.n(), d + 1, d)?;
    let groups = enumerate_subsets_grouped(&spec.betas, d + 1, opts.budget)?;
    sum_groups(&groups, |g| volume_term(d, g, opts))
}

/// E Vol_d for n points sharing one β, by the single-term formula that the
/// general sum collapses to.
pub fn ktt_equal_beta<T: Scalar>(d: usize, n: usize, beta: BetaParam<T>) -> Result<Evaluation<T>> {
    ktt_equal_beta_with(d, n, beta, &EvalOptions::default())
}

pub fn ktt_equal_beta_with<T: Scalar>(
    d: usize,
    n: usize,
    beta: BetaParam<T>,
    opts: &EvalOptions<T>,
) -> Result<Evaluation<T>> {
    if d == 0 {
        return Err(Error::domain(
            "closedform::ktt_equal_beta",
            "dimension must be at least 1",
        ));
    }
    require_points("closedform::ktt_equal_beta", n, d + 1, d)?;
    let half = T::lit(0.5);
    let one = T::one();
    let two = T::lit(2.0);
    let df = T::from_usize_lossy(d);
    let dp1 = df + one;
    let b = beta.value();
    let ln_binom = ln_gamma(T::from_usize_lossy(n + 1))
        - ln_gamma(T::from_usize_lossy(d + 2))
        - ln_gamma(T::from_usize_lossy(n - d));
    let ln_coeff = dp1.ln() + ln_ball_volume::<T>(d)
        - dp1 * half * T::PI().ln()
        - df * T::LN_2()
        + ln_binom
        + dp1 * (ln_gamma((df + two) * half + b) - ln_gamma((df + T::lit(3.0)) * half + b));
    let lin = dp1 * half + b;
    let gamma = dp1 * b + (df * df + two * df - one) * half;
    let complement: Vec<(BetaParam<T>, usize)> = if n > d + 1 {
        vec![(beta, n - d - 1)]
    } else {
        Vec::new()
    };
    let product = CdfProduct::new(&complement, d);
    let integral = integrate_weighted_with(
        gamma,
        |x| product.eval(x),
        product.endpoint_order,
        &opts.integration,
    )?;
    let coeff = lin * ln_coeff.exp();
    Ok(Evaluation {
        value: coeff * integral.value,
        error_estimate: coeff * integral.error_estimate,
        term_count: 1,
        extrapolated: false,
    })
}

fn wieacker_term<T: Scalar>(
    d: usize,
    params: WieackerParams<T>,
    g: &SubsetGroup<T>,
    opts: &EvalOptions<T>,
) -> Result<(T, T)> {
    let half = T::lit(0.5);
    let one = T::one();
    let df = T::from_usize_lossy(d);
    let selected = g.selected_values();
    let ln_ratio: T = g
        .selected
        .iter()
        .map(|&(b, c)| {
            T::from_usize_lossy(c) * (ln_beta_norm_const(d, b) - ln_beta_norm_const(d - 1, b))
        })
        .sum();
    let ln_pref = ln_gamma(df + one) + ln_ball_volume::<T>(d);
    let ln_moment = ln_miles_moment(&selected, params.b + one);
    let gamma = g.selected_sum() + (df - one) * (df + params.b + one) * half;
    let product = CdfProduct::new(&g.complement, d);
    let integral = integrate_abs_power_weighted(
        gamma,
        params.a,
        |x| product.eval(x),
        product.endpoint_order,
        &opts.integration,
    )?;
    let coeff = multiplicity_as::<T>(g.multiplicity) * (ln_pref + ln_ratio + ln_moment).exp();
    Ok((coeff * integral.value, coeff * integral.error_estimate))
}

/// E T_{a,b}: the expected sum over facets of
/// `dist(0, aff F)^a · Vol_{d-1}(F)^b`, as a sum over d-subsets.
///
/// For non-integer `b` the simplex moment of order `b + 1` is the analytic
/// continuation and the result is marked `extrapolated`.
pub fn expected_wieacker<T: Scalar>(
    spec: &PolytopeSpec<T>,
    params: WieackerParams<T>,
) -> Result<Evaluation<T>> {
    expected_wieacker_with(spec, params, &EvalOptions::default())
}

pub fn expected_wieacker_with<T: Scalar>(
    spec: &PolytopeSpec<T>,
    params: WieackerParams<T>,
    opts: &EvalOptions<T>,
) -> Result<Evaluation<T>> {
    let d = spec.d;
    require_points("closedform::expected_wieacker", spec.n(), d, d)?;
    let groups = enumerate_subsets_grouped(&spec.betas, d, opts.budget)?;
    let mut eval = sum_groups(&groups, |g| wieacker_term(d, params, g, opts))?;
    eval.extrapolated = params.b != params.b.round();
    Ok(eval)
}

/// Integral of `Π f_{d,β_i}(x_i) · Vol_{d-1}(x_1, …, x_d)^k` over d-tuples
/// of points in an affine hyperplane at distance `h` from the origin.
/// `betas` must have length `d`.
pub fn lemma_section_value<T: Scalar>(
    d: usize,
    betas: &BetaVector<T>,
    k: T,
    h: T,
) -> Result<T> {
    const OP: &str = "closedform::lemma_section_value";
    if d == 0 || betas.len() != d {
        return Err(Error::domain(
            OP,
            format!("need exactly d >= 1 betas, got d = {d} and {}", betas.len()),
        ));
    }
    check_moment_order(OP, k)?;
    if !(h.abs() < T::one()) {
        return Err(Error::domain(OP, format!("|h| must be < 1, got {h}")));
    }
    let df = T::from_usize_lossy(d);
    let ln_ratio: T = betas
        .iter()
        .map(|&b| ln_beta_norm_const(d, b) - ln_beta_norm_const(d - 1, b))
        .sum();
    let exponent = betas.sum() + (df - T::one()) * (k + df) * T::lit(0.5);
    let ln_one_minus_h2 = (-h * h).ln_1p();
    Ok((ln_ratio + exponent * ln_one_minus_h2 + ln_miles_moment(betas.as_slice(), k)).exp())
}

/// Both sides of the relation
/// `E Vol_d(P^β) = κ_d / ((d+1) κ_{d+1}) · E T_{0,1}(P^{β-1/2} in R^{d+1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KubotaCheck<T> {
    pub lhs: Evaluation<T>,
    pub rhs: Evaluation<T>,
}

impl<T: Scalar> KubotaCheck<T> {
    pub fn relative_difference(&self) -> T {
        (self.lhs.value - self.rhs.value).abs() / self.lhs.value.abs()
    }
}

pub fn kubota_cross_check<T: Scalar>(spec: &PolytopeSpec<T>) -> Result<KubotaCheck<T>> {
    kubota_cross_check_with(spec, &EvalOptions::default())
}

pub fn kubota_cross_check_with<T: Scalar>(
    spec: &PolytopeSpec<T>,
    opts: &EvalOptions<T>,
) -> Result<KubotaCheck<T>> {
    let half = T::lit(0.5);
    if let Some(b) = spec.betas.iter().find(|b| b.value() <= -half) {
        return Err(Error::domain(
            "closedform::kubota_cross_check",
            format!("every beta must exceed -1/2, got {}", b.value()),
        ));
    }
    let d = spec.d;
    let lhs = expected_volume_with(spec, opts)?;
    let lifted = PolytopeSpec::new(d + 1, spec.betas.shifted(-half)?)?;
    let t = expected_wieacker_with(&lifted, WieackerParams::new(T::zero(), T::one())?, opts)?;
    let scale = (ln_ball_volume::<T>(d)
        - T::from_usize_lossy(d + 1).ln()
        - ln_ball_volume::<T>(d + 1))
    .exp();
    let rhs = Evaluation {
        value: scale * t.value,
        error_estimate: scale * t.error_estimate,
        ..t
    };
    Ok(KubotaCheck { lhs, rhs })
}
