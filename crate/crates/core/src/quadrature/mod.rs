//! Gauss–Jacobi quadrature for integrals of the form
//! `∫_{-1}^{1} (1 - h²)^γ g(h) dh`, with the weight folded into the rule so
//! that exponents down to γ > -1 are integrated without endpoint trouble.
//!
//! Rules come from the Golub–Welsch eigenproblem of the Jacobi matrix. The
//! adaptive driver doubles the rule size from 16 points until two successive
//! estimates agree.
//!
//! Integrands built from beta CDFs are smooth inside (-1, 1) but carry
//! algebraic terms `(1 ∓ h)^s` at the endpoints, which cap plain Gauss–Jacobi
//! at algebraic convergence. When the caller reports such an endpoint order,
//! the integral is first pulled back through the odd polynomial map
//! `h = 2 I_{(1+t)/2}(p, p) - 1`, which has a zero of order `p - 1` in its
//! derivative at both ends. The pulled-back integrand is again of Jacobi form
//! with exponents `p(γ + 1) - 1`, and its singular terms become `(1 ∓ t)^{ps}`.

mod tridiag;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::specfun::ln_gamma;

/// Nodes and weights of a Gauss–Jacobi rule for the weight
/// `(1 - h)^alpha (1 + h)^beta` on (-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    alpha: T,
    beta: T,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> QuadratureRule<T> {
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(alpha, beta)` of the weight `(1 - h)^alpha (1 + h)^beta`.
    pub fn exponents(&self) -> (T, T) {
        (self.alpha, self.beta)
    }

    /// The common exponent γ of a symmetric rule.
    pub fn gamma(&self) -> Option<T> {
        (self.alpha == self.beta).then_some(self.alpha)
    }

    /// Σ wᵢ f(xᵢ).
    pub fn apply<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// ln of ∫_{-1}^{1} (1 - h)^alpha (1 + h)^beta dh = 2^{α+β+1} B(α + 1, β + 1).
fn ln_jacobi_mass<T: Scalar>(alpha: T, beta: T) -> T {
    let one = T::one();
    (alpha + beta + one) * T::LN_2() + ln_gamma(alpha + one) + ln_gamma(beta + one)
        - ln_gamma(alpha + beta + T::lit(2.0))
}

fn check_exponent<T: Scalar>(name: &str, x: T) -> Result<()> {
    if x.is_finite() && x > -T::one() {
        Ok(())
    } else {
        Err(Error::domain(
            "quadrature::jacobi_rule",
            format!("weight exponent {name} must be finite and > -1, got {x}"),
        ))
    }
}

/// m-point Gauss–Jacobi rule for the weight `(1 - h)^alpha (1 + h)^beta`.
pub fn jacobi_rule_asymmetric<T: Scalar>(alpha: T, beta: T, m: usize) -> Result<QuadratureRule<T>> {
    check_exponent("alpha", alpha)?;
    check_exponent("beta", beta)?;
    if m == 0 {
        return Err(Error::domain("quadrature::jacobi_rule", "rule size must be at least 1"));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let ab = alpha + beta;

    let mut diag = Vec::with_capacity(m);
    diag.push((beta - alpha) / (ab + two));
    for n in 1..m {
        let n2 = two * T::from_usize_lossy(n) + ab;
        diag.push((beta * beta - alpha * alpha) / (n2 * (n2 + two)));
    }
    let mut off = Vec::with_capacity(m.saturating_sub(1));
    for n in 1..m {
        let nf = T::from_usize_lossy(n);
        let b2 = if n == 1 {
            // The general form is 0/0 at n = 1 when α + β = -1.
            T::lit(4.0) * (one + alpha) * (one + beta) / ((two + ab).powi(2) * (T::lit(3.0) + ab))
        } else {
            let n2 = two * nf + ab;
            T::lit(4.0) * nf * (nf + alpha) * (nf + beta) * (nf + ab)
                / (n2 * n2 * (n2 + one) * (n2 - one))
        };
        off.push(b2.sqrt());
    }

    let (vals, first) = tridiag::symmetric_tridiagonal_eigen(diag, &off).map_err(|e| match e {
        Error::Convergence {
            iterations, detail, ..
        } => Error::Convergence {
            op: "quadrature::jacobi_rule",
            iterations,
            detail: format!("{detail} (m = {m}, alpha = {alpha}, beta = {beta})"),
        },
        other => other,
    })?;

    let mass = ln_jacobi_mass(alpha, beta).exp();
    let mut pairs: Vec<(T, T)> = vals
        .into_iter()
        .zip(first)
        .map(|(x, v)| (x, mass * v * v))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));

    let (mut nodes, mut weights): (Vec<T>, Vec<T>) = pairs.into_iter().unzip();
    if alpha == beta {
        symmetrize(&mut nodes, &mut weights);
    }
    Ok(QuadratureRule {
        alpha,
        beta,
        nodes,
        weights,
    })
}

/// Enforces exact mirror symmetry of a rule for an even weight.
fn symmetrize<T: Scalar>(nodes: &mut [T], weights: &mut [T]) {
    let m = nodes.len();
    let half = T::lit(0.5);
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let x = (nodes[j] - nodes[i]) * half;
        let w = (weights[i] + weights[j]) * half;
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = T::zero();
    }
}

/// m-point Gauss–Jacobi rule for the even weight `(1 - h²)^gamma`.
pub fn jacobi_rule<T: Scalar>(gamma: T, m: usize) -> Result<QuadratureRule<T>> {
    jacobi_rule_asymmetric(gamma, gamma, m)
}

/// A quadrature abscissa together with its distances to both endpoints.
///
/// The distances are produced directly by the node map, so they keep full
/// relative precision even where `h` itself rounds to ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa<T> {
    pub h: T,
    pub one_minus_h: T,
    pub one_plus_h: T,
}

impl<T: Scalar> Abscissa<T> {
    pub fn from_h(h: T) -> Self {
        Abscissa {
            h,
            one_minus_h: T::one() - h,
            one_plus_h: T::one() + h,
        }
    }

    /// The mirror point -h.
    pub fn reflected(self) -> Self {
        Abscissa {
            h: -self.h,
            one_minus_h: self.one_plus_h,
            one_plus_h: self.one_minus_h,
        }
    }
}

/// Value and error estimate of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    /// |difference| between the last two rule sizes.
    pub error_estimate: T,
    /// Size of the rule that produced `value`.
    pub points: usize,
}

/// Controls for the doubling loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions<T> {
    pub rel_tol: T,
    pub min_points: usize,
    pub max_points: usize,
}

impl<T: Scalar> Default for IntegrationOptions<T> {
    fn default() -> Self {
        IntegrationOptions {
            rel_tol: T::default_rel_tol(),
            min_points: 16,
            max_points: 2048,
        }
    }
}

impl<T: Scalar> IntegrationOptions<T> {
    pub fn with_rel_tol(rel_tol: T) -> Self {
        IntegrationOptions {
            rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(Error::domain(
                "quadrature::integrate_weighted",
                format!("rel_tol must be positive, got {}", self.rel_tol),
            ));
        }
        if self.min_points == 0 || self.max_points < self.min_points {
            return Err(Error::domain(
                "quadrature::integrate_weighted",
                format!(
                    "invalid rule size range {}..={}",
                    self.min_points, self.max_points
                ),
            ));
        }
        Ok(())
    }
}

/// Exponents `p (s + γ + 1)` at or above this converge fast enough
/// without further grading.
const GRADING_TARGET: f64 = 8.0;
const MAX_GRADING: usize = 48;

/// Grading degree for a weight exponent `gamma` and an integrand whose
/// least-smooth endpoint term is `(1 ∓ h)^s`.
pub fn grading_degree<T: Scalar>(gamma: T, endpoint_order: Option<T>) -> usize {
    let Some(s) = endpoint_order else {
        return 1;
    };
    let rate = (s + gamma + T::one()).to_f64().unwrap_or(f64::INFINITY);
    if !(rate > 0.0) {
        return MAX_GRADING;
    }
    ((GRADING_TARGET / rate).ceil() as usize).clamp(1, MAX_GRADING)
}

/// The polynomial map h = 2 I_{(1+t)/2}(p, p) - 1 with its Jacobian
/// rewritten in Jacobi form.
struct GradedMap<T> {
    p: usize,
    binom: Vec<T>,
    /// ln(4^{p-1} B(p, p))
    ln_norm: T,
}

impl<T: Scalar> GradedMap<T> {
    fn new(p: usize) -> Self {
        let n = 2 * p - 1;
        let mut binom = Vec::with_capacity(p);
        let mut c = T::one();
        // C(n, j) for j = p..=n
        for j in 0..p {
            c = c * T::from_usize_lossy(n - j) / T::from_usize_lossy(j + 1);
        }
        for j in p..=n {
            binom.push(c);
            c = c * T::from_usize_lossy(n - j) / T::from_usize_lossy(j + 1);
        }
        let pf = T::from_usize_lossy(p);
        let ln_norm =
            (pf - T::one()) * T::lit(4.0).ln() + ln_gamma(pf) + ln_gamma(pf) - ln_gamma(pf + pf);
        GradedMap { p, binom, ln_norm }
    }

    /// q(x) = I_x(p, p) / x^p, a polynomial positive on [0, 1].
    fn q(&self, x: T) -> T {
        let y = T::one() - x;
        let n = 2 * self.p - 1;
        self.binom
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let j = self.p + k;
                c * x.powi(k as i32) * y.powi((n - j) as i32)
            })
            .sum()
    }

    /// Returns `(h, W)` with (1 - h)^α (1 + h)^β dh/dt =
    /// (1 - t)^{p(α+1)-1} (1 + t)^{p(β+1)-1} W.
    fn eval(&self, t: T, alpha: T, beta: T) -> (Abscissa<T>, T) {
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let x = (T::one() - t) * half;
        let y = (T::one() + t) * half;
        let qx = self.q(x);
        let qy = self.q(y);
        let pi = self.p as i32;
        // 1 - h = 2 I_x(p, p) and 1 + h = 2 I_y(p, p)
        let one_minus_h = two * x.powi(pi) * qx;
        let one_plus_h = two * y.powi(pi) * qy;
        let h = (one_plus_h - one_minus_h) * half;
        let pf = T::from_usize_lossy(self.p);
        let ln_w = (T::one() - pf) * (alpha + beta) * T::LN_2() + alpha * qx.ln() + beta * qy.ln()
            - self.ln_norm;
        (
            Abscissa {
                h,
                one_minus_h,
                one_plus_h,
            },
            ln_w.exp(),
        )
    }
}

/// ∫_{-1}^{1} (1 - h)^alpha (1 + h)^beta g(h) dh with grading degree `p`.
fn integrate_jacobi_graded<T, G>(
    alpha: T,
    beta: T,
    p: usize,
    g: G,
    opts: &IntegrationOptions<T>,
) -> Result<Integral<T>>
where
    T: Scalar,
    G: Fn(Abscissa<T>) -> T,
{
    opts.validate()?;
    let pf = T::from_usize_lossy(p);
    let one = T::one();
    let (ra, rb) = (pf * (alpha + one) - one, pf * (beta + one) - one);
    let map = (p > 1).then(|| GradedMap::new(p));

    let estimate = |m: usize| -> Result<T> {
        let rule = jacobi_rule_asymmetric(ra, rb, m)?;
        Ok(match &map {
            None => rule.apply(|t| g(Abscissa::from_h(t))),
            Some(map) => rule.apply(|t| {
                let (h, w) = map.eval(t, alpha, beta);
                w * g(h)
            }),
        })
    };

    let floor = T::lit(1e-300).max(T::min_positive_value());
    let mut m = opts.min_points;
    let mut prev = estimate(m)?;
    while m < opts.max_points {
        m = (2 * m).min(opts.max_points);
        let cur = estimate(m)?;
        let diff = (cur - prev).abs();
        if diff <= opts.rel_tol * cur.abs().max(floor) {
            return Ok(Integral {
                value: cur,
                error_estimate: diff,
                points: m,
            });
        }
        prev = cur;
    }
    Err(Error::Convergence {
        op: "quadrature::integrate_weighted",
        iterations: m,
        detail: format!(
            "weight exponents ({alpha}, {beta}), grading {p}: last estimate {prev}"
        ),
    })
}

/// ∫_{-1}^{1} (1 - h²)^gamma g(h) dh by plain Gauss–Jacobi with doubling.
///
/// Suited to integrands smooth on the closed interval; see
/// [`integrate_weighted_with`] for integrands with algebraic endpoint terms.
pub fn integrate_weighted<T, G>(gamma: T, g: G, rel_tol: T) -> Result<Integral<T>>
where
    T: Scalar,
    G: Fn(T) -> T,
{
    integrate_weighted_with(
        gamma,
        |x: Abscissa<T>| g(x.h),
        None,
        &IntegrationOptions::with_rel_tol(rel_tol),
    )
}

/// ∫_{-1}^{1} (1 - h²)^gamma g(h) dh, where `endpoint_order` is the smallest
/// non-integer exponent `s` in the expansion of `g` at ±1 (`None` if `g`
/// is smooth there).
pub fn integrate_weighted_with<T, G>(
    gamma: T,
    g: G,
    endpoint_order: Option<T>,
    opts: &IntegrationOptions<T>,
) -> Result<Integral<T>>
where
    T: Scalar,
    G: Fn(Abscissa<T>) -> T,
{
    check_exponent("gamma", gamma)?;
    let p = grading_degree(gamma, endpoint_order);
    integrate_jacobi_graded(gamma, gamma, p, g, opts)
}

/// ∫_{-1}^{1} |h|^a (1 - h²)^gamma g(h) dh for a ≥ 0.
///
/// For even integer `a` the factor is a polynomial and is folded into the
/// integrand. Otherwise the kink at 0 is removed by folding the two halves
/// onto [0, 1] and mapping that back to [-1, 1], where |h|^a becomes a
/// Jacobi weight at the left end.
pub fn integrate_abs_power_weighted<T, G>(
    gamma: T,
    a: T,
    g: G,
    endpoint_order: Option<T>,
    opts: &IntegrationOptions<T>,
) -> Result<Integral<T>>
where
    T: Scalar,
    G: Fn(Abscissa<T>) -> T,
{
    check_exponent("gamma", gamma)?;
    if !(a >= T::zero()) || !a.is_finite() {
        return Err(Error::domain(
            "quadrature::integrate_weighted",
            format!("|h| exponent must be finite and >= 0, got {a}"),
        ));
    }
    let two = T::lit(2.0);
    let half_a = a / two;
    if half_a == half_a.round() {
        let k = half_a.to_i32().unwrap_or(i32::MAX);
        return integrate_weighted_with(
            gamma,
            |x: Abscissa<T>| x.h.powi(2 * k) * g(x),
            endpoint_order,
            opts,
        );
    }
    // h = (1 + u)/2 on [0, 1]:
    // (1-h)^γ (1+h)^γ h^a dh = (1-u)^γ (1+u)^a 2^{-γ-a-1} ((3+u)/2)^γ du
    let scale = (-(gamma + a + T::one()) * T::LN_2()).exp();
    let folded = |u: Abscissa<T>| {
        let x = Abscissa {
            h: u.one_plus_h / two,
            one_minus_h: u.one_minus_h / two,
            one_plus_h: (T::lit(3.0) + u.h) / two,
        };
        scale * x.one_plus_h.powf(gamma) * (g(x) + g(x.reflected()))
    };
    let p = grading_degree(gamma, endpoint_order);
    integrate_jacobi_graded(gamma, a, p, folded, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{beta_cdf, beta_cdf_from_ends, BetaParam};
    use statrs::function::gamma::gamma as gamma_fn;

    fn bp(x: f64) -> BetaParam<f64> {
        BetaParam::new(x).unwrap()
    }

    /// ∫(1-h²)^γ dh = √π Γ(γ+1)/Γ(γ+3/2), via statrs.
    fn weight_mass(gamma: f64) -> f64 {
        std::f64::consts::PI.sqrt() * gamma_fn(gamma + 1.0) / gamma_fn(gamma + 1.5)
    }

    #[test]
    fn small_rules() {
        let r = jacobi_rule(0.0f64, 1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);

        let r = jacobi_rule(0.0, 2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-15 && (r.nodes()[1] - x).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-15 && (r.weights()[1] - 1.0).abs() < 1e-15);

        for m in [1, 2, 3, 7, 40, 333] {
            let r = jacobi_rule(1.0, m).unwrap();
            let total: f64 = r.weights().iter().sum();
            assert!((total - 4.0 / 3.0).abs() < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn rule_shape_invariants() {
        for gamma in [-0.95, -0.5, 0.0, 0.5, 3.5, 10.0, 64.0] {
            for m in [1, 2, 5, 16, 64, 257] {
                let r = jacobi_rule(gamma, m).unwrap();
                assert_eq!(r.gamma(), Some(gamma));
                assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
                assert!(r.nodes().iter().all(|&x| -1.0 < x && x < 1.0));
                assert!(r.weights().iter().all(|&w| w > 0.0));
                let total: f64 = r.weights().iter().sum();
                let mass = weight_mass(gamma);
                assert!(((total - mass) / mass).abs() < 1e-12, "γ = {gamma}, m = {m}");
                for i in 0..m {
                    let j = m - 1 - i;
                    assert!((r.nodes()[i] + r.nodes()[j]).abs() < 1e-13);
                    assert!((r.weights()[i] - r.weights()[j]).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn asymmetric_rule_reproduces_moments() {
        // ∫(1-x)^α(1+x)^β x^k dx; reference by recurrence on the monomial
        // moments of the Beta law on [0, 1], mapped to [-1, 1].
        for (alpha, beta) in [(-0.5, 0.7), (2.3, -0.8), (0.0, 5.0), (12.0, 0.25)] {
            let m = 8;
            let r = jacobi_rule_asymmetric(alpha, beta, m).unwrap();
            let mass = 2f64.powf(alpha + beta + 1.0) * gamma_fn(alpha + 1.0) * gamma_fn(beta + 1.0)
                / gamma_fn(alpha + beta + 2.0);
            // x = 2y - 1, y ~ Beta(β+1, α+1): E[y^j] = Π_{i<j} (β+1+i)/(α+β+2+i)
            let mut ey = vec![1.0];
            for i in 0..(2 * m) {
                let i = i as f64;
                let last = *ey.last().unwrap();
                ey.push(last * (beta + 1.0 + i) / (alpha + beta + 2.0 + i));
            }
            for k in 0..(2 * m) {
                // E[(2y-1)^k] by the binomial expansion
                // The alternating sum cancels; scale the tolerance by Σ|terms|.
                let mut ex = 0.0;
                let mut magnitude = 0.0;
                let mut c = 1.0;
                for (j, &e) in ey.iter().enumerate().take(k + 1) {
                    let term = c * 2f64.powi(j as i32) * (-1f64).powi((k - j) as i32) * e;
                    ex += term;
                    magnitude += term.abs();
                    c = c * (k - j) as f64 / (j + 1) as f64;
                }
                let exact = mass * ex;
                let got = r.apply(|x| x.powi(k as i32));
                let tol = 2e-13 * mass * magnitude.max(1.0);
                assert!((got - exact).abs() < tol, "α={alpha} β={beta} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn rule_domain_errors() {
        assert!(jacobi_rule(-1.0, 4).is_err());
        assert!(jacobi_rule(f64::NAN, 4).is_err());
        assert!(jacobi_rule(0.5, 0).is_err());
        assert!(jacobi_rule_asymmetric(0.0, -1.2, 4).is_err());
    }

    #[test]
    fn integrate_examples() {
        let r = integrate_weighted(1.0f64, |_| 1.0, 1e-11).unwrap();
        assert!((r.value - 4.0 / 3.0).abs() < 1e-14);
        let r = integrate_weighted(0.5, |_| 1.0, 1e-11).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        let r = integrate_weighted(0.0, |h| beta_cdf(bp(0.0), h), 1e-11).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(integrate_weighted(0.0, |_| 1.0, 0.0).is_err());
    }

    #[test]
    fn polynomial_integrands_are_exact() {
        // Random degree-9 polynomials against Σ c_k M_k(γ) with
        // M_{2k} = M_{2k-2} (2k-1)/(2k+2γ+1) and odd moments zero.
        let coeff_sets = [
            [0.3, -1.2, 0.7, 2.0, -0.4, 0.9, -1.7, 0.05, 1.1, -0.6],
            [1.0, 0.0, -3.0, 0.5, 0.25, -0.125, 2.5, 1.5, -0.75, 0.2],
        ];
        for gamma in [-0.5, 0.0, 0.5, 1.0, 3.5, 10.0] {
            let mut moments = vec![0.0; 10];
            moments[0] = weight_mass(gamma);
            for k in (2..10).step_by(2) {
                moments[k] = moments[k - 2] * (k as f64 - 1.0) / (k as f64 + 2.0 * gamma + 1.0);
            }
            for coeffs in &coeff_sets {
                let exact: f64 = coeffs.iter().zip(&moments).map(|(c, m)| c * m).sum();
                let poly = |h: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * h + c);
                let got = integrate_weighted(gamma, poly, 1e-11).unwrap().value;
                assert!(((got - exact) / exact).abs() < 1e-11, "γ = {gamma}");
            }
        }
    }

    // Reference values: mpmath tanh-sinh / substituted Gauss–Legendre at
    // 30-45 digits, with the endpoint distance carried exactly.
    const I1: f64 = 1.183_592_155_469_255_300_9;
    const I2: f64 = 0.338_827_983_224_443_745_25;
    const I3: f64 = 0.805_089_940_569_898_230_23;
    const I4: f64 = 0.714_021_501_961_212_278_55;

    #[test]
    fn endpoint_singular_integrands() {
        let opts = IntegrationOptions::default();
        // ∫(1-h²)^{-0.8} F_{-0.9}(h)³ dh; F_{-0.9} ~ (1+h)^{0.1} at -1.
        let f = |b: f64, x: Abscissa<f64>| beta_cdf_from_ends(bp(b), x.one_plus_h, x.one_minus_h);
        let r = integrate_weighted_with(-0.8, |x| f(-0.9, x).powi(3), Some(0.1), &opts).unwrap();
        assert!(((r.value - I1) / I1).abs() < 1e-10, "{} vs {I1}", r.value);

        let r = integrate_weighted_with(
            -0.5,
            |x| f(-0.5, x).powi(2) * f(-0.75, x),
            Some(0.25),
            &opts,
        )
        .unwrap();
        assert!(((r.value - I4) / I4).abs() < 1e-10, "{} vs {I4}", r.value);
    }

    #[test]
    fn abs_power_integrands() {
        let opts = IntegrationOptions::default();
        let f = |b: f64, x: Abscissa<f64>| beta_cdf_from_ends(bp(b), x.one_plus_h, x.one_minus_h);
        let r = integrate_abs_power_weighted(
            0.3,
            0.7,
            |x| f(0.25, x).powi(2),
            Some(1.25),
            &opts,
        )
        .unwrap();
        assert!(((r.value - I2) / I2).abs() < 1e-10, "{} vs {I2}", r.value);

        let r = integrate_abs_power_weighted(
            -0.5,
            1.0,
            |x| f(-0.5, x) * f(1.5, x),
            Some(0.5),
            &opts,
        )
        .unwrap();
        assert!(((r.value - I3) / I3).abs() < 1e-10, "{} vs {I3}", r.value);

        // even a: ∫(1-h²) h² dh = 4/15
        let r = integrate_abs_power_weighted(1.0, 2.0, |_| 1.0, None, &opts).unwrap();
        assert!((r.value - 4.0 / 15.0).abs() < 1e-14);
        // odd a on a constant: ∫(1-h²)|h| dh = 1/2
        let r = integrate_abs_power_weighted(1.0, 1.0, |_| 1.0, None, &opts).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        assert!(integrate_abs_power_weighted(1.0, -0.5, |_| 1.0, None, &opts).is_err());
    }

    #[test]
    fn grading_degree_choice() {
        assert_eq!(grading_degree(0.3, None), 1);
        assert_eq!(grading_degree(5.0, Some(4.5)), 1);
        assert_eq!(grading_degree(-0.8, Some(0.1)), 27);
        assert_eq!(grading_degree(-0.999, Some(0.0001)), MAX_GRADING);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = IntegrationOptions {
            rel_tol: 1e-14,
            min_points: 4,
            max_points: 16,
        };
        let err = integrate_weighted_with(-0.9, |x: Abscissa<f64>| x.one_minus_h.powf(0.05), None, &opts)
            .unwrap_err();
        assert!(matches!(err, Error::Convergence { op: "quadrature::integrate_weighted", .. }));
    }

    #[test]
    fn single_precision_rule() {
        let r = jacobi_rule(1.0f32, 8).unwrap();
        let total: f32 = r.weights().iter().sum();
        assert!((total - 4.0 / 3.0).abs() < 1e-5);
        let v = integrate_weighted(0.5f32, |_| 1.0, 1e-5).unwrap().value;
        assert!((v - std::f32::consts::FRAC_PI_2).abs() < 1e-5);
    }
}
