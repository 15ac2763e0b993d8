//! Special functions: log-gamma, the regularized incomplete beta function,
//! the normalizing constants of the beta densities on the ball, the
//! one-dimensional beta CDF and unit-ball volumes.
//!
//! All gamma ratios elsewhere in the crate are formed as sums of
//! [`log_gamma`] values and exponentiated once, so none of these routines
//! ever evaluates Γ directly.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shape exponent of the density `c_{d,β} (1 - |x|²)^β` on the unit ball.
///
/// Always strictly greater than -1. The sphere-uniform limit β → -1 is not a
/// density and is handled by [`crate::sampling::sample_sphere_point`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BetaParam<T>(T);

impl<T: Scalar> BetaParam<T> {
    pub fn new(value: T) -> Result<Self> {
        if value.is_finite() && value > -T::one() {
            // Collapse -0.0 so that equal parameters have equal bits.
            Ok(BetaParam(value + T::zero()))
        } else {
            Err(Error::domain(
                "specfun::BetaParam",
                format!("beta must be finite and > -1, got {value}"),
            ))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// `β + delta`, validated again.
    pub fn shifted(self, delta: T) -> Result<Self> {
        Self::new(self.0 + delta)
    }
}

// (ζ(k) - 1) for k = 2..=31.
const ZETA_MINUS_ONE: [f64; 30] = [
    6.449_340_668_482_264_4e-1,
    2.020_569_031_595_942_9e-1,
    8.232_323_371_113_819_2e-2,
    3.692_775_514_336_992_6e-2,
    1.734_306_198_444_913_9e-2,
    8.349_277_381_922_826_8e-3,
    4.077_356_197_944_339_4e-3,
    2.008_392_826_082_214_4e-3,
    9.945_751_278_180_853_4e-4,
    4.941_886_041_194_645_6e-4,
    2.460_865_533_080_483_0e-4,
    1.227_133_475_784_891_5e-4,
    6.124_813_505_870_483_0e-5,
    3.058_823_630_702_049_4e-5,
    1.528_225_940_865_187_2e-5,
    7.637_197_637_899_762_3e-6,
    3.817_293_264_999_839_9e-6,
    1.908_212_716_553_938_9e-6,
    9.539_620_338_727_961_1e-7,
    4.769_329_867_878_064_6e-7,
    2.384_505_027_277_329_9e-7,
    1.192_199_259_653_110_7e-7,
    5.960_818_905_125_947_9e-8,
    2.980_350_351_465_228_0e-8,
    1.490_155_482_836_504_1e-8,
    7.450_711_789_835_429_5e-9,
    3.725_334_024_788_457_1e-9,
    1.862_659_723_513_049_0e-9,
    9.313_274_324_196_681_8e-10,
    4.656_629_065_033_784_1e-10,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// B_{2k} / (2k (2k - 1)) for the Stirling tail.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(2 + z) for |z| ≤ 1/2, from the Taylor series about 2.
fn ln_gamma_2p<T: Scalar>(z: T) -> T {
    let mut acc = T::zero();
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let sign = if (i + 2) % 2 == 0 { 1.0 } else { -1.0 };
        acc = (acc + T::lit(sign * zm1 / k)) * z;
    }
    z * (T::lit(1.0 - EULER_GAMMA) + acc)
}

/// ln Γ(x) for x > 0 without a domain check.
pub(crate) fn ln_gamma<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    let one = T::one();
    let two = T::lit(2.0);
    if x < half {
        ln_gamma_2p(x) - x.ln_1p() - x.ln()
    } else if x <= T::lit(1.5) {
        let z = x - one;
        ln_gamma_2p(z) - z.ln_1p()
    } else if x <= T::lit(2.5) {
        ln_gamma_2p(x - two)
    } else if x < T::lit(10.0) {
        let mut y = x;
        let mut prod = one;
        while y > T::lit(2.5) {
            y = y - one;
            prod = prod * y;
        }
        ln_gamma_2p(y - two) + prod.ln()
    } else {
        (x - half) * x.ln() - x + T::lit(0.5 * (2.0 * std::f64::consts::PI).ln()) + stirling_tail(x)
    }
}

/// Natural logarithm of the gamma function for positive arguments.
pub fn log_gamma<T: Scalar>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(
            "specfun::log_gamma",
            format!("x must be positive and finite, got {x}"),
        ));
    }
    Ok(ln_gamma(x))
}

fn stirling_tail<T: Scalar>(x: T) -> T {
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut tail = T::zero();
    for c in STIRLING.iter().rev() {
        tail = tail * inv2 + T::lit(*c);
    }
    tail * inv
}

/// ln B(a, b). When the larger argument is big, ln Γ(large) - ln Γ(small + large)
/// is formed directly from the Stirling expansion instead of as a difference
/// of two large logarithms.
pub(crate) fn ln_beta<T: Scalar>(a: T, b: T) -> T {
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    if large < T::lit(10.0) {
        return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    }
    let sum = small + large;
    let gamma_ratio = -small * large.ln() - (sum - T::lit(0.5)) * (small / large).ln_1p()
        + small
        + stirling_tail(large)
        - stirling_tail(sum);
    ln_gamma(small) + gamma_ratio
}

/// ln c_{d,β} where c_{d,β} = Γ(d/2 + β + 1) / (π^{d/2} Γ(β + 1)).
pub fn ln_beta_norm_const<T: Scalar>(d: usize, beta: BetaParam<T>) -> T {
    let half_d = T::from_usize_lossy(d) * T::lit(0.5);
    let b1 = beta.value() + T::one();
    ln_gamma(half_d + b1) - ln_gamma(b1) - half_d * T::PI().ln()
}

/// Normalizing constant c_{d,β} of the beta density in dimension `d`.
///
/// `d = 0` is allowed and gives 1.
pub fn beta_norm_const<T: Scalar>(d: usize, beta: BetaParam<T>) -> T {
    ln_beta_norm_const(d, beta).exp()
}

/// Density f_{d,β}(x) = c_{d,β} (1 - |x|²)^β of the beta law on the unit
/// ball, with `d = x.len()`.
///
/// Zero outside the closed ball. On the sphere itself the value is the limit
/// of the formula: 0 for β > 0, c_{d,0} for β = 0 and +∞ for β < 0.
pub fn beta_density<T: Scalar>(beta: BetaParam<T>, x: &[T]) -> T {
    let r2: T = x.iter().map(|&c| c * c).sum();
    let one = T::one();
    if r2 > one {
        return T::zero();
    }
    let c = beta_norm_const(x.len(), beta);
    c * (one - r2).powf(beta.value())
}

const INC_BETA_MAX_ITER: usize = 500;

fn inc_beta_tol<T: Scalar>() -> T {
    T::lit(1e-15).max(T::epsilon())
}

/// Modified Lentz evaluation of the continued fraction for I_x(a, b),
/// without the front factor.
fn inc_beta_cf<T: Scalar>(a: T, b: T, x: T) -> Result<T> {
    let one = T::one();
    let tiny = T::min_positive_value() / T::epsilon();
    let eps = inc_beta_tol::<T>();
    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = d.recip();
    let mut h = d;
    for m in 1..=INC_BETA_MAX_ITER {
        let mf = T::from_usize_lossy(m);
        let m2 = mf + mf;
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        h = h * d * c;
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let del = d * c;
        h = h * del;
        if (del - one).abs() <= eps {
            return Ok(h);
        }
    }
    Err(Error::Convergence {
        op: "specfun::reg_inc_beta",
        iterations: INC_BETA_MAX_ITER,
        detail: format!("a = {a}, b = {b}, x = {x}"),
    })
}

/// I_x(a, b) for x below the mean (a + 1)/(a + b + 2), where the continued
/// fraction converges fast. `xc` is 1 - x, passed separately so callers can
/// supply it without cancellation.
fn inc_beta_lower<T: Scalar>(a: T, b: T, x: T, xc: T) -> Result<T> {
    if x == T::zero() {
        return Ok(T::zero());
    }
    let front = (a * x.ln() + b * xc.ln() - ln_beta(a, b)).exp() / a;
    Ok(front * inc_beta_cf(a, b, x)?)
}

/// Regularized incomplete beta function I_t(a, b).
pub fn reg_inc_beta<T: Scalar>(a: T, b: T, t: T) -> Result<T> {
    let zero = T::zero();
    let one = T::one();
    if !(a > zero && b > zero && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(
            "specfun::reg_inc_beta",
            format!("shape parameters must be positive, got a = {a}, b = {b}"),
        ));
    }
    if !(zero..=one).contains(&t) {
        return Err(Error::domain(
            "specfun::reg_inc_beta",
            format!("t must lie in [0, 1], got {t}"),
        ));
    }
    if t == zero {
        return Ok(zero);
    }
    if t == one {
        return Ok(one);
    }
    let tc = one - t;
    if t < (a + one) / (a + b + T::lit(2.0)) {
        inc_beta_lower(a, b, t, tc)
    } else {
        Ok(one - inc_beta_lower(b, a, tc, t)?)
    }
}

/// CDF F_β(h) of the one-dimensional density f_{1,β}:
/// F_β(h) = c_{1,β} ∫_{-1}^{h} (1 - x²)^β dx = I_{(1+h)/2}(β + 1, β + 1).
///
/// Clamped to 0 below -1 and to 1 above 1.
pub fn beta_cdf<T: Scalar>(beta: BetaParam<T>, h: T) -> T {
    let one = T::one();
    if h <= -one {
        return T::zero();
    }
    if h >= one {
        return one;
    }
    if h == T::zero() {
        return T::lit(0.5);
    }
    beta_cdf_from_ends(beta, one + h, one - h)
}

/// F_β at the point whose distances to -1 and +1 are `one_plus_h` and
/// `one_minus_h`. Near the endpoints F_β behaves like a fractional power of
/// these distances, so callers that know them exactly should pass them here
/// rather than round-tripping through h.
pub fn beta_cdf_from_ends<T: Scalar>(beta: BetaParam<T>, one_plus_h: T, one_minus_h: T) -> T {
    let zero = T::zero();
    let half = T::lit(0.5);
    if one_plus_h <= zero {
        return zero;
    }
    if one_minus_h <= zero {
        return T::one();
    }
    let a = beta.value() + T::one();
    // Evaluate the lighter tail, where x <= 1/2 is below the mean and the
    // continued fraction needs no reflection.
    let lower = one_plus_h <= one_minus_h;
    let (x, xc) = if lower {
        (one_plus_h * half, one_minus_h * half)
    } else {
        (one_minus_h * half, one_plus_h * half)
    };
    // a = b > 0 is guaranteed by BetaParam, so only non-convergence could
    // fail, and for x <= 1/2 the fraction converges in O(sqrt(a)) steps.
    let tail = inc_beta_lower(a, a, x, xc).unwrap_or_else(|_| x.powf(a) * xc.powf(a));
    if lower {
        tail
    } else {
        T::one() - tail
    }
}

/// ln κ_d, the log-volume of the unit ball in R^d.
pub fn ln_ball_volume<T: Scalar>(d: usize) -> T {
    let half_d = T::from_usize_lossy(d) * T::lit(0.5);
    half_d * T::PI().ln() - ln_gamma(half_d + T::one())
}

/// κ_d = π^{d/2} / Γ(d/2 + 1).
pub fn ball_volume<T: Scalar>(d: usize) -> T {
    ln_ball_volume::<T>(d).exp()
}
