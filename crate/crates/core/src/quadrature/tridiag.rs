//! Implicit QL iteration for symmetric tridiagonal matrices, tracking only
//! the first component of each eigenvector (all Golub-Welsch needs).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`).
///
/// Returns `(eigenvalues, first_components)` in the order the iteration
/// leaves them; callers sort.
pub(crate) fn symmetric_tridiagonal_eigen<T: Scalar>(
    mut diag: Vec<T>,
    off: &[T],
) -> Result<(Vec<T>, Vec<T>)> {
    let n = diag.len();
    debug_assert!(off.len() + 1 >= n);
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    let mut e = vec![zero; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = vec![zero; n];
    if n > 0 {
        z[0] = one;
    }

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::Convergence {
                    op: "quadrature::jacobi_rule",
                    iterations: MAX_SWEEPS,
                    detail: format!("QL sweep stalled at eigenvalue {l} of {n}"),
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * e[l]);
            let mut r = g.hypot(one);
            let signed_r = if g >= zero { r } else { -r };
            g = diag[m] - diag[l] + e[l] / (g + signed_r);
            let mut s = one;
            let mut c = one;
            let mut p = zero;
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == zero {
                    diag[i + 1] = diag[i + 1] - p;
                    e[m] = zero;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            diag[l] = diag[l] - p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok((diag, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3 with eigenvectors (1, ∓1)/√2.
        let (mut vals, z) = symmetric_tridiagonal_eigen(vec![2.0f64, 2.0], &[1.0]).unwrap();
        for zi in &z {
            assert!((zi * zi - 0.5).abs() < 1e-15);
        }
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-15);
        assert!((vals[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        // tridiag(-1, 2, -1) of size n: eigenvalues 2 - 2cos(kπ/(n+1)).
        let n = 50;
        let (mut vals, z) =
            symmetric_tridiagonal_eigen(vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        vals.sort_by(f64::total_cmp);
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
        let norm: f64 = z.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-13);
    }
}
