//! Built-in consistency checks: analytic fixed points, identities between
//! the evaluators, and a small Monte Carlo comparison.

use std::f64::consts::PI;

use betapoly::{
    beta_cdf, expected_volume, expected_wieacker, jacobi_rule, ktt_equal_beta, kubota_cross_check,
    lemma_section_value, log_gamma, mc_estimate, miles_moment, reg_inc_beta, BetaParam,
    BetaVector, Functional, PolytopeSpec, WieackerParams,
};

use crate::Failure;

type Check = Result<(), String>;

fn bv(values: &[f64]) -> Result<BetaVector<f64>, String> {
    BetaVector::from_values(values).map_err(|e| e.to_string())
}

fn spec(d: usize, values: &[f64]) -> Result<PolytopeSpec<f64>, String> {
    PolytopeSpec::new(d, bv(values)?).map_err(|e| e.to_string())
}

fn close(what: &str, got: f64, want: f64, rel: f64) -> Check {
    if (got - want).abs() <= rel * want.abs().max(f64::MIN_POSITIVE) {
        Ok(())
    } else {
        Err(format!("{what}: {got:.16e} vs {want:.16e}"))
    }
}

fn special_functions() -> Check {
    close("lnΓ(1/2)", log_gamma(0.5).map_err(|e| e.to_string())?, PI.sqrt().ln(), 1e-14)?;
    close("I_0.3(1,1)", reg_inc_beta(1.0, 1.0, 0.3).map_err(|e| e.to_string())?, 0.3, 1e-15)?;
    let b = BetaParam::new(1.0).map_err(|e| e.to_string())?;
    close("F_1(1/2)", beta_cdf(b, 0.5), 27.0 / 32.0, 1e-14)
}

fn quadrature_mass() -> Check {
    for m in [1, 5, 64] {
        let total: f64 = jacobi_rule(1.0, m).map_err(|e| e.to_string())?.weights().iter().sum();
        close("Σ weights", total, 4.0 / 3.0, 1e-13)?;
    }
    Ok(())
}

fn fixed_points() -> Check {
    let v = expected_volume(&spec(1, &[0.0, 0.0])?).map_err(|e| e.to_string())?;
    close("segment", v.value, 2.0 / 3.0, 1e-12)?;
    let v = expected_volume(&spec(2, &[0.0, 0.0, 0.0])?).map_err(|e| e.to_string())?;
    let m = miles_moment(&bv(&[0.0, 0.0, 0.0])?, 1.0).map_err(|e| e.to_string())?;
    close("triangle", v.value, m, 1e-10)?;
    close("triangle moment", m, 35.0 / (48.0 * PI), 1e-13)
}

fn equal_beta() -> Check {
    for d in 1..=3 {
        for n in d + 1..=d + 3 {
            for beta in [-0.9, 0.0, 3.0] {
                let b = BetaParam::new(beta).map_err(|e| e.to_string())?;
                let general = expected_volume(
                    &PolytopeSpec::new(d, BetaVector::equal(b, n).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                let equal = ktt_equal_beta(d, n, b).map_err(|e| e.to_string())?;
                close(&format!("d={d} n={n} β={beta}"), general.value, equal.value, 1e-10)?;
            }
        }
    }
    Ok(())
}

fn kubota() -> Check {
    for (d, betas) in [(1, vec![0.0, 1.0, -0.3]), (2, vec![0.0, 0.0, 0.0, 1.0])] {
        let c = kubota_cross_check(&spec(d, &betas)?).map_err(|e| e.to_string())?;
        close(&format!("d={d}"), c.rhs.value, c.lhs.value, 1e-8)?;
    }
    Ok(())
}

fn facet_counts() -> Check {
    for (d, betas) in [
        (2, vec![0.3, -0.5, 2.0]),
        (3, vec![0.0, 1.0, -0.7, 0.5]),
        (4, vec![0.1, 0.2, 0.3, 0.4, 0.5]),
    ] {
        let t = expected_wieacker(&spec(d, &betas)?, WieackerParams::new(0.0, 0.0).unwrap())
            .map_err(|e| e.to_string())?;
        close(&format!("d={d}"), t.value, (d + 1) as f64, 1e-10)?;
    }
    let t = expected_wieacker(&spec(1, &[0.0, 2.0, -0.5, 1.0])?, WieackerParams::new(0.0, 1.5).unwrap())
        .map_err(|e| e.to_string())?;
    close("d=1", t.value, 2.0, 1e-10)
}

fn lemma_factorization() -> Check {
    let betas = bv(&[0.0, 0.0])?;
    let at0 = lemma_section_value(2, &betas, 1.0, 0.0).map_err(|e| e.to_string())?;
    close("h=0", at0, 8.0 / (3.0 * PI * PI), 1e-13)?;
    let h: f64 = 0.7;
    let v = lemma_section_value(2, &betas, 1.0, h).map_err(|e| e.to_string())?;
    close("h=0.7", v, at0 * (1.0 - h * h).powf(1.5), 1e-13)
}

fn monte_carlo() -> Check {
    let s = spec(2, &[0.0, 0.5, -0.5, 1.0])?;
    let exact = expected_volume(&s).map_err(|e| e.to_string())?.value;
    let est = mc_estimate(&s, Functional::Volume, 20_000, 7).map_err(|e| e.to_string())?;
    let z = (est.mean - exact) / est.standard_error;
    if z.abs() < 5.0 {
        Ok(())
    } else {
        Err(format!("z = {z:.3}"))
    }
}

pub fn run() -> Result<String, Failure> {
    let checks: [(&str, fn() -> Check); 8] = [
        ("special functions", special_functions),
        ("quadrature mass", quadrature_mass),
        ("fixed points", fixed_points),
        ("equal-beta formula", equal_beta),
        ("projection relation", kubota),
        ("facet counts", facet_counts),
        ("section integral", lemma_factorization),
        ("monte carlo", monte_carlo),
    ];
    let mut out = String::new();
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => out.push_str(&format!("ok    {name}\n")),
            Err(detail) => {
                failed += 1;
                out.push_str(&format!("FAIL  {name}: {detail}\n"));
            }
        }
    }
    out.push_str(&format!("{} of {} checks passed\n", checks.len() - failed, checks.len()));
    if failed == 0 {
        Ok(out)
    } else {
        Err(Failure::Selftest {
            output: out,
            failed,
        })
    }
}
