use std::f64::consts::PI;

use betapoly::{
    expected_volume, expected_wieacker, mc_estimate, BetaVector, Functional, PolytopeSpec,
    WieackerParams,
};

fn spec(d: usize, betas: &[f64]) -> PolytopeSpec<f64> {
    PolytopeSpec::new(d, BetaVector::from_values(betas).unwrap()).unwrap()
}

fn z(mean: f64, se: f64, exact: f64) -> f64 {
    (mean - exact) / se
}

#[test]
fn segment_length() {
    let est = mc_estimate(&spec(1, &[0.0, 0.0]), Functional::Volume, 1_000_000, 1).unwrap();
    assert!(z(est.mean, est.standard_error, 2.0 / 3.0).abs() < 3.0, "{est:?}");
}

#[test]
fn disk_triangle_area() {
    let est = mc_estimate(&spec(2, &[0.0, 0.0, 0.0]), Functional::Volume, 1_000_000, 2).unwrap();
    assert!(z(est.mean, est.standard_error, 35.0 / (48.0 * PI)).abs() < 3.0, "{est:?}");
}

#[test]
fn disk_quadrilateral_area() {
    let s = spec(2, &[0.0, 0.0, 0.0, 0.0]);
    let exact = expected_volume(&s).unwrap().value;
    let est = mc_estimate(&s, Functional::Volume, 1_000_000, 3).unwrap();
    assert!(z(est.mean, est.standard_error, exact).abs() < 3.0, "{est:?} vs {exact}");
}

#[test]
fn mixed_beta_volumes() {
    for (i, (d, betas)) in [
        (1, vec![-0.8, 0.5, 2.0]),
        (2, vec![-0.5, 0.0, 1.5, 3.0, -0.9]),
        (3, vec![0.0, 1.0, -0.5, 0.5, 2.0]),
    ]
    .into_iter()
    .enumerate()
    {
        let s = spec(d, &betas);
        let exact = expected_volume(&s).unwrap().value;
        let est = mc_estimate(&s, Functional::Volume, 200_000, 10 + i as u64).unwrap();
        assert!(z(est.mean, est.standard_error, exact).abs() < 4.0, "d = {d}: {est:?} vs {exact}");
    }
}

#[test]
fn facet_functionals() {
    let cases = [
        (vec![0.0, 0.0, 0.0, 0.0], 0.0, 0.0, 100_000),
        (vec![0.0, 0.0, 0.0, 0.0], 1.0, 1.0, 1_000_000),
        (vec![-0.5, 0.3, 1.0, 2.0, 0.0], 2.0, 0.5, 200_000),
    ];
    for (i, (betas, a, b, n)) in cases.into_iter().enumerate() {
        let s = spec(2, &betas);
        let params = WieackerParams::new(a, b).unwrap();
        let exact = expected_wieacker(&s, params).unwrap().value;
        let est = mc_estimate(&s, Functional::Wieacker(params), n, 20 + i as u64).unwrap();
        assert!(
            z(est.mean, est.standard_error, exact).abs() < 4.0,
            "(a, b) = ({a}, {b}): {est:?} vs {exact}"
        );
    }
}
