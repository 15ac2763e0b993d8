//! Dispatch of subcommands to the evaluators and report assembly.

use std::time::Instant;

use betapoly::{
    expected_volume_with, expected_wieacker_with, mc_estimate, miles_moment, BetaVector,
    EvalOptions, Evaluation, Functional, PolytopeSpec, WieackerParams,
};

use crate::report::{self, EstimateReport, Num, SweepRow};
use crate::{selftest, Cli, Command, Failure, Format, FunctionalKind, Numerics, Polytope};

fn eval_options(n: &Numerics) -> EvalOptions<f64> {
    EvalOptions {
        budget: n.budget,
        ..EvalOptions::with_rel_tol(n.rel_tol)
    }
}

fn make_spec(d: u64, betas: &[f64]) -> Result<PolytopeSpec<f64>, Failure> {
    let d = usize::try_from(d).map_err(|_| Failure::Usage(format!("cli::run: dimension {d} is too large")))?;
    Ok(PolytopeSpec::new(d, BetaVector::from_values(betas)?)?)
}

fn functional(kind: FunctionalKind, a: f64, b: f64) -> Result<Functional<f64>, Failure> {
    Ok(match kind {
        FunctionalKind::Volume => Functional::Volume,
        FunctionalKind::Wieacker => Functional::Wieacker(WieackerParams::new(a, b)?),
    })
}

fn closed_form(
    spec: &PolytopeSpec<f64>,
    f: Functional<f64>,
    opts: &EvalOptions<f64>,
) -> Result<Evaluation<f64>, Failure> {
    Ok(match f {
        Functional::Volume => expected_volume_with(spec, opts)?,
        Functional::Wieacker(p) => expected_wieacker_with(spec, p, opts)?,
    })
}

struct Mc {
    mean: Num,
    se: Num,
    z: Num,
    samples: usize,
    resampled: u64,
}

impl Mc {
    const NONE: Mc = Mc {
        mean: Num::NONE,
        se: Num::NONE,
        z: Num::NONE,
        samples: 0,
        resampled: 0,
    };
}

fn monte_carlo(
    spec: &PolytopeSpec<f64>,
    f: Functional<f64>,
    samples: usize,
    seed: u64,
    exact: f64,
) -> Result<Mc, Failure> {
    let est = mc_estimate(spec, f, samples, seed)?;
    Ok(Mc {
        mean: Num::some(est.mean),
        se: Num::some(est.standard_error),
        z: Num::some((est.mean - exact) / est.standard_error),
        samples: est.samples,
        resampled: est.resampled,
    })
}

fn base_report(command: &'static str, p: &Polytope, seed: u64) -> EstimateReport {
    EstimateReport {
        command,
        d: p.d as usize,
        n: p.betas.0.len(),
        betas: p.betas.0.iter().map(|&b| Num::some(b)).collect(),
        a: None,
        b: None,
        k: None,
        closed_form: Num::NONE,
        quadrature_error: Num::NONE,
        term_count: 0,
        extrapolated: false,
        mc_mean: Num::NONE,
        mc_se: Num::NONE,
        z_score: Num::NONE,
        samples: 0,
        resampled: 0,
        seed,
        wall_time: Num::NONE,
    }
}

fn fill(r: &mut EstimateReport, e: &Evaluation<f64>, mc: Mc) {
    r.closed_form = Num::some(e.value);
    r.quadrature_error = Num::some(e.error_estimate);
    r.term_count = e.term_count;
    r.extrapolated = e.extrapolated;
    r.mc_mean = mc.mean;
    r.mc_se = mc.se;
    r.z_score = mc.z;
    r.samples = mc.samples;
    r.resampled = mc.resampled;
}

fn render(cli: &Cli, r: &EstimateReport) -> Result<String, Failure> {
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(report::report_json(r)),
        Format::Csv => report::report_csv(r).map_err(|e| Failure::Usage(format!("cli::report: {e}"))),
    }
}

pub fn run(cli: &Cli) -> Result<String, Failure> {
    let start = Instant::now();
    let stamp = |r: &mut EstimateReport| {
        if cli.timing {
            r.wall_time = Num::some(start.elapsed().as_secs_f64());
        }
    };
    match &cli.command {
        Command::Volume {
            polytope,
            numerics,
            seeded,
        } => {
            let spec = make_spec(polytope.d, &polytope.betas.0)?;
            let e = expected_volume_with(&spec, &eval_options(numerics))?;
            let mut r = base_report("volume", polytope, seeded.seed);
            fill(&mut r, &e, Mc::NONE);
            stamp(&mut r);
            render(cli, &r)
        }
        Command::Wieacker {
            polytope,
            a,
            b,
            numerics,
            seeded,
        } => {
            let spec = make_spec(polytope.d, &polytope.betas.0)?;
            let params = WieackerParams::new(*a, *b)?;
            let e = expected_wieacker_with(&spec, params, &eval_options(numerics))?;
            let mut r = base_report("wieacker", polytope, seeded.seed);
            r.a = Some(Num::some(*a));
            r.b = Some(Num::some(*b));
            fill(&mut r, &e, Mc::NONE);
            stamp(&mut r);
            render(cli, &r)
        }
        Command::Moment { betas, k, seeded } => {
            let bv = BetaVector::from_values(&betas.0)?;
            let value = miles_moment(&bv, *k)?;
            let p = Polytope {
                d: betas.0.len() as u64 - 1,
                betas: betas.clone(),
            };
            let mut r = base_report("moment", &p, seeded.seed);
            r.k = Some(Num::some(*k));
            let e = Evaluation {
                value,
                error_estimate: 0.0,
                term_count: 1,
                extrapolated: *k != k.round(),
            };
            fill(&mut r, &e, Mc::NONE);
            stamp(&mut r);
            render(cli, &r)
        }
        Command::Verify {
            polytope,
            functional: kind,
            a,
            b,
            samples,
            numerics,
            seeded,
        } => {
            let spec = make_spec(polytope.d, &polytope.betas.0)?;
            let f = functional(*kind, *a, *b)?;
            let e = closed_form(&spec, f, &eval_options(numerics))?;
            let mc = monte_carlo(&spec, f, *samples, seeded.seed, e.value)?;
            let mut r = base_report("verify", polytope, seeded.seed);
            if *kind == FunctionalKind::Wieacker {
                r.a = Some(Num::some(*a));
                r.b = Some(Num::some(*b));
            }
            fill(&mut r, &e, mc);
            stamp(&mut r);
            render(cli, &r)
        }
        Command::Sweep {
            polytope,
            functional: kind,
            a,
            b,
            param,
            values,
            samples,
            numerics,
            seeded,
        } => {
            let opts = eval_options(numerics);
            let rows = values
                .0
                .iter()
                .map(|&v| {
                    let point = SweepPoint::new(polytope, *a, *b, param, v)?;
                    let spec = make_spec(polytope.d, &point.betas)?;
                    let f = functional(*kind, point.a, point.b)?;
                    let e = closed_form(&spec, f, &opts)?;
                    let mc = if *samples > 0 {
                        monte_carlo(&spec, f, *samples, seeded.seed, e.value)?
                    } else {
                        Mc::NONE
                    };
                    Ok(SweepRow {
                        parameter: param.clone(),
                        value: Num::some(v),
                        closed_form: Num::some(e.value),
                        quadrature_error: Num::some(e.error_estimate),
                        term_count: e.term_count,
                        mc_mean: mc.mean,
                        mc_se: mc.se,
                        z_score: mc.z,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    report::sweep_csv(&rows).map_err(|e| Failure::Usage(format!("cli::sweep: {e}")))
                }
                Format::Json => Ok(report::sweep_json(&rows)),
            }
        }
        Command::Selftest => selftest::run(),
    }
}

/// Configuration at one grid point of a sweep.
struct SweepPoint {
    betas: Vec<f64>,
    a: f64,
    b: f64,
}

impl SweepPoint {
    fn new(p: &Polytope, a: f64, b: f64, param: &str, v: f64) -> Result<Self, Failure> {
        let mut point = SweepPoint {
            betas: p.betas.0.clone(),
            a,
            b,
        };
        match param {
            "a" => point.a = v,
            "b" => point.b = v,
            "n" => {
                if !(v >= 1.0 && v == v.round()) {
                    return Err(Failure::Usage(format!("cli::sweep: n must be a positive integer, got {v}")));
                }
                let base = &p.betas.0;
                point.betas = (0..v as usize).map(|i| base[i % base.len()]).collect();
            }
            other => {
                let index = other
                    .strip_prefix("beta:")
                    .and_then(|i| i.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Failure::Usage(format!(
                            "cli::sweep: unknown parameter '{other}' (expected n, a, b or beta:<index>)"
                        ))
                    })?;
                let slot = point.betas.get_mut(index).ok_or_else(|| {
                    Failure::Usage(format!("cli::sweep: beta index {index} is out of range"))
                })?;
                *slot = v;
            }
        }
        Ok(point)
    }
}
