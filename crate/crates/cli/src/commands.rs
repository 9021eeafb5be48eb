//! One function per subcommand, each producing a [`Report`].

use std::f64::consts::{FRAC_PI_3, PI};

use koranyi_core::distance_sets::{
    build_counterexample, distance_set_with, rice_sequences_with, steinhaus_constant, steinhaus_product,
    verify_counterexample, CounterexampleSpec, DensityProfile, RiceOptions,
};
use koranyi_core::special::asymptotic::{laguerre_asymptotic, mu, regime_interior_point, Regime};
use koranyi_core::special::laguerre::laguerre_weighted;
use koranyi_core::spectral::{
    decay_fit_from, decay_points, linear_phase_modulus, low_freq_check, rk_coefficient, van_der_corput_check,
};
use koranyi_core::weyl::{
    verify_plancherel_weyl, verify_twisted_identity_with, verify_weyl_laguerre, HeisenbergProfile, RadialProfile,
    DEFAULT_GRID_POINTS,
};
use koranyi_core::{Error, HPoint};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Command, ProfileKind, RunConfig};
use crate::output::{Check, PlotSpec, Report};

#[derive(Debug)]
pub enum RunError {
    /// Invalid input detected before or during the run; exit status 2.
    Usage(String),
    /// A computation failed; exit status 1.
    Compute(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument { .. } | Error::DimensionMismatch { .. } => RunError::Usage(e.to_string()),
            other => RunError::Compute(other.to_string()),
        }
    }
}

type Out = Result<Report, RunError>;

pub fn run(config: &RunConfig) -> Out {
    match config.subcommand {
        Command::Rk => rk(config),
        Command::Decay => decay(config),
        Command::Lowfreq => lowfreq(config),
        Command::Laguerre => laguerre(config),
        Command::Vdc => vdc(config),
        Command::Weyl => weyl(config),
        Command::Steinhaus => steinhaus(config),
        Command::Counterexample => counterexample(config),
        Command::Distances => distances(config),
    }
}

const RK_COLUMNS: [&str; 8] = ["k", "n", "lambda", "r", "value", "imag_residual", "quad_error", "band"];

fn rk_row(c: &koranyi_core::spectral::SpectralCoeff) -> Vec<Value> {
    vec![
        json!(c.k),
        json!(c.n),
        json!(c.lambda),
        json!(c.r),
        json!(c.value),
        json!(c.imag_residual),
        json!(c.quad_error_estimate),
        json!(c.band.name()),
    ]
}

fn rk(cfg: &RunConfig) -> Out {
    let lambdas = cfg.lambdas();
    let grid: Vec<(usize, f64)> = cfg
        .k_values
        .iter()
        .flat_map(|&k| lambdas.iter().map(move |&l| (k, l)))
        .collect();
    let coeffs = grid
        .par_iter()
        .map(|&(k, l)| rk_coefficient(k, cfg.n, l, cfg.r, cfg.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::new(RK_COLUMNS.to_vec());
    for c in &coeffs {
        rep.push(rk_row(c));
    }
    rep.set("points", coeffs.len());
    rep.plot = Some(PlotSpec {
        x: 3,
        y: 5,
        logx: true,
        logy: false,
        group: Some(1),
    });
    Ok(rep)
}

fn decay(cfg: &RunConfig) -> Out {
    let points = decay_points(
        cfg.n,
        &cfg.k_values,
        cfg.r,
        cfg.lambda_min,
        cfg.lambda_max,
        cfg.per_decade,
    );
    let coeffs = points
        .par_iter()
        .map(|&(k, l)| rk_coefficient(k, cfg.n, l, cfg.r, cfg.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let fit = decay_fit_from(cfg.n, &coeffs, cfg.lambda_min * (1.0 - 1e-9))?;
    let mut cols = RK_COLUMNS.to_vec();
    cols.push("mu_lambda_r2");
    let mut rep = Report::new(cols);
    for c in &coeffs {
        let mut row = rk_row(c);
        row.push(json!(mu(c.k, c.n) * c.lambda.abs() * c.r * c.r));
        rep.push(row);
    }
    let limit = fit.target_exponent + 0.15;
    rep.set("slope", fit.slope);
    rep.set("intercept", fit.intercept);
    rep.set("r_squared", fit.r_squared);
    rep.set("target_exponent", fit.target_exponent);
    rep.set("slope_limit", limit);
    rep.set("samples", fit.samples.len());
    rep.set("discarded", fit.discarded);
    rep.set("envelope", &fit.envelope);
    rep.checks.push(Check::at_most("slope", fit.slope, limit));
    rep.plot = Some(PlotSpec {
        x: 9,
        y: 5,
        logx: true,
        logy: true,
        group: Some(1),
    });
    Ok(rep)
}

fn lowfreq(cfg: &RunConfig) -> Out {
    if cfg.lambda_max > cfg.delta {
        return Err(RunError::Usage(format!(
            "lowfreq needs μ|λ| ≤ δ: --lambda-max {} exceeds --delta {}",
            cfg.lambda_max, cfg.delta
        )));
    }
    let fs = cfg.lambdas();
    let reports = cfg
        .k_values
        .par_iter()
        .map(|&k| {
            let m = mu(k, cfg.n);
            let lambdas: Vec<f64> = fs.iter().map(|f| f / m).collect();
            low_freq_check(cfg.n, &[k], &lambdas, cfg.delta * (1.0 + 1e-12), cfg.tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::new(vec!["k", "n", "lambda", "mu_lambda", "value", "deviation", "ratio"]);
    let mut worst = 0.0f64;
    for r in &reports {
        worst = worst.max(r.max_deviation_ratio);
        for p in &r.points {
            rep.push(vec![
                json!(p.k),
                json!(cfg.n),
                json!(p.lambda),
                json!(p.mu_lambda),
                json!(p.value),
                json!(p.deviation),
                json!(p.ratio),
            ]);
        }
    }
    rep.set("max_deviation_ratio", worst);
    rep.checks.push(Check::at_most("max_deviation_ratio", worst, 10.0));
    rep.plot = Some(PlotSpec {
        x: 4,
        y: 6,
        logx: true,
        logy: true,
        group: None,
    });
    Ok(rep)
}

fn laguerre(cfg: &RunConfig) -> Out {
    let k0 = koranyi_core::special::asymptotic::RegimeConstants::default().k0;
    if let Some(&k) = cfg.k_values.iter().find(|&&k| k < k0) {
        return Err(RunError::Usage(format!("laguerre needs k ≥ {k0}, got {k}")));
    }
    let jobs: Vec<(Regime, usize)> = Regime::ALL
        .iter()
        .flat_map(|&g| cfg.k_values.iter().map(move |&k| (g, k)))
        .collect();
    let positions = cfg.positions;
    let n = cfg.n;
    let errors = jobs
        .par_iter()
        .map(|&(regime, k)| -> Result<f64, RunError> {
            let mut worst = 0.0f64;
            for i in 0..positions {
                let x = regime_interior_point(regime, k, n, i as f64 / (positions - 1) as f64);
                let a = laguerre_asymptotic(k, n, x)?;
                if a.regime != regime {
                    return Err(RunError::Compute(format!(
                        "x = {x} for k = {k} falls in {} rather than {regime}",
                        a.regime
                    )));
                }
                worst = worst.max((a.value - laguerre_weighted(k, n, x)).abs() / a.envelope);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::new(vec!["regime", "n", "k", "max_rel_error", "positions"]);
    for (&(regime, k), &e) in jobs.iter().zip(&errors) {
        rep.push(vec![
            json!(regime.name()),
            json!(n),
            json!(k),
            json!(e),
            json!(positions),
        ]);
    }
    let (first, last) = (cfg.k_values[0], *cfg.k_values.last().unwrap());
    if last > first {
        for regime in Regime::ALL {
            let at = |k: usize| {
                jobs.iter()
                    .zip(&errors)
                    .find(|((g, kk), _)| *g == regime && *kk == k)
                    .map(|(_, &e)| e)
                    .unwrap_or(f64::NAN)
            };
            let (e0, e1) = (at(first), at(last));
            rep.checks.push(Check {
                name: format!("{}_error_decreases", regime.name()),
                value: e1,
                limit: e0,
                pass: e1 < e0,
            });
        }
    }
    rep.plot = Some(PlotSpec {
        x: 3,
        y: 4,
        logx: true,
        logy: true,
        group: Some(1),
    });
    Ok(rep)
}

fn vdc(cfg: &RunConfig) -> Out {
    let mut rep = Report::new(vec!["lambda", "L", "a", "b", "integral_modulus", "bound", "ratio"]);
    let (a, b) = (0.0, FRAC_PI_3);
    let mut worst = 0.0f64;
    for lambda in cfg.lambdas() {
        // Φ′(θ) = ¼λ cos θ decreases on [0, π/3] from ¼λ to λ/8.
        let l = lambda / 8.0;
        let r = van_der_corput_check(l, |t| 0.25 * lambda * t.sin(), f64::cos, a, b, cfg.tol)?;
        worst = worst.max(r.ratio);
        rep.push(vec![
            json!(lambda),
            json!(l),
            json!(a),
            json!(b),
            json!(r.integral_modulus),
            json!(r.bound),
            json!(r.ratio),
        ]);
    }
    let mut closed = 0.0f64;
    for l in [0.5, 1.0, PI, 10.0, 37.0, 200.0] {
        let exact = 2.0 * (0.5 * l).sin().abs() / l;
        closed = closed.max((linear_phase_modulus(l) - exact).abs());
    }
    rep.set("max_ratio", worst);
    rep.set("linear_phase_max_error", closed);
    rep.checks.push(Check::at_most("max_ratio", worst, 1.0));
    rep.checks.push(Check::at_most("linear_phase_max_error", closed, 1e-12));
    rep.plot = Some(PlotSpec {
        x: 1,
        y: 7,
        logx: true,
        logy: false,
        group: None,
    });
    Ok(rep)
}

fn weyl(cfg: &RunConfig) -> Out {
    let big_n = cfg.truncation;
    if let Some(&k) = cfg.k_values.iter().find(|&&k| k + 2 >= big_n) {
        return Err(RunError::Usage(format!(
            "weyl needs k < N − 2, got k = {k} with --truncation {big_n}"
        )));
    }
    let mut rep = Report::new(vec![
        "identity", "profile", "k", "lambda", "dim", "grid", "lhs", "rhs", "gap",
    ]);
    let limit = cfg.tol;
    for lambda in cfg.lambdas() {
        for &k in &cfg.k_values {
            let a = verify_weyl_laguerre(k, lambda, big_n)?;
            let b = verify_weyl_laguerre(k, lambda, 2 * big_n)?;
            for r in [&a, &b] {
                rep.push(vec![
                    json!("weyl_laguerre"),
                    json!(format!("laguerre_{k}")),
                    json!(k),
                    json!(lambda),
                    json!(r.dim),
                    Value::Null,
                    json!(r.diagonal_entry),
                    json!(r.target),
                    json!(r.max_abs_deviation),
                ]);
            }
            rep.checks.push(Check::at_most(
                format!("weyl_laguerre_k{k}_lambda{lambda}"),
                b.max_abs_deviation,
                limit,
            ));
            rep.checks.push(Check::at_most(
                format!("weyl_laguerre_k{k}_lambda{lambda}_doubling"),
                b.max_abs_deviation,
                a.max_abs_deviation + 1e-12,
            ));
        }

        let g = RadialProfile::Gaussian { a: 1.0 / 12.0 };
        let half = (big_n / 2).max(2);
        let (p0, p1) = (
            verify_plancherel_weyl(&g, lambda, half)?,
            verify_plancherel_weyl(&g, lambda, big_n)?,
        );
        for (dim, r) in [(half, &p0), (big_n, &p1)] {
            rep.push(vec![
                json!("plancherel"),
                json!("gaussian_1/12"),
                Value::Null,
                json!(lambda),
                json!(dim),
                Value::Null,
                json!(r.lhs),
                json!(r.rhs),
                json!(r.rel_gap),
            ]);
        }
        rep.checks
            .push(Check::at_most(format!("plancherel_lambda{lambda}"), p1.rel_gap, 1e-3));
        rep.checks.push(Check {
            name: format!("plancherel_lambda{lambda}_doubling"),
            value: p1.rel_gap,
            limit: p0.rel_gap,
            pass: p1.rel_gap < p0.rel_gap || p1.rel_gap <= 1e-12,
        });

        let cases = [
            ("gaussian_0.5_1", HeisenbergProfile::Gaussian { a: 0.5, b: 1.0 }, 0usize),
            ("gaussian_0.5_1", HeisenbergProfile::Gaussian { a: 0.5, b: 1.0 }, 2),
            (
                "smooth_ball_1.5_0.3",
                HeisenbergProfile::SmoothBall {
                    radius: 1.5,
                    width: 0.3,
                },
                1,
            ),
        ];
        for (name, p, k) in &cases {
            if k + 2 >= big_n {
                continue;
            }
            let coarse = verify_twisted_identity_with(p, lambda, *k, big_n, DEFAULT_GRID_POINTS / 2)?;
            let fine = verify_twisted_identity_with(p, lambda, *k, big_n, DEFAULT_GRID_POINTS)?;
            for (grid, r) in [(DEFAULT_GRID_POINTS / 2, &coarse), (DEFAULT_GRID_POINTS, &fine)] {
                rep.push(vec![
                    json!("twisted"),
                    json!(name),
                    json!(k),
                    json!(lambda),
                    json!(big_n),
                    json!(grid),
                    json!(r.lhs),
                    json!(r.rhs),
                    json!(r.rel_gap),
                ]);
            }
            rep.checks.push(Check::at_most(
                format!("twisted_{name}_k{k}_lambda{lambda}"),
                fine.rel_gap,
                1e-3,
            ));
            rep.checks.push(Check {
                name: format!("twisted_{name}_k{k}_lambda{lambda}_doubling"),
                value: fine.rel_gap,
                limit: coarse.rel_gap,
                pass: fine.rel_gap < coarse.rel_gap || fine.rel_gap <= 1e-12,
            });
        }
    }
    Ok(rep)
}

fn steinhaus(cfg: &RunConfig) -> Out {
    let mut rep = Report::new(vec!["n", "rho", "c", "product_at_c", "bound"]);
    for &rho in &cfg.rho {
        let c = steinhaus_constant(cfg.n, rho)?;
        let bound = 2.0 * (1.0 - rho);
        rep.push(vec![
            json!(cfg.n),
            json!(rho),
            json!(c),
            json!(steinhaus_product(cfg.n, c)),
            json!(bound),
        ]);
        let pass = steinhaus_product(cfg.n, 0.999999 * c) < bound && steinhaus_product(cfg.n, 1.000001 * c) >= bound;
        rep.checks.push(Check {
            name: format!("bracket_rho{rho}"),
            value: c,
            limit: bound,
            pass,
        });
    }
    Ok(rep)
}

fn counterexample(cfg: &RunConfig) -> Out {
    let f = match cfg.profile {
        ProfileKind::Exp => DensityProfile::Exponential {
            scale: cfg.profile_scale,
            rate: cfg.profile_rate,
        },
        ProfileKind::Power => DensityProfile::InversePower {
            scale: cfg.profile_scale,
            power: cfg.profile_rate,
        },
    };
    let opts = RiceOptions {
        density_guard: cfg.density_guard,
        ..RiceOptions::default()
    };
    let seq = rice_sequences_with(cfg.n, &f, cfg.m_max, &opts)?;
    let oracle = build_counterexample(CounterexampleSpec::from_sequences(cfg.n, f, &seq, opts.eps0)?)?;
    let v = verify_counterexample(&oracle, cfg.pairs, cfg.density_samples, cfg.seed)?;
    let spec = &oracle.spec;
    let mut rep = Report::new(vec![
        "m",
        "radius",
        "eps",
        "clearance",
        "block_z",
        "block_t",
        "f",
        "density_estimate",
        "sigma",
        "counted",
        "hits",
        "samples",
        "density_ok",
    ]);
    for (i, d) in v.density.iter().enumerate() {
        rep.push(vec![
            json!(d.m),
            json!(spec.radii[i]),
            json!(spec.eps[i]),
            json!(oracle.certificate.clearance[i]),
            json!(spec.blocks[i].0),
            json!(spec.blocks[i].1),
            json!(d.f),
            json!(d.estimate),
            json!(d.sigma),
            json!(d.counted),
            json!(d.hits),
            json!(d.samples),
            json!(d.ok),
        ]);
    }
    let cert = &oracle.certificate;
    rep.set("certificate", cert);
    rep.set("pairs", v.pairs);
    rep.set("eps_min", v.eps_min);
    rep.set("min_margin", v.min_margin);
    rep.set("center_pairs", v.center_pairs);
    rep.set("center_margin", v.center_margin);
    rep.set("witness", &v.witness);
    rep.checks.push(Check::flag("certified", cert.ok()));
    rep.checks
        .push(Check::above("min_margin", v.min_margin, 2.0 * v.eps_min));
    rep.checks
        .push(Check::above("center_margin", v.center_margin, 2.0 * v.eps_min));
    for d in &v.density {
        rep.checks.push(Check::flag(format!("density_m{}", d.m), d.ok));
    }
    Ok(rep)
}

/// Points from text: one per line as `x_1 … x_n y_1 … y_n t`, separated by
/// whitespace or commas; blank lines and `#` comments are skipped.
pub fn parse_points(text: &str, n: usize) -> Result<Vec<HPoint>, RunError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| RunError::Usage(format!("line {}: {e}", i + 1)))?;
        if nums.len() != 2 * n + 1 {
            return Err(RunError::Usage(format!(
                "line {}: expected {} numbers for n = {n}, found {}",
                i + 1,
                2 * n + 1,
                nums.len()
            )));
        }
        out.push(HPoint::new(nums[..n].to_vec(), nums[n..2 * n].to_vec(), nums[2 * n])?);
    }
    Ok(out)
}

fn distances(cfg: &RunConfig) -> Out {
    let path = cfg.input.as_ref().expect("validated in resolve");
    let text =
        std::fs::read_to_string(path).map_err(|e| RunError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let points = parse_points(&text, cfg.n)?;
    if points.is_empty() {
        return Err(RunError::Usage(format!("{} contains no points", path.display())));
    }
    let d = distance_set_with(&points, cfg.resolution)?;
    let mut rep = Report::new(vec!["distance"]);
    for v in &d {
        rep.push(vec![json!(v)]);
    }
    rep.set("points", points.len());
    rep.set("distances", d.len());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points_with_comments_and_commas() {
        let p = parse_points("# header\n1 2 3 4 5\n\n0,0, 0,0,1 # trailing\n", 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!((p[0].x(), p[0].y(), p[0].t()), (&[1.0, 2.0][..], &[3.0, 4.0][..], 5.0));
        assert!(matches!(parse_points("1 2 x\n", 1), Err(RunError::Usage(_))));
        assert!(matches!(parse_points("1 2 3 4\n", 1), Err(RunError::Usage(_))));
    }

    #[test]
    fn core_errors_map_to_exit_classes() {
        let usage: RunError = Error::InvalidArgument {
            name: "r",
            reason: "bad".into(),
        }
        .into();
        assert!(matches!(usage, RunError::Usage(_)));
        let compute: RunError = Error::SearchFailed("none".into()).into();
        assert!(matches!(compute, RunError::Compute(_)));
    }
}
