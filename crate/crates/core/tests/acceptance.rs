//! Acceptance checks. `cargo test --release --test acceptance` prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use koranyi_core::distance_sets::{
    desk_counterexample, steinhaus_constant, steinhaus_product, verify_counterexample, DensityProfile,
    STEINHAUS_BRACKET,
};
use koranyi_core::special::asymptotic::{laguerre_asymptotic, mu, regime_interior_point, Regime};
use koranyi_core::special::laguerre::{laguerre_normalized, laguerre_weighted};
use koranyi_core::spectral::{
    decay_fit_from, decay_points, linear_phase_modulus, low_freq_check, rk_coefficient, van_der_corput_check,
    SpectralCoeff,
};
use koranyi_core::weyl::{
    verify_plancherel_weyl, verify_twisted_identity, verify_twisted_identity_with, verify_weyl_laguerre,
    HeisenbergProfile, RadialProfile, DEFAULT_GRID_POINTS,
};
use koranyi_core::{koranyi_dist, HPoint};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> HPoint {
    let mut c = || scale * (2.0 * rng.random::<f64>() - 1.0);
    let x = (0..n).map(|_| c()).collect();
    let y = (0..n).map(|_| c()).collect();
    let t = c();
    HPoint::new(x, y, t).unwrap()
}

fn coord_scale(ps: &[&HPoint]) -> f64 {
    ps.iter()
        .map(|p| p.x().iter().chain(p.y()).fold(p.t().abs(), |m, c| m.max(c.abs())))
        .fold(1.0, f64::max)
}

fn group_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tol = 1e-12;
    let mut worst = [0.0f64; 5];
    for i in 0..10_000 {
        let n = 1 + i % 3;
        let (p, q, s) = (
            random_point(&mut rng, n, 10.0),
            random_point(&mut rng, n, 10.0),
            random_point(&mut rng, n, 10.0),
        );
        let scale = coord_scale(&[&p, &q, &s]);
        let lhs = p.mul(&q).unwrap().mul(&s).unwrap();
        let rhs = p.mul(&q.mul(&s).unwrap()).unwrap();
        worst[0] = worst[0].max(lhs.max_coord_diff(&rhs) / (scale * scale));

        let e = HPoint::origin(n);
        let id = p
            .mul(&e)
            .unwrap()
            .max_coord_diff(&p)
            .max(e.mul(&p).unwrap().max_coord_diff(&p));
        let inv = p.mul(&p.inverse()).unwrap().max_coord_diff(&e);
        worst[1] = worst[1].max((id + inv) / scale);

        let d = koranyi_dist(&p, &q).unwrap();
        let moved = koranyi_dist(&s.mul(&p).unwrap(), &s.mul(&q).unwrap()).unwrap();
        worst[2] = worst[2].max((moved - d).abs() / scale);

        let r = 10f64.powf(4.0 * rng.random::<f64>() - 2.0);
        let np = p.koranyi_norm();
        worst[3] = worst[3].max((p.dilate(r).unwrap().koranyi_norm() - r * np).abs() / (r * np));

        let lhs = p.mul(&q).unwrap().dilate(r).unwrap();
        let rhs = p.dilate(r).unwrap().mul(&q.dilate(r).unwrap()).unwrap();
        worst[4] = worst[4].max(lhs.max_coord_diff(&rhs) / (r * r * scale * scale));
    }
    let detail = format!(
        "10^4 triples; assoc {:.1e}, identity/inverse {:.1e}, left-invariance {:.1e}, homogeneity {:.1e}, automorphism {:.1e}",
        worst[0], worst[1], worst[2], worst[3], worst[4]
    );
    check(worst.iter().all(|&w| w <= tol), detail)
}

fn laguerre_bound() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=3usize {
        for k in 0..=300usize {
            let xmax = 2.0 * mu(k, n) + 40.0;
            for i in 0..200 {
                let x = xmax * i as f64 / 199.0;
                let a = laguerre_normalized(k, n, x).abs();
                let b = if x > 0.0 {
                    libm::tgamma(n as f64) * laguerre_weighted(k, n, x).abs() / x.powi(n as i32 - 1)
                } else {
                    a
                };
                worst = worst.max(a).max(b);
            }
        }
    }
    check(
        worst <= 1.0 + 1e-9,
        format!("max Γ(n)|w_k(x)|/x^(n-1) = {worst:.12} over k ≤ 300, n ≤ 3"),
    )
}

fn max_rel_error(regime: Regime, k: usize, n: usize) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let x = regime_interior_point(regime, k, n, i as f64 / 40.0);
        let a = laguerre_asymptotic(k, n, x).map_err(|e| e.to_string())?;
        if a.regime != regime {
            return Err(format!("{regime} k={k} n={n}: x={x} classified as {}", a.regime));
        }
        worst = worst.max((a.value - laguerre_weighted(k, n, x)).abs() / a.envelope);
    }
    Ok(worst)
}

fn asymptotic_convergence() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=2 {
        for regime in Regime::ALL {
            let e50 = max_rel_error(regime, 50, n)?;
            let e200 = max_rel_error(regime, 200, n)?;
            ok &= e200 < e50;
            parts.push(format!("{regime}/n{n} {e50:.1e}->{e200:.1e}"));
        }
    }
    check(ok, parts.join(", "))
}

fn low_frequency() -> Outcome {
    let tol = 1e-8;
    let mut worst = 0.0f64;
    let mut count = 0;
    for k in 0..=50usize {
        let m = mu(k, 1);
        let lambdas: Vec<f64> = (0..=16).map(|i| 10f64.powf(-6.0 + 0.25 * i as f64) / m).collect();
        let rep = low_freq_check(1, &[k], &lambdas, 0.01 * (1.0 + 1e-9), tol).map_err(|e| e.to_string())?;
        worst = worst.max(rep.max_deviation_ratio);
        count += rep.points.len();
    }
    check(
        worst <= 10.0,
        format!("{count} points, max |R_k − 1|/√(μλ) = {worst:.3}"),
    )
}

fn parallel_coeffs(points: &[(usize, f64)], n: usize, r: f64, tol: f64) -> Result<Vec<SpectralCoeff>, String> {
    let threads = std::thread::available_parallelism().map_or(4, |t| t.get());
    let chunk = points.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|c| {
                s.spawn(move || {
                    c.iter()
                        .map(|&(k, l)| rk_coefficient(k, n, l, r, tol))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(points.len());
        for h in handles {
            for c in h.join().expect("worker panicked") {
                out.push(c.map_err(|e| e.to_string())?);
            }
        }
        Ok(out)
    })
}

fn decay_law() -> Outcome {
    let ks = [0usize, 10, 30, 100, 300, 1000];
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, limit) in [(1usize, -0.25 + 0.15), (2, -0.75 + 0.15)] {
        let pts = decay_points(n, &ks, 1.0, 1e2, 1e5, 16);
        let coeffs = parallel_coeffs(&pts, n, 1.0, 1e-10)?;
        let fit = decay_fit_from(n, &coeffs, 1e2 * (1.0 - 1e-9)).map_err(|e| e.to_string())?;
        ok &= fit.slope <= limit;
        parts.push(format!(
            "n={n} slope {:.3} (limit {limit:.2}, target {:.2}, r² {:.3}, {} samples)",
            fit.slope,
            fit.target_exponent,
            fit.r_squared,
            fit.samples.len()
        ));
    }
    check(ok, parts.join("; "))
}

fn dilation_covariance() -> Outcome {
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(1..=3usize);
        let k = rng.random_range(0..=200usize);
        let lambda = 10f64.powf(rng.random_range(-2.0..3.0));
        let r = rng.random_range(0.3..3.0);
        let a = rk_coefficient(k, n, lambda, r, tol).map_err(|e| e.to_string())?;
        let b = rk_coefficient(k, n, lambda * r * r, 1.0, tol).map_err(|e| e.to_string())?;
        worst = worst.max((a.value - b.value).abs());
    }
    check(
        worst <= 10.0 * tol,
        format!("50 configurations, max |Δ| = {worst:.2e} (limit {:.0e})", 10.0 * tol),
    )
}

fn weyl_identities() -> Outcome {
    let e = |e: koranyi_core::Error| e.to_string();
    let mut ok = true;
    let mut worst_wl = 0.0f64;
    for k in 0..=3 {
        for lambda in [1.0, -2.0] {
            let a = verify_weyl_laguerre(k, lambda, 12).map_err(e)?;
            let b = verify_weyl_laguerre(k, lambda, 24).map_err(e)?;
            worst_wl = worst_wl.max(a.max_abs_deviation).max(b.max_abs_deviation);
            // Exact at every N; doubling must not move it off round-off.
            ok &= b.max_abs_deviation <= a.max_abs_deviation + 1e-12;
        }
    }
    ok &= worst_wl <= 1e-4;

    let g = RadialProfile::Gaussian { a: 1.0 / 12.0 };
    let p8 = verify_plancherel_weyl(&g, 1.0, 8).map_err(e)?;
    let p16 = verify_plancherel_weyl(&g, 1.0, 16).map_err(e)?;
    ok &= p16.rel_gap <= 1e-3 && p16.rel_gap < p8.rel_gap;

    let mut twisted = Vec::new();
    let cases = [
        (HeisenbergProfile::Gaussian { a: 0.5, b: 1.0 }, 0usize),
        (HeisenbergProfile::Gaussian { a: 0.5, b: 1.0 }, 2),
        (
            HeisenbergProfile::SmoothBall {
                radius: 1.5,
                width: 0.3,
            },
            1,
        ),
    ];
    // Radial profiles have diagonal transforms, so the column norm does not
    // depend on N; the gap is set by the grid and must shrink as it doubles.
    for (p, k) in &cases {
        let r6 = verify_twisted_identity(p, 1.0, *k, 6).map_err(e)?;
        let r12 = verify_twisted_identity(p, 1.0, *k, 12).map_err(e)?;
        let coarse = verify_twisted_identity_with(p, 1.0, *k, 12, DEFAULT_GRID_POINTS / 2).map_err(e)?;
        ok &= r12.rel_gap <= 1e-3 && r12.rel_gap <= r6.rel_gap + 1e-12;
        ok &= r12.rel_gap < coarse.rel_gap || r12.rel_gap <= 1e-12;
        twisted.push(format!(
            "grid {:.1e}->{:.1e}, N {:.1e}->{:.1e}",
            coarse.rel_gap, r12.rel_gap, r6.rel_gap, r12.rel_gap
        ));
    }
    check(
        ok,
        format!(
            "Weyl-Laguerre max dev {worst_wl:.1e}; Plancherel N=8 {:.1e} -> N=16 {:.1e}; twisted [{}]",
            p8.rel_gap,
            p16.rel_gap,
            twisted.join(", ")
        ),
    )
}

fn steinhaus() -> Outcome {
    let e = |e: koranyi_core::Error| e.to_string();
    let c = steinhaus_constant(1, 0.25).map_err(e)?;
    let rhs = 2.0 * (1.0 - 0.25);
    let bracket = steinhaus_product(1, c * 0.999999) < rhs
        && steinhaus_product(1, c * 1.000001) >= rhs
        && steinhaus_product(1, c - STEINHAUS_BRACKET) < rhs
        && steinhaus_product(1, c + STEINHAUS_BRACKET) >= rhs;
    let mut mono_rho = true;
    for n in 1..=3 {
        let cs: Vec<f64> = [0.05, 0.1, 0.2, 0.3, 0.4, 0.499]
            .iter()
            .map(|&r| steinhaus_constant(n, r))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        mono_rho &= cs.windows(2).all(|w| w[1] < w[0]);
    }
    let by_n: Vec<f64> = (1..=4)
        .map(|n| steinhaus_constant(n, 0.25))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let mono_n = by_n.windows(2).all(|w| w[1] < w[0]);
    let in_range = c > 0.10 && c < 0.14;
    check(
        bracket && mono_rho && mono_n && in_range,
        format!("c(1, 0.25) = {c:.10}; bracket {bracket}, monotone in ρ {mono_rho}, in n {mono_n}"),
    )
}

fn counterexample() -> Outcome {
    let e = |e: koranyi_core::Error| e.to_string();
    let oracle = desk_counterexample(1, DensityProfile::DESK, 2).map_err(e)?;
    let cert = oracle.certificate.clone();
    let rep = verify_counterexample(&oracle, 100_000, 200_000, 9).map_err(e)?;
    let density: Vec<String> = rep
        .density
        .iter()
        .map(|d| {
            format!(
                "m={} est {:.2e} vs f {:.2e} ({})",
                d.m,
                d.estimate,
                d.f,
                if d.ok { "ok" } else { "low" }
            )
        })
        .collect();
    let ok = cert.ok()
        && rep.ok
        && rep.pairs >= 100_000
        && rep.min_margin > 2.0 * rep.eps_min
        && rep.density.iter().all(|d| d.ok);
    check(
        ok,
        format!(
            "R = {:?}; certified {}; {} pairs, margin {:.3e} > 2ε_min {:.3e}; {}",
            oracle.spec.radii,
            cert.ok(),
            rep.pairs,
            rep.min_margin,
            2.0 * rep.eps_min,
            density.join("; ")
        ),
    )
}

fn van_der_corput() -> Outcome {
    let e = |e: koranyi_core::Error| e.to_string();
    let mut closed = 0.0f64;
    for &l in &[0.5, 1.0, 3.0, PI, 10.0, 37.0, 200.0, 1000.0] {
        let exact = (Complex64::new(0.0, l).exp() - 1.0).norm() / l;
        let rep = van_der_corput_check(l, |s| l * s, |_| 1.0, 0.0, 1.0, 1e-13).map_err(e)?;
        closed = closed
            .max((rep.integral_modulus - exact).abs())
            .max((linear_phase_modulus(l) - exact).abs());
    }
    // Φ(θ) = ¼λ sin θ on [0, π/3]: Φ′ = ¼λ cos θ decreases from ¼λ to λ/8.
    let mut ratios = Vec::new();
    for lambda in [1e2, 1e3, 1e4] {
        let rep = van_der_corput_check(
            lambda / 8.0,
            |t| 0.25 * lambda * t.sin(),
            f64::cos,
            0.0,
            FRAC_PI_2 * 2.0 / 3.0,
            1e-12,
        )
        .map_err(e)?;
        ratios.push(rep.ratio);
    }
    let ok = closed <= 1e-12 && ratios.iter().all(|&r| r <= 1.0);
    check(
        ok,
        format!(
            "closed-form error {closed:.1e}; ratios {:?}",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("group and metric axioms", group_axioms, Duration::from_secs(1)),
        ("normalized Laguerre bound", laguerre_bound, Duration::from_secs(10)),
        (
            "asymptotic convergence",
            asymptotic_convergence,
            Duration::from_secs(30),
        ),
        ("unit-mass low-frequency limit", low_frequency, Duration::from_secs(120)),
        ("decay law", decay_law, Duration::from_secs(600)),
        ("dilation covariance", dilation_covariance, Duration::from_secs(60)),
        ("Weyl identities", weyl_identities, Duration::from_secs(300)),
        ("Steinhaus constant", steinhaus, Duration::from_secs(1)),
        (
            "distance-avoiding counterexample",
            counterexample,
            Duration::from_secs(600),
        ),
        ("van der Corput", van_der_corput, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) => (took <= *budget, d),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2}: {name} [{:.2?} / {:?}] {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            took,
            budget
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
