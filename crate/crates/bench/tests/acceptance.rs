//! Acceptance checks. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero when any criterion fails.

use std::time::{Duration, Instant};

use ndarray::ArrayView1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restart_bench::config::{ExperimentConfig, MethodKind, Settings};
use restart_bench::experiment::compare;
use restart_core::bounds::{
    accelerated_bound, bound_adaptive, bound_generic, bound_gradient_descent, bound_holder, bound_linear_schedule,
    bound_rounded, bound_smooth, optimal_holder_constant, optimal_restart_constant, restart_count,
    schedule_threshold_holder, schedule_total, universal_bound, universal_constant, ACCELERATED_CONSTANT,
};
use restart_core::problems::{
    make_least_squares, make_norm, make_norm_power, make_quadratic, synthetic_classification, ProblemInstance,
};
use restart_core::regularity::{check_sharpness_bound, check_upper_bound, gradient_check_error};
use restart_core::restarts::{adaptive_grid, criterion_restart, optimal_schedule_smooth, restart_scheduled};
use restart_core::solvers::{accelerated, universal_fast_gradient};
use restart_core::{DerivedConditioning, Trace};

/// Relative slack allowed on every bound comparison.
const BOUND_SLACK: f64 = 1e-9;

type Outcome = Result<String, String>;

/// Name, runtime limit and check of one criterion.
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn within(value: f64, bound: f64) -> bool {
    value <= bound * (1.0 + BOUND_SLACK)
}

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn gap(trace: &Trace) -> f64 {
    trace.final_gap().expect("optimum attached")
}

fn smooth_conditioning(p: &ProblemInstance) -> DerivedConditioning {
    p.regularity.expect("declared regularity").conditioning().unwrap()
}

fn quadratic_instance() -> ProblemInstance {
    make_quadratic(50, 100.0, 1).unwrap()
}

fn fourth_power_instance() -> ProblemInstance {
    make_norm_power(10, 4.0, 1.0).unwrap()
}

fn bound_dominance_smooth() -> Outcome {
    let p = quadratic_instance();
    let cond = smooth_conditioning(&p);
    ensure(cond.tau == 0.0, || format!("expected τ = 0, got {}", cond.tau))?;
    let gap0 = p.initial_gap().unwrap();
    let schedule = optimal_schedule_smooth(&cond, gap0, ACCELERATED_CONSTANT).map_err(|e| e.to_string())?;
    let n = 2000;
    let trace = restart_scheduled(p.oracle.as_ref(), &p.initial_point, &schedule, n, 1.0)
        .map_err(|e| e.to_string())?
        .with_optimum(0.0);
    let mut checked = 0;
    let restarts = trace.entries.iter().filter(|e| e.restart);
    for (k, (entry, cycle)) in restarts.zip(&trace.cycles).enumerate() {
        if cycle.planned != Some(cycle.iterations) {
            continue;
        }
        let k = (k + 1) as f64;
        let target = (-2.0 * k).exp() * gap0;
        ensure(within(entry.gap.unwrap(), target), || {
            format!("restart {k}: gap {:e} > e^(-2k)·gap0 = {target:e}", entry.gap.unwrap())
        })?;
        checked += 1;
    }
    ensure(checked >= 10, || format!("only {checked} complete cycles"))?;
    let envelope = bound_smooth(&cond, gap0, ACCELERATED_CONSTANT, n as f64);
    ensure(within(gap(&trace), envelope), || {
        format!("final gap {:e} > envelope {envelope:e}", gap(&trace))
    })?;
    Ok(format!(
        "κ={:.0}, t_k={}, {checked} restart points within e^(-2k)·gap0, final gap {:.3e} ≤ {envelope:.3e}",
        cond.kappa,
        schedule.iterations(1),
        gap(&trace)
    ))
}

fn bound_dominance_holder() -> Outcome {
    let p = fourth_power_instance();
    let reg = p.regularity.unwrap();
    ensure(reg.l == 12.0 && reg.mu == 1.0, || {
        format!("declared L={}, μ={}", reg.l, reg.mu)
    })?;
    let cond = reg.conditioning().unwrap();
    ensure(cond.tau == 0.5, || format!("τ = {}", cond.tau))?;
    let gap0 = p.initial_gap().unwrap();
    let schedule = optimal_schedule_smooth(&cond, gap0, ACCELERATED_CONSTANT).map_err(|e| e.to_string())?;
    let mut report = Vec::new();
    let mut last = f64::NAN;
    for n in [100, 500, 2000] {
        let trace = restart_scheduled(p.oracle.as_ref(), &p.initial_point, &schedule, n, 1.0)
            .map_err(|e| e.to_string())?
            .with_optimum(0.0);
        let envelope = bound_smooth(&cond, gap0, ACCELERATED_CONSTANT, n as f64);
        ensure(within(gap(&trace), envelope), || {
            format!("N={n}: gap {:e} > envelope {envelope:e}", gap(&trace))
        })?;
        report.push(format!("N={n}: {:.2e} ≤ {envelope:.2e}", gap(&trace)));
        last = gap(&trace);
    }
    let plain = accelerated(p.oracle.as_ref(), &p.initial_point, 1.0, 2000)
        .map_err(|e| e.to_string())?
        .with_optimum(0.0);
    ensure(gap(&plain) >= 10.0 * last, || {
        format!("AGM gap {:e} < 10 × restarted {last:e}", gap(&plain))
    })?;
    Ok(format!(
        "{}; AGM at N=2000 {:.2e} ≥ 10 × {last:.2e}",
        report.join(", "),
        gap(&plain)
    ))
}

fn adaptive_grid_bound() -> Outcome {
    let p = fourth_power_instance();
    let cond = smooth_conditioning(&p);
    let gap0 = p.initial_gap().unwrap();
    let n = 1000;
    let outcome = adaptive_grid(p.oracle.as_ref(), &p.initial_point, n, 1.0).map_err(|e| e.to_string())?;
    let best = outcome.best_trace().clone().with_optimum(0.0);
    let envelope = bound_adaptive(&cond, gap0, ACCELERATED_CONSTANT, n as f64);
    ensure(within(gap(&best), envelope), || {
        format!("best gap {:e} > envelope {envelope:e}", gap(&best))
    })?;
    let log_floor = (n as f64).log2().floor();
    let log_ceil = (n as f64).log2().ceil();
    let limit = log_floor * (log_ceil + 1.0) * 2.0 * n as f64;
    let work = outcome.total_inner_iterations as f64;
    ensure(work <= limit, || format!("total work {work} > {limit}"))?;
    Ok(format!(
        "best S({},{}) gap {:.2e} ≤ {envelope:.2e}; work {work} ≤ {limit}",
        outcome.best.0,
        outcome.best.1,
        gap(&best)
    ))
}

fn criterion_against_schedule(p: &ProblemInstance, n: usize) -> Outcome {
    let cond = smooth_conditioning(p);
    let gap0 = p.initial_gap().unwrap();
    let c = universal_constant(cond.s);
    let gamma = cond.q;
    let trace =
        criterion_restart(p.oracle.as_ref(), &p.initial_point, 0.0, gamma, n, 1.0).map_err(|e| e.to_string())?;
    let last = trace.cycles.len().saturating_sub(1);
    let mut planned = 0.0;
    for (k, cycle) in trace.cycles.iter().enumerate() {
        planned += schedule_threshold_holder(&cond, gap0, c, gamma, (k + 1) as f64).ceil();
        let truncated = k == last && cycle.end_iteration == n;
        if truncated && cycle.reached_target != Some(true) {
            continue;
        }
        ensure(cycle.reached_target == Some(true), || {
            format!("{}: target {} not reached", p.name(), k + 1)
        })?;
        ensure(cycle.end_iteration as f64 <= planned, || {
            format!(
                "{}: target {} reached at {} > Σ⌈t̄_i⌉ = {planned}",
                p.name(),
                k + 1,
                cycle.end_iteration
            )
        })?;
    }
    let envelope = bound_holder(&cond, gap0, c, n as f64);
    ensure(within(gap(&trace), envelope), || {
        format!("{}: final gap {:e} > envelope {envelope:e}", p.name(), gap(&trace))
    })?;
    Ok(format!(
        "{} N={n}: {} targets, gap {:.2e} ≤ {envelope:.2e}",
        p.name(),
        trace.cycles.len(),
        gap(&trace)
    ))
}

fn criterion_dominance() -> Outcome {
    let a = criterion_against_schedule(&quadratic_instance(), 2000)?;
    let b = criterion_against_schedule(&fourth_power_instance(), 300)?;
    Ok(format!("{a}; {b}"))
}

fn inner_solver_guarantees() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut points = 0usize;
    for instance in 0..20u64 {
        let dim = rng.gen_range(5..=60);
        let kappa = 10f64.powf(rng.gen_range(0.0..4.0));
        let l0 = 10f64.powf(rng.gen_range(-2.0..0.0));
        let p = make_quadratic(dim, kappa, 100 + instance).unwrap();
        let lipschitz = p.lipschitz.unwrap();
        let d = p.initial_distance().unwrap();
        let trace = accelerated(p.oracle.as_ref(), &p.initial_point, l0, 400).map_err(|e| e.to_string())?;
        for e in &trace.entries {
            let bound = accelerated_bound(ACCELERATED_CONSTANT, lipschitz, d, e.iteration as f64);
            ensure(within(e.value, bound), || {
                format!(
                    "quadratic {instance} (n={dim}, κ={kappa:.1}): t={} value {:e} > {bound:e}",
                    e.iteration, e.value
                )
            })?;
            points += 1;
        }
    }
    for dim in [1, 5] {
        let p = make_norm(dim).unwrap();
        let reg = p.regularity.unwrap();
        let c = universal_constant(reg.s);
        let d = p.initial_distance().unwrap();
        for eps in [1e-1, 1e-2, 1e-3] {
            let horizon = ((c * reg.l * reg.l * d * d / (eps * eps)).ceil() as usize).min(4000);
            let trace = universal_fast_gradient(p.oracle.as_ref(), &p.initial_point, eps, 1.0, horizon, None)
                .map_err(|e| e.to_string())?;
            for e in &trace.entries {
                let bound = universal_bound(c, reg.s, reg.l, d, eps, e.iteration as f64);
                ensure(within(e.value, bound), || {
                    format!(
                        "‖x‖ in R^{dim}, ε={eps}: t={} value {:e} > {bound:e}",
                        e.iteration, e.value
                    )
                })?;
                points += 1;
            }
            let stop = move |_: ArrayView1<'_, f64>, v: f64| v <= eps;
            let stopped =
                universal_fast_gradient(p.oracle.as_ref(), &p.initial_point, eps, 1.0, 1_000_000, Some(&stop))
                    .map_err(|e| e.to_string())?;
            ensure(stopped.final_value() <= eps, || {
                format!("‖x‖ in R^{dim}: ε={eps} never reached")
            })?;
        }
    }
    Ok(format!("{points} iterates checked, 0 violations"))
}

fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn schedule_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = ACCELERATED_CONSTANT;
    let (mut inversion, mut continuity) = (0.0f64, 0.0f64);
    for case in 0..10_000 {
        let constant = 10f64.powf(rng.gen_range(0.0..3.0));
        let alpha = if rng.gen_bool(0.25) {
            0.0
        } else {
            rng.gen_range(1e-3..2.0)
        };
        let cycles = rng
            .gen_range(0.5..60.0f64)
            .min(if alpha > 0.0 { 200.0 / alpha } else { f64::MAX });
        let total = schedule_total(constant, alpha, cycles);
        inversion = inversion
            .max(relative_error(restart_count(constant, alpha, total), cycles))
            .max(relative_error(
                schedule_total(constant, alpha, restart_count(constant, alpha, total)),
                total,
            ));

        let nu = 10f64.powf(rng.gen_range(-3.0..3.0));
        let gamma = rng.gen_range(0.1..4.0);
        let rounded = bound_rounded(nu, gamma, constant, alpha, total);
        let real = bound_linear_schedule(nu, gamma, constant, alpha, total);
        ensure(rounded >= real, || {
            format!("case {case}: rounded {rounded:e} < unrounded {real:e} (C={constant}, α={alpha}, N={total})")
        })?;

        let kappa = 10f64.powf(rng.gen_range(0.0..3.0));
        let gap0 = 10f64.powf(rng.gen_range(-1.0..1.0));
        // Horizons of up to five cycles of the optimal schedule: the two
        // branches drift apart like τ·R², so longer horizons need smaller τ.
        let r = rng.gen_range(0.0..5.0);
        let flat = DerivedConditioning::from_parts(kappa, 0.0, 2.0).unwrap();
        let near = DerivedConditioning::from_parts(kappa, 1e-6, 2.0).unwrap();
        let flat1 = DerivedConditioning::from_parts(kappa, 0.0, 1.0).unwrap();
        let near1 = DerivedConditioning::from_parts(kappa, 1e-6, 1.0).unwrap();
        let c1 = universal_constant(1.0);
        let n_smooth = r * optimal_restart_constant(&flat, gap0, c);
        let n_holder1 = r * optimal_holder_constant(&flat1, gap0, c1);
        let n_gd = r * kappa * std::f64::consts::E;
        let generic = |cond: &DerivedConditioning, alpha: f64| {
            bound_generic(cond, gap0, c, optimal_restart_constant(cond, gap0, c), alpha, n_smooth).value
        };
        let pairs = [
            (
                "smooth",
                bound_smooth(&flat, gap0, c, n_smooth),
                bound_smooth(&near, gap0, c, n_smooth),
            ),
            ("generic", generic(&flat, 0.0), generic(&near, 1e-6)),
            (
                "holder s=2",
                bound_holder(&flat, gap0, c, n_smooth),
                bound_holder(&near, gap0, c, n_smooth),
            ),
            (
                "holder s=1",
                bound_holder(&flat1, gap0, c1, n_holder1),
                bound_holder(&near1, gap0, c1, n_holder1),
            ),
            (
                "gd",
                bound_gradient_descent(&flat, gap0, n_gd),
                bound_gradient_descent(&near, gap0, n_gd),
            ),
            (
                "linear schedule",
                bound_linear_schedule(nu, gamma, constant, 0.0, r * constant),
                bound_linear_schedule(nu, gamma, constant, 1e-6, r * constant),
            ),
        ];
        for (name, a, b) in pairs {
            let err = relative_error(a, b);
            ensure(err <= 1e-4, || {
                format!("case {case}: {name} τ→0 gap {err:e} ({a:e} vs {b:e})")
            })?;
            continuity = continuity.max(err);
        }
    }
    ensure(inversion <= 1e-12, || format!("inversion error {inversion:e}"))?;
    Ok(format!(
        "10000 cases: inversion ≤ {inversion:.1e}, rounded ≥ unrounded, τ→0 continuity ≤ {continuity:.1e}"
    ))
}

fn qualitative_comparison() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let settings: Settings = [
        ("problem", "synthetic"),
        ("rows", "208"),
        ("cols", "60"),
        ("conditioning", "1000"),
        ("loss", "least-squares"),
        ("methods", "grad,acc,mono,grid"),
        ("N", "3000"),
        ("seed", "0"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .chain([("out".to_string(), dir.path().display().to_string())])
    .collect();
    let config = ExperimentConfig::from_settings(settings).map_err(|e| e.to_string())?;
    let report = compare(&config).map_err(|e| e.to_string())?;
    ensure(report.failures() == 0, || {
        format!("{} methods failed", report.failures())
    })?;
    let run = |m| report.run(m).unwrap();
    let f_star = run(MethodKind::Acc).trace.final_value() - run(MethodKind::Acc).final_gap().unwrap();
    // Gaps below a few ulps of f* are rounding noise and compare as equal.
    let floor = 64.0 * f64::EPSILON * f_star.abs().max(1.0);
    let (grid, mono, acc) = (
        run(MethodKind::Grid).final_gap().unwrap(),
        run(MethodKind::Mono).final_gap().unwrap(),
        run(MethodKind::Acc).final_gap().unwrap(),
    );
    ensure(grid <= mono + floor, || format!("grid {grid:e} > mono {mono:e}"))?;
    ensure(mono <= acc + floor, || format!("mono {mono:e} > acc {acc:e}"))?;
    for m in [MethodKind::Grid, MethodKind::Mono] {
        ensure(run(m).trace.entries.iter().any(|e| e.restart), || {
            format!("{m}: no restart markers")
        })?;
    }
    ensure(report.summary_path.exists(), || "summary.csv missing".into())?;
    Ok(format!(
        "grid {grid:.2e} ≤ mono {mono:.2e} ≤ acc {acc:.2e}; restart markers present"
    ))
}

fn regularity_validation() -> Outcome {
    let data = synthetic_classification(208, 60, 10.0, 3).unwrap();
    let instances = [
        quadratic_instance(),
        make_quadratic(10, 1000.0, 2).unwrap(),
        fourth_power_instance(),
        make_norm_power(5, 3.0, 2.0).unwrap(),
        make_norm(1).unwrap(),
        make_norm(5).unwrap(),
        make_least_squares(&data).unwrap(),
    ];
    let mut worst = 0.0f64;
    for (seed, p) in instances.iter().enumerate() {
        let reg = p.regularity.expect("declared regularity");
        let points = p.region.as_ref().expect("region").sample(100, seed as u64 + 11);
        let distance = p.distance.as_ref().unwrap();
        let name = p.name();
        ensure(
            check_sharpness_bound(p.oracle.as_ref(), &reg, &points, |x| distance(x)).map_err(|e| e.to_string())?,
            || format!("{name}: sharpness bound violated"),
        )?;
        ensure(
            check_upper_bound(p.oracle.as_ref(), &reg, &points, |x| distance(x)).map_err(|e| e.to_string())?,
            || format!("{name}: upper bound violated"),
        )?;
        let fd = gradient_check_error(p.oracle.as_ref(), &points, 1e-6);
        ensure(fd <= 1e-5, || format!("{name}: finite-difference error {fd:e}"))?;
        worst = worst.max(fd);
    }
    Ok(format!(
        "{} instances × 100 points; worst finite-difference error {worst:.1e}",
        instances.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("bound dominance τ=0", Duration::from_secs(5), bound_dominance_smooth),
        ("bound dominance τ>0", Duration::from_secs(10), bound_dominance_holder),
        ("adaptive grid", Duration::from_secs(60), adaptive_grid_bound),
        ("criterion restart", Duration::from_secs(10), criterion_dominance),
        ("inner solvers", Duration::from_secs(30), inner_solver_guarantees),
        ("schedule algebra", Duration::from_secs(5), schedule_algebra),
        (
            "qualitative comparison",
            Duration::from_secs(60),
            qualitative_comparison,
        ),
        ("regularity validation", Duration::from_secs(5), regularity_validation),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= *limit {
                Ok(detail)
            } else {
                Err(format!(
                    "{detail}; took {:.2}s > {}s",
                    elapsed.as_secs_f64(),
                    limit.as_secs()
                ))
            }
        });
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {} ({name}): {detail} [{:.2}s]",
                k + 1,
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {} ({name}): {detail} [{:.2}s]",
                    k + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
