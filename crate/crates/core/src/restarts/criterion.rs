use crate::solvers::{universal_fast_gradient, validate_start, Cycle, Diagnostic, Trace};
use crate::{Error, Point, ProximalOracle, RegularityParams, Result};

/// `γ = q` when the smoothness exponent is known, `γ = 1` otherwise.
pub fn default_criterion_gamma(params: Option<&RegularityParams>) -> f64 {
    params.map_or(1.0, |p| crate::regularity::optimal_rate_exponent(p.s))
}

/// Restarts on a termination criterion (`x_k = C(x_{k−1}, ε_k)`).
///
/// With `ε0 = f(x0) − f*`, each cycle sets `ε_k = e^(−γ) ε_{k−1}` and runs the
/// Universal Fast Gradient Method with target `ε_k` until `f(y) − f* ≤ ε_k`.
/// A cycle whose starting point already meets its target uses no
/// iterations. Runs stop when `n` accepted iterations are spent.
///
/// A wrong `f_star` does not abort the run: iterates below it are reported
/// as [`Diagnostic::BelowSuppliedOptimum`] and cycles that run out of budget
/// as [`Diagnostic::TargetNotReached`].
pub fn criterion_restart<O>(oracle: &O, x0: &Point, f_star: f64, gamma: f64, n: usize, l0: f64) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    validate_start(oracle, x0, l0, n.max(1))?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be nonnegative, got {gamma}"
        )));
    }
    if !f_star.is_finite() {
        return Err(Error::InvalidArgument(format!("f_star must be finite, got {f_star}")));
    }
    let initial_value = oracle.value(x0.view());
    if !initial_value.is_finite() {
        return Err(Error::Divergence { iteration: 0 });
    }
    let slack = 1e-12 * f_star.abs().max(1.0);
    let mut trace = Trace::empty(x0.clone(), initial_value, l0);
    let eps0 = initial_value - f_star;
    if eps0 < -slack {
        trace.diagnostics.push(Diagnostic::BelowSuppliedOptimum {
            iteration: 0,
            value: initial_value,
        });
    }
    if eps0 <= 0.0 {
        return Ok(trace.with_optimum(f_star));
    }

    let decay = (-gamma).exp();
    let mut epsilon = eps0;
    for k in 1.. {
        let used = trace.iterations();
        let current_gap = trace.final_value() - f_star;
        if used >= n || current_gap <= 0.0 {
            break;
        }
        let previous = epsilon;
        epsilon *= decay;
        if current_gap <= epsilon {
            if epsilon == previous {
                // γ = 0: every further cycle would be empty.
                break;
            }
            trace.cycles.push(Cycle {
                planned: None,
                iterations: 0,
                end_iteration: used,
                epsilon_target: Some(epsilon),
                end_value: trace.final_value(),
                reached_target: Some(true),
            });
            continue;
        }
        let target = epsilon;
        let stop = move |_: ndarray::ArrayView1<'_, f64>, value: f64| value - f_star <= target;
        let inner = universal_fast_gradient(
            oracle,
            &trace.final_point,
            epsilon,
            trace.final_lipschitz,
            n - used,
            Some(&stop),
        )?;
        let reached = inner.final_value() - f_star <= epsilon;
        let stalled = inner.stalled();
        let iterations = inner.iterations();
        trace.push_cycle(
            inner,
            Cycle {
                planned: None,
                iterations,
                end_iteration: 0,
                epsilon_target: Some(epsilon),
                end_value: 0.0,
                reached_target: Some(reached),
            },
        );
        if !reached {
            trace.diagnostics.push(Diagnostic::TargetNotReached {
                cycle: k,
                target: epsilon,
            });
        }
        if stalled || !reached {
            break;
        }
    }

    if let Some(e) = trace.entries.iter().find(|e| e.value < f_star - slack) {
        trace.diagnostics.push(Diagnostic::BelowSuppliedOptimum {
            iteration: e.iteration,
            value: e.value,
        });
    }
    Ok(trace.with_optimum(f_star))
}
