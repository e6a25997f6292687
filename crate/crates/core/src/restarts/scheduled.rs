use crate::restarts::Schedule;
use crate::solvers::validate_start;
use crate::solvers::{universal_fast_gradient, Cycle, Diagnostic, Trace};
use crate::{Error, Point, ProximalOracle, Result};

/// When a scheduled run stops.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Budget {
    /// Stop after the first cycle that brings the total to at least this.
    pub target: usize,
    /// Hard cap; the cycle crossing it is truncated.
    pub cap: usize,
}

/// Accuracy targets `ε_k = e^(−γ) ε_{k−1}` for Hölder restarts.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Targets {
    pub eps0: f64,
    pub gamma: f64,
}

pub(crate) fn run_cycles<O>(
    oracle: &O,
    x0: &Point,
    schedule: &Schedule,
    budget: Budget,
    targets: Option<Targets>,
    l0: f64,
) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    validate_start(oracle, x0, l0, budget.target.max(1))?;
    let initial_value = oracle.value(x0.view());
    if !initial_value.is_finite() {
        return Err(Error::Divergence { iteration: 0 });
    }
    let mut trace = Trace::empty(x0.clone(), initial_value, l0);
    let mut epsilon = targets.map(|t| t.eps0);
    for k in 1.. {
        let used = trace.iterations();
        if used >= budget.target || used >= budget.cap {
            break;
        }
        let planned = schedule.iterations(k);
        let run = planned.min(budget.cap - used);
        if run < planned {
            trace.diagnostics.push(Diagnostic::BudgetTruncated {
                cycle: k,
                planned,
                executed: run,
            });
        }
        if let (Some(eps), Some(t)) = (epsilon.as_mut(), targets) {
            *eps *= (-t.gamma).exp();
        }
        let inner = universal_fast_gradient(
            oracle,
            &trace.final_point,
            epsilon.unwrap_or(0.0),
            trace.final_lipschitz,
            run,
            None,
        )
        .map_err(|e| match e {
            Error::Divergence { iteration } => Error::Divergence {
                iteration: iteration + used,
            },
            other => other,
        })?;
        let stalled = inner.stalled();
        let iterations = inner.iterations();
        trace.push_cycle(
            inner,
            Cycle {
                planned: Some(planned),
                iterations,
                end_iteration: 0,
                epsilon_target: epsilon,
                end_value: 0.0,
                reached_target: None,
            },
        );
        if stalled {
            break;
        }
    }
    Ok(trace)
}

/// Scheduled restarts of the accelerated method (`x_k = A(x_{k−1}, t_k)`).
///
/// Runs cycles until `n` accepted iterations are spent; the final cycle is
/// truncated at the budget and flagged with
/// [`Diagnostic::BudgetTruncated`](crate::solvers::Diagnostic::BudgetTruncated).
pub fn restart_scheduled<O>(oracle: &O, x0: &Point, schedule: &Schedule, n: usize, l0: f64) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    run_cycles(oracle, x0, schedule, Budget { target: n, cap: n }, None, l0)
}

/// Hölder scheduled restarts of the Universal Fast Gradient Method.
///
/// Cycle `k` sets `ε_k = e^(−γ) ε_{k−1}` and runs `U(x_{k−1}, ε_k, t_k)`.
/// `eps0` must dominate `f(x0) − f*`; that is the caller's responsibility.
pub fn h_restart<O>(
    oracle: &O,
    x0: &Point,
    eps0: f64,
    gamma: f64,
    schedule: &Schedule,
    n: usize,
    l0: f64,
) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    if !(eps0 > 0.0 && eps0.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps0 must be positive, got {eps0}")));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be nonnegative, got {gamma}"
        )));
    }
    run_cycles(
        oracle,
        x0,
        schedule,
        Budget { target: n, cap: n },
        Some(Targets { eps0, gamma }),
        l0,
    )
}
