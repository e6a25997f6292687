use crate::solvers::trace::{Diagnostic, Trace, TraceEntry};
use crate::solvers::{rounding_slack, validate_start, MAX_DOUBLINGS};
use crate::{Error, Point, ProximalOracle, Result};

/// Gradient descent with a doubling/halving line search on `L̂`.
///
/// Each step tries `x = prox(x_t − ∇g(x_t)/L̂, 1/L̂)`, doubling `L̂` until
/// `g(x) ≤ g(x_t) + ⟨∇g(x_t), x − x_t⟩ + L̂/2‖x − x_t‖²`, then accepts and
/// halves `L̂` (unless the step did not move). On `L`-smooth problems `f(x_t) − f* ≤ L·d(x0, X*)²/t`.
pub fn gradient_descent<O>(oracle: &O, x0: &Point, l0: f64, budget: usize) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    validate_start(oracle, x0, l0, budget)?;
    let mut x = x0.clone();
    let mut smooth = oracle.smooth_value(x.view());
    let initial_value = smooth + oracle.nonsmooth_value(x.view());
    if !initial_value.is_finite() {
        return Err(Error::Divergence { iteration: 0 });
    }
    let mut lipschitz = l0;
    let mut trace = Trace::empty(x0.clone(), initial_value, l0);

    'outer: for t in 1..=budget {
        let grad = oracle.smooth_gradient(x.view());
        trace.oracle_calls += 1;
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence { iteration: t - 1 });
        }
        let mut doublings = 0;
        let (candidate, candidate_smooth, moved) = loop {
            let step = 1.0 / lipschitz;
            let candidate = oracle.prox((&x - &(&grad * step)).view(), step);
            let value = oracle.smooth_value(candidate.view());
            trace.oracle_calls += 1;
            let diff = &candidate - &x;
            let model = smooth + grad.dot(&diff) + 0.5 * lipschitz * diff.dot(&diff);
            if value <= model + rounding_slack(smooth, value) {
                let moved = diff.iter().any(|&d| d != 0.0);
                break (candidate, value, moved);
            }
            doublings += 1;
            trace.backtracks += 1;
            lipschitz *= 2.0;
            if doublings > MAX_DOUBLINGS || !lipschitz.is_finite() {
                lipschitz /= 2.0f64.powi(doublings as i32);
                trace.diagnostics.push(Diagnostic::LineSearchStalled { iteration: t });
                break 'outer;
            }
        };
        x = candidate;
        smooth = candidate_smooth;
        // A fixed point of the step says nothing about curvature; halving
        // there would drive L̂ to zero.
        if moved {
            lipschitz /= 2.0;
        }
        let value = smooth + oracle.nonsmooth_value(x.view());
        if !value.is_finite() {
            return Err(Error::Divergence { iteration: t });
        }
        trace.entries.push(TraceEntry {
            iteration: t,
            value,
            gap: None,
            restart: false,
            epsilon_target: None,
        });
    }
    trace.final_point = x;
    trace.final_lipschitz = lipschitz;
    Ok(trace)
}
