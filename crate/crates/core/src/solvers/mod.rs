//! Inner first-order methods.
//!
//! All methods run a backtracking search on the Lipschitz estimate `L̂`:
//! it doubles until the descent condition holds and halves once after every
//! accepted step, so the final `L̂` of one run is a valid starting estimate
//! for the next.

mod fast_gradient;
mod gradient;
mod trace;

pub use fast_gradient::{accelerated, universal_fast_gradient, FastGradientMethod, StepOutcome};
pub use gradient::gradient_descent;
pub use trace::{Cycle, Diagnostic, Trace, TraceEntry};

use ndarray::ArrayView1;

use crate::{Error, Point, ProximalOracle, Result};

/// Predicate on `(iterate, objective value)` ending a run early.
pub type StopPredicate<'a> = &'a (dyn Fn(ArrayView1<'_, f64>, f64) -> bool + Sync);

/// Line-search doublings allowed within one iteration before giving up.
pub(crate) const MAX_DOUBLINGS: usize = 200;

/// Rounding allowance added to descent conditions.
///
/// Near machine precision `f(y) − f(x)` is dominated by cancellation noise of
/// order `ε·|f|`; without this allowance the search would double forever.
pub(crate) fn rounding_slack(a: f64, b: f64) -> f64 {
    8.0 * f64::EPSILON * (a.abs() + b.abs())
}

pub(crate) fn validate_start<O: ProximalOracle + ?Sized>(oracle: &O, x0: &Point, l0: f64, budget: usize) -> Result<()> {
    if x0.len() != oracle.dimension() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dimension(),
            found: x0.len(),
        });
    }
    if !(l0 > 0.0 && l0.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "initial Lipschitz estimate must be positive, got {l0}"
        )));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("iteration budget must be at least 1".into()));
    }
    Ok(())
}
