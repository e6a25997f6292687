use crate::solvers::{validate_start, Cycle, Diagnostic, FastGradientMethod, StepOutcome, Trace, TraceEntry};
use crate::{Error, Point, ProximalOracle, Result};

/// Accelerated method with the function-value restart heuristic.
///
/// Whenever an accepted iterate has a larger objective than the previous
/// accepted iterate, the method restarts from that iterate with its current
/// Lipschitz estimate. Only accepted iterates are compared, never
/// line-search candidates.
pub fn monotone_restart<O>(oracle: &O, x0: &Point, n: usize, l0: f64) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    validate_start(oracle, x0, l0, n)?;
    let mut method = FastGradientMethod::new(oracle, x0, 0.0, l0)?;
    let mut trace = Trace::empty(x0.clone(), method.value(), l0);
    let (mut calls, mut backtracks) = (0, 0);
    let mut previous = method.value();
    let mut cycle_start = 0;
    for t in 1..=n {
        match method.step() {
            Ok(StepOutcome::Accepted) => {}
            Ok(StepOutcome::Stalled) => {
                trace.diagnostics.push(Diagnostic::LineSearchStalled { iteration: t });
                break;
            }
            Err(Error::Divergence { .. }) => return Err(Error::Divergence { iteration: t }),
            Err(e) => return Err(e),
        }
        let value = method.value();
        let restart = value > previous;
        trace.entries.push(TraceEntry {
            iteration: t,
            value,
            gap: None,
            restart,
            epsilon_target: None,
        });
        previous = value;
        if restart && t < n {
            trace.cycles.push(Cycle {
                planned: None,
                iterations: t - cycle_start,
                end_iteration: t,
                epsilon_target: None,
                end_value: value,
                reached_target: None,
            });
            cycle_start = t;
            calls += method.oracle_calls();
            backtracks += method.backtracks();
            let point = method.iterate().clone();
            let lipschitz = method.lipschitz();
            method = FastGradientMethod::new(oracle, &point, 0.0, lipschitz)?;
        }
    }
    trace.final_point = method.iterate().clone();
    trace.final_lipschitz = method.lipschitz();
    trace.oracle_calls = calls + method.oracle_calls();
    trace.backtracks = backtracks + method.backtracks();
    Ok(trace)
}
