use crate::solvers::trace::{Diagnostic, Trace, TraceEntry};
use crate::solvers::{rounding_slack, validate_start, StopPredicate, MAX_DOUBLINGS};
use crate::{Error, Point, ProximalOracle, Result};

/// Outcome of one [`FastGradientMethod::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted,
    /// The line search exhausted its doubling cap; the state is unchanged.
    Stalled,
}

/// Stepwise Universal Fast Gradient Method.
///
/// The estimate function `φ_t(x) = ½‖x − x0‖² + Σ a_i [g(x_i) + ⟨∇g(x_i), x − x_i⟩ + h(x)]`
/// is stored as its center `x0`, the weighted gradient sum and the total
/// weight `A_t`, so its minimizer is `z_t = prox_{A_t h}(x0 − Σ a_i ∇g(x_i))`.
/// With `epsilon = 0` this is the accelerated gradient method with
/// backtracking.
pub struct FastGradientMethod<'a, O: ProximalOracle + ?Sized> {
    oracle: &'a O,
    center: Point,
    gradient_sum: Point,
    weight: f64,
    y: Point,
    value: f64,
    lipschitz: f64,
    epsilon: f64,
    oracle_calls: usize,
    backtracks: usize,
}

impl<'a, O: ProximalOracle + ?Sized> FastGradientMethod<'a, O> {
    pub fn new(oracle: &'a O, x0: &Point, epsilon: f64, l0: f64) -> Result<Self> {
        validate_start(oracle, x0, l0, 1)?;
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "target accuracy must be nonnegative, got {epsilon}"
            )));
        }
        let value = oracle.value(x0.view());
        if !value.is_finite() {
            return Err(Error::Divergence { iteration: 0 });
        }
        Ok(Self {
            oracle,
            center: x0.clone(),
            gradient_sum: Point::zeros(x0.len()),
            weight: 0.0,
            y: x0.clone(),
            value,
            lipschitz: l0,
            epsilon,
            oracle_calls: 0,
            backtracks: 0,
        })
    }

    /// Current output point `y_t`.
    pub fn iterate(&self) -> &Point {
        &self.y
    }

    /// Full objective at [`iterate`](Self::iterate).
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Accumulated weight `A_t`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn oracle_calls(&self) -> usize {
        self.oracle_calls
    }

    pub fn backtracks(&self) -> usize {
        self.backtracks
    }

    fn estimate_minimizer(&self) -> Point {
        let shifted = &self.center - &self.gradient_sum;
        if self.weight > 0.0 && self.oracle.is_composite() {
            self.oracle.prox(shifted.view(), self.weight)
        } else {
            shifted
        }
    }

    /// Runs one outer iteration, line search included.
    pub fn step(&mut self) -> Result<StepOutcome> {
        let z = self.estimate_minimizer();
        let start_lipschitz = self.lipschitz;
        let mut doublings = 0;
        loop {
            let l = self.lipschitz;
            // Positive root of a² = (A + a)/L̂.
            let a = (1.0 + (1.0 + 4.0 * self.weight * l).sqrt()) / (2.0 * l);
            let tau = a / (self.weight + a);
            let x = &z * tau + &self.y * (1.0 - tau);
            let gx = self.oracle.smooth_value(x.view());
            let grad = self.oracle.smooth_gradient(x.view());
            let y = self.oracle.prox((&x - &(&grad * (1.0 / l))).view(), 1.0 / l);
            let gy = self.oracle.smooth_value(y.view());
            self.oracle_calls += 2;
            if !gx.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::Divergence { iteration: 0 });
            }
            let diff = &y - &x;
            let model = gx + grad.dot(&diff) + 0.5 * l * diff.dot(&diff) + 0.5 * tau * self.epsilon;
            if gy <= model + rounding_slack(gx, gy) {
                let value = gy + self.oracle.nonsmooth_value(y.view());
                if !value.is_finite() {
                    return Err(Error::Divergence { iteration: 0 });
                }
                self.gradient_sum.scaled_add(a, &grad);
                self.weight += a;
                self.y = y;
                self.value = value;
                // At a fixed point of the prox-gradient step the test is
                // vacuous; halving there would collapse L̂ and blow up A_t.
                if diff.iter().any(|&d| d != 0.0) {
                    self.lipschitz = l / 2.0;
                }
                return Ok(StepOutcome::Accepted);
            }
            doublings += 1;
            self.backtracks += 1;
            self.lipschitz = 2.0 * l;
            if doublings > MAX_DOUBLINGS || !self.lipschitz.is_finite() {
                self.lipschitz = start_lipschitz;
                return Ok(StepOutcome::Stalled);
            }
        }
    }
}

/// Universal Fast Gradient Method `U(x0, ε, t)`.
///
/// Runs at most `budget` accepted iterations, stopping early at the first
/// iterate for which `stop` holds. On `(s, L)` Hölder-smooth problems
/// `f(y_t) − f* ≤ ε/2 + [c L^(2/s) d(x0, X*)² / (ε^(2/s) t^(2q/s))]·ε/2` with
/// `c = 2^((4s−2)/s)`. With `ε = 0` and `s < 2` there is no such guarantee and
/// the run simply uses its budget.
pub fn universal_fast_gradient<O>(
    oracle: &O,
    x0: &Point,
    epsilon: f64,
    l0: f64,
    budget: usize,
    stop: Option<StopPredicate<'_>>,
) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    validate_start(oracle, x0, l0, budget)?;
    let mut method = FastGradientMethod::new(oracle, x0, epsilon, l0)?;
    let mut trace = Trace::empty(x0.clone(), method.value(), l0);
    for t in 1..=budget {
        match method.step() {
            Ok(StepOutcome::Accepted) => {}
            Ok(StepOutcome::Stalled) => {
                trace.diagnostics.push(Diagnostic::LineSearchStalled { iteration: t });
                break;
            }
            Err(Error::Divergence { .. }) => return Err(Error::Divergence { iteration: t }),
            Err(e) => return Err(e),
        }
        trace.entries.push(TraceEntry {
            iteration: t,
            value: method.value(),
            gap: None,
            restart: false,
            epsilon_target: (epsilon > 0.0).then_some(epsilon),
        });
        if stop.is_some_and(|p| p(method.iterate().view(), method.value())) {
            break;
        }
    }
    trace.final_point = method.iterate().clone();
    trace.final_lipschitz = method.lipschitz();
    trace.oracle_calls = method.oracle_calls();
    trace.backtracks = method.backtracks();
    Ok(trace)
}

/// Nesterov's accelerated gradient method `A(x0, t) = U(x0, 0, t)`.
///
/// On `L`-smooth problems `f(y_t) − f* ≤ 4L·d(x0, X*)²/t²` provided
/// `L0 ≤ 2L`.
pub fn accelerated<O>(oracle: &O, x0: &Point, l0: f64, t: usize) -> Result<Trace>
where
    O: ProximalOracle + ?Sized,
{
    universal_fast_gradient(oracle, x0, 0.0, l0, t, None)
}
