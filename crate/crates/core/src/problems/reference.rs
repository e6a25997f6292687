use crate::{Error, Point, ProximalOracle, Result};

/// A high-accuracy estimate of `f*` together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOptimum {
    pub value: f64,
    pub point: Point,
    /// Gradient-mapping tolerance requested.
    pub tolerance: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Gradient-mapping norm `L‖y − prox(y − ∇g(y)/L)‖` at the last step.
    pub gradient_mapping_norm: f64,
}

/// Accelerated proximal gradient with fixed step `1/lipschitz` and
/// function-value restarts, run until the gradient-mapping norm drops below
/// `tolerance` or `max_iterations` steps have been taken.
pub fn reference_optimum<O>(
    oracle: &O,
    x0: &Point,
    lipschitz: f64,
    max_iterations: usize,
    tolerance: f64,
) -> Result<ReferenceOptimum>
where
    O: ProximalOracle + ?Sized,
{
    if !(lipschitz > 0.0 && lipschitz.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Lipschitz constant must be positive, got {lipschitz}"
        )));
    }
    if x0.len() != oracle.dimension() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dimension(),
            found: x0.len(),
        });
    }
    let step = 1.0 / lipschitz;
    let mut x = oracle.prox(x0.view(), step);
    let mut value = oracle.value(x.view());
    let mut y = x.clone();
    let mut theta = 1.0_f64;
    let mut mapping_norm = f64::INFINITY;
    let mut iterations = 0;

    while iterations < max_iterations {
        iterations += 1;
        let grad = oracle.smooth_gradient(y.view());
        let next = oracle.prox((&y - &(grad * step)).view(), step);
        let diff = &y - &next;
        mapping_norm = lipschitz * diff.dot(&diff).sqrt();
        let next_value = oracle.value(next.view());
        if !next_value.is_finite() {
            return Err(Error::Divergence { iteration: iterations });
        }
        if next_value > value && theta > 1.0 {
            // Momentum overshot: restart from the last iterate. A plain
            // step (θ = 1) is always accepted so roundoff cannot stall us.
            y = x.clone();
            theta = 1.0;
            continue;
        }
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        y = &next + &((&next - &x) * ((theta - 1.0) / theta_next));
        x = next;
        value = next_value;
        theta = theta_next;
        if mapping_norm <= tolerance {
            break;
        }
    }
    Ok(ReferenceOptimum {
        value,
        point: x,
        tolerance,
        iterations,
        converged: mapping_norm <= tolerance,
        gradient_mapping_norm: mapping_norm,
    })
}
