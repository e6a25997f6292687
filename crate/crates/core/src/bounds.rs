//! Closed-form convergence envelopes and schedule identities.
//!
//! Every function here is pure. Envelopes take the iteration count `N` as a
//! real number because real-valued schedules have real totals; the rounded
//! variants cover integer schedules `⌈C e^(αk)⌉`.
//!
//! The universal constant `c` is always a parameter: use
//! [`ACCELERATED_CONSTANT`] for the accelerated gradient method and
//! [`universal_constant`] for the Universal Fast Gradient Method.

use crate::DerivedConditioning;

/// `c` in `f(y) − f* ≤ cL d²/t²` for the accelerated gradient method.
pub const ACCELERATED_CONSTANT: f64 = 4.0;

/// `c = 2^((4s−2)/s)` for the Universal Fast Gradient Method.
pub fn universal_constant(s: f64) -> f64 {
    2f64.powf((4.0 * s - 2.0) / s)
}

/// `N = Σ_{k=1}^R C e^(αk)`, i.e. `C e^α (e^(αR) − 1)/(e^α − 1)`, or `RC` when `α = 0`.
///
/// `cycles` may be fractional so that [`restart_count`] inverts it exactly.
pub fn schedule_total(constant: f64, alpha: f64, cycles: f64) -> f64 {
    if alpha == 0.0 {
        cycles * constant
    } else {
        constant * alpha.exp() * (alpha * cycles).exp_m1() / alpha.exp_m1()
    }
}

/// Number of cycles `R` with `schedule_total(C, α, R) = N`.
pub fn restart_count(constant: f64, alpha: f64, total: f64) -> f64 {
    if alpha == 0.0 {
        total / constant
    } else {
        (alpha.exp_m1() * total / (alpha.exp() * constant)).ln_1p() / alpha
    }
}

/// `gap0 / (x + 1)^p` evaluated as `gap0·exp(−p·ln(1 + x))`.
fn polynomial_decay(gap0: f64, x: f64, power: f64) -> f64 {
    gap0 * (-power * x.ln_1p()).exp()
}

/// `C*_{κ,τ} = e^(1−τ) (cκ)^(1/2) gap0^(−τ/2)`, the optimal restart constant for `s = 2`.
pub fn optimal_restart_constant(cond: &DerivedConditioning, gap0: f64, c: f64) -> f64 {
    (1.0 - cond.tau).exp() * (c * cond.kappa).sqrt() * gap0.powf(-cond.tau / 2.0)
}

/// `C*_{κ,τ,q} = e^(1−τ) (cκ)^(s/2q) ε0^(−τ/q)`, the optimal constant for Hölder restarts.
pub fn optimal_holder_constant(cond: &DerivedConditioning, eps0: f64, c: f64) -> f64 {
    (1.0 - cond.tau).exp() * (c * cond.kappa).powf(cond.s / (2.0 * cond.q)) * eps0.powf(-cond.tau / cond.q)
}

/// Guarantee of scheduled restarts with the optimal schedule on smooth problems.
///
/// `τ = 0`: `gap0·exp(−2e⁻¹(cκ)^(−1/2) N)`;
/// `τ > 0`: `gap0 / (τ e⁻¹ gap0^(τ/2) (cκ)^(−1/2) N + 1)^(2/τ)`.
pub fn bound_smooth(cond: &DerivedConditioning, gap0: f64, c: f64, n: f64) -> f64 {
    let rate = (-1.0f64).exp() / (c * cond.kappa).sqrt();
    if cond.tau == 0.0 {
        gap0 * (-2.0 * rate * n).exp()
    } else {
        let tau = cond.tau;
        polynomial_decay(gap0, tau * rate * gap0.powf(tau / 2.0) * n, 2.0 / tau)
    }
}

/// Envelope value together with whether its precondition holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericBound {
    pub value: f64,
    /// `false` when `C` is below the threshold the guarantee needs.
    pub guaranteed: bool,
}

/// `C(α) = e^(α(1−τ)/τ) (cκ)^(1/2) gap0^(−τ/2)`, the smallest constant
/// for which a geometric schedule with rate `α` is guaranteed (`τ > 0`).
pub fn minimal_geometric_constant(cond: &DerivedConditioning, gap0: f64, c: f64, alpha: f64) -> f64 {
    let tau = cond.tau;
    (alpha * (1.0 - tau) / tau).exp() * (c * cond.kappa).sqrt() * gap0.powf(-tau / 2.0)
}

/// Guarantee of scheduled restarts with a generic schedule on smooth problems.
///
/// `τ = 0`, `t_k = C`: `(cκ/C²)^(N/C)·gap0`, valid when `C ≥ C*_{κ,0}`.
/// `τ > 0`, `t_k = C e^(αk)`: `gap0 / (α e^(−α) C⁻¹ N + 1)^(2/τ)`, valid when `C ≥ C(α)`.
pub fn bound_generic(cond: &DerivedConditioning, gap0: f64, c: f64, constant: f64, alpha: f64, n: f64) -> GenericBound {
    if cond.tau == 0.0 {
        let threshold = optimal_restart_constant(cond, gap0, c);
        GenericBound {
            value: gap0 * (c * cond.kappa / (constant * constant)).powf(n / constant),
            guaranteed: constant >= threshold * (1.0 - 1e-12),
        }
    } else {
        let threshold = minimal_geometric_constant(cond, gap0, c, alpha);
        GenericBound {
            value: polynomial_decay(gap0, alpha * (-alpha).exp() * n / constant, 2.0 / cond.tau),
            guaranteed: constant >= threshold * (1.0 - 1e-12),
        }
    }
}

/// Guarantee of Hölder scheduled restarts (and of restarts on criterion).
///
/// `τ = 0`: `ε0·exp(−q e⁻¹ (cκ)^(−s/2q) N)`;
/// `τ > 0`: `ε0 / (τ e⁻¹ (cκ)^(−s/2q) ε0^(τ/q) N + 1)^(q/τ)`.
pub fn bound_holder(cond: &DerivedConditioning, eps0: f64, c: f64, n: f64) -> f64 {
    let q = cond.q;
    let rate = (-1.0f64).exp() * (c * cond.kappa).powf(-cond.s / (2.0 * q));
    if cond.tau == 0.0 {
        eps0 * (-q * rate * n).exp()
    } else {
        let tau = cond.tau;
        polynomial_decay(eps0, tau * rate * eps0.powf(tau / q) * n, q / tau)
    }
}

/// Guarantee of plain gradient descent read as an implicit restart scheme.
///
/// `τ = 0`: `gap0·exp(−e⁻¹κ⁻¹N)`; `τ > 0`: `gap0 / (τ e⁻¹ κ⁻¹ gap0^τ N + 1)^(1/τ)`.
pub fn bound_gradient_descent(cond: &DerivedConditioning, gap0: f64, n: f64) -> f64 {
    let rate = (-1.0f64).exp() / cond.kappa;
    if cond.tau == 0.0 {
        gap0 * (-rate * n).exp()
    } else {
        let tau = cond.tau;
        polynomial_decay(gap0, tau * rate * gap0.powf(tau) * n, 1.0 / tau)
    }
}

/// Guarantee of the logarithmic grid search over schedules (best scheme).
///
/// `τ = 0`: `gap0·exp(−e⁻¹(cκ)^(−1/2) N)`;
/// `τ > 0`: `gap0 / (τ e⁻¹ (cκ)^(−1/2) gap0^(τ/2) (N − 1)/4 + 1)^(2/τ)`.
pub fn bound_adaptive(cond: &DerivedConditioning, gap0: f64, c: f64, n: f64) -> f64 {
    let rate = (-1.0f64).exp() / (c * cond.kappa).sqrt();
    if cond.tau == 0.0 {
        gap0 * (-rate * n).exp()
    } else {
        let tau = cond.tau;
        let effective = ((n - 1.0) / 4.0).max(0.0);
        polynomial_decay(gap0, tau * rate * gap0.powf(tau / 2.0) * effective, 2.0 / tau)
    }
}

/// Linear-convergence envelope for integer schedules `⌈C e^(αk)⌉`.
///
/// `α = 0`: `ν·exp(−γN/(C + 1))`; `α > 0`: `ν / (α e^(−α) C⁻¹ N′ + 1)^(γ/α)`
/// with `N′ = N − ln((e^α − 1) e^(−α) C⁻¹ N + 1)/α` (clamped at zero).
pub fn bound_rounded(nu: f64, gamma: f64, constant: f64, alpha: f64, n: f64) -> f64 {
    if alpha == 0.0 {
        nu * (-gamma * n / (constant + 1.0)).exp()
    } else {
        let lost = (alpha.exp_m1() * (-alpha).exp() * n / constant).ln_1p() / alpha;
        let effective = (n - lost).max(0.0);
        polynomial_decay(nu, alpha * (-alpha).exp() * effective / constant, gamma / alpha)
    }
}

/// Linear-convergence envelope for real schedules `C e^(αk)`.
///
/// `α = 0`: `ν·exp(−γN/C)`; `α > 0`: `ν / (α e^(−α) C⁻¹ N + 1)^(γ/α)`.
pub fn bound_linear_schedule(nu: f64, gamma: f64, constant: f64, alpha: f64, n: f64) -> f64 {
    if alpha == 0.0 {
        nu * (-gamma * n / constant).exp()
    } else {
        polynomial_decay(nu, alpha * (-alpha).exp() * n / constant, gamma / alpha)
    }
}

/// Smallest `t_k` guaranteeing `f(x_k) − f* ≤ e^(−γk) gap0` for `s = 2`:
/// `e^(γ(1−τ)/2) (cκ)^(1/2) gap0^(−τ/2) e^(τγk/2)`.
pub fn schedule_threshold(cond: &DerivedConditioning, gap0: f64, c: f64, gamma: f64, k: f64) -> f64 {
    let tau = cond.tau;
    (gamma * (1.0 - tau) / 2.0).exp() * (c * cond.kappa).sqrt() * gap0.powf(-tau / 2.0) * (tau * gamma * k / 2.0).exp()
}

/// Hölder analogue of [`schedule_threshold`], the `t̄_k` of restarts with
/// accuracy targets `ε_k = e^(−γk) ε0`:
/// `e^(γ(1−τ)/q) (cκ)^(s/2q) ε0^(−τ/q) e^(γτk/q)`.
pub fn schedule_threshold_holder(cond: &DerivedConditioning, eps0: f64, c: f64, gamma: f64, k: f64) -> f64 {
    let (tau, q) = (cond.tau, cond.q);
    (gamma * (1.0 - tau) / q).exp()
        * (c * cond.kappa).powf(cond.s / (2.0 * q))
        * eps0.powf(-tau / q)
        * (gamma * tau * k / q).exp()
}

/// `cL d²/t²`, the accelerated method's guarantee after `t` iterations.
pub fn accelerated_bound(c: f64, lipschitz: f64, distance: f64, t: f64) -> f64 {
    c * lipschitz * distance * distance / (t * t)
}

/// `L d²/t`, the gradient descent guarantee after `t` iterations.
pub fn gradient_descent_bound(lipschitz: f64, distance: f64, t: f64) -> f64 {
    lipschitz * distance * distance / t
}

/// `ε/2 + [c L^(2/s) d² / (ε^(2/s) t^(2q/s))]·ε/2`, the Universal Fast
/// Gradient Method's guarantee after `t` iterations with target `ε > 0`.
pub fn universal_bound(c: f64, s: f64, lipschitz: f64, distance: f64, epsilon: f64, t: f64) -> f64 {
    let q = crate::regularity::optimal_rate_exponent(s);
    let ratio = c * lipschitz.powf(2.0 / s) * distance * distance / (epsilon.powf(2.0 / s) * t.powf(2.0 * q / s));
    0.5 * epsilon * (1.0 + ratio)
}

/// Which guarantee a [`BoundEnvelope`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundEnvelope {
    /// Optimal scheduled restarts, `s = 2`.
    Smooth {
        cond: DerivedConditioning,
        gap0: f64,
        c: f64,
    },
    /// Scheduled restarts with `t_k = C e^(αk)`, `s = 2`.
    Generic {
        cond: DerivedConditioning,
        gap0: f64,
        c: f64,
        constant: f64,
        alpha: f64,
    },
    /// Hölder scheduled restarts and restarts on criterion.
    Holder {
        cond: DerivedConditioning,
        eps0: f64,
        c: f64,
    },
    GradientDescent {
        cond: DerivedConditioning,
        gap0: f64,
    },
    /// Best scheme of the logarithmic grid search.
    Adaptive {
        cond: DerivedConditioning,
        gap0: f64,
        c: f64,
    },
    /// Integer schedules `⌈C e^(αk)⌉` with linear rate `γ`.
    Rounded {
        nu: f64,
        gamma: f64,
        constant: f64,
        alpha: f64,
    },
    /// Plain accelerated method without restarts.
    Accelerated {
        c: f64,
        lipschitz: f64,
        distance: f64,
    },
}

impl BoundEnvelope {
    pub fn kind(&self) -> &'static str {
        let flat = |cond: &DerivedConditioning| cond.tau == 0.0;
        match self {
            Self::Smooth { cond, .. } if flat(cond) => "smooth-tau0",
            Self::Smooth { .. } => "smooth-tau+",
            Self::Generic { cond, .. } if flat(cond) => "generic-tau0",
            Self::Generic { .. } => "generic-tau+",
            Self::Holder { cond, .. } if flat(cond) => "holder-tau0",
            Self::Holder { .. } => "holder-tau+",
            Self::GradientDescent { cond, .. } if flat(cond) => "gd-tau0",
            Self::GradientDescent { .. } => "gd-tau+",
            Self::Adaptive { cond, .. } if flat(cond) => "adaptive-tau0",
            Self::Adaptive { .. } => "adaptive-tau+",
            Self::Rounded { .. } => "rounded",
            Self::Accelerated { .. } => "accelerated",
        }
    }

    /// Guaranteed gap after `n` total inner iterations.
    pub fn evaluate(&self, n: f64) -> f64 {
        match *self {
            Self::Smooth { cond, gap0, c } => bound_smooth(&cond, gap0, c, n),
            Self::Generic {
                cond,
                gap0,
                c,
                constant,
                alpha,
            } => bound_generic(&cond, gap0, c, constant, alpha, n).value,
            Self::Holder { cond, eps0, c } => bound_holder(&cond, eps0, c, n),
            Self::GradientDescent { cond, gap0 } => bound_gradient_descent(&cond, gap0, n),
            Self::Adaptive { cond, gap0, c } => bound_adaptive(&cond, gap0, c, n),
            Self::Rounded {
                nu,
                gamma,
                constant,
                alpha,
            } => bound_rounded(nu, gamma, constant, alpha, n),
            Self::Accelerated { c, lipschitz, distance } => accelerated_bound(c, lipschitz, distance, n),
        }
    }
}
