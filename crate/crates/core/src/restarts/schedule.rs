use crate::bounds::{optimal_holder_constant, optimal_restart_constant};
use crate::{DerivedConditioning, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Geometric,
}

/// Iteration counts `t_k = C e^(αk)` for restart cycles `k = 1, 2, …`.
///
/// Schemes always consume `⌈t_k⌉`; `rounding` only selects what
/// [`length`](Self::length) reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub constant: f64,
    pub alpha: f64,
    pub rounding: bool,
}

/// Upper limit on a single cycle length, far beyond any usable budget.
const MAX_CYCLE: f64 = 1e15;

impl Schedule {
    pub fn constant(constant: f64) -> Result<Self> {
        Self::build(ScheduleKind::Constant, constant, 0.0)
    }

    /// Geometric schedule; `alpha = 0` behaves exactly like [`Schedule::constant`].
    pub fn geometric(constant: f64, alpha: f64) -> Result<Self> {
        Self::build(ScheduleKind::Geometric, constant, alpha)
    }

    fn build(kind: ScheduleKind, constant: f64, alpha: f64) -> Result<Self> {
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "schedule constant must be positive, got {constant}"
            )));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "schedule rate must be nonnegative, got {alpha}"
            )));
        }
        Ok(Self {
            kind,
            constant,
            alpha,
            rounding: true,
        })
    }

    pub fn with_rounding(mut self, rounding: bool) -> Self {
        self.rounding = rounding;
        self
    }

    /// Real-valued `C e^(αk)`.
    pub fn real_length(&self, k: usize) -> f64 {
        match self.kind {
            ScheduleKind::Constant => self.constant,
            ScheduleKind::Geometric => self.constant * (self.alpha * k as f64).exp(),
        }
    }

    /// `⌈C e^(αk)⌉` when rounding, the real value otherwise.
    pub fn length(&self, k: usize) -> f64 {
        if self.rounding {
            self.iterations(k) as f64
        } else {
            self.real_length(k)
        }
    }

    /// Accepted inner iterations of cycle `k`: `⌈C e^(αk)⌉ ≥ 1`.
    pub fn iterations(&self, k: usize) -> usize {
        self.real_length(k).min(MAX_CYCLE).ceil().max(1.0) as usize
    }
}

/// Optimal schedule for smooth problems: `C = C*_{κ,τ}`, `α = τ`.
///
/// `c` is the inner method's constant (4 for the accelerated method).
pub fn optimal_schedule_smooth(cond: &DerivedConditioning, gap0: f64, c: f64) -> Result<Schedule> {
    if cond.s != 2.0 {
        return Err(Error::InvalidArgument(format!(
            "smooth restart schedules need s = 2, got s = {}",
            cond.s
        )));
    }
    check_positive("gap0", gap0)?;
    check_positive("c", c)?;
    let constant = optimal_restart_constant(cond, gap0, c);
    if cond.tau == 0.0 {
        Schedule::constant(constant)
    } else {
        Schedule::geometric(constant, cond.tau)
    }
}

/// Optimal Hölder schedule `C = C*_{κ,τ,q}`, `α = τ`, with accuracy decay `γ = q`.
///
/// `c` is the Universal Fast Gradient constant `2^((4s−2)/s)`.
pub fn optimal_schedule_holder(cond: &DerivedConditioning, eps0: f64, c: f64) -> Result<(Schedule, f64)> {
    check_positive("eps0", eps0)?;
    check_positive("c", c)?;
    let constant = optimal_holder_constant(cond, eps0, c);
    let schedule = if cond.tau == 0.0 {
        Schedule::constant(constant)?
    } else {
        Schedule::geometric(constant, cond.tau)?
    };
    Ok((schedule, cond.q))
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {value}")))
    }
}
