//! Smoothness/sharpness parameters and the condition numbers derived from them.
//!
//! A convex `f` is `(s, L)` Hölder smooth when
//! `‖∇f(x) − ∇f(y)‖ ≤ L‖x − y‖^(s−1)` and `(r, μ)` sharp when
//! `μ·d(x, X*)^r ≤ f(x) − f*`. Together they give the generalized condition
//! number `κ = L^(2/s) / μ^(2/r)`, the exponent gap `τ = 1 − s/r` and the
//! optimal rate exponent `q = (3s − 2)/2`.

use ndarray::ArrayView1;

use crate::{Error, Point, ProximalOracle, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityParams {
    /// Hölder exponent of the gradient, in `[1, 2]`.
    pub s: f64,
    /// Hölder constant.
    pub l: f64,
    /// Sharpness exponent, `r ≥ s`.
    pub r: f64,
    /// Sharpness constant.
    pub mu: f64,
    pub f_star: Option<f64>,
    /// Upper estimate of `f(x0) − f*`.
    pub gap0: Option<f64>,
}

impl RegularityParams {
    pub fn new(s: f64, l: f64, r: f64, mu: f64) -> Result<Self> {
        let params = Self {
            s,
            l,
            r,
            mu,
            f_star: None,
            gap0: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_optimum(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn with_gap0(mut self, gap0: f64) -> Result<Self> {
        if !(gap0 > 0.0 && gap0.is_finite()) {
            return Err(Error::InvalidRegularity(format!("gap0 must be positive, got {gap0}")));
        }
        self.gap0 = Some(gap0);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRegularity(msg));
        if !(1.0..=2.0).contains(&self.s) {
            return bad(format!("smoothness exponent s = {} not in [1, 2]", self.s));
        }
        if !(self.l > 0.0 && self.l.is_finite()) {
            return bad(format!("Hölder constant L = {} must be positive", self.l));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad(format!("sharpness constant mu = {} must be positive", self.mu));
        }
        if self.s > self.r {
            return bad(format!(
                "s = {} exceeds r = {}: sharpness cannot be steeper than smoothness",
                self.s, self.r
            ));
        }
        if !self.r.is_finite() {
            return bad(format!("sharpness exponent r = {} must be finite", self.r));
        }
        Ok(())
    }

    pub fn conditioning(&self) -> Result<DerivedConditioning> {
        derive_conditioning(self)
    }
}

/// Condition numbers derived from [`RegularityParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConditioning {
    /// `L^(2/s) / μ^(2/r)`.
    pub kappa: f64,
    /// `1 − s/r`, in `[0, 1)`.
    pub tau: f64,
    /// `(3s − 2)/2`.
    pub q: f64,
    /// The smoothness exponent the other fields were computed from.
    pub s: f64,
}

impl DerivedConditioning {
    /// Builds a conditioning record directly from `(κ, τ, s)`.
    pub fn from_parts(kappa: f64, tau: f64, s: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidRegularity(format!("kappa = {kappa} must be positive")));
        }
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::InvalidRegularity(format!("tau = {tau} not in [0, 1)")));
        }
        if !(1.0..=2.0).contains(&s) {
            return Err(Error::InvalidRegularity(format!("s = {s} not in [1, 2]")));
        }
        Ok(Self {
            kappa,
            tau,
            q: optimal_rate_exponent(s),
            s,
        })
    }
}

/// `q = (3s − 2)/2`.
pub fn optimal_rate_exponent(s: f64) -> f64 {
    (3.0 * s - 2.0) / 2.0
}

pub fn derive_conditioning(params: &RegularityParams) -> Result<DerivedConditioning> {
    params.validate()?;
    let RegularityParams { s, l, r, mu, .. } = *params;
    Ok(DerivedConditioning {
        kappa: l.powf(2.0 / s) / mu.powf(2.0 / r),
        tau: 1.0 - s / r,
        q: optimal_rate_exponent(s),
        s,
    })
}

fn require_optimum(params: &RegularityParams) -> Result<f64> {
    params.f_star.ok_or(Error::MissingOptimum)
}

/// Checks `μ·d(x, X*)^r ≤ f(x) − f*` at every supplied point.
///
/// Comparisons allow a relative slack of `1e-12` for floating-point rounding.
pub fn check_sharpness_bound<O, D>(oracle: &O, params: &RegularityParams, points: &[Point], distance: D) -> Result<bool>
where
    O: ProximalOracle + ?Sized,
    D: Fn(ArrayView1<'_, f64>) -> f64,
{
    let f_star = require_optimum(params)?;
    Ok(points.iter().all(|x| {
        let lower = params.mu * distance(x.view()).powf(params.r);
        let gap = oracle.value(x.view()) - f_star;
        lower <= gap + 1e-12 * lower.abs().max(f_star.abs()).max(1e-300)
    }))
}

/// Checks the smoothness upper bound `f(x) − f* ≤ (L/s)·d(x, X*)^s`.
pub fn check_upper_bound<O, D>(oracle: &O, params: &RegularityParams, points: &[Point], distance: D) -> Result<bool>
where
    O: ProximalOracle + ?Sized,
    D: Fn(ArrayView1<'_, f64>) -> f64,
{
    let f_star = require_optimum(params)?;
    Ok(points.iter().all(|x| {
        let upper = params.l / params.s * distance(x.view()).powf(params.s);
        let gap = oracle.value(x.view()) - f_star;
        gap <= upper + 1e-12 * upper.abs().max(f_star.abs()).max(1e-300)
    }))
}

/// Checks `‖∇g(x) − ∇g(y)‖ ≤ L‖x − y‖^(s−1)` on the supplied pairs.
pub fn check_holder_smoothness<O>(oracle: &O, params: &RegularityParams, pairs: &[(Point, Point)]) -> bool
where
    O: ProximalOracle + ?Sized,
{
    pairs.iter().all(|(x, y)| {
        let lhs = norm(&(oracle.smooth_gradient(x.view()) - oracle.smooth_gradient(y.view())));
        let rhs = params.l * norm(&(x - y)).powf(params.s - 1.0);
        lhs <= rhs * (1.0 + 1e-12) + 1e-14
    })
}

/// Largest relative error between the smooth gradient and central finite
/// differences of the smooth value, over all supplied points.
///
/// The error at a point is `‖g − g_fd‖ / max(‖g‖, 1)`.
pub fn gradient_check_error<O>(oracle: &O, points: &[Point], step: f64) -> f64
where
    O: ProximalOracle + ?Sized,
{
    points
        .iter()
        .map(|x| {
            let grad = oracle.smooth_gradient(x.view());
            let mut fd = Point::zeros(x.len());
            let mut probe = x.clone();
            for i in 0..x.len() {
                let h = step * x[i].abs().max(1.0);
                probe[i] = x[i] + h;
                let up = oracle.smooth_value(probe.view());
                probe[i] = x[i] - h;
                let down = oracle.smooth_value(probe.view());
                probe[i] = x[i];
                fd[i] = (up - down) / (2.0 * h);
            }
            norm(&(&grad - &fd)) / norm(&grad).max(1.0)
        })
        .fold(0.0, f64::max)
}

pub(crate) fn norm(x: &Point) -> f64 {
    x.dot(x).sqrt()
}
