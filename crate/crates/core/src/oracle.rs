//! The problem interface shared by every solver.
//!
//! Problems are written `f = g + h` where `g` is the (Hölder) smooth part,
//! accessed through its value and gradient, and `h` is an optional nonsmooth
//! part accessed only through its value and proximal operator.

use ndarray::ArrayView1;

use crate::Point;

/// First-order oracle for a composite objective `g(x) + h(x)`.
///
/// Implementations must be immutable after construction: solvers share one
/// oracle across concurrent runs.
pub trait ProximalOracle: Send + Sync {
    /// Ambient dimension `n`.
    fn dimension(&self) -> usize;

    /// Value of the smooth part `g`.
    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64;

    /// Gradient (or a subgradient at kinks) of the smooth part.
    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point;

    /// Value of the nonsmooth part `h`; zero when there is none.
    fn nonsmooth_value(&self, _x: ArrayView1<'_, f64>) -> f64 {
        0.0
    }

    /// `argmin_u h(u) + ‖u − x‖² / (2 step)`; the identity when `h = 0`.
    fn prox(&self, x: ArrayView1<'_, f64>, _step: f64) -> Point {
        x.to_owned()
    }

    /// Whether a nonsmooth part is present.
    fn is_composite(&self) -> bool {
        false
    }

    /// Full objective `g(x) + h(x)`.
    fn value(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.smooth_value(x) + self.nonsmooth_value(x)
    }
}

impl<O: ProximalOracle + ?Sized> ProximalOracle for &O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        (**self).smooth_value(x)
    }
    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        (**self).smooth_gradient(x)
    }
    fn nonsmooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        (**self).nonsmooth_value(x)
    }
    fn prox(&self, x: ArrayView1<'_, f64>, step: f64) -> Point {
        (**self).prox(x, step)
    }
    fn is_composite(&self) -> bool {
        (**self).is_composite()
    }
}

impl<O: ProximalOracle + ?Sized> ProximalOracle for Box<O> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        (**self).smooth_value(x)
    }
    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        (**self).smooth_gradient(x)
    }
    fn nonsmooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        (**self).nonsmooth_value(x)
    }
    fn prox(&self, x: ArrayView1<'_, f64>, step: f64) -> Point {
        (**self).prox(x, step)
    }
    fn is_composite(&self) -> bool {
        (**self).is_composite()
    }
}

type ValueFn = Box<dyn Fn(ArrayView1<'_, f64>) -> f64 + Send + Sync>;
type GradientFn = Box<dyn Fn(ArrayView1<'_, f64>) -> Point + Send + Sync>;
type ProxFn = Box<dyn Fn(ArrayView1<'_, f64>, f64) -> Point + Send + Sync>;

/// Oracle assembled from closures.
///
/// ```
/// use ndarray::array;
/// use restart_core::{FnOracle, ProximalOracle};
///
/// let f = FnOracle::new(1, |x| 0.5 * x[0] * x[0], |x| x.to_owned());
/// assert_eq!(f.value(array![2.0].view()), 2.0);
/// ```
pub struct FnOracle {
    dimension: usize,
    value: ValueFn,
    gradient: GradientFn,
    nonsmooth: Option<(ValueFn, ProxFn)>,
}

impl FnOracle {
    pub fn new(
        dimension: usize,
        value: impl Fn(ArrayView1<'_, f64>) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(ArrayView1<'_, f64>) -> Point + Send + Sync + 'static,
    ) -> Self {
        Self {
            dimension,
            value: Box::new(value),
            gradient: Box::new(gradient),
            nonsmooth: None,
        }
    }

    /// Adds a nonsmooth part given by its value and proximal operator.
    pub fn with_prox(
        mut self,
        value: impl Fn(ArrayView1<'_, f64>) -> f64 + Send + Sync + 'static,
        prox: impl Fn(ArrayView1<'_, f64>, f64) -> Point + Send + Sync + 'static,
    ) -> Self {
        self.nonsmooth = Some((Box::new(value), Box::new(prox)));
        self
    }
}

impl ProximalOracle for FnOracle {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        (self.value)(x)
    }

    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        (self.gradient)(x)
    }

    fn nonsmooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.nonsmooth.as_ref().map_or(0.0, |(h, _)| h(x))
    }

    fn prox(&self, x: ArrayView1<'_, f64>, step: f64) -> Point {
        match &self.nonsmooth {
            Some((_, prox)) => prox(x, step),
            None => x.to_owned(),
        }
    }

    fn is_composite(&self) -> bool {
        self.nonsmooth.is_some()
    }
}
