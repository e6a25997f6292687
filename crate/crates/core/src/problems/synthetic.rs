use std::sync::Arc;

use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linalg::{from_nalgebra, log_spaced, random_orthonormal, random_unit_vector};
use super::{ProblemInstance, ProblemMetadata, Region};
use crate::{Error, Point, ProximalOracle, RegularityParams, Result};

fn euclidean(x: ArrayView1<'_, f64>) -> f64 {
    x.dot(&x).sqrt()
}

/// `f(x) = ½ xᵀAx` with `A` symmetric positive definite.
#[derive(Debug, Clone)]
pub struct QuadraticOracle {
    matrix: Array2<f64>,
}

impl QuadraticOracle {
    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }
}

impl ProximalOracle for QuadraticOracle {
    fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        0.5 * x.dot(&self.matrix.dot(&x))
    }

    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        self.matrix.dot(&x)
    }
}

/// Strongly convex quadratic `½ xᵀAx` whose spectrum is log-spaced in
/// `[1/kappa_target, 1]`.
///
/// Declared regularity is exact: `s = r = 2`, `L = λmax = 1` and sharpness
/// constant `μ = λmin/2` (since `f(x) ≥ ½λmin‖x‖²`), so the generalized
/// condition number is `κ = 2·kappa_target`. The starting point is a random
/// unit vector, `f* = 0` and `d(x, X*) = ‖x‖`.
pub fn make_quadratic(n: usize, kappa_target: f64, seed: u64) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if !(kappa_target >= 1.0 && kappa_target.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "target condition number must be ≥ 1, got {kappa_target}"
        )));
    }
    if n == 1 && kappa_target != 1.0 {
        return Err(Error::InvalidArgument(
            "a one-dimensional quadratic has condition number 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spectrum = log_spaced(1.0, 1.0 / kappa_target, n);
    let q = random_orthonormal(n, n, &mut rng);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(spectrum.clone()));
    let a = &q * d * q.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let lambda_max = spectrum[0];
    let lambda_min = spectrum[n - 1];
    let x0 = random_unit_vector(n, &mut rng);
    let regularity = RegularityParams::new(2.0, lambda_max, 2.0, lambda_min / 2.0)?.with_optimum(0.0);
    Ok(ProblemInstance {
        oracle: Arc::new(QuadraticOracle::new(from_nalgebra(&a))?),
        regularity: Some(regularity),
        f_star: Some(0.0),
        lipschitz: Some(lambda_max),
        distance: Some(Arc::new(euclidean)),
        region: Some(Region {
            center: Array1::zeros(n),
            radius: 1.0,
        }),
        initial_point: x0,
        reference: None,
        metadata: ProblemMetadata {
            name: "quadratic".into(),
            dimension: n,
            seed: Some(seed),
            notes: Vec::new(),
        },
    })
}

/// `f(x) = ‖x‖^r`.
#[derive(Debug, Clone)]
pub struct NormPowerOracle {
    dimension: usize,
    power: f64,
}

impl NormPowerOracle {
    pub fn new(dimension: usize, power: f64) -> Self {
        Self { dimension, power }
    }
}

impl ProximalOracle for NormPowerOracle {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        let sq = x.dot(&x);
        if self.power == 2.0 {
            sq
        } else if self.power == 4.0 {
            sq * sq
        } else {
            sq.powf(self.power / 2.0)
        }
    }

    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        let sq = x.dot(&x);
        if sq == 0.0 {
            return Array1::zeros(x.len());
        }
        let scale = self.power * sq.powf(self.power / 2.0 - 1.0);
        x.to_owned() * scale
    }
}

/// `f(x) = ‖x‖^r`, sharp with `(r, μ = 1)` everywhere and smooth with `s = 2`,
/// `L = r(r−1)·radius^(r−2)` on the ball of the given radius.
///
/// The starting point lies on the sphere of that radius, so the whole
/// sublevel set stays inside the ball.
pub fn make_norm_power(n: usize, r: f64, radius: f64) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if !(r >= 2.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("power must be ≥ 2, got {r}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let lipschitz = r * (r - 1.0) * radius.powf(r - 2.0);
    let regularity = RegularityParams::new(2.0, lipschitz, r, 1.0)?.with_optimum(0.0);
    let x0 = Array1::from_elem(n, radius / (n as f64).sqrt());
    Ok(ProblemInstance {
        oracle: Arc::new(NormPowerOracle::new(n, r)),
        regularity: Some(regularity),
        f_star: Some(0.0),
        lipschitz: Some(lipschitz),
        distance: Some(Arc::new(euclidean)),
        region: Some(Region {
            center: Array1::zeros(n),
            radius,
        }),
        initial_point: x0,
        reference: None,
        metadata: ProblemMetadata {
            name: "norm-power".into(),
            dimension: n,
            seed: None,
            notes: Vec::new(),
        },
    })
}

/// `f(x) = ‖x‖`; the subgradient at the origin is zero.
#[derive(Debug, Clone)]
pub struct NormOracle {
    dimension: usize,
}

impl ProximalOracle for NormOracle {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        euclidean(x)
    }

    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        let norm = euclidean(x);
        if norm == 0.0 {
            Array1::zeros(x.len())
        } else {
            x.to_owned() / norm
        }
    }
}

/// Nonsmooth sharp problem `f(x) = ‖x‖` (`|x|` when `n = 1`).
///
/// Regularity: `s = 1` with Hölder constant `L = 2` (subgradients differ by at
/// most 2), `r = 1`, `μ = 1`. The starting point is at distance 1 from the
/// minimizer.
pub fn make_norm(n: usize) -> Result<ProblemInstance> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let regularity = RegularityParams::new(1.0, 2.0, 1.0, 1.0)?.with_optimum(0.0);
    Ok(ProblemInstance {
        oracle: Arc::new(NormOracle { dimension: n }),
        regularity: Some(regularity),
        f_star: Some(0.0),
        lipschitz: None,
        distance: Some(Arc::new(euclidean)),
        region: Some(Region {
            center: Array1::zeros(n),
            radius: 1.0,
        }),
        initial_point: Array1::from_elem(n, 1.0 / (n as f64).sqrt()),
        reference: None,
        metadata: ProblemMetadata {
            name: "norm".into(),
            dimension: n,
            seed: None,
            notes: Vec::new(),
        },
    })
}
