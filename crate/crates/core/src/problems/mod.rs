//! Built-in problems with known regularity, dataset-backed losses and
//! dataset loading.

mod data;
mod dataset;
pub(crate) mod linalg;
mod reference;
mod synthetic;

use std::sync::Arc;

use ndarray::ArrayView1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Point, ProximalOracle, RegularityParams};

pub use data::{
    make_dual_svm, make_lasso, make_least_squares, make_logistic, DualSvmOracle, LassoOracle, LeastSquaresOracle,
    LogisticOracle,
};
pub use dataset::{load_dataset, synthetic_classification, DataFormat, Dataset};
pub use reference::{reference_optimum, ReferenceOptimum};
pub use synthetic::{make_norm, make_norm_power, make_quadratic, NormOracle, NormPowerOracle, QuadraticOracle};

/// Distance to the solution set `d(x, X*)`.
pub type DistanceFn = Arc<dyn Fn(ArrayView1<'_, f64>) -> f64 + Send + Sync>;

/// Ball on which declared regularity constants are valid.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub center: Point,
    pub radius: f64,
}

impl Region {
    /// Points drawn uniformly from the ball.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.center.len();
        (0..count)
            .map(|_| {
                let direction = linalg::random_unit_vector(n, &mut rng);
                let radius = self.radius * rng.gen::<f64>().powf(1.0 / n as f64);
                &self.center + &(direction * radius)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemMetadata {
    pub name: String,
    pub dimension: usize,
    pub seed: Option<u64>,
    /// Known pathologies, e.g. separable data for logistic regression.
    pub notes: Vec<String>,
}

/// A problem ready to hand to the solvers.
#[derive(Clone)]
pub struct ProblemInstance {
    pub oracle: Arc<dyn ProximalOracle>,
    /// Exact regularity, when known; `f_star` is filled in when known.
    pub regularity: Option<RegularityParams>,
    pub f_star: Option<f64>,
    /// Lipschitz constant of `∇g`, when `g` is smooth and the constant is known.
    pub lipschitz: Option<f64>,
    pub distance: Option<DistanceFn>,
    /// Region where `regularity` holds.
    pub region: Option<Region>,
    /// Default starting point.
    pub initial_point: Point,
    /// How `f_star` was obtained when it is not closed form.
    pub reference: Option<ReferenceOptimum>,
    pub metadata: ProblemMetadata,
}

impl std::fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("metadata", &self.metadata)
            .field("regularity", &self.regularity)
            .field("f_star", &self.f_star)
            .finish_non_exhaustive()
    }
}

impl ProblemInstance {
    pub fn name(&self) -> &str {
        &self.metadata.name
    }

    pub fn dimension(&self) -> usize {
        self.metadata.dimension
    }

    /// `f(x0) − f*` at the default starting point.
    pub fn initial_gap(&self) -> Option<f64> {
        self.f_star.map(|f| self.oracle.value(self.initial_point.view()) - f)
    }

    /// `d(x0, X*)` at the default starting point.
    pub fn initial_distance(&self) -> Option<f64> {
        self.distance.as_ref().map(|d| d(self.initial_point.view()))
    }

    /// Attaches a reference optimum computed by a long solve.
    pub fn with_reference(mut self, reference: ReferenceOptimum) -> Self {
        self.f_star = Some(reference.value);
        if let Some(p) = self.regularity.as_mut() {
            p.f_star = Some(reference.value);
        }
        self.reference = Some(reference);
        self
    }

    pub fn with_initial_point(mut self, x0: Point) -> Self {
        self.initial_point = x0;
        self
    }
}
