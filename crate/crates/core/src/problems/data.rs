use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1, Axis};

use super::dataset::Dataset;
use super::linalg::{gram, symmetric_eigenvalues, to_nalgebra, vector_from_nalgebra, vector_to_nalgebra};
use super::{ProblemInstance, ProblemMetadata, Region};
use crate::{Error, Point, ProximalOracle, RegularityParams, Result};

fn check_nonempty(data: &Dataset) -> Result<()> {
    if data.rows() == 0 || data.cols() == 0 {
        return Err(Error::InvalidArgument(
            "dataset must have at least one row and one column".into(),
        ));
    }
    Ok(())
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::InvalidArgument(format!("{name} must be positive, got {value}")));
    }
    Ok(())
}

fn largest_gram_eigenvalue(features: &Array2<f64>) -> f64 {
    symmetric_eigenvalues(&gram(features))
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
}

fn norm(x: ArrayView1<'_, f64>) -> f64 {
    x.dot(&x).sqrt()
}

/// `½‖Ax − b‖² / m`.
#[derive(Debug, Clone)]
pub struct LeastSquaresOracle {
    features: Array2<f64>,
    targets: Array1<f64>,
}

impl LeastSquaresOracle {
    fn residual(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        self.features.dot(&x) - &self.targets
    }

    fn scale(&self) -> f64 {
        1.0 / self.features.nrows() as f64
    }
}

impl ProximalOracle for LeastSquaresOracle {
    fn dimension(&self) -> usize {
        self.features.ncols()
    }

    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        let r = self.residual(x);
        0.5 * self.scale() * r.dot(&r)
    }

    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        self.features.t().dot(&self.residual(x)) * self.scale()
    }
}

/// Averaged least squares `½‖Ax − b‖² / m` on the raw targets.
///
/// The minimizer is the minimum-norm least-squares solution. When `A` has full
/// column rank the instance is strongly convex and carries regularity
/// `(2, λmax(AᵀA)/m, 2, λmin(AᵀA)/(2m))`; otherwise regularity is omitted but
/// `f*` and the distance to the (affine) solution set are still exact.
pub fn make_least_squares(data: &Dataset) -> Result<ProblemInstance> {
    check_nonempty(data)?;
    let (m, n) = (data.rows(), data.cols());
    let a = to_nalgebra(&data.features);
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let tol = f64::EPSILON * m.max(n) as f64 * sigma_max;
    let rank = svd.rank(tol);
    let x_star = vector_from_nalgebra(
        &svd.solve(&vector_to_nalgebra(&data.labels), tol)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?,
    );
    let v_t = svd.v_t.expect("requested");
    let oracle = LeastSquaresOracle {
        features: data.features.clone(),
        targets: data.labels.clone(),
    };
    let f_star = oracle.smooth_value(x_star.view());
    let eig = symmetric_eigenvalues(&gram(&data.features));
    let lipschitz = eig[n - 1].max(0.0) / m as f64;

    let regularity = if rank == n && eig[0] > 0.0 {
        Some(RegularityParams::new(2.0, lipschitz, 2.0, eig[0] / (2.0 * m as f64))?.with_optimum(f_star))
    } else {
        None
    };

    // Rows of Vᵀ with nonzero singular values span the row space of A;
    // the solution set is x* plus its orthogonal complement.
    let kept: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol)
        .collect();
    let basis = Array2::from_shape_fn((kept.len(), n), |(i, j)| v_t[(kept[i], j)]);
    let center = x_star.clone();
    let distance = {
        let x_star = x_star.clone();
        Arc::new(move |x: ArrayView1<'_, f64>| {
            let diff = &x - &x_star;
            if rank == n {
                norm(diff.view())
            } else {
                norm(basis.dot(&diff).view())
            }
        })
    };
    let x0 = Array1::zeros(n);
    let radius = norm((&x0 - &center).view()).max(1.0);
    let mut notes = Vec::new();
    if rank < n {
        notes.push(format!(
            "rank-deficient design (rank {rank} < {n}); minimizer not unique"
        ));
    }
    Ok(ProblemInstance {
        oracle: Arc::new(oracle),
        regularity,
        f_star: Some(f_star),
        lipschitz: Some(lipschitz),
        distance: Some(distance),
        region: Some(Region { center, radius }),
        initial_point: x0,
        reference: None,
        metadata: ProblemMetadata {
            name: "least-squares".into(),
            dimension: n,
            seed: None,
            notes,
        },
    })
}

/// `(1/m) Σ log(1 + exp(−yᵢ aᵢᵀx))` with labels in `{−1, +1}`.
#[derive(Debug, Clone)]
pub struct LogisticOracle {
    /// Rows `yᵢ aᵢ`.
    signed: Array2<f64>,
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl ProximalOracle for LogisticOracle {
    fn dimension(&self) -> usize {
        self.signed.ncols()
    }

    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        let margins = self.signed.dot(&x);
        margins.iter().map(|&z| softplus(-z)).sum::<f64>() / self.signed.nrows() as f64
    }

    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        let weights = self.signed.dot(&x).mapv(|z| -sigmoid(-z));
        self.signed.t().dot(&weights) / self.signed.nrows() as f64
    }
}

fn signed_rows(data: &Dataset) -> Array2<f64> {
    let y = data.binary_labels();
    &data.features * &y.insert_axis(Axis(1))
}

/// Whether some `w` gives every row `yᵢ aᵢᵀw > 0`, found by a bounded
/// perceptron run. A `false` answer is not a proof of non-separability.
fn appears_separable(signed: &Array2<f64>) -> bool {
    let mut w = Array1::zeros(signed.ncols());
    for _ in 0..1000 {
        let mut clean = true;
        for row in signed.rows() {
            if row.dot(&w) <= 0.0 {
                w += &row;
                clean = false;
            }
        }
        if clean {
            return true;
        }
    }
    false
}

/// Averaged logistic loss. Labels are mapped to `±1`.
///
/// `∇g` is Lipschitz with `L = λmax(AᵀA)/(4m)`; `f*` is unknown and has to be
/// attached with [`ProblemInstance::with_reference`]. Linearly separable data
/// has no minimizer; this is recorded in the metadata notes.
pub fn make_logistic(data: &Dataset) -> Result<ProblemInstance> {
    check_nonempty(data)?;
    let n = data.cols();
    let signed = signed_rows(data);
    let lipschitz = largest_gram_eigenvalue(&data.features) / (4.0 * data.rows() as f64);
    let mut notes = Vec::new();
    if appears_separable(&signed) {
        notes.push("data is linearly separable: the infimum is not attained".to_string());
    }
    let trivial = data.features.iter().all(|&v| v == 0.0);
    Ok(ProblemInstance {
        oracle: Arc::new(LogisticOracle { signed }),
        regularity: None,
        f_star: trivial.then_some(std::f64::consts::LN_2),
        lipschitz: Some(lipschitz),
        distance: None,
        region: None,
        initial_point: Array1::zeros(n),
        reference: None,
        metadata: ProblemMetadata {
            name: "logistic".into(),
            dimension: n,
            seed: None,
            notes,
        },
    })
}

/// `½‖Ax − b‖² / m + λ‖x‖₁`.
#[derive(Debug, Clone)]
pub struct LassoOracle {
    smooth: LeastSquaresOracle,
    lambda: f64,
}

impl LassoOracle {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

pub(crate) fn soft_threshold(x: f64, threshold: f64) -> f64 {
    x.signum() * (x.abs() - threshold).max(0.0)
}

impl ProximalOracle for LassoOracle {
    fn dimension(&self) -> usize {
        self.smooth.dimension()
    }

    fn smooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.smooth.smooth_value(x)
    }

    fn smooth_gradient(&self, x: ArrayView1<'_, f64>) -> Point {
        self.smooth.smooth_gradient(x)
    }

    fn nonsmooth_value(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.lambda * x.iter().map(|v| v.abs()).sum::<f64>()
    }

    fn prox(&self, x: ArrayView1<'_, f64>, step: f64) -> Point {
        x.mapv(|v| soft_threshold(v, step * self.lambda))
    }

    fn is_composite(&self) -> bool {
        true
    }
}

/// LASSO with the averaged least-squares loss on the raw targets.
///
/// When `AᵀA` is diagonal the problem separates by coordinate and `f*` is
/// filled in exactly; otherwise it must be attached from a reference run.
pub fn make_lasso(data: &Dataset, lambda: f64) -> Result<ProblemInstance> {
    check_nonempty(data)?;
    check_positive("lambda", lambda)?;
    let (m, n) = (data.rows(), data.cols());
    let oracle = LassoOracle {
        smooth: LeastSquaresOracle {
            features: data.features.clone(),
            targets: data.labels.clone(),
        },
        lambda,
    };
    let g = gram(&data.features);
    let diagonal = g.indexed_iter().all(|((i, j), &v)| i == j || v == 0.0);
    let f_star = diagonal.then(|| {
        let correlation = data.features.t().dot(&data.labels);
        let x: Array1<f64> = (0..n)
            .map(|j| {
                if g[[j, j]] > 0.0 {
                    soft_threshold(correlation[j], m as f64 * lambda) / g[[j, j]]
                } else {
                    0.0
                }
            })
            .collect();
        oracle.value(x.view())
    });
    Ok(ProblemInstance {
        oracle: Arc::new(oracle),
        regularity: None,
        f_star,
        lipschitz: Some(largest_gram_eigenvalue(&data.features) / m as f64),
        distance: None,
        region: None,
        initial_point: Array1::zeros(n),
        reference: None,
        metadata: ProblemMetadata {
            name: "lasso".into(),
            dimension: n,
            seed: None,
            notes: Vec::new(),
        },
    })
}

/// Negated SVM dual: `‖Zᵀα‖²/(2λm²) − Σα/m` over the box `[0, 1]^m`, with
/// rows `zᵢ = yᵢ aᵢ`.
#[derive(Debug, Clone)]
pub struct DualSvmOracle {
    signed: Array2<f64>,
    regularization: f64,
}

impl DualSvmOracle {
    fn scale(&self) -> f64 {
        let m = self.signed.nrows() as f64;
        1.0 / (self.regularization * m * m)
    }

    /// Primal weights `w = Zᵀα / (λm)` associated with a dual point.
    pub fn primal(&self, alpha: ArrayView1<'_, f64>) -> Point {
        self.signed.t().dot(&alpha) / (self.regularization * self.signed.nrows() as f64)
    }
}

impl ProximalOracle for DualSvmOracle {
    fn dimension(&self) -> usize {
        self.signed.nrows()
    }

    fn smooth_value(&self, alpha: ArrayView1<'_, f64>) -> f64 {
        let w = self.signed.t().dot(&alpha);
        0.5 * self.scale() * w.dot(&w) - alpha.sum() / self.signed.nrows() as f64
    }

    fn smooth_gradient(&self, alpha: ArrayView1<'_, f64>) -> Point {
        let w = self.signed.t().dot(&alpha);
        self.signed.dot(&w) * self.scale() - 1.0 / self.signed.nrows() as f64
    }

    fn nonsmooth_value(&self, alpha: ArrayView1<'_, f64>) -> f64 {
        if alpha.iter().all(|&a| (0.0..=1.0).contains(&a)) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, alpha: ArrayView1<'_, f64>, _step: f64) -> Point {
        alpha.mapv(|a| a.clamp(0.0, 1.0))
    }

    fn is_composite(&self) -> bool {
        true
    }
}

/// Dual of the hinge-loss SVM with penalty `λ/2‖w‖²`, as a box-constrained
/// quadratic minimization in `α ∈ [0, 1]^m`. Labels are mapped to `±1`.
pub fn make_dual_svm(data: &Dataset, regularization: f64) -> Result<ProblemInstance> {
    check_nonempty(data)?;
    check_positive("regularization", regularization)?;
    let m = data.rows();
    let signed = signed_rows(data);
    let trivial = data.features.iter().all(|&v| v == 0.0);
    let lipschitz = largest_gram_eigenvalue(&data.features) / (regularization * (m * m) as f64);
    Ok(ProblemInstance {
        oracle: Arc::new(DualSvmOracle { signed, regularization }),
        regularity: None,
        f_star: trivial.then_some(-1.0),
        lipschitz: Some(lipschitz),
        distance: None,
        region: None,
        initial_point: Array1::zeros(m),
        reference: None,
        metadata: ProblemMetadata {
            name: "dual-svm".into(),
            dimension: m,
            seed: None,
            notes: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;

    #[test]
    fn identity_least_squares() {
        let data = Dataset::new(Array2::eye(3), Array1::zeros(3)).unwrap();
        let p = make_least_squares(&data).unwrap();
        assert_eq!(p.f_star, Some(0.0));
        let reg = p.regularity.unwrap();
        assert_relative_eq!(reg.l, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(reg.conditioning().unwrap().kappa, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn rank_deficient_least_squares() {
        let data = Dataset::new(array![[1.0, 1.0], [2.0, 2.0]], array![1.0, 3.0]).unwrap();
        let p = make_least_squares(&data).unwrap();
        assert!(p.regularity.is_none());
        // Projection of b onto span{(1,2)} leaves residual (1, 3) − 1.4·(1, 2).
        let r = array![1.0 - 1.4, 3.0 - 2.8];
        assert_relative_eq!(p.f_star.unwrap(), 0.25 * r.dot(&r), max_relative = 1e-10);
        let d = p.distance.unwrap();
        // Moving along the null space keeps the distance unchanged.
        let a = d(array![0.3, 0.2].view());
        let b = d(array![1.3, -0.8].view());
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn logistic_zero_data_is_log_two() {
        let data = Dataset::new(Array2::zeros((4, 2)), array![1.0, -1.0, 1.0, 0.0]).unwrap();
        let p = make_logistic(&data).unwrap();
        assert_relative_eq!(p.oracle.value(array![3.0, -2.0].view()), std::f64::consts::LN_2);
        assert!(p.metadata.notes.is_empty());
    }

    #[test]
    fn logistic_separable_flagged() {
        let data = Dataset::new(array![[1.0], [-1.0]], array![1.0, -1.0]).unwrap();
        let p = make_logistic(&data).unwrap();
        assert_eq!(p.metadata.notes.len(), 1);
        let f = |t: f64| p.oracle.value(array![t].view());
        assert!(f(10.0) < f(1.0) && f(20.0) < f(10.0) && f(20.0) > 0.0);
    }

    #[test]
    fn lasso_closed_forms() {
        let data = Dataset::new(array![[1.0]], array![2.0]).unwrap();
        let p = make_lasso(&data, 1.0).unwrap();
        assert_relative_eq!(p.f_star.unwrap(), 1.5, max_relative = 1e-15);
        let b = array![0.5, -1.0, 2.0];
        let data = Dataset::new(Array2::eye(3), b.clone()).unwrap();
        let p = make_lasso(&data, 1.0).unwrap();
        assert_relative_eq!(p.f_star.unwrap(), 0.5 * b.dot(&b) / 3.0, max_relative = 1e-15);
        assert!(make_lasso(&data, 0.0).is_err());
    }

    #[test]
    fn dual_svm_box() {
        let data = Dataset::new(Array2::zeros((3, 2)), array![1.0, -1.0, 1.0]).unwrap();
        let p = make_dual_svm(&data, 1.0).unwrap();
        assert_eq!(p.f_star, Some(-1.0));
        assert_eq!(p.oracle.value(Array1::ones(3).view()), -1.0);
        assert_eq!(p.oracle.prox(array![-0.5, 0.5, 1.5].view(), 1.0), array![0.0, 0.5, 1.0]);
        assert!(p.oracle.value(array![2.0, 0.0, 0.0].view()).is_infinite());
    }
}
