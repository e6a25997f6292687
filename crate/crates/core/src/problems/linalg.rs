//! Small dense linear-algebra helpers bridging ndarray and nalgebra.

use nalgebra::{DMatrix, DVector};
use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::StandardNormal;

pub(crate) fn to_nalgebra(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub(crate) fn from_nalgebra(a: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((a.nrows(), a.ncols()), |(i, j)| a[(i, j)])
}

pub(crate) fn vector_to_nalgebra(v: &Array1<f64>) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().copied())
}

pub(crate) fn vector_from_nalgebra(v: &DVector<f64>) -> Array1<f64> {
    v.iter().copied().collect()
}

/// Ascending eigenvalues of a symmetric matrix.
pub(crate) fn symmetric_eigenvalues(a: &Array2<f64>) -> Vec<f64> {
    let mut values: Vec<f64> = to_nalgebra(a).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `AᵀA`.
pub(crate) fn gram(a: &Array2<f64>) -> Array2<f64> {
    a.t().dot(a)
}

/// Matrix with orthonormal columns spanning a random `rows × cols` Gaussian matrix.
pub(crate) fn random_orthonormal<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix column signs so the factorization is unique.
    let mut q = q.columns(0, cols).into_owned();
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub(crate) fn random_unit_vector<R: Rng>(n: usize, rng: &mut R) -> Array1<f64> {
    loop {
        let v: Array1<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.dot(&v).sqrt();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// Log-spaced values from `hi` down to `lo`, inclusive.
pub(crate) fn log_spaced(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let ratio = (lo / hi).ln();
    (0..count)
        .map(|i| {
            if i == 0 {
                hi
            } else if i == count - 1 {
                lo
            } else {
                hi * (ratio * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}
