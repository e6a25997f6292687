//! Built-in problems: declared regularity, closed-form optima and loaders.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use ndarray::{array, Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restart_core::problems::{
    load_dataset, make_dual_svm, make_lasso, make_least_squares, make_logistic, make_norm, make_norm_power,
    make_quadratic, reference_optimum, synthetic_classification, DataFormat, Dataset, ProblemInstance,
};
use restart_core::regularity::{
    check_holder_smoothness, check_sharpness_bound, check_upper_bound, gradient_check_error,
};
use restart_core::{Point, RegularityParams};

fn checks_pass(p: &ProblemInstance, seed: u64) {
    let reg = p.regularity.expect("declared regularity");
    let region = p.region.as_ref().expect("validated region");
    let points = region.sample(100, seed);
    let distance = p.distance.as_ref().unwrap();
    assert!(
        check_sharpness_bound(p.oracle.as_ref(), &reg, &points, |x| distance(x)).unwrap(),
        "{}",
        p.name()
    );
    assert!(
        check_upper_bound(p.oracle.as_ref(), &reg, &points, |x| distance(x)).unwrap(),
        "{}",
        p.name()
    );
    assert!(
        gradient_check_error(p.oracle.as_ref(), &points, 1e-6) <= 1e-5,
        "{}",
        p.name()
    );
}

#[test]
fn synthetic_instances_satisfy_their_regularity() {
    checks_pass(&make_quadratic(50, 100.0, 1).unwrap(), 2);
    checks_pass(&make_quadratic(1, 1.0, 1).unwrap(), 3);
    checks_pass(&make_norm_power(10, 4.0, 1.0).unwrap(), 4);
    checks_pass(&make_norm_power(5, 3.0, 2.0).unwrap(), 5);
    checks_pass(&make_norm_power(3, 2.0, 1.0).unwrap(), 6);
    let data = synthetic_classification(80, 12, 5.0, 7).unwrap();
    checks_pass(&make_least_squares(&data).unwrap(), 8);
}

#[test]
fn quadratic_sharpness_constant_is_half_the_smallest_eigenvalue() {
    let p = make_quadratic(20, 50.0, 9).unwrap();
    let reg = p.regularity.unwrap();
    // Along the bottom eigenvector f(x) = ½λmin‖x‖², so μ = λmin is too large.
    let lambda_min = 2.0 * reg.mu;
    let too_sharp = RegularityParams::new(2.0, reg.l, 2.0, lambda_min)
        .unwrap()
        .with_optimum(0.0);
    let mut points: Vec<Point> = p.region.as_ref().unwrap().sample(100, 1);
    let distance = p.distance.as_ref().unwrap();
    assert!(check_sharpness_bound(p.oracle.as_ref(), &reg, &points, |x| distance(x)).unwrap());
    // Recover the Hessian column by column and probe its bottom eigenvector.
    let hessian = DMatrix::from_fn(20, 20, |i, j| {
        let mut e = Array1::zeros(20);
        e[j] = 1.0;
        p.oracle.smooth_gradient(e.view())[i]
    });
    let eig = hessian.symmetric_eigen();
    let bottom = eig.eigenvalues.imin();
    assert!((eig.eigenvalues[bottom] - lambda_min).abs() <= 1e-12);
    points.push(eig.eigenvectors.column(bottom).iter().map(|v| 0.5 * v).collect());
    assert!(check_sharpness_bound(p.oracle.as_ref(), &reg, &points, |x| distance(x)).unwrap());
    assert!(!check_sharpness_bound(p.oracle.as_ref(), &too_sharp, &points, |x| distance(x)).unwrap());
}

#[test]
fn norm_power_is_holder_smooth_on_its_ball() {
    let p = make_norm_power(6, 4.0, 1.0).unwrap();
    let region = p.region.as_ref().unwrap();
    let a = region.sample(1000, 11);
    let b = region.sample(1000, 12);
    let pairs: Vec<(Point, Point)> = a.into_iter().zip(b).collect();
    assert!(check_holder_smoothness(
        p.oracle.as_ref(),
        &p.regularity.unwrap(),
        &pairs
    ));
}

#[test]
fn norm_instance_is_sharp_and_holder() {
    let p = make_norm(4).unwrap();
    let reg = p.regularity.unwrap();
    let points = p.region.as_ref().unwrap().sample(100, 3);
    let distance = p.distance.as_ref().unwrap();
    assert!(check_sharpness_bound(p.oracle.as_ref(), &reg, &points, |x| distance(x)).unwrap());
    let pairs: Vec<(Point, Point)> = points.iter().map(|x| (x.clone(), -x)).collect();
    assert!(check_holder_smoothness(p.oracle.as_ref(), &reg, &pairs));
}

#[test]
fn least_squares_optimum_matches_normal_equations() {
    let data = synthetic_classification(208, 60, 30.0, 13).unwrap();
    let p = make_least_squares(&data).unwrap();
    let a = DMatrix::from_fn(208, 60, |i, j| data.features[[i, j]]);
    let b = DVector::from_iterator(208, data.labels.iter().copied());
    let x = (a.transpose() * &a).cholesky().unwrap().solve(&(a.transpose() * &b));
    let r = &a * &x - &b;
    let f_star = 0.5 * r.norm_squared() / 208.0;
    assert!((p.f_star.unwrap() - f_star).abs() <= 1e-10 * f_star.max(1.0));
    assert!(p.regularity.is_some());
}

#[test]
fn logistic_reference_optimum() {
    let data = synthetic_classification(60, 8, 3.0, 17).unwrap();
    let p = make_logistic(&data).unwrap();
    assert!(p.f_star.is_none());
    let r = reference_optimum(
        p.oracle.as_ref(),
        &p.initial_point,
        p.lipschitz.unwrap(),
        1_000_000,
        1e-12,
    )
    .unwrap();
    assert!(r.converged, "{}", r.gradient_mapping_norm);
    let p = p.with_reference(r.clone());
    assert_eq!(p.f_star, Some(r.value));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let x: Array1<f64> = &r.point + &(0..8).map(|_| rng.gen_range(-0.1..0.1)).collect::<Array1<f64>>();
        assert!(p.oracle.value(x.view()) >= r.value - 1e-12);
    }
    assert!(gradient_check_error(p.oracle.as_ref(), &[r.point.clone(), Array1::ones(8)], 1e-6) <= 1e-5);
}

#[test]
fn lasso_reference_matches_optimality_conditions() {
    let data = synthetic_classification(50, 30, 4.0, 23).unwrap();
    let lambda = 0.02;
    let p = make_lasso(&data, lambda).unwrap();
    let r = reference_optimum(
        p.oracle.as_ref(),
        &p.initial_point,
        p.lipschitz.unwrap(),
        1_000_000,
        1e-12,
    )
    .unwrap();
    assert!(r.converged);
    // Subgradient optimality: |∇g_j| ≤ λ off the support, ∇g_j = −λ sign(x_j) on it.
    let g = p.oracle.smooth_gradient(r.point.view());
    for (gj, xj) in g.iter().zip(r.point.iter()) {
        if *xj == 0.0 {
            assert!(gj.abs() <= lambda + 1e-9);
        } else {
            assert!((gj + lambda * xj.signum()).abs() <= 1e-9);
        }
    }
}

/// Box-constrained 2-variable QP solved by enumerating active sets.
fn two_variable_qp(h: [[f64; 2]; 2], lin: [f64; 2]) -> f64 {
    let value = |a: [f64; 2]| {
        0.5 * (h[0][0] * a[0] * a[0] + 2.0 * h[0][1] * a[0] * a[1] + h[1][1] * a[1] * a[1])
            + lin[0] * a[0]
            + lin[1] * a[1]
    };
    let mut candidates = Vec::new();
    for a0 in [0.0, 1.0] {
        for a1 in [0.0, 1.0] {
            candidates.push([a0, a1]);
        }
        // a0 fixed, a1 free.
        if h[1][1] > 0.0 {
            let a1 = -(lin[1] + h[0][1] * a0) / h[1][1];
            candidates.push([a0, a1]);
        }
        if h[0][0] > 0.0 {
            let a1 = a0;
            let a_free = -(lin[0] + h[0][1] * a1) / h[0][0];
            candidates.push([a_free, a1]);
        }
    }
    let det = h[0][0] * h[1][1] - h[0][1] * h[0][1];
    if det.abs() > 1e-14 {
        candidates.push([
            (-lin[0] * h[1][1] + lin[1] * h[0][1]) / det,
            (-lin[1] * h[0][0] + lin[0] * h[0][1]) / det,
        ]);
    }
    candidates
        .into_iter()
        .filter(|a| a.iter().all(|v| (0.0..=1.0).contains(v)))
        .map(value)
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn dual_svm_two_points() {
    let data = Dataset::new(array![[0.8], [-0.3]], array![1.0, 1.0]).unwrap();
    let lambda = 0.5;
    let p = make_dual_svm(&data, lambda).unwrap();
    let m = 2.0;
    let z = [0.8, -0.3];
    let scale = 1.0 / (lambda * m * m);
    let h = [
        [scale * z[0] * z[0], scale * z[0] * z[1]],
        [scale * z[1] * z[0], scale * z[1] * z[1]],
    ];
    let f_star = two_variable_qp(h, [-1.0 / m, -1.0 / m]);
    let r = reference_optimum(
        p.oracle.as_ref(),
        &p.initial_point,
        p.lipschitz.unwrap(),
        1_000_000,
        1e-12,
    )
    .unwrap();
    assert!((r.value - f_star).abs() <= 1e-10, "{} vs {}", r.value, f_star);
}

#[test]
fn dual_svm_random_instance_against_projected_gradient() {
    let data = synthetic_classification(25, 5, 2.0, 31).unwrap();
    let p = make_dual_svm(&data, 1.0).unwrap();
    let lipschitz = p.lipschitz.unwrap();
    let r = reference_optimum(p.oracle.as_ref(), &p.initial_point, lipschitz, 1_000_000, 1e-12).unwrap();
    // Plain projected gradient as an independent solver.
    let mut alpha = Array1::zeros(25);
    for _ in 0..200_000 {
        let g = p.oracle.smooth_gradient(alpha.view());
        alpha = (&alpha - &(g / lipschitz)).mapv(|a: f64| a.clamp(0.0, 1.0));
    }
    assert!((p.oracle.value(alpha.view()) - r.value).abs() <= 1e-9);
}

#[test]
fn loads_sonar_shaped_files() {
    let data = synthetic_classification(208, 60, 10.0, 3).unwrap();
    let mut csv = tempfile::NamedTempFile::new().unwrap();
    let mut svm = tempfile::NamedTempFile::new().unwrap();
    for (row, y) in data.features.rows().into_iter().zip(data.labels.iter()) {
        let fields: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(csv, "{},{}", fields.join(","), y).unwrap();
        let pairs: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, v)| format!("{}:{v:e}", j + 1))
            .collect();
        writeln!(svm, "{} {}", y, pairs.join(" ")).unwrap();
    }
    let a = load_dataset(csv.path(), DataFormat::Csv, None).unwrap();
    let b = load_dataset(svm.path(), DataFormat::LibSvm, Some(60)).unwrap();
    assert_eq!((a.rows(), a.cols()), (208, 60));
    assert_eq!(a, data);
    assert_eq!(b, data);
}

#[test]
fn gradient_checks_on_dataset_losses() {
    let data = synthetic_classification(30, 6, 3.0, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let points6: Vec<Point> = (0..20)
        .map(|_| (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let points30: Vec<Point> = (0..20)
        .map(|_| (0..30).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect();
    for p in [make_least_squares(&data), make_logistic(&data), make_lasso(&data, 0.1)] {
        let p = p.unwrap();
        assert!(
            gradient_check_error(p.oracle.as_ref(), &points6, 1e-6) <= 1e-5,
            "{}",
            p.name()
        );
    }
    let p = make_dual_svm(&data, 1.0).unwrap();
    assert!(gradient_check_error(p.oracle.as_ref(), &points30, 1e-6) <= 1e-5);
    let zero = Dataset::new(Array2::zeros((3, 2)), array![1.0, -1.0, 1.0]).unwrap();
    assert!(make_least_squares(&zero).unwrap().regularity.is_none());
}
