use hdi_core::ann::{init_network, Activation, NetworkModel};
use hdi_core::matrix::Matrix;
use hdi_core::rng;
use rand::Rng;

fn central_difference(model: &NetworkModel, x: &Matrix, y: &[usize], h: f64) -> Vec<f64> {
    let base = model.parameters();
    let mut probe = model.clone();
    (0..base.len())
        .map(|i| {
            let mut p = base.clone();
            p[i] = base[i] + h;
            probe.set_parameters(&p).unwrap();
            let up = probe.loss(x, y).unwrap();
            p[i] = base[i] - h;
            probe.set_parameters(&p).unwrap();
            let down = probe.loss(x, y).unwrap();
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(u, v)| (u - v).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm =
        a.iter().map(|u| u * u).sum::<f64>().sqrt() + b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        0.0
    } else {
        diff / norm
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut data_rng = rng::seeded(99);
    for hidden in [10, 13, 16, 20] {
        for seed in 0..10u64 {
            let model = init_network(&[5, hidden, 4], Activation::Sigmoid, seed).unwrap();
            let n = 12;
            let x = Matrix::from_vec(n, 5, (0..n * 5).map(|_| data_rng.gen()).collect()).unwrap();
            let y: Vec<usize> = (0..n).map(|_| data_rng.gen_range(0..4)).collect();
            let (_, grad) = model.loss_and_gradient(&x, &y).unwrap();
            let numeric = central_difference(&model, &x, &y, 1e-5);
            let err = relative_error(&grad.flatten(), &numeric);
            assert!(err < 1e-4, "hidden {hidden} seed {seed}: {err}");
        }
    }
}

#[test]
fn tanh_gradient_matches_finite_differences() {
    let model = init_network(&[5, 7, 4], Activation::Tanh, 3).unwrap();
    let x = Matrix::from_rows(&[[0.1, 0.5, 0.9, 0.3, 0.2], [0.8, 0.1, 0.4, 0.6, 0.7]]).unwrap();
    let y = [1, 3];
    let (_, grad) = model.loss_and_gradient(&x, &y).unwrap();
    let err = relative_error(&grad.flatten(), &central_difference(&model, &x, &y, 1e-5));
    assert!(err < 1e-4, "{err}");
}

#[test]
fn two_two_two_forward_pass() {
    let w = vec![
        Matrix::from_rows(&[[0.1, -0.2], [0.4, 0.3]]).unwrap(),
        Matrix::from_rows(&[[0.7, -0.5], [-0.3, 0.2]]).unwrap(),
    ];
    let b = vec![vec![0.05, -0.1], vec![0.0, 0.1]];
    let m = NetworkModel::from_parts(vec![2, 2, 2], w, b, Activation::Sigmoid, 0).unwrap();

    let logits = m.logits(&[1.0, 2.0]).unwrap();
    let expected_logits = [-0.04899830193256072, 0.11084285079074024];
    for (got, want) in logits.iter().zip(expected_logits) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    let p = m.forward(&[1.0, 2.0]).unwrap();
    for (got, want) in p.iter().zip([0.46012457443854576, 0.5398754255614542]) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    let x = Matrix::from_rows(&[[1.0, 2.0]]).unwrap();
    let loss = m.loss(&x, &[0]).unwrap();
    assert!((loss - 0.776258012165649).abs() < 1e-12);
}

#[test]
fn initial_weights_respect_glorot_bounds() {
    let m = init_network(&[5, 16, 4], Activation::Sigmoid, 8).unwrap();
    let limits = [(6.0f64 / 21.0).sqrt(), (6.0f64 / 20.0).sqrt()];
    for (w, limit) in m.weights().iter().zip(limits) {
        assert!(w.as_slice().iter().all(|v| v.abs() <= limit));
    }
    assert!(m.biases().iter().flatten().all(|&b| b == 0.0));
    assert_eq!(
        m,
        init_network(&[5, 16, 4], Activation::Sigmoid, 8).unwrap()
    );
    assert_ne!(
        m,
        init_network(&[5, 16, 4], Activation::Sigmoid, 9).unwrap()
    );
}
