use num_complex::Complex64 as C64;
use photostat::cat_states::{self, CatState, Parity};
use photostat::fock_oracle::{cat_vector, coherent_vector, position_wave, FockVector};
use photostat::gaussian::{q_function_at, q_params, wigner_eval, GaussianState};
use photostat::phase_space::{
    density_from_analytic_q, density_from_q, density_from_wigner, q_from_wigner, q_from_wigner_on,
    wigner_from_density, wigner_from_q, Axis, ComplexGrid, GridFunction, Representation,
};
use photostat::Error;

const PI: f64 = std::f64::consts::PI;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn vacuum_kernel(x: f64, y: f64) -> f64 {
    PI.powf(-0.5) * (-(x * x + y * y) / 2.0).exp()
}

fn density_of(v: &FockVector, x: &Axis) -> GridFunction {
    let psi = position_wave(v, &x.points()).unwrap();
    let n = x.len;
    let values = (0..n * n).map(|k| psi[k / n] * psi[k % n].conj()).collect();
    GridFunction::new(Representation::Density, vec![x.relabeled("x0"), x.relabeled("x0'")], values).unwrap()
}

fn wigner_grid(extent: f64, n: usize, f: impl Fn(f64, f64) -> f64 + Sync) -> GridFunction {
    let ax = Axis::symmetric("p0", extent, n).unwrap();
    GridFunction::from_real_fn(Representation::Wigner, vec![ax.clone(), ax.relabeled("q0")], |v| f(v[0], v[1])).unwrap()
}

fn max_dev(g: &GridFunction, f: impl Fn(&[f64]) -> f64) -> f64 {
    (0..g.len()).map(|k| (g.values()[k] - f(&g.coords(k))).norm()).fold(0.0, f64::max)
}

fn argmax(g: &GridFunction) -> Vec<f64> {
    let k = (0..g.len()).max_by(|&a, &b| g.values()[a].re.total_cmp(&g.values()[b].re)).unwrap();
    g.coords(k)
}

#[test]
fn vacuum_density_to_wigner() {
    let x = Axis::symmetric("x0", 6.0, 256).unwrap();
    let rho = GridFunction::from_real_fn(Representation::Density, vec![x.clone(), x.relabeled("x0'")], |v| {
        vacuum_kernel(v[0], v[1])
    })
    .unwrap();
    let w = wigner_from_density(&rho, &Axis::symmetric("p", 6.0, 256).unwrap()).unwrap();
    assert!(max_dev(&w, |c| 2.0 * (-c[0] * c[0] - c[1] * c[1]).exp()) < 1e-4);
    assert!(w.max_imag() < 1e-12);
}

#[test]
fn coherent_density_to_wigner_matches_gaussian_module() {
    let alpha = C64::new(0.5, 0.8);
    let x = Axis::symmetric("x", 7.0, 141).unwrap();
    let rho = density_of(&coherent_vector(&[alpha], 60).unwrap(), &x);
    let w = wigner_from_density(&rho, &Axis::symmetric("p", 6.0, 121).unwrap()).unwrap();
    let st = GaussianState::coherent(&[alpha]);
    assert!(max_dev(&w, |c| wigner_eval(&st, &[c[0]], &[c[1]]).unwrap()) < 1e-4);
    let peak = argmax(&w);
    assert!((peak[0] - SQRT_2 * alpha.im).abs() <= 0.1);
    assert!((peak[1] - SQRT_2 * alpha.re).abs() <= 0.05);
}

#[test]
fn odd_cat_wigner_origin() {
    let a = [C64::new(1.0, 0.0)];
    let x = Axis::symmetric("x", 7.0, 141).unwrap();
    let rho = density_of(&cat_vector(&a, Parity::Odd, 40).unwrap(), &x);
    let w = wigner_from_density(&rho, &Axis::symmetric("p", 6.0, 121).unwrap()).unwrap();
    let origin = w.get(&[60, 140]);
    assert_eq!(w.coords(w.flat_index(&[60, 140])), vec![0.0, 0.0]);
    assert!((origin.re + 2.0).abs() < 1e-3, "{origin}");
    let cat = CatState::odd(a.to_vec()).unwrap();
    assert!(max_dev(&w, |c| cat_states::wigner_function(&cat, &[c[0]], &[c[1]]).unwrap()) < 1e-4);
}

#[test]
fn wigner_to_density_and_back() {
    let w = wigner_grid(6.0, 121, |p, q| 2.0 * (-p * p - q * q).exp());
    let rho = density_from_wigner(&w).unwrap();
    assert!(max_dev(&rho, |c| vacuum_kernel(c[0], c[1])) < 1e-4);
    assert!((rho.normalization().re - 1.0).abs() < 1e-4);
    let again = wigner_from_density(&rho, &w.axes()[0]).unwrap();
    assert!(again.max_abs_diff(&w).unwrap() < 1e-4);
}

#[test]
fn two_mode_round_trip() {
    let x = Axis::symmetric("x", 6.0, 35).unwrap();
    let axes = vec![x.relabeled("x0"), x.relabeled("x0'"), x.relabeled("x1"), x.relabeled("x1'")];
    // vacuum ⊗ coherent(0.4)
    let a = 0.4 * SQRT_2;
    let rho = GridFunction::from_real_fn(Representation::Density, axes, |v| {
        vacuum_kernel(v[0], v[1]) * vacuum_kernel(v[2] - a, v[3] - a)
    })
    .unwrap();
    let w = wigner_from_density(&rho, &Axis::symmetric("p", 4.4, 35).unwrap()).unwrap();
    assert_eq!(w.kind(), Representation::Wigner);
    let st = GaussianState::coherent(&[C64::new(0.0, 0.0), C64::new(0.4, 0.0)]);
    assert!(max_dev(&w, |c| wigner_eval(&st, &[c[0], c[2]], &[c[1], c[3]]).unwrap()) < 1e-4);
    let back = density_from_wigner(&w).unwrap();
    let err = back.max_abs_diff(&rho).unwrap();
    assert!(err < 1e-4, "{err}");
}

#[test]
fn p_axis_beyond_nyquist_rejected() {
    let x = Axis::symmetric("x", 6.0, 25).unwrap();
    let rho = GridFunction::from_real_fn(Representation::Density, vec![x.clone(), x.relabeled("x0'")], |v| {
        vacuum_kernel(v[0], v[1])
    })
    .unwrap();
    let p = Axis::symmetric("p", 6.0, 25).unwrap();
    assert!(matches!(wigner_from_density(&rho, &p), Err(Error::InvalidArgument(_))));
}

#[test]
fn coarse_p_rejected_by_inverse() {
    let w = wigner_grid(6.0, 25, |p, q| 2.0 * (-p * p - q * q).exp());
    assert!(matches!(density_from_wigner(&w), Err(Error::InvalidArgument(_))));
}

#[test]
fn three_modes_rejected() {
    let x = Axis::symmetric("x", 6.0, 4).unwrap();
    let rho = GridFunction::from_real_fn(Representation::Density, vec![x; 6], |_| 0.0).unwrap();
    let p = Axis::symmetric("p", 6.0, 4).unwrap();
    assert!(matches!(wigner_from_density(&rho, &p), Err(Error::UnsupportedModes { modes: 3, max: 2 })));
}

/// `Q(β) = π⁻¹ ∫W(p, q) exp(−(q − q_β)² − (p − p_β)²)` summed directly.
fn smoothed(w: &GridFunction, beta: C64) -> f64 {
    let (qb, pb) = (SQRT_2 * beta.re, SQRT_2 * beta.im);
    let cell = w.cell_volume();
    (0..w.len())
        .map(|k| {
            let c = w.coords(k);
            w.values()[k].re * (-(c[1] - qb).powi(2) - (c[0] - pb).powi(2)).exp()
        })
        .sum::<f64>()
        * cell
        / PI
}

#[test]
fn q_from_wigner_gaussians() {
    let w = wigner_grid(6.0, 121, |p, q| 2.0 * (-p * p - q * q).exp());
    let q = q_from_wigner(&w).unwrap();
    assert_eq!(q.axes()[0].label, "re_beta0");
    assert!(max_dev(&q, |c| (-c[0] * c[0] - c[1] * c[1]).exp()) < 1e-4);

    let st = GaussianState::coherent(&[C64::new(1.0, 0.0)]);
    let w = wigner_grid(6.0, 121, |p, q| wigner_eval(&st, &[p], &[q]).unwrap());
    let q = q_from_wigner(&w).unwrap();
    assert!(max_dev(&q, |c| (-(c[0] - 1.0).powi(2) - c[1] * c[1]).exp()) < 1e-4);
    for beta in [C64::new(0.3, -0.4), C64::new(1.2, 0.5)] {
        let k = q.flat_index(&[
            q.axes()[0].locate(beta.re).round() as usize,
            q.axes()[1].locate(beta.im).round() as usize,
        ]);
        let c = q.coords(k);
        let b = C64::new(c[0], c[1]);
        assert!((q.values()[k].re - smoothed(&w, b)).abs() < 1e-4);
    }
}

#[test]
fn q_from_wigner_cats() {
    let even = CatState::even(vec![C64::new(1.0, 0.0)]).unwrap();
    let w = wigner_grid(6.0, 121, |p, q| cat_states::wigner_function(&even, &[p], &[q]).unwrap());
    let re = Axis::symmetric("re", 3.0, 31).unwrap();
    let q = q_from_wigner_on(&w, &re, &re.relabeled("im")).unwrap();
    assert!(max_dev(&q, |c| cat_states::q_function(&even, &[C64::new(c[0], c[1])]).unwrap()) < 2e-3);

    let odd = CatState::odd(vec![C64::new(1.0, 0.0)]).unwrap();
    let w = wigner_grid(6.0, 121, |p, q| cat_states::wigner_function(&odd, &[p], &[q]).unwrap());
    assert!(w.min_real() < -1.9);
    let q = q_from_wigner(&w).unwrap();
    assert!(q.min_real() >= -1e-6);
    assert!((q.normalization().re - 1.0).abs() < 1e-4);
}

fn q_grid(extent: f64, n: usize, f: impl Fn(C64) -> f64 + Sync) -> GridFunction {
    let ax = Axis::symmetric("re_beta0", extent, n).unwrap();
    GridFunction::from_real_fn(Representation::Qfunc, vec![ax.clone(), ax.relabeled("im_beta0")], |v| {
        f(C64::new(v[0], v[1]))
    })
    .unwrap()
}

#[test]
fn density_from_q_vacuum() {
    let q = q_grid(4.0, 41, |b| (-b.norm_sqr()).exp());
    let rho = density_from_q(&q).unwrap();
    assert!(max_dev(&rho, |c| vacuum_kernel(c[0], c[1])) < 5e-3);
    assert!(rho.hermiticity_residual().unwrap() < 1e-3);
    assert!((rho.normalization().re - 1.0).abs() < 1e-3);
}

#[test]
fn analytic_q_reconstructs_squeezed_density() {
    let st = GaussianState::squeezed(0.4, 0.6, C64::new(0.3, -0.2));
    let qp = q_params(&st).unwrap();
    let x = Axis::symmetric("x", 6.0, 61).unwrap();
    let rho = density_from_analytic_q(&qp, &x, &ComplexGrid::default()).unwrap();
    let w = wigner_from_density(&rho, &Axis::symmetric("p", 6.0, 61).unwrap()).unwrap();
    assert!(max_dev(&w, |c| wigner_eval(&st, &[c[0]], &[c[1]]).unwrap()) < 5e-3);
    assert!((rho.normalization().re - 1.0).abs() < 1e-3);
}

#[test]
fn wigner_from_q_gaussians() {
    let q = q_grid(4.0, 41, |b| (-b.norm_sqr()).exp());
    let w = wigner_from_q(&q).unwrap();
    assert!(max_dev(&w, |c| 2.0 * (-c[0] * c[0] - c[1] * c[1]).exp()) < 5e-3);

    // round trip through q_from_wigner
    let w0 = wigner_grid(6.0, 121, |p, q| 2.0 * (-p * p - q * q).exp());
    let re = Axis::symmetric("re", 4.0, 41).unwrap();
    let q = q_from_wigner_on(&w0, &re, &re.relabeled("im")).unwrap();
    let w1 = wigner_from_q(&q).unwrap();
    assert!(max_dev(&w1, |c| 2.0 * (-c[0] * c[0] - c[1] * c[1]).exp()) < 5e-3);

    let alpha = C64::new(0.5, 0.0);
    let st = GaussianState::coherent(&[alpha]);
    let q = q_grid(5.0, 51, |b| q_function_at(&st, &[b]).unwrap());
    let w = wigner_from_q(&q).unwrap();
    let peak = argmax(&w);
    assert!((peak[0] - SQRT_2 * alpha.im).abs() <= w.axes()[0].step);
    assert!((peak[1] - SQRT_2 * alpha.re).abs() <= w.axes()[1].step);
}

#[test]
fn noisy_q_grid_reports_conditioning() {
    let q = q_grid(4.0, 41, |b| (-b.norm_sqr()).exp() + 1e-2 * (37.0 * b.re).sin() * (23.0 * b.im).cos());
    assert!(matches!(density_from_q(&q), Err(Error::ConditioningFailure(_))));
}

