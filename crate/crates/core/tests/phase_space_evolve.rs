use num_complex::Complex64 as C64;
use photostat::gaussian::{q_function_at, wigner_eval, GaussianState};
use photostat::linalg::{RMatrix, RVector};
use photostat::phase_space::{
    evolve_q, evolve_wigner, q_from_wigner, Axis, ComplexLinearMap, GridFunction, LinearSymplecticMap,
    Representation,
};
use photostat::Error;
use proptest::prelude::*;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn wigner_of(st: &GaussianState, extent: f64, n: usize) -> GridFunction {
    let ax = Axis::symmetric("p0", extent, n).unwrap();
    GridFunction::from_real_fn(Representation::Wigner, vec![ax.clone(), ax.relabeled("q0")], |v| {
        wigner_eval(st, &[v[0]], &[v[1]]).unwrap()
    })
    .unwrap()
}

fn q_of(st: &GaussianState, extent: f64, n: usize) -> GridFunction {
    let ax = Axis::symmetric("re_beta0", extent, n).unwrap();
    GridFunction::from_real_fn(Representation::Qfunc, vec![ax.clone(), ax.relabeled("im_beta0")], |v| {
        q_function_at(st, &[C64::new(v[0], v[1])]).unwrap()
    })
    .unwrap()
}

/// Free-oscillator replacement after time `t`: `p₀ = p cos t + q sin t`,
/// `q₀ = q cos t − p sin t`.
fn free(t: f64) -> LinearSymplecticMap {
    LinearSymplecticMap::new(RMatrix::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]), RVector::zeros(2))
        .unwrap()
}

fn peak(g: &GridFunction) -> Vec<f64> {
    let k = (0..g.len()).max_by(|&a, &b| g.values()[a].re.total_cmp(&g.values()[b].re)).unwrap();
    g.coords(k)
}

fn l2(g: &GridFunction) -> f64 {
    g.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.cell_volume()
}

#[test]
fn identity_is_identity() {
    let st = GaussianState::squeezed(0.3, 0.4, C64::new(0.5, -0.2));
    let w = wigner_of(&st, 6.0, 121);
    let out = evolve_wigner(&w, &LinearSymplecticMap::identity(1)).unwrap();
    assert!(out.max_abs_diff(&w).unwrap() < 1e-12);
    let q = q_of(&st, 4.0, 81);
    let out = evolve_q(&q, &ComplexLinearMap::rotation(1, 0.0)).unwrap();
    assert!(out.max_abs_diff(&q).unwrap() < 1e-12);
}

#[test]
fn quarter_period_moves_coherent_peak() {
    let st = GaussianState::coherent(&[C64::new(1.0, 0.0)]);
    let w = wigner_of(&st, 6.0, 121);
    let c = peak(&w);
    assert!(c[0].abs() < 0.05 && (c[1] - SQRT_2).abs() < 0.05);
    let out = evolve_wigner(&w, &free(std::f64::consts::FRAC_PI_2)).unwrap();
    let c = peak(&out);
    assert!((c[0] + SQRT_2).abs() < 0.05 && c[1].abs() < 0.05, "{c:?}");
    // exact: the coherent state with α = −i
    let rotated = GaussianState::coherent(&[C64::new(0.0, -1.0)]);
    assert!(out.max_abs_diff(&wigner_of(&rotated, 6.0, 121)).unwrap() < 1e-4);
}

#[test]
fn squeeze_map_matches_squeezed_state() {
    let r: f64 = 0.5;
    let w = wigner_of(&GaussianState::vacuum(1), 6.0, 241);
    let s = RMatrix::from_diagonal(&RVector::from_vec(vec![r.exp(), (-r).exp()]));
    let out = evolve_wigner(&w, &LinearSymplecticMap::new(s, RVector::zeros(2)).unwrap()).unwrap();
    // W(e^r p, e^{−r} q) widens q: S(ζ) with ζ = −r
    let sq = GaussianState::squeezed(r, std::f64::consts::PI, C64::new(0.0, 0.0));
    assert!(out.max_abs_diff(&wigner_of(&sq, 6.0, 241)).unwrap() < 1e-4);
}

#[test]
fn displacement_shift() {
    let w = wigner_of(&GaussianState::vacuum(1), 6.0, 121);
    let shift = RVector::from_vec(vec![0.0, -1.0]);
    let out = evolve_wigner(&w, &LinearSymplecticMap::new(RMatrix::identity(2, 2), shift).unwrap()).unwrap();
    let target = GaussianState::coherent(&[C64::new(1.0 / SQRT_2, 0.0)]);
    assert!(out.max_abs_diff(&wigner_of(&target, 6.0, 121)).unwrap() < 1e-4);
}

#[test]
fn escaping_mass_is_reported() {
    let w = wigner_of(&GaussianState::vacuum(1), 6.0, 61);
    let shift = RVector::from_vec(vec![0.0, 5.0]);
    let map = LinearSymplecticMap::new(RMatrix::identity(2, 2), shift).unwrap();
    assert!(matches!(evolve_wigner(&w, &map), Err(Error::InsufficientSupport { .. })));
}

#[test]
fn q_rotation_moves_peak() {
    let alpha = C64::new(1.0, 0.5);
    let q = q_of(&GaussianState::coherent(&[alpha]), 5.5, 221);
    let theta = 0.7;
    let out = evolve_q(&q, &ComplexLinearMap::rotation(1, theta)).unwrap();
    // Q(e^{iθ}β) peaks where e^{iθ}β = α
    let moved = alpha * C64::from_polar(1.0, -theta);
    let c = peak(&out);
    assert!((c[0] - moved.re).abs() <= 0.05 && (c[1] - moved.im).abs() <= 0.05, "{c:?}");
    let exact = q_of(&GaussianState::coherent(&[moved]), 5.5, 221);
    assert!(out.max_abs_diff(&exact).unwrap() < 1e-4);
}

#[test]
fn q_and_wigner_paths_agree() {
    for st in [GaussianState::vacuum(1), GaussianState::coherent(&[C64::new(0.6, 0.3)])] {
        let w = wigner_of(&st, 6.0, 121);
        let map = free(0.9);
        let a = q_from_wigner(&evolve_wigner(&w, &map).unwrap()).unwrap();
        let b = evolve_q(&q_from_wigner(&w).unwrap(), &ComplexLinearMap::from_symplectic(&map)).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 2e-3);
    }
}

fn symplectic_2x2(a: f64, b: f64, c: f64) -> RMatrix {
    // det = 1 fixes the last entry
    RMatrix::from_row_slice(2, 2, &[a, b, c, (1.0 + b * c) / a])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn integral_and_l2_preserved(
        a in 0.8f64..1.25, b in -0.3f64..0.3, c in -0.3f64..0.3,
        sp in -0.5f64..0.5, sq in -0.5f64..0.5,
        re in -0.5f64..0.5, im in -0.5f64..0.5,
    ) {
        let st = GaussianState::coherent(&[C64::new(re, im)]);
        let w = wigner_of(&st, 7.0, 281);
        let map = LinearSymplecticMap::new(symplectic_2x2(a, b, c), RVector::from_vec(vec![sp, sq])).unwrap();
        let out = evolve_wigner(&w, &map).unwrap();
        prop_assert!((out.integral() - w.integral()).norm() / w.integral().norm() < 1e-5);
        prop_assert!((l2(&out) / l2(&w) - 1.0).abs() < 1e-5, "{} {}", l2(&out), l2(&w));
    }
}
