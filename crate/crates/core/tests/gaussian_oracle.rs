use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use photostat::fock_oracle::{
    coherent_vector, moments, position_amplitude, q_overlap, squeezed_vector, thermal_density, FockDensity,
};
use photostat::gaussian::{
    distribution_table, gaussian_from_pure, mean_photon_number, photon_distribution, pure_q_params, q_function_at,
    q_params, state_from_q_params, GaussianState, PureGaussian,
};
use photostat::linalg::{symplectic_form, RMatrix, RVector};
use photostat::multi_hermite::{oscillator_eigenfunctions, MultiIndex};
use proptest::prelude::*;

fn single(n: usize) -> MultiIndex {
    MultiIndex::new(vec![n])
}

fn assert_matches_oracle(state: &GaussianState, oracle: &[f64], tol: f64) {
    for (n, &expected) in oracle.iter().enumerate().take(21) {
        let got = photon_distribution(state, &single(n)).unwrap();
        assert!((got - expected).abs() < tol, "n={n}: {got} vs {expected}");
    }
}

#[test]
fn coherent_matches_oracle() {
    for a in [C64::new(0.3, 0.1), C64::new(-1.2, 0.7), C64::new(0.0, 2.0)] {
        let v = coherent_vector(&[a], 60).unwrap();
        let probs: Vec<f64> = v.amplitudes().iter().map(|x| x.norm_sqr()).collect();
        assert_matches_oracle(&GaussianState::coherent(&[a]), &probs, 1e-12);
    }
}

#[test]
fn thermal_matches_oracle() {
    for nbar in [0.2, 1.0, 2.0] {
        let rho = thermal_density(nbar, 30).unwrap();
        assert_matches_oracle(&GaussianState::thermal(&[nbar]), &rho.distribution(), 1e-12);
    }
}

#[test]
fn squeezed_matches_oracle() {
    for (r, phi, alpha) in [
        (0.5, 0.0, C64::new(0.0, 0.0)),
        (1.0, 0.0, C64::new(0.0, 0.0)),
        (0.7, 1.3, C64::new(0.0, 0.0)),
        (0.4, 0.5, C64::new(0.8, -0.6)),
        (0.8, -2.0, C64::new(-0.5, 1.0)),
    ] {
        let v = squeezed_vector(C64::from_polar(r, phi), alpha, 150).unwrap();
        let probs: Vec<f64> = v.amplitudes().iter().map(|x| x.norm_sqr()).collect();
        assert_matches_oracle(&GaussianState::squeezed(r, phi, alpha), &probs, 1e-10);
    }
}

#[test]
fn squeezed_moments_match_state() {
    let (r, phi, alpha) = (0.6, 0.9, C64::new(0.3, -0.4));
    let m = moments(&squeezed_vector(C64::from_polar(r, phi), alpha, 120).unwrap()).unwrap();
    let st = GaussianState::squeezed(r, phi, alpha);
    assert!((m.quad_cov - st.disp()).abs().max() < 1e-10);
    assert!((m.quad_mean - st.mean()).abs().max() < 1e-10);
}

#[test]
fn q_function_matches_oracle() {
    let st = GaussianState::squeezed(0.5, 0.4, C64::new(0.3, 0.2));
    let v = squeezed_vector(C64::from_polar(0.5, 0.4), C64::new(0.3, 0.2), 100).unwrap();
    let th = GaussianState::thermal(&[0.8]);
    let rho = thermal_density(0.8, 120).unwrap();
    for i in -4..=4 {
        for j in -4..=4 {
            let beta = C64::new(0.4 * i as f64, 0.4 * j as f64);
            let got = q_function_at(&st, &[beta]).unwrap();
            assert!((got - q_overlap(&v, &[beta]).unwrap()).abs() < 1e-10);
            assert!((q_function_at(&th, &[beta]).unwrap() - rho.q_overlap(beta)).abs() < 1e-10);
        }
    }
}

#[test]
fn density_matrix_elements_follow_slot_order() {
    // ⟨j|ρ|k⟩ = p₀ H_{(j,k)}/√(j!k!) for a pure displaced squeezed state
    let zeta = C64::from_polar(0.4, 0.8);
    let alpha = C64::new(0.5, -0.3);
    let v = squeezed_vector(zeta, alpha, 80).unwrap();
    let rho = FockDensity::from_vector(&v).unwrap();
    let params = q_params(&GaussianState::squeezed(0.4, 0.8, alpha)).unwrap();
    let spec = params.hermite_spec();
    for j in 0..6 {
        for k in 0..6 {
            let h = spec.eval(&MultiIndex::new(vec![j, k])).unwrap();
            let fact = (MultiIndex::new(vec![j]).factorial() * MultiIndex::new(vec![k]).factorial()).sqrt();
            let got = h * params.p0() / fact;
            assert!((got - rho.matrix()[(j, k)]).norm() < 1e-12, "({j},{k})");
        }
    }
}

#[test]
fn mean_photon_matches_distribution() {
    for st in [
        GaussianState::coherent(&[C64::new(1.0, 1.0)]),
        GaussianState::thermal(&[1.5]),
        GaussianState::squeezed(0.9, 0.3, C64::new(0.4, 0.0)),
    ] {
        let table = distribution_table(&st, &single(60)).unwrap();
        let sum: f64 = table.iter().map(|(n, p)| n.entries()[0] as f64 * p).sum();
        assert!((sum - mean_photon_number(&st, 0).unwrap()).abs() < 1e-5);
    }
}

#[test]
fn two_mode_product_matches_tensor() {
    let a = C64::new(0.5, 0.2);
    let v = squeezed_vector(C64::new(0.3, 0.0), C64::new(0.0, 0.0), 40)
        .unwrap()
        .tensor(&coherent_vector(&[a], 40).unwrap());
    let sq = GaussianState::squeezed(0.3, 0.0, C64::new(0.0, 0.0));
    let coh = GaussianState::coherent(&[a]);
    let mean = RVector::from_vec(vec![sq.mean()[0], coh.mean()[0], sq.mean()[1], coh.mean()[1]]);
    // mode j quadratures sit at (p_j, q_j) = (j, 2 + j)
    let mut disp = RMatrix::zeros(4, 4);
    for (j, single) in [&sq, &coh].into_iter().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                disp[(2 * a + j, 2 * b + j)] = single.disp()[(a, b)];
            }
        }
    }
    let st = GaussianState::new(mean, disp).unwrap();
    let table = distribution_table(&st, &MultiIndex::new(vec![6, 6])).unwrap();
    for (n, p) in table {
        let e = n.entries();
        assert!((p - v.amplitude(&[e[0], e[1]]).norm_sqr()).abs() < 1e-12, "{n}");
    }
}

/// Fock amplitudes of a two-mode pure Gaussian by trapezoid projection onto
/// oscillator eigenfunctions.
fn projected_amplitudes(p: &PureGaussian, n_max: usize) -> DMatrix<C64> {
    let h = 0.08;
    let pts: Vec<f64> = (-120..=120).map(|i| i as f64 * h).collect();
    let phis: Vec<Vec<f64>> = pts.iter().map(|&x| oscillator_eigenfunctions(n_max, x)).collect();
    let mut out = DMatrix::zeros(n_max + 1, n_max + 1);
    for (i, &x1) in pts.iter().enumerate() {
        for (j, &x2) in pts.iter().enumerate() {
            let psi = p.wave_function(&[x1, x2]).unwrap();
            for a in 0..=n_max {
                for b in 0..=n_max {
                    out[(a, b)] += psi * phis[i][a] * phis[j][b] * h * h;
                }
            }
        }
    }
    out
}

#[test]
fn correlated_pure_state_matches_projection() {
    let p = PureGaussian::new(
        DMatrix::from_row_slice(2, 2, &[C64::new(0.8, 0.3), C64::new(0.2, -0.25), C64::new(0.2, -0.25), C64::new(0.6, 0.1)]),
        DVector::from_vec(vec![C64::new(0.3, -0.2), C64::new(-0.4, 0.5)]),
    )
    .unwrap();
    let amps = projected_amplitudes(&p, 4);
    let st = gaussian_from_pure(&p).unwrap();
    let table = distribution_table(&st, &MultiIndex::new(vec![4, 4])).unwrap();
    for (n, prob) in table {
        let e = n.entries();
        assert!((prob - amps[(e[0], e[1])].norm_sqr()).abs() < 1e-10, "{n}");
    }
    // the Fock-space vector built from the projection reproduces ψ(x)
    let v = photostat::fock_oracle::FockVector::new(vec![5, 5], amps.transpose().iter().copied().collect()).unwrap();
    let x = [0.3, -0.2];
    let direct = p.wave_function(&x).unwrap();
    let resummed = position_amplitude(&v, &x).unwrap();
    assert!((direct - resummed).norm() < 0.05 * direct.norm());
}

fn random_symplectic(seed: &[f64], modes: usize) -> RMatrix {
    let n2 = 2 * modes;
    let mut h = RMatrix::from_fn(n2, n2, |i, j| seed[(i * n2 + j) % seed.len()]);
    h = (&h + h.transpose()) * 0.5;
    (symplectic_form(modes) * h).exp()
}

fn random_state(modes: usize, seed: &[f64], thermal: &[f64], mean: &[f64]) -> GaussianState {
    let s = random_symplectic(seed, modes);
    let mut diag = RMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        diag[(j, j)] = 0.5 + thermal[j];
        diag[(modes + j, modes + j)] = 0.5 + thermal[j];
    }
    let disp = &s * diag * s.transpose();
    let disp = (&disp + disp.transpose()) * 0.5;
    GaussianState::new(RVector::from_iterator(2 * modes, mean.iter().take(2 * modes).copied()), disp).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn q_roundtrip_is_identity(
        modes in 1usize..=3,
        seed in prop::collection::vec(-0.4f64..0.4, 36),
        thermal in prop::collection::vec(0.0f64..1.5, 3),
        mean in prop::collection::vec(-2.0f64..2.0, 6),
    ) {
        let st = random_state(modes, &seed, &thermal, &mean);
        let back = state_from_q_params(&q_params(&st).unwrap()).unwrap();
        prop_assert!((back.disp() - st.disp()).abs().max() < 1e-10);
        prop_assert!((back.mean() - st.mean()).abs().max() < 1e-10);
    }

    #[test]
    fn pure_paths_agree(
        re in prop::collection::vec(0.2f64..1.5, 2),
        off in -0.15f64..0.15,
        im in prop::collection::vec(-0.8f64..0.8, 3),
        c in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let m = DMatrix::from_row_slice(2, 2, &[
            C64::new(re[0], im[0]), C64::new(off, im[2]),
            C64::new(off, im[2]), C64::new(re[1], im[1]),
        ]);
        let p = PureGaussian::new(m, DVector::from_vec(vec![C64::new(c[0], c[1]), C64::new(c[2], c[3])])).unwrap();
        let st = gaussian_from_pure(&p).unwrap();
        prop_assert!((st.purity_determinant() - 1.0).abs() < 1e-9);
        let a = pure_q_params(&p).unwrap();
        let b = q_params(&st).unwrap();
        prop_assert!((a.r() - b.r()).iter().all(|x| x.norm() < 1e-9));
        prop_assert!((a.z() - b.z()).iter().all(|x| x.norm() < 1e-9));
        prop_assert!((a.p0() - b.p0()).abs() < 1e-9);
    }

    #[test]
    fn distribution_is_normalized(
        seed in prop::collection::vec(-0.3f64..0.3, 4),
        thermal in 0.0f64..0.5,
        mean in prop::collection::vec(-1.0f64..1.0, 2),
    ) {
        let st = random_state(1, &seed, &[thermal], &mean);
        let total: f64 = distribution_table(&st, &single(60)).unwrap().iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn vacuum_probability_of_thermal_mixture_is_oracle_value() {
    let rho = thermal_density(2.0, 40).unwrap();
    assert_relative_eq!(
        photon_distribution(&GaussianState::thermal(&[2.0]), &single(0)).unwrap(),
        rho.distribution()[0],
        epsilon = 1e-15
    );
}
