//! Multimode Gaussian states in Wigner form.
//!
//! Quadratures are ordered `Q = (p₁…p_N, q₁…q_N)` with `p = (a − a†)/(i√2)`,
//! `q = (a + a†)/√2` and ħ = 1. A state is its mean vector `⟨Q⟩` and its real
//! symmetric dispersion matrix `M`.
//!
//! Photon statistics go through the Q-function parameters [`QParams`]:
//! `P_n = p₀ · H_{(n,n)}^{R}(y) / n!`.

mod io;
mod pure;
mod qparams;

pub use io::{GaussianStateDoc, SCHEMA_VERSION};
pub use pure::{gaussian_from_pure, pure_hermite_argument, pure_q_params, PureGaussian};
pub use qparams::{
    hermite_argument, photon_distribution, photon_probability, distribution_table, q_function,
    q_function_at, q_params, state_from_q_params, vacuum_probability, PhotonProbability, QParams,
};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    min_hermitian_eigenvalue, real_inverse, real_symmetry_defect, symplectic_form, to_complex, CMatrix,
    RMatrix, RVector, I,
};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const UNCERTAINTY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: RVector,
    disp: RMatrix,
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub symmetry_defect: f64,
    /// Smallest eigenvalue of the Hermitian matrix `M + (i/2)J`.
    pub min_eigenvalue: f64,
    pub accepted: bool,
}

impl GaussianState {
    /// Builds a state, rejecting asymmetric or unphysical dispersion matrices.
    pub fn new(mean: RVector, disp: RMatrix) -> Result<Self> {
        let state = Self::new_unchecked(mean, disp)?;
        let report = validate(&state);
        if report.symmetry_defect > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { defect: report.symmetry_defect });
        }
        if !report.accepted {
            return Err(Error::UncertaintyViolation { min_eigenvalue: report.min_eigenvalue });
        }
        Ok(state)
    }

    /// Builds a state checking only shapes; use [`validate`] for diagnostics.
    pub fn new_unchecked(mean: RVector, disp: RMatrix) -> Result<Self> {
        if disp.nrows() != disp.ncols() {
            return Err(Error::DimensionMismatch { expected: disp.nrows(), found: disp.ncols() });
        }
        if disp.nrows() % 2 != 0 || disp.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "dispersion matrix must be 2N×2N, got {}×{}",
                disp.nrows(),
                disp.ncols()
            )));
        }
        if mean.len() != disp.nrows() {
            return Err(Error::DimensionMismatch { expected: disp.nrows(), found: mean.len() });
        }
        Ok(GaussianState { mean, disp })
    }

    pub fn vacuum(modes: usize) -> Self {
        GaussianState { mean: RVector::zeros(2 * modes), disp: RMatrix::identity(2 * modes, 2 * modes) * 0.5 }
    }

    /// Product of coherent states `|α₁ … α_N⟩`.
    pub fn coherent(alpha: &[C64]) -> Self {
        let n = alpha.len();
        let mut state = Self::vacuum(n);
        for (j, a) in alpha.iter().enumerate() {
            state.mean[j] = std::f64::consts::SQRT_2 * a.im;
            state.mean[n + j] = std::f64::consts::SQRT_2 * a.re;
        }
        state
    }

    /// Product of thermal states with mean occupations `n̄ⱼ`.
    pub fn thermal(nbar: &[f64]) -> Self {
        let n = nbar.len();
        let mut state = Self::vacuum(n);
        for (j, &nb) in nbar.iter().enumerate() {
            state.disp[(j, j)] = nb + 0.5;
            state.disp[(n + j, n + j)] = nb + 0.5;
        }
        state
    }

    /// Single-mode `D(α) S(ζ)|0⟩` with `S(ζ) = exp(½(ζ* a² − ζ a†²))`, `ζ = r e^{iφ}`.
    pub fn squeezed(r: f64, phi: f64, alpha: C64) -> Self {
        let g = -C64::from_polar(1.0, phi) * r.sinh() * r.cosh();
        let s = C64::new(r.sinh().powi(2) + 0.5, 0.0);
        Self::from_ladder_moments(&[alpha], &CMatrix::from_element(1, 1, g), &CMatrix::from_element(1, 1, s))
    }

    /// Assembles `(⟨Q⟩, M)` from ladder-operator moments: `alpha = ⟨a⟩`,
    /// `g_ik = ⟨Δaᵢ Δa_k⟩` and `s_ik = ½⟨Δaᵢ† Δa_k + Δa_k Δaᵢ†⟩`.
    pub fn from_ladder_moments(alpha: &[C64], g: &CMatrix, s: &CMatrix) -> Self {
        let n = alpha.len();
        let mut mean = RVector::zeros(2 * n);
        for (j, a) in alpha.iter().enumerate() {
            mean[j] = std::f64::consts::SQRT_2 * a.im;
            mean[n + j] = std::f64::consts::SQRT_2 * a.re;
        }
        let mut disp = RMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for k in 0..n {
                let gik = g[(i, k)];
                let sik = s[(i, k)];
                disp[(n + i, n + k)] = gik.re + sik.re;
                disp[(i, k)] = -gik.re + sik.re;
                // cov(pᵢ, q_k)
                let pq = gik.im - sik.im;
                disp[(i, n + k)] = pq;
                disp[(n + k, i)] = pq;
            }
        }
        GaussianState { mean, disp }
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &RVector {
        &self.mean
    }

    pub fn disp(&self) -> &RMatrix {
        &self.disp
    }

    /// `det(2M)`, equal to one for pure states.
    pub fn purity_determinant(&self) -> f64 {
        (&self.disp * 2.0).determinant()
    }
}

/// Symmetry defect and uncertainty-relation check for a state.
pub fn validate(state: &GaussianState) -> ValidationReport {
    let n = state.modes();
    let symmetry_defect = real_symmetry_defect(&state.disp);
    let sym = (&state.disp + state.disp.transpose()) * 0.5;
    let h = to_complex(&sym) + to_complex(&symplectic_form(n)).map(|x| x * I * 0.5);
    let min_eigenvalue = min_hermitian_eigenvalue(&h);
    ValidationReport {
        symmetry_defect,
        min_eigenvalue,
        accepted: symmetry_defect <= SYMMETRY_TOL && min_eigenvalue >= -UNCERTAINTY_TOL,
    }
}

/// Mean photon number of mode `j` (0-based):
/// `⟨nⱼ⟩ = ½(σ_{pⱼpⱼ} + σ_{qⱼqⱼ} − 1) + ½(⟨pⱼ⟩² + ⟨qⱼ⟩²)`.
pub fn mean_photon_number(state: &GaussianState, j: usize) -> Result<f64> {
    let n = state.modes();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    let d = &state.disp;
    let m = &state.mean;
    Ok(0.5 * (d[(j, j)] + d[(n + j, n + j)] - 1.0) + 0.5 * (m[j].powi(2) + m[n + j].powi(2)))
}

/// `W(p, q) = det(M)^{-1/2} exp[−½ (Q − ⟨Q⟩)ᵗ M⁻¹ (Q − ⟨Q⟩)]`,
/// normalized as `∫ W dp dq / (2π)^N = 1`.
pub fn wigner_eval(state: &GaussianState, p: &[f64], q: &[f64]) -> Result<f64> {
    WignerEvaluator::new(state)?.eval(p, q)
}

/// Precomputed inverse and determinant for repeated Wigner evaluations.
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    mean: RVector,
    inv: RMatrix,
    norm: f64,
}

impl WignerEvaluator {
    pub fn new(state: &GaussianState) -> Result<Self> {
        let det = state.disp.determinant();
        if det <= 0.0 {
            return Err(Error::Singular("dispersion matrix M"));
        }
        let inv = real_inverse(&state.disp, "dispersion matrix M")?;
        Ok(WignerEvaluator { mean: state.mean.clone(), inv, norm: det.powf(-0.5) })
    }

    pub fn eval(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        let n = self.mean.len() / 2;
        if p.len() != n || q.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.len().max(q.len()) });
        }
        let delta = RVector::from_iterator(2 * n, p.iter().chain(q.iter()).copied()) - &self.mean;
        let quad = delta.dot(&(&self.inv * &delta));
        Ok(self.norm * (-0.5 * quad).exp())
    }
}

/// Coordinate density matrix `ρ(x, x′) = (2π)^{−N}∫W(p, (x + x′)/2) e^{ip·(x − x′)} dp`,
/// done in closed form: with `K = M⁻¹`, `b = (x + x′)/2 − ⟨q⟩`, `u = x − x′`
/// and `w = −K_pq b + iu`,
/// `ρ = (2π)^{−N/2} det(M)^{−1/2} det(K_pp)^{−1/2} exp(½wᵗK_pp⁻¹w − ½bᵗK_qq b + i⟨p⟩·u)`.
#[derive(Debug, Clone)]
pub struct DensityEvaluator {
    p_mean: RVector,
    q_mean: RVector,
    kpq: RMatrix,
    kqq: RMatrix,
    kpp_inv: RMatrix,
    norm: f64,
}

impl DensityEvaluator {
    pub fn new(state: &GaussianState) -> Result<Self> {
        let n = state.modes();
        let det = state.disp.determinant();
        if det <= 0.0 {
            return Err(Error::Singular("dispersion matrix M"));
        }
        let k = real_inverse(&state.disp, "dispersion matrix M")?;
        let kpp = k.view((0, 0), (n, n)).into_owned();
        let kpp_det = kpp.determinant();
        let kpp_inv = real_inverse(&kpp, "p block of M⁻¹")?;
        Ok(DensityEvaluator {
            p_mean: state.mean.rows(0, n).into_owned(),
            q_mean: state.mean.rows(n, n).into_owned(),
            kpq: k.view((0, n), (n, n)).into_owned(),
            kqq: k.view((n, n), (n, n)).into_owned(),
            kpp_inv,
            norm: (2.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0) / (det * kpp_det).sqrt(),
        })
    }

    pub fn eval(&self, x: &[f64], x_prime: &[f64]) -> Result<C64> {
        let n = self.p_mean.len();
        if x.len() != n || x_prime.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len().max(x_prime.len()) });
        }
        let b = RVector::from_fn(n, |j, _| 0.5 * (x[j] + x_prime[j]) - self.q_mean[j]);
        let u = RVector::from_fn(n, |j, _| x[j] - x_prime[j]);
        let w_re = -(&self.kpq * &b);
        let kw_re = &self.kpp_inv * &w_re;
        let kw_im = &self.kpp_inv * &u;
        // wᵗK⁻¹w with w = w_re + iu
        let quad = C64::new(w_re.dot(&kw_re) - u.dot(&kw_im), w_re.dot(&kw_im) + u.dot(&kw_re));
        let e = 0.5 * quad - 0.5 * b.dot(&(&self.kqq * &b)) + C64::new(0.0, self.p_mean.dot(&u));
        Ok(self.norm * e.exp())
    }
}

/// `ρ(x, x′)` of a Gaussian state; see [`DensityEvaluator`].
pub fn density_eval(state: &GaussianState, x: &[f64], x_prime: &[f64]) -> Result<C64> {
    DensityEvaluator::new(state)?.eval(x, x_prime)
}
