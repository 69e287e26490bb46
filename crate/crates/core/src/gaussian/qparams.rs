//! Q-function parameters `(R, z, p₀)` and the photon statistics built on them.
//!
//! `R = 2U†(1+2M)⁻¹U* − σ_x` and `z = R y = 2U†(1+2M)⁻¹⟨Q⟩`. The closed form
//! of `z` avoids `(I − 2M)⁻¹`, which is singular for every coherent state.
//!
//! Ordering: the first half of `z` (and the first block row of `R`) couples
//! to `β*`, the second half to `β`. With `B̃ = (β*, β)`,
//! `Q(β) = p₀ exp[−½ B̃ᵗ(R + σ_x)B̃ + B̃ᵗz]`, and the Fock matrix elements are
//! `⟨j|ρ|k⟩ = p₀ H_{(j,k)}^{R}(y) / √(j! k!)`.

use num_complex::Complex64 as C64;

use super::GaussianState;
use crate::error::{Error, Result};
use crate::linalg::{
    bilinear, check_symmetric, inverse, quadrature_unitary, sigma_x, to_complex,
    to_complex_vec, CMatrix, CVector,
};
use crate::multi_hermite::{normalized_table, HermiteSpec, MultiIndex, DEFAULT_CAP};

/// Relative imaginary residue above which a probability is rejected.
pub const IMAG_RESIDUE_REL: f64 = 1e-8;
/// Absolute floor below which residues are accepted regardless.
pub const IMAG_RESIDUE_ABS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct QParams {
    r: CMatrix,
    z: CVector,
    p0: f64,
}

impl QParams {
    pub fn new(r: CMatrix, z: CVector, p0: f64) -> Result<Self> {
        check_symmetric(&r, 1e-12)?;
        if r.nrows() % 2 != 0 {
            return Err(Error::InvalidArgument("R must be 2N×2N".into()));
        }
        if z.len() != r.nrows() {
            return Err(Error::DimensionMismatch { expected: r.nrows(), found: z.len() });
        }
        if !(p0 > 0.0 && p0 <= 1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!("p0 = {p0} outside (0, 1]")));
        }
        Ok(QParams { r, z, p0 })
    }

    pub fn modes(&self) -> usize {
        self.z.len() / 2
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    pub fn z(&self) -> &CVector {
        &self.z
    }

    /// Vacuum probability `p₀`.
    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn hermite_spec(&self) -> HermiteSpec {
        HermiteSpec::new(self.r.clone(), self.z.clone()).expect("R is symmetric by construction")
    }

    /// Analytic continuation `Q(β, β̄)` with `β` and `β̄` independent;
    /// `Q(β, β*)` is the Q-function.
    pub fn analytic(&self, beta: &[C64], beta_bar: &[C64]) -> C64 {
        let n = self.modes();
        let b = CVector::from_iterator(2 * n, beta_bar.iter().chain(beta.iter()).copied());
        let quad = bilinear(&b, &(&self.r + sigma_x(n)), &b);
        let lin: C64 = b.iter().zip(self.z.iter()).map(|(x, y)| x * y).sum();
        self.p0 * (-0.5 * quad + lin).exp()
    }
}

fn inv_one_plus_2m(state: &GaussianState) -> Result<CMatrix> {
    let n2 = 2 * state.modes();
    let a = to_complex(&(crate::linalg::RMatrix::identity(n2, n2) + state.disp() * 2.0));
    inverse(&a, "M + I/2")
}

/// Q-function parameters of a Gaussian state.
pub fn q_params(state: &GaussianState) -> Result<QParams> {
    let n = state.modes();
    let u = quadrature_unitary(n);
    let inv = inv_one_plus_2m(state)?;
    let mean = to_complex_vec(state.mean());
    let r = (u.adjoint() * &inv * u.map(|x| x.conj())).map(|x| 2.0 * x) - sigma_x(n);
    let r = (&r + r.transpose()).map(|x| 0.5 * x);
    let z = (u.adjoint() * &inv * &mean).map(|x| 2.0 * x);
    Ok(QParams { r, z, p0: p0_of(state, &inv)? })
}

fn p0_of(state: &GaussianState, inv: &CMatrix) -> Result<f64> {
    let n2 = 2 * state.modes();
    let shifted = state.disp() + crate::linalg::RMatrix::identity(n2, n2) * 0.5;
    let det = shifted.determinant();
    if det <= 0.0 {
        return Err(Error::Singular("M + I/2"));
    }
    let mean = to_complex_vec(state.mean());
    let quad = bilinear(&mean, inv, &mean).re;
    Ok(det.powf(-0.5) * (-quad).exp())
}

/// `P₀ = det(M + I/2)^{-1/2} exp[−⟨Q⟩ᵗ(2M + I)⁻¹⟨Q⟩]`.
pub fn vacuum_probability(state: &GaussianState) -> Result<f64> {
    let inv = inv_one_plus_2m(state)?;
    p0_of(state, &inv)
}

/// The polynomial argument `y = 2Uᵗ(I − 2M)⁻¹⟨Q⟩`, defined only away from
/// `M = I/2`; provided for cross-checking `z = R y`.
pub fn hermite_argument(state: &GaussianState) -> Result<CVector> {
    let n = state.modes();
    let n2 = 2 * n;
    let u = quadrature_unitary(n);
    let a = to_complex(&(crate::linalg::RMatrix::identity(n2, n2) - state.disp() * 2.0));
    let inv = inverse(&a, "I - 2M")?;
    Ok((u.transpose() * inv * to_complex_vec(state.mean())).map(|x| 2.0 * x))
}

/// A photon-number probability together with its numerical residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonProbability {
    /// Probability clipped to `≥ 0`.
    pub value: f64,
    /// Discarded imaginary part.
    pub imag_residue: f64,
    /// Magnitude removed by clipping a negative real part.
    pub clipped: f64,
}

fn to_probability(raw: C64) -> Result<PhotonProbability> {
    if raw.im.abs() > IMAG_RESIDUE_REL * raw.re.abs() && raw.im.abs() > IMAG_RESIDUE_ABS {
        return Err(Error::ImaginaryResidue { re: raw.re, im: raw.im });
    }
    let clipped = if raw.re < 0.0 { -raw.re } else { 0.0 };
    Ok(PhotonProbability { value: raw.re.max(0.0), imag_residue: raw.im.abs(), clipped })
}

/// `P_n = p₀ H_{(n,n)} / n!` with its residue report.
pub fn photon_probability(state: &GaussianState, n: &MultiIndex) -> Result<PhotonProbability> {
    let modes = state.modes();
    if n.dim() != modes {
        return Err(Error::DimensionMismatch { expected: modes, found: n.dim() });
    }
    let params = q_params(state)?;
    let doubled = n.doubled();
    let table = normalized_table(&params.hermite_spec(), &doubled, DEFAULT_CAP)?;
    let g = table.get(&doubled).expect("corner of the table");
    to_probability(g * params.p0)
}

pub fn photon_distribution(state: &GaussianState, n: &MultiIndex) -> Result<f64> {
    photon_probability(state, n).map(|p| p.value)
}

/// All `P_n` with `n ≤ n_max` componentwise from a single Hermite table,
/// in lexicographic order.
pub fn distribution_table(state: &GaussianState, n_max: &MultiIndex) -> Result<Vec<(MultiIndex, f64)>> {
    let modes = state.modes();
    if n_max.dim() != modes {
        return Err(Error::DimensionMismatch { expected: modes, found: n_max.dim() });
    }
    let params = q_params(state)?;
    let table = normalized_table(&params.hermite_spec(), &n_max.doubled(), DEFAULT_CAP)?;
    let mut out = Vec::new();
    let mut idx = vec![0usize; modes];
    loop {
        let n = MultiIndex::new(idx.clone());
        let g = table.get(&n.doubled()).expect("index inside table");
        out.push((n, to_probability(g * params.p0)?.value));
        // odometer
        let mut slot = modes;
        loop {
            if slot == 0 {
                return Ok(out);
            }
            slot -= 1;
            idx[slot] += 1;
            if idx[slot] <= n_max.entries()[slot] {
                break;
            }
            idx[slot] = 0;
        }
    }
}

/// `Q(B)` for `B = (β, β*)`; the second half must conjugate the first.
pub fn q_function(state: &GaussianState, b: &CVector) -> Result<f64> {
    let n = state.modes();
    if b.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: b.len() });
    }
    let scale = b.iter().fold(1.0f64, |m, x| m.max(x.norm()));
    let defect = (0..n).map(|j| (b[j].conj() - b[n + j]).norm()).fold(0.0, f64::max);
    if defect > 1e-12 * scale {
        return Err(Error::ConjugacyViolation { defect });
    }
    let beta: Vec<C64> = b.iter().take(n).copied().collect();
    q_function_at(state, &beta)
}

/// `Q(β) = ⟨β|ρ|β⟩`.
pub fn q_function_at(state: &GaussianState, beta: &[C64]) -> Result<f64> {
    let n = state.modes();
    if beta.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: beta.len() });
    }
    let params = q_params(state)?;
    let conj: Vec<C64> = beta.iter().map(|b| b.conj()).collect();
    let v = params.analytic(beta, &conj);
    if v.im.abs() > 1e-10 * v.re.abs().max(1e-300) && v.im.abs() > 1e-14 {
        return Err(Error::ImaginaryResidue { re: v.re, im: v.im });
    }
    Ok(v.re.max(0.0))
}

/// Recovers `(M, ⟨Q⟩)` from Q-function parameters:
/// `M = U*(R + σ_x)⁻¹U† − ½` and `⟨Q⟩ = U*(R + σ_x)⁻¹ z`.
pub fn state_from_q_params(params: &QParams) -> Result<GaussianState> {
    let n = params.modes();
    let u = quadrature_unitary(n);
    let u_conj = u.map(|x| x.conj());
    let k = inverse(&(params.r() + sigma_x(n)), "R + sigma_x")?;
    let m = &u_conj * &k * u.adjoint();
    let mean = &u_conj * &k * params.z();
    let disp = m.map(|x| x.re) - crate::linalg::RMatrix::identity(2 * n, 2 * n) * 0.5;
    let disp = (&disp + disp.transpose()) * 0.5;
    GaussianState::new_unchecked(mean.map(|x| x.re), disp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{RMatrix, RVector};
    use approx::assert_relative_eq;

    fn max_norm(a: &CMatrix) -> f64 {
        a.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    #[test]
    fn vacuum_parameters() {
        let p = q_params(&GaussianState::vacuum(2)).unwrap();
        assert!(max_norm(p.r()) < 1e-15);
        assert!(p.z().iter().all(|x| x.norm() < 1e-15));
        assert_eq!(p.p0(), 1.0);
    }

    #[test]
    fn coherent_parameters() {
        let a = C64::new(0.8, -0.3);
        let p = q_params(&GaussianState::coherent(&[a])).unwrap();
        assert!(max_norm(p.r()) < 1e-15);
        assert!((p.z()[0] - a).norm() < 1e-15);
        assert!((p.z()[1] - a.conj()).norm() < 1e-15);
        assert_relative_eq!(p.p0(), (-a.norm_sqr()).exp(), epsilon = 1e-15);
    }

    #[test]
    fn squeezed_vacuum_probability() {
        let r = 0.5f64;
        let st = GaussianState::squeezed(r, 0.0, C64::new(0.0, 0.0));
        let p = q_params(&st).unwrap();
        assert!(p.z().iter().all(|x| x.norm() < 1e-15));
        assert_relative_eq!(p.p0(), 1.0 / r.cosh(), epsilon = 1e-14);
        assert_relative_eq!(1.0 / r.cosh(), 0.886818883970074, epsilon = 1e-14);
    }

    #[test]
    fn vacuum_probability_examples() {
        assert_eq!(vacuum_probability(&GaussianState::vacuum(1)).unwrap(), 1.0);
        let coh = GaussianState::coherent(&[C64::new(1.0, 0.0)]);
        assert_relative_eq!(vacuum_probability(&coh).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(vacuum_probability(&GaussianState::thermal(&[1.0])).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn distribution_examples() {
        let vac = GaussianState::vacuum(1);
        assert_eq!(photon_distribution(&vac, &vec![0].into()).unwrap(), 1.0);
        assert_eq!(photon_distribution(&vac, &vec![3].into()).unwrap(), 0.0);
        let coh = GaussianState::coherent(&[C64::new(1.0, 0.0)]);
        assert_relative_eq!(photon_distribution(&coh, &vec![2].into()).unwrap(), (-1.0f64).exp() / 2.0, epsilon = 1e-15);
        let sq = GaussianState::squeezed(0.5, 0.0, C64::new(0.0, 0.0));
        assert!(photon_distribution(&sq, &vec![1].into()).unwrap() < 1e-16);
    }

    #[test]
    fn table_matches_pointwise() {
        let st = GaussianState::squeezed(0.3, 1.0, C64::new(0.4, 0.2));
        let table = distribution_table(&st, &vec![6].into()).unwrap();
        assert_eq!(table.len(), 7);
        for (n, p) in table {
            assert_relative_eq!(photon_distribution(&st, &n).unwrap(), p, epsilon = 1e-15);
        }
    }

    #[test]
    fn q_function_examples() {
        let vac = GaussianState::vacuum(1);
        let b = |beta: C64| CVector::from_vec(vec![beta, beta.conj()]);
        assert_eq!(q_function(&vac, &b(C64::new(0.0, 0.0))).unwrap(), 1.0);
        assert_relative_eq!(q_function(&vac, &b(C64::new(1.0, 0.0))).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        let a = C64::new(0.7, 0.4);
        let beta = C64::new(-0.2, 1.1);
        let coh = GaussianState::coherent(&[a]);
        assert_relative_eq!(q_function(&coh, &b(beta)).unwrap(), (-(beta - a).norm_sqr()).exp(), epsilon = 1e-14);
        let bad = CVector::from_vec(vec![beta, beta]);
        assert!(matches!(q_function(&coh, &bad), Err(Error::ConjugacyViolation { .. })));
    }

    #[test]
    fn inverse_examples() {
        let vac = state_from_q_params(&QParams::new(CMatrix::zeros(2, 2), CVector::zeros(2), 1.0).unwrap()).unwrap();
        assert!((vac.disp() - RMatrix::identity(2, 2) * 0.5).abs().max() < 1e-15);
        assert!(vac.mean().abs().max() < 1e-15);
        for st in [
            GaussianState::squeezed(0.5, 0.0, C64::new(0.0, 0.0)),
            GaussianState::coherent(&[C64::new(1.0, 0.5)]),
        ] {
            let back = state_from_q_params(&q_params(&st).unwrap()).unwrap();
            assert!((back.disp() - st.disp()).abs().max() < 1e-10);
            assert!((back.mean() - st.mean()).abs().max() < 1e-10);
        }
    }

    #[test]
    fn argument_is_consistent_with_z() {
        // z = R y with y from (I − 2M)⁻¹, away from M = I/2
        let st = GaussianState::new(
            RVector::from_vec(vec![0.3, -0.7, 1.1, 0.2]),
            RMatrix::from_row_slice(4, 4, &[
                1.1, 0.2, 0.1, 0.0,
                0.2, 0.9, 0.0, -0.1,
                0.1, 0.0, 0.8, 0.15,
                0.0, -0.1, 0.15, 1.3,
            ]),
        )
        .unwrap();
        let p = q_params(&st).unwrap();
        let y = hermite_argument(&st).unwrap();
        let ry = p.r() * y;
        assert!((ry - p.z()).iter().all(|x| x.norm() < 1e-10));
        assert!(matches!(hermite_argument(&GaussianState::vacuum(1)), Err(Error::Singular(_))));
    }
}
