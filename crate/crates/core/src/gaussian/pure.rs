//! Pure squeezed and correlated states `Ψ(x) = 𝒩 exp(−xᵗm x + cᵗx)`.

use num_complex::Complex64 as C64;

use super::{state_from_q_params, GaussianState, QParams};
use crate::error::{Error, Result};
use crate::linalg::{
    bilinear, check_symmetric, determinant, inverse, min_hermitian_eigenvalue, CMatrix, CVector, RMatrix,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PureGaussian {
    m: CMatrix,
    c: CVector,
}

impl PureGaussian {
    /// Requires `m` symmetric and `m + m*` positive definite.
    pub fn new(m: CMatrix, c: CVector) -> Result<Self> {
        check_symmetric(&m, 1e-12)?;
        if c.len() != m.nrows() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: c.len() });
        }
        let re = m.map(|x| C64::new(x.re, 0.0));
        let re = (&re + re.transpose()).map(|x| 0.5 * x);
        if min_hermitian_eigenvalue(&re) <= 0.0 {
            return Err(Error::InvalidArgument("Re m must be positive definite".into()));
        }
        Ok(PureGaussian { m, c })
    }

    pub fn modes(&self) -> usize {
        self.c.len()
    }

    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    pub fn c(&self) -> &CVector {
        &self.c
    }

    fn re_sum(&self) -> CMatrix {
        // m + m*
        self.m.map(|x| C64::new(2.0 * x.re, 0.0))
    }

    /// `𝒩 = det(m + m*)^{1/4} π^{−N/4} exp[−⅛ (c + c*)ᵗ(m + m*)⁻¹(c + c*)]`.
    pub fn normalization(&self) -> Result<f64> {
        let a = self.re_sum();
        let inv = inverse(&a, "m + m*")?;
        let b = self.c.map(|x| C64::new(2.0 * x.re, 0.0));
        let n = self.modes() as f64;
        Ok(determinant(&a).re.powf(0.25)
            * std::f64::consts::PI.powf(-n / 4.0)
            * (-0.125 * bilinear(&b, &inv, &b).re).exp())
    }

    /// `Ψ(x)`.
    pub fn wave_function(&self, x: &[f64]) -> Result<C64> {
        if x.len() != self.modes() {
            return Err(Error::DimensionMismatch { expected: self.modes(), found: x.len() });
        }
        let xv = CVector::from_iterator(x.len(), x.iter().map(|&v| C64::new(v, 0.0)));
        let expo = -bilinear(&xv, &self.m, &xv) + self.c.dot(&xv);
        Ok(expo.exp() * self.normalization()?)
    }
}

/// Dispersion blocks `σ_pp = 2(m⁻¹ + m*⁻¹)⁻¹`, `σ_qq = ½(m + m*)⁻¹`,
/// `σ_pq = (i/2)(m − m*)(m + m*)⁻¹`, with the mean taken from the Q-parameter path.
pub fn gaussian_from_pure(p: &PureGaussian) -> Result<GaussianState> {
    let n = p.modes();
    let a_inv = inverse(&p.re_sum(), "m + m*")?;
    let m_inv = inverse(&p.m, "m")?;
    let pp = inverse(&(&m_inv + m_inv.map(|x| x.conj())), "m^-1 + m*^-1")?.map(|x| 2.0 * x);
    let qq = a_inv.map(|x| 0.5 * x);
    let pq = ((&p.m - p.m.map(|x| x.conj())) * &a_inv).map(|x| 0.5 * C64::i() * x);

    let mut disp = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            disp[(i, k)] = 0.5 * (pp[(i, k)].re + pp[(k, i)].re);
            disp[(n + i, n + k)] = 0.5 * (qq[(i, k)].re + qq[(k, i)].re);
            disp[(i, n + k)] = pq[(i, k)].re;
            disp[(n + k, i)] = pq[(i, k)].re;
        }
    }
    let mean = state_from_q_params(&pure_q_params(p)?)?.mean().clone();
    GaussianState::new_unchecked(mean, disp)
}

/// Block-diagonal Q-parameters. In the `(β*, β)` slot order the first block is
/// `1 − (m + ½)⁻¹` and the second its conjugate; `z` has first half
/// `(m + ½)⁻¹c/√2`. The vacuum probability is
/// `det(m + m*)^{1/2}/|det(m + ½)| · exp{−¼(c + c*)(m + m*)⁻¹(c + c*) + ½ Re[c(m + ½)⁻¹c]}`.
pub fn pure_q_params(p: &PureGaussian) -> Result<QParams> {
    let n = p.modes();
    let shifted = &p.m + CMatrix::identity(n, n).map(|x| 0.5 * x);
    let k = inverse(&shifted, "m + 1/2")?;
    let block = CMatrix::identity(n, n) - &k;
    let mut r = CMatrix::zeros(2 * n, 2 * n);
    r.view_mut((0, 0), (n, n)).copy_from(&block);
    r.view_mut((n, n), (n, n)).copy_from(&block.map(|x| x.conj()));
    let r = (&r + r.transpose()).map(|x| 0.5 * x);

    let half = (&k * &p.c).map(|x| x * std::f64::consts::FRAC_1_SQRT_2);
    let z = CVector::from_iterator(2 * n, half.iter().copied().chain(half.iter().map(|x| x.conj())));

    let a = p.re_sum();
    let a_inv = inverse(&a, "m + m*")?;
    let b = p.c.map(|x| C64::new(2.0 * x.re, 0.0));
    let expo = -0.25 * bilinear(&b, &a_inv, &b).re + 0.5 * bilinear(&p.c, &k, &p.c).re;
    let p0 = determinant(&a).re.sqrt() / determinant(&shifted).norm() * expo.exp();
    QParams::new(r, z, p0.min(1.0))
}

/// The polynomial argument: first half `(m − ½)⁻¹c/√2`, second half its conjugate.
pub fn pure_hermite_argument(p: &PureGaussian) -> Result<CVector> {
    let n = p.modes();
    let shifted = &p.m - CMatrix::identity(n, n).map(|x| 0.5 * x);
    let k = inverse(&shifted, "m - 1/2")?;
    let half = (k * &p.c).map(|x| x * std::f64::consts::FRAC_1_SQRT_2);
    Ok(CVector::from_iterator(2 * n, half.iter().copied().chain(half.iter().map(|x| x.conj()))))
}
