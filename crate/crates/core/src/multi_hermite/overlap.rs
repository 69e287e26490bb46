//! Gaussian overlap of two Hermite families (multimode Franck–Condon factor):
//!
//! ```text
//! ∫ H_n^{R}(x) H_m^{r}(Λx + d) exp(−xᵗ m x + cᵗ x) dx
//!     = π^{N/2} det(m)^{-1/2} exp(¼ cᵗ m⁻¹ c) · H_{(n,m)}^{ρ}(y)
//! ```
//!
//! The combined index places `n` (the family of `R`) in the first block,
//! matching the top-left block `R₁ = R − ½ R m⁻¹ R` of `ρ`.

use num_complex::Complex64 as C64;

use super::{HermiteSpec, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{bilinear, check_symmetric, inverse, sqrt_det, CMatrix, CVector};

const SYMMETRY_TOL: f64 = 1e-12;

/// Parameters of the overlap integral.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSpec {
    /// `R`, the family evaluated at `x`.
    pub left: CMatrix,
    /// `r`, the family evaluated at `Λx + d`.
    pub right: CMatrix,
    /// `Λ`.
    pub map: CMatrix,
    /// `d`.
    pub shift: CVector,
    /// `m`, the quadratic weight; its real part must be positive definite.
    pub width: CMatrix,
    /// `c`, the linear weight.
    pub drift: CVector,
}

impl OverlapSpec {
    pub fn modes(&self) -> usize {
        self.width.nrows()
    }

    fn validate(&self) -> Result<()> {
        let n = self.modes();
        for m in [&self.left, &self.right, &self.map, &self.width] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
            }
        }
        for v in [&self.shift, &self.drift] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        check_symmetric(&self.left, SYMMETRY_TOL)?;
        check_symmetric(&self.right, SYMMETRY_TOL)?;
        check_symmetric(&self.width, SYMMETRY_TOL)?;
        let re = (&self.width + self.width.adjoint()).map(|x| x * 0.5);
        let min = crate::linalg::min_hermitian_eigenvalue(&re);
        if min <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "real part of the Gaussian width is not positive definite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(())
    }
}

/// `ρ`, `z = ρ y`, `y` and the scalar prefactor of the overlap.
#[derive(Debug, Clone)]
pub struct OverlapResult {
    modes: usize,
    rho: CMatrix,
    z: CVector,
    y: CVector,
    prefactor: C64,
}

impl OverlapResult {
    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn r1(&self) -> CMatrix {
        self.rho.view((0, 0), (self.modes, self.modes)).into_owned()
    }

    pub fn r2(&self) -> CMatrix {
        self.rho.view((self.modes, self.modes), (self.modes, self.modes)).into_owned()
    }

    /// Upper-right block; its transpose sits below the diagonal.
    pub fn r12(&self) -> CMatrix {
        self.rho.view((0, self.modes), (self.modes, self.modes)).into_owned()
    }

    pub fn y(&self) -> &CVector {
        &self.y
    }

    /// `(y₁, y₂) = ρ y`.
    pub fn z(&self) -> &CVector {
        &self.z
    }

    pub fn prefactor(&self) -> C64 {
        self.prefactor
    }

    pub fn hermite_spec(&self) -> HermiteSpec {
        HermiteSpec { r: self.rho.clone(), z: self.z.clone() }
    }

    /// Value of the integral for polynomial orders `n` (first family) and `m`.
    pub fn eval(&self, n: &MultiIndex, m: &MultiIndex) -> Result<C64> {
        for idx in [n, m] {
            if idx.dim() != self.modes {
                return Err(Error::DimensionMismatch { expected: self.modes, found: idx.dim() });
            }
        }
        Ok(self.prefactor * self.hermite_spec().eval(&n.concat(m))?)
    }
}

fn finish(modes: usize, rho: CMatrix, z: CVector, width: &CMatrix, width_inv: &CMatrix, drift: &CVector) -> Result<OverlapResult> {
    let y = inverse(&rho, "overlap rho").map_err(|_| Error::DegenerateOverlap)? * &z;
    let pi_pow = std::f64::consts::PI.powf(modes as f64 / 2.0);
    let prefactor = pi_pow / sqrt_det(width) * (0.25 * bilinear(drift, width_inv, drift)).exp();
    Ok(OverlapResult { modes, rho, z, y, prefactor })
}

fn assemble(r1: &CMatrix, r2: &CMatrix, lower: &CMatrix) -> CMatrix {
    let n = r1.nrows();
    let mut rho = CMatrix::zeros(2 * n, 2 * n);
    rho.view_mut((0, 0), (n, n)).copy_from(r1);
    rho.view_mut((n, n), (n, n)).copy_from(r2);
    rho.view_mut((n, 0), (n, n)).copy_from(lower);
    rho.view_mut((0, n), (n, n)).copy_from(&lower.transpose());
    rho
}

/// General overlap of two Hermite families against a Gaussian weight.
pub fn hermite_overlap(spec: &OverlapSpec) -> Result<OverlapResult> {
    spec.validate()?;
    let n = spec.modes();
    let m_inv = inverse(&spec.width, "Gaussian width m")?;
    let big = &spec.left;
    let small = &spec.right;
    let lam = &spec.map;

    let r1 = big - (big * &m_inv * big).map(|x| x * 0.5);
    let r2 = small - (small * lam * &m_inv * lam.transpose() * small).map(|x| x * 0.5);
    let lower = (small * lam * &m_inv * big).map(|x| -0.5 * x);
    let rho = assemble(&r1, &r2, &lower);

    // linear coefficients of the generating exponent in (a, b)
    let z1 = (big * &m_inv * &spec.drift).map(|x| 0.5 * x);
    let z2 = (small * lam * &m_inv * &spec.drift).map(|x| 0.5 * x) + small * &spec.shift;
    let mut z = CVector::zeros(2 * n);
    z.rows_mut(0, n).copy_from(&z1);
    z.rows_mut(n, n).copy_from(&z2);
    finish(n, rho, z, &spec.width, &m_inv, &spec.drift)
}

/// Fast path for classical Hermite polynomials (`R = r = 2I`).
pub fn hermite_overlap_classical(
    map: &CMatrix,
    width: &CMatrix,
    drift: &CVector,
    shift: &CVector,
) -> Result<OverlapResult> {
    let n = width.nrows();
    let two = CMatrix::identity(n, n).map(|x| x * 2.0);
    let spec = OverlapSpec {
        left: two.clone(),
        right: two.clone(),
        map: map.clone(),
        shift: shift.clone(),
        width: width.clone(),
        drift: drift.clone(),
    };
    spec.validate()?;
    let m_inv = inverse(width, "Gaussian width m")?;
    let r1 = &two - m_inv.map(|x| 2.0 * x);
    let r2 = &two - (map * &m_inv * map.transpose()).map(|x| 2.0 * x);
    let lower = (map * &m_inv).map(|x| -2.0 * x);
    let rho = assemble(&r1, &r2, &lower);
    let z1 = &m_inv * drift;
    let z2 = map * &m_inv * drift + shift.map(|x| 2.0 * x);
    let mut z = CVector::zeros(2 * n);
    z.rows_mut(0, n).copy_from(&z1);
    z.rows_mut(n, n).copy_from(&z2);
    finish(n, rho, z, width, &m_inv, drift)
}
