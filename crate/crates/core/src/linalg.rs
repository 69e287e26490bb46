//! Small dense linear-algebra helpers shared by the state modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Relative symmetry defect `max|A - Aᵗ| / max(1, max|A|)`.
pub fn symmetry_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut defect = 0.0f64;
    let mut scale = 1.0f64;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(a[(i, j)].norm());
            defect = defect.max((a[(i, j)] - a[(j, i)]).norm());
        }
    }
    defect / scale
}

pub fn real_symmetry_defect(a: &RMatrix) -> f64 {
    let n = a.nrows();
    let mut defect = 0.0f64;
    let mut scale = 1.0f64;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(a[(i, j)].abs());
            defect = defect.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    defect / scale
}

pub fn check_symmetric(a: &CMatrix, tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    let defect = symmetry_defect(a);
    if defect > tol {
        return Err(Error::NotSymmetric { defect });
    }
    Ok(())
}

pub fn to_complex(a: &RMatrix) -> CMatrix {
    a.map(|x| C64::new(x, 0.0))
}

pub fn to_complex_vec(v: &RVector) -> CVector {
    v.map(|x| C64::new(x, 0.0))
}

/// The 2N×2N exchange matrix `[[0, I], [I, 0]]`.
pub fn sigma_x(modes: usize) -> CMatrix {
    let mut s = CMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        s[(i, modes + i)] = C64::new(1.0, 0.0);
        s[(modes + i, i)] = C64::new(1.0, 0.0);
    }
    s
}

/// The unitary `U = [[-iI, iI], [I, I]] / √2` mapping `(a, a†)` onto `(p, q)`.
pub fn quadrature_unitary(modes: usize) -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        u[(i, i)] = C64::new(0.0, -h);
        u[(i, modes + i)] = C64::new(0.0, h);
        u[(modes + i, i)] = C64::new(h, 0.0);
        u[(modes + i, modes + i)] = C64::new(h, 0.0);
    }
    u
}

/// The symplectic form `J = [[0, -I], [I, 0]]` in (p, q) ordering.
pub fn symplectic_form(modes: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        j[(i, modes + i)] = -1.0;
        j[(modes + i, i)] = 1.0;
    }
    j
}

pub fn inverse(a: &CMatrix, what: &'static str) -> Result<CMatrix> {
    let lu = a.clone().lu();
    if !lu_is_regular(a, &lu.u()) {
        return Err(Error::Singular(what));
    }
    lu.try_inverse().ok_or(Error::Singular(what))
}

pub fn real_inverse(a: &RMatrix, what: &'static str) -> Result<RMatrix> {
    inverse(&to_complex(a), what).map(|m| m.map(|z| z.re))
}

fn lu_is_regular(a: &CMatrix, u: &CMatrix) -> bool {
    let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return false;
    }
    let n = a.nrows() as f64;
    (0..u.nrows()).all(|i| u[(i, i)].norm() > scale * n * 1e-14)
}

pub fn determinant(a: &CMatrix) -> C64 {
    a.clone().lu().determinant()
}

/// Eigenvalues of a general complex matrix via the Schur form.
pub fn eigenvalues(a: &CMatrix) -> Vec<C64> {
    let (_, t) = nalgebra::Schur::new(a.clone()).unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// `det(m)^{1/2}` on the branch continuous from the identity for matrices
/// whose eigenvalues have positive real part: the product of principal
/// square roots of the eigenvalues.
pub fn sqrt_det(a: &CMatrix) -> C64 {
    eigenvalues(a).into_iter().fold(C64::new(1.0, 0.0), |acc, l| acc * l.sqrt())
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(a: &CMatrix) -> f64 {
    let eig = nalgebra::SymmetricEigen::new(a.clone());
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Bilinear (non-conjugating) form `xᵗ A y`.
pub fn bilinear(x: &CVector, a: &CMatrix, y: &CVector) -> C64 {
    dot(x, &(a * y))
}

/// Bilinear dot product `Σ xᵢ yᵢ` (no conjugation).
pub fn dot(x: &CVector, y: &CVector) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}
