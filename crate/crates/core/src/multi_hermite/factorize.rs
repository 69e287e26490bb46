use num_complex::Complex64 as C64;

use super::{HermiteSpec, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::max_abs;

const BLOCK_TOL: f64 = 1e-12;

/// Split of a block-diagonal family into two independent families.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub first: HermiteSpec,
    pub second: HermiteSpec,
    /// True when the second block is the complex conjugate of the first, so
    /// that `H_{(n,n)} = |H_n|²`.
    pub conjugate: bool,
}

impl Factorization {
    pub fn split(&self) -> usize {
        self.first.dim()
    }

    /// `H_k = H_{k₁}^{R₁}(y₁) · H_{k₂}^{R₂}(y₂)`.
    pub fn eval(&self, k: &MultiIndex) -> Result<C64> {
        let expected = self.first.dim() + self.second.dim();
        if k.dim() != expected {
            return Err(Error::DimensionMismatch { expected, found: k.dim() });
        }
        let (k1, k2) = k.split_at(self.split());
        let h1 = self.first.eval(&k1)?;
        let h2 = if self.conjugate { self.first.eval(&k2)?.conj() } else { self.second.eval(&k2)? };
        Ok(h1 * h2)
    }

    /// `|H_n^{R₁}(y₁)|²`, valid for conjugate blocks only.
    pub fn squared_modulus(&self, n: &MultiIndex) -> Result<f64> {
        if !self.conjugate {
            return Err(Error::InvalidArgument("blocks are not complex conjugates".into()));
        }
        Ok(self.first.eval(n)?.norm_sqr())
    }
}

/// Splits `spec` at slot `split` when `R` is block diagonal there.
pub fn block_factorize(spec: &HermiteSpec, split: usize) -> Result<Factorization> {
    let d = spec.dim();
    if split == 0 || split >= d {
        return Err(Error::InvalidArgument(format!("split {split} must lie strictly inside 0..{d}")));
    }
    let r = spec.r();
    let scale = max_abs(r).max(1.0);
    let upper = r.view((0, split), (split, d - split));
    let defect = upper.iter().fold(0.0f64, |m, x| m.max(x.norm())) / scale;
    if defect > BLOCK_TOL {
        return Err(Error::NotBlockDiagonal { split, defect });
    }
    let first = HermiteSpec::new(
        r.view((0, 0), (split, split)).into_owned(),
        spec.z().rows(0, split).into_owned(),
    )?;
    let second = HermiteSpec::new(
        r.view((split, split), (d - split, d - split)).into_owned(),
        spec.z().rows(split, d - split).into_owned(),
    )?;
    let conjugate = first.dim() == second.dim()
        && (first.r().map(|x| x.conj()) - second.r()).iter().all(|x| x.norm() <= BLOCK_TOL * scale)
        && (first.z().map(|x| x.conj()) - second.z())
            .iter()
            .all(|x| x.norm() <= BLOCK_TOL * first.z().iter().fold(1.0f64, |m, v| m.max(v.norm())));
    Ok(Factorization { first, second, conjugate })
}
