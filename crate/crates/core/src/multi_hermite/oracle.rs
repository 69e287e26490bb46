//! Coefficient extraction from the generating function, by truncated
//! multivariate power-series arithmetic. Independent of the recurrence.

use num_complex::Complex64 as C64;

use super::{HermiteSpec, MultiIndex};
use crate::error::{Error, Result};

/// Largest total order the oracle accepts.
pub const ORACLE_ORDER_CAP: usize = 10;

/// Dense power series over the box `0 ≤ k ≤ bound`.
struct Series {
    extents: Vec<usize>,
    coeffs: Vec<C64>,
}

impl Series {
    fn zero(bound: &[usize]) -> Self {
        let extents: Vec<usize> = bound.iter().map(|b| b + 1).collect();
        let len = extents.iter().product();
        Series { extents, coeffs: vec![C64::new(0.0, 0.0); len] }
    }

    fn flat(&self, k: &[usize]) -> Option<usize> {
        let mut flat = 0;
        for (ki, ei) in k.iter().zip(&self.extents) {
            if ki >= ei {
                return None;
            }
            flat = flat * ei + ki;
        }
        Some(flat)
    }

    fn unflat(&self, mut flat: usize) -> Vec<usize> {
        let mut k = vec![0; self.extents.len()];
        for i in (0..k.len()).rev() {
            k[i] = flat % self.extents[i];
            flat /= self.extents[i];
        }
        k
    }

    fn add(&mut self, k: &[usize], v: C64) {
        if let Some(f) = self.flat(k) {
            self.coeffs[f] += v;
        }
    }

    fn mul(&self, other: &Series) -> Series {
        let bound: Vec<usize> = self.extents.iter().map(|e| e - 1).collect();
        let mut out = Series::zero(&bound);
        for (fa, &a) in self.coeffs.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let ka = self.unflat(fa);
            for (fb, &b) in other.coeffs.iter().enumerate() {
                if b == C64::new(0.0, 0.0) {
                    continue;
                }
                let kb = other.unflat(fb);
                let k: Vec<usize> = ka.iter().zip(&kb).map(|(x, y)| x + y).collect();
                out.add(&k, a * b);
            }
        }
        out
    }
}

/// `n! · [aⁿ] exp(−½ aᵗRa + aᵗz)`.
pub fn hermite_gen_oracle(spec: &HermiteSpec, n: &MultiIndex) -> Result<C64> {
    let d = spec.dim();
    if n.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: n.dim() });
    }
    let order = n.total();
    if order > ORACLE_ORDER_CAP {
        return Err(Error::OrderCapExceeded { order, cap: ORACLE_ORDER_CAP });
    }
    let bound = n.entries();

    // exponent f(a) = −½ aᵗRa + aᵗz
    let mut f = Series::zero(bound);
    let mut k = vec![0usize; d];
    for i in 0..d {
        k[i] = 1;
        f.add(&k, spec.z()[i]);
        k[i] = 0;
    }
    for i in 0..d {
        for j in i..d {
            k[i] += 1;
            k[j] += 1;
            let coef = if i == j { -0.5 * spec.r()[(i, i)] } else { -spec.r()[(i, j)] };
            f.add(&k, coef);
            k[i] -= 1;
            k[j] -= 1;
        }
    }

    // exp(f) = Σ_{p ≤ |n|} f^p / p!; f has no constant term
    let mut sum = Series::zero(bound);
    sum.add(&vec![0; d], C64::new(1.0, 0.0));
    let mut power = Series::zero(bound);
    power.add(&vec![0; d], C64::new(1.0, 0.0));
    for p in 1..=order {
        power = power.mul(&f);
        let inv = 1.0 / super::factorial(p);
        for (s, t) in sum.coeffs.iter_mut().zip(&power.coeffs) {
            *s += t * inv;
        }
    }
    let coeff = sum.coeffs[sum.flat(bound).expect("bound lies in box")];
    Ok(coeff * n.factorial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn low_orders() {
        let y = 0.8;
        let spec = HermiteSpec::new(dmatrix![C64::new(2.0, 0.0)], dvector![C64::new(2.0 * y, 0.0)]).unwrap();
        let h0 = hermite_gen_oracle(&spec, &vec![0].into()).unwrap();
        let h1 = hermite_gen_oracle(&spec, &vec![1].into()).unwrap();
        let h4 = hermite_gen_oracle(&spec, &vec![4].into()).unwrap();
        assert_eq!(h0, C64::new(1.0, 0.0));
        assert!((h1.re - 2.0 * y).abs() < 1e-15);
        let exact = 16.0 * y.powi(4) - 48.0 * y * y + 12.0;
        assert!((h4.re - exact).abs() < 1e-12);
    }

    #[test]
    fn order_cap() {
        let spec = HermiteSpec::new(dmatrix![C64::new(2.0, 0.0)], dvector![C64::new(0.0, 0.0)]).unwrap();
        assert!(matches!(
            hermite_gen_oracle(&spec, &vec![11].into()),
            Err(Error::OrderCapExceeded { order: 11, cap: 10 })
        ));
    }
}
