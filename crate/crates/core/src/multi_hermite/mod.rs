//! Multivariable Hermite polynomials `H_n^{R}(y)`.
//!
//! The family is defined by its generating function
//!
//! ```text
//! exp(-½ aᵗ R a + aᵗ z) = Σ_n aⁿ / n! · H_n^{R}(y),     z = R y
//! ```
//!
//! and evaluated with the three-term recurrence
//! `H_{n+eᵢ} = zᵢ H_n − Σⱼ Rᵢⱼ nⱼ H_{n−eⱼ}`. With `D = 1`, `R = 2` this is the
//! physicists' Hermite recurrence. Specs carry `z` rather than `y` so that the
//! coherent-state limit (where `y` diverges) stays regular.

mod factorize;
mod oracle;
mod overlap;

pub use factorize::{block_factorize, Factorization};
pub use oracle::{hermite_gen_oracle, ORACLE_ORDER_CAP};
pub use overlap::{hermite_overlap, hermite_overlap_classical, OverlapResult, OverlapSpec};

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, CMatrix, CVector};

/// Default per-slot cap on table extents.
pub const DEFAULT_CAP: usize = 64;

/// Tables with more entries than this are refused.
const MAX_TABLE_ENTRIES: usize = 1 << 26;

const SYMMETRY_TOL: f64 = 1e-12;

/// Tuple of non-negative integers, one per slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `|n| = Σ nᵢ`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `n! = n₁! n₂! … n_D!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&k| factorial(k)).product()
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// The doubled index `(n, n)` used for diagonal Fock probabilities.
    pub fn doubled(&self) -> MultiIndex {
        self.concat(self)
    }

    pub fn split_at(&self, at: usize) -> (MultiIndex, MultiIndex) {
        let (a, b) = self.0.split_at(at);
        (MultiIndex(a.to_vec()), MultiIndex(b.to_vec()))
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[usize]> for MultiIndex {
    fn from(v: &[usize]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

pub(crate) fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

/// A Hermite family: symmetric `R` and linear coefficients `z = R y`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSpec {
    r: CMatrix,
    z: CVector,
}

impl HermiteSpec {
    pub fn new(r: CMatrix, z: CVector) -> Result<Self> {
        check_symmetric(&r, SYMMETRY_TOL)?;
        if z.len() != r.nrows() {
            return Err(Error::DimensionMismatch { expected: r.nrows(), found: z.len() });
        }
        Ok(HermiteSpec { r, z })
    }

    /// Builds the family from the polynomial argument `y`, storing `z = R y`.
    pub fn from_argument(r: CMatrix, y: &CVector) -> Result<Self> {
        if y.len() != r.nrows() {
            return Err(Error::DimensionMismatch { expected: r.nrows(), found: y.len() });
        }
        let z = &r * y;
        Self::new(r, z)
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    pub fn z(&self) -> &CVector {
        &self.z
    }

    /// The same family with both `R` and `z` complex conjugated.
    pub fn conj(&self) -> HermiteSpec {
        HermiteSpec { r: self.r.map(|x| x.conj()), z: self.z.map(|x| x.conj()) }
    }

    /// `H_n^{R}(y)` through the recurrence.
    pub fn eval(&self, n: &MultiIndex) -> Result<C64> {
        hermite_eval(self, n)
    }

    pub fn table(&self, n_max: &MultiIndex) -> Result<HermiteTable> {
        hermite_table(self, n_max)
    }
}

/// Evaluates `H_n^{R}(y)` from the recurrence seeded at `H_0 = 1`.
pub fn hermite_eval(spec: &HermiteSpec, n: &MultiIndex) -> Result<C64> {
    let table = HermiteTable::build(spec, n, usize::MAX, Scaling::Raw)?;
    Ok(*table.values.last().expect("table is never empty"))
}

/// Evaluates every `H_k` with `k ≤ n_max` componentwise.
pub fn hermite_table(spec: &HermiteSpec, n_max: &MultiIndex) -> Result<HermiteTable> {
    hermite_table_with_cap(spec, n_max, DEFAULT_CAP)
}

pub fn hermite_table_with_cap(
    spec: &HermiteSpec,
    n_max: &MultiIndex,
    cap: usize,
) -> Result<HermiteTable> {
    HermiteTable::build(spec, n_max, cap, Scaling::Raw)
}

/// Table of `H_k / √(k!)`, which stays bounded where `H_k` itself overflows.
/// Photon probabilities read directly off it as `P_n = p₀ · G_{(n,n)}`.
pub fn normalized_table(spec: &HermiteSpec, n_max: &MultiIndex, cap: usize) -> Result<HermiteTable> {
    HermiteTable::build(spec, n_max, cap, Scaling::SqrtFactorial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// Plain `H_k`.
    Raw,
    /// `H_k / √(k!)`.
    SqrtFactorial,
}

/// Dense memoized table over the box `0 ≤ k ≤ n_max`, last slot fastest.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    extents: Vec<usize>,
    strides: Vec<usize>,
    values: Vec<C64>,
    scaling: Scaling,
}

impl HermiteTable {
    fn build(spec: &HermiteSpec, n_max: &MultiIndex, cap: usize, scaling: Scaling) -> Result<Self> {
        let d = spec.dim();
        if n_max.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: n_max.dim() });
        }
        if let Some(&entry) = n_max.entries().iter().find(|&&k| k > cap) {
            return Err(Error::CapExceeded { entry, cap });
        }
        let extents: Vec<usize> = n_max.entries().iter().map(|k| k + 1).collect();
        let len = extents.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e));
        let len = match len {
            Some(len) if len <= MAX_TABLE_ENTRIES => len,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "Hermite table over {n_max} exceeds {MAX_TABLE_ENTRIES} entries"
                )))
            }
        };
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * extents[i + 1];
        }

        let r = spec.r();
        let z = spec.z();
        let sqrt: Vec<f64> = (0..=n_max.entries().iter().copied().max().unwrap_or(0) + 1)
            .map(|k| (k as f64).sqrt())
            .collect();

        let mut values = vec![C64::new(0.0, 0.0); len];
        values[0] = C64::new(1.0, 0.0);
        let mut k = vec![0usize; d];
        for flat in 1..len {
            // advance the odometer
            let mut slot = d - 1;
            loop {
                k[slot] += 1;
                if k[slot] < extents[slot] {
                    break;
                }
                k[slot] = 0;
                slot -= 1;
            }
            let i = k.iter().position(|&ki| ki > 0).expect("nonzero index");
            let prev = flat - strides[i];
            // k - eᵢ is the recurrence base; its entries are k with kᵢ lowered
            let mut acc = z[i] * values[prev];
            for j in 0..d {
                let kj = if j == i { k[j] - 1 } else { k[j] };
                if kj == 0 {
                    continue;
                }
                let coef = match scaling {
                    Scaling::Raw => kj as f64,
                    Scaling::SqrtFactorial => sqrt[kj],
                };
                acc -= r[(i, j)] * coef * values[prev - strides[j]];
            }
            values[flat] = match scaling {
                Scaling::Raw => acc,
                Scaling::SqrtFactorial => acc / sqrt[k[i]],
            };
        }
        Ok(HermiteTable { extents, strides, values, scaling })
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest index held per slot.
    pub fn n_max(&self) -> MultiIndex {
        MultiIndex(self.extents.iter().map(|e| e - 1).collect())
    }

    pub fn get(&self, n: &MultiIndex) -> Option<C64> {
        if n.dim() != self.dim() {
            return None;
        }
        let mut flat = 0;
        for (i, &k) in n.entries().iter().enumerate() {
            if k >= self.extents[i] {
                return None;
            }
            flat += k * self.strides[i];
        }
        Some(self.values[flat])
    }

    /// Entries in lexicographic order of their multi-index.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, C64)> + '_ {
        self.values.iter().enumerate().map(move |(flat, &v)| {
            let idx = self
                .strides
                .iter()
                .zip(&self.extents)
                .map(|(s, e)| (flat / s) % e)
                .collect();
            (MultiIndex(idx), v)
        })
    }
}

/// Physicists' Hermite polynomials `H_0(x) … H_{n_max}(x)`.
pub fn classical_hermite(n_max: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(1.0);
    if n_max >= 1 {
        h.push(2.0 * x);
    }
    for n in 1..n_max {
        let next = 2.0 * x * h[n] - 2.0 * n as f64 * h[n - 1];
        h.push(next);
    }
    h
}

/// Harmonic-oscillator eigenfunctions `⟨x|n⟩ = (2ⁿ n! √π)^{-1/2} H_n(x) e^{-x²/2}`.
pub fn oscillator_eigenfunctions(n_max: usize, x: f64) -> Vec<f64> {
    let h = classical_hermite(n_max, x);
    let ln_pi = std::f64::consts::PI.ln();
    h.iter()
        .enumerate()
        .map(|(n, &hn)| {
            let ln_norm = -0.5 * (n as f64 * std::f64::consts::LN_2 + ln_factorial(n) + 0.5 * ln_pi);
            hn * (ln_norm - 0.5 * x * x).exp()
        })
        .collect()
}
