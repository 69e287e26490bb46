//! Truncated Fock-space reference states, computed by direct summation.
//!
//! Everything here is deliberately naive: amplitudes come from textbook
//! expansions or from exponentiating ladder-operator generators, and moments
//! come from applying truncated `q̂`, `p̂` and `n̂` to the stored amplitudes.
//! Only the classical Hermite path of [`crate::multi_hermite`] is shared with
//! the code under test.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::cat_states::Parity;
use crate::error::{Error, Result};
use crate::linalg::{RMatrix, RVector};
use crate::multi_hermite::{ln_factorial, oscillator_eigenfunctions};

/// Tail mass tolerated by coherent and cat vectors.
pub const COHERENT_TAIL_TOL: f64 = 1e-12;
/// Tail mass tolerated by squeezed vectors.
pub const SQUEEZED_TAIL_TOL: f64 = 1e-8;

/// Amplitudes `⟨n₁…n_N|ψ⟩` for `0 ≤ nⱼ < cutoffs[j]`, last mode fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    cutoffs: Vec<usize>,
    amps: Vec<C64>,
    tail_mass: f64,
}

impl FockVector {
    /// Wraps raw amplitudes; the tail mass is `max(0, 1 − ‖ψ‖²)`.
    pub fn new(cutoffs: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let len: usize = cutoffs.iter().product();
        if len != amps.len() || cutoffs.is_empty() {
            return Err(Error::DimensionMismatch { expected: len, found: amps.len() });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!("norm {norm} exceeds one")));
        }
        Ok(FockVector { cutoffs, amps, tail_mass: (1.0 - norm).max(0.0) })
    }

    pub fn modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Probability mass lost to truncation.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn offset(&self, n: &[usize]) -> Option<usize> {
        if n.len() != self.cutoffs.len() {
            return None;
        }
        let mut off = 0;
        for (&k, &c) in n.iter().zip(&self.cutoffs) {
            if k >= c {
                return None;
            }
            off = off * c + k;
        }
        Some(off)
    }

    /// Amplitude of `|n⟩`; zero outside the truncated space.
    pub fn amplitude(&self, n: &[usize]) -> C64 {
        self.offset(n).map_or(C64::new(0.0, 0.0), |o| self.amps[o])
    }

    /// `(n, amplitude)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, C64)> + '_ {
        self.amps.iter().enumerate().map(move |(o, &a)| (self.unravel(o), a))
    }

    fn unravel(&self, mut o: usize) -> Vec<usize> {
        let mut n = vec![0; self.cutoffs.len()];
        for j in (0..self.cutoffs.len()).rev() {
            n[j] = o % self.cutoffs[j];
            o /= self.cutoffs[j];
        }
        n
    }

    /// Tensor product `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &FockVector) -> FockVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        let cutoffs = self.cutoffs.iter().chain(&other.cutoffs).copied().collect();
        let norm: f64 = amps.iter().map(|a: &C64| a.norm_sqr()).sum();
        FockVector { cutoffs, amps, tail_mass: (1.0 - norm).max(0.0) }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::InvalidArgument("cutoff mismatch".into()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Copy embedded in a space with larger cutoffs.
    pub fn embed(&self, cutoffs: &[usize]) -> Result<FockVector> {
        if cutoffs.len() != self.cutoffs.len() || cutoffs.iter().zip(&self.cutoffs).any(|(a, b)| a < b) {
            return Err(Error::InvalidArgument("embedding must not shrink the space".into()));
        }
        let mut out = FockVector {
            cutoffs: cutoffs.to_vec(),
            amps: vec![C64::new(0.0, 0.0); cutoffs.iter().product()],
            tail_mass: self.tail_mass,
        };
        for (o, &a) in self.amps.iter().enumerate() {
            let n = self.unravel(o);
            let t = out.offset(&n).expect("embedded index");
            out.amps[t] = a;
        }
        Ok(out)
    }

    /// `a_j|ψ⟩`, exact within the stored space.
    pub fn annihilate(&self, mode: usize) -> Result<FockVector> {
        self.ladder(mode, false)
    }

    /// `a_j†|ψ⟩` after widening mode `j` by one level, so nothing is lost.
    pub fn create(&self, mode: usize) -> Result<FockVector> {
        let mut wider = self.cutoffs.clone();
        if mode >= wider.len() {
            return Err(Error::IndexOutOfRange { index: mode, len: wider.len() });
        }
        wider[mode] += 1;
        self.embed(&wider)?.ladder(mode, true)
    }

    fn ladder(&self, mode: usize, raise: bool) -> Result<FockVector> {
        if mode >= self.modes() {
            return Err(Error::IndexOutOfRange { index: mode, len: self.modes() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (o, &a) in self.amps.iter().enumerate() {
            let mut n = self.unravel(o);
            let k = n[mode];
            if raise {
                if k + 1 >= self.cutoffs[mode] {
                    continue;
                }
                n[mode] = k + 1;
                out[self.offset(&n).expect("in range")] += a * ((k + 1) as f64).sqrt();
            } else if k > 0 {
                n[mode] = k - 1;
                out[self.offset(&n).expect("in range")] += a * (k as f64).sqrt();
            }
        }
        Ok(FockVector { cutoffs: self.cutoffs.clone(), amps: out, tail_mass: self.tail_mass })
    }

    fn scaled_sum(&self, a: C64, other: &FockVector, b: C64) -> FockVector {
        let amps = self.amps.iter().zip(&other.amps).map(|(x, y)| a * x + b * y).collect();
        FockVector { cutoffs: self.cutoffs.clone(), amps, tail_mass: self.tail_mass }
    }
}

fn check_tail(v: FockVector, tol: f64) -> Result<FockVector> {
    if v.tail_mass > tol {
        Err(Error::TruncationFailure { tail_mass: v.tail_mass })
    } else {
        Ok(v)
    }
}

/// `e^{−|α|²/2} αⁿ/√n!` for `n < cutoff`, without the tail check.
fn coherent_amplitudes(alpha: C64, cutoff: usize) -> Vec<C64> {
    (0..cutoff)
        .map(|n| {
            if alpha.norm() == 0.0 {
                return if n == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            }
            let ln_mag = -0.5 * alpha.norm_sqr() + n as f64 * alpha.norm().ln() - 0.5 * ln_factorial(n);
            C64::from_polar(ln_mag.exp(), n as f64 * alpha.arg())
        })
        .collect()
}

fn product_state(alpha: &[C64], cutoff: usize) -> Result<FockVector> {
    if alpha.is_empty() || cutoff == 0 {
        return Err(Error::InvalidArgument("need at least one mode and a positive cutoff".into()));
    }
    let mut v = FockVector::new(vec![cutoff], coherent_amplitudes(alpha[0], cutoff))?;
    for &a in &alpha[1..] {
        v = v.tensor(&FockVector::new(vec![cutoff], coherent_amplitudes(a, cutoff))?);
    }
    Ok(v)
}

/// Multimode coherent state `|α₁ … α_N⟩` with `cutoff` levels per mode.
pub fn coherent_vector(alpha: &[C64], cutoff: usize) -> Result<FockVector> {
    check_tail(product_state(alpha, cutoff)?, COHERENT_TAIL_TOL)
}

/// `N_±(|A⟩ ± |−A⟩)` with `N_± = [2(1 ± e^{−2|A|²})]^{−1/2}`.
pub fn cat_vector(alpha: &[C64], parity: Parity, cutoff: usize) -> Result<FockVector> {
    let plus = product_state(alpha, cutoff)?;
    let neg: Vec<C64> = alpha.iter().map(|a| -a).collect();
    let minus = product_state(&neg, cutoff)?;
    let a2: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let overlap = 1.0 + sign * (-2.0 * a2).exp();
    if overlap <= 0.0 {
        return Err(Error::OddCatAtOrigin);
    }
    let norm = C64::new((2.0 * overlap).powf(-0.5), 0.0);
    let v = plus.scaled_sum(norm, &minus, norm * sign);
    let mass = v.norm_sqr();
    check_tail(FockVector { tail_mass: (1.0 - mass).max(0.0), ..v }, COHERENT_TAIL_TOL)
}

fn padded_dim(cutoff: usize) -> usize {
    (2 * cutoff).max(cutoff + 60)
}

fn lowering(dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
}

/// `D(α) S(ζ)|0⟩` with `S(ζ) = exp[½(ζ* a² − ζ a†²)]`, built by exponentiating
/// the truncated generators in a padded space and keeping `cutoff` levels.
pub fn squeezed_vector(zeta: C64, alpha: C64, cutoff: usize) -> Result<FockVector> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff must be positive".into()));
    }
    let dim = padded_dim(cutoff);
    let a = lowering(dim);
    let ad = a.adjoint();
    let squeeze = ((&a * &a).map(|x| x * zeta.conj()) - (&ad * &ad).map(|x| x * zeta)).map(|x| 0.5 * x).exp();
    let displace = (ad.map(|x| x * alpha) - a.map(|x| x * alpha.conj())).exp();
    let state = displace * squeeze.column(0);
    let amps: Vec<C64> = state.iter().take(cutoff).copied().collect();
    check_tail(FockVector::new(vec![cutoff], amps)?, SQUEEZED_TAIL_TOL)
}

/// Single-mode density matrix `ρ_{mn}` on `cutoff` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    rho: DMatrix<C64>,
}

impl FockDensity {
    pub fn new(rho: DMatrix<C64>) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: rho.nrows(), found: rho.ncols() });
        }
        Ok(FockDensity { rho })
    }

    pub fn from_vector(v: &FockVector) -> Result<Self> {
        if v.modes() != 1 {
            return Err(Error::UnsupportedModes { modes: v.modes(), max: 1 });
        }
        let c = v.cutoffs[0];
        Ok(FockDensity { rho: DMatrix::from_fn(c, c, |m, n| v.amps[m] * v.amps[n].conj()) })
    }

    pub fn cutoff(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        (0..self.cutoff()).map(|n| self.rho[(n, n)].re).sum()
    }

    pub fn distribution(&self) -> Vec<f64> {
        (0..self.cutoff()).map(|n| self.rho[(n, n)].re).collect()
    }

    /// `⟨β|ρ|β⟩` by direct double summation.
    pub fn q_overlap(&self, beta: C64) -> f64 {
        let bra = coherent_amplitudes(beta, self.cutoff());
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..self.cutoff() {
            for n in 0..self.cutoff() {
                acc += bra[m].conj() * self.rho[(m, n)] * bra[n];
            }
        }
        acc.re
    }

    /// Single-mode moments from `Tr(ρ X)` with truncated operators in a space
    /// one level larger than `ρ`.
    pub fn moments(&self) -> FockMoments {
        let c = self.cutoff();
        let d = c + 1;
        let mut rho = DMatrix::zeros(d, d);
        rho.view_mut((0, 0), (c, c)).copy_from(&self.rho);
        let a = lowering(d);
        let ad = a.adjoint();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = (&a + &ad).map(|x| x * s);
        let p = (&a - &ad).map(|x| x * s / C64::i());
        let tr = |x: &DMatrix<C64>| (&rho * x).trace().re;
        let ops = [p, q];
        let mut quad_mean = RVector::zeros(2);
        let mut quad_cov = RMatrix::zeros(2, 2);
        for j in 0..2 {
            quad_mean[j] = tr(&ops[j]);
        }
        for j in 0..2 {
            for k in 0..2 {
                let sym = (&ops[j] * &ops[k] + &ops[k] * &ops[j]).map(|x| 0.5 * x);
                quad_cov[(j, k)] = tr(&sym) - quad_mean[j] * quad_mean[k];
            }
        }
        let probs = self.distribution();
        let mean_n: f64 = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        let second: f64 = probs.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum();
        FockMoments {
            mean_n: vec![mean_n],
            number_cov: RMatrix::from_element(1, 1, second - mean_n * mean_n),
            quad_mean,
            quad_cov,
        }
    }
}

/// Thermal state with mean occupation `nbar`, `ρ_nn = n̄ⁿ/(n̄ + 1)^{n+1}`.
pub fn thermal_density(nbar: f64, cutoff: usize) -> Result<FockDensity> {
    if nbar < 0.0 || cutoff == 0 {
        return Err(Error::InvalidArgument("thermal state needs nbar ≥ 0 and a positive cutoff".into()));
    }
    let ratio = nbar / (nbar + 1.0);
    let diag: Vec<C64> = (0..cutoff).map(|n| C64::new(ratio.powi(n as i32) / (nbar + 1.0), 0.0)).collect();
    FockDensity::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
}

/// Means and covariances in the `(p₁…p_N, q₁…q_N)` ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMoments {
    pub mean_n: Vec<f64>,
    /// `Cov(n_i, n_k)`.
    pub number_cov: RMatrix,
    pub quad_mean: RVector,
    /// Symmetrized covariance `½⟨ΔQᵢΔQ_k + ΔQ_kΔQᵢ⟩`.
    pub quad_cov: RMatrix,
}

/// `|⟨n|ψ⟩|²` for every stored `n`, in storage order.
pub fn distribution(v: &FockVector) -> Vec<(Vec<usize>, f64)> {
    v.iter().map(|(n, a)| (n, a.norm_sqr())).collect()
}

/// Moments of a pure state via `q̂ψ` and `p̂ψ` computed in a widened space.
pub fn moments(v: &FockVector) -> Result<FockMoments> {
    let modes = v.modes();
    let wider: Vec<usize> = v.cutoffs.iter().map(|c| c + 1).collect();
    let psi = v.embed(&wider)?;
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut applied = Vec::with_capacity(2 * modes);
    // p̂ = (a − a†)/(i√2) first, then q̂ = (a + a†)/√2
    for j in 0..modes {
        let lo = psi.annihilate(j)?;
        let hi = psi.ladder(j, true)?;
        applied.push(lo.scaled_sum(s / C64::i(), &hi, -s / C64::i()));
    }
    for j in 0..modes {
        let lo = psi.annihilate(j)?;
        let hi = psi.ladder(j, true)?;
        applied.push(lo.scaled_sum(s, &hi, s));
    }
    let mut quad_mean = RVector::zeros(2 * modes);
    for j in 0..2 * modes {
        quad_mean[j] = psi.inner(&applied[j])?.re;
    }
    let mut quad_cov = RMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..2 * modes {
        for k in 0..2 * modes {
            quad_cov[(j, k)] = applied[j].inner(&applied[k])?.re - quad_mean[j] * quad_mean[k];
        }
    }
    let mut mean_n = vec![0.0; modes];
    let mut second = RMatrix::zeros(modes, modes);
    for (n, a) in v.iter() {
        let p = a.norm_sqr();
        for i in 0..modes {
            mean_n[i] += n[i] as f64 * p;
            for k in 0..modes {
                second[(i, k)] += (n[i] * n[k]) as f64 * p;
            }
        }
    }
    let number_cov = RMatrix::from_fn(modes, modes, |i, k| second[(i, k)] - mean_n[i] * mean_n[k]);
    Ok(FockMoments { mean_n, number_cov, quad_mean, quad_cov })
}

/// `|⟨β|ψ⟩|²` with `⟨β|n⟩ = e^{−|β|²/2} β*ⁿ/√n!` per mode.
pub fn q_overlap(v: &FockVector, beta: &[C64]) -> Result<f64> {
    if beta.len() != v.modes() {
        return Err(Error::DimensionMismatch { expected: v.modes(), found: beta.len() });
    }
    let kets: Vec<Vec<C64>> = beta.iter().zip(&v.cutoffs).map(|(&b, &c)| coherent_amplitudes(b, c)).collect();
    let mut acc = C64::new(0.0, 0.0);
    for (n, a) in v.iter() {
        let mut w = a;
        for (j, &k) in n.iter().enumerate() {
            w *= kets[j][k].conj();
        }
        acc += w;
    }
    Ok(acc.norm_sqr())
}

/// `ψ(x) = Σ_n c_n ∏ⱼ φ_{nⱼ}(xⱼ)` at one point.
pub fn position_amplitude(v: &FockVector, x: &[f64]) -> Result<C64> {
    if x.len() != v.modes() {
        return Err(Error::DimensionMismatch { expected: v.modes(), found: x.len() });
    }
    let phis: Vec<Vec<f64>> = x.iter().zip(&v.cutoffs).map(|(&xj, &c)| oscillator_eigenfunctions(c - 1, xj)).collect();
    Ok(v.iter()
        .map(|(n, a)| a * n.iter().enumerate().map(|(j, &k)| phis[j][k]).product::<f64>())
        .sum())
}

/// Single-mode position wave function sampled on `xs`.
pub fn position_wave(v: &FockVector, xs: &[f64]) -> Result<Vec<C64>> {
    if v.modes() != 1 {
        return Err(Error::UnsupportedModes { modes: v.modes(), max: 1 });
    }
    xs.iter().map(|&x| position_amplitude(v, &[x])).collect()
}
