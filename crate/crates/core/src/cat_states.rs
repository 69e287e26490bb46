//! Multimode even and odd coherent states `|A±⟩ = N±(|A⟩ ± |−A⟩)`.
//!
//! Mode indices are 0-based. Hyperbolic functions of `|A|²` are evaluated in
//! log space so large amplitudes do not overflow.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::{CMatrix, RMatrix};
use crate::multi_hermite::{ln_factorial, MultiIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Whether a total photon number is allowed.
    pub fn admits(self, total: usize) -> bool {
        (total % 2 == 0) == (self == Parity::Even)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CatStateDoc", into = "CatStateDoc")]
pub struct CatState {
    alpha: Vec<C64>,
    parity: Parity,
}

/// Serialized form `{"alpha": [[re, im], …], "parity": "even" | "odd"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatStateDoc {
    pub alpha: Vec<[f64; 2]>,
    pub parity: Parity,
}

impl TryFrom<CatStateDoc> for CatState {
    type Error = Error;

    fn try_from(doc: CatStateDoc) -> Result<Self> {
        CatState::new(doc.alpha.iter().map(|&[re, im]| C64::new(re, im)).collect(), doc.parity)
    }
}

impl From<CatState> for CatStateDoc {
    fn from(s: CatState) -> Self {
        CatStateDoc { alpha: s.alpha.iter().map(|a| [a.re, a.im]).collect(), parity: s.parity }
    }
}

fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
}

fn ln_sinh(x: f64) -> f64 {
    // x > 0
    if x < 1e-3 {
        x.ln() + (x * x / 6.0).ln_1p()
    } else {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// `ln(|cosh w|²)` or `ln(|sinh w|²)` for complex `w`.
fn ln_abs_sq(w: C64, parity: Parity) -> f64 {
    // |cosh w|² = (cosh 2u + cos 2v)/2, |sinh w|² = (cosh 2u − cos 2v)/2
    let u = w.re.abs();
    let c = (2.0 * w.im).cos() * parity.sign();
    let e = (-2.0 * u).exp();
    let inner = 1.0 + e * e + 2.0 * c * e;
    if inner > 1e-8 {
        2.0 * u - 2.0 * std::f64::consts::LN_2 + inner.ln()
    } else {
        // near a zero of sinh
        let direct = match parity {
            Parity::Even => w.cosh().norm_sqr(),
            Parity::Odd => w.sinh().norm_sqr(),
        };
        direct.ln()
    }
}

impl CatState {
    /// Odd states need `|A|² > 0`.
    pub fn new(alpha: Vec<C64>, parity: Parity) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidArgument("cat state needs at least one mode".into()));
        }
        if alpha.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("amplitudes must be finite".into()));
        }
        let state = CatState { alpha, parity };
        if parity == Parity::Odd && state.amplitude_sq() == 0.0 {
            return Err(Error::OddCatAtOrigin);
        }
        Ok(state)
    }

    pub fn even(alpha: Vec<C64>) -> Result<Self> {
        Self::new(alpha, Parity::Even)
    }

    pub fn odd(alpha: Vec<C64>) -> Result<Self> {
        Self::new(alpha, Parity::Odd)
    }

    pub fn alpha(&self) -> &[C64] {
        &self.alpha
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn modes(&self) -> usize {
        self.alpha.len()
    }

    /// `|A|² = Σ|αᵢ|²`.
    pub fn amplitude_sq(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `ln cosh|A|²` (even) or `ln sinh|A|²` (odd).
    pub(crate) fn ln_hyper(&self) -> f64 {
        let x = self.amplitude_sq();
        match self.parity {
            Parity::Even => ln_cosh(x),
            Parity::Odd => ln_sinh(x),
        }
    }

    /// `tanh|A|²` (even) or `coth|A|²` (odd).
    fn ratio(&self) -> f64 {
        let x = self.amplitude_sq();
        match self.parity {
            Parity::Even => x.tanh(),
            Parity::Odd => 1.0 / x.tanh(),
        }
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i >= self.modes() {
            return Err(Error::IndexOutOfRange { index: i, len: self.modes() });
        }
        Ok(())
    }

    fn check_index(&self, n: &MultiIndex) -> Result<()> {
        if n.dim() != self.modes() {
            return Err(Error::DimensionMismatch { expected: self.modes(), found: n.dim() });
        }
        Ok(())
    }
}

/// `N₊ = e^{|A|²/2}/(2√cosh|A|²)`, `N₋ = e^{|A|²/2}/(2√sinh|A|²)`.
pub fn normalization(state: &CatState) -> f64 {
    (0.5 * state.amplitude_sq() - std::f64::consts::LN_2 - 0.5 * state.ln_hyper()).exp()
}

/// `⟨n|A±⟩ = ∏ αᵢ^{nᵢ}/√(nᵢ!) / √cosh|A|²` (resp. `sinh`) on the allowed
/// parity sector, exactly zero on the other.
pub fn fock_amplitude(state: &CatState, n: &MultiIndex) -> Result<C64> {
    state.check_index(n)?;
    if !state.parity.admits(n.total()) {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut ln_mag = -0.5 * state.ln_hyper();
    let mut phase = 0.0;
    for (a, &k) in state.alpha.iter().zip(n.entries()) {
        if k == 0 {
            continue;
        }
        if a.norm() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        ln_mag += k as f64 * a.norm().ln() - 0.5 * ln_factorial(k);
        phase += k as f64 * a.arg();
    }
    Ok(C64::from_polar(ln_mag.exp(), phase))
}

/// `aᵢ|A₊⟩ = αᵢ√tanh|A|² |A₋⟩` and `aᵢ|A₋⟩ = αᵢ√coth|A|² |A₊⟩`.
pub fn apply_annihilation(state: &CatState, i: usize) -> Result<(C64, CatState)> {
    state.check_mode(i)?;
    if state.amplitude_sq() == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    let out = CatState { alpha: state.alpha.clone(), parity: state.parity.flip() };
    Ok((state.alpha[i] * state.ratio().sqrt(), out))
}

/// `P±(n) = ∏|αᵢ|^{2nᵢ}/nᵢ! / cosh|A|²` (resp. `sinh`) on the allowed sector.
pub fn photon_distribution(state: &CatState, n: &MultiIndex) -> Result<f64> {
    Ok(fock_amplitude(state, n)?.norm_sqr())
}

/// Dispersion matrix in the `(p, q)` ordering, assembled from
/// `⟨aᵢa_k⟩ = αᵢα_k` and `½⟨aᵢ†a_k + a_k aᵢ†⟩ = αᵢ*α_k t + ½δᵢₖ` with
/// `t = tanh|A|²` (even) or `coth|A|²` (odd). All first moments vanish.
pub fn quadrature_covariance(state: &CatState) -> RMatrix {
    let n = state.modes();
    let t = state.ratio();
    let a = &state.alpha;
    let g = CMatrix::from_fn(n, n, |i, k| a[i] * a[k]);
    let s = CMatrix::from_fn(n, n, |i, k| a[i].conj() * a[k] * t + if i == k { 0.5 } else { 0.0 });
    let zeros = vec![C64::new(0.0, 0.0); n];
    GaussianState::from_ladder_moments(&zeros, &g, &s).disp().clone()
}

/// `⟨nᵢ⟩ = |αᵢ|² tanh|A|²` (even) or `|αᵢ|² coth|A|²` (odd).
pub fn mean_photon(state: &CatState, i: usize) -> Result<f64> {
    state.check_mode(i)?;
    let x = state.amplitude_sq();
    let ai = state.alpha[i].norm_sqr();
    if state.parity == Parity::Odd && x < 1e-8 {
        // x coth x → 1 without cancellation
        return Ok(ai / x * (x / x.tanh()));
    }
    Ok(ai * state.ratio())
}

/// `Cov(nᵢ, n_k) = |αᵢ|²|α_k|²(1 − t²) + δᵢₖ|αᵢ|² t`, i.e. `sech²` for even and
/// `−csch²` for odd states.
pub fn number_covariance(state: &CatState, i: usize, k: usize) -> Result<f64> {
    state.check_mode(i)?;
    state.check_mode(k)?;
    let x = state.amplitude_sq();
    let bracket = match state.parity {
        Parity::Even => 1.0 / x.cosh().powi(2),
        Parity::Odd => -1.0 / x.sinh().powi(2),
    };
    let ai = state.alpha[i].norm_sqr();
    let ak = state.alpha[k].norm_sqr();
    let diag = if i == k { mean_photon(state, i)? } else { 0.0 };
    Ok(ai * ak * bracket + diag)
}

/// `Q±(β) = e^{−|β|²} |cosh(A·β*)|² / cosh|A|²` (resp. `sinh`).
pub fn q_function(state: &CatState, beta: &[C64]) -> Result<f64> {
    if beta.len() != state.modes() {
        return Err(Error::DimensionMismatch { expected: state.modes(), found: beta.len() });
    }
    let w: C64 = state.alpha.iter().zip(beta).map(|(a, b)| a * b.conj()).sum();
    if state.parity == Parity::Odd && w.norm() == 0.0 {
        return Ok(0.0);
    }
    let b2: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
    Ok((-b2 + ln_abs_sq(w, state.parity) - state.ln_hyper()).exp())
}

fn dyad_exponent(a: &[C64], b: &[C64], p: &[f64], q: &[f64]) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut e = C64::new(0.0, 0.0);
    for j in 0..a.len() {
        let z = C64::new(q[j], p[j]) * s;
        e += -2.0 * z * z.conj() + 2.0 * a[j] * z.conj() + 2.0 * b[j].conj() * z - a[j] * b[j].conj()
            - 0.5 * a[j].norm_sqr()
            - 0.5 * b[j].norm_sqr();
    }
    e
}

fn check_point(n: usize, p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != n || q.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.len().max(q.len()) });
    }
    Ok(())
}

/// Wigner symbol of `|A⟩⟨B|`:
/// `2^N exp[−2Z·Z* + 2A·Z* + 2B*·Z − A·B* − |A|²/2 − |B|²/2]`, `Z = (q + ip)/√2`.
pub fn wigner_dyad(a: &[C64], b: &[C64], p: &[f64], q: &[f64]) -> Result<C64> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    check_point(n, p, q)?;
    Ok((dyad_exponent(a, b, p, q) + n as f64 * std::f64::consts::LN_2).exp())
}

/// `W± = |N±|² [W_{A,A} + W_{−A,−A} ± 2 Re W_{A,−A}]`, normalized so that
/// `∫W dp dq/(2π)^N = 1`.
pub fn wigner_function(state: &CatState, p: &[f64], q: &[f64]) -> Result<f64> {
    let n = state.modes();
    check_point(n, p, q)?;
    let a = &state.alpha;
    let neg: Vec<C64> = a.iter().map(|x| -x).collect();
    // ln(|N|² 2^N)
    let ln_pref = state.amplitude_sq() - 2.0 * std::f64::consts::LN_2 - state.ln_hyper()
        + n as f64 * std::f64::consts::LN_2;
    let term = |e: C64| (e.re + ln_pref).exp() * e.im.cos();
    let direct = term(dyad_exponent(a, a, p, q)) + term(dyad_exponent(&neg, &neg, p, q));
    let cross = 2.0 * term(dyad_exponent(a, &neg, p, q));
    Ok(direct + state.parity.sign() * cross)
}

/// Position wave function `N_±(φ_A(x) ± φ_{−A}(x))` with the coherent factors
/// `φ_α(x) = π^{−1/4} exp(−x²/2 + √2αx − α²/2 − |α|²/2)` per mode.
pub fn wave_function(state: &CatState, x: &[f64]) -> Result<C64> {
    if x.len() != state.modes() {
        return Err(Error::DimensionMismatch { expected: state.modes(), found: x.len() });
    }
    let ln_phi = |sign: f64| -> C64 {
        state
            .alpha
            .iter()
            .zip(x)
            .map(|(&a, &xi)| {
                let a = a * sign;
                -0.25 * std::f64::consts::PI.ln() - xi * xi / 2.0 + std::f64::consts::SQRT_2 * a * xi
                    - a * a / 2.0
                    - a.norm_sqr() / 2.0
            })
            .sum()
    };
    Ok(normalization(state) * (ln_phi(1.0).exp() + state.parity.sign() * ln_phi(-1.0).exp()))
}

/// Two-mode total photon distribution `P(n₁ + n₂ = k) = |A|^{2k}/(k! cosh|A|²)`
/// (resp. `sinh`) on the allowed parity, zero otherwise.
pub fn total_photon_distribution(state: &CatState, k: usize) -> Result<f64> {
    if state.modes() != 2 {
        return Err(Error::UnsupportedModes { modes: state.modes(), max: 2 });
    }
    if !state.parity.admits(k) {
        return Ok(0.0);
    }
    let x = state.amplitude_sq();
    if x == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    Ok((k as f64 * x.ln() - ln_factorial(k) - state.ln_hyper()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Super,
    Sub,
    Poissonian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mandel {
    pub statistics: Statistics,
    /// `Q = (Var nᵢ − ⟨nᵢ⟩)/⟨nᵢ⟩`.
    pub q_value: f64,
}

pub const MANDEL_DEAD_BAND: f64 = 1e-12;

/// Classifies `Q` by sign with a dead band of [`MANDEL_DEAD_BAND`].
pub fn classify_mandel(q_value: f64) -> Statistics {
    if q_value > MANDEL_DEAD_BAND {
        Statistics::Super
    } else if q_value < -MANDEL_DEAD_BAND {
        Statistics::Sub
    } else {
        Statistics::Poissonian
    }
}

pub fn mandel_classification(state: &CatState, i: usize) -> Result<Mandel> {
    let mean = mean_photon(state, i)?;
    if mean == 0.0 {
        return Err(Error::ZeroMeanPhoton { mode: i });
    }
    let q_value = (number_covariance(state, i, i)? - mean) / mean;
    Ok(Mandel { statistics: classify_mandel(q_value), q_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn normalization_examples() {
        assert_relative_eq!(normalization(&CatState::even(vec![c(0.0)]).unwrap()), 0.5, epsilon = 1e-15);
        assert!(matches!(CatState::odd(vec![c(0.0)]), Err(Error::OddCatAtOrigin)));
        let n = normalization(&CatState::even(vec![c(1.0)]).unwrap());
        assert_relative_eq!(n, 0.5f64.exp() / (2.0 * 1f64.cosh().sqrt()), epsilon = 1e-15);
        assert_relative_eq!(n, 0.663625, epsilon = 1e-6);
    }

    #[test]
    fn amplitude_examples() {
        let a = C64::new(0.8, 0.3);
        let even = CatState::even(vec![a]).unwrap();
        let odd = CatState::odd(vec![a]).unwrap();
        let damp = (-a.norm_sqr() / 2.0).exp();
        assert_eq!(fock_amplitude(&even, &vec![3].into()).unwrap(), C64::new(0.0, 0.0));
        assert_relative_eq!(fock_amplitude(&even, &vec![0].into()).unwrap().re, 2.0 * normalization(&even) * damp, epsilon = 1e-14);
        let one = fock_amplitude(&odd, &vec![1].into()).unwrap();
        assert!((one - a * 2.0 * normalization(&odd) * damp).norm() < 1e-14);
    }

    #[test]
    fn annihilation_scales() {
        let (s, out) = apply_annihilation(&CatState::even(vec![c(1.0)]).unwrap(), 0).unwrap();
        assert_relative_eq!(s.re, 1f64.tanh().sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s.re, 0.872694, epsilon = 1e-6);
        assert_eq!(out.parity(), Parity::Odd);
        let (s2, out2) = apply_annihilation(&out, 0).unwrap();
        assert_relative_eq!(s2.re, 1.145877, epsilon = 1e-6);
        assert_eq!(out2.parity(), Parity::Even);
        assert_relative_eq!((s * s2).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn distribution_examples() {
        let even = CatState::even(vec![c(1.0)]).unwrap();
        assert_eq!(photon_distribution(&even, &vec![1].into()).unwrap(), 0.0);
        let two = CatState::even(vec![c(1.0), c(1.0)]).unwrap();
        assert_relative_eq!(photon_distribution(&two, &vec![1, 1].into()).unwrap(), 1.0 / 2f64.cosh(), epsilon = 1e-15);
        let odd = CatState::odd(vec![c(1.0)]).unwrap();
        assert_relative_eq!(photon_distribution(&odd, &vec![1].into()).unwrap(), 1.0 / 1f64.sinh(), epsilon = 1e-15);
    }

    #[test]
    fn covariance_examples() {
        let tiny = CatState::even(vec![c(1e-9)]).unwrap();
        assert!((quadrature_covariance(&tiny) - RMatrix::identity(2, 2) * 0.5).abs().max() < 1e-15);
        let odd = CatState::odd(vec![c(1.0)]).unwrap();
        let m = quadrature_covariance(&odd);
        // σ_qq = Re G + Re S, σ_pp = −Re G + Re S with S₁₁ = coth 1 + ½
        let s = 1.0 / 1f64.tanh() + 0.5;
        assert_relative_eq!(m[(1, 1)], 1.0 + s, epsilon = 1e-14);
        assert_relative_eq!(m[(0, 0)], -1.0 + s, epsilon = 1e-14);
    }

    #[test]
    fn mean_and_number_examples() {
        assert_relative_eq!(mean_photon(&CatState::even(vec![c(1.0)]).unwrap(), 0).unwrap(), 0.76159, epsilon = 1e-5);
        assert_relative_eq!(mean_photon(&CatState::odd(vec![c(1e-3)]).unwrap(), 0).unwrap(), 1.0, epsilon = 1e-6);
        assert_relative_eq!(mean_photon(&CatState::even(vec![c(5.0)]).unwrap(), 0).unwrap(), 25.0, epsilon = 1e-12);
        let var_even = number_covariance(&CatState::even(vec![c(1.0)]).unwrap(), 0, 0).unwrap();
        assert_relative_eq!(var_even, 1.181568, epsilon = 1e-6);
        let var_odd = number_covariance(&CatState::odd(vec![c(1.0)]).unwrap(), 0, 0).unwrap();
        assert_relative_eq!(var_odd, 0.588973, epsilon = 1e-6);
        let two = CatState::even(vec![c(1.0), c(1.0)]).unwrap();
        assert_relative_eq!(number_covariance(&two, 0, 1).unwrap(), 1.0 / 2f64.cosh().powi(2), epsilon = 1e-15);
    }

    #[test]
    fn q_examples() {
        let odd = CatState::odd(vec![C64::new(0.3, 0.9)]).unwrap();
        assert_eq!(q_function(&odd, &[c(0.0)]).unwrap(), 0.0);
        let even = CatState::even(vec![c(1.0)]).unwrap();
        assert_relative_eq!(q_function(&even, &[c(0.0)]).unwrap(), 0.64805, epsilon = 1e-5);
        assert_relative_eq!(q_function(&even, &[c(1.0)]).unwrap(), (-1.0f64).exp() * 1f64.cosh(), epsilon = 1e-14);
    }

    #[test]
    fn wigner_examples() {
        assert_relative_eq!(wigner_dyad(&[c(0.0)], &[c(0.0)], &[0.0], &[0.0]).unwrap().re, 2.0, epsilon = 1e-15);
        let a = C64::new(0.4, -0.6);
        let (p, q) = (0.3, -0.2);
        let z = C64::new(q, p) / std::f64::consts::SQRT_2;
        let w = wigner_dyad(&[a], &[a], &[p], &[q]).unwrap();
        assert!((w - 2.0 * (-2.0 * (z - a).norm_sqr()).exp()).norm() < 1e-14);
        for alpha in [0.1, 1.0, 3.0] {
            let odd = CatState::odd(vec![C64::from_polar(alpha, 0.7)]).unwrap();
            assert_relative_eq!(wigner_function(&odd, &[0.0], &[0.0]).unwrap(), -2.0, epsilon = 1e-10);
            let even = CatState::even(vec![C64::from_polar(alpha, 0.7)]).unwrap();
            assert_relative_eq!(wigner_function(&even, &[0.0], &[0.0]).unwrap(), 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn total_distribution_examples() {
        let two = CatState::even(vec![c(1.0), c(1.0)]).unwrap();
        assert_relative_eq!(total_photon_distribution(&two, 0).unwrap(), 0.26580, epsilon = 1e-5);
        assert_eq!(total_photon_distribution(&two, 3).unwrap(), 0.0);
        assert!(matches!(
            total_photon_distribution(&CatState::even(vec![c(1.0)]).unwrap(), 0),
            Err(Error::UnsupportedModes { .. })
        ));
    }

    #[test]
    fn mandel_examples() {
        let even = mandel_classification(&CatState::even(vec![c(1.0)]).unwrap(), 0).unwrap();
        assert_eq!(even.statistics, Statistics::Super);
        let odd = mandel_classification(&CatState::odd(vec![c(1.0)]).unwrap(), 0).unwrap();
        assert_eq!(odd.statistics, Statistics::Sub);
        assert_eq!(classify_mandel(0.0), Statistics::Poissonian);
        let two = CatState::even(vec![c(1.0), c(0.0)]).unwrap();
        assert!(matches!(mandel_classification(&two, 1), Err(Error::ZeroMeanPhoton { mode: 1 })));
    }

    #[test]
    fn json_shape() {
        let s = CatState::odd(vec![C64::new(1.0, -0.5)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"alpha":[[1.0,-0.5]],"parity":"odd"}"#);
        assert_eq!(serde_json::from_str::<CatState>(&text).unwrap(), s);
        assert!(serde_json::from_str::<CatState>(r#"{"alpha":[[0,0]],"parity":"odd"}"#).is_err());
        assert!(serde_json::from_str::<CatState>(r#"{"alpha":[[1,0]],"parity":"odd","x":1}"#).is_err());
    }
}
