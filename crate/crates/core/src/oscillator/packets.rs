use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::trajectory::{EpsilonTrajectory, Instant};
use crate::cat_states::{normalization, CatState, Parity};
use crate::error::{Error, Result};

impl Instant {
    /// `ln Ψ₀ = −¼ ln π − ½ ln ε + iε̇x²/(2ε)`.
    fn ln_ground(&self, x: f64) -> C64 {
        let ln_sqrt_eps = C64::new(self.eps.norm().ln() / 2.0, self.arg / 2.0);
        -0.25 * std::f64::consts::PI.ln() - ln_sqrt_eps + C64::i() * self.eps_dot * x * x / (2.0 * self.eps)
    }

    /// Exponent shared by the coherent and cat packets:
    /// `−|α|²/2 − α²ε*/(2ε)`.
    fn ln_alpha(&self, alpha: C64) -> C64 {
        -alpha.norm_sqr() / 2.0 - alpha * alpha * self.eps.conj() / (2.0 * self.eps)
    }

    /// `Ψ_α(x, t) = Ψ₀ exp{−|α|²/2 − α²ε*/(2ε) + √2αx/ε}`.
    pub fn coherent(&self, alpha: C64, x: f64) -> Result<C64> {
        self.check_caustic()?;
        let lin = std::f64::consts::SQRT_2 * alpha * x / self.eps;
        Ok((self.ln_ground(x) + self.ln_alpha(alpha) + lin).exp())
    }

    /// `Ψ_± = 2N_± Ψ₀ exp{−|α|²/2 − α²ε*/(2ε)}·{cosh, sinh}(√2αx/ε)`.
    pub fn cat(&self, alpha: C64, parity: Parity, x: f64) -> Result<C64> {
        self.check_caustic()?;
        if parity == Parity::Odd && alpha.norm() == 0.0 {
            return Err(Error::OddCatAtOrigin);
        }
        let n = normalization(&CatState::new(vec![alpha], parity)?);
        let lin = std::f64::consts::SQRT_2 * alpha * x / self.eps;
        let base = self.ln_ground(x) + self.ln_alpha(alpha);
        // 2·{cosh, sinh}(z) = e^z ± e^{−z}
        let sign = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        Ok(n * ((base + lin).exp() + sign * (base - lin).exp()))
    }
}

/// `Ψ_α(x, t)` on the packet family carried by `traj`.
pub fn coherent_packet(alpha: C64, traj: &EpsilonTrajectory, t: f64, x: f64) -> Result<C64> {
    traj.at(t)?.coherent(alpha, x)
}

/// Even (`cosh`) or odd (`sinh`) cat packet.
pub fn cat_packet(alpha: C64, parity: Parity, traj: &EpsilonTrajectory, t: f64, x: f64) -> Result<C64> {
    traj.at(t)?.cat(alpha, parity, x)
}

/// Spectral derivative of periodic samples with spacing `h`.
fn derivative(psi: &[C64], h: f64) -> Vec<C64> {
    let n = psi.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = psi.to_vec();
    fwd.process(&mut buf);
    let dk = std::f64::consts::TAU / (n as f64 * h);
    for (j, v) in buf.iter_mut().enumerate() {
        let k = if 2 * j < n {
            j as f64
        } else if 2 * j == n {
            0.0
        } else {
            j as f64 - n as f64
        };
        *v *= C64::new(0.0, k * dk) / n as f64;
    }
    inv.process(&mut buf);
    buf
}

fn uniform_step(xs: &[f64], len: usize) -> Result<f64> {
    if xs.len() != len || xs.len() < 4 {
        return Err(Error::InvalidArgument("need matching x and ψ samples, at least 4".into()));
    }
    let h = xs[1] - xs[0];
    if !(h > 0.0) || xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return Err(Error::InvalidArgument("x samples must be uniformly increasing".into()));
    }
    Ok(h)
}

/// `Â ψ` for the integral of motion `Â = (i/√2)(ε p̂ − ε̇ x)`, `p̂ = −i d/dx`,
/// with a spectral derivative on the uniform grid `xs`.
pub fn apply_invariant(state: &Instant, xs: &[f64], psi: &[C64]) -> Result<Vec<C64>> {
    let h = uniform_step(xs, psi.len())?;
    let d = derivative(psi, h);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(xs
        .iter()
        .zip(psi.iter().zip(&d))
        .map(|(&x, (&p, &dp))| s * (state.eps * dp - C64::i() * state.eps_dot * x * p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{solve_epsilon, FrequencyProfile};

    #[test]
    fn ground_state_at_origin() {
        let tr = solve_epsilon(&FrequencyProfile::Constant, 1.0, 0.01).unwrap();
        for x in [-1.3, 0.0, 0.7] {
            let v = coherent_packet(C64::new(0.0, 0.0), &tr, 0.0, x).unwrap();
            assert!((v.norm_sqr() - std::f64::consts::PI.powf(-0.5) * (-x * x).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn cat_parity_and_node() {
        let tr = solve_epsilon(&FrequencyProfile::Step { t0: 0.5, omega_sq_after: 3.0 }, 2.0, 0.001).unwrap();
        let a = C64::new(0.8, 0.4);
        for x in [0.3, 1.1] {
            let o1 = cat_packet(a, Parity::Odd, &tr, 1.7, x).unwrap();
            let o2 = cat_packet(a, Parity::Odd, &tr, 1.7, -x).unwrap();
            assert!((o1 + o2).norm() < 1e-14);
            let e1 = cat_packet(a, Parity::Even, &tr, 1.7, x).unwrap();
            let e2 = cat_packet(a, Parity::Even, &tr, 1.7, -x).unwrap();
            assert!((e1 - e2).norm() < 1e-14);
        }
        assert_eq!(cat_packet(a, Parity::Odd, &tr, 1.3, 0.0).unwrap(), C64::new(0.0, 0.0));
        assert!(matches!(cat_packet(C64::new(0.0, 0.0), Parity::Odd, &tr, 1.0, 0.2), Err(Error::OddCatAtOrigin)));
    }

    #[test]
    fn derivative_of_gaussian() {
        let n = 128;
        let xs: Vec<f64> = (0..n).map(|i| -8.0 + 16.0 * i as f64 / n as f64).collect();
        let psi: Vec<C64> = xs.iter().map(|&x| C64::new((-x * x).exp(), 0.0)).collect();
        let d = derivative(&psi, xs[1] - xs[0]);
        for (x, v) in xs.iter().zip(d) {
            assert!((v.re + 2.0 * x * (-x * x).exp()).abs() < 1e-12);
        }
    }
}
