use num_complex::Complex64 as C64;

use super::profile::FrequencyProfile;
use crate::error::{Error, Result};
use crate::format::float;
use crate::linalg::{RMatrix, RVector};
use crate::phase_space::LinearSymplecticMap;

/// Per-run Wronskian budget: `1e-9` up to `10⁴` steps, growing linearly after.
pub const WRONSKIAN_TOL: f64 = 1e-9;
const CAUSTIC_TOL: f64 = 1e-12;

/// `ε(t)` sampled on the integrator's time grid, from `ε(0) = 1`, `ε̇(0) = i`.
#[derive(Debug, Clone)]
pub struct EpsilonTrajectory {
    profile: FrequencyProfile,
    times: Vec<f64>,
    eps: Vec<C64>,
    eps_dot: Vec<C64>,
    // unwrapped arg ε, for a continuous ε^{−1/2}
    arg: Vec<f64>,
    budget: f64,
}

/// `(ε, ε̇)` at one instant, with the tracked phase of `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instant {
    pub t: f64,
    pub eps: C64,
    pub eps_dot: C64,
    pub arg: f64,
}

/// `σ_x = |ε|²/2`, `σ_p = |ε̇|²/2` and the correlation `r = Re(εε̇*)/(|ε||ε̇|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variances {
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub r: f64,
}

impl Variances {
    /// `σ_x σ_p (1 − r²)`, equal to ¼ for these packets.
    pub fn schroedinger_product(&self) -> f64 {
        self.sigma_x * self.sigma_p * (1.0 - self.r * self.r)
    }
}

fn rk4_step(profile: &FrequencyProfile, t: f64, h: f64, at: f64, y: (C64, C64)) -> (C64, C64) {
    let f = |s: f64, e: C64, d: C64| (d, -profile.omega_sq_piece(s, at) * e);
    let (e, d) = y;
    let k1 = f(t, e, d);
    let k2 = f(t + h / 2.0, e + k1.0 * (h / 2.0), d + k1.1 * (h / 2.0));
    let k3 = f(t + h / 2.0, e + k2.0 * (h / 2.0), d + k2.1 * (h / 2.0));
    let k4 = f(t + h, e + k3.0 * h, d + k3.1 * h);
    (
        e + (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0) * (h / 6.0),
        d + (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1) * (h / 6.0),
    )
}

fn unwrap_toward(prev: f64, z: C64) -> f64 {
    let tau = std::f64::consts::TAU;
    let a = z.arg();
    a + tau * ((prev - a) / tau).round()
}

/// `ε̇ε* − ε̇*ε`, equal to `2i` on exact trajectories.
pub fn wronskian(eps: C64, eps_dot: C64) -> C64 {
    eps_dot * eps.conj() - eps_dot.conj() * eps
}

/// Integrates `ε̈ + ω²(t)ε = 0` with fixed-step RK4. Steps never straddle a
/// profile breakpoint; each smooth piece gets `⌈length/dt⌉` equal steps.
pub fn solve_epsilon(profile: &FrequencyProfile, t_end: f64, dt: f64) -> Result<EpsilonTrajectory> {
    profile.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("need t_end > 0 and dt > 0, got {t_end}, {dt}")));
    }
    let mut cuts: Vec<f64> = profile.breakpoints().into_iter().filter(|&b| b > 0.0 && b < t_end).collect();
    cuts.push(t_end);
    let mut times = vec![0.0];
    let mut eps = vec![C64::new(1.0, 0.0)];
    let mut eps_dot = vec![C64::new(0.0, 1.0)];
    let mut arg = vec![0.0];
    let mut lo = 0.0;
    for hi in cuts {
        let n = ((hi - lo) / dt).ceil().max(1.0) as usize;
        let h = (hi - lo) / n as f64;
        let mid = 0.5 * (lo + hi);
        let mut y = (*eps.last().unwrap(), *eps_dot.last().unwrap());
        for k in 0..n {
            let t = lo + k as f64 * h;
            y = rk4_step(profile, t, h, mid, y);
            times.push(if k + 1 == n { hi } else { lo + (k + 1) as f64 * h });
            eps.push(y.0);
            eps_dot.push(y.1);
            arg.push(unwrap_toward(*arg.last().unwrap(), y.0));
        }
        lo = hi;
    }
    let steps = times.len() - 1;
    let budget = WRONSKIAN_TOL * (steps as f64 / 1e4).max(1.0);
    let traj = EpsilonTrajectory { profile: profile.clone(), times, eps, eps_dot, arg, budget };
    let drift = traj.max_wronskian_drift();
    if !(drift <= budget) {
        return Err(Error::WronskianDrift { drift, budget });
    }
    Ok(traj)
}

impl EpsilonTrajectory {
    pub fn profile(&self) -> &FrequencyProfile {
        &self.profile
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn eps(&self) -> &[C64] {
        &self.eps
    }

    pub fn eps_dot(&self) -> &[C64] {
        &self.eps_dot
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Drift budget this trajectory was accepted against.
    pub fn wronskian_budget(&self) -> f64 {
        self.budget
    }

    pub fn max_wronskian_drift(&self) -> f64 {
        self.eps
            .iter()
            .zip(&self.eps_dot)
            .map(|(&e, &d)| (wronskian(e, d) - C64::new(0.0, 2.0)).norm())
            .fold(0.0, f64::max)
    }

    pub fn sample(&self, k: usize) -> Instant {
        Instant { t: self.times[k], eps: self.eps[k], eps_dot: self.eps_dot[k], arg: self.arg[k] }
    }

    /// State at an arbitrary `t`, by one partial RK4 step from the sample below.
    pub fn at(&self, t: f64) -> Result<Instant> {
        let (start, end) = (0.0, self.t_end());
        if !(t >= start && t <= end) {
            return Err(Error::TimeOutOfRange { t, start, end });
        }
        let k = self.times.partition_point(|&s| s <= t) - 1;
        let s = self.times[k];
        if t == s {
            return Ok(self.sample(k));
        }
        let next = self.times[k + 1];
        let (e, d) = rk4_step(&self.profile, s, t - s, 0.5 * (s + next), (self.eps[k], self.eps_dot[k]));
        Ok(Instant { t, eps: e, eps_dot: d, arg: unwrap_toward(self.arg[k], e) })
    }

    /// One CSV row per sample: `t, Re ε, Im ε, Re ε̇, Im ε̇, σ_x, σ_p, r`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re_eps,im_eps,re_eps_dot,im_eps_dot,sigma_x,sigma_p,r\n");
        for k in 0..self.len() {
            let s = self.sample(k);
            let v = s.variances();
            let cols = [s.t, s.eps.re, s.eps.im, s.eps_dot.re, s.eps_dot.im, v.sigma_x, v.sigma_p, v.r];
            out.push_str(&cols.iter().map(|&x| float(x)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

impl Instant {
    pub fn wronskian(&self) -> C64 {
        wronskian(self.eps, self.eps_dot)
    }

    pub fn variances(&self) -> Variances {
        let (a, b) = (self.eps.norm(), self.eps_dot.norm());
        Variances { sigma_x: a * a / 2.0, sigma_p: b * b / 2.0, r: (self.eps * self.eps_dot.conj()).re / (a * b) }
    }

    /// `ε^{1/2}` on the branch continued from `ε(0)^{1/2} = 1`.
    pub fn sqrt_eps(&self) -> C64 {
        C64::from_polar(self.eps.norm().sqrt(), self.arg / 2.0)
    }

    pub(crate) fn check_caustic(&self) -> Result<()> {
        if self.eps.norm() < CAUSTIC_TOL {
            return Err(Error::Caustic { t: self.t });
        }
        Ok(())
    }

    /// Replacement map `(p, q) ↦ (p₀, q₀)`: the initial phase-space point
    /// expressed through the current one. With `q(t) = q₀ Re ε + p₀ Im ε` and
    /// `p(t) = q₀ Re ε̇ + p₀ Im ε̇`, `S = [[Re ε, −Re ε̇], [−Im ε, Im ε̇]]`.
    pub fn symplectic_map(&self) -> Result<LinearSymplecticMap> {
        let (e, d) = (self.eps, self.eps_dot);
        let s = RMatrix::from_row_slice(2, 2, &[e.re, -d.re, -e.im, d.im]);
        LinearSymplecticMap::new(s, RVector::zeros(2))
    }
}

/// Variances of the packets at time `t`.
pub fn variances(traj: &EpsilonTrajectory, t: f64) -> Result<Variances> {
    Ok(traj.at(t)?.variances())
}

/// Replacement map at time `t` for `evolve_wigner`.
pub fn symplectic_map(traj: &EpsilonTrajectory, t: f64) -> Result<LinearSymplecticMap> {
    let s = traj.at(t)?;
    let drift = (s.wronskian() - C64::new(0.0, 2.0)).norm();
    if !(drift <= traj.budget) {
        return Err(Error::WronskianDrift { drift, budget: traj.budget });
    }
    s.symplectic_map()
}
