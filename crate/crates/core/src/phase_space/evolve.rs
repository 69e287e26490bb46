//! Evolution by replacement: `W(X, t) = W(S X + shift, 0)` for quadratic
//! Hamiltonians, where `S X + shift` are the linear integrals of motion.
//!
//! Phase-space vectors are ordered `(p…, q…)`; grid axes are per mode
//! `(p₀, q₀, p₁, q₁, …)`. Resampling uses Keys cubic interpolation with
//! samples outside the grid taken as zero.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::grid::{GridFunction, Representation};
use super::transforms::{check_kind, SUPPORT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{real_inverse, symplectic_form, CMatrix, CVector, RMatrix, RVector};

/// Tolerance on `SᵗJS − J` and on the Bogoliubov conditions.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

const KEYS_A: f64 = -0.5;

/// Real linear replacement `X ↦ S X + shift` in `(p…, q…)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSymplecticMap {
    s: RMatrix,
    shift: RVector,
}

impl LinearSymplecticMap {
    pub fn new(s: RMatrix, shift: RVector) -> Result<Self> {
        let d = s.nrows();
        if d % 2 != 0 || s.ncols() != d {
            return Err(Error::InvalidArgument("S must be 2N×2N".into()));
        }
        if shift.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: shift.len() });
        }
        let j = symplectic_form(d / 2);
        let defect = (s.transpose() * &j * &s - &j).abs().max();
        if !(defect <= SYMPLECTIC_TOL) {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(LinearSymplecticMap { s, shift })
    }

    pub fn identity(modes: usize) -> Self {
        LinearSymplecticMap { s: RMatrix::identity(2 * modes, 2 * modes), shift: RVector::zeros(2 * modes) }
    }

    pub fn modes(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.s
    }

    pub fn shift(&self) -> &RVector {
        &self.shift
    }

    /// `X ↦ S X + shift`.
    pub fn apply(&self, x: &RVector) -> RVector {
        &self.s * x + &self.shift
    }
}

/// Complex replacement `B ↦ u B + v B* + shift` for `B = (q + ip)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLinearMap {
    u: CMatrix,
    v: CMatrix,
    shift: CVector,
}

impl ComplexLinearMap {
    /// Checks the Bogoliubov conditions `uu† − vv† = I`, `uvᵗ = vuᵗ`.
    pub fn new(u: CMatrix, v: CMatrix, shift: CVector) -> Result<Self> {
        let n = u.nrows();
        for m in [&u, &v] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
            }
        }
        if shift.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: shift.len() });
        }
        let c1 = &u * u.adjoint() - &v * v.adjoint() - CMatrix::identity(n, n);
        let c2 = &u * v.transpose() - &v * u.transpose();
        let defect = c1.iter().chain(c2.iter()).fold(0.0f64, |m, x| m.max(x.norm()));
        if !(defect <= SYMPLECTIC_TOL) {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(ComplexLinearMap { u, v, shift })
    }

    /// Phase rotation `B ↦ e^{iθ} B`.
    pub fn rotation(modes: usize, theta: f64) -> Self {
        ComplexLinearMap {
            u: CMatrix::identity(modes, modes) * C64::from_polar(1.0, theta),
            v: CMatrix::zeros(modes, modes),
            shift: CVector::zeros(modes),
        }
    }

    /// The map induced on `B` by a real symplectic replacement.
    pub fn from_symplectic(map: &LinearSymplecticMap) -> Self {
        let n = map.modes();
        let s = &map.s;
        let a = CMatrix::from_fn(n, n, |i, k| C64::new(s[(n + i, n + k)], s[(i, n + k)]));
        let b = CMatrix::from_fn(n, n, |i, k| C64::new(s[(n + i, k)], s[(i, k)]));
        let ib = b.map(|x| x * C64::i());
        let shift = CVector::from_fn(n, |j, _| C64::new(map.shift[n + j], map.shift[j]) * std::f64::consts::FRAC_1_SQRT_2);
        ComplexLinearMap { u: (&a - &ib) * C64::new(0.5, 0.0), v: (&a + &ib) * C64::new(0.5, 0.0), shift }
    }

    pub fn modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn shift(&self) -> &CVector {
        &self.shift
    }

    /// `v = 0`: the map is a passive rotation and carries Q-functions to
    /// Q-functions. Otherwise the replaced function is no longer
    /// vacuum-smoothed.
    pub fn is_passive(&self) -> bool {
        self.v.iter().all(|x| x.norm() <= SYMPLECTIC_TOL)
    }

    pub fn apply(&self, b: &CVector) -> CVector {
        &self.u * b + &self.v * b.map(|x| x.conj()) + &self.shift
    }
}

fn keys(t: f64) -> f64 {
    let t = t.abs();
    let a = KEYS_A;
    if t <= 1.0 {
        ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a
    } else {
        0.0
    }
}

/// Keys cubic interpolation of `g` at `point` (grid axis order). Taps outside
/// the grid contribute zero.
pub fn interpolate(g: &GridFunction, point: &[f64]) -> C64 {
    let axes = g.axes();
    let d = axes.len();
    let mut base = Vec::with_capacity(d);
    let mut weights = Vec::with_capacity(d);
    for (ax, &x) in axes.iter().zip(point) {
        let f = ax.locate(x);
        if !f.is_finite() || f < -2.0 || f > ax.len as f64 + 1.0 {
            return C64::new(0.0, 0.0);
        }
        let i0 = f.floor() as i64 - 1;
        base.push(i0);
        weights.push([0, 1, 2, 3].map(|k| keys(f - (i0 + k) as f64)));
    }
    let mut acc = C64::new(0.0, 0.0);
    let mut idx = vec![0usize; d];
    'taps: for tap in 0..4usize.pow(d as u32) {
        let mut w = 1.0;
        let mut t = tap;
        for k in (0..d).rev() {
            let o = t % 4;
            t /= 4;
            let i = base[k] + o as i64;
            if i < 0 || i >= axes[k].len as i64 {
                continue 'taps;
            }
            idx[k] = i as usize;
            w *= weights[k][o];
        }
        if w != 0.0 {
            acc += g.get(&idx) * w;
        }
    }
    acc
}

/// Resamples `out(Y) = g(aY + b)` in grid coordinates and checks how much of
/// the input mass falls outside the output window.
fn replace(g: &GridFunction, a: &RMatrix, b: &RVector) -> Result<GridFunction> {
    let d = g.axes().len();
    let a_inv = real_inverse(a, "replacement map")?;
    let inside = |y: &RVector| {
        g.axes().iter().zip(y.iter()).all(|(ax, &v)| {
            let (lo, hi) = (ax.start.min(ax.end()), ax.start.max(ax.end()));
            v >= lo && v <= hi
        })
    };
    // input samples whose preimage leaves the grid are lost
    let (lost, total) = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let m = g.values()[k].norm();
            let x = RVector::from_vec(g.coords(k));
            let y = &a_inv * (x - b);
            (if inside(&y) { 0.0 } else { m }, m)
        })
        .reduce(|| (0.0, 0.0), |p, q| (p.0 + q.0, p.1 + q.1));
    let tail_mass = if total > 0.0 { lost / total } else { 0.0 };
    if tail_mass > SUPPORT_TOL {
        return Err(Error::InsufficientSupport { tail_mass });
    }
    let values = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let y = RVector::from_vec(g.coords(k));
            let x = a * y + b;
            debug_assert_eq!(x.len(), d);
            interpolate(g, x.as_slice())
        })
        .collect();
    g.with_values(g.kind(), values)
}

/// `W_out(p, q) = W_in(S (p, q) + shift)`.
pub fn evolve_wigner(w: &GridFunction, map: &LinearSymplecticMap) -> Result<GridFunction> {
    check_kind(w, Representation::Wigner)?;
    let n = w.modes();
    if map.modes() != n {
        return Err(Error::DimensionMismatch { expected: n, found: map.modes() });
    }
    // grid slot 2j is p_j (vector slot j), 2j+1 is q_j (vector slot n+j)
    let slot = |g: usize| if g % 2 == 0 { g / 2 } else { n + g / 2 };
    let a = RMatrix::from_fn(2 * n, 2 * n, |r, c| map.s[(slot(r), slot(c))]);
    let b = RVector::from_fn(2 * n, |r, _| map.shift[slot(r)]);
    replace(w, &a, &b)
}

/// `Q_out(B) = Q_in(u B + v B* + shift)` on a `(Re β, Im β)` grid.
pub fn evolve_q(q: &GridFunction, map: &ComplexLinearMap) -> Result<GridFunction> {
    check_kind(q, Representation::Qfunc)?;
    let n = q.modes();
    if map.modes() != n {
        return Err(Error::DimensionMismatch { expected: n, found: map.modes() });
    }
    // Re β′ = Re(u+v) Re β + Im(v−u) Im β, Im β′ = Im(u+v) Re β + Re(u−v) Im β
    let mut a = RMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let (u, v) = (map.u[(j, k)], map.v[(j, k)]);
            a[(2 * j, 2 * k)] = u.re + v.re;
            a[(2 * j, 2 * k + 1)] = v.im - u.im;
            a[(2 * j + 1, 2 * k)] = u.im + v.im;
            a[(2 * j + 1, 2 * k + 1)] = u.re - v.re;
        }
    }
    let b = RVector::from_fn(2 * n, |r, _| {
        let s = map.shift[r / 2];
        if r % 2 == 0 {
            s.re
        } else {
            s.im
        }
    });
    replace(q, &a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::Axis;

    #[test]
    fn keys_reproduces_quadratics() {
        let ax = Axis::linspace("x", -3.0, 3.0, 61).unwrap();
        let g = GridFunction::from_real_fn(Representation::Wigner, vec![ax.clone(), ax.relabeled("y")], |v| {
            v[0] * v[0] - 2.0 * v[0] * v[1] + 0.5
        })
        .unwrap();
        let v = interpolate(&g, &[0.537, -1.213]);
        let exact = 0.537f64.powi(2) + 2.0 * 0.537 * 1.213 + 0.5;
        assert!((v.re - exact).abs() < 1e-12);
    }

    #[test]
    fn non_symplectic_rejected() {
        let s = RMatrix::from_diagonal(&RVector::from_vec(vec![2.0, 2.0]));
        assert!(matches!(LinearSymplecticMap::new(s, RVector::zeros(2)), Err(Error::NotSymplectic { .. })));
    }

    #[test]
    fn induced_map_of_identity_and_rotation() {
        let id = ComplexLinearMap::from_symplectic(&LinearSymplecticMap::identity(1));
        assert!((id.u()[(0, 0)] - 1.0).norm() < 1e-15 && id.v()[(0, 0)].norm() < 1e-15);
        // X ↦ R X with q′ = q cos θ − p sin θ, p′ = p cos θ + q sin θ
        let t: f64 = 0.3;
        let s = RMatrix::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]);
        let m = ComplexLinearMap::from_symplectic(&LinearSymplecticMap::new(s, RVector::zeros(2)).unwrap());
        assert!((m.u()[(0, 0)] - C64::from_polar(1.0, t)).norm() < 1e-15);
        assert!(m.is_passive());
        let squeeze = RMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let m = ComplexLinearMap::from_symplectic(&LinearSymplecticMap::new(squeeze, RVector::zeros(2)).unwrap());
        assert!(ComplexLinearMap::new(m.u().clone(), m.v().clone(), m.shift().clone()).is_ok());
        assert!(!m.is_passive());
    }
}
