//! Q-function → density matrix → Wigner function for a single mode.
//!
//! With the analytic continuation `Q(β, β̄)` (so `Q(β, β*) = ⟨β|ρ|β⟩`),
//!
//! ```text
//! ρ(x, x′) = π^{−5/2} e^{−(x² + x′²)/2} ∫d²β d²γ A(x, β) e^{γβ*} Q(γ, β*) B(x′, γ)
//! A(x, β)  = exp(−|β|² − β²/2 + √2 xβ)
//! B(x′, γ) = exp(−|γ|² − γ*²/2 + √2 x′γ*)
//! ```
//!
//! The double complex integral is a deconvolution and loses accuracy quickly;
//! it is evaluated by the trapezoid rule on a square `β, γ` grid with an
//! overflow guard. A Q-function given only on a grid is first fitted by a
//! truncated Fock expansion, which supplies the continuation.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::grid::{labels, Axis, GridFunction, Representation};
use super::transforms::{check_kind, check_modes, wigner_from_density};
use crate::cat_states::{CatState, Parity};
use crate::error::{Error, Result};
use crate::gaussian::QParams;

/// Largest Hermiticity defect tolerated before the reconstruction is
/// symmetrized.
const RECONSTRUCTION_HERMITICITY: f64 = 1e-3;
const OVERFLOW_GUARD: f64 = 1e250;

/// Single-mode Q-function continued to independent `β` and `β̄`.
pub trait AnalyticQ: Sync {
    fn eval(&self, beta: C64, beta_bar: C64) -> C64;

    /// `G(β, γ) = e^{γβ*} Q(γ, β*)`; implementors may fold the exponentials.
    fn kernel(&self, gamma: C64, beta_conj: C64) -> C64 {
        (gamma * beta_conj).exp() * self.eval(gamma, beta_conj)
    }

    fn kernel_row(&self, beta_conj: C64, gammas: &[C64]) -> Vec<C64> {
        gammas.iter().map(|&g| self.kernel(g, beta_conj)).collect()
    }

    fn modes(&self) -> usize {
        1
    }
}

impl AnalyticQ for QParams {
    fn eval(&self, beta: C64, beta_bar: C64) -> C64 {
        if self.modes() != 1 {
            return self.analytic(&[beta], &[beta_bar]);
        }
        let r = self.r();
        let z = self.z();
        let quad = r[(0, 0)] * beta_bar * beta_bar
            + 2.0 * (r[(0, 1)] + 1.0) * beta_bar * beta
            + r[(1, 1)] * beta * beta;
        self.p0() * (-0.5 * quad + z[0] * beta_bar + z[1] * beta).exp()
    }

    fn kernel(&self, gamma: C64, beta_conj: C64) -> C64 {
        if self.modes() != 1 {
            return (gamma * beta_conj).exp() * self.eval(gamma, beta_conj);
        }
        let r = self.r();
        let z = self.z();
        let (v, w) = (gamma, beta_conj);
        let quad = r[(0, 0)] * w * w + 2.0 * r[(0, 1)] * w * v + r[(1, 1)] * v * v;
        self.p0() * (-0.5 * quad + z[0] * w + z[1] * v).exp()
    }

    fn modes(&self) -> usize {
        QParams::modes(self)
    }
}

impl AnalyticQ for CatState {
    fn eval(&self, beta: C64, beta_bar: C64) -> C64 {
        (-beta * beta_bar).exp() * self.kernel(beta, beta_bar)
    }

    fn kernel(&self, gamma: C64, beta_conj: C64) -> C64 {
        let (beta, beta_bar) = (gamma, beta_conj);
        let a = self.alpha()[0];
        let ln_pref = -(4.0f64).ln() - self.ln_hyper();
        let sign = match self.parity() {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let mut acc = C64::new(0.0, 0.0);
        for (s1, w1) in [(1.0, 1.0), (-1.0, sign)] {
            for (s2, w2) in [(1.0, 1.0), (-1.0, sign)] {
                let e = s1 * beta_bar * a + s2 * beta * a.conj() + ln_pref;
                acc += w1 * w2 * e.exp();
            }
        }
        acc
    }

    fn modes(&self) -> usize {
        CatState::modes(self)
    }
}

/// Square trapezoid grid over `Re β, Im β ∈ [−extent, extent]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGrid {
    pub extent: f64,
    pub points: usize,
}

impl Default for ComplexGrid {
    fn default() -> Self {
        ComplexGrid { extent: 8.0, points: 48 }
    }
}

impl ComplexGrid {
    fn nodes(&self) -> Result<(Vec<C64>, f64)> {
        let ax = Axis::symmetric("beta", self.extent, self.points)?;
        let pts = ax.points();
        let nodes = pts.iter().flat_map(|&re| pts.iter().map(move |&im| C64::new(re, im))).collect();
        Ok((nodes, ax.step))
    }
}

/// Coordinate density matrix on `x × x` from an analytic Q-function.
pub fn density_from_analytic_q<Q: AnalyticQ + ?Sized>(q: &Q, x: &Axis, grid: &ComplexGrid) -> Result<GridFunction> {
    if q.modes() != 1 {
        return Err(Error::UnsupportedModes { modes: q.modes(), max: 1 });
    }
    let (nodes, h) = grid.nodes()?;
    let xs = x.points();
    let nx = xs.len();
    let s2 = std::f64::consts::SQRT_2;
    let a_mat: Vec<Vec<C64>> = xs
        .iter()
        .map(|&xi| nodes.iter().map(|&b| (-b.norm_sqr() - 0.5 * b * b + s2 * xi * b).exp()).collect())
        .collect();
    let b_mat: Vec<Vec<C64>> = xs
        .iter()
        .map(|&xi| {
            nodes
                .iter()
                .map(|&g| (-g.norm_sqr() - 0.5 * g.conj() * g.conj() + s2 * xi * g.conj()).exp())
                .collect()
        })
        .collect();
    // C[β][x′] = Σ_γ G(β, γ) B(x′, γ), one G row at a time
    let c_rows: Vec<Vec<C64>> = nodes
        .par_iter()
        .map(|&b| {
            let g_row = q.kernel_row(b.conj(), &nodes);
            b_mat.iter().map(|bx| g_row.iter().zip(bx).map(|(u, v)| u * v).sum()).collect()
        })
        .collect();
    let guard = c_rows.iter().flatten().fold(0.0f64, |m, v| if v.is_finite() { m.max(v.norm()) } else { f64::INFINITY });
    if guard > OVERFLOW_GUARD {
        return Err(Error::ConditioningFailure(format!("intermediate sum reached {guard:.3e}")));
    }
    let pref = std::f64::consts::PI.powf(-2.5) * h.powi(4);
    let mut values = vec![C64::new(0.0, 0.0); nx * nx];
    values.par_chunks_mut(nx).enumerate().for_each(|(i, row)| {
        for (j, slot) in row.iter_mut().enumerate() {
            let acc: C64 = a_mat[i].iter().zip(&c_rows).map(|(a, c)| a * c[j]).sum();
            *slot = acc * pref * (-(xs[i] * xs[i] + xs[j] * xs[j]) / 2.0).exp();
        }
    });
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConditioningFailure("non-finite density sample".into()));
    }
    let [xl, xpl] = labels(Representation::Density, 0);
    let rho = GridFunction::new(Representation::Density, vec![x.relabeled(xl), x.relabeled(xpl)], values)?;
    let residual = rho.hermiticity_residual()?;
    if residual > RECONSTRUCTION_HERMITICITY {
        return Err(Error::ConditioningFailure(format!("reconstruction Hermiticity defect {residual:.3e}")));
    }
    hermitize(&rho)
}

fn hermitize(rho: &GridFunction) -> Result<GridFunction> {
    let n = rho.axes()[0].len;
    let v = rho.values();
    let sym = (0..n * n).map(|k| (v[k] + v[(k % n) * n + k / n].conj()) * 0.5).collect();
    rho.with_values(Representation::Density, sym)
}

/// Wigner function from an analytic Q-function via the density matrix on `x`.
pub fn wigner_from_analytic_q<Q: AnalyticQ + ?Sized>(
    q: &Q,
    x: &Axis,
    p: &Axis,
    grid: &ComplexGrid,
) -> Result<GridFunction> {
    wigner_from_density(&density_from_analytic_q(q, x, grid)?, p)
}

/// Settings for fitting a sampled Q-function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Fock states `0..cutoff` per index of `ρ_mn`.
    pub cutoff: usize,
    /// Samples per axis used by the fit (the grid is strided down to this).
    pub max_samples: usize,
    /// Largest accepted `‖fit − Q‖/‖Q‖` over the fitted samples.
    pub max_residual: f64,
    /// Largest accepted `|ρ_mn|`; larger values signal an ill-posed fit.
    pub max_coefficient: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { cutoff: 12, max_samples: 64, max_residual: 1e-3, max_coefficient: 10.0 }
    }
}

/// Truncated Fock expansion `Q(β) = e^{−|β|²} Σ ρ_mn β*^m β^n / √(m! n!)`.
#[derive(Debug, Clone)]
pub struct FockFit {
    cutoff: usize,
    rho: DMatrix<C64>,
    residual: f64,
}

impl FockFit {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Fitted Fock matrix elements `⟨m|ρ|n⟩`.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

fn scaled_powers(z: C64, k: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(k);
    let mut acc = C64::new(1.0, 0.0);
    for n in 0..k {
        if n > 0 {
            acc *= z / (n as f64).sqrt();
        }
        out.push(acc);
    }
    out
}

impl AnalyticQ for FockFit {
    fn eval(&self, beta: C64, beta_bar: C64) -> C64 {
        let k = self.cutoff;
        let bb = scaled_powers(beta_bar, k);
        let b = scaled_powers(beta, k);
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..k {
            let row: C64 = (0..k).map(|n| self.rho[(m, n)] * b[n]).sum();
            acc += bb[m] * row;
        }
        (-beta * beta_bar).exp() * acc
    }

    fn kernel_row(&self, beta_conj: C64, gammas: &[C64]) -> Vec<C64> {
        let k = self.cutoff;
        let bb = scaled_powers(beta_conj, k);
        let u: Vec<C64> = (0..k).map(|n| (0..k).map(|m| bb[m] * self.rho[(m, n)]).sum()).collect();
        gammas
            .iter()
            .map(|&g| {
                let mut acc = C64::new(0.0, 0.0);
                let mut pow = C64::new(1.0, 0.0);
                for (n, un) in u.iter().enumerate() {
                    if n > 0 {
                        pow *= g / (n as f64).sqrt();
                    }
                    acc += un * pow;
                }
                acc
            })
            .collect()
    }
}

/// Least-squares Fock fit of a single-mode Q grid.
pub fn fit_q_grid(q: &GridFunction, opts: &FitOptions) -> Result<FockFit> {
    check_kind(q, Representation::Qfunc)?;
    check_modes(q, 1)?;
    let k = opts.cutoff;
    if k == 0 || opts.max_samples < 2 {
        return Err(Error::InvalidArgument("fit needs cutoff ≥ 1 and at least 2 samples per axis".into()));
    }
    let stride = |len: usize| len.div_ceil(opts.max_samples).max(1);
    let (re, im) = (&q.axes()[0], &q.axes()[1]);
    let (sr, si) = (stride(re.len), stride(im.len));
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in (0..re.len).step_by(sr) {
        for j in (0..im.len).step_by(si) {
            let beta = C64::new(re.point(i), im.point(j));
            let weight = (-beta.norm_sqr()).exp();
            let bb = scaled_powers(beta.conj(), k);
            let b = scaled_powers(beta, k);
            rows.push((0..k * k).map(|mn| bb[mn / k] * b[mn % k] * weight).collect::<Vec<_>>());
            rhs.push(q.get(&[i, j]));
        }
    }
    if rows.len() < k * k {
        return Err(Error::InvalidArgument(format!("{} samples cannot fix {} coefficients", rows.len(), k * k)));
    }
    let design = DMatrix::from_fn(rows.len(), k * k, |r, c| rows[r][c]);
    let target = nalgebra::DVector::from_vec(rhs);
    let svd = design.clone().svd(true, true);
    let coef = svd
        .solve(&target, 1e-13 * svd.singular_values.max())
        .map_err(|e| Error::ConditioningFailure(e.to_string()))?;
    let raw = DMatrix::from_fn(k, k, |m, n| coef[m * k + n]);
    let rho = (&raw + raw.adjoint()).map(|v| v * 0.5);
    let flat = DMatrix::from_fn(k * k, 1, |mn, _| rho[(mn / k, mn % k)]);
    let residual = (&design * flat - DMatrix::from_column_slice(target.len(), 1, target.as_slice())).norm()
        / target.norm().max(f64::MIN_POSITIVE);
    if !(residual <= opts.max_residual) {
        return Err(Error::ConditioningFailure(format!("Fock fit residual {residual:.3e}")));
    }
    let largest = rho.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if largest > opts.max_coefficient {
        return Err(Error::ConditioningFailure(format!("Fock fit coefficient {largest:.3e}")));
    }
    Ok(FockFit { cutoff: k, rho, residual })
}

/// Density matrix from a sampled single-mode Q-function. The `x` axis spans
/// `√2 Re β` at half the scaled spacing, which keeps `p = √2 Im β` below the
/// aliasing limit of the Wigner transform.
pub fn density_from_q(q: &GridFunction) -> Result<GridFunction> {
    let fit = fit_q_grid(q, &FitOptions::default())?;
    let re = &q.axes()[0];
    let s = std::f64::consts::SQRT_2;
    let x = Axis::new("x0", s * re.start, s * re.step / 2.0, 2 * re.len - 1)?;
    density_from_analytic_q(&fit, &x, &ComplexGrid::default())
}

/// Wigner function from a sampled single-mode Q-function, with `p = √2 Im β`.
pub fn wigner_from_q(q: &GridFunction) -> Result<GridFunction> {
    let rho = density_from_q(q)?;
    let p = q.axes()[1].scaled(std::f64::consts::SQRT_2, "p0");
    wigner_from_density(&rho, &p)
}
