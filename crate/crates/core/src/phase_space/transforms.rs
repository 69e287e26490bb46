//! Density ↔ Wigner transforms and the density → Q projection.
//!
//! `W(p, q) = ∫ρ(q + u/2, q − u/2) e^{−ipu} du` is summed exactly on the grid:
//! with `x` spacing `h`, the midpoints `q = (x + x′)/2` fall on a half-step
//! grid of `2n − 1` points and `u = x − x′` steps by `2h`. The inverse
//! `ρ(x, x′) = (2π)⁻¹∫W((x + x′)/2, p) e^{ip(x − x′)} dp` reads `W` on every
//! second `q` sample, so `density_from_wigner` undoes `wigner_from_density`
//! on the original `x` grid.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::grid::{labels, Axis, GridFunction, Representation};
use crate::error::{Error, Result};

/// Largest relative Hermiticity defect accepted for density input.
pub const HERMITICITY_TOL: f64 = 1e-8;
/// Largest share of `Σ|v|` allowed on the outer faces of an input grid.
pub const SUPPORT_TOL: f64 = 1e-6;
/// Mode limit for the density/Wigner transforms.
pub const MAX_GRID_MODES: usize = 2;

pub(crate) fn check_kind(g: &GridFunction, kind: Representation) -> Result<()> {
    if g.kind() != kind {
        return Err(Error::InvalidArgument(format!("expected a {kind:?} grid, got {:?}", g.kind())));
    }
    Ok(())
}

pub(crate) fn check_modes(g: &GridFunction, max: usize) -> Result<()> {
    if g.modes() > max {
        return Err(Error::UnsupportedModes { modes: g.modes(), max });
    }
    Ok(())
}

pub(crate) fn check_support(g: &GridFunction) -> Result<()> {
    let tail_mass = g.boundary_fraction();
    if tail_mass > SUPPORT_TOL {
        return Err(Error::InsufficientSupport { tail_mass });
    }
    Ok(())
}

/// Replaces the axis pair of `mode` by applying `f` to every 2-D slice.
fn map_pair<F>(g: &GridFunction, mode: usize, kind: Representation, new_axes: [Axis; 2], f: F) -> Result<GridFunction>
where
    F: Fn(&[C64]) -> Vec<C64> + Sync,
{
    let shape = g.shape();
    let a = 2 * mode;
    let (na, nb) = (shape[a], shape[a + 1]);
    let before: usize = shape[..a].iter().product();
    let after: usize = shape[a + 2..].iter().product();
    let block = new_axes[0].len * new_axes[1].len;
    let values = g.values();
    let slices: Vec<Vec<C64>> = (0..before * after)
        .into_par_iter()
        .map(|o| {
            let (o1, o2) = (o / after, o % after);
            let slice: Vec<C64> = (0..na * nb).map(|i| values[(o1 * na * nb + i) * after + o2]).collect();
            f(&slice)
        })
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); before * block * after];
    for (o, s) in slices.iter().enumerate() {
        let (o1, o2) = (o / after, o % after);
        for (i, &v) in s.iter().enumerate() {
            out[(o1 * block + i) * after + o2] = v;
        }
    }
    let mut axes = g.axes().to_vec();
    let [ax, bx] = new_axes;
    axes[a] = ax;
    axes[a + 1] = bx;
    GridFunction::new(kind, axes, out)
}

/// `W[l][k] = 2h Σ_{i+j=k} ρ[i][j] e^{−i p_l (i−j) h}` on the half-step grid.
fn wigner_slice(rho: &[C64], n: usize, h: f64, p: &[f64]) -> Vec<C64> {
    let nq = 2 * n - 1;
    let mut out = vec![C64::new(0.0, 0.0); p.len() * nq];
    out.par_chunks_mut(nq).zip(p.par_iter()).for_each(|(row, &pl)| {
        let phase: Vec<C64> =
            (0..nq).map(|k| C64::from_polar(1.0, -pl * (k as f64 - (n - 1) as f64) * h)).collect();
        for (k, slot) in row.iter_mut().enumerate() {
            let lo = k.saturating_sub(n - 1);
            let hi = k.min(n - 1);
            let mut acc = C64::new(0.0, 0.0);
            for i in lo..=hi {
                let j = k - i;
                acc += rho[i * n + j] * phase[i + n - 1 - j];
            }
            *slot = acc * (2.0 * h);
        }
    });
    out
}

/// `ρ[i][j] = (h_p/2π) Σ_l W[l][i+j] e^{2i p_l (i−j) h_q}` for `i + j < n_q`.
fn density_slice(w: &[C64], p: &[f64], nq: usize, hq: f64, hp: f64) -> Vec<C64> {
    let np = p.len();
    let m = nq.div_ceil(2);
    // column-major copy so the p sum is contiguous
    let mut wt = vec![C64::new(0.0, 0.0); nq * np];
    for l in 0..np {
        for k in 0..nq {
            wt[k * np + l] = w[l * nq + k];
        }
    }
    let phases: Vec<Vec<C64>> = (0..2 * m - 1)
        .map(|dd| {
            let d = dd as f64 - (m - 1) as f64;
            p.iter().map(|&pl| C64::from_polar(1.0, 2.0 * pl * d * hq)).collect()
        })
        .collect();
    let scale = hp / (2.0 * std::f64::consts::PI);
    let mut out = vec![C64::new(0.0, 0.0); m * m];
    out.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        for (j, slot) in row.iter_mut().enumerate() {
            let k = i + j;
            if k >= nq {
                continue;
            }
            let col = &wt[k * np..(k + 1) * np];
            let ph = &phases[i + m - 1 - j];
            let acc: C64 = col.iter().zip(ph).map(|(a, b)| a * b).sum();
            *slot = acc * scale;
        }
    });
    out
}

/// Wigner function from a coordinate density matrix. The `p` axis is used for
/// every mode; each `q` axis is the half-step grid of the matching `x` axis.
pub fn wigner_from_density(rho: &GridFunction, p: &Axis) -> Result<GridFunction> {
    check_kind(rho, Representation::Density)?;
    check_modes(rho, MAX_GRID_MODES)?;
    let residual = rho.hermiticity_residual()?;
    if residual > HERMITICITY_TOL {
        return Err(Error::NonHermitian { residual });
    }
    check_support(rho)?;
    let p_max = p.start.abs().max(p.end().abs());
    for x in rho.axes().iter().step_by(2) {
        // u steps by 2h, so e^{−ipu} aliases beyond |p| = π/(2h)
        let nyquist = std::f64::consts::PI / (2.0 * x.step);
        if p_max > nyquist {
            return Err(Error::InvalidArgument(format!(
                "|p| up to {p_max} exceeds π/(2h) = {nyquist:.4} for the {} axis",
                x.label
            )));
        }
    }
    let mut g = rho.clone();
    for mode in 0..rho.modes() {
        let x = g.axes()[2 * mode].clone();
        let [pl, ql] = labels(Representation::Wigner, mode);
        let q = Axis::new(ql, x.start, x.step / 2.0, 2 * x.len - 1)?;
        let p_axis = p.relabeled(pl);
        let pts = p_axis.points();
        let kind = if mode + 1 == rho.modes() { Representation::Wigner } else { Representation::Density };
        g = map_pair(&g, mode, kind, [p_axis, q], |s| wigner_slice(s, x.len, x.step, &pts))?;
    }
    Ok(g)
}

/// Coordinate density matrix from a Wigner function. Each output `x` axis
/// starts at the first `q` sample with spacing `2h_q`.
pub fn density_from_wigner(w: &GridFunction) -> Result<GridFunction> {
    check_kind(w, Representation::Wigner)?;
    check_modes(w, MAX_GRID_MODES)?;
    check_support(w)?;
    for pair in w.axes().chunks(2) {
        // the p sum repeats ρ every 2π/h_p in x − x′; keep the copies off the grid
        let (p, q) = (&pair[0], &pair[1]);
        let period = 2.0 * std::f64::consts::PI / p.step;
        let span = q.end() - q.start;
        if period < 2.0 * span {
            return Err(Error::InvalidArgument(format!(
                "p spacing {} too coarse: 2π/h_p = {period:.4} < twice the {} span",
                p.step, q.label
            )));
        }
    }
    let mut g = w.clone();
    for mode in 0..w.modes() {
        let p = g.axes()[2 * mode].clone();
        let q = g.axes()[2 * mode + 1].clone();
        let m = q.len.div_ceil(2);
        let [xl, xpl] = labels(Representation::Density, mode);
        let x = Axis::new(xl, q.start, 2.0 * q.step, m)?;
        let xp = x.relabeled(xpl);
        let pts = p.points();
        let kind = if mode + 1 == w.modes() { Representation::Density } else { Representation::Wigner };
        g = map_pair(&g, mode, kind, [x, xp], |s| density_slice(s, &pts, q.len, q.step, p.step))?;
    }
    Ok(g)
}

/// Single-mode `Q(β) = ⟨β|ρ|β⟩` by direct quadrature against coherent-state
/// wave functions; `β = a + ib` with `a` on `re`, `b` on `im`.
pub fn q_from_density(rho: &GridFunction, re: &Axis, im: &Axis) -> Result<GridFunction> {
    check_kind(rho, Representation::Density)?;
    check_modes(rho, 1)?;
    let x = rho.axes()[0].clone();
    if !x.same_points(&rho.axes()[1]) {
        return Err(Error::InvalidArgument("x and x′ axes must coincide".into()));
    }
    let n = x.len;
    let h = x.step;
    let xs = x.points();
    let vals = rho.values();
    let pref = h * h / std::f64::consts::PI.sqrt();
    let im_pts = im.points();
    let rows: Vec<Vec<C64>> = re
        .points()
        .par_iter()
        .map(|&a| {
            let qb = std::f64::consts::SQRT_2 * a;
            let g: Vec<f64> = xs.iter().map(|&xi| (-0.5 * (xi - qb) * (xi - qb)).exp()).collect();
            let mut diag = vec![C64::new(0.0, 0.0); 2 * n - 1];
            for i in 0..n {
                for j in 0..n {
                    diag[i + n - 1 - j] += vals[i * n + j] * (g[i] * g[j]);
                }
            }
            im_pts
                .iter()
                .map(|&b| {
                    let pb = std::f64::consts::SQRT_2 * b;
                    let acc: C64 = diag
                        .iter()
                        .enumerate()
                        .map(|(dd, s)| s * C64::from_polar(1.0, -pb * (dd as f64 - (n - 1) as f64) * h))
                        .sum();
                    acc * pref
                })
                .collect()
        })
        .collect();
    let [rl, il] = labels(Representation::Qfunc, 0);
    GridFunction::new(
        Representation::Qfunc,
        vec![re.relabeled(rl), im.relabeled(il)],
        rows.into_iter().flatten().collect(),
    )
}

/// Single-mode Q-function on the grid `Re β = q/√2`, `Im β = p/√2` matching
/// the Wigner samples.
pub fn q_from_wigner(w: &GridFunction) -> Result<GridFunction> {
    check_kind(w, Representation::Wigner)?;
    check_modes(w, 1)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = w.axes()[1].scaled(s, "re_beta0");
    let im = w.axes()[0].scaled(s, "im_beta0");
    q_from_wigner_on(w, &re, &im)
}

/// Single-mode Q-function on caller-chosen `β` axes: `W → ρ → ⟨β|ρ|β⟩`.
pub fn q_from_wigner_on(w: &GridFunction, re: &Axis, im: &Axis) -> Result<GridFunction> {
    check_kind(w, Representation::Wigner)?;
    check_modes(w, 1)?;
    q_from_density(&density_from_wigner(w)?, re, im)
}
