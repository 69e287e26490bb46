//! Dispatch of a validated job to the library.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use photostat::cat_states::{self, CatState};
use photostat::gaussian::{self, q_params, DensityEvaluator, GaussianState, WignerEvaluator};
use photostat::multi_hermite::{hermite_table, normalized_table, HermiteSpec, MultiIndex, DEFAULT_CAP};
use photostat::oscillator::solve_epsilon;
use photostat::phase_space::{
    density_from_analytic_q, density_from_wigner, fit_q_grid, q_from_density, q_from_wigner_on, wigner_from_density,
    AnalyticQ, Axis, ComplexGrid, FitOptions, GridFunction, Representation,
};
use rayon::prelude::*;

use crate::config::{CatSpec, ConfigIssue, GaussianSpec, GridSpec, Input, JobConfig, StateSpec};
use crate::CliError;

/// Largest number of samples a single grid may hold.
pub const MAX_GRID_POINTS: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Index(usize),
    Real(f64),
}

/// What a job produces.
#[derive(Debug, Clone)]
pub enum Artifact {
    Table { columns: Vec<String>, rows: Vec<Vec<Cell>> },
    Grid(GridFunction),
}

enum State {
    Gaussian(GaussianState),
    Cat(CatState),
}

impl State {
    fn modes(&self) -> usize {
        match self {
            State::Gaussian(g) => g.modes(),
            State::Cat(c) => c.modes(),
        }
    }
}

fn gaussian_state(spec: &GaussianSpec) -> photostat::Result<GaussianState> {
    Ok(match spec {
        GaussianSpec::Vacuum { modes } => GaussianState::vacuum(*modes),
        GaussianSpec::Coherent { alpha } => GaussianState::coherent(alpha),
        GaussianSpec::Thermal { nbar } => GaussianState::thermal(nbar),
        GaussianSpec::Squeezed { r, phi, alpha } => GaussianState::squeezed(*r, *phi, *alpha),
        GaussianSpec::General { mean, disp } => GaussianState::new(mean.clone(), disp.clone())?,
    })
}

fn cat_state(spec: &CatSpec) -> photostat::Result<CatState> {
    CatState::new(spec.alpha.clone(), spec.parity)
}

fn state(spec: &StateSpec) -> photostat::Result<State> {
    Ok(match spec {
        StateSpec::Gaussian(g) => State::Gaussian(gaussian_state(g)?),
        StateSpec::Cat(c) => State::Cat(cat_state(c)?),
    })
}

fn odometer(modes: usize, n_max: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (n_max + 1).pow(modes as u32);
    (0..total).map(move |mut k| {
        let mut idx = vec![0; modes];
        for slot in (0..modes).rev() {
            idx[slot] = k % (n_max + 1);
            k /= n_max + 1;
        }
        idx
    })
}

fn index_columns(modes: usize) -> Vec<String> {
    (0..modes).map(|i| format!("n{i}")).collect()
}

fn index_row(n: &[usize]) -> Vec<Cell> {
    n.iter().map(|&k| Cell::Index(k)).collect()
}

/// Pairs of symmetric axes, one pair per mode.
fn axes(labels: fn(usize) -> [String; 2], modes: usize, extent: f64, points: usize) -> photostat::Result<Vec<Axis>> {
    let mut out = Vec::with_capacity(2 * modes);
    for k in 0..modes {
        for label in labels(k) {
            out.push(Axis::symmetric(label, extent, points)?);
        }
    }
    Ok(out)
}

fn check_size(grid: &GridSpec, modes: usize) -> Result<(), CliError> {
    let total = (grid.points as f64).powi(2 * modes as i32);
    if total > MAX_GRID_POINTS as f64 {
        return Err(CliError::Config(vec![ConfigIssue {
            pointer: "/grid/points".into(),
            message: format!("{} points per axis over {} axes exceeds {MAX_GRID_POINTS} samples", grid.points, 2 * modes),
        }]));
    }
    Ok(())
}

/// Samples `f` in parallel; the first error wins.
fn sample(
    kind: Representation,
    axes: Vec<Axis>,
    f: impl Fn(&[f64]) -> photostat::Result<C64> + Sync,
) -> photostat::Result<GridFunction> {
    let len = axes.iter().map(|a| a.len).product();
    let shell = GridFunction::new(kind, axes, vec![C64::new(0.0, 0.0); len])?;
    let values: photostat::Result<Vec<C64>> = (0..len).into_par_iter().map(|k| f(&shell.coords(k))).collect();
    shell.with_values(kind, values?)
}

fn split_pairs(c: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (c.iter().step_by(2).copied().collect(), c.iter().skip(1).step_by(2).copied().collect())
}

fn sample_wigner(st: &State, grid: &GridSpec) -> photostat::Result<GridFunction> {
    let ax = axes(|k| [format!("p{k}"), format!("q{k}")], st.modes(), grid.extent, grid.points)?;
    sample_wigner_on(st, ax)
}

/// Wigner samples for inversion to a density: the `p` axes are refined until
/// `2π/h_p` covers twice the `q` span.
fn sample_wigner_for_inversion(st: &State, grid: &GridSpec) -> photostat::Result<GridFunction> {
    let e = grid.extent;
    let needed = (4.0 * e * e / PI).ceil() as usize + 1;
    let mut ax = Vec::new();
    for k in 0..st.modes() {
        ax.push(Axis::symmetric(format!("p{k}"), e, grid.points.max(needed))?);
        ax.push(Axis::symmetric(format!("q{k}"), e, grid.points)?);
    }
    sample_wigner_on(st, ax)
}

fn sample_wigner_on(st: &State, ax: Vec<Axis>) -> photostat::Result<GridFunction> {
    match st {
        State::Gaussian(g) => {
            let ev = WignerEvaluator::new(g)?;
            sample(Representation::Wigner, ax, |c| {
                let (p, q) = split_pairs(c);
                ev.eval(&p, &q).map(|w| C64::new(w, 0.0))
            })
        }
        State::Cat(cat) => sample(Representation::Wigner, ax, |c| {
            let (p, q) = split_pairs(c);
            cat_states::wigner_function(cat, &p, &q).map(|w| C64::new(w, 0.0))
        }),
    }
}

fn sample_density(st: &State, grid: &GridSpec) -> photostat::Result<GridFunction> {
    let ax = axes(|k| [format!("x{k}"), format!("x{k}'")], st.modes(), grid.extent, grid.points)?;
    match st {
        State::Gaussian(g) => {
            let ev = DensityEvaluator::new(g)?;
            sample(Representation::Density, ax, |c| {
                let (x, xp) = split_pairs(c);
                ev.eval(&x, &xp)
            })
        }
        State::Cat(cat) => sample(Representation::Density, ax, |c| {
            let (x, xp) = split_pairs(c);
            Ok(cat_states::wave_function(cat, &x)? * cat_states::wave_function(cat, &xp)?.conj())
        }),
    }
}

fn q_axes(modes: usize, grid: &GridSpec) -> photostat::Result<Vec<Axis>> {
    axes(|k| [format!("re_beta{k}"), format!("im_beta{k}")], modes, grid.extent * FRAC_1_SQRT_2, grid.points)
}

fn sample_q(st: &State, grid: &GridSpec) -> photostat::Result<GridFunction> {
    let ax = q_axes(st.modes(), grid)?;
    let beta = |c: &[f64]| -> Vec<C64> { c.chunks(2).map(|b| C64::new(b[0], b[1])).collect() };
    match st {
        State::Gaussian(g) => sample(Representation::Qfunc, ax, |c| {
            gaussian::q_function_at(g, &beta(c)).map(|q| C64::new(q, 0.0))
        }),
        State::Cat(cat) => sample(Representation::Qfunc, ax, |c| {
            cat_states::q_function(cat, &beta(c)).map(|q| C64::new(q, 0.0))
        }),
    }
}

/// Momentum axes for the Wigner transform of a density on `x`, clipped to
/// the aliasing limit `π/(2h)` of the `x` spacing.
fn momentum_axes(rho: &GridFunction, grid: &GridSpec) -> photostat::Result<Axis> {
    let h = rho.axes()[0].step;
    let limit = PI / (2.0 * h) * (1.0 - 1e-9);
    Axis::symmetric("p0", grid.extent.min(limit), grid.points)
}

/// Single-mode density from the Q-function, analytic or fitted to samples.
fn density_via_q(st: &State, cfg: &JobConfig, sampled: bool) -> photostat::Result<GridFunction> {
    let x = Axis::symmetric("x0", cfg.grid.extent, cfg.grid.points)?;
    let kernel = ComplexGrid::default();
    if sampled {
        let q = sample_q(st, &cfg.grid)?;
        let opts = FitOptions { cutoff: cfg.caps.cutoff, ..FitOptions::default() };
        let fit = fit_q_grid(&q, &opts)?;
        return density_from_analytic_q(&fit, &x, &kernel);
    }
    let analytic: Box<dyn AnalyticQ> = match st {
        State::Gaussian(g) => Box::new(q_params(g)?),
        State::Cat(c) => Box::new(c.clone()),
    };
    density_from_analytic_q(analytic.as_ref(), &x, &kernel)
}

fn transform(cfg: &JobConfig, from: Representation, to: Representation, spec: &StateSpec, sampled: bool) -> Result<Artifact, CliError> {
    use Representation::*;
    let st = state(spec)?;
    check_size(&cfg.grid, st.modes())?;
    let grid = &cfg.grid;
    let out = match (from, to) {
        (Density, Wigner) => {
            let rho = sample_density(&st, grid)?;
            wigner_from_density(&rho, &momentum_axes(&rho, grid)?)?
        }
        (Wigner, Density) => density_from_wigner(&sample_wigner_for_inversion(&st, grid)?)?,
        (Density, Qfunc) => {
            let ax = q_axes(1, grid)?;
            q_from_density(&sample_density(&st, grid)?, &ax[0], &ax[1])?
        }
        (Wigner, Qfunc) => {
            let ax = q_axes(1, grid)?;
            q_from_wigner_on(&sample_wigner_for_inversion(&st, grid)?, &ax[0], &ax[1])?
        }
        (Qfunc, Density) => density_via_q(&st, cfg, sampled)?,
        (Qfunc, Wigner) => {
            let rho = density_via_q(&st, cfg, sampled)?;
            wigner_from_density(&rho, &momentum_axes(&rho, grid)?)?
        }
        _ => unreachable!("validation rejects identical representations"),
    };
    Ok(Artifact::Grid(out))
}

/// Runs a validated job.
pub fn run(cfg: &JobConfig) -> Result<Artifact, CliError> {
    let n_max = cfg.caps.n_max;
    match &cfg.input {
        Input::GaussianPnd(spec) => {
            let st = gaussian_state(spec)?;
            let table = gaussian::distribution_table(&st, &MultiIndex::new(vec![n_max; st.modes()]))?;
            let mut columns = index_columns(st.modes());
            columns.push("p".into());
            let rows = table
                .into_iter()
                .map(|(n, p)| {
                    let mut row = index_row(n.entries());
                    row.push(Cell::Real(p));
                    row
                })
                .collect();
            Ok(Artifact::Table { columns, rows })
        }
        Input::CatPnd(spec) => {
            let st = cat_state(spec)?;
            let mut columns = index_columns(st.modes());
            columns.push("p".into());
            let rows = odometer(st.modes(), n_max)
                .map(|n| {
                    let p = cat_states::photon_distribution(&st, &MultiIndex::new(n.clone()))?;
                    let mut row = index_row(&n);
                    row.push(Cell::Real(p));
                    Ok(row)
                })
                .collect::<photostat::Result<_>>()?;
            Ok(Artifact::Table { columns, rows })
        }
        Input::CatWigner(spec) => {
            let st = State::Cat(cat_state(spec)?);
            check_size(&cfg.grid, st.modes())?;
            Ok(Artifact::Grid(sample_wigner(&st, &cfg.grid)?))
        }
        Input::Qfunc(spec) => {
            let st = state(spec)?;
            check_size(&cfg.grid, st.modes())?;
            Ok(Artifact::Grid(sample_q(&st, &cfg.grid)?))
        }
        Input::Transform { from, to, state, sampled } => transform(cfg, *from, *to, state, *sampled),
        Input::Oscillator { profile, t_end, dt, every } => {
            let traj = solve_epsilon(profile, *t_end, *dt)?;
            let columns = ["t", "re_eps", "im_eps", "re_eps_dot", "im_eps_dot", "sigma_x", "sigma_p", "r"]
                .map(String::from)
                .to_vec();
            let last = traj.len() - 1;
            let rows = (0..traj.len())
                .filter(|k| k % every == 0 || *k == last)
                .map(|k| {
                    let s = traj.sample(k);
                    let v = s.variances();
                    [s.t, s.eps.re, s.eps.im, s.eps_dot.re, s.eps_dot.im, v.sigma_x, v.sigma_p, v.r]
                        .map(Cell::Real)
                        .to_vec()
                })
                .collect();
            Ok(Artifact::Table { columns, rows })
        }
        Input::Hermite { r, z, normalized } => {
            let spec = HermiteSpec::new(r.clone(), z.clone())?;
            let n = MultiIndex::new(vec![n_max; spec.dim()]);
            let table = if *normalized { normalized_table(&spec, &n, DEFAULT_CAP)? } else { hermite_table(&spec, &n)? };
            let mut columns = index_columns(spec.dim());
            columns.extend(["re".to_string(), "im".to_string()]);
            let rows = table
                .iter()
                .map(|(k, v)| {
                    let mut row = index_row(k.entries());
                    row.extend([Cell::Real(v.re), Cell::Real(v.im)]);
                    row
                })
                .collect();
            Ok(Artifact::Table { columns, rows })
        }
    }
}
