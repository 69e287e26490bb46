use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;

pub const GRID_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Wigner,
    Qfunc,
    Density,
}

/// Uniform sample points `start + i·step`, `i < len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub label: String,
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(label: impl Into<String>, start: f64, step: f64, len: usize) -> Result<Self> {
        let axis = Axis { label: label.into(), start, step, len };
        axis.validate()?;
        Ok(axis)
    }

    /// `len` points spanning `[start, stop]`.
    pub fn linspace(label: impl Into<String>, start: f64, stop: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidArgument("an axis needs at least two points".into()));
        }
        Self::new(label, start, (stop - start) / (len - 1) as f64, len)
    }

    /// `len` points spanning `[−extent, extent]`.
    pub fn symmetric(label: impl Into<String>, extent: f64, len: usize) -> Result<Self> {
        Self::linspace(label, -extent, extent, len)
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite() && self.start.is_finite()) {
            return Err(Error::InvalidArgument(format!("axis {}: step must be positive and finite", self.label)));
        }
        if self.len < 2 {
            return Err(Error::InvalidArgument(format!("axis {}: needs at least two points", self.label)));
        }
        Ok(())
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn relabeled(&self, label: impl Into<String>) -> Axis {
        Axis { label: label.into(), ..self.clone() }
    }

    /// Same points, multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64, label: impl Into<String>) -> Axis {
        Axis { label: label.into(), start: self.start * factor, step: self.step * factor, len: self.len }
    }

    /// Same sampling, ignoring labels.
    pub fn same_points(&self, other: &Axis) -> bool {
        self.len == other.len
            && (self.start - other.start).abs() <= 1e-12 * self.step
            && (self.step - other.step).abs() <= 1e-12 * self.step
    }

    /// Fractional index of `x`.
    pub fn locate(&self, x: f64) -> f64 {
        (x - self.start) / self.step
    }
}

/// Complex samples of a phase-space function on a tensor grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    kind: Representation,
    axes: Vec<Axis>,
    values: Vec<C64>,
}

/// JSON sidecar describing the axes of a CSV value file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSidecar {
    pub schema_version: u32,
    pub kind: Representation,
    pub axes: Vec<Axis>,
}

impl GridFunction {
    pub fn new(kind: Representation, axes: Vec<Axis>, values: Vec<C64>) -> Result<Self> {
        if axes.is_empty() || axes.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!("expected an even number of axes, got {}", axes.len())));
        }
        for a in &axes {
            a.validate()?;
        }
        let len: usize = axes.iter().map(|a| a.len).product();
        if len != values.len() {
            return Err(Error::DimensionMismatch { expected: len, found: values.len() });
        }
        Ok(GridFunction { kind, axes, values })
    }

    /// Samples `f` at every grid point, in parallel.
    pub fn from_fn(kind: Representation, axes: Vec<Axis>, f: impl Fn(&[f64]) -> C64 + Sync) -> Result<Self> {
        let shell = GridFunction::new(kind, axes.clone(), vec![C64::new(0.0, 0.0); axes.iter().map(|a| a.len).product()])?;
        let values = (0..shell.len()).into_par_iter().map(|k| f(&shell.coords(k))).collect();
        Ok(GridFunction { values, ..shell })
    }

    /// Real-valued convenience over [`GridFunction::from_fn`].
    pub fn from_real_fn(kind: Representation, axes: Vec<Axis>, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        Self::from_fn(kind, axes, |x| C64::new(f(x), 0.0))
    }

    pub fn kind(&self) -> Representation {
        self.kind
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn modes(&self) -> usize {
        self.axes.len() / 2
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len).collect()
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for d in (0..self.axes.len()).rev() {
            idx[d] = flat % self.axes[d].len;
            flat /= self.axes[d].len;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, a)| acc * a.len + i)
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat).iter().zip(&self.axes).map(|(&i, a)| a.point(i)).collect()
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.values[self.flat_index(idx)]
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    /// Riemann sum `Σ v · ∏ hᵢ`.
    pub fn integral(&self) -> C64 {
        self.values.iter().sum::<C64>() * self.cell_volume()
    }

    /// `∫W/(2π)^N`, `∫Q/π^N` or `Tr ρ`, whichever applies.
    pub fn normalization(&self) -> C64 {
        let n = self.modes() as i32;
        match self.kind {
            Representation::Wigner => self.integral() / (2.0 * std::f64::consts::PI).powi(n),
            Representation::Qfunc => self.integral() / std::f64::consts::PI.powi(n),
            Representation::Density => {
                let mut acc = C64::new(0.0, 0.0);
                for (k, v) in self.values.iter().enumerate() {
                    let idx = self.unravel(k);
                    if idx.chunks(2).all(|p| p[0] == p[1]) {
                        acc += v;
                    }
                }
                acc * self.axes.iter().step_by(2).map(|a| a.step).product::<f64>()
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    pub fn min_real(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(v.re))
    }

    /// Share of `Σ|v|` carried by samples on the outer faces of the grid.
    pub fn boundary_fraction(&self) -> f64 {
        let mut edge = 0.0;
        let mut total = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            let a = v.norm();
            total += a;
            if self.unravel(k).iter().zip(&self.axes).any(|(&i, ax)| i == 0 || i + 1 == ax.len) {
                edge += a;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            edge / total
        }
    }

    /// `max |ρ(X) − ρ(X̃)*| / max |ρ|` with `X̃` swapping `x_k ↔ x′_k`.
    pub fn hermiticity_residual(&self) -> Result<f64> {
        if self.kind != Representation::Density {
            return Err(Error::InvalidArgument("hermiticity applies to density grids".into()));
        }
        for pair in self.axes.chunks(2) {
            if !pair[0].same_points(&pair[1]) {
                return Err(Error::InvalidArgument("x and x′ axes must coincide".into()));
            }
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let mut worst: f64 = 0.0;
        for (k, v) in self.values.iter().enumerate() {
            let mut idx = self.unravel(k);
            for p in idx.chunks_mut(2) {
                p.swap(0, 1);
            }
            worst = worst.max((v - self.get(&idx).conj()).norm());
        }
        Ok(worst / scale)
    }

    /// `max |self − other|` over a grid with identical sampling.
    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        if self.axes.len() != other.axes.len() || self.axes.iter().zip(&other.axes).any(|(a, b)| !a.same_points(b)) {
            return Err(Error::InvalidArgument("grids differ".into()));
        }
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn with_values(&self, kind: Representation, values: Vec<C64>) -> Result<GridFunction> {
        GridFunction::new(kind, self.axes.clone(), values)
    }

    pub fn sidecar(&self) -> GridSidecar {
        GridSidecar { schema_version: GRID_SCHEMA_VERSION, kind: self.kind, axes: self.axes.clone() }
    }

    pub fn sidecar_json(&self) -> String {
        serde_json::to_string_pretty(&self.sidecar()).expect("sidecar serializes")
    }

    /// One `re,im` row per sample in storage order.
    pub fn values_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 48);
        out.push_str("re,im\n");
        for v in &self.values {
            out.push_str(&format::float(v.re));
            out.push(',');
            out.push_str(&format::float(v.im));
            out.push('\n');
        }
        out
    }

    /// Like [`values_csv`](Self::values_csv) with the coordinates of each
    /// sample in front, for plotting tools.
    pub fn table_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 24 * (self.axes.len() + 2));
        for ax in &self.axes {
            out.push_str(&ax.label);
            out.push(',');
        }
        out.push_str("re,im\n");
        for (k, v) in self.values.iter().enumerate() {
            for c in self.coords(k) {
                out.push_str(&format::float(c));
                out.push(',');
            }
            out.push_str(&format::float(v.re));
            out.push(',');
            out.push_str(&format::float(v.im));
            out.push('\n');
        }
        out
    }

    pub fn from_sidecar_and_csv(sidecar: &str, csv: &str) -> Result<GridFunction> {
        let meta: GridSidecar = serde_json::from_str(sidecar).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        if meta.schema_version != GRID_SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!("unsupported schema_version {}", meta.schema_version)));
        }
        let mut values = Vec::new();
        for (line_no, line) in csv.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (line_no == 0 && line.starts_with(|c: char| c.is_ascii_alphabetic())) {
                continue;
            }
            // the last two columns are re,im; leading coordinate columns are ignored
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() < 2 {
                return Err(Error::InvalidArgument(format!("line {}: expected re,im", line_no + 1)));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse::<f64>().map_err(|e| Error::InvalidArgument(format!("line {}: {e}", line_no + 1)))
            };
            values.push(C64::new(parse(cols[cols.len() - 2])?, parse(cols[cols.len() - 1])?));
        }
        GridFunction::new(meta.kind, meta.axes, values)
    }
}

/// Axis labels for mode `k` of a representation.
pub(crate) fn labels(kind: Representation, k: usize) -> [String; 2] {
    match kind {
        Representation::Wigner => [format!("p{k}"), format!("q{k}")],
        Representation::Density => [format!("x{k}"), format!("x{k}'")],
        Representation::Qfunc => [format!("re_beta{k}"), format!("im_beta{k}")],
    }
}
