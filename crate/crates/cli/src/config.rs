//! Job configuration: strict parsing with every violation reported at once.
//!
//! ```json
//! {
//!   "command": "cat-pnd",
//!   "input": {"alpha": [[1, 0]], "parity": "even"},
//!   "output": {"path": "out.csv", "format": "csv"},
//!   "grid": {"extent": 6.0, "points": 121},
//!   "caps": {"n_max": 10, "cutoff": 12},
//!   "workers": 2
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs or plain reals.

use num_complex::Complex64 as C64;
use photostat::cat_states::Parity;
use photostat::linalg::{CMatrix, CVector, RMatrix, RVector};
use photostat::oscillator::FrequencyProfile;
use photostat::phase_space::Representation;
use serde::Serialize;
use serde_json::{Map, Value};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_EXTENT: f64 = 6.0;
pub const DEFAULT_POINTS: usize = 121;
pub const DEFAULT_N_MAX: usize = 10;
pub const DEFAULT_CUTOFF: usize = 12;
pub const DEFAULT_DT: f64 = 0.001;

/// One schema violation, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigIssue {
    pub pointer: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GaussianPnd,
    CatPnd,
    CatWigner,
    Qfunc,
    Transform,
    Oscillator,
    Hermite,
}

impl Command {
    pub const ALL: [(&'static str, Command); 7] = [
        ("gaussian-pnd", Command::GaussianPnd),
        ("cat-pnd", Command::CatPnd),
        ("cat-wigner", Command::CatWigner),
        ("qfunc", Command::Qfunc),
        ("transform", Command::Transform),
        ("oscillator", Command::Oscillator),
        ("hermite", Command::Hermite),
    ];

    pub fn name(self) -> &'static str {
        Command::ALL.iter().find(|(_, c)| *c == self).map(|(n, _)| *n).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub extent: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Caps {
    pub n_max: usize,
    pub cutoff: usize,
}

/// Gaussian states by preset, or by mean and dispersion in `(p…, q…)` order.
#[derive(Debug, Clone, PartialEq)]
pub enum GaussianSpec {
    Vacuum { modes: usize },
    Coherent { alpha: Vec<C64> },
    Thermal { nbar: Vec<f64> },
    Squeezed { r: f64, phi: f64, alpha: C64 },
    General { mean: RVector, disp: RMatrix },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatSpec {
    pub alpha: Vec<C64>,
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Gaussian(GaussianSpec),
    Cat(CatSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    GaussianPnd(GaussianSpec),
    CatPnd(CatSpec),
    CatWigner(CatSpec),
    Qfunc(StateSpec),
    Transform { from: Representation, to: Representation, state: StateSpec, sampled: bool },
    Oscillator { profile: FrequencyProfile, t_end: f64, dt: f64, every: usize },
    Hermite { r: CMatrix, z: CVector, normalized: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    pub input: Input,
    pub output: OutputSpec,
    pub grid: GridSpec,
    pub caps: Caps,
    pub workers: Option<usize>,
}

fn child(ptr: &str, key: &str) -> String {
    format!("{ptr}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

#[derive(Default)]
struct Checker {
    issues: Vec<ConfigIssue>,
}

impl Checker {
    fn err(&mut self, pointer: impl Into<String>, message: impl Into<String>) {
        self.issues.push(ConfigIssue { pointer: pointer.into(), message: message.into() });
    }

    /// An object whose keys all come from `allowed`.
    fn object<'a>(&mut self, v: &'a Value, ptr: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        let Value::Object(map) = v else {
            self.err(ptr, format!("expected an object, found {}", kind(v)));
            return None;
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.err(child(ptr, key), format!("unknown field (allowed: {})", allowed.join(", ")));
            }
        }
        Some(map)
    }

    fn required<'a>(&mut self, map: &'a Map<String, Value>, key: &str, ptr: &str) -> Option<&'a Value> {
        let v = map.get(key);
        if v.is_none() {
            self.err(child(ptr, key), "missing required field");
        }
        v
    }

    fn real(&mut self, v: &Value, ptr: &str) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.err(ptr, format!("expected a finite number, found {}", kind(v)));
                None
            }
        }
    }

    fn positive(&mut self, v: &Value, ptr: &str) -> Option<f64> {
        let x = self.real(v, ptr)?;
        if x <= 0.0 {
            self.err(ptr, format!("must be positive, got {x}"));
            return None;
        }
        Some(x)
    }

    fn count(&mut self, v: &Value, ptr: &str, min: u64) -> Option<usize> {
        match v.as_u64() {
            Some(n) if n >= min => Some(n as usize),
            _ => {
                let shown = if v.is_number() { v.to_string() } else { kind(v).to_string() };
                self.err(ptr, format!("expected an integer ≥ {min}, found {shown}"));
                None
            }
        }
    }

    fn boolean(&mut self, v: &Value, ptr: &str) -> Option<bool> {
        let b = v.as_bool();
        if b.is_none() {
            self.err(ptr, format!("expected a boolean, found {}", kind(v)));
        }
        b
    }

    fn complex(&mut self, v: &Value, ptr: &str) -> Option<C64> {
        if let Some(x) = v.as_f64() {
            return Some(C64::new(x, 0.0));
        }
        match v.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => {
                let re = self.real(re, &child(ptr, "0"));
                let im = self.real(im, &child(ptr, "1"));
                Some(C64::new(re?, im?))
            }
            _ => {
                self.err(ptr, format!("expected a number or [re, im], found {}", kind(v)));
                None
            }
        }
    }

    fn list<T>(&mut self, v: &Value, ptr: &str, mut item: impl FnMut(&mut Self, &Value, &str) -> Option<T>) -> Option<Vec<T>> {
        let Some(arr) = v.as_array() else {
            self.err(ptr, format!("expected an array, found {}", kind(v)));
            return None;
        };
        if arr.is_empty() {
            self.err(ptr, "must not be empty");
            return None;
        }
        let out: Vec<Option<T>> = arr.iter().enumerate().map(|(i, x)| item(self, x, &child(ptr, &i.to_string()))).collect();
        out.into_iter().collect()
    }

    fn square<T: Clone>(&mut self, v: &Value, ptr: &str, item: impl Fn(&mut Self, &Value, &str) -> Option<T> + Copy) -> Option<Vec<Vec<T>>> {
        let rows = self.list(v, ptr, |c, row, p| c.list(row, p, item))?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            self.err(ptr, format!("expected a square {n}×{n} matrix"));
            return None;
        }
        Some(rows)
    }

    fn parity(&mut self, v: &Value, ptr: &str) -> Option<Parity> {
        match v.as_str() {
            Some("even") => Some(Parity::Even),
            Some("odd") => Some(Parity::Odd),
            _ => {
                self.err(ptr, "expected \"even\" or \"odd\"");
                None
            }
        }
    }

    fn cat(&mut self, v: &Value, ptr: &str, extra: &[&str]) -> Option<CatSpec> {
        let mut allowed = vec!["alpha", "parity"];
        allowed.extend_from_slice(extra);
        let map = self.object(v, ptr, &allowed)?;
        let alpha = self.required(map, "alpha", ptr).and_then(|a| self.list(a, &child(ptr, "alpha"), Self::complex));
        let parity = self.required(map, "parity", ptr).and_then(|p| self.parity(p, &child(ptr, "parity")));
        Some(CatSpec { alpha: alpha?, parity: parity? })
    }

    fn state(&mut self, v: &Value, ptr: &str, allow_cat: bool) -> Option<StateSpec> {
        if let Some(name) = v.as_str() {
            return match name {
                "vacuum" => Some(StateSpec::Gaussian(GaussianSpec::Vacuum { modes: 1 })),
                _ => {
                    self.err(ptr, format!("unknown state shorthand {name:?} (only \"vacuum\")"));
                    None
                }
            };
        }
        let Some(tag) = v.get("state") else {
            if v.is_object() {
                self.err(child(ptr, "state"), "missing required field");
            } else {
                self.err(ptr, format!("expected an object or \"vacuum\", found {}", kind(v)));
            }
            return None;
        };
        let tag_ptr = child(ptr, "state");
        match tag.as_str() {
            Some("vacuum") => {
                let map = self.object(v, ptr, &["state", "modes"])?;
                let modes = match map.get("modes") {
                    Some(m) => self.count(m, &child(ptr, "modes"), 1)?,
                    None => 1,
                };
                Some(StateSpec::Gaussian(GaussianSpec::Vacuum { modes }))
            }
            Some("coherent") => {
                let map = self.object(v, ptr, &["state", "alpha"])?;
                let alpha = self.required(map, "alpha", ptr).and_then(|a| self.list(a, &child(ptr, "alpha"), Self::complex))?;
                Some(StateSpec::Gaussian(GaussianSpec::Coherent { alpha }))
            }
            Some("thermal") => {
                let map = self.object(v, ptr, &["state", "nbar"])?;
                let nbar = self.required(map, "nbar", ptr).and_then(|a| {
                    self.list(a, &child(ptr, "nbar"), |c, x, p| {
                        let n = c.real(x, p)?;
                        if n < 0.0 {
                            c.err(p, format!("mean photon number must be ≥ 0, got {n}"));
                            return None;
                        }
                        Some(n)
                    })
                })?;
                Some(StateSpec::Gaussian(GaussianSpec::Thermal { nbar }))
            }
            Some("squeezed") => {
                let map = self.object(v, ptr, &["state", "r", "phi", "alpha"])?;
                let r = self.required(map, "r", ptr).and_then(|x| self.real(x, &child(ptr, "r")));
                let phi = map.get("phi").map(|x| self.real(x, &child(ptr, "phi"))).unwrap_or(Some(0.0));
                let alpha = map.get("alpha").map(|x| self.complex(x, &child(ptr, "alpha"))).unwrap_or(Some(C64::new(0.0, 0.0)));
                Some(StateSpec::Gaussian(GaussianSpec::Squeezed { r: r?, phi: phi?, alpha: alpha? }))
            }
            Some("general") => {
                let map = self.object(v, ptr, &["state", "mean", "disp"])?;
                let mean = self.required(map, "mean", ptr).and_then(|m| self.list(m, &child(ptr, "mean"), Self::real));
                let disp = self.required(map, "disp", ptr).and_then(|d| self.square(d, &child(ptr, "disp"), Self::real));
                let (mean, disp) = (mean?, disp?);
                let n = disp.len();
                if n % 2 != 0 || mean.len() != n {
                    self.err(ptr, format!("need a 2N×2N disp and 2N means, got {n}×{n} and {}", mean.len()));
                    return None;
                }
                Some(StateSpec::Gaussian(GaussianSpec::General {
                    mean: RVector::from_vec(mean),
                    disp: RMatrix::from_fn(n, n, |i, j| disp[i][j]),
                }))
            }
            Some("cat") if allow_cat => Some(StateSpec::Cat(self.cat(v, ptr, &["state"])?)),
            _ => {
                let names = if allow_cat { "vacuum, coherent, thermal, squeezed, general, cat" } else { "vacuum, coherent, thermal, squeezed, general" };
                self.err(tag_ptr, format!("unknown state {tag} (expected one of {names})"));
                None
            }
        }
    }

    fn representation(&mut self, v: &Value, ptr: &str) -> Option<Representation> {
        match v.as_str() {
            Some("wigner") => Some(Representation::Wigner),
            Some("qfunc") => Some(Representation::Qfunc),
            Some("density") => Some(Representation::Density),
            _ => {
                self.err(ptr, "expected \"wigner\", \"qfunc\" or \"density\"");
                None
            }
        }
    }

    fn profile(&mut self, v: &Value, ptr: &str) -> Option<FrequencyProfile> {
        let value = match v.as_str() {
            Some(name) => serde_json::json!({ "type": name }),
            None => v.clone(),
        };
        match serde_json::from_value::<FrequencyProfile>(value) {
            Ok(p) => match p.validate() {
                Ok(()) => Some(p),
                Err(e) => {
                    self.err(ptr, e.to_string());
                    None
                }
            },
            Err(e) => {
                self.err(ptr, format!("invalid profile: {e}"));
                None
            }
        }
    }

    fn input(&mut self, command: Command, v: &Value) -> Option<Input> {
        let ptr = "/input";
        match command {
            Command::GaussianPnd => match self.state(v, ptr, false)? {
                StateSpec::Gaussian(g) => Some(Input::GaussianPnd(g)),
                StateSpec::Cat(_) => None,
            },
            Command::CatPnd => Some(Input::CatPnd(self.cat(v, ptr, &[])?)),
            Command::CatWigner => Some(Input::CatWigner(self.cat(v, ptr, &[])?)),
            Command::Qfunc => Some(Input::Qfunc(self.state(v, ptr, true)?)),
            Command::Transform => {
                let map = self.object(v, ptr, &["from", "to", "state", "sampled"])?;
                let from = self.required(map, "from", ptr).and_then(|x| self.representation(x, "/input/from"));
                let to = self.required(map, "to", ptr).and_then(|x| self.representation(x, "/input/to"));
                let state = self.required(map, "state", ptr).and_then(|x| self.state(x, "/input/state", true));
                let sampled = map.get("sampled").map(|x| self.boolean(x, "/input/sampled")).unwrap_or(Some(false));
                let (from, to) = (from?, to?);
                if from == to {
                    self.err("/input/to", "must differ from /input/from");
                    return None;
                }
                Some(Input::Transform { from, to, state: state?, sampled: sampled? })
            }
            Command::Oscillator => {
                let map = self.object(v, ptr, &["profile", "t_end", "dt", "every"])?;
                let profile = self.required(map, "profile", ptr).and_then(|x| self.profile(x, "/input/profile"));
                let t_end = self.required(map, "t_end", ptr).and_then(|x| self.positive(x, "/input/t_end"));
                let dt = map.get("dt").map(|x| self.positive(x, "/input/dt")).unwrap_or(Some(DEFAULT_DT));
                let every = map.get("every").map(|x| self.count(x, "/input/every", 1)).unwrap_or(Some(1));
                Some(Input::Oscillator { profile: profile?, t_end: t_end?, dt: dt?, every: every? })
            }
            Command::Hermite => {
                let map = self.object(v, ptr, &["r", "z", "normalized"])?;
                let r = self.required(map, "r", ptr).and_then(|x| self.square(x, "/input/r", Self::complex));
                let z = self.required(map, "z", ptr).and_then(|x| self.list(x, "/input/z", Self::complex));
                let normalized = map.get("normalized").map(|x| self.boolean(x, "/input/normalized")).unwrap_or(Some(false));
                let (r, z) = (r?, z?);
                if z.len() != r.len() {
                    self.err("/input/z", format!("length {} does not match the {}×{} matrix r", z.len(), r.len(), r.len()));
                    return None;
                }
                let n = r.len();
                Some(Input::Hermite {
                    r: CMatrix::from_fn(n, n, |i, j| r[i][j]),
                    z: CVector::from_vec(z),
                    normalized: normalized?,
                })
            }
        }
    }
}

/// Parses and validates a job; on failure returns every issue found.
pub fn validate_config(raw: &Value) -> Result<JobConfig, Vec<ConfigIssue>> {
    let mut c = Checker::default();
    let Some(map) = c.object(raw, "", &["command", "input", "output", "grid", "caps", "workers"]) else {
        return Err(c.issues);
    };
    let command = c.required(map, "command", "").and_then(|v| {
        let found = v.as_str().and_then(|s| Command::ALL.iter().find(|(n, _)| *n == s).map(|(_, c)| *c));
        if found.is_none() {
            let names: Vec<&str> = Command::ALL.iter().map(|(n, _)| *n).collect();
            c.err("/command", format!("expected one of {}", names.join(", ")));
        }
        found
    });
    let input_raw = c.required(map, "input", "");
    let input = match (command, input_raw) {
        (Some(cmd), Some(v)) => c.input(cmd, v),
        _ => None,
    };

    let mut output = OutputSpec::default();
    if let Some(v) = map.get("output") {
        if let Some(o) = c.object(v, "/output", &["path", "format"]) {
            if let Some(p) = o.get("path") {
                match p.as_str() {
                    Some(s) if !s.is_empty() => output.path = Some(s.to_string()),
                    _ => c.err("/output/path", "expected a non-empty string"),
                }
            }
            if let Some(f) = o.get("format") {
                match f.as_str().map(str::parse::<Format>) {
                    Some(Ok(fmt)) => output.format = Some(fmt),
                    _ => c.err("/output/format", "expected \"csv\" or \"json\""),
                }
            }
        }
    }

    let mut grid = GridSpec { extent: DEFAULT_EXTENT, points: DEFAULT_POINTS };
    if let Some(v) = map.get("grid") {
        if let Some(g) = c.object(v, "/grid", &["extent", "points"]) {
            if let Some(e) = g.get("extent").and_then(|e| c.positive(e, "/grid/extent")) {
                grid.extent = e;
            }
            if let Some(p) = g.get("points").and_then(|p| c.count(p, "/grid/points", 2)) {
                grid.points = p;
            }
        }
    }

    let mut caps = Caps { n_max: DEFAULT_N_MAX, cutoff: DEFAULT_CUTOFF };
    if let Some(v) = map.get("caps") {
        if let Some(m) = c.object(v, "/caps", &["n_max", "cutoff"]) {
            if let Some(n) = m.get("n_max").and_then(|n| c.count(n, "/caps/n_max", 0)) {
                caps.n_max = n;
            }
            if let Some(n) = m.get("cutoff").and_then(|n| c.count(n, "/caps/cutoff", 1)) {
                caps.cutoff = n;
            }
        }
    }

    let workers = map.get("workers").and_then(|w| c.count(w, "/workers", 1));

    if !c.issues.is_empty() {
        return Err(c.issues);
    }
    Ok(JobConfig { command: command.unwrap(), input: input.unwrap(), output, grid, caps, workers })
}

/// Parses JSON text, reporting syntax errors as an issue at the root.
pub fn parse_config(text: &str) -> Result<JobConfig, Vec<ConfigIssue>> {
    let raw: Value = serde_json::from_str(text)
        .map_err(|e| vec![ConfigIssue { pointer: String::new(), message: format!("invalid JSON: {e}") }])?;
    validate_config(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn pointers(v: Value) -> Vec<String> {
        validate_config(&v).unwrap_err().into_iter().map(|i| i.pointer).collect()
    }

    #[test]
    fn empty_object_lists_both_missing_fields() {
        assert_eq!(pointers(json!({})), vec!["/command", "/input"]);
    }

    #[test]
    fn negative_points_located() {
        let v = json!({"command": "cat-wigner", "input": {"alpha": [[1, 0]], "parity": "odd"}, "grid": {"points": -4}});
        assert_eq!(pointers(v), vec!["/grid/points"]);
    }

    #[test]
    fn minimal_cat_pnd() {
        let cfg = validate_config(&json!({"command": "cat-pnd", "input": {"alpha": [[1, 0]], "parity": "even"}})).unwrap();
        assert_eq!(cfg.command, Command::CatPnd);
        assert_eq!(cfg.input, Input::CatPnd(CatSpec { alpha: vec![C64::new(1.0, 0.0)], parity: Parity::Even }));
        assert_eq!(cfg.caps.n_max, DEFAULT_N_MAX);
    }

    #[test]
    fn all_issues_reported_together() {
        let v = json!({
            "command": "oscillator",
            "input": {"profile": {"type": "step", "t0": 1.0}, "t_end": -1, "speed": 3},
            "caps": {"n_max": "ten"},
            "colour": "blue"
        });
        let p = pointers(v);
        for want in ["/colour", "/input/speed", "/input/profile", "/input/t_end", "/caps/n_max"] {
            assert!(p.iter().any(|x| x == want), "{want} missing from {p:?}");
        }
    }

    #[test]
    fn shorthands() {
        let cfg = validate_config(&json!({"command": "gaussian-pnd", "input": "vacuum"})).unwrap();
        assert_eq!(cfg.input, Input::GaussianPnd(GaussianSpec::Vacuum { modes: 1 }));
        let cfg = validate_config(&json!({"command": "oscillator", "input": {"profile": "constant", "t_end": 10}})).unwrap();
        assert!(matches!(cfg.input, Input::Oscillator { profile: FrequencyProfile::Constant, .. }));
    }

    #[test]
    fn pointer_escaping() {
        assert_eq!(pointers(json!({"command": "qfunc", "input": "vacuum", "a/b~": 1})), vec!["/a~1b~0"]);
    }

    #[test]
    fn cat_rejected_for_gaussian_pnd() {
        let v = json!({"command": "gaussian-pnd", "input": {"state": "cat", "alpha": [1], "parity": "even"}});
        assert_eq!(pointers(v), vec!["/input/state"]);
    }
}
