use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORIGIN_TOL: f64 = 1e-12;

/// Squared frequency `ω²(t)` of `H = p²/2 + ω²(t)x²/2`, normalized to
/// `ω²(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FrequencyProfile {
    Constant,
    /// `ω² = 1` before `t0`, `omega_sq_after` from `t0` on.
    Step { t0: f64, omega_sq_after: f64 },
    /// Linear from 1 at `t0` to `omega_sq_after` at `t1`, then constant.
    Ramp { t0: f64, t1: f64, omega_sq_after: f64 },
    /// `ω² = 1 + amplitude·sin(frequency·t)`.
    Sinusoidal { amplitude: f64, frequency: f64 },
    /// Piecewise-linear table starting at `(0, 1)`, held constant past the end.
    Sampled { times: Vec<f64>, omega_sq: Vec<f64> },
}

impl FrequencyProfile {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            FrequencyProfile::Constant => {}
            FrequencyProfile::Step { t0, omega_sq_after } => {
                if !finite(&[*t0, *omega_sq_after]) || *t0 <= 0.0 {
                    return bad(format!("step needs finite t0 > 0, got {t0}"));
                }
            }
            FrequencyProfile::Ramp { t0, t1, omega_sq_after } => {
                if !finite(&[*t0, *t1, *omega_sq_after]) || *t0 < 0.0 || t1 <= t0 {
                    return bad(format!("ramp needs 0 ≤ t0 < t1, got [{t0}, {t1}]"));
                }
            }
            FrequencyProfile::Sinusoidal { amplitude, frequency } => {
                if !finite(&[*amplitude, *frequency]) {
                    return bad("sinusoidal parameters must be finite".into());
                }
            }
            FrequencyProfile::Sampled { times, omega_sq } => {
                if times.len() != omega_sq.len() || times.is_empty() {
                    return bad("sampled profile needs matching, non-empty tables".into());
                }
                if !finite(times) || !finite(omega_sq) {
                    return bad("sampled profile values must be finite".into());
                }
                if times[0] != 0.0 {
                    return bad(format!("sampled profile must start at t = 0, got {}", times[0]));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("sampled times must be strictly increasing".into());
                }
            }
        }
        let w0 = self.omega_sq(0.0);
        if (w0 - 1.0).abs() > ORIGIN_TOL {
            return bad(format!("ω²(0) = {w0}, expected 1"));
        }
        Ok(())
    }

    /// `ω²(t)`; at a jump the value from the right.
    pub fn omega_sq(&self, t: f64) -> f64 {
        self.omega_sq_piece(t, t)
    }

    /// Times where `ω²` or its derivative may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            FrequencyProfile::Constant | FrequencyProfile::Sinusoidal { .. } => vec![],
            FrequencyProfile::Step { t0, .. } => vec![*t0],
            FrequencyProfile::Ramp { t0, t1, .. } => vec![*t0, *t1],
            FrequencyProfile::Sampled { times, .. } => times[1..].to_vec(),
        }
    }

    /// The smooth piece containing `at`, evaluated at `t`. The integrator
    /// uses this so stages that land on a jump see the left-hand formula.
    pub(crate) fn omega_sq_piece(&self, t: f64, at: f64) -> f64 {
        match self {
            FrequencyProfile::Constant => 1.0,
            FrequencyProfile::Step { t0, omega_sq_after } => {
                if at < *t0 {
                    1.0
                } else {
                    *omega_sq_after
                }
            }
            FrequencyProfile::Ramp { t0, t1, omega_sq_after } => {
                if at < *t0 {
                    1.0
                } else if at < *t1 {
                    1.0 + (omega_sq_after - 1.0) * (t - t0) / (t1 - t0)
                } else {
                    *omega_sq_after
                }
            }
            FrequencyProfile::Sinusoidal { amplitude, frequency } => 1.0 + amplitude * (frequency * t).sin(),
            FrequencyProfile::Sampled { times, omega_sq } => {
                let k = times.partition_point(|&s| s <= at);
                if k == times.len() {
                    return omega_sq[k - 1];
                }
                let k = k.max(1);
                let (a, b) = (times[k - 1], times[k]);
                omega_sq[k - 1] + (omega_sq[k] - omega_sq[k - 1]) * (t - a) / (b - a)
            }
        }
    }
}
