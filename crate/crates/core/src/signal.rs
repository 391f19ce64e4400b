//! Scalar time signals with analytic or tabulated time derivatives.
//!
//! Every drive component of the oscillator is a [`Signal`]. Tabulated signals
//! are linearly interpolated; their derivatives come from second-order finite
//! differences at the nodes (one-sided at the ends) and are themselves
//! interpolated linearly between nodes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// A real function of time together with its derivative.
pub trait TimeSignal: Send + Sync {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;

    /// Closed interval on which the signal is defined, `None` for all of ℝ.
    fn window(&self) -> Option<(f64, f64)> {
        None
    }
}

pub type SharedSignal = Arc<dyn TimeSignal>;

/// Drive presets and sampled tables.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Signal {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    /// `amplitude * sin(frequency * t + phase)`
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `offset + slope * t`
    Ramp {
        slope: f64,
        #[serde(default)]
        offset: f64,
    },
    Table(SampledTable),
}

impl Signal {
    pub fn constant(value: f64) -> Self {
        Signal::Constant { value }
    }

    pub fn sin(amplitude: f64, frequency: f64) -> Self {
        Signal::Sinusoid {
            amplitude,
            frequency,
            phase: 0.0,
        }
    }

    pub fn cos(amplitude: f64, frequency: f64) -> Self {
        Signal::Sinusoid {
            amplitude,
            frequency,
            phase: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn ramp(slope: f64, offset: f64) -> Self {
        Signal::Ramp { slope, offset }
    }

    /// True when the signal vanishes identically.
    pub fn is_zero(&self) -> bool {
        match self {
            Signal::Zero => true,
            Signal::Constant { value } => *value == 0.0,
            Signal::Sinusoid { amplitude, .. } => *amplitude == 0.0,
            Signal::Ramp { slope, offset } => *slope == 0.0 && *offset == 0.0,
            Signal::Table(t) => t.values.iter().all(|v| *v == 0.0),
        }
    }
}

impl TimeSignal for Signal {
    fn value(&self, t: f64) -> f64 {
        match self {
            Signal::Zero => 0.0,
            Signal::Constant { value } => *value,
            Signal::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => amplitude * (frequency * t + phase).sin(),
            Signal::Ramp { slope, offset } => offset + slope * t,
            Signal::Table(table) => table.value(t),
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match self {
            Signal::Zero | Signal::Constant { .. } => 0.0,
            Signal::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => amplitude * frequency * (frequency * t + phase).cos(),
            Signal::Ramp { slope, .. } => *slope,
            Signal::Table(table) => table.derivative(t),
        }
    }

    fn window(&self) -> Option<(f64, f64)> {
        match self {
            Signal::Table(table) => Some(table.span()),
            _ => None,
        }
    }
}

/// Tabulated signal `(t_k, v_k)` with strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct SampledTable {
    times: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawTable> for SampledTable {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        SampledTable::new(raw.times, raw.values)
    }
}

impl From<SampledTable> for RawTable {
    fn from(t: SampledTable) -> Self {
        RawTable {
            times: t.times,
            values: t.values,
        }
    }
}

impl SampledTable {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        ensure(times.len() == values.len(), || {
            format!(
                "table has {} times but {} values",
                times.len(),
                values.len()
            )
        })?;
        ensure(times.len() >= 3, || {
            "a sampled table needs at least three samples".into()
        })?;
        ensure(times.iter().chain(&values).all(|v| v.is_finite()), || {
            "table entries must be finite".into()
        })?;
        ensure(times.windows(2).all(|w| w[1] > w[0]), || {
            "table time stamps must be strictly increasing".into()
        })?;
        let slopes = node_derivatives(&times, &values);
        Ok(SampledTable {
            times,
            values,
            slopes,
        })
    }

    /// Parses two-column `t,value` text; blank lines, `#` comments and a
    /// non-numeric header line are skipped.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split([',', ';', '\t', ' ']).filter(|c| !c.is_empty());
            let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
                return Err(Error::InvalidArgument(format!(
                    "table line {}: expected two columns",
                    lineno + 1
                )));
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(t), Ok(v)) => {
                    times.push(t);
                    values.push(v);
                }
                _ if times.is_empty() => continue,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "table line {}: cannot parse numbers",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(times, values)
    }

    pub fn span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.times.len();
        let k = match self.times.partition_point(|&x| x <= t) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        };
        let h = self.times[k + 1] - self.times[k];
        let s = ((t - self.times[k]) / h).clamp(0.0, 1.0);
        (k, s)
    }

    pub fn value(&self, t: f64) -> f64 {
        let (k, s) = self.locate(t);
        self.values[k] * (1.0 - s) + self.values[k + 1] * s
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (k, s) = self.locate(t);
        self.slopes[k] * (1.0 - s) + self.slopes[k + 1] * s
    }
}

/// Second-order three-point derivatives on a possibly nonuniform grid.
fn node_derivatives(t: &[f64], v: &[f64]) -> Vec<f64> {
    let n = t.len();
    let three_point = |i0: usize, at: usize| {
        // Derivative at t[at] of the parabola through nodes i0, i0+1, i0+2.
        let (x0, x1, x2) = (t[i0], t[i0 + 1], t[i0 + 2]);
        let x = t[at];
        let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
        let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
        let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
        l0 * v[i0] + l1 * v[i0 + 1] + l2 * v[i0 + 2]
    };
    (0..n)
        .map(|i| match i {
            0 => three_point(0, 0),
            i if i == n - 1 => three_point(n - 3, n - 1),
            i => three_point(i - 1, i),
        })
        .collect()
}
