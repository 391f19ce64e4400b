//! Run configuration: JSON file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use ncosc_core::{Dim, DriveField, GridSpec, NcSpace, OscillatorConfig, SampledTable, Signal};
use serde::{Deserialize, Serialize};

/// Bad input from the user; the binary exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// `count` evenly spaced values on `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl RangeSpec {
    pub fn scalar(v: f64) -> Self {
        RangeSpec { min: v, max: v, count: 1 }
    }

    /// Parses `v` or `min:max:count`.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| usage(format!("`{s}` is not a number in range `{text}`")))
        };
        let range = match parts.as_slice() {
            [v] => RangeSpec::scalar(num(v)?),
            [lo, hi, n] => RangeSpec {
                min: num(lo)?,
                max: num(hi)?,
                count: n
                    .parse()
                    .map_err(|_| usage(format!("`{n}` is not a point count in range `{text}`")))?,
            },
            _ => return Err(usage(format!("expected `value` or `min:max:count`, got `{text}`"))),
        };
        range.validate()?;
        Ok(range)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(usage("range bounds must be finite"));
        }
        if self.min < 0.0 {
            return Err(usage(format!("ranges must be nonnegative, got minimum {}", self.min)));
        }
        if self.count == 0 {
            return Err(usage("range count must be at least 1"));
        }
        if self.max < self.min {
            return Err(usage(format!("range maximum {} is below minimum {}", self.max, self.min)));
        }
        if self.count == 1 && self.max != self.min {
            return Err(usage("a single-point range needs min = max"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.max
                } else {
                    self.min + span * k as f64 / (self.count - 1) as f64
                }
            })
            .collect()
    }

    pub fn is_scalar(&self) -> bool {
        self.count == 1
    }
}

impl<'de> Deserialize<'de> for RangeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
            Full { min: f64, max: f64, count: usize },
        }
        let range = match Raw::deserialize(d)? {
            Raw::Number(v) => RangeSpec::scalar(v),
            Raw::Text(s) => RangeSpec::parse(&s).map_err(serde::de::Error::custom)?,
            Raw::Full { min, max, count } => RangeSpec { min, max, count },
        };
        range.validate().map_err(serde::de::Error::custom)?;
        Ok(range)
    }
}

/// Drive per axis: a compact spec string or explicit signal objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DriveConfig {
    Spec(String),
    Signals(Vec<Signal>),
}

impl Default for DriveConfig {
    fn default() -> Self {
        DriveConfig::Spec("zero".into())
    }
}

/// Parses one axis of a drive spec; table paths resolve against `base`.
pub fn parse_signal(text: &str, base: &Path) -> anyhow::Result<Signal> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("`{s}` is not a number in drive `{text}`")))
    };
    let signal = match parts.as_slice() {
        ["zero"] => Signal::Zero,
        ["const", v] => Signal::constant(num(v)?),
        ["sin", a, w] => Signal::sin(num(a)?, num(w)?),
        ["sin", a, w, p] => Signal::Sinusoid {
            amplitude: num(a)?,
            frequency: num(w)?,
            phase: num(p)?,
        },
        ["cos", a, w] => Signal::cos(num(a)?, num(w)?),
        ["cos", a, w, p] => Signal::Sinusoid {
            amplitude: num(a)?,
            frequency: num(w)?,
            phase: num(p)? + std::f64::consts::FRAC_PI_2,
        },
        ["ramp", s] => Signal::ramp(num(s)?, 0.0),
        ["ramp", s, o] => Signal::ramp(num(s)?, num(o)?),
        ["table", rest @ ..] if !rest.is_empty() => {
            let path = base.join(rest.join(":"));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| usage(format!("cannot read drive table {}: {e}", path.display())))?;
            Signal::Table(SampledTable::parse_csv(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?)
        }
        _ => {
            return Err(usage(format!(
                "unknown drive `{text}`; expected zero, const:v, sin:amp:freq[:phase], cos:amp:freq[:phase], \
                 ramp:slope[:offset] or table:path"
            )))
        }
    };
    Ok(signal)
}

/// Comma-separated per-axis drive spec.
pub fn parse_drive(text: &str, base: &Path) -> anyhow::Result<Vec<Signal>> {
    text.split(',').map(|part| parse_signal(part, base)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DomainChoice {
    Position,
    Momentum,
    Both,
}

/// Everything a command needs. Missing fields take natural-unit defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    pub theta: RangeSpec,
    pub eta: RangeSpec,
    pub m: f64,
    pub omega0: f64,
    pub q: f64,
    pub hbar: f64,
    pub drive: DriveConfig,
    pub t: f64,
    pub grid_points: Option<usize>,
    pub grid_sigmas: Option<f64>,
    pub quadrature: bool,
    pub out: Option<PathBuf>,
    pub perturb_phase: f64,
    pub n: Option<Vec<u32>>,
    pub domain: DomainChoice,
    /// Directory that relative table paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 2,
            theta: RangeSpec::scalar(0.0),
            eta: RangeSpec::scalar(0.0),
            m: 1.0,
            omega0: 1.0,
            q: 1.0,
            hbar: 1.0,
            drive: DriveConfig::default(),
            t: 1.0,
            grid_points: None,
            grid_sigmas: None,
            quadrature: false,
            out: None,
            perturb_phase: 0.0,
            n: None,
            domain: DomainChoice::Both,
            base_dir: PathBuf::from("."),
        }
    }
}

/// Command-line values that replace config-file entries when present.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub dim: Option<usize>,
    pub theta: Option<RangeSpec>,
    pub eta: Option<RangeSpec>,
    pub m: Option<f64>,
    pub omega0: Option<f64>,
    pub q: Option<f64>,
    pub hbar: Option<f64>,
    pub drive: Option<String>,
    pub t: Option<f64>,
    pub grid_points: Option<usize>,
    pub grid_sigmas: Option<f64>,
    pub quadrature: bool,
    pub out: Option<PathBuf>,
    pub perturb_phase: Option<f64>,
    pub n: Option<Vec<u32>>,
    pub domain: Option<DomainChoice>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// Config file (if any) with flags applied on top.
    pub fn resolve(config: Option<&Path>, flags: Overrides) -> anyhow::Result<Self> {
        let mut cfg = match config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: Overrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { self.$f = v; } )* };
        }
        take!(dim, theta, eta, m, omega0, q, hbar, t, perturb_phase, domain);
        if let Some(d) = o.drive {
            self.drive = DriveConfig::Spec(d);
            self.base_dir = PathBuf::from(".");
        }
        if o.grid_points.is_some() {
            self.grid_points = o.grid_points;
        }
        if o.grid_sigmas.is_some() {
            self.grid_sigmas = o.grid_sigmas;
        }
        if o.out.is_some() {
            self.out = o.out;
        }
        if o.n.is_some() {
            self.n = o.n;
        }
        self.quadrature |= o.quadrature;
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.dimension()?;
        self.theta.validate()?;
        self.eta.validate()?;
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(usage(format!("--t must be a nonnegative time, got {}", self.t)));
        }
        if !self.perturb_phase.is_finite() {
            return Err(usage("--perturb-phase must be finite"));
        }
        self.grid()?;
        self.oscillator()?;
        NcSpace::new(self.theta.min, self.eta.min, self.dimension()?, self.hbar).map_err(|e| usage(e.to_string()))?;
        Ok(())
    }

    pub fn dimension(&self) -> anyhow::Result<Dim> {
        Dim::try_from(self.dim).map_err(|_| usage(format!("--dim must be 2 or 3, got {}", self.dim)))
    }

    pub fn grid(&self) -> anyhow::Result<GridSpec> {
        let default = ncosc_core::wavefunctions::default_grid(self.dimension()?);
        GridSpec::new(
            self.grid_sigmas.unwrap_or(default.sigmas),
            self.grid_points.unwrap_or(default.points),
        )
        .map_err(|e| usage(e.to_string()))
    }

    pub fn signals(&self) -> anyhow::Result<Vec<Signal>> {
        let signals = match &self.drive {
            DriveConfig::Spec(s) => parse_drive(s, &self.base_dir)?,
            DriveConfig::Signals(v) => v.clone(),
        };
        if signals.len() > self.dim {
            return Err(usage(format!("{} drive components given for dimension {}", signals.len(), self.dim)));
        }
        Ok(signals)
    }

    pub fn oscillator(&self) -> anyhow::Result<OscillatorConfig> {
        let drive = DriveField::new(self.signals()?).map_err(|e| usage(e.to_string()))?;
        OscillatorConfig::new(self.m, self.omega0, self.q, drive).map_err(|e| usage(e.to_string()))
    }

    pub fn space(&self, theta: f64, eta: f64) -> anyhow::Result<NcSpace> {
        NcSpace::new(theta, eta, self.dimension()?, self.hbar).with_context(|| format!("θ={theta}, η={eta}"))
    }

    /// The single `(θ, η)` point of a non-sweep command.
    pub fn point(&self) -> anyhow::Result<(f64, f64)> {
        if !self.theta.is_scalar() || !self.eta.is_scalar() {
            return Err(usage("this command takes scalar --theta and --eta"));
        }
        Ok((self.theta.min, self.eta.min))
    }

    pub fn quantum_numbers(&self) -> anyhow::Result<Vec<u32>> {
        let n = self.n.clone().unwrap_or_else(|| vec![0; self.dim]);
        if n.len() != self.dim {
            return Err(usage(format!("--n needs {} quantum numbers, got {}", self.dim, n.len())));
        }
        if let Some(k) = n.iter().find(|&&k| k > ncosc_core::wavefunctions::HERMITE_CAP) {
            return Err(usage(format!(
                "quantum number {k} exceeds the cap {}",
                ncosc_core::wavefunctions::HERMITE_CAP
            )));
        }
        Ok(n)
    }
}
