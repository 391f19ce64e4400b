//! Noncommutative phase-space parameters and the effective commutative
//! Hamiltonian obtained from the Bopp shift.
//!
//! With `x̂₁ = x₁ − θp₂/2ħ`, `x̂₂ = x₂ + θp₁/2ħ`, `p̂₁ = p₁ + ηx₂/2ħ`,
//! `p̂₂ = p₂ − ηx₁/2ħ` (and `x̂₃ = x₃`, `p̂₃ = p₃` in three dimensions) the
//! charged oscillator becomes an isotropic oscillator of mass `M` and
//! frequency `ω₁` in the 1–2 plane, coupled to `L₃` with rate `ω₂`, plus
//! linear drive terms `A p₁ + B p₂ + C x₁ + D x₂ (+ F x₃)`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::signal::{Signal, TimeSignal};

/// Spatial dimension of the problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn count(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;
    fn try_from(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::InvalidArgument(format!(
                "dimension must be 2 or 3, got {other}"
            ))),
        }
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.count()
    }
}

/// Noncommutativity parameters, dimension and the unit of action.
///
/// In three dimensions the noncommutativity vectors point along the third
/// axis, so only the 1–2 plane is deformed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NcSpace {
    pub theta: f64,
    pub eta: f64,
    pub dim: Dim,
    pub hbar: f64,
}

impl NcSpace {
    pub fn new(theta: f64, eta: f64, dim: Dim, hbar: f64) -> Result<Self> {
        ensure(theta.is_finite() && theta >= 0.0, || {
            format!("theta must be finite and nonnegative, got {theta}")
        })?;
        ensure(eta.is_finite() && eta >= 0.0, || {
            format!("eta must be finite and nonnegative, got {eta}")
        })?;
        ensure(hbar.is_finite() && hbar > 0.0, || {
            format!("hbar must be positive, got {hbar}")
        })?;
        Ok(NcSpace {
            theta,
            eta,
            dim,
            hbar,
        })
    }

    /// Natural units `ħ = 1`.
    pub fn natural(theta: f64, eta: f64, dim: Dim) -> Result<Self> {
        Self::new(theta, eta, dim, 1.0)
    }

    pub fn commutative(dim: Dim) -> Self {
        NcSpace {
            theta: 0.0,
            eta: 0.0,
            dim,
            hbar: 1.0,
        }
    }

    pub fn is_commutative(&self) -> bool {
        self.theta == 0.0 && self.eta == 0.0
    }

    pub fn axes(&self) -> usize {
        self.dim.count()
    }
}

/// Electric field components `E_l(t)`; absent components are zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DriveField {
    pub components: Vec<Signal>,
}

impl DriveField {
    pub fn zero() -> Self {
        DriveField::default()
    }

    pub fn new(components: Vec<Signal>) -> Result<Self> {
        ensure(components.len() <= 3, || {
            format!("at most three field components, got {}", components.len())
        })?;
        Ok(DriveField { components })
    }

    pub fn component(&self, axis: usize) -> &Signal {
        const ZERO: Signal = Signal::Zero;
        self.components.get(axis).unwrap_or(&ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Signal::is_zero)
    }

    /// Intersection of the windows of tabulated components.
    pub fn window(&self) -> Option<(f64, f64)> {
        self.components
            .iter()
            .filter_map(|c| c.window())
            .reduce(|a, b| (a.0.max(b.0), a.1.min(b.1)))
    }
}

/// Mass, natural frequency, charge and drive of the oscillator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorConfig {
    pub mass: f64,
    pub omega0: f64,
    pub charge: f64,
    pub drive: DriveField,
}

impl OscillatorConfig {
    pub fn new(mass: f64, omega0: f64, charge: f64, drive: DriveField) -> Result<Self> {
        ensure(mass.is_finite() && mass > 0.0, || {
            format!("mass must be positive, got {mass}")
        })?;
        ensure(omega0.is_finite() && omega0 > 0.0, || {
            format!("omega0 must be positive, got {omega0}")
        })?;
        ensure(charge.is_finite(), || "charge must be finite".into())?;
        Ok(OscillatorConfig {
            mass,
            omega0,
            charge,
            drive,
        })
    }

    /// `m = ω₀ = 1`, unit charge, no drive.
    pub fn natural() -> Self {
        OscillatorConfig {
            mass: 1.0,
            omega0: 1.0,
            charge: 1.0,
            drive: DriveField::zero(),
        }
    }

    pub fn with_drive(mut self, drive: DriveField) -> Self {
        self.drive = drive;
        self
    }
}

/// `1 + m²ω₀²θ²/4ħ²`
pub fn theta_factor(cfg: &OscillatorConfig, space: &NcSpace) -> f64 {
    let mw = cfg.mass * cfg.omega0;
    1.0 + mw * mw * space.theta * space.theta / (4.0 * space.hbar * space.hbar)
}

/// `1 + η²/4ħ²m²ω₀²`
pub fn eta_factor(cfg: &OscillatorConfig, space: &NcSpace) -> f64 {
    let mw = cfg.mass * cfg.omega0;
    1.0 + space.eta * space.eta / (4.0 * space.hbar * space.hbar * mw * mw)
}

/// Effective mass, frequencies and Gaussian width parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    /// Effective mass `M`.
    pub mass: f64,
    /// In-plane frequency `ω₁`.
    pub omega1: f64,
    /// Rotation rate `ω₂` of the `L₃` coupling.
    pub omega2: f64,
    /// `ρ² = 1/(2Mω₁)` for the in-plane axes.
    pub rho_sq: f64,
    /// `ρ₃² = 1/(2mω₀)` for the third axis.
    pub rho3_sq: f64,
}

pub fn effective_params(cfg: &OscillatorConfig, space: &NcSpace) -> EffectiveParams {
    let a = theta_factor(cfg, space);
    let b = eta_factor(cfg, space);
    let mass = cfg.mass / a;
    let omega1 = cfg.omega0 * (a * b).sqrt();
    let omega2 = (space.eta + space.theta * cfg.mass * cfg.omega0 * cfg.omega0)
        / (2.0 * space.hbar * cfg.mass);
    EffectiveParams {
        mass,
        omega1,
        omega2,
        rho_sq: 1.0 / (2.0 * mass * omega1),
        rho3_sq: 1.0 / (2.0 * cfg.mass * cfg.omega0),
    }
}

/// The rotation angle `φ(t) = ω₂ t` of the frame that removes `L₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationAngle {
    pub omega2: f64,
}

impl RotationAngle {
    pub fn at(&self, t: f64) -> f64 {
        self.omega2 * t
    }
}

/// Linear drive coefficients of the effective Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveCoefficients {
    drive: DriveField,
    charge: f64,
    /// `qθ/2ħ`
    momentum_coupling: f64,
    dim: Dim,
}

pub fn drive_coefficients(cfg: &OscillatorConfig, space: &NcSpace) -> Result<DriveCoefficients> {
    if space.dim == Dim::Two && !cfg.drive.component(2).is_zero() {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: cfg.drive.components.len(),
        });
    }
    Ok(DriveCoefficients {
        drive: cfg.drive.clone(),
        charge: cfg.charge,
        momentum_coupling: cfg.charge * space.theta / (2.0 * space.hbar),
        dim: space.dim,
    })
}

/// Value and time derivative of a signal at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sample {
    pub value: f64,
    pub rate: f64,
}

impl DriveCoefficients {
    fn field(&self, axis: usize, t: f64) -> Sample {
        let s = self.drive.component(axis);
        Sample {
            value: s.value(t),
            rate: s.derivative(t),
        }
    }

    /// `A(t) = (qθ/2ħ) E₂(t)`
    pub fn a(&self, t: f64) -> Sample {
        let e2 = self.field(1, t);
        Sample {
            value: self.momentum_coupling * e2.value,
            rate: self.momentum_coupling * e2.rate,
        }
    }

    /// `B(t) = −(qθ/2ħ) E₁(t)`
    pub fn b(&self, t: f64) -> Sample {
        let e1 = self.field(0, t);
        Sample {
            value: -self.momentum_coupling * e1.value,
            rate: -self.momentum_coupling * e1.rate,
        }
    }

    /// `C(t) = q E₁(t)`
    pub fn c(&self, t: f64) -> Sample {
        let e1 = self.field(0, t);
        Sample {
            value: self.charge * e1.value,
            rate: self.charge * e1.rate,
        }
    }

    /// `D(t) = q E₂(t)`
    pub fn d(&self, t: f64) -> Sample {
        let e2 = self.field(1, t);
        Sample {
            value: self.charge * e2.value,
            rate: self.charge * e2.rate,
        }
    }

    /// `F(t) = q E₃(t)`, three dimensions only.
    pub fn f(&self, t: f64) -> Result<Sample> {
        if self.dim != Dim::Three {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: self.dim.count(),
            });
        }
        let e3 = self.field(2, t);
        Ok(Sample {
            value: self.charge * e3.value,
            rate: self.charge * e3.rate,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn window(&self) -> Option<(f64, f64)> {
        self.drive.window()
    }
}

/// Drive terms seen in the rotating frame, with time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RotatingFrameCoefficients {
    pub omega1: Sample,
    pub omega2: Sample,
    pub xi1: Sample,
    pub xi2: Sample,
}

pub fn rotating_frame_coeffs(
    coeffs: &DriveCoefficients,
    omega2: f64,
    t: f64,
) -> RotatingFrameCoefficients {
    let phi = omega2 * t;
    let (s, c) = phi.sin_cos();
    let rotate = |x: Sample, y: Sample| {
        // (u, v) = (x cosφ − y sinφ, x sinφ + y cosφ) and its derivative with φ̇ = ω₂.
        let u = x.value * c - y.value * s;
        let v = x.value * s + y.value * c;
        let du = x.rate * c - y.rate * s - omega2 * v;
        let dv = x.rate * s + y.rate * c + omega2 * u;
        (
            Sample { value: u, rate: du },
            Sample { value: v, rate: dv },
        )
    };
    let (omega1, omega2s) = rotate(coeffs.a(t), coeffs.b(t));
    let (xi1, xi2) = rotate(coeffs.c(t), coeffs.d(t));
    RotatingFrameCoefficients {
        omega1,
        omega2: omega2s,
        xi1,
        xi2,
    }
}

/// Which rotated-frame drive term a [`RotatedDrive`] tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotatedTerm {
    /// `Ω_i(t)`, multiplying `P_i`.
    Momentum(usize),
    /// `ξ_i(t)`, multiplying `Q_i`.
    Position(usize),
}

/// One rotated-frame drive term as a time signal.
#[derive(Debug, Clone)]
pub struct RotatedDrive {
    pub coeffs: DriveCoefficients,
    pub omega2: f64,
    pub term: RotatedTerm,
}

impl RotatedDrive {
    fn sample(&self, t: f64) -> Sample {
        let r = rotating_frame_coeffs(&self.coeffs, self.omega2, t);
        match self.term {
            RotatedTerm::Momentum(0) => r.omega1,
            RotatedTerm::Momentum(_) => r.omega2,
            RotatedTerm::Position(0) => r.xi1,
            RotatedTerm::Position(_) => r.xi2,
        }
    }
}

impl TimeSignal for RotatedDrive {
    fn value(&self, t: f64) -> f64 {
        self.sample(t).value
    }
    fn derivative(&self, t: f64) -> f64 {
        self.sample(t).rate
    }
    fn window(&self) -> Option<(f64, f64)> {
        self.coeffs.window()
    }
}

/// `F(t) = qE₃(t)` as a time signal (zero in two dimensions).
#[derive(Debug, Clone)]
pub struct AxialDrive {
    pub coeffs: DriveCoefficients,
}

impl TimeSignal for AxialDrive {
    fn value(&self, t: f64) -> f64 {
        self.coeffs.f(t).map(|s| s.value).unwrap_or(0.0)
    }
    fn derivative(&self, t: f64) -> f64 {
        self.coeffs.f(t).map(|s| s.rate).unwrap_or(0.0)
    }
    fn window(&self) -> Option<(f64, f64)> {
        self.coeffs.window()
    }
}

/// Per-axis commutative second moments `Δx_l²`, `Δp_l²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisVariances {
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
}

impl AxisVariances {
    pub fn total_position(&self) -> f64 {
        self.position.iter().sum()
    }

    pub fn total_momentum(&self) -> f64 {
        self.momentum.iter().sum()
    }
}

/// `Δr̂²` and `Δp̂²` from the commutative per-axis variances.
///
/// Only the first two axes enter the θ and η corrections; the third axis is
/// undeformed.
pub fn nc_variances(v: &AxisVariances, space: &NcSpace) -> Result<(f64, f64)> {
    let n = space.axes();
    for len in [v.position.len(), v.momentum.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: len,
            });
        }
    }
    let scale = 4.0 * space.hbar * space.hbar;
    let plane_p = v.momentum[0] + v.momentum[1];
    let plane_x = v.position[0] + v.position[1];
    let r = v.total_position() + space.theta * space.theta / scale * plane_p;
    let p = v.total_momentum() + space.eta * space.eta / scale * plane_x;
    Ok((r, p))
}
