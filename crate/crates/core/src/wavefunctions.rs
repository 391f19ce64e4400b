//! Exact lab-frame eigenfunctions, their ground-state momentum form, and grid
//! sampling.
//!
//! In the frame rotating with `φ = ω₂t` each axis is an independent driven
//! oscillator; the lab-frame state is the product of per-axis Lewis–Riesenfeld
//! eigenfunctions evaluated at the rotated coordinates
//! `Q₁ = cosφ x₁ − sinφ x₂`, `Q₂ = sinφ x₁ + cosφ x₂`, `Q₃ = x₃`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::{
    phase_y, solve_particular, ClassicalTrajectory, InitialConditions, PhaseSpacePoint,
    QuadraticHamiltonianCoeffs, DEFAULT_STEP,
};
use crate::error::{ensure, Error, Result};
use crate::grid::{check_budget, unravel, Domain, Grid1D, GridSpec, SampledField, DEFAULT_POINT_CAP};
use crate::nc_model::{
    drive_coefficients, effective_params, AxialDrive, Dim, DriveCoefficients, EffectiveParams,
    NcSpace, OscillatorConfig, RotatedDrive, RotatedTerm,
};
use crate::signal::Signal;

/// Largest supported quantum number per axis.
pub const HERMITE_CAP: u32 = 30;

/// Physicists' Hermite polynomial `H_n(x)` by upward recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n(x)/√(2ⁿ n!)`, which stays O(1) for moderate `n`.
pub fn hermite_normalized(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, std::f64::consts::SQRT_2 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// One-axis eigenfunction of the invariant:
/// `(1/2ρ²ħπ)^{1/4} (2ⁿn!)^{-1/2} exp[(i/ħ)P_cl Q − (Q−Q_cl)²/4ρ²ħ] H_n[(Q−Q_cl)/√(2ρ²ħ)]`.
pub fn mode_eigenfunction(n: u32, rho_sq: f64, q_cl: f64, p_cl: f64, q: f64, hbar: f64) -> Complex64 {
    let width = rho_sq * hbar;
    let u = q - q_cl;
    let amp = (2.0 * width * PI).powf(-0.25)
        * (-u * u / (4.0 * width)).exp()
        * hermite_normalized(n, u / (2.0 * width).sqrt());
    Complex64::from_polar(amp, p_cl * q / hbar)
}

/// Settings for the classical particular solutions behind a state.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsSettings {
    /// Trajectories cover `[0, t_end]`.
    pub t_end: f64,
    pub step: f64,
    /// Starting `(Q, P)` per rotated-frame axis; velocities follow from
    /// Hamilton's equations. Missing entries start at the origin.
    pub start: Vec<(f64, f64)>,
}

impl DynamicsSettings {
    pub fn until(t_end: f64) -> Self {
        DynamicsSettings {
            t_end,
            step: DEFAULT_STEP,
            start: Vec::new(),
        }
    }

    pub fn with_start(mut self, start: Vec<(f64, f64)>) -> Self {
        self.start = start;
        self
    }
}

/// Classical data shared by all states of one configuration.
#[derive(Debug)]
pub struct Evolution {
    pub cfg: OscillatorConfig,
    pub space: NcSpace,
    pub params: EffectiveParams,
    pub drive: DriveCoefficients,
    pub trajectories: Vec<ClassicalTrajectory>,
}

impl Evolution {
    pub fn solve(cfg: &OscillatorConfig, space: &NcSpace, settings: &DynamicsSettings) -> Result<Arc<Self>> {
        let params = effective_params(cfg, space);
        let drive = drive_coefficients(cfg, space)?;
        let mut trajectories = Vec::with_capacity(space.axes());
        for axis in 0..space.axes() {
            let coeffs = axis_coeffs(cfg, &params, &drive, axis)?;
            let (q0, p0) = settings.start.get(axis).copied().unwrap_or((0.0, 0.0));
            let ic = InitialConditions::consistent(&coeffs, 0.0, q0, p0);
            trajectories.push(solve_particular(&coeffs, (0.0, settings.t_end), settings.step, ic)?.with_axis(axis));
        }
        Ok(Arc::new(Evolution {
            cfg: cfg.clone(),
            space: *space,
            params,
            drive,
            trajectories,
        }))
    }

    /// Undriven-or-driven evolution from the origin on `[0, t_end]`.
    pub fn from_rest(cfg: &OscillatorConfig, space: &NcSpace, t_end: f64) -> Result<Arc<Self>> {
        Self::solve(cfg, space, &DynamicsSettings::until(t_end))
    }

    pub fn window(&self) -> (f64, f64) {
        self.trajectories[0].window()
    }
}

/// Rotated-frame Hamiltonian coefficients for one axis.
pub fn axis_coeffs(
    cfg: &OscillatorConfig,
    params: &EffectiveParams,
    drive: &DriveCoefficients,
    axis: usize,
) -> Result<QuadraticHamiltonianCoeffs> {
    match axis {
        0 | 1 => {
            let term = |t| {
                Arc::new(RotatedDrive {
                    coeffs: drive.clone(),
                    omega2: params.omega2,
                    term: t,
                })
            };
            QuadraticHamiltonianCoeffs::oscillator(
                params.mass,
                params.omega1,
                term(RotatedTerm::Momentum(axis)),
                term(RotatedTerm::Position(axis)),
            )
        }
        2 if drive.dim() == Dim::Three => QuadraticHamiltonianCoeffs::oscillator(
            cfg.mass,
            cfg.omega0,
            Arc::new(Signal::Zero),
            Arc::new(AxialDrive { coeffs: drive.clone() }),
        ),
        _ => Err(Error::DimensionMismatch {
            expected: drive.dim().count(),
            got: axis + 1,
        }),
    }
}

/// Rotated classical momenta/positions expressed in lab coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LabFrameShifts {
    pub f: f64,
    pub g: f64,
    pub big_t: f64,
    pub sigma: f64,
}

impl LabFrameShifts {
    pub fn from_rotated(c1: &PhaseSpacePoint, c2: &PhaseSpacePoint, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        LabFrameShifts {
            f: c1.p * c + c2.p * s,
            g: -c1.p * s + c2.p * c,
            big_t: c1.q * c + c2.q * s,
            sigma: -c1.q * s + c2.q * c,
        }
    }
}

/// An eigenstate `(n₁, n₂[, n₃])` of the configuration in `evolution`.
#[derive(Debug, Clone)]
pub struct QuantumState {
    pub evolution: Arc<Evolution>,
    pub quantum_numbers: Vec<u32>,
    /// Extra phase rate added to `Y` (fault injection for the residual check).
    pub phase_perturbation: f64,
}

impl QuantumState {
    pub fn new(evolution: Arc<Evolution>, quantum_numbers: Vec<u32>) -> Result<Self> {
        let d = evolution.space.axes();
        if quantum_numbers.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: quantum_numbers.len(),
            });
        }
        ensure(quantum_numbers.iter().all(|&n| n <= HERMITE_CAP), || {
            format!("quantum numbers above {HERMITE_CAP} are not supported")
        })?;
        Ok(QuantumState {
            evolution,
            quantum_numbers,
            phase_perturbation: 0.0,
        })
    }

    pub fn ground(evolution: Arc<Evolution>) -> Self {
        let d = evolution.space.axes();
        QuantumState {
            evolution,
            quantum_numbers: vec![0; d],
            phase_perturbation: 0.0,
        }
    }

    pub fn with_phase_perturbation(mut self, rate: f64) -> Self {
        self.phase_perturbation = rate;
        self
    }

    pub fn is_ground(&self) -> bool {
        self.quantum_numbers.iter().all(|&n| n == 0)
    }

    pub fn dim(&self) -> usize {
        self.quantum_numbers.len()
    }

    /// Everything needed to evaluate the state at time `t`.
    pub fn at(&self, t: f64) -> Result<Snapshot> {
        let ev = &self.evolution;
        let centers = ev
            .trajectories
            .iter()
            .map(|tr| tr.at(t))
            .collect::<Result<Vec<_>>>()?;
        let phi = ev.params.omega2 * t;
        let y = phase_y(&self.quantum_numbers, &ev.trajectories, ev.space.hbar, t)?.y
            + self.phase_perturbation * t;
        let shifts = LabFrameShifts::from_rotated(&centers[0], &centers[1], phi);
        Ok(Snapshot {
            t,
            phi,
            y,
            shifts,
            centers,
            quantum_numbers: self.quantum_numbers.clone(),
            rho_sq: ev.params.rho_sq,
            rho3_sq: ev.params.rho3_sq,
            hbar: ev.space.hbar,
        })
    }
}

/// A state frozen at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub phi: f64,
    pub y: f64,
    pub shifts: LabFrameShifts,
    /// Rotated-frame classical centers per axis.
    pub centers: Vec<PhaseSpacePoint>,
    pub quantum_numbers: Vec<u32>,
    pub rho_sq: f64,
    pub rho3_sq: f64,
    pub hbar: f64,
}

impl Snapshot {
    pub fn dim(&self) -> usize {
        self.quantum_numbers.len()
    }

    fn axis_rho_sq(&self, axis: usize) -> f64 {
        if axis < 2 {
            self.rho_sq
        } else {
            self.rho3_sq
        }
    }

    /// Standard deviation of the ground-state position density along `axis`.
    pub fn position_sigma(&self, axis: usize) -> f64 {
        (self.axis_rho_sq(axis) * self.hbar).sqrt()
    }

    /// Standard deviation of the ground-state momentum density along `axis`.
    pub fn momentum_sigma(&self, axis: usize) -> f64 {
        (self.hbar / (4.0 * self.axis_rho_sq(axis))).sqrt()
    }

    /// Lab-frame center of the position density.
    pub fn position_center(&self, axis: usize) -> f64 {
        match axis {
            0 => self.shifts.big_t,
            1 => self.shifts.sigma,
            _ => self.centers[2].q,
        }
    }

    /// Lab-frame center of the momentum density.
    pub fn momentum_center(&self, axis: usize) -> f64 {
        match axis {
            0 => self.shifts.f,
            1 => self.shifts.g,
            _ => self.centers[2].p,
        }
    }

    /// Rotated-frame product form, evaluated at rotated coordinates `q`.
    pub fn psi_rotated(&self, q: &[f64]) -> Complex64 {
        let mut v = Complex64::from_polar(1.0, self.y);
        for (axis, (&n, c)) in self.quantum_numbers.iter().zip(&self.centers).enumerate() {
            v *= mode_eigenfunction(n, self.axis_rho_sq(axis), c.q, c.p, q[axis], self.hbar);
        }
        v
    }

    /// Lab-frame wavefunction at `x`.
    pub fn psi(&self, x: &[f64]) -> Complex64 {
        let (amp, phase) = self.amplitude_phase(x);
        Complex64::from_polar(amp, phase)
    }

    /// `|ψ(x)|²`, computed without the phase.
    pub fn density(&self, x: &[f64]) -> f64 {
        let amp = self.amplitude_phase(x).0;
        amp * amp
    }

    /// Signed real amplitude and phase of `ψ(x)`.
    pub fn amplitude_phase(&self, x: &[f64]) -> (f64, f64) {
        let (s, c) = self.phi.sin_cos();
        let h = self.hbar;
        let w = self.rho_sq * h;
        let LabFrameShifts { f, g, big_t, sigma } = self.shifts;
        let (d1, d2) = (x[0] - big_t, x[1] - sigma);
        let mut log_amp = -(d1 * d1 + d2 * d2) / (4.0 * w);
        let mut phase = self.y + (f * x[0] + g * x[1]) / h;
        let scale = (2.0 * w).sqrt();
        let mut amp = 1.0 / (2.0 * w * PI).sqrt()
            * hermite_normalized(self.quantum_numbers[0], (c * x[0] - s * x[1] - self.centers[0].q) / scale)
            * hermite_normalized(self.quantum_numbers[1], (s * x[0] + c * x[1] - self.centers[1].q) / scale);
        if self.dim() == 3 {
            let w3 = self.rho3_sq * h;
            let c3 = &self.centers[2];
            let d3 = x[2] - c3.q;
            log_amp -= d3 * d3 / (4.0 * w3);
            phase += c3.p * x[2] / h;
            amp *= (2.0 * w3 * PI).powf(-0.25) * hermite_normalized(self.quantum_numbers[2], d3 / (2.0 * w3).sqrt());
        }
        (amp * log_amp.exp(), phase)
    }

    /// Closed-form ground-state momentum wavefunction at `p`.
    pub fn momentum_ground(&self, p: &[f64]) -> Result<Complex64> {
        let (amp, phase) = self.momentum_amplitude_phase(p)?;
        Ok(Complex64::from_polar(amp, phase))
    }

    /// `|Ξ(p)|²` of the ground state, computed without the phase.
    pub fn momentum_density(&self, p: &[f64]) -> Result<f64> {
        let amp = self.momentum_amplitude_phase(p)?.0;
        Ok(amp * amp)
    }

    fn momentum_amplitude_phase(&self, p: &[f64]) -> Result<(f64, f64)> {
        if self.quantum_numbers.iter().any(|&n| n != 0) {
            return Err(Error::UnsupportedState(
                "closed-form momentum wavefunction exists only for the ground state; use momentum_numeric".into(),
            ));
        }
        let h = self.hbar;
        let mut amp = 1.0;
        let mut log_amp = 0.0;
        let mut phase = self.y;
        for axis in 0..self.dim() {
            let r2 = self.axis_rho_sq(axis);
            let center = self.momentum_center(axis);
            let shift = self.position_center(axis);
            let d = p[axis] - center;
            amp *= (2.0 * r2 / (h * PI)).powf(0.25);
            log_amp -= r2 * d * d / h;
            phase -= shift * d / h;
        }
        Ok((amp * log_amp.exp(), phase))
    }

    /// Grid widening factor for the quantum number along `axis`.
    pub fn excitation_scale(&self, axis: usize) -> f64 {
        let n = if axis < 2 {
            self.quantum_numbers[0].max(self.quantum_numbers[1])
        } else {
            self.quantum_numbers[2]
        };
        (1.0 + 0.5 * n as f64).sqrt()
    }

    /// Position grid centered on the density, `spec.sigmas` standard
    /// deviations on each side (widened for excited states).
    pub fn position_grid(&self, spec: &GridSpec) -> Result<Vec<Grid1D>> {
        (0..self.dim())
            .map(|a| {
                Grid1D::centered(
                    self.position_center(a),
                    spec.sigmas * self.position_sigma(a) * self.excitation_scale(a),
                    spec.points,
                )
            })
            .collect()
    }

    /// Momentum grid centered on the momentum density.
    pub fn momentum_grid(&self, spec: &GridSpec) -> Result<Vec<Grid1D>> {
        (0..self.dim())
            .map(|a| {
                Grid1D::centered(
                    self.momentum_center(a),
                    spec.sigmas * self.momentum_sigma(a) * self.excitation_scale(a),
                    spec.points,
                )
            })
            .collect()
    }
}

/// `ψ(x, t)` in the lab frame.
pub fn psi_lab(state: &QuantumState, point: &[f64], t: f64) -> Result<Complex64> {
    check_point(state.dim(), point)?;
    Ok(state.at(t)?.psi(point))
}

/// Closed-form `Ξ(p, t)` of a ground state.
pub fn momentum_ground(state: &QuantumState, point: &[f64], t: f64) -> Result<Complex64> {
    check_point(state.dim(), point)?;
    if !state.is_ground() {
        return Err(Error::UnsupportedState(
            "closed-form momentum wavefunction exists only for the ground state; use momentum_numeric".into(),
        ));
    }
    state.at(t)?.momentum_ground(point)
}

fn check_point(dim: usize, point: &[f64]) -> Result<()> {
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: point.len(),
        });
    }
    Ok(())
}

/// Samples `f` on the tensor grid `axes`, in parallel.
pub fn sample_on<F>(axes: &[Grid1D], domain: Domain, cap: usize, f: F) -> Result<SampledField>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    check_budget(axes, cap)?;
    let shape: Vec<usize> = axes.iter().map(|a| a.len).collect();
    let n: usize = shape.iter().product();
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0usize; shape.len()], vec![0.0; shape.len()]),
            |(idx, x), flat| {
                unravel(flat, &shape, idx);
                for ((xi, a), &i) in x.iter_mut().zip(axes).zip(idx.iter()) {
                    *xi = a.point(i);
                }
                f(x)
            },
        )
        .collect();
    SampledField::new(axes.to_vec(), values, domain)
}

/// Lab-frame wavefunction on explicit grids.
pub fn sample_position(snap: &Snapshot, axes: &[Grid1D]) -> Result<SampledField> {
    check_point(snap.dim(), &vec![0.0; axes.len()])?;
    sample_on(axes, Domain::Position, DEFAULT_POINT_CAP, |x| snap.psi(x))
}

/// Closed-form ground-state momentum wavefunction on explicit grids.
pub fn sample_momentum_ground(snap: &Snapshot, axes: &[Grid1D]) -> Result<SampledField> {
    check_point(snap.dim(), &vec![0.0; axes.len()])?;
    snap.momentum_ground(&vec![0.0; axes.len()])?;
    sample_on(axes, Domain::Momentum, DEFAULT_POINT_CAP, |p| {
        snap.momentum_ground(p).expect("ground state checked above")
    })
}

/// Samples the state at time `t` on the default position grid for `spec`,
/// with a cap on the total number of points.
pub fn evaluate_on_grid(state: &QuantumState, t: f64, spec: &GridSpec, cap: usize) -> Result<SampledField> {
    let snap = state.at(t)?;
    let axes = snap.position_grid(spec)?;
    sample_on(&axes, Domain::Position, cap, |x| snap.psi(x))
}

/// Default grid for `dim` dimensions: 512 points per axis in 2-D, 128 in 3-D.
pub fn default_grid(dim: Dim) -> GridSpec {
    match dim {
        Dim::Two => GridSpec::default(),
        Dim::Three => GridSpec {
            sigmas: 8.0,
            points: 128,
        },
    }
}
