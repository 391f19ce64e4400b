//! Independent checks of the analytic states: Schrödinger residuals,
//! invariant eigenvalues, transforms, and closed-form vs quadrature tables.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ClassicalTrajectory, PhaseSpacePoint};
use crate::error::{ensure, Error, Result};
use crate::fourier::momentum_numeric;
use crate::grid::{strides, unravel, Domain, Grid1D, GridSpec, SampledField, DEFAULT_POINT_CAP};
use crate::infotheory::{bbm_bound, closed_forms, info_from_state, nc_uncertainty_bounds, InfoReport, BOUND_SLACK};
use crate::nc_model::{drive_coefficients, effective_params, Dim, DriveCoefficients, NcSpace, OscillatorConfig};
use crate::wavefunctions::{default_grid, mode_eigenfunction, sample_on, sample_position, Evolution, QuantumState};

/// Coefficients of the lab-frame effective Hamiltonian
/// `P²/2M + ½Mω₁²r² − ω₂L₃ + A p₁ + B p₂ + C x₁ + D x₂`
/// (plus `p₃²/2m + ½mω₀²x₃² + F x₃` in three dimensions).
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonianSpec {
    pub mass: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub drive: DriveCoefficients,
    pub axial_mass: f64,
    pub axial_omega: f64,
    pub hbar: f64,
    pub dim: Dim,
}

impl EffectiveHamiltonianSpec {
    pub fn new(cfg: &OscillatorConfig, space: &NcSpace) -> Result<Self> {
        let p = effective_params(cfg, space);
        Ok(EffectiveHamiltonianSpec {
            mass: p.mass,
            omega1: p.omega1,
            omega2: p.omega2,
            drive: drive_coefficients(cfg, space)?,
            axial_mass: cfg.mass,
            axial_omega: cfg.omega0,
            hbar: space.hbar,
            dim: space.dim,
        })
    }
}

/// Settings of one residual evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    pub t: f64,
    pub dt: f64,
    pub grid: GridSpec,
    /// Estimated spatial truncation above this is flagged.
    pub tolerance: f64,
}

impl ResidualOptions {
    /// `dt = 1e-4` on the default residual grid for `dim`.
    pub fn at(t: f64, dim: Dim) -> Self {
        let (grid, tolerance) = match dim {
            Dim::Two => (GridSpec::default(), 1e-4),
            Dim::Three => (GridSpec { sigmas: 8.0, points: 128 }, 1e-3),
        };
        ResidualOptions {
            t,
            dt: 1e-4,
            grid,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `max |R| / (ħω₁ max|ψ|)` over interior points.
    pub max_abs: f64,
    pub rms: f64,
    pub dt: f64,
    pub t: f64,
    pub points: Vec<usize>,
    pub spacing: Vec<f64>,
    /// Richardson estimate of the normalized Laplacian truncation error.
    pub truncation_estimate: f64,
    pub truncation_flagged: bool,
    pub quantum_numbers: Vec<u32>,
}

/// `R = iħ∂ₜψ − Hψ` on a grid centered on the state, with central
/// differences in time and fourth-order stencils in space.
pub fn schrodinger_residual(
    state: &QuantumState,
    ham: &EffectiveHamiltonianSpec,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    ensure(opts.dt > 0.0 && opts.dt.is_finite(), || format!("dt must be positive, got {}", opts.dt))?;
    if state.dim() != ham.dim.count() {
        return Err(Error::DimensionMismatch {
            expected: ham.dim.count(),
            got: state.dim(),
        });
    }
    let snap = state.at(opts.t)?;
    let axes = snap.position_grid(&opts.grid)?;
    ensure(axes.iter().all(|a| a.len >= 9), || "residual grids need at least 9 points per axis".into())?;
    let before = sample_position(&state.at(opts.t - opts.dt)?, &axes)?;
    let now = sample_position(&snap, &axes)?;
    let after = sample_position(&state.at(opts.t + opts.dt)?, &axes)?;

    let t = opts.t;
    let h = ham.hbar;
    let (a, b, c, d) = (ham.drive.a(t).value, ham.drive.b(t).value, ham.drive.c(t).value, ham.drive.d(t).value);
    let f = if ham.dim == Dim::Three { ham.drive.f(t)?.value } else { 0.0 };
    let shape = now.shape();
    let st = strides(&shape);
    let dim = shape.len();
    let psi = &now.values;
    let i = Complex64::i();
    let peak = psi.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = h * ham.omega1 * peak;

    let kinetic = |axis: usize| if axis < 2 { h * h / (2.0 * ham.mass) } else { h * h / (2.0 * ham.axial_mass) };
    let n: usize = shape.iter().product();
    let (max_r, sum_sq, max_trunc, count) = (0..n)
        .into_par_iter()
        .map_init(
            || vec![0usize; dim],
            |idx, flat| {
                unravel(flat, &shape, idx);
                if idx.iter().zip(&shape).any(|(&k, &len)| k < 4 || k + 4 >= len) {
                    return (0.0, 0.0, 0.0, 0usize);
                }
                let x: Vec<f64> = idx.iter().zip(&axes).map(|(&k, g)| g.point(k)).collect();
                let at = |axis: usize, j: isize| psi[(flat as isize + j * st[axis] as isize) as usize];
                let p0 = psi[flat];
                let mut first = [Complex64::new(0.0, 0.0); 3];
                let mut hpsi = Complex64::new(0.0, 0.0);
                let mut trunc = 0.0;
                for axis in 0..dim {
                    let dx = axes[axis].step;
                    first[axis] = (-at(axis, 2) + 8.0 * at(axis, 1) - 8.0 * at(axis, -1) + at(axis, -2)) / (12.0 * dx);
                    let lap = (-at(axis, 2) + 16.0 * at(axis, 1) - 30.0 * p0 + 16.0 * at(axis, -1) - at(axis, -2))
                        / (12.0 * dx * dx);
                    let coarse = (-at(axis, 4) + 16.0 * at(axis, 2) - 30.0 * p0 + 16.0 * at(axis, -2) - at(axis, -4))
                        / (48.0 * dx * dx);
                    hpsi -= kinetic(axis) * lap;
                    trunc += kinetic(axis) * (coarse - lap).norm() / 15.0;
                }
                let r2 = x[0] * x[0] + x[1] * x[1];
                hpsi += 0.5 * ham.mass * ham.omega1 * ham.omega1 * r2 * p0;
                hpsi += i * h * ham.omega2 * (x[0] * first[1] - x[1] * first[0]);
                hpsi += -i * h * (a * first[0] + b * first[1]);
                hpsi += (c * x[0] + d * x[1]) * p0;
                if dim == 3 {
                    let w = ham.axial_omega;
                    hpsi += (0.5 * ham.axial_mass * w * w * x[2] * x[2] + f * x[2]) * p0;
                }
                let dpsi = i * h * (after.values[flat] - before.values[flat]) / (2.0 * opts.dt);
                let r = (dpsi - hpsi).norm() / scale;
                (r, r * r, trunc / scale, 1usize)
            },
        )
        .reduce(
            || (0.0, 0.0, 0.0, 0),
            |x, y| (x.0.max(y.0), x.1 + y.1, x.2.max(y.2), x.3 + y.3),
        );
    Ok(ResidualReport {
        max_abs: max_r,
        rms: (sum_sq / count.max(1) as f64).sqrt(),
        dt: opts.dt,
        t,
        points: shape.clone(),
        spacing: axes.iter().map(|g| g.step).collect(),
        truncation_estimate: max_trunc,
        truncation_flagged: max_trunc > opts.tolerance,
        quantum_numbers: state.quantum_numbers.clone(),
    })
}

/// One-axis mode function `φ_n` on a grid centered at `center.q`.
pub fn sample_mode(n: u32, rho_sq: f64, center: &PhaseSpacePoint, hbar: f64, spec: &GridSpec) -> Result<SampledField> {
    let sigma = (rho_sq * hbar).sqrt() * (1.0 + 0.5 * n as f64).sqrt();
    let grid = Grid1D::centered(center.q, spec.sigmas * sigma, spec.points)?;
    sample_on(&[grid], Domain::Position, DEFAULT_POINT_CAP, |q| {
        mode_eigenfunction(n, rho_sq, center.q, center.p, q[0], hbar)
    })
}

/// Result of [`invariant_expectation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantValue {
    /// `⟨I⟩/ħ`.
    pub value: f64,
    pub boundary_ratio: f64,
    /// The samples do not decay to the truncation threshold at the edges.
    pub flagged: bool,
}

/// `⟨(Q−Q_cl)²/4ρ² + ρ²(P̂−P_cl)²⟩/ħ` for one-axis samples, with the momentum
/// term from a spectral derivative.
pub fn invariant_expectation(
    rho_sq: f64,
    trajectory: &ClassicalTrajectory,
    t: f64,
    samples: &SampledField,
    hbar: f64,
) -> Result<InvariantValue> {
    if samples.dim() != 1 || samples.domain != Domain::Position {
        return Err(Error::InvalidArgument("expected one-axis position samples".into()));
    }
    let center = trajectory.at(t)?;
    let g = samples.axes[0];
    let n = g.len;
    // Strip the carrier e^{iP_cl Q/ħ} so that P̂ − P_cl becomes −iħ∂.
    let mut buf: Vec<Complex64> = samples
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(1.0, -center.p * g.point(k) / hbar))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * g.step);
    for (j, v) in buf.iter_mut().enumerate() {
        let k = if 2 * j < n {
            j as f64
        } else if 2 * j == n {
            0.0
        } else {
            j as f64 - n as f64
        };
        *v *= Complex64::new(0.0, k * dk) / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);

    let (mut norm, mut q2, mut p2) = (0.0, 0.0, 0.0);
    for (k, (v, dv)) in samples.values.iter().zip(&buf).enumerate() {
        let u = g.point(k) - center.q;
        norm += v.norm_sqr();
        q2 += u * u * v.norm_sqr();
        p2 += dv.norm_sqr();
    }
    let value = (q2 / (4.0 * rho_sq) + rho_sq * hbar * hbar * p2) / norm / hbar;
    let ratio = samples.boundary_ratio();
    Ok(InvariantValue {
        value,
        boundary_ratio: ratio,
        flagged: ratio > crate::fourier::DECAY_THRESHOLD,
    })
}

/// How a table row is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `|v − r| ≤ tol·|r|`
    Relative,
    /// `|v − r| ≤ tol`
    Absolute,
    /// `v ≥ r − tol`
    AtLeast,
    /// `v ≤ r + tol`
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub check: String,
    pub value: f64,
    pub reference: f64,
    /// Relative or absolute error; for one-sided checks the signed margin.
    pub deviation: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
}

impl OracleRow {
    pub fn new(check: impl Into<String>, value: f64, reference: f64, tolerance: f64, comparison: Comparison) -> Self {
        let (deviation, passed) = match comparison {
            Comparison::Relative => {
                let dev = if reference == 0.0 { (value - reference).abs() } else { (value / reference - 1.0).abs() };
                (dev, dev <= tolerance)
            }
            Comparison::Absolute => {
                let dev = (value - reference).abs();
                (dev, dev <= tolerance)
            }
            Comparison::AtLeast => (value - reference, value >= reference - tolerance),
            Comparison::AtMost => (reference - value, value <= reference + tolerance),
        };
        OracleRow {
            check: check.into(),
            value,
            reference,
            deviation,
            tolerance,
            comparison,
            passed: passed && value.is_finite(),
        }
    }
}

/// A list of checks with their verdicts.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleTable {
    pub rows: Vec<OracleRow>,
}

impl OracleTable {
    pub fn push(&mut self, row: OracleRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: OracleTable) {
        self.rows.extend(other.rows);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| !r.passed)
    }

    pub fn get(&self, check: &str) -> Option<&OracleRow> {
        self.rows.iter().find(|r| r.check == check)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "check,value,reference,deviation,tolerance,comparison,passed")?;
        for r in &self.rows {
            let cmp = match r.comparison {
                Comparison::Relative => "relative",
                Comparison::Absolute => "absolute",
                Comparison::AtLeast => "at-least",
                Comparison::AtMost => "at-most",
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.check, r.value, r.reference, r.deviation, r.tolerance, cmp, r.passed
            )?;
        }
        Ok(())
    }

    /// Human-readable table, one line per check.
    pub fn summary(&self) -> String {
        let width = self.rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  {:>24}  {:>24}  {:>10}  {:>8}  result\n", "check", "value", "reference", "deviation", "tol");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>24.16e}  {:>24.16e}  {:>10.2e}  {:>8.0e}  {}",
                r.check,
                r.value,
                r.reference,
                r.deviation,
                r.tolerance,
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.rows.len(), failed);
        out
    }
}

/// Settings of [`oracle_report`] and [`verify_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub t: f64,
    pub grid: GridSpec,
    pub quadrature_tolerance: f64,
    /// Added to the phase rate of every state (fault injection).
    pub perturb_phase: f64,
}

impl OracleOptions {
    pub fn new(t: f64, dim: Dim) -> Self {
        OracleOptions {
            t,
            grid: default_grid(dim),
            quadrature_tolerance: 1e-6,
            perturb_phase: 0.0,
        }
    }
}

fn ground_state(cfg: &OscillatorConfig, space: &NcSpace, t_end: f64, perturb: f64) -> Result<QuantumState> {
    Ok(QuantumState::ground(Evolution::from_rest(cfg, space, t_end)?).with_phase_perturbation(perturb))
}

fn report_rows(table: &mut OracleTable, prefix: &str, q: &InfoReport, c: &InfoReport, tol: f64) {
    for ((name, v), r) in InfoReport::scalar_names().iter().zip(q.scalars()).zip(c.scalars()) {
        table.push(OracleRow::new(format!("{prefix}{name}"), v, r, tol, Comparison::Relative));
    }
}

/// Closed forms against quadrature of the ground state at `opts.t`, plus
/// normalization, Parseval, transform and inequality checks.
pub fn oracle_report(cfg: &OscillatorConfig, space: &NcSpace, opts: &OracleOptions) -> Result<OracleTable> {
    let state = ground_state(cfg, space, opts.t.max(1e-2) + 0.1, opts.perturb_phase)?;
    let mut table = OracleTable::default();
    let quad = info_from_state(&state, opts.t, &opts.grid)?;
    let closed = closed_forms(cfg, space);
    report_rows(&mut table, "quadrature vs closed form: ", &quad, &closed, opts.quadrature_tolerance);

    let d2 = (space.axes() * space.axes()) as f64;
    let bound = bbm_bound(space.axes(), space.hbar);
    table.push(OracleRow::new("bbm sum (closed form)", closed.s_r_nc + closed.s_p_nc, bound, 1e-12, Comparison::Absolute));
    table.push(OracleRow::new("bbm sum (quadrature)", quad.bbm_sum, bound, 1e-6, Comparison::Absolute));
    for (name, r) in [("closed form", &closed), ("quadrature", &quad)] {
        table.push(OracleRow::new(format!("cramer-rao r ({name})"), r.cramer_rao_r, d2, 1e-6, Comparison::AtLeast));
        table.push(OracleRow::new(format!("cramer-rao p ({name})"), r.cramer_rao_p, d2, 1e-6, Comparison::AtLeast));
        let b = nc_uncertainty_bounds(r, space);
        table.push(OracleRow::new(format!("floor dr >= sqrt(theta) ({name})"), b.delta_r, space.theta.sqrt(), BOUND_SLACK, Comparison::AtLeast));
        table.push(OracleRow::new(format!("floor dp >= sqrt(eta) ({name})"), b.delta_p, space.eta.sqrt(), BOUND_SLACK, Comparison::AtLeast));
    }

    let snap = state.at(opts.t)?;
    let field = sample_position(&snap, &snap.position_grid(&opts.grid)?)?;
    table.push(OracleRow::new("position norm", field.norm_sq(), 1.0, 1e-9, Comparison::Absolute));

    let (dev, parseval) = transform_errors(&state, opts.t, opts.grid.points)?;
    table.push(OracleRow::new("transform vs closed form (max norm)", dev, 0.0, 1e-8, Comparison::AtMost));
    table.push(OracleRow::new("parseval", parseval, 0.0, 1e-10, Comparison::AtMost));
    Ok(table)
}

/// Max-norm deviation of the FFT momentum wavefunction from the closed form,
/// and the Parseval mismatch, for a ground state sampled on ±12σ.
pub fn transform_errors(state: &QuantumState, t: f64, points: usize) -> Result<(f64, f64)> {
    let snap = state.at(t)?;
    let hbar = state.evolution.space.hbar;
    let field = sample_position(&snap, &snap.position_grid(&GridSpec::new(12.0, points)?)?)?;
    let mom = momentum_numeric(&field, hbar)?;
    let shape = mom.shape();
    let dim = shape.len();
    let dev = (0..mom.values.len())
        .into_par_iter()
        .map_init(
            || (vec![0usize; dim], vec![0.0; dim]),
            |(idx, p), flat| {
                unravel(flat, &shape, idx);
                for ((pi, g), &k) in p.iter_mut().zip(&mom.axes).zip(idx.iter()) {
                    *pi = g.point(k);
                }
                let exact = snap.momentum_ground(p).expect("ground state");
                (mom.values[flat] - exact).norm()
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok((dev, (mom.norm_sq() - field.norm_sq()).abs()))
}

/// Settings of the residual-order study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderStudy {
    pub dt_pair: (f64, f64),
    pub dt_grid: GridSpec,
    pub dx_points: (usize, usize),
    pub dx_dt: f64,
}

impl Default for OrderStudy {
    fn default() -> Self {
        OrderStudy {
            dt_pair: (0.02, 0.01),
            dt_grid: GridSpec::default(),
            dx_points: (64, 127),
            dx_dt: 1e-4,
        }
    }
}

/// Observed convergence orders `(dt, Δx)` of the residual.
pub fn residual_orders(state: &QuantumState, ham: &EffectiveHamiltonianSpec, t: f64, study: &OrderStudy) -> Result<(f64, f64)> {
    let run = |dt: f64, grid: GridSpec| {
        schrodinger_residual(state, ham, &ResidualOptions { t, dt, grid, tolerance: f64::INFINITY }).map(|r| r.max_abs)
    };
    let (d0, d1) = study.dt_pair;
    let dt_order = (run(d0, study.dt_grid)? / run(d1, study.dt_grid)?).ln() / (d0 / d1).ln();
    let (n0, n1) = study.dx_points;
    let sigmas = study.dt_grid.sigmas;
    let coarse = run(study.dx_dt, GridSpec::new(sigmas, n0)?)?;
    let fine = run(study.dx_dt, GridSpec::new(sigmas, n1)?)?;
    let ratio = (n1 - 1) as f64 / (n0 - 1) as f64;
    Ok((dt_order, (coarse / fine).ln() / ratio.ln()))
}

/// Counts strict-monotonicity violations of the closed forms along 20-point
/// rays in `[0, max]²`.
pub fn monotonicity_violations(cfg: &OscillatorConfig, dim: Dim, hbar: f64, max: f64) -> Result<usize> {
    let ray: Vec<f64> = (0..20).map(|k| max * k as f64 / 19.0).collect();
    let mut bad = 0;
    for &fixed in &ray {
        let along = |theta_major: bool| -> Result<Vec<InfoReport>> {
            ray.iter()
                .map(|&v| {
                    let (th, et) = if theta_major { (v, fixed) } else { (fixed, v) };
                    Ok(closed_forms(cfg, &NcSpace::new(th, et, dim, hbar)?))
                })
                .collect()
        };
        for w in along(true)?.windows(2) {
            let ok = w[1].f_r_nc < w[0].f_r_nc
                && w[1].s_r_nc > w[0].s_r_nc
                && w[1].f_p_nc > w[0].f_p_nc
                && w[1].s_p_nc < w[0].s_p_nc;
            bad += usize::from(!ok);
        }
        for w in along(false)?.windows(2) {
            let ok = w[1].f_r_nc > w[0].f_r_nc
                && w[1].s_r_nc < w[0].s_r_nc
                && w[1].f_p_nc < w[0].f_p_nc
                && w[1].s_p_nc > w[0].s_p_nc;
            bad += usize::from(!ok);
        }
    }
    Ok(bad)
}

/// The whole oracle suite for one configuration.
pub fn verify_suite(cfg: &OscillatorConfig, space: &NcSpace, opts: &OracleOptions) -> Result<OracleTable> {
    let mut table = oracle_report(cfg, space, opts)?;
    let t = opts.t;
    let t_end = t.max(1e-2) + 0.1;
    let state = ground_state(cfg, space, t_end, opts.perturb_phase)?;
    let ham = EffectiveHamiltonianSpec::new(cfg, space)?;

    let res_opts = ResidualOptions::at(t, space.dim);
    let res = schrodinger_residual(&state, &ham, &res_opts)?;
    table.push(OracleRow::new("schrodinger residual (max, normalized)", res.max_abs, 0.0, res_opts.tolerance, Comparison::AtMost));
    table.push(OracleRow::new(
        "schrodinger residual truncation estimate",
        res.truncation_estimate,
        0.0,
        res_opts.tolerance,
        Comparison::AtMost,
    ));
    if space.dim == Dim::Two {
        let (dt_order, dx_order) = residual_orders(&state, &ham, t, &OrderStudy::default())?;
        table.push(OracleRow::new("residual order in dt", dt_order, 2.0, 0.3, Comparison::Absolute));
        table.push(OracleRow::new("residual order in dx", dx_order, 4.0, 0.5, Comparison::Absolute));
    }

    let ev = &state.evolution;
    let spec = GridSpec::new(12.0, 512)?;
    let times: Vec<f64> = (0..5).map(|k| t_end * k as f64 / 4.0).collect();
    for (axis, tr) in ev.trajectories.iter().enumerate() {
        let rho_sq = if axis < 2 { ev.params.rho_sq } else { ev.params.rho3_sq };
        for n in 0..=3u32 {
            let mut values = Vec::new();
            for &s in &times {
                let samples = sample_mode(n, rho_sq, &tr.at(s)?, ev.space.hbar, &spec)?;
                values.push(invariant_expectation(rho_sq, tr, s, &samples, ev.space.hbar)?.value);
            }
            table.push(OracleRow::new(
                format!("invariant axis {} n={n}", axis + 1),
                values[1],
                n as f64 + 0.5,
                1e-7,
                Comparison::Absolute,
            ));
            let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
            table.push(OracleRow::new(format!("invariant axis {} n={n} spread over t", axis + 1), spread, 0.0, 1e-8, Comparison::AtMost));
        }
        table.push(OracleRow::new(
            format!("trajectory axis {} ode residual", axis + 1),
            tr.ode_residual(),
            0.0,
            1e-5 * (1.0 + tr.max_forcing()),
            Comparison::AtMost,
        ));
    }

    let bad = monotonicity_violations(cfg, space.dim, space.hbar, 2.0)?;
    table.push(OracleRow::new("monotonicity violations on [0,2]^2 rays", bad as f64, 0.0, 0.0, Comparison::AtMost));
    if space.dim == Dim::Two {
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                let (th, et) = (0.5 * i as f64, 0.5 * j as f64);
                let a = closed_forms(cfg, &NcSpace::new(th, et, space.dim, space.hbar)?);
                let b = closed_forms(cfg, &NcSpace::new(et, th, space.dim, space.hbar)?);
                worst = worst
                    .max((a.f_r_nc / b.f_p_nc - 1.0).abs())
                    .max((a.f_p_nc / b.f_r_nc - 1.0).abs())
                    .max((a.s_r_nc - b.s_p_nc).abs())
                    .max((a.s_p_nc - b.s_r_nc).abs());
            }
        }
        let natural = cfg.mass == 1.0 && cfg.omega0 == 1.0 && space.hbar == 1.0;
        if natural {
            table.push(OracleRow::new("theta-eta duality (natural units)", worst, 0.0, 1e-12, Comparison::AtMost));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{solve_particular, InitialConditions};
    use crate::wavefunctions::axis_coeffs;

    #[test]
    fn invariant_eigenvalues_and_gauge() {
        let cfg = OscillatorConfig::natural();
        let space = NcSpace::natural(0.6, 0.3, Dim::Two).unwrap();
        let params = effective_params(&cfg, &space);
        let drive = drive_coefficients(&cfg, &space).unwrap();
        let coeffs = axis_coeffs(&cfg, &params, &drive, 0).unwrap();
        let spec = GridSpec::new(12.0, 512).unwrap();
        let gauges = [(0.0, 0.0), (0.8, -0.5)];
        for n in 0..=3 {
            let vals: Vec<f64> = gauges
                .iter()
                .map(|&(q, p)| {
                    let ic = InitialConditions::consistent(&coeffs, 0.0, q, p);
                    let tr = solve_particular(&coeffs, (0.0, 2.0), 1e-3, ic).unwrap();
                    let samples = sample_mode(n, params.rho_sq, &tr.at(1.1).unwrap(), 1.0, &spec).unwrap();
                    let v = invariant_expectation(params.rho_sq, &tr, 1.1, &samples, 1.0).unwrap();
                    assert!(!v.flagged);
                    v.value
                })
                .collect();
            assert!((vals[0] - (n as f64 + 0.5)).abs() < 1e-8, "n={n}: {}", vals[0]);
            assert!((vals[0] - vals[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn oracle_row_verdicts() {
        assert!(OracleRow::new("a", 1.0 + 1e-7, 1.0, 1e-6, Comparison::Relative).passed);
        assert!(!OracleRow::new("a", 1.1, 1.0, 1e-6, Comparison::Relative).passed);
        assert!(OracleRow::new("b", 3.9999, 4.0, 1e-3, Comparison::AtLeast).passed);
        assert!(!OracleRow::new("b", 3.9, 4.0, 1e-3, Comparison::AtLeast).passed);
        assert!(!OracleRow::new("c", f64::NAN, 0.0, 1.0, Comparison::AtMost).passed);
        let mut t = OracleTable::default();
        t.push(OracleRow::new("x", 0.0, 0.0, 0.0, Comparison::AtMost));
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "check,value,reference,deviation,tolerance,comparison,passed\nx,0,0,0,0,at-most,true\n");
        assert!(t.summary().contains("PASS"));
    }

    #[test]
    fn commutative_stationary_residual() {
        let cfg = OscillatorConfig::natural();
        let space = NcSpace::commutative(Dim::Two);
        let state = QuantumState::ground(Evolution::from_rest(&cfg, &space, 1.0).unwrap());
        let ham = EffectiveHamiltonianSpec::new(&cfg, &space).unwrap();
        let r = schrodinger_residual(&state, &ham, &ResidualOptions::at(0.5, Dim::Two)).unwrap();
        assert!(r.max_abs < 1e-6, "{}", r.max_abs);
        assert!(!r.truncation_flagged);
        assert!(schrodinger_residual(&state, &ham, &ResidualOptions { dt: 0.0, ..ResidualOptions::at(0.5, Dim::Two) }).is_err());
    }
}
