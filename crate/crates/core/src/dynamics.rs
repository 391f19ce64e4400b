//! Classical particular trajectories and Lewis–Riesenfeld phases for
//! `H = β₁P² + β₂Q² + β₃(t)P + β₄(t)Q` with constant `β₁, β₂ > 0`.

use std::io::Write;
use std::sync::Arc;

use crate::error::{ensure, Error, Result};
use crate::signal::{SharedSignal, Signal};

/// Default RK4 step in natural units.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Coefficients of a one-axis quadratic Hamiltonian.
#[derive(Clone)]
pub struct QuadraticHamiltonianCoeffs {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: SharedSignal,
    pub beta4: SharedSignal,
    frequency: f64,
}

impl std::fmt::Debug for QuadraticHamiltonianCoeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuadraticHamiltonianCoeffs")
            .field("beta1", &self.beta1)
            .field("beta2", &self.beta2)
            .finish_non_exhaustive()
    }
}

impl QuadraticHamiltonianCoeffs {
    pub fn new(beta1: f64, beta2: f64, beta3: SharedSignal, beta4: SharedSignal) -> Result<Self> {
        ensure(beta1.is_finite() && beta1 > 0.0, || {
            format!("beta1 must be positive, got {beta1}")
        })?;
        ensure(beta2.is_finite() && beta2 > 0.0, || {
            format!("beta2 must be positive, got {beta2}")
        })?;
        Ok(QuadraticHamiltonianCoeffs {
            beta1,
            beta2,
            beta3,
            beta4,
            frequency: 2.0 * (beta1 * beta2).sqrt(),
        })
    }

    /// `P²/2m + mω²Q²/2 + β₃P + β₄Q`, keeping `ω` exactly as given.
    pub fn oscillator(mass: f64, omega: f64, beta3: SharedSignal, beta4: SharedSignal) -> Result<Self> {
        let mut c = Self::new(0.5 / mass, 0.5 * mass * omega * omega, beta3, beta4)?;
        c.frequency = omega;
        Ok(c)
    }

    /// Undriven coefficients.
    pub fn free(beta1: f64, beta2: f64) -> Result<Self> {
        Self::new(beta1, beta2, Arc::new(Signal::Zero), Arc::new(Signal::Zero))
    }

    /// `ω = 2√(β₁β₂)`
    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    fn omega_sq(&self) -> f64 {
        4.0 * self.beta1 * self.beta2
    }

    /// Right-hand sides `(−2β₁β₄ + β̇₃, −2β₂β₃ − β̇₄)` of the two classical ODEs.
    pub fn forcing(&self, t: f64) -> (f64, f64) {
        let fq = -2.0 * self.beta1 * self.beta4.value(t) + self.beta3.derivative(t);
        let fp = -2.0 * self.beta2 * self.beta3.value(t) - self.beta4.derivative(t);
        (fq, fp)
    }

    fn window(&self) -> Option<(f64, f64)> {
        match (self.beta3.window(), self.beta4.window()) {
            (Some(a), Some(b)) => Some((a.0.max(b.0), a.1.min(b.1))),
            (a, b) => a.or(b),
        }
    }
}

/// `ρ = (β₁/4β₂)^{1/4}`, the constant solution of the auxiliary equation.
pub fn rho_constant(coeffs: &QuadraticHamiltonianCoeffs) -> Result<f64> {
    rho_from(coeffs.beta1, coeffs.beta2)
}

pub fn rho_from(beta1: f64, beta2: f64) -> Result<f64> {
    ensure(beta1 > 0.0 && beta2 > 0.0, || {
        format!("beta1, beta2 must be positive, got {beta1}, {beta2}")
    })?;
    Ok((beta1 / (4.0 * beta2)).powf(0.25))
}

/// Phase-space state `(Q, Q̇, P, Ṗ)` of a classical trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseSpacePoint {
    pub q: f64,
    pub q_dot: f64,
    pub p: f64,
    pub p_dot: f64,
}

/// Starting values for both second-order equations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InitialConditions {
    pub q: f64,
    pub q_dot: f64,
    pub p: f64,
    pub p_dot: f64,
}

impl InitialConditions {
    pub fn at_rest() -> Self {
        Self::default()
    }

    /// Velocities taken from Hamilton's equations `Q̇ = 2β₁P + β₃`,
    /// `Ṗ = −2β₂Q − β₄`, so that `(Q, P)` is one classical orbit.
    ///
    /// The wavefunction only solves the Schrödinger equation when the pair is
    /// Hamilton-consistent; the two second-order equations alone do not enforce it.
    pub fn consistent(coeffs: &QuadraticHamiltonianCoeffs, t0: f64, q: f64, p: f64) -> Self {
        InitialConditions {
            q,
            q_dot: 2.0 * coeffs.beta1 * p + coeffs.beta3.value(t0),
            p,
            p_dot: -2.0 * coeffs.beta2 * q - coeffs.beta4.value(t0),
        }
    }
}

/// Densely sampled particular solution `Q_p^cl(t)`, `P_p^cl(t)`.
#[derive(Debug, Clone)]
pub struct ClassicalTrajectory {
    pub axis: usize,
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub q_dot: Vec<f64>,
    pub p: Vec<f64>,
    pub p_dot: Vec<f64>,
    q_ddot: Vec<f64>,
    p_ddot: Vec<f64>,
    /// Cumulative `∫ [Q̇²/4β₁ − β₂Q² − β₃²/4β₁] dt` at even nodes.
    action: Vec<f64>,
    coeffs: QuadraticHamiltonianCoeffs,
}

/// Integrates `Q̈ + 4β₁β₂Q = −2β₁β₄ + β̇₃` and `P̈ + 4β₁β₂P = −2β₂β₃ − β̇₄`
/// with classical fixed-step RK4.
///
/// The step is shrunk so that an integer number of steps spans the window.
pub fn solve_particular(
    coeffs: &QuadraticHamiltonianCoeffs,
    window: (f64, f64),
    step: f64,
    initial: InitialConditions,
) -> Result<ClassicalTrajectory> {
    let (t0, t1) = window;
    ensure(step.is_finite() && step > 0.0, || {
        format!("step must be positive, got {step}")
    })?;
    ensure(t0.is_finite() && t1.is_finite() && t1 > t0, || {
        format!("empty window [{t0}, {t1}]")
    })?;
    if let Some((a, b)) = coeffs.window() {
        if t0 < a || t1 > b {
            return Err(Error::OutOfRange {
                t: if t0 < a { t0 } else { t1 },
                start: a,
                end: b,
            });
        }
    }
    let steps = ((t1 - t0) / step).ceil().max(2.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let w2 = coeffs.omega_sq();

    let rhs = |t: f64, y: &[f64; 4]| -> [f64; 4] {
        let (fq, fp) = coeffs.forcing(t);
        [y[1], fq - w2 * y[0], y[3], fp - w2 * y[2]]
    };

    let mut ts = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    let mut y = [initial.q, initial.q_dot, initial.p, initial.p_dot];
    ts.push(t0);
    ys.push(y);
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = rhs(t + h, &axpy(&y, h, &k3));
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        ts.push(t0 + (k + 1) as f64 * h);
        ys.push(y);
    }

    let mut traj = ClassicalTrajectory {
        axis: 0,
        q: ys.iter().map(|y| y[0]).collect(),
        q_dot: ys.iter().map(|y| y[1]).collect(),
        p: ys.iter().map(|y| y[2]).collect(),
        p_dot: ys.iter().map(|y| y[3]).collect(),
        q_ddot: Vec::new(),
        p_ddot: Vec::new(),
        action: Vec::new(),
        t: ts,
        coeffs: coeffs.clone(),
    };
    (traj.q_ddot, traj.p_ddot) = traj
        .t
        .iter()
        .zip(traj.q.iter().zip(&traj.p))
        .map(|(&t, (&q, &p))| {
            let (fq, fp) = coeffs.forcing(t);
            (fq - w2 * q, fp - w2 * p)
        })
        .unzip();
    traj.action = traj.cumulative_action();
    Ok(traj)
}

fn axpy(y: &[f64; 4], a: f64, k: &[f64; 4]) -> [f64; 4] {
    [y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]]
}

/// Cubic Hermite interpolation on `[0, 1]` with endpoint slopes scaled by `h`.
fn hermite_interp(s: f64, h: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

// 4-point Gauss–Legendre on [-1, 1].
const GL_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

impl ClassicalTrajectory {
    pub fn with_axis(mut self, axis: usize) -> Self {
        self.axis = axis;
        self
    }

    pub fn coeffs(&self) -> &QuadraticHamiltonianCoeffs {
        &self.coeffs
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t[0], *self.t.last().unwrap())
    }

    pub fn step(&self) -> f64 {
        self.t[1] - self.t[0]
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (start, end) = self.window();
        let slack = 1e-12 * (1.0 + end.abs());
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::OutOfRange { t, start, end });
        }
        let h = self.step();
        let n = self.t.len();
        let k = (((t - start) / h).floor() as isize).clamp(0, n as isize - 2) as usize;
        Ok((k, ((t - self.t[k]) / h).clamp(0.0, 1.0)))
    }

    /// Trajectory state at any `t` in the window by cubic Hermite interpolation.
    pub fn at(&self, t: f64) -> Result<PhaseSpacePoint> {
        let (k, s) = self.locate(t)?;
        let h = self.step();
        let ip = |y: &[f64], d: &[f64]| hermite_interp(s, h, y[k], d[k], y[k + 1], d[k + 1]);
        Ok(PhaseSpacePoint {
            q: ip(&self.q, &self.q_dot),
            q_dot: ip(&self.q_dot, &self.q_ddot),
            p: ip(&self.p, &self.p_dot),
            p_dot: ip(&self.p_dot, &self.p_ddot),
        })
    }

    fn lagrangian(&self, t: f64, q: f64, q_dot: f64) -> f64 {
        let c = &self.coeffs;
        let b3 = c.beta3.value(t);
        (q_dot * q_dot - b3 * b3) / (4.0 * c.beta1) - c.beta2 * q * q
    }

    fn cumulative_action(&self) -> Vec<f64> {
        let h = self.step();
        let pairs = (self.t.len() - 1) / 2;
        let l: Vec<f64> = (0..self.t.len())
            .map(|i| self.lagrangian(self.t[i], self.q[i], self.q_dot[i]))
            .collect();
        let mut acc = Vec::with_capacity(pairs + 1);
        let mut sum = 0.0;
        acc.push(0.0);
        for j in 0..pairs {
            let i = 2 * j;
            sum += h / 3.0 * (l[i] + 4.0 * l[i + 1] + l[i + 2]);
            acc.push(sum);
        }
        acc
    }

    /// `∫_{t₀}^{t} [Q̇²/4β₁ − β₂Q² − β₃²/4β₁] dt'` by composite Simpson over
    /// the even nodes plus Gauss–Legendre on the interpolated remainder.
    pub fn action(&self, t: f64) -> Result<f64> {
        self.locate(t)?;
        let h = self.step();
        let pairs = self.action.len() - 1;
        let j = (((t - self.t[0]) / (2.0 * h)).floor() as usize).min(pairs);
        let mut a = self.action[j];
        let mut lo = self.t[2 * j];
        while lo < t {
            let hi = (lo + h).min(t);
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
                let tt = mid + half * x;
                let s = self.at(tt)?;
                a += w * half * self.lagrangian(tt, s.q, s.q_dot);
            }
            lo = hi;
        }
        Ok(a)
    }

    /// Max central-difference residual of both ODEs at interior nodes.
    pub fn ode_residual(&self) -> f64 {
        let h = self.step();
        let w2 = self.coeffs.omega_sq();
        (1..self.t.len() - 1)
            .map(|i| {
                let (fq, fp) = self.coeffs.forcing(self.t[i]);
                let qdd = (self.q[i + 1] - 2.0 * self.q[i] + self.q[i - 1]) / (h * h);
                let pdd = (self.p[i + 1] - 2.0 * self.p[i] + self.p[i - 1]) / (h * h);
                (qdd + w2 * self.q[i] - fq)
                    .abs()
                    .max((pdd + w2 * self.p[i] - fp).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|forcing|` seen on the grid.
    pub fn max_forcing(&self) -> f64 {
        self.t
            .iter()
            .map(|&t| {
                let (a, b) = self.coeffs.forcing(t);
                a.abs().max(b.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Writes `t,Q,Qdot,P,Pdot` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,Q,Qdot,P,Pdot")?;
        for i in 0..self.t.len() {
            writeln!(
                w,
                "{},{},{},{},{}",
                self.t[i], self.q[i], self.q_dot[i], self.p[i], self.p_dot[i]
            )?;
        }
        Ok(())
    }
}

/// Lewis–Riesenfeld phase at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseValue {
    pub y: f64,
    pub t: f64,
}

/// `Y = −Σ_l (n_l + ½) ω_l t − (1/ħ) Σ_l ∫ [Q̇_l²/4β₁ − β₂Q_l² − β₃²/4β₁] dt'`,
/// one trajectory per rotated-frame axis.
pub fn phase_y(
    quantum_numbers: &[u32],
    trajectories: &[ClassicalTrajectory],
    hbar: f64,
    t: f64,
) -> Result<PhaseValue> {
    if quantum_numbers.len() != trajectories.len() {
        return Err(Error::DimensionMismatch {
            expected: trajectories.len(),
            got: quantum_numbers.len(),
        });
    }
    let mut y = 0.0;
    for (&n, traj) in quantum_numbers.iter().zip(trajectories) {
        y -= (n as f64 + 0.5) * traj.coeffs.frequency() * t;
        y -= traj.action(t)? / hbar;
    }
    Ok(PhaseValue { y, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn driven(beta4: Signal) -> QuadraticHamiltonianCoeffs {
        QuadraticHamiltonianCoeffs::new(0.5, 0.5, Arc::new(Signal::Zero), Arc::new(beta4)).unwrap()
    }

    #[test]
    fn zero_forcing_stays_at_origin() {
        let c = QuadraticHamiltonianCoeffs::free(0.5, 0.5).unwrap();
        let tr = solve_particular(&c, (0.0, 5.0), 1e-3, InitialConditions::at_rest()).unwrap();
        assert!(tr.q.iter().chain(&tr.p).all(|v| *v == 0.0));
    }

    #[test]
    fn constant_drive_steady_state() {
        // Third axis: β₁ = 1/2m, β₂ = mω₀²/2, β₄ = qE₀.
        let (m, w0, qe) = (1.3, 0.8, 0.45);
        let c = QuadraticHamiltonianCoeffs::oscillator(m, w0, Arc::new(Signal::Zero), Arc::new(Signal::constant(qe))).unwrap();
        let q0 = -qe / (m * w0 * w0);
        let ic = InitialConditions { q: q0, ..Default::default() };
        assert_eq!(ic, InitialConditions::consistent(&c, 0.0, q0, 0.0));
        let tr = solve_particular(&c, (0.0, 10.0), 1e-3, ic).unwrap();
        for &q in &tr.q {
            assert!((q - q0).abs() < 1e-13);
        }
    }

    /// Closed form for `Q̈ + ω²Q = −2β₁ sin(Ωt)` from rest:
    /// `Q = −2β₁/(ω² − Ω²) [sin Ωt − (Ω/ω) sin ωt]`.
    fn sinusoid_oracle(beta1: f64, w: f64, big: f64, t: f64) -> f64 {
        -2.0 * beta1 / (w * w - big * big) * ((big * t).sin() - big / w * (w * t).sin())
    }

    #[test]
    fn sinusoidal_forcing_matches_closed_form() {
        let big = 1.7;
        let c = driven(Signal::sin(1.0, big));
        let w = c.frequency();
        let t1 = 10.0 * 2.0 * std::f64::consts::PI / w;
        let tr = solve_particular(&c, (0.0, t1), 1e-3, InitialConditions::at_rest()).unwrap();
        let scale = tr.q.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let err = tr
            .t
            .iter()
            .zip(&tr.q)
            .map(|(&t, &q)| (q - sinusoid_oracle(0.5, w, big, t)).abs())
            .fold(0.0, f64::max);
        assert!(err / scale < 1e-6, "relative error {}", err / scale);
    }

    #[test]
    fn rk4_converges_at_fourth_order() {
        let big = 1.7;
        let c = driven(Signal::sin(1.0, big));
        let w = c.frequency();
        let t1 = 12.0;
        let exact = sinusoid_oracle(0.5, w, big, t1);
        let err = |h: f64| {
            let tr = solve_particular(&c, (0.0, t1), h, InitialConditions::at_rest()).unwrap();
            (tr.q.last().unwrap() - exact).abs()
        };
        let ratio = err(0.04) / err(0.02);
        assert!(ratio >= 12.0, "ratio {ratio}");
    }

    #[test]
    fn ode_residual_is_small() {
        let c = QuadraticHamiltonianCoeffs::new(
            0.6,
            0.9,
            Arc::new(Signal::cos(0.4, 2.2)),
            Arc::new(Signal::sin(0.7, 0.9)),
        )
        .unwrap();
        let tr = solve_particular(&c, (0.0, 8.0), 1e-3, InitialConditions::consistent(&c, 0.0, 0.2, -0.1)).unwrap();
        assert!(tr.ode_residual() < 1e-5 * (1.0 + tr.max_forcing()));
    }

    #[test]
    fn consistent_start_keeps_hamilton_relations() {
        let c = QuadraticHamiltonianCoeffs::new(
            0.6,
            0.9,
            Arc::new(Signal::cos(0.4, 2.2)),
            Arc::new(Signal::sin(0.7, 0.9)),
        )
        .unwrap();
        let tr = solve_particular(&c, (0.0, 6.0), 1e-3, InitialConditions::consistent(&c, 0.0, 0.3, 0.1)).unwrap();
        for i in (0..tr.t.len()).step_by(500) {
            let t = tr.t[i];
            assert!((tr.q_dot[i] - (2.0 * c.beta1 * tr.p[i] + c.beta3.value(t))).abs() < 1e-10);
            assert!((tr.p_dot[i] - (-2.0 * c.beta2 * tr.q[i] - c.beta4.value(t))).abs() < 1e-10);
        }
    }

    #[test]
    fn argument_errors() {
        let c = QuadraticHamiltonianCoeffs::free(0.5, 0.5).unwrap();
        assert!(solve_particular(&c, (0.0, 1.0), 0.0, InitialConditions::at_rest()).is_err());
        assert!(solve_particular(&c, (1.0, 1.0), 1e-3, InitialConditions::at_rest()).is_err());
        assert!(QuadraticHamiltonianCoeffs::free(0.0, 1.0).is_err());
        assert!(rho_from(-1.0, 1.0).is_err());
    }

    #[test]
    fn rho_examples() {
        let rho = rho_from(0.5, 0.5).unwrap();
        assert_relative_eq!(rho, 0.25f64.powf(0.25), max_relative = 1e-15);
        assert_relative_eq!(rho * rho, 0.5, max_relative = 1e-15);

        let rho = rho_from(1.0 / (2.0 * 0.8), 0.8 * 1.25 / 2.0).unwrap();
        assert_relative_eq!(rho * rho, 0.559016994374947, max_relative = 1e-14);

        for (b1, b2) in [(0.5, 0.5), (0.625, 0.5), (3.0, 0.01), (1e-3, 40.0)] {
            let r = rho_from(b1, b2).unwrap();
            let res = 4.0 * b1 * b2 * r - b1 * b1 / r.powi(3);
            assert!(res.abs() <= 1e-14 * (4.0 * b1 * b2 * r), "{b1} {b2}: {res}");
        }
    }

    #[test]
    fn interpolation_is_accurate_between_nodes() {
        let big = 1.7;
        let c = driven(Signal::sin(1.0, big));
        let w = c.frequency();
        let tr = solve_particular(&c, (0.0, 3.0), 1e-3, InitialConditions::at_rest()).unwrap();
        for t in [0.00037, 1.23456, 2.9999] {
            let s = tr.at(t).unwrap();
            assert!((s.q - sinusoid_oracle(0.5, w, big, t)).abs() < 1e-12);
        }
        assert!(matches!(tr.at(3.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn undriven_phase_is_secular() {
        let c = QuadraticHamiltonianCoeffs::oscillator(1.0, 1.0, Arc::new(Signal::Zero), Arc::new(Signal::Zero)).unwrap();
        let tr = solve_particular(&c, (0.0, 4.0), 1e-3, InitialConditions::at_rest()).unwrap();
        let trs = vec![tr.clone(), tr.clone().with_axis(1)];
        let y = phase_y(&[0, 0], &trs, 1.0, 2.5).unwrap();
        assert_relative_eq!(y.y, -2.5, max_relative = 1e-15);
        assert_eq!(phase_y(&[3, 1], &trs, 1.0, 0.0).unwrap().y, 0.0);
        let y31 = phase_y(&[3, 1], &trs, 1.0, 2.5).unwrap();
        assert!((y31.y - y.y + 4.0 * 2.5).abs() < 1e-13);
        assert!(phase_y(&[0], &trs, 1.0, 1.0).is_err());
        assert!(matches!(phase_y(&[0, 0], &trs, 1.0, 4.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn action_matches_closed_form_integral() {
        // Steady state Q = q0: ∫ −β₂ q0² dt is linear in t.
        let (m, w0, qe) = (1.0, 1.0, 0.3);
        let c = QuadraticHamiltonianCoeffs::oscillator(m, w0, Arc::new(Signal::Zero), Arc::new(Signal::constant(qe))).unwrap();
        let q0 = -qe / (m * w0 * w0);
        let tr = solve_particular(&c, (0.0, 3.0), 1e-3, InitialConditions::consistent(&c, 0.0, q0, 0.0)).unwrap();
        for t in [0.0, 0.0015, 1.0, 2.9996, 3.0] {
            let expected = -0.5 * m * w0 * w0 * q0 * q0 * t;
            assert!((tr.action(t).unwrap() - expected).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn csv_export() {
        let c = QuadraticHamiltonianCoeffs::free(0.5, 0.5).unwrap();
        let tr = solve_particular(&c, (0.0, 0.01), 1e-3, InitialConditions::at_rest()).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,Q,Qdot,P,Pdot\n"));
        assert_eq!(text.lines().count(), tr.t.len() + 1);
    }
}
