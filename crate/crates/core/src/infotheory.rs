//! Fisher information, Shannon entropy and their noncommutative variants, both
//! from sampled densities and from the ground-state closed forms.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::momentum_on_grid;
use crate::grid::{Domain, Grid1D, GridSpec, SampledField};
use crate::nc_model::{effective_params, eta_factor, nc_variances, theta_factor, AxisVariances, Dim, NcSpace, OscillatorConfig};
use crate::wavefunctions::{sample_position, QuantumState, Snapshot};

/// Densities below this are treated as exact zeros.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Largest tolerated deviation of a density's integral from one.
pub const NORM_TOLERANCE: f64 = 1e-4;

/// Ratio between the source-grid extent of the momentum transform and the
/// requested density grid extent.
const TRANSFORM_WIDENING: f64 = 1.5;

const MIN_TRANSFORM_POINTS: usize = 64;

/// A nonnegative density on a tensor grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDensity {
    pub axes: Vec<Grid1D>,
    pub values: Vec<f64>,
    pub domain: Domain,
}

impl SampledDensity {
    pub fn new(axes: Vec<Grid1D>, values: Vec<f64>, domain: Domain) -> Result<Self> {
        let n: usize = axes.iter().map(|a| a.len).product();
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidArgument(format!("density value {v} is not a finite nonnegative number")));
        }
        Ok(SampledDensity { axes, values, domain })
    }

    /// `|ψ|²` of a sampled field.
    pub fn from_field(field: &SampledField) -> Self {
        SampledDensity {
            axes: field.axes.clone(),
            values: field.values.iter().map(|v| v.norm_sqr()).collect(),
            domain: field.domain,
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len).collect()
    }

    /// Trapezoid integral of `f(x, χ(x))` over the grid.
    fn integrate<F: FnMut(&[f64], f64, usize) -> f64>(&self, mut f: F) -> f64 {
        let shape = self.shape();
        let d = shape.len();
        let mut idx = vec![0usize; d];
        let mut x: Vec<f64> = self.axes.iter().map(|a| a.point(0)).collect();
        let weights: Vec<Vec<f64>> = self.axes.iter().map(|a| (0..a.len).map(|k| a.weight(k)).collect()).collect();
        let mut sum = 0.0;
        for (flat, &v) in self.values.iter().enumerate() {
            let w: f64 = (0..d).map(|a| weights[a][idx[a]]).product();
            sum += w * f(&x, v, flat);
            for a in (0..d).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    x[a] = self.axes[a].point(idx[a]);
                    break;
                }
                idx[a] = 0;
                x[a] = self.axes[a].point(0);
            }
        }
        sum
    }

    pub fn integral(&self) -> f64 {
        self.integrate(|_, v, _| v)
    }

    pub fn mean(&self, axis: usize) -> f64 {
        self.integrate(|x, v, _| x[axis] * v) / self.integral()
    }

    pub fn variance(&self, axis: usize) -> f64 {
        let mu = self.mean(axis);
        self.integrate(|x, v, _| (x[axis] - mu).powi(2) * v) / self.integral()
    }

    /// All per-axis variances from the weighted marginals, in one pass.
    pub fn variances(&self) -> Vec<f64> {
        let shape = self.shape();
        let weights: Vec<Vec<f64>> = self.axes.iter().map(|a| (0..a.len).map(|k| a.weight(k)).collect()).collect();
        let mut marginals: Vec<Vec<f64>> = shape.iter().map(|&n| vec![0.0; n]).collect();
        let mut idx = vec![0usize; shape.len()];
        for &v in &self.values {
            let w: f64 = idx.iter().zip(&weights).map(|(&i, w)| w[i]).product();
            for (m, &i) in marginals.iter_mut().zip(&idx) {
                m[i] += w * v;
            }
            for a in (0..shape.len()).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        marginals
            .iter()
            .zip(&self.axes)
            .map(|(m, g)| {
                let total: f64 = m.iter().sum();
                let mu = m.iter().enumerate().map(|(k, w)| g.point(k) * w).sum::<f64>() / total;
                m.iter().enumerate().map(|(k, w)| (g.point(k) - mu).powi(2) * w).sum::<f64>() / total
            })
            .collect()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm = self.integral();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Validation(format!("density integrates to {norm}, not 1")));
        }
        Ok(())
    }
}

/// Per-axis Fisher information and its sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherComponents {
    pub per_axis: Vec<f64>,
    pub total: f64,
}

impl FisherComponents {
    pub fn new(per_axis: Vec<f64>) -> Self {
        let total = per_axis.iter().sum();
        FisherComponents { per_axis, total }
    }

    /// Sum over the first two axes, the ones coupled by θ and η.
    pub fn planar(&self) -> f64 {
        self.per_axis.iter().take(2).sum()
    }
}

/// Fourth-order central difference along `axis`; the two outermost points on
/// each side fall back to second order.
fn axis_derivative(values: &[f64], shape: &[usize], axis: usize, h: f64) -> Vec<f64> {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![0.0; values.len()];
    if n < 3 {
        return out;
    }
    for (flat, o) in out.iter_mut().enumerate() {
        let k = (flat / inner) % n;
        let at = |j: isize| values[(flat as isize + j * inner as isize) as usize];
        *o = if k >= 2 && k + 2 < n {
            (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h)
        } else if k == 0 {
            (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
        } else if k == n - 1 {
            (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h)
        } else {
            (at(1) - at(-1)) / (2.0 * h)
        };
    }
    out
}

/// `F_l = ∫ (∂_l χ)²/χ` per axis.
pub fn fisher_commutative(density: &SampledDensity) -> Result<FisherComponents> {
    density.check_normalized()?;
    let shape = density.shape();
    let per_axis = (0..density.dim())
        .map(|axis| {
            let d = axis_derivative(&density.values, &shape, axis, density.axes[axis].step);
            density.integrate(|_, v, flat| if v < DENSITY_FLOOR { 0.0 } else { d[flat] * d[flat] / v })
        })
        .collect();
    Ok(FisherComponents::new(per_axis))
}

/// `S = −∫ χ ln χ`.
pub fn shannon(density: &SampledDensity) -> Result<f64> {
    density.check_normalized()?;
    Ok(-density.integrate(|_, v, _| if v < DENSITY_FLOOR { 0.0 } else { v * v.ln() }))
}

/// Noncommutative Fisher pair `(F_r̂, F_p̂)` from commutative components.
pub fn fisher_nc(position: &FisherComponents, momentum: &FisherComponents, space: &NcSpace) -> Result<(f64, f64)> {
    let d = space.axes();
    for got in [position.per_axis.len(), momentum.per_axis.len()] {
        if got != d {
            return Err(Error::DimensionMismatch { expected: d, got });
        }
    }
    let h2 = space.hbar * space.hbar;
    let (fr, fp) = (position.total, momentum.total);
    Ok(match space.dim {
        Dim::Two => (
            fr / (1.0 + space.theta.powi(2) * fr / (4.0 * h2 * fp)),
            fp / (1.0 + space.eta.powi(2) * fp / (4.0 * h2 * fr)),
        ),
        Dim::Three => (
            fr / (1.0 + space.theta.powi(2) / (9.0 * h2) * fr / momentum.planar()),
            fp / (1.0 + space.eta.powi(2) / (9.0 * h2) * fp / position.planar()),
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Quadrature,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Quadrature => "quadrature",
        }
    }
}

/// Information measures of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    pub theta: f64,
    pub eta: f64,
    pub hbar: f64,
    pub dim: usize,
    pub f_r: FisherComponents,
    pub f_p: FisherComponents,
    pub f_r_nc: f64,
    pub f_p_nc: f64,
    pub s_r_nc: f64,
    pub s_p_nc: f64,
    pub var_r_nc: f64,
    pub var_p_nc: f64,
    pub cramer_rao_r: f64,
    pub cramer_rao_p: f64,
    pub bbm_sum: f64,
    pub provenance: Provenance,
}

/// Column names of [`InfoReport::to_csv_row`].
pub const CSV_HEADER: &str =
    "theta,eta,dim,F_r_nc,F_p_nc,S_r_nc,S_p_nc,var_r_nc,var_p_nc,cr_r,cr_p,bbm_sum,provenance";

impl InfoReport {
    /// One CSV line (no newline), floats in shortest round-trip form.
    pub fn to_csv_row(&self) -> String {
        let mut row = format!("{},{},{}", self.theta, self.eta, self.dim);
        for v in self.scalars() {
            write!(row, ",{v}").expect("writing to a String");
        }
        write!(row, ",{}", self.provenance.as_str()).expect("writing to a String");
        row
    }

    /// The numeric entries in CSV order, after `theta, eta, dim`.
    pub fn scalars(&self) -> [f64; 9] {
        [
            self.f_r_nc,
            self.f_p_nc,
            self.s_r_nc,
            self.s_p_nc,
            self.var_r_nc,
            self.var_p_nc,
            self.cramer_rao_r,
            self.cramer_rao_p,
            self.bbm_sum,
        ]
    }

    /// Names matching [`InfoReport::scalars`].
    pub fn scalar_names() -> [&'static str; 9] {
        ["F_r_nc", "F_p_nc", "S_r_nc", "S_p_nc", "var_r_nc", "var_p_nc", "cr_r", "cr_p", "bbm_sum"]
    }

    /// `D(1 + ln π + ln ħ)`.
    pub fn bbm_bound(&self) -> f64 {
        bbm_bound(self.dim, self.hbar)
    }
}

pub fn bbm_bound(dim: usize, hbar: f64) -> f64 {
    dim as f64 * (1.0 + PI.ln() + hbar.ln())
}

/// Ground-state report from the closed-form expressions.
pub fn closed_forms(cfg: &OscillatorConfig, space: &NcSpace) -> InfoReport {
    let (m, w0, h) = (cfg.mass, cfg.omega0, space.hbar);
    let a = theta_factor(cfg, space);
    let b = eta_factor(cfg, space);
    let mw = m * w0;
    let et = a - 1.0;
    let ee = b - 1.0;
    let (f_r_nc, f_p_nc, s_r_nc, s_p_nc) = match space.dim {
        Dim::Two => {
            let fr = 4.0 * mw / h * (1.0 + et).powf(-0.5) * (1.0 + ee).sqrt() / (1.0 + et / (1.0 + et) * (1.0 + ee));
            let fp = 4.0 / (h * mw) * (1.0 + et).sqrt() * (1.0 + ee).powf(-0.5) / (1.0 + ee * (1.0 + et) / (1.0 + ee));
            let sr = 1.0 + PI.ln() + (h / mw * (1.0 + et).sqrt() * (1.0 + ee).powf(-0.5)).ln();
            let sp = 1.0 + PI.ln() - (1.0 / (h * mw) * (1.0 + et).sqrt() * (1.0 + ee).powf(-0.5)).ln();
            (fr, fp, sr, sp)
        }
        Dim::Three => {
            let u = (1.0 + et).powf(-0.5) * (1.0 + ee).sqrt();
            let v = (1.0 + et).sqrt() * (1.0 + ee).powf(-0.5);
            let tt = mw * mw * space.theta * space.theta / (9.0 * h * h);
            let nn = space.eta * space.eta / (9.0 * h * h * mw * mw);
            let fr = 4.0 * mw / h * (u + 0.5) / (1.0 + tt * u * (u + 0.5));
            let fp = 4.0 / (h * mw) * (v + 0.5) / (1.0 + nn * v * (v + 0.5));
            let sr = 1.5 + 1.5 * PI.ln() + ((h / mw).powf(1.5) * v).ln();
            let sp = 1.5 + 1.5 * PI.ln() - ((1.0 / (h * mw)).powf(1.5) * v).ln();
            (fr, fp, sr, sp)
        }
    };

    let params = effective_params(cfg, space);
    let widths: Vec<f64> = (0..space.axes()).map(|l| if l < 2 { params.rho_sq } else { params.rho3_sq }).collect();
    let position: Vec<f64> = widths.iter().map(|r2| r2 * h).collect();
    let momentum: Vec<f64> = widths.iter().map(|r2| h / (4.0 * r2)).collect();
    let f_r = FisherComponents::new(position.iter().map(|v| 1.0 / v).collect());
    let f_p = FisherComponents::new(momentum.iter().map(|v| 1.0 / v).collect());
    let (var_r_nc, var_p_nc) = nc_variances(&AxisVariances { position, momentum }, space)
        .expect("axis count matches the space");

    InfoReport {
        theta: space.theta,
        eta: space.eta,
        hbar: h,
        dim: space.axes(),
        f_r,
        f_p,
        f_r_nc,
        f_p_nc,
        s_r_nc,
        s_p_nc,
        var_r_nc,
        var_p_nc,
        cramer_rao_r: f_r_nc * var_r_nc,
        cramer_rao_p: f_p_nc * var_p_nc,
        bbm_sum: bbm_bound(space.axes(), h),
        provenance: Provenance::ClosedForm,
    }
}

/// Momentum wavefunction of `snap` on its default momentum grid for `spec`,
/// by direct numerical transform of `ψ` sampled on a wider position grid.
pub fn momentum_field(snap: &Snapshot, spec: &GridSpec) -> Result<SampledField> {
    // Replicas of the spectrum sit 2πħ/Δx apart; keep them well outside the
    // momentum grid while sampling as sparsely as that allows.
    let scale = (0..snap.dim()).map(|a| snap.excitation_scale(a)).fold(1.0, f64::max);
    let needed = (48.0 * scale * scale).ceil() as usize + 1;
    let wide = GridSpec {
        sigmas: spec.sigmas * TRANSFORM_WIDENING,
        points: needed.clamp(MIN_TRANSFORM_POINTS, spec.points.max(MIN_TRANSFORM_POINTS)),
    };
    let source = sample_position(snap, &snap.position_grid(&wide)?)?;
    momentum_on_grid(&source, snap.hbar, &snap.momentum_grid(spec)?)
}

/// Sampled position and momentum densities of a state at one instant.
#[derive(Debug, Clone)]
pub struct DensityPair {
    pub position: SampledDensity,
    pub momentum: SampledDensity,
    /// Boundary ratio of the position field fed to the transform, when it
    /// exceeded the decay threshold.
    pub truncation: Option<f64>,
}

/// `|ψ|²` on the position grid of `spec` and `|Ξ|²` from [`momentum_field`].
pub fn sample_densities(state: &QuantumState, t: f64, spec: &GridSpec) -> Result<DensityPair> {
    let snap = state.at(t)?;
    let position_field = sample_position(&snap, &snap.position_grid(spec)?)?;
    let momentum_field = momentum_field(&snap, spec)?;
    Ok(DensityPair {
        position: SampledDensity::from_field(&position_field),
        momentum: SampledDensity::from_field(&momentum_field),
        truncation: momentum_field.truncation,
    })
}

/// Quadrature report for any state.
pub fn info_from_state(state: &QuantumState, t: f64, spec: &GridSpec) -> Result<InfoReport> {
    let pair = sample_densities(state, t, spec)?;
    info_from_densities(&pair.position, &pair.momentum, &state.evolution.space)
}

/// Quadrature report from a pair of sampled densities.
pub fn info_from_densities(position: &SampledDensity, momentum: &SampledDensity, space: &NcSpace) -> Result<InfoReport> {
    if position.domain != Domain::Position || momentum.domain != Domain::Momentum {
        return Err(Error::InvalidArgument("expected a position and a momentum density".into()));
    }
    let f_r = fisher_commutative(position)?;
    let f_p = fisher_commutative(momentum)?;
    let (f_r_nc, f_p_nc) = fisher_nc(&f_r, &f_p, space)?;
    let s_r_nc = shannon(position)?;
    let s_p_nc = shannon(momentum)?;
    let (var_r_nc, var_p_nc) = nc_variances(
        &AxisVariances {
            position: position.variances(),
            momentum: momentum.variances(),
        },
        space,
    )?;
    Ok(InfoReport {
        theta: space.theta,
        eta: space.eta,
        hbar: space.hbar,
        dim: space.axes(),
        f_r,
        f_p,
        f_r_nc,
        f_p_nc,
        s_r_nc,
        s_p_nc,
        var_r_nc,
        var_p_nc,
        cramer_rao_r: f_r_nc * var_r_nc,
        cramer_rao_p: f_p_nc * var_p_nc,
        bbm_sum: s_r_nc + s_p_nc,
        provenance: Provenance::Quadrature,
    })
}

/// Slack allowed on the uncertainty floors.
pub const BOUND_SLACK: f64 = 1e-9;

/// Outcome of the `Δr̂ ≥ √θ`, `Δp̂ ≥ √η` checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub delta_r: f64,
    pub delta_p: f64,
    pub position_margin: f64,
    pub momentum_margin: f64,
    pub position_ok: bool,
    pub momentum_ok: bool,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.position_ok && self.momentum_ok
    }
}

pub fn nc_uncertainty_bounds(report: &InfoReport, space: &NcSpace) -> BoundCheck {
    let delta_r = report.var_r_nc.sqrt();
    let delta_p = report.var_p_nc.sqrt();
    let position_margin = delta_r - space.theta.sqrt();
    let momentum_margin = delta_p - space.eta.sqrt();
    BoundCheck {
        delta_r,
        delta_p,
        position_margin,
        momentum_margin,
        position_ok: position_margin >= -BOUND_SLACK,
        momentum_ok: momentum_margin >= -BOUND_SLACK,
    }
}
