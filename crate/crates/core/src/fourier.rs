//! Position ↔ momentum transforms with kernel `exp(∓i p·r/ħ)` and symmetric
//! normalization `(2πħ)^{-D/2}`.
//!
//! For grids `x_j = x₀ + jΔx`, `p_k = p₀ + kΔp` with `ΔxΔp = 2πħ/N`,
//! `p_k x_j = p₀x₀ + p₀jΔx + kΔp x₀ + 2πħ jk/N`, so one FFT per axis plus a
//! phase on each side reproduces the continuous transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{total_points, Domain, Grid1D, SampledField};

/// Boundary amplitude (relative to the peak) above which the transform of a
/// field is flagged as truncated.
pub const DECAY_THRESHOLD: f64 = 1e-12;

/// Sign of the exponent in the kernel `exp(sign · i p·r/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `exp(−i p·r/ħ)`: position → momentum.
    Forward,
    /// `exp(+i p·r/ħ)`: momentum → position.
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        }
    }
}

/// Applies `op` to every 1-D line of `values` along `axis`, producing lines of
/// length `out_len`.
fn map_lines<F>(values: &[Complex64], shape: &[usize], axis: usize, out_len: usize, op: F) -> Vec<Complex64>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out_shape = shape.to_vec();
    out_shape[axis] = out_len;
    let mut out = vec![Complex64::new(0.0, 0.0); total_len(&out_shape)];

    let lines: Vec<Vec<Complex64>> = (0..outer * inner)
        .into_par_iter()
        .map(|line| {
            let (o, i) = (line / inner, line % inner);
            let src: Vec<Complex64> = (0..n).map(|k| values[(o * n + k) * inner + i]).collect();
            let mut dst = vec![Complex64::new(0.0, 0.0); out_len];
            op(&src, &mut dst);
            dst
        })
        .collect();
    for (line, dst) in lines.into_iter().enumerate() {
        let (o, i) = (line / inner, line % inner);
        for (k, v) in dst.into_iter().enumerate() {
            out[(o * out_len + k) * inner + i] = v;
        }
    }
    out
}

fn total_len(shape: &[usize]) -> usize {
    shape.iter().product()
}

/// FFT-based transform onto the reciprocal grid with the given start points;
/// output spacing is `2πħ/(NΔ)` per axis.
pub fn fourier_transform(
    field: &SampledField,
    hbar: f64,
    direction: Direction,
    output_start: &[f64],
) -> Result<SampledField> {
    if output_start.len() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: output_start.len(),
        });
    }
    let sign = direction.sign();
    let fft_dir = match direction {
        Direction::Forward => FftDirection::Forward,
        Direction::Inverse => FftDirection::Inverse,
    };
    let mut planner = FftPlanner::<f64>::new();
    let mut values = field.values.clone();
    let shape = field.shape();
    let mut out_axes = Vec::with_capacity(field.dim());

    for (axis, (grid, &y0)) in field.axes.iter().zip(output_start).enumerate() {
        let n = grid.len;
        let x0 = grid.start;
        let dx = grid.step;
        let dy = 2.0 * PI * hbar / (n as f64 * dx);
        let fft = planner.plan_fft(n, fft_dir);
        let scale = dx / (2.0 * PI * hbar).sqrt();
        let pre: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, sign * y0 * j as f64 * dx / hbar))
            .collect();
        let post: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(scale, sign * (y0 + k as f64 * dy) * x0 / hbar))
            .collect();
        values = map_lines(&values, &shape, axis, n, |src, dst| {
            for ((d, s), p) in dst.iter_mut().zip(src).zip(&pre) {
                *d = s * p;
            }
            fft.process(dst);
            for (d, p) in dst.iter_mut().zip(&post) {
                *d *= p;
            }
        });
        out_axes.push(Grid1D::new(y0, dy, n)?);
    }

    let domain = match field.domain {
        Domain::Position => Domain::Momentum,
        Domain::Momentum => Domain::Position,
    };
    let mut out = SampledField::new(out_axes, values, domain)?;
    let ratio = field.boundary_ratio();
    out.truncation = (ratio > DECAY_THRESHOLD).then_some(ratio);
    Ok(out)
}

/// Origin-centered reciprocal grid start `−⌊N/2⌋ Δ` for each axis.
pub fn centered_starts(field: &SampledField, hbar: f64) -> Vec<f64> {
    field
        .axes
        .iter()
        .map(|g| {
            let dy = 2.0 * PI * hbar / (g.len as f64 * g.step);
            -((g.len / 2) as f64) * dy
        })
        .collect()
}

/// `Ξ(p) = (2πħ)^{-D/2} ∫ ψ(r) exp(−i p·r/ħ) d^D r` on the origin-centered
/// momentum grid with `Δp = 2πħ/(NΔx)`.
///
/// A boundary amplitude above [`DECAY_THRESHOLD`] is reported in
/// `truncation` of the result rather than failing.
pub fn momentum_numeric(field: &SampledField, hbar: f64) -> Result<SampledField> {
    if field.domain != Domain::Position {
        return Err(Error::InvalidArgument("expected a position-space field".into()));
    }
    let starts = centered_starts(field, hbar);
    fourier_transform(field, hbar, Direction::Forward, &starts)
}

/// Inverse of [`momentum_numeric`] onto a position grid starting at `starts`.
pub fn position_numeric(field: &SampledField, hbar: f64, starts: &[f64]) -> Result<SampledField> {
    if field.domain != Domain::Momentum {
        return Err(Error::InvalidArgument("expected a momentum-space field".into()));
    }
    fourier_transform(field, hbar, Direction::Inverse, starts)
}

/// Direct (matrix) transform of a position field onto arbitrary momentum
/// grids, one axis at a time. Costs `O(N_x N_p)` per line but decouples the
/// momentum resolution from the position spacing.
pub fn momentum_on_grid(field: &SampledField, hbar: f64, target: &[Grid1D]) -> Result<SampledField> {
    if field.domain != Domain::Position {
        return Err(Error::InvalidArgument("expected a position-space field".into()));
    }
    if target.len() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: target.len(),
        });
    }
    let mut values = field.values.clone();
    let mut shape = field.shape();
    for (axis, (src, dst)) in field.axes.iter().zip(target).enumerate() {
        let scale = src.step / (2.0 * PI * hbar).sqrt();
        let kernel: Vec<Complex64> = (0..dst.len)
            .flat_map(|k| {
                let p = dst.point(k);
                (0..src.len).map(move |j| Complex64::from_polar(scale, -p * src.point(j) / hbar))
            })
            .collect();
        let nx = src.len;
        values = map_lines(&values, &shape, axis, dst.len, |s, d| {
            for (k, out) in d.iter_mut().enumerate() {
                let row = &kernel[k * nx..(k + 1) * nx];
                *out = row.iter().zip(s).map(|(a, b)| a * b).sum();
            }
        });
        shape[axis] = dst.len;
    }
    debug_assert_eq!(values.len(), total_points(target));
    let mut out = SampledField::new(target.to_vec(), values, Domain::Momentum)?;
    let ratio = field.boundary_ratio();
    out.truncation = (ratio > DECAY_THRESHOLD).then_some(ratio);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_1d(center: f64, k0: f64, s: f64, grid: Grid1D) -> SampledField {
        // |ψ|² has standard deviation s.
        let norm = (2.0 * PI * s * s).powf(-0.25);
        let values = grid
            .points()
            .map(|x| {
                let u = x - center;
                Complex64::from_polar(norm * (-u * u / (4.0 * s * s)).exp(), k0 * x)
            })
            .collect();
        SampledField::new(vec![grid], values, Domain::Position).unwrap()
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let (c, p0, s, hbar) = (0.7, -0.4, 0.8, 1.0);
        let field = gaussian_1d(c, p0 / hbar, s, Grid1D::centered(0.0, 14.0 * s, 256).unwrap());
        let mom = momentum_numeric(&field, hbar).unwrap();
        assert!(mom.truncation.is_none());
        // (2s²/πħ²)^{1/4} exp(−i c (p−p₀)/ħ − s²(p−p₀)²/ħ²)
        let pref = (2.0 * s * s / (PI * hbar * hbar)).powf(0.25);
        let err = mom.axes[0]
            .points()
            .zip(&mom.values)
            .map(|(p, v)| {
                let d = p - p0;
                let exact = Complex64::from_polar(pref * (-s * s * d * d / (hbar * hbar)).exp(), -c * d / hbar);
                (v - exact).norm()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "err {err}");
    }

    #[test]
    fn direct_and_fft_agree() {
        let g = Grid1D::centered(0.1, 10.0, 128).unwrap();
        let field = gaussian_1d(0.3, 0.5, 0.9, g);
        let fft = momentum_numeric(&field, 1.0).unwrap();
        let direct = momentum_on_grid(&field, 1.0, &fft.axes).unwrap();
        for (a, b) in fft.values.iter().zip(&direct.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn truncated_field_is_flagged() {
        let field = gaussian_1d(0.0, 0.0, 1.0, Grid1D::centered(0.0, 3.0, 64).unwrap());
        let mom = momentum_numeric(&field, 1.0).unwrap();
        assert!(mom.truncation.unwrap() > 1e-3);
    }

    #[test]
    fn wrong_domain_is_rejected() {
        let field = gaussian_1d(0.0, 0.0, 1.0, Grid1D::centered(0.0, 3.0, 8).unwrap());
        assert!(position_numeric(&field, 1.0, &[0.0]).is_err());
        assert!(momentum_on_grid(&field, 1.0, &[]).is_err());
    }
}
