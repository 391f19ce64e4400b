//! Uniform tensor grids and complex fields sampled on them.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Default cap on the total number of grid points of one field.
pub const DEFAULT_POINT_CAP: usize = 1 << 24;

/// Uniform 1-D grid `start + k·step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        ensure(step.is_finite() && step > 0.0, || {
            format!("grid spacing must be positive, got {step}")
        })?;
        ensure(len >= 2, || format!("a grid needs at least 2 points, got {len}"))?;
        ensure(start.is_finite(), || "grid start must be finite".into())?;
        Ok(Grid1D { start, step, len })
    }

    /// `len` points spanning `[center − half_extent, center + half_extent]`.
    pub fn centered(center: f64, half_extent: f64, len: usize) -> Result<Self> {
        ensure(half_extent.is_finite() && half_extent > 0.0, || {
            format!("extent must be positive, got {half_extent}")
        })?;
        ensure(len >= 2, || format!("a grid needs at least 2 points, got {len}"))?;
        Self::new(center - half_extent, 2.0 * half_extent / (len - 1) as f64, len)
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.point(k))
    }

    pub fn end(&self) -> f64 {
        self.point(self.len - 1)
    }

    /// Trapezoid weight of node `k`.
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.len {
            0.5 * self.step
        } else {
            self.step
        }
    }
}

/// Half extent in units of a Gaussian standard deviation, and point count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub sigmas: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            sigmas: 8.0,
            points: 512,
        }
    }
}

impl GridSpec {
    pub fn new(sigmas: f64, points: usize) -> Result<Self> {
        ensure(sigmas.is_finite() && sigmas > 0.0, || {
            format!("grid extent must be positive, got {sigmas}")
        })?;
        ensure(points >= 2, || format!("at least 2 points per axis, got {points}"))?;
        Ok(GridSpec { sigmas, points })
    }
}

/// Whether a field lives in position or momentum space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Position,
    Momentum,
}

impl Domain {
    fn code(self) -> u32 {
        match self {
            Domain::Position => 0,
            Domain::Momentum => 1,
        }
    }
}

/// Complex samples on a tensor grid, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub axes: Vec<Grid1D>,
    pub values: Vec<Complex64>,
    pub domain: Domain,
    /// Largest boundary amplitude relative to the peak, when it exceeds the
    /// decay threshold required by the Fourier transform.
    pub truncation: Option<f64>,
}

/// Row-major strides for a shape.
pub fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// Multi-index of a flat row-major position.
pub fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for i in (0..shape.len()).rev() {
        out[i] = flat % shape[i];
        flat /= shape[i];
    }
}

pub fn total_points(axes: &[Grid1D]) -> usize {
    axes.iter().map(|a| a.len).product()
}

pub fn check_budget(axes: &[Grid1D], cap: usize) -> Result<()> {
    let requested = axes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.len))
        .unwrap_or(usize::MAX);
    if requested > cap {
        return Err(Error::ResourceLimit { requested, cap });
    }
    Ok(())
}

const MAGIC: &[u8; 4] = b"NCSF";
const VERSION: u32 = 1;

impl SampledField {
    pub fn new(axes: Vec<Grid1D>, values: Vec<Complex64>, domain: Domain) -> Result<Self> {
        let n = total_points(&axes);
        if n != values.len() {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        Ok(SampledField {
            axes,
            values,
            domain,
            truncation: None,
        })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len).collect()
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Riemann sum `Σ|ψ|² ΔV`.
    pub fn norm_sq(&self) -> f64 {
        let dv: f64 = self.axes.iter().map(|a| a.step).product();
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dv
    }

    /// Largest modulus on the outer faces relative to the global peak.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let shape = self.shape();
        let mut idx = vec![0; shape.len()];
        let mut edge = 0.0f64;
        for (flat, v) in self.values.iter().enumerate() {
            unravel(flat, &shape, &mut idx);
            if idx.iter().zip(&shape).any(|(&i, &n)| i == 0 || i + 1 == n) {
                edge = edge.max(v.norm());
            }
        }
        edge / peak
    }

    /// Writes axis coordinates followed by `re,im` per line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let names: Vec<String> = match self.domain {
            Domain::Position => (1..=self.dim()).map(|i| format!("x{i}")).collect(),
            Domain::Momentum => (1..=self.dim()).map(|i| format!("p{i}")).collect(),
        };
        writeln!(w, "{},re,im", names.join(","))?;
        let shape = self.shape();
        let mut idx = vec![0; shape.len()];
        let mut line = String::new();
        for (flat, v) in self.values.iter().enumerate() {
            unravel(flat, &shape, &mut idx);
            line.clear();
            for (a, &i) in self.axes.iter().zip(&idx) {
                line.push_str(&format!("{},", a.point(i)));
            }
            line.push_str(&format!("{},{}", v.re, v.im));
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// Little-endian binary layout:
    ///
    /// ```text
    /// magic  "NCSF"            4 bytes
    /// version u32 = 1
    /// domain  u32 (0 position, 1 momentum)
    /// dim     u32
    /// per axis: len u64, start f64, step f64
    /// values: (re f64, im f64) × Π len, row-major
    /// ```
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&self.domain.code().to_le_bytes())?;
        w.write_all(&(self.dim() as u32).to_le_bytes())?;
        for a in &self.axes {
            w.write_all(&(a.len as u64).to_le_bytes())?;
            w.write_all(&a.start.to_le_bytes())?;
            w.write_all(&a.step.to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Validation("not a sampled-field file".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::Validation(format!("unsupported version {version}")));
        }
        let domain = match read_u32(&mut r)? {
            0 => Domain::Position,
            1 => Domain::Momentum,
            d => return Err(Error::Validation(format!("unknown domain code {d}"))),
        };
        let dim = read_u32(&mut r)? as usize;
        if !(1..=3).contains(&dim) {
            return Err(Error::Validation(format!("bad dimension {dim}")));
        }
        let mut axes = Vec::with_capacity(dim);
        for _ in 0..dim {
            let len = read_u64(&mut r)? as usize;
            let start = read_f64(&mut r)?;
            let step = read_f64(&mut r)?;
            axes.push(Grid1D::new(start, step, len)?);
        }
        check_budget(&axes, DEFAULT_POINT_CAP)?;
        let n = total_points(&axes);
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            values.push(Complex64::new(re, im));
        }
        SampledField::new(axes, values, domain)
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn centered_grid() {
        let g = Grid1D::centered(1.0, 2.0, 5).unwrap();
        assert_eq!(g.points().collect::<Vec<_>>(), vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(Grid1D::centered(0.0, 1.0, 1).is_err());
        assert!(Grid1D::centered(0.0, 0.0, 4).is_err());
    }

    #[test]
    fn strides_and_unravel() {
        let shape = [3, 4, 5];
        assert_eq!(strides(&shape), vec![20, 5, 1]);
        let mut idx = [0; 3];
        unravel(2 * 20 + 3 * 5 + 4, &shape, &mut idx);
        assert_eq!(idx, [2, 3, 4]);
    }

    #[test]
    fn budget() {
        let g = Grid1D::centered(0.0, 1.0, 512).unwrap();
        assert!(check_budget(&[g, g], DEFAULT_POINT_CAP).is_ok());
        assert!(matches!(
            check_budget(&[g, g, g], DEFAULT_POINT_CAP),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let g = Grid1D::centered(0.0, 1.0, 2).unwrap();
        let f = SampledField::new(vec![g, g], vec![Complex64::new(1.0, -0.5); 4], Domain::Position).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x1,x2,re,im");
        assert_eq!(lines[2], "-1,1,1,-0.5");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn binary_rejects_garbage() {
        assert!(SampledField::read_binary(&b"XXXX0000"[..]).is_err());
    }

    proptest! {
        #[test]
        fn binary_round_trip(
            start in -10.0..10.0f64, step in 0.01..2.0f64,
            n1 in 2usize..6, n2 in 2usize..6,
            seed in proptest::collection::vec(-1e3..1e3f64, 72),
        ) {
            let axes = vec![Grid1D::new(start, step, n1).unwrap(), Grid1D::new(-start, step * 2.0, n2).unwrap()];
            let values: Vec<Complex64> = (0..n1 * n2).map(|i| Complex64::new(seed[2 * i], seed[2 * i + 1])).collect();
            let f = SampledField::new(axes, values, Domain::Momentum).unwrap();
            let mut buf = Vec::new();
            f.write_binary(&mut buf).unwrap();
            prop_assert_eq!(buf.len(), 16 + 2 * 24 + 16 * n1 * n2);
            let g = SampledField::read_binary(&buf[..]).unwrap();
            prop_assert_eq!(f, g);
        }
    }
}
