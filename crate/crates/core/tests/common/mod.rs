#![allow(dead_code)]

use ncosc_core::{Dim, DriveField, NcSpace, OscillatorConfig, Signal};

/// Sinusoidal drive on every axis of `dim`.
pub fn sinusoid(dim: Dim) -> DriveField {
    let mut c = vec![Signal::sin(0.3, 1.3), Signal::cos(0.2, 0.7)];
    if dim == Dim::Three {
        c.push(Signal::sin(0.1, 2.1));
    }
    DriveField::new(c).unwrap()
}

pub fn driven(theta: f64, eta: f64, dim: Dim) -> (OscillatorConfig, NcSpace) {
    (
        OscillatorConfig::natural().with_drive(sinusoid(dim)),
        NcSpace::natural(theta, eta, dim).unwrap(),
    )
}

pub fn undriven(theta: f64, eta: f64, dim: Dim) -> (OscillatorConfig, NcSpace) {
    (OscillatorConfig::natural(), NcSpace::natural(theta, eta, dim).unwrap())
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a / b - 1.0).abs()
    }
}
