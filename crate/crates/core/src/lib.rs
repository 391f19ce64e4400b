//! Exact wavefunctions and information measures of a charged oscillator driven
//! by a time-dependent electric field on two- and three-dimensional
//! noncommutative phase spaces.

pub mod dynamics;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod infotheory;
pub mod nc_model;
pub mod signal;
pub mod validation;
pub mod wavefunctions;

pub use dynamics::{
    phase_y, rho_constant, solve_particular, ClassicalTrajectory, InitialConditions, PhaseValue,
    QuadraticHamiltonianCoeffs,
};
pub use error::{Error, Result};
pub use fourier::{momentum_numeric, momentum_on_grid, position_numeric};
pub use grid::{Domain, Grid1D, GridSpec, SampledField};
pub use nc_model::{
    drive_coefficients, effective_params, nc_variances, rotating_frame_coeffs, Dim, DriveCoefficients,
    DriveField, EffectiveParams, NcSpace, OscillatorConfig, RotatingFrameCoefficients,
};
pub use signal::{SampledTable, Signal, TimeSignal};
pub use wavefunctions::{
    evaluate_on_grid, hermite, mode_eigenfunction, momentum_ground, psi_lab, DynamicsSettings, Evolution,
    LabFrameShifts, QuantumState, Snapshot,
};
pub use infotheory::{
    closed_forms, fisher_commutative, fisher_nc, info_from_state, nc_uncertainty_bounds, shannon, FisherComponents,
    InfoReport, Provenance, SampledDensity,
};
pub use validation::{
    invariant_expectation, oracle_report, schrodinger_residual, verify_suite, EffectiveHamiltonianSpec, OracleTable,
    ResidualReport,
};
