//! The cascade operator on dyadic grids, coefficient sequences and band-limited
//! Fourier grids, plus correlation forms and convergence diagnostics.

pub mod coef;
pub mod diagnose;
pub mod fourier;
pub mod grid;
pub mod intertwine;

pub use grid::{cascade_step, cascade_adjoint_generic, cascade_step_float, cascade_step_generic, correlation, dyadic_level, random_grid_fn, ExactGridFn, GridFn};
pub use coef::{cuntz_pair, dyadic_approximant, subdivision_adjoint, subdivision_step, CoefSeq, CuntzReport};
pub use intertwine::{intertwiner_check, mstar_m_defects, IntertwinerReport};
pub use diagnose::{cascade_trace, convergence_diagnose, convergence_diagnose_band, DiagnoseReport, TraceRow, Verdict};
pub use fourier::{
    fourier_cascade_step, obstruction_box, obstruction_gaussian, obstruction_grid, p1_band_check, p1_fourier_check,
    periodization_tail, BandIndicator, BoxSpectrum, FourierGridFn, Gaussian, ObstructionReport, ObstructionVerdict,
    PatchGrid, Spectrum,
};
