//! Simulation of type-I spontaneous parametric down-conversion pumped by a
//! finite-energy Airy beam.
//!
//! All transverse quantities are dimensionless: positions `xi = x / l`,
//! momenta `q = kappa l`, where `l` is the Airy transverse scale. Physical
//! units only appear in [`PumpParams`], [`CrystalParams`] and the detector
//! coordinates of [`OpticalSetup`].
//!
//! ```
//! use airyspdc::{propagate_truncated_airy, truncated_airy};
//!
//! let at_origin = propagate_truncated_airy(-1.0, 0.0, 0.1).unwrap();
//! assert_eq!(at_origin.re, truncated_airy(-1.0, 0.1));
//! ```

pub mod biphoton;
pub mod detection;
pub mod error;
pub mod grid;
pub mod phasematch;
pub mod pump;
pub mod quadrature;
pub mod schmidt;
pub mod specfun;

pub use biphoton::{biphoton_amplitude, biphoton_map, BiphotonPoint, BiphotonSolver};
pub use detection::{
    conditional_coincidence, far_g11, far_g11_map, far_g12_map, near_g11, near_g11_map,
    near_g12_map, singles_probability, thin_crystal, CorrelationMap, DetectionMode,
    OpticalSetup,
};
pub use error::{Error, Result};
pub use grid::{
    AxisKind, ComplexField1D, ComplexMap2D, Grid1D, Normalization, Profile1D, RealMap2D,
};
pub use phasematch::{
    half_mismatch, momentum_probability_map, spectral_function, spectral_matrix, Axis,
    CrystalParams,
};
pub use pump::{
    propagate_truncated_airy, pump_intensity_1d, pump_intensity_2d, pump_propagation_map,
    truncated_airy, truncated_airy_spectrum, PumpParams,
};
pub use schmidt::{
    modes_for_fraction, schmidt_decompose, schmidt_decompose_amplitude, schmidt_scenario,
    SchmidtReport, SchmidtResult,
};
pub use specfun::{airy_ai, grid_fourier, grid_fourier_inverse, sinc, FourierPlan};
