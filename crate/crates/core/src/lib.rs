//! Band-width estimates for CMC initial data sets on warped-product bands.
//!
//! The core is generic over the scalar type ([`Real`], implemented for `f32`
//! and `f64`); the aliases at the crate root fix `f64`.

pub mod callias;
pub mod config;
pub mod error;
pub mod eta;
pub mod geometry;
pub mod grid;
pub mod harmonic;
pub mod profile;
pub mod scalar;
pub mod stability;
pub mod width;

pub use callias::{build_callias_input, evaluate_certificate, CalliasCertificate, CalliasInput, CalliasVerdict};
pub use error::{Error, Result};
pub use eta::{
    classify, domain_bounds, eta_closed, eta_closed_on, eta_solve_numeric, ode_residual, ode_residual_grid, Branch,
    DomainBounds, EtaCase, EtaParams, EtaSolution, NumericEta, ResidualReport,
};
pub use geometry::{
    constraint_sample, curvature_oracle, mean_curvature, mean_curvature_dt, null_expansion, null_expansion_dt,
    null_expansion_profile, scalar_curvature, transfer_to_mots, ConstraintSample, CustomWarp, ExtrinsicSpec, Side,
    Warp, WarpedBand,
};
pub use grid::GridField1D;
pub use harmonic::{
    hessian_tensor, perturbed_densities, reduce_ode, solve_reduced, verify_integral_inequality, HarmonicSolution,
    HessianSign, InequalityReport,
};
pub use profile::Profile;
pub use scalar::Real;
pub use stability::{level_set_data, principal_eigenvalue, stability_zeroth_coeff, EigenResult, LeafOperator, LevelSetData};
pub use width::{
    build_potential, check_theorem, check_theorem_with, consistency_sweep, margin_fields, Certificate, MarginFields,
    PotentialBuild, SweepReport, Variant, Verdict, WidthMode,
};

pub type WarpedBandSpec = WarpedBand<f64>;
pub type Extrinsic = ExtrinsicSpec<f64>;
pub type Field = GridField1D<f64>;
pub type Eta = EtaSolution<f64>;
pub type Params = EtaParams<f64>;
