//! Radial eigenpairs in closed form, their discrete counterparts, the Fourier
//! modes of `ℍ¹`, and variational estimates.

pub mod discrete;
pub mod modes;
pub mod radial;
pub mod variational;

pub use discrete::{
    discrete_radial_spectrum, extrapolated_spectrum, richardson, subdomain_bound_check,
    BoundaryCondition, ExtrapolatedEigenvalue, SLDiscretization,
};
pub use modes::{
    mode_eigenpairs, mode_spectrum, mode_symbol, spherical_mean_project, Matching, ModeOperator,
};
pub use radial::{
    eigencondition_even_roots, eigencondition_odd_roots, even_condition, odd_condition,
    radial_eigenfunction, radial_eigenvalue, Parity, RadialEigenmode,
};
pub use variational::{
    full_mode_survey, gram_matrix, green_check_polar, green_check_radial, green_check_symmetric,
    poincare_constant_estimate, rayleigh_quotient, weighted_mean, FullModeSurvey, ModeMinimum,
    PoincareEstimate, PolarTrial, RadialTrial,
};
