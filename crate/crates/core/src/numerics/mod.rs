//! Quadrature, eigensolvers and root refinement used by the spectral code.

pub mod dense;
pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use dense::{hessenberg_qr_eigenvalues, inverse_iteration, CMatrix};
pub use quadrature::{gauss_jacobi_rule, integrate_profile_radial, profile_rule, QuadratureRule};
pub use roots::{bisect_root, scan_roots};
pub use tridiag::{sym_tridiag_eigen, sym_tridiag_eigenvalues, EigenPair};
