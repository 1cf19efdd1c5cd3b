//! Certified Taylor parametrisations of the local stable and unstable
//! manifolds of an analytic saddle.
//!
//! Given a vector field `dz = Lambda z + F(z)` with a diagonal hyperbolic
//! linear part and `F = O(z^2)`, the library computes the truncated
//! parametrisations of both local invariant manifolds by small-divisor
//! recursions, and then produces an a-posteriori certificate: a verified
//! convergence radius together with an explicit geometric remainder bound.
//! Every series operation runs either in plain `f64` or in outward-rounded
//! interval arithmetic through the same generic code, so interval-mode
//! results enclose their float-mode counterparts.

pub mod certificate;
pub mod index;
pub mod interval;
pub mod io;
pub mod scalar;
pub mod series;
pub mod solver;
pub mod spectrum;

pub use certificate::{
    build_certificate, fhat_coeffs, fit_geometric_bound, joint_majorant, quadratic_bound,
    sigma_coeffs, verify_radius, CertError, Certificate, Certification, MajorantData,
};
pub use index::{mindex_count, multi_indices, IndexClass, MultiIndex};
pub use interval::Interval;
pub use scalar::Scalar;
pub use series::{compose_truncated, eval_enclosure, filter, series_multiply, PolySeries};
pub use solver::{
    invariance_residual, normal_form_tail, solve_stable, solve_unstable, AnalyticBound,
    ManifoldParam, NormalFormTail, Side, SolveError, VectorField,
};
pub use spectrum::{omega_global, omega_of, small_divisor, verify_spectrum, Spectrum, SpectrumError};
