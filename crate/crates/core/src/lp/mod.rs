//! Fourier-analytic upper bounds on code size: Lovász's assignment, the
//! Krawtchouk linear program and its certificates.

pub mod certificate;
pub mod clique;
pub mod fourier;
pub mod lovasz;
pub mod mrrw;
pub mod simplex;

pub use certificate::{
    certificate_function, composite_bound, lp_solve_lambda, verify_certificate, CertificateReport,
    LPSolution, SolutionStatus,
};
pub use clique::{brute_force_max_code, MaxCode};
pub use fourier::{group_weight, GroupFunction};
pub use lovasz::{lovasz_assignment, lovasz_bound, sphere_transform, SphereKind, SphereSpec};
pub use mrrw::{first_root, mrrw_certificate, mrrw_search, MrrwFailure, MrrwOutcome};
