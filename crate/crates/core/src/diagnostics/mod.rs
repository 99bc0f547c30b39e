//! Resolvent fields, the Balakrishnan identity, localized virial pieces,
//! the weighted blow-up functional and decay proxies.

mod balakrishnan;
mod cutoff;
mod proxies;
mod quadrature;
mod virial;

pub use balakrishnan::{auxiliary_field, balakrishnan_check, resolvent_constant_sq, BalakrishnanCheck};
pub use cutoff::{psi_derivatives, CutoffPhi};
pub use proxies::{scattering_proxies, ScatteringProxies};
pub use quadrature::QuadratureRule;
pub use virial::{
    localized_virial, quadratic_fit, virial_lower_bound_audit, virial_observer, virial_rate_fd, virial_rhs,
    virial_series, weighted_virial, VirialAudit, VirialRhs, VIRIAL_COLUMNS,
};
