//! Ring operations on moduli-stable classes and exact integration.

pub mod intersect;
mod forget;
mod integrate;
mod product;
mod spanning;
mod structures;

pub use forget::{pullback_forgetful, pushforward_forgetful};
pub use integrate::{integrate, integrate_stratum};
pub use intersect::{psi_integral, psi_kappa_integral};
pub use product::{multiply, pair, power, pullback_gluing, pushforward_gluing, ProductClass};
pub use spanning::{boundary_strata, decorated_strata, spanning_set};
