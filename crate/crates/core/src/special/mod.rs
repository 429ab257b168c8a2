//! Special functions at arbitrary precision.

mod chi;
mod elliptic;
mod gamma;
mod hypergeometric;
mod zeta;

pub use chi::{legendre_chi3, li3_exp};
pub use elliptic::{agm, ell_k, ell_kprime, elliptic_pair};
pub use gamma::{exp_integral_e1, gamma_half_int, upper_incomplete_gamma};
pub use hypergeometric::{pfq, PFQSpec, MAX_DIRECT_TERMS};
pub use zeta::{bernoulli, catalan, zeta_int, zeta_prime_minus2};
