//! Mahler measures: torus integration, the hypergeometric formula for the
//! four-variable product family, and the one-parameter measures `m(4α)` and
//! `R(α)` with their integral and Fourier representations.

mod descriptor;
mod lemmas;
mod measures;

pub use descriptor::{Family, LaurentDescriptor, MAX_DIMENSION, MAX_EXPONENT};
pub use lemmas::{density_integral_check, fourier_check, fourier_decay_order, DECAY_WINDOW, wan_moment_check, wan_moment_formula, FourierCheck, FourierSeries};
pub use measures::{m_alpha, m_rk_hypergeometric, mahler_numeric, r_alpha, r_alpha_torus, MRoute, QmcSettings, RRoute};
