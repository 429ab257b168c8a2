//! q-expansions of eta products and theta functions, and L-values of the
//! weight-4 level-8 and weight-3 level-16 eta-product newforms.

mod lvalue;
mod newform;
mod qseries;

pub use lvalue::{completed_lambda, fricke_asymmetry, fricke_check, l_prime_at_0, l_value, FRICKE_POINTS};
pub use newform::{newform_coefficient, EtaRecipe, NewformSpec, MAX_COEFFICIENT_INDEX};
pub use qseries::{eta_qexp, euler_product, theta_phi, theta_psi, QSeries};
