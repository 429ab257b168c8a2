//! Numerical integration: tanh-sinh on `(0, 1)` and lattice rules on tori.

mod qmc;
mod tanh_sinh;

pub use qmc::{torus_qmc, TorusIntegrand, DEFAULT_SEED, GENERATING_VECTOR, MAX_DIMENSION, MIN_SAMPLES, MIN_SHIFTS};
pub use tanh_sinh::{tanh_sinh, tanh_sinh_with_level, DEFAULT_MAX_LEVEL};

use crate::precision::Real;

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: Real,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
    /// Sample points dropped because the integrand was `−∞` there.
    pub discarded: u64,
}

impl QuadratureResult {
    pub fn discard_fraction(&self) -> f64 {
        if self.evaluations == 0 {
            0.0
        } else {
            self.discarded as f64 / self.evaluations as f64
        }
    }
}
