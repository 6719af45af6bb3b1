//! Independent numerical checks: a Numerov shooting solver, adaptive
//! quadrature and sign-change counting.

mod nodes;
mod numerov;
pub mod quadrature;

pub use nodes::{count_sign_changes, count_sign_changes_fn};
pub use numerov::{
    numerov_bound_states, numerov_eigenfunction, numerov_spectrum, numerov_spectrum_seeded,
    shoot_from_left, sturm_count, EigenEstimate, Grid1D,
};
pub use quadrature::adaptive_quadrature;
