//! The Lagrangian operator M_L, the governing chain M, the Poonen–Rains law and
//! diagnostics around them.

mod chain;
mod dist;

pub use chain::{
    convergence_rate, default_jmax, drift_residual, drift_sweep, eplus_eminus, gamma_beta, iterate,
    local_transition_table, m_step, m_weights, ml_power_row, ml_row, ml_step, poonen_rains, pr_constant, pr_tail,
    table_row_f64, DriftReport, RateFit,
};
pub use dist::{tv_distance, ExactDist, RankDist, Scalar};
