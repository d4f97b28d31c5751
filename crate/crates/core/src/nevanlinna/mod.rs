//! Nevanlinna functionals on circles: proximity, counting and
//! characteristic functions, Jackson truncated counting, logarithmic-order
//! estimators, central-index quantities and finite-radius theorem checks.
//!
//! All limsup and liminf quantities are finite-radius regression proxies.

mod checks;
mod functionals;
mod grid;
mod model;
mod model_file;
mod order;
mod truncated;

pub use checks::{
    defect_estimates, growth_lower_bound_check, log_derivative, logderiv_lemma_check, sft_check, wiman_valiron_check,
    DefectReport, GrowthReport, LogDerivReport, LogDerivRow, SftRow, WimanValironReport, WimanValironRow,
};
pub use functionals::{
    characteristic, circle_mean, count_within, counting_from_points, counting_n, jensen_residual, positive_part_mean,
    proximity, proximity_with, samples_to_csv, series_winding, series_zeros, sweep, target_points, NevanlinnaSample,
    Quadrature, CSV_HEADER,
};
pub use grid::{nudge, RadialGrid, MIN_NODES, NUDGE_STEP, NUDGE_TRIGGER};
pub use model::{MeroModel, ModelKind, ProductModel, Target};
pub use model_file::ModelSpec;
pub use order::{
    central_index, log_order_from_counting, log_order_from_nu, log_order_from_t, log_order_of_model, max_modulus_point,
    max_term_central_index, OrderEstimate, WimanValironSample,
};
pub use truncated::{jackson_truncated_counting, JacksonCounter};
