//! Core library of the financial-market resilience toolkit.
//!
//! The pieces fit together as a pipeline:
//!
//! 1. [`panel`] loads and transforms monthly time-series panels
//!    (log-differences, monthly alignment of daily data, standardization),
//!    and [`describe`] / [`adf`] produce descriptive statistics and
//!    unit-root tests.
//! 2. [`stats`] builds principal-component composites and runs ordinary
//!    least squares, including the two-step mediation regressions.
//! 3. [`tvpvar`] estimates a time-varying-parameter VAR with stochastic
//!    volatility by Gibbs sampling and persists posteriors.
//! 4. [`irf`] turns posterior means into time-varying impulse responses;
//!    [`resilience`] compresses each response path into intensity and
//!    duration indices.
//! 5. [`connectedness`] computes generalized variance-decomposition
//!    spillover tables, static and dynamic.

pub mod adf;
pub mod connectedness;
pub mod dates;
pub mod describe;
pub mod error;
pub mod irf;
pub mod linalg;
pub mod panel;
pub mod resilience;
pub mod stats;
pub mod tvpvar;

pub use crate::error::{Error, Result};

pub use crate::adf::{adf_test, AdfConfig, AdfResult};
pub use crate::connectedness::{
    connectedness_table, constant_var_connectedness, dynamic_connectedness, gfevd,
    normalize_rows, static_connectedness, vma_coefficients, ConnectednessTable,
};
pub use crate::dates::{Month, ObsDate};
pub use crate::describe::{describe, describe_panel, AdfSummary, DescriptiveStats};
pub use crate::irf::{tv_irf, IrfSurface, ShockScale};
pub use crate::panel::{
    align_monthly, load_panel, log_diff, save_panel, standardize, TimeSeriesPanel,
};
pub use crate::resilience::{
    duration, intensity, resilience_series, shock_gap, ResilienceSeries,
};
pub use crate::stats::{
    mediation_two_step, ols, pca_composite, significance_stars, MediationReport, OlsFit,
    PcaComposite,
};
pub use crate::tvpvar::{
    estimate, geweke_cd, inefficiency_factor, load_posterior, posterior_summary,
    save_posterior, spectral_zero, DiagnosticsRow, McmcConfig, TvpVarPosterior, TvpVarPriors,
    TvpVarSpec,
};
