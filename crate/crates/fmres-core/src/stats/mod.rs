//! Cross-sectional statistics: principal-component composites, ordinary
//! least squares, and the two-step mediation regressions.

mod mediation;
mod ols;
mod pca;

pub use self::mediation::{mediation_two_step, significance_stars, MediationReport};
pub use self::ols::{ols, OlsFit};
pub use self::pca::{pca_composite, PcaComposite};
