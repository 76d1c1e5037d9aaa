//! Independent numeric evaluations of the potential and small validators for
//! the lemmas behind the direct approach.

mod clt;
mod conv;
mod direct;
mod fourier;
mod lemmas;
mod step;

use thiserror::Error;

pub use clt::{local_clt, LatticeGaussian};
pub use conv::{potential_convolution, potential_convolution_iterate, GridFunction, MIN_RADIUS};
pub use direct::{potential_direct_sum, DirectSumOptions};
pub use lemmas::{f_sum, multinomial_clt_check, theta_sum_check, Comparison};
pub use fourier::{potential_fourier, potential_fourier_many};
pub use step::{step_distribution, StepDistribution, SUPPORT_BUDGET};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("unsupported walk: {0}")]
    Unsupported(String),
    #[error("quadrature did not converge, achieved error {0:e}")]
    NoConvergence(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("iteration diverged: residual norm {0}")]
    Diverged(f64),
}
