//! Deterministic random variates and the special functions behind the
//! closed-form chi moments.

mod rng;
mod sampling;
mod special;

pub use rng::RngStream;
pub(crate) use sampling::chi_unchecked;
pub use sampling::{sample_chi, sample_gamma, sample_gaussian};
pub(crate) use special::mean_chi_pos;
pub use special::{chi_mean_deficit, chi_moment, log_gamma, mean_chi};
