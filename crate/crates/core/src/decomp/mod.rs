//! Associated primes over F_p and the intermediate decomposition over Q.
//!
//! Primes are found mod p, grouped by maximal independent set, and each
//! group's radical intersection is lifted to Q through the modular engine.

mod intermediate;
mod multivariate;
mod primes_fp;
mod univariate;

pub use intermediate::{
    intermediate_decomposition, lift_radical_group, GroupLift, GroupResult, IntermediateDecomposition,
};
pub use multivariate::{factor_fp, MAX_IMAGE_DEGREE, MAX_RECOMBINATION_FACTORS};
pub use primes_fp::{associated_primes_fp, group_by_mis, minimal_primes, radical_fp, FpAssResult, DEPTH_CAP};
pub use univariate::factor_univariate_fp;
