//! Modular algorithms over the rationals.
//!
//! Every operation follows one loop: choose random primes, compute the
//! operation over F_p, keep the primes whose results share the majority
//! leading-monomial signature, lift by CRT and rational reconstruction,
//! screen the lift against a fresh prime, and finally verify it exactly over
//! the rationals. Results that pass the last step are certified.

mod engine;
mod lift;
mod ops;
mod primes;
mod runlog;

pub use engine::{delete_unlucky, ModularOutcome};
pub use lift::{crt_lift, image_matches, rational_reconstruct, LiftCandidate, LiftStatus};
pub use ops::{mod_groebner, mod_quotient, mod_saturate, rational_basis};
pub use primes::{choose_primes, classify_prime, PrimeClass, PrimeRecord, PrimeSource};
pub use runlog::{signature_hash, stable_hash, RunLog, RunRecord};

pub(crate) use engine::{run, ModularTask, PrimeOutcome};
pub(crate) use ops::{mod_quotient_staged, products_in};

use crate::par::ExecMode;

/// How far a lift is verified before it is returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyLevel {
    /// Stop after the fresh-prime screen; results are not certified.
    PTestOnly,
    #[default]
    Full,
}

/// Knobs for a modular run.
#[derive(Debug, Clone)]
pub struct ModularRunConfig {
    /// Primes in the first round; each later round adds as many as used so far.
    pub initial_primes: usize,
    pub prime_bits: u32,
    pub seed: u64,
    pub max_rounds: u32,
    pub verify: VerifyLevel,
    /// Use these primes, in order, instead of random ones.
    pub explicit_primes: Option<Vec<u64>>,
    /// Primes below this bound are skipped.
    pub min_prime: u64,
    pub exec: ExecMode,
    pub log: Option<RunLog>,
}

impl Default for ModularRunConfig {
    fn default() -> Self {
        ModularRunConfig {
            initial_primes: 4,
            prime_bits: 31,
            seed: 0,
            max_rounds: 6,
            verify: VerifyLevel::Full,
            explicit_primes: None,
            min_prime: 0,
            exec: ExecMode::default(),
            log: None,
        }
    }
}
