//! Quantum seeds, exact dilogarithm conjugation, canonical sign sequences,
//! ordered DT-series factorizations, and truncated-series identities.

mod a2;
mod ad;
mod dt_series;
mod seed;

pub use a2::{a2_canonical_basis_check, basic_polynomial, dt_permutes_basis, negate_support};
pub use ad::{ad_dilog, ad_dilog_rat, LinePoly, TorusRat};
pub use dt_series::{
    a2_sigma1, a2_sigma2, dt_series_factorization, dt_series_of_word, pentagon_check,
    DTSeriesFactorization,
};
pub use seed::QuantumSeed;
