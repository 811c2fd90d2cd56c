//! Exact arithmetic substrate.
//!
//! Coefficients are arbitrary-precision rationals ([`Rat`]). On top of them:
//! sparse multivariate Laurent polynomials ([`MultiLaurent`]), univariate
//! Laurent polynomials in the quantum parameter ([`QLaurent`]) with their
//! fraction field ([`QFrac`]), quantum torus elements ([`QTorusElt`]) and
//! graded-truncated formal series ([`TruncatedSeries`]).

mod laurent;
mod qlaurent;
mod series;
mod torus;

pub use laurent::{rat, rat_pow, varset, MultiLaurent, VarSet};
pub use qlaurent::{QFrac, QLaurent};
pub use series::{dilog_coeff, quantum_dilog, quantum_dilog_signed, truncated_mul, TruncatedSeries};
pub use torus::{pairing, qtorus_mul, QTorusElt, SkewForm};

use num::BigRational;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator by the `num` crate.
pub type Rat = BigRational;

/// Integer type for epsilon-matrices, C-matrices, lattice vectors and
/// tropical coordinates. Wide enough for the entry growth of long random
/// mutation words; overflow beyond it is reported, never wrapped.
pub type Int = i128;

/// Parse a coefficient of the form `"num"` or `"num/den"`.
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    use num::BigInt;
    use std::str::FromStr;
    let mk = |n: &str, d: &str| -> Option<Rat> {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        Some(Rat::new(n, d))
    };
    let r = match s.split_once('/') {
        Some((n, d)) => mk(n, d),
        None => mk(s, "1"),
    };
    r.ok_or_else(|| crate::Error::Config(format!("malformed rational {s:?}")))
}

/// Canonical decimal-string form `"num/den"` (`"num"` when the denominator is 1).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &num::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
