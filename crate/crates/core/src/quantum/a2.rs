//! The canonical basis of the rank-2 quantum cluster variety and its
//! behavior under the DT-transformation.

use crate::algebra::{
    qtorus_mul, quantum_dilog, truncated_mul, QFrac, QLaurent, QTorusElt, SkewForm,
};
use crate::Result;

fn a2_form() -> SkewForm {
    vec![vec![0, 1], vec![-1, 0]]
}

/// The five basic polynomials `P_1..P_5`, cyclically indexed from 1.
pub fn basic_polynomial(i: usize) -> QTorusElt {
    let one = QFrac::one;
    match ((i - 1) % 5) + 1 {
        1 => QTorusElt::basis(vec![1, 0]),
        2 => QTorusElt::basis(vec![0, -1]),
        3 => {
            let mut e = QTorusElt::monomial(vec![-1, -1], one());
            e.add_term(vec![-1, 0], one());
            e
        }
        4 => {
            let mut e = QTorusElt::monomial(vec![-1, 0], one());
            e.add_term(vec![-1, 1], one());
            e.add_term(vec![0, 1], one());
            e
        }
        5 => {
            let mut e = QTorusElt::monomial(vec![0, 1], one());
            e.add_term(vec![1, 1], one());
            e
        }
        _ => unreachable!(),
    }
}

/// One exchange identity: `P_{i+2} P_i = 1 + q P_{i+1}`.
pub fn exchange_identity_holds(i: usize) -> Result<bool> {
    let form = a2_form();
    let lhs = qtorus_mul(&basic_polynomial(i + 2), &basic_polynomial(i), &form)?;
    let rhs = QTorusElt::one(2).add(
        &basic_polynomial(i + 1)
            .scale(&QFrac::from_laurent(QLaurent::q_pow(1))),
    );
    Ok(lhs == rhs)
}

/// The monomial algebra map `X_v -> X_{-v}` (the monomial part of the A2
/// DT-transformation, whose C-matrix is minus the identity).
pub fn negate_support(e: &QTorusElt) -> QTorusElt {
    let mut out = QTorusElt::zero(e.rank());
    for (v, c) in e.terms() {
        out.add_term(v.iter().map(|x| -x).collect(), c.clone());
    }
    out
}

/// Verifies the DT action on the canonical basis, `P_i -> P_{i+3}`, through
/// the series identity `Psi * Sigma(P_i) = P_{i+3} * Psi` checked on all
/// monomials of total degree at most `order - margin`, where
/// `Psi = Psi(X_{e1}) Psi(X_{e2})` is the DT-series truncated at `order`.
pub fn dt_permutes_basis(i: usize, order: i64) -> Result<bool> {
    let form = a2_form();
    let psi = {
        let a = quantum_dilog(&[1, 0], 2, order)?;
        let b = quantum_dilog(&[0, 1], 2, order)?;
        truncated_mul(&a, &b, &form)?.base().clone()
    };
    let lhs = qtorus_mul(&psi, &negate_support(&basic_polynomial(i)), &form)?;
    let rhs = qtorus_mul(&basic_polynomial(i + 3), &psi, &form)?;
    // Both sides are exact except for the dropped Psi tail of cone-degree
    // > order; multiplying by supports bounded by 2 smears the boundary by
    // at most 2, so compare only up to total degree order - 2.
    let cutoff = order - 2;
    let diff = lhs.sub(&rhs);
    for (v, c) in diff.terms() {
        let deg: i64 = v.iter().sum();
        if deg <= cutoff && !c.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the full canonical-basis suite: the five exchange identities, the
/// bar-invariance of each basis element, and the DT index shift.
pub fn a2_canonical_basis_check() -> Result<bool> {
    for i in 1..=5 {
        if !exchange_identity_holds(i)? {
            return Ok(false);
        }
        let p = basic_polynomial(i);
        if p.star() != p {
            return Ok(false);
        }
    }
    for i in 1..=5 {
        if !dt_permutes_basis(i, 12)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_identities_all_i() {
        for i in 1..=5 {
            assert!(exchange_identity_holds(i).unwrap(), "P_{{i+2}}P_i at i={i}");
        }
    }

    #[test]
    fn basis_elements_bar_invariant() {
        for i in 1..=5 {
            let p = basic_polynomial(i);
            assert_eq!(p.star(), p, "P_{i} selfdual");
        }
    }

    #[test]
    fn dt_shifts_indices_by_three() {
        for i in 1..=5 {
            assert!(dt_permutes_basis(i, 10).unwrap(), "P_{i} -> P_{i}+3");
        }
    }

    #[test]
    fn full_suite() {
        assert!(a2_canonical_basis_check().unwrap());
    }

    #[test]
    fn negative_control_wrong_shift() {
        // P_i -> P_{i+1} is not the DT action
        let form = a2_form();
        let order = 10;
        let psi = {
            let a = quantum_dilog(&[1, 0], 2, order).unwrap();
            let b = quantum_dilog(&[0, 1], 2, order).unwrap();
            truncated_mul(&a, &b, &form).unwrap().base().clone()
        };
        let lhs = qtorus_mul(&psi, &negate_support(&basic_polynomial(1)), &form).unwrap();
        let rhs = qtorus_mul(&basic_polynomial(2), &psi, &form).unwrap();
        let diff = lhs.sub(&rhs);
        let bad = diff.terms().any(|(v, c)| {
            let deg: i64 = v.iter().sum();
            deg <= order - 2 && !c.is_zero()
        });
        assert!(bad, "wrong shift must fail");
    }
}
