use num::One;
use serde::Serialize;

use super::torus::SkewForm;
use super::{QFrac, QLaurent, QTorusElt, Rat};
use crate::{Error, Result};

/// Formal power series in the completed quantum torus algebra, truncated at a
/// total cone-degree cutoff.
///
/// The grading is the coefficient sum in the positive-cone basis: every
/// stored monomial `X_v` must have `v` with non-negative entries, and
/// `deg(X_v) = sum(v) <= order`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TruncatedSeries {
    base: QTorusElt,
    order: i64,
}

fn cone_degree(v: &[i64]) -> Result<i64> {
    if v.iter().any(|&x| x < 0) {
        return Err(Error::Cone(format!("{v:?} has a negative entry")));
    }
    Ok(v.iter().sum())
}

impl TruncatedSeries {
    /// Wraps a torus element, discarding terms beyond the cutoff. Errors if a
    /// term lies outside the positive cone.
    pub fn new(base: QTorusElt, order: i64) -> Result<Self> {
        let rank = base.rank();
        let mut kept = QTorusElt::zero(rank);
        for (v, c) in base.terms() {
            if cone_degree(v)? <= order {
                kept.add_term(v.clone(), c.clone());
            }
        }
        Ok(TruncatedSeries { base: kept, order })
    }

    pub fn one(rank: usize, order: i64) -> Self {
        TruncatedSeries { base: QTorusElt::one(rank), order }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn base(&self) -> &QTorusElt {
        &self.base
    }

    pub fn is_one(&self) -> bool {
        self.base.is_one()
    }

    /// Constant term of the series.
    pub fn constant_coeff(&self) -> QFrac {
        self.base.coeff(&vec![0; self.rank()])
    }

    pub fn mul(&self, other: &Self, form: &SkewForm) -> Result<Self> {
        truncated_mul(self, other, form)
    }

    /// Series logarithm via `log(1+u) = sum (-1)^{k+1} u^k / k`; requires
    /// constant term 1. Exact at the stored truncation order.
    pub fn log(&self, form: &SkewForm) -> Result<QTorusElt> {
        if !self.constant_coeff().is_one() {
            return Err(Error::Config("series logarithm needs constant term 1".into()));
        }
        let rank = self.rank();
        let mut u = self.base.clone();
        u.add_term(vec![0; rank], QFrac::one().neg());
        let mut acc = QTorusElt::zero(rank);
        let mut power = TruncatedSeries::new(QTorusElt::one(rank), self.order)?;
        let u_trunc = TruncatedSeries::new(u, self.order)?;
        let mut k: i64 = 0;
        loop {
            k += 1;
            if k > self.order {
                break;
            }
            power = power.mul(&u_trunc, form)?;
            if power.base.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
            let c = QFrac::from_laurent(QLaurent::constant(sign / Rat::from_integer(k.into())));
            acc = acc.add(&power.base.scale(&c));
        }
        Ok(acc)
    }
}

/// Product of truncated series over the same cone and order; terms of
/// cone-degree above the cutoff are discarded.
pub fn truncated_mul(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    form: &SkewForm,
) -> Result<TruncatedSeries> {
    if a.order != b.order {
        return Err(Error::Config(format!(
            "truncation orders differ: {} vs {}",
            a.order, b.order
        )));
    }
    let prod = super::torus::qtorus_mul(&a.base, &b.base, form)?;
    TruncatedSeries::new(prod, a.order)
}

/// Coefficient of `x^n` in the quantum dilogarithm power series:
/// `q^n / ((q^2-1)(q^4-1)...(q^{2n}-1))`, kept with the factored denominator.
pub fn dilog_coeff(n: u32) -> QFrac {
    QFrac::with_factored_den(
        QLaurent::q_pow(i64::from(n)),
        (1..=i64::from(n)).map(|a| (a, 1)),
    )
}

/// The quantum dilogarithm `Psi_q(X_v)` truncated at the given cone-degree
/// order. `v` must lie in the positive cone. With `positive_q = false` the
/// series for `Psi_{q^{-1}}` (the inverse series) is produced instead.
pub fn quantum_dilog_signed(
    v: &[i64],
    rank: usize,
    order: i64,
    positive_q: bool,
) -> Result<TruncatedSeries> {
    if v.len() != rank {
        return Err(Error::Dimension(format!(
            "vector length {} vs rank {rank}",
            v.len()
        )));
    }
    let d = cone_degree(v)?;
    let mut base = QTorusElt::one(rank);
    if d > 0 {
        let mut n = 1u32;
        while i64::from(n) * d <= order {
            let c = dilog_coeff(n);
            let c = if positive_q { c } else { c.bar() };
            let nv: Vec<i64> = v.iter().map(|x| x * i64::from(n)).collect();
            base.add_term(nv, c);
            n += 1;
        }
    } else if order >= 0 && v.iter().all(|&x| x == 0) && !v.is_empty() {
        // Psi of X_0 would be an honest power series in a single commuting
        // variable; the callers never need it, and truncation at any order
        // keeps only finitely many constants. Reject to avoid silent misuse.
        return Err(Error::Cone("dilogarithm argument must be nonzero".into()));
    }
    TruncatedSeries::new(base, order)
}

/// `Psi_q(X_v)` truncated at cone-degree `order`.
pub fn quantum_dilog(v: &[i64], rank: usize, order: i64) -> Result<TruncatedSeries> {
    quantum_dilog_signed(v, rank, order, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1_form() -> SkewForm {
        vec![vec![0]]
    }

    #[test]
    fn dilog_order_zero_and_one() {
        let s0 = quantum_dilog(&[1], 1, 0).unwrap();
        assert!(s0.is_one());

        // order 1: 1 + q/(q^2-1) X_v
        let s1 = quantum_dilog(&[1], 1, 1).unwrap();
        let expected = QFrac::new(
            QLaurent::q_pow(1),
            QLaurent::q_pow(2).sub(&QLaurent::one()),
        )
        .unwrap();
        assert_eq!(s1.base().coeff(&[1]), expected);
        assert!(s1.base().coeff(&[0]).is_one());
        assert_eq!(s1.base().num_terms(), 2);
    }

    #[test]
    fn difference_relation_to_order_12() {
        // Psi_q(q^2 x) = (1 + q x) Psi_q(x)
        let order = 12;
        let form = rank1_form();
        let psi = quantum_dilog(&[1], 1, order).unwrap();
        // lhs: substitute x -> q^2 x, i.e. scale the coefficient of x^n by q^{2n}
        let mut lhs = QTorusElt::zero(1);
        for (v, c) in psi.base().terms() {
            let n = v[0];
            lhs.add_term(v.clone(), c.mul(&QFrac::from_laurent(QLaurent::q_pow(2 * n))));
        }
        let lhs = TruncatedSeries::new(lhs, order).unwrap();
        let one_plus_qx = TruncatedSeries::new(
            QTorusElt::one(1).add(&QTorusElt::monomial(
                vec![1],
                QFrac::from_laurent(QLaurent::q_pow(1)),
            )),
            order,
        )
        .unwrap();
        let rhs = one_plus_qx.mul(&psi, &form).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_series_is_bar_dilog() {
        // Psi_q(x) * Psi_{q^{-1}}(x) = 1, to order 10
        let order = 10;
        let form = rank1_form();
        let a = quantum_dilog_signed(&[1], 1, order, true).unwrap();
        let b = quantum_dilog_signed(&[1], 1, order, false).unwrap();
        let prod = a.mul(&b, &form).unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn truncated_product_discards_high_degrees() {
        // (1 + X)(1 - X) at order 2 with (e1,e1)=0 -> 1 - X^2
        let x = QTorusElt::basis(vec![1]);
        let a = TruncatedSeries::new(QTorusElt::one(1).add(&x), 2).unwrap();
        let b = TruncatedSeries::new(QTorusElt::one(1).sub(&x), 2).unwrap();
        let p = a.mul(&b, &rank1_form()).unwrap();
        let expected = QTorusElt::one(1).sub(&QTorusElt::basis(vec![2]));
        assert_eq!(p.base(), &expected);

        // unit
        let one = TruncatedSeries::one(1, 2);
        assert_eq!(a.mul(&one, &rank1_form()).unwrap(), a);

        // order-0 truncation of a constant-term-1 series is 1
        let z = TruncatedSeries::new(QTorusElt::one(1).add(&x), 0).unwrap();
        assert!(z.is_one());
    }

    #[test]
    fn mismatched_orders_error() {
        let a = TruncatedSeries::one(1, 2);
        let b = TruncatedSeries::one(1, 3);
        assert!(a.mul(&b, &rank1_form()).is_err());
    }

    #[test]
    fn log_matches_q_dilogarithm_expansion() {
        // log Psi_q(x) = sum_n (-1)^{n+1} x^n / (n (q^n - q^{-n})), to order 8
        let order = 8;
        let form = rank1_form();
        let psi = quantum_dilog(&[1], 1, order).unwrap();
        let lg = psi.log(&form).unwrap();
        for n in 1..=order {
            let sign = if n % 2 == 1 { Rat::one() } else { -Rat::one() };
            let den = QLaurent::q_pow(n)
                .sub(&QLaurent::q_pow(-n))
                .scale(&Rat::from_integer(n.into()));
            let expected = QFrac::new(QLaurent::constant(sign), den).unwrap();
            assert_eq!(lg.coeff(&[n]), expected, "coefficient of x^{n}");
        }
        assert!(lg.coeff(&[0]).is_zero());
    }

    #[test]
    fn associative_up_to_truncation() {
        let form = vec![vec![0, 1], vec![-1, 0]];
        let order = 6;
        let a = quantum_dilog(&[1, 0], 2, order).unwrap();
        let b = quantum_dilog(&[0, 1], 2, order).unwrap();
        let c = quantum_dilog(&[1, 1], 2, order).unwrap();
        let ab_c = a.mul(&b, &form).unwrap().mul(&c, &form).unwrap();
        let a_bc = a.mul(&b.mul(&c, &form).unwrap(), &form).unwrap();
        assert_eq!(ab_c, a_bc);
    }
}
