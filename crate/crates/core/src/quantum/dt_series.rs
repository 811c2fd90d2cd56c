use crate::algebra::{quantum_dilog_signed, truncated_mul, TruncatedSeries};
use crate::quiver::{MutationWord, Quiver, Step};
use crate::tropical::word_dilog_data;
use crate::Result;

/// Ordered dilogarithm factorization of a word, the data of the formal
/// DT-series: positive-cone vectors with the canonical signs, the leftover
/// permutation part (if the word's C-matrix is a signed permutation), and
/// the final C-matrix.
#[derive(Clone, Debug)]
pub struct DTSeriesFactorization {
    pub factors: Vec<(Vec<i64>, i64)>,
    pub c_matrix: crate::tropical::CMatrix,
}

/// The dilogarithm factorization of a word, with every vector checked to lie
/// in the positive cone.
pub fn dt_series_factorization(q: &Quiver, w: &MutationWord) -> Result<DTSeriesFactorization> {
    let (factors, c_matrix) = word_dilog_data(q, w)?;
    for (f, _) in &factors {
        debug_assert!(f.iter().all(|&x| x >= 0), "sign-coherence puts f in the cone");
    }
    Ok(DTSeriesFactorization { factors, c_matrix })
}

/// The ordered product `Psi(X_{f_1})^{eps_1} ... Psi(X_{f_m})^{eps_m}`
/// truncated at the given cone-degree order, factors multiplied left to
/// right in word order.
pub fn dt_series_of_word(q: &Quiver, w: &MutationWord, order: i64) -> Result<TruncatedSeries> {
    let n = q.unfrozen().len();
    let fact = dt_series_factorization(q, w)?;
    let mut acc = TruncatedSeries::one(n, order);
    let form = crate::tropical::restrict(&q.eps, &q.unfrozen());
    for (f, sign) in &fact.factors {
        let psi = quantum_dilog_signed(f, n, order, *sign > 0)?;
        acc = truncated_mul(&acc, &psi, &form)?;
    }
    Ok(acc)
}

/// The A2 DT words: `sigma_1 = mu_2 mu_1` and
/// `sigma_2 = pi_12 mu_2 mu_1 mu_2` as step lists.
pub fn a2_sigma1() -> MutationWord {
    MutationWord::new(vec![Step::Mutate(0), Step::Mutate(1)])
}

pub fn a2_sigma2() -> MutationWord {
    MutationWord::new(vec![
        Step::Mutate(1),
        Step::Mutate(0),
        Step::Mutate(1),
        Step::Permute(vec![1, 0]),
    ])
}

/// The pentagon identity: the two A2 DT-series agree coefficient by
/// coefficient up to the given truncation order.
pub fn pentagon_check(order: i64) -> Result<bool> {
    let q = crate::quiver::a2_quiver();
    let lhs = dt_series_of_word(&q, &a2_sigma1(), order)?;
    let rhs = dt_series_of_word(&q, &a2_sigma2(), order)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{quantum_dilog, truncated_mul};
    use crate::quiver::a2_quiver;
    use crate::tropical::cmatrix_of_word;

    #[test]
    fn sigma1_factorization() {
        let q = a2_quiver();
        let f = dt_series_factorization(&q, &a2_sigma1()).unwrap();
        assert_eq!(f.factors, vec![(vec![1, 0], 1), (vec![0, 1], 1)]);
        assert!(f.c_matrix.is_neg_identity());
    }

    #[test]
    fn sigma2_factorization() {
        let q = a2_quiver();
        let f = dt_series_factorization(&q, &a2_sigma2()).unwrap();
        assert_eq!(
            f.factors,
            vec![(vec![0, 1], 1), (vec![1, 1], 1), (vec![1, 0], 1)]
        );
        assert!(f.c_matrix.is_neg_identity());
    }

    #[test]
    fn empty_word_series_is_one() {
        let q = a2_quiver();
        let s = dt_series_of_word(&q, &MutationWord::empty(), 8).unwrap();
        assert!(s.is_one());
    }

    #[test]
    fn pentagon_small_orders() {
        assert!(pentagon_check(2).unwrap());
        assert!(pentagon_check(6).unwrap());
    }

    #[test]
    fn pentagon_negative_control() {
        // the deliberately swapped product Psi(X_{e1+e2}) Psi(X_{e2}) Psi(X_{e1})
        // differs from the sigma_1 series at order >= 2
        let q = a2_quiver();
        let order = 4;
        let form = q.eps.clone();
        let lhs = dt_series_of_word(&q, &a2_sigma1(), order).unwrap();
        let mut rhs = TruncatedSeries::one(2, order);
        for f in [vec![1, 1], vec![0, 1], vec![1, 0]] {
            let psi = quantum_dilog(&f, 2, order).unwrap();
            rhs = truncated_mul(&rhs, &psi, &form).unwrap();
        }
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn equal_cmatrices_give_equal_series_tau3() {
        // two orderings of the cyclic transformation on q_3
        use crate::cluster::tau_word;
        let q = crate::quiver::cyclic_quiver(3);
        let w1 = tau_word(&[0, 1, 2], 3);
        let w2 = tau_word(&[2, 0, 1], 3);
        let (c1, _) = cmatrix_of_word(&q, &w1).unwrap();
        let (c2, _) = cmatrix_of_word(&q, &w2).unwrap();
        assert_eq!(c1, c2, "same C-matrix");
        for order in [4, 8] {
            let s1 = dt_series_of_word(&q, &w1, order).unwrap();
            let s2 = dt_series_of_word(&q, &w2, order).unwrap();
            assert_eq!(s1, s2, "series agree at order {order}");
        }
    }

    #[test]
    fn signs_match_tropical_sign_sequence() {
        use crate::cluster::tau_word;
        use crate::tropical::cmatrix_of_word;
        let q = crate::quiver::cyclic_quiver(4);
        let w = tau_word(&[0, 1, 2, 3], 4);
        let f = dt_series_factorization(&q, &w).unwrap();
        let (_, signs) = cmatrix_of_word(&q, &w).unwrap();
        let fsigns: Vec<i64> = f.factors.iter().map(|(_, s)| *s).collect();
        assert_eq!(fsigns, signs.signs);
    }
}
