use crate::algebra::{QFrac, SkewForm};
use crate::quantum::ad::{ad_dilog_rat, TorusRat};
use crate::quiver::{MutationWord, Quiver};
use crate::tropical::word_dilog_data;
use crate::{Error, Result};

/// Quantum seed: the images of the current chart's generators inside the
/// initial quantum torus, together with the accumulated word.
///
/// The running skew form transported by the lattice basis equals the current
/// quiver's epsilon-matrix; products of entries are always taken in the fixed
/// initial form. Entries are rebuilt from the canonical-sign dilogarithm
/// factorization of the accumulated word, after cancelling adjacent inverse
/// conjugation pairs (which makes `mu_k mu_k = id` exact and free).
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    pub initial: Quiver,
    pub quiver: Quiver,
    pub word: MutationWord,
    pub entries: Vec<TorusRat>,
}

impl QuantumSeed {
    pub fn initial_seed(q: Quiver) -> Result<QuantumSeed> {
        if !q.frozen.is_empty() {
            return Err(Error::Config("quantum seeds need fully unfrozen quivers".into()));
        }
        let n = q.n;
        let entries = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                TorusRat::monomial(v, QFrac::one())
            })
            .collect();
        Ok(QuantumSeed { initial: q.clone(), quiver: q, word: MutationWord::empty(), entries })
    }

    /// The fixed form used for all products: the initial epsilon-matrix.
    pub fn form(&self) -> &SkewForm {
        &self.initial.eps
    }

    pub fn apply_word(&self, w: &MutationWord) -> Result<QuantumSeed> {
        let word = self.word.then(w);
        Self::from_word(self.initial.clone(), word)
    }

    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        self.apply_word(&MutationWord::mutate(k))
    }

    /// Builds the seed at the end of `word`, starting from the initial seed
    /// of `q`.
    pub fn from_word(q: Quiver, word: MutationWord) -> Result<QuantumSeed> {
        let quiver = q.apply_word(&word)?;
        let (mut data, cmat) = word_dilog_data(&q, &word)?;
        // cancel adjacent inverse conjugations (same vector, opposite sign)
        let mut i = 0;
        while i + 1 < data.len() {
            if data[i].0 == data[i + 1].0 && data[i].1 == -data[i + 1].1 {
                data.drain(i..=i + 1);
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        let form = q.eps.clone();
        let n = q.n;
        let mut entries = Vec::with_capacity(n);
        for j in 0..n {
            // monomial part: row j of the C-matrix
            let mut e = TorusRat::monomial(cmat.entries[j].clone(), QFrac::one());
            // conjugations applied innermost-first: the last step's vector first
            for (f, sign) in data.iter().rev() {
                e = ad_dilog_rat(f, *sign, &e, &form)?;
            }
            entries.push(e);
        }
        Ok(QuantumSeed { initial: q, quiver, word, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{qtorus_mul, QLaurent, QTorusElt, Rat};
    use crate::cluster::{x_apply_word_values, XSeed};
    use crate::quiver::{a2_quiver, cyclic_quiver, Step};
    use num::One;

    #[test]
    fn a2_single_mutation_entry() {
        // After mu_1: X'_2 = X_{e2}(1 + q X_{e1})
        let s = QuantumSeed::initial_seed(a2_quiver()).unwrap();
        let m = s.mutate(0).unwrap();
        let form = m.form().clone();
        let x2 = QTorusElt::basis(vec![0, 1]);
        let one_plus = QTorusElt::one(2).add(&QTorusElt::monomial(
            vec![1, 0],
            QFrac::from_laurent(QLaurent::q_pow(1)),
        ));
        let expected = qtorus_mul(&x2, &one_plus, &form).unwrap();
        assert_eq!(m.entries[1].as_torus_elt().unwrap(), expected);
        // X'_1 = X_{-e1}
        assert_eq!(
            m.entries[0].as_torus_elt().unwrap(),
            QTorusElt::basis(vec![-1, 0])
        );
    }

    #[test]
    fn double_mutation_is_identity() {
        for q in [a2_quiver(), cyclic_quiver(3)] {
            let n = q.n;
            let s = QuantumSeed::initial_seed(q).unwrap();
            for k in 0..n {
                let m = s.mutate(k).unwrap().mutate(k).unwrap();
                for j in 0..n {
                    let mut v = vec![0i64; n];
                    v[j] = 1;
                    assert_eq!(
                        m.entries[j].as_torus_elt().unwrap(),
                        QTorusElt::basis(v),
                        "generator {j} restored after mu_{k} mu_{k}"
                    );
                }
            }
        }
    }

    #[test]
    fn positive_and_negative_presentations_agree() {
        // Ad_{Psi(X_v)} o i  =  Ad_{Psi(X_{-v})^{-1}} o i^-
        use crate::quantum::ad::ad_dilog_rat;
        use crate::quantum::ad::TorusRat;
        use crate::quiver::LatticeBasis;
        let q = a2_quiver();
        let form = q.eps.clone();
        for k in 0..2 {
            let id = LatticeBasis::identity(2);
            let plus = id.mutate(&form, k, 1);
            let minus = id.mutate(&form, k, -1);
            let mut ek = vec![0i64; 2];
            ek[k] = 1;
            let neg_ek: Vec<i64> = ek.iter().map(|x| -x).collect();
            for j in 0..2 {
                let pos_entry = ad_dilog_rat(
                    &ek,
                    1,
                    &TorusRat::monomial(plus.rows[j].clone(), QFrac::one()),
                    &form,
                )
                .unwrap();
                let neg_entry = ad_dilog_rat(
                    &neg_ek,
                    -1,
                    &TorusRat::monomial(minus.rows[j].clone(), QFrac::one()),
                    &form,
                )
                .unwrap();
                assert!(
                    pos_entry.eq_rat(&neg_entry, &form).unwrap(),
                    "presentations agree at k={k}, j={j}"
                );
            }
        }
    }

    #[test]
    fn q_one_specialization_matches_classical_mutation() {
        let q = cyclic_quiver(3);
        let qs = QuantumSeed::initial_seed(q.clone()).unwrap();
        let xs = XSeed::initial(q);
        let pts = [
            vec![Rat::new(2.into(), 1.into()), Rat::new(3.into(), 1.into()), Rat::new(5.into(), 2.into())],
            vec![Rat::new(7.into(), 3.into()), Rat::new(1.into(), 2.into()), Rat::new(4.into(), 1.into())],
        ];
        for k in 0..3 {
            let qm = qs.mutate(k).unwrap();
            let xm = xs.mutate(k).unwrap();
            for j in 0..3 {
                for pt in &pts {
                    let qv = qm.entries[j].eval_classical(&Rat::one(), pt).unwrap();
                    let xv = xm.x[j].eval(pt).unwrap();
                    assert_eq!(qv, xv, "q->1 at k={k}, j={j}");
                }
            }
        }
    }

    #[test]
    fn longer_word_specializes_to_classical_values() {
        let q = a2_quiver();
        let w = MutationWord::new(vec![Step::Mutate(0), Step::Mutate(1)]);
        let qs = QuantumSeed::from_word(q.clone(), w.clone()).unwrap();
        let pt = vec![Rat::new(3.into(), 2.into()), Rat::new(5.into(), 1.into())];
        let classical = x_apply_word_values(&q, &w, &pt).unwrap();
        for j in 0..2 {
            let qv = qs.entries[j].eval_classical(&Rat::one(), &pt).unwrap();
            assert_eq!(qv, classical[j], "entry {j}");
        }
    }
}
