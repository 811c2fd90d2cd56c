use std::collections::HashMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{QFrac, QLaurent};
use crate::{Error, Result};

/// Skew-symmetric integer bilinear form, row-major.
pub type SkewForm = Vec<Vec<i64>>;

/// Evaluates the bilinear form on two lattice vectors.
pub fn pairing(form: &SkewForm, v: &[i64], w: &[i64]) -> i64 {
    let mut s = 0;
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0 {
                s += vi * form[i][j] * wj;
            }
        }
    }
    s
}

/// Finite linear combination of q-commuting torus monomials `X_v` with
/// coefficients in the fraction field of `Z[q, q^{-1}]`.
///
/// The product rule `X_v X_w = q^{(v,w)} X_{v+w}` needs the skew form, which
/// is supplied per multiplication; elements themselves are form-agnostic.
#[derive(Clone, PartialEq, Eq)]
pub struct QTorusElt {
    rank: usize,
    terms: HashMap<Vec<i64>, QFrac>,
}

impl QTorusElt {
    pub fn zero(rank: usize) -> Self {
        QTorusElt { rank, terms: HashMap::new() }
    }

    /// The multiplicative unit `X_0`.
    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], QFrac::one())
    }

    /// `c * X_v`.
    pub fn monomial(v: Vec<i64>, c: QFrac) -> Self {
        let rank = v.len();
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(v, c);
        }
        QTorusElt { rank, terms }
    }

    /// `X_v` with coefficient 1.
    pub fn basis(v: Vec<i64>) -> Self {
        Self::monomial(v, QFrac::one())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.rank])
                .map_or(false, |c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QFrac)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: &[i64]) -> QFrac {
        self.terms.get(v).cloned().unwrap_or_else(QFrac::zero)
    }

    pub fn sorted_terms(&self) -> Vec<(Vec<i64>, QFrac)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn add_term(&mut self, v: Vec<i64>, c: QFrac) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(v) {
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (v, c) in &other.terms {
            r.add_term(v.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = c.neg();
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QFrac) -> Self {
        let mut r = Self::zero(self.rank);
        for (v, x) in &self.terms {
            r.add_term(v.clone(), x.mul(c));
        }
        r
    }

    /// The involutive anti-automorphism `*`: fixes every `X_v`, sends
    /// `q -> q^{-1}`. On elements written in the monomial basis it acts
    /// coefficientwise by the bar involution.
    pub fn star(&self) -> Self {
        let mut r = Self::zero(self.rank);
        for (v, c) in &self.terms {
            r.terms.insert(v.clone(), c.bar());
        }
        r
    }

    /// Specializes `q := value`, producing coefficients in the rationals.
    /// Used for the quasiclassical limit `q = 1`.
    pub fn eval_q(&self, q: &super::Rat) -> Result<Vec<(Vec<i64>, super::Rat)>> {
        let mut out = Vec::new();
        for (v, c) in self.sorted_terms() {
            out.push((v, c.eval(q)?));
        }
        Ok(out)
    }
}

/// Product in the quantum torus algebra: bilinear extension of the rule
/// `X_v X_w = q^{(v,w)} X_{v+w}`, normalized (no zero terms survive).
pub fn qtorus_mul(a: &QTorusElt, b: &QTorusElt, form: &SkewForm) -> Result<QTorusElt> {
    if a.rank != b.rank {
        return Err(Error::Dimension(format!(
            "torus ranks {} vs {}",
            a.rank, b.rank
        )));
    }
    if form.len() != a.rank || form.iter().any(|r| r.len() != a.rank) {
        return Err(Error::Dimension("form size does not match lattice rank".into()));
    }
    let mut r = QTorusElt::zero(a.rank);
    for (v, cv) in &a.terms {
        for (w, cw) in &b.terms {
            let p = pairing(form, v, w);
            let sum: Vec<i64> = v.iter().zip(w).map(|(x, y)| x + y).collect();
            let c = cv.mul(cw).mul(&QFrac::from_laurent(QLaurent::q_pow(p)));
            r.add_term(sum, c);
        }
    }
    Ok(r)
}

impl fmt::Display for QTorusElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .iter()
            .map(|(v, c)| {
                if v.iter().all(|&x| x == 0) {
                    format!("({c})")
                } else {
                    format!("({c})*X{v:?}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for QTorusElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for QTorusElt {
    /// Deterministic map keyed by the bracketed exponent vector.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sorted = self.sorted_terms();
        let mut m = s.serialize_map(Some(sorted.len()))?;
        for (v, c) in sorted {
            let key = format!(
                "[{}]",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            );
            m.serialize_entry(&key, &c)?;
        }
        m.end()
    }
}
