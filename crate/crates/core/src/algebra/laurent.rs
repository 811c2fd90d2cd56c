use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{BigRational, One, Zero};
use serde::{Serialize, Serializer};

use super::{rat_to_string, Rat};
use crate::{Error, Result};

/// Shared, ordered list of variable names.
pub type VarSet = Arc<Vec<String>>;

/// Build a variable set from string-ish names.
pub fn varset<S: Into<String>>(names: impl IntoIterator<Item = S>) -> VarSet {
    Arc::new(names.into_iter().map(Into::into).collect())
}

/// Sparse multivariate Laurent polynomial over the rationals.
///
/// Terms live in a hash map from exponent vectors to nonzero coefficients;
/// the canonical sorted form is produced on demand for display, hashing and
/// serialization. Two polynomials compare equal iff they have the same
/// variable count and identical term maps.
#[derive(Clone)]
pub struct MultiLaurent {
    vars: VarSet,
    terms: HashMap<Vec<i64>, Rat>,
}

impl PartialEq for MultiLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.vars.len() == other.vars.len() && self.terms == other.terms
    }
}
impl Eq for MultiLaurent {}

impl MultiLaurent {
    pub fn zero(vars: VarSet) -> Self {
        MultiLaurent { vars, terms: HashMap::new() }
    }

    pub fn constant(vars: VarSet, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: VarSet) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The coordinate variable with index `i`.
    pub fn variable(vars: VarSet, i: usize) -> Self {
        let mut exps = vec![0i64; vars.len()];
        exps[i] = 1;
        Self::monomial(vars, exps, Rat::one())
    }

    /// The single term `c * x^exps`. Zero coefficients yield the zero polynomial.
    pub fn monomial(vars: VarSet, exps: Vec<i64>, c: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.nvars()])
                .map_or(false, |c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i64]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars()])
    }

    /// Canonical sorted term list (lexicographic on exponent vectors).
    pub fn sorted_terms(&self) -> Vec<(Vec<i64>, Rat)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    fn add_term(&mut self, exps: Vec<i64>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::Dimension(format!(
                "laurent polynomials over {} vs {} variables",
                self.nvars(),
                other.nvars()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("variable mismatch");
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -c.clone();
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("variable mismatch");
        let mut r = Self::zero(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        let mut r = self.clone();
        for v in r.terms.values_mut() {
            *v = v.clone() * c;
        }
        r
    }

    pub fn mul_monomial(&self, exps: &[i64], c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        let mut r = Self::zero(self.vars.clone());
        for (e, v) in &self.terms {
            let e: Vec<i64> = e.iter().zip(exps).map(|(a, b)| a + b).collect();
            r.terms.insert(e, v * c);
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.vars.clone());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Componentwise minimum of all exponent vectors (the monomial content
    /// exponent). Zero polynomial has no content.
    fn min_exps(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (mi, ei) in m.iter_mut().zip(e) {
                *mi = (*mi).min(*ei);
            }
        }
        Some(m)
    }

    /// Splits `self = x^shift * p` with `p` a genuine polynomial whose
    /// componentwise-minimal exponent is zero.
    pub fn factor_monomial_content(&self) -> (Vec<i64>, Self) {
        match self.min_exps() {
            None => (vec![0; self.nvars()], self.clone()),
            Some(shift) => {
                let neg: Vec<i64> = shift.iter().map(|x| -x).collect();
                (shift, self.mul_monomial(&neg, &Rat::one()))
            }
        }
    }

    /// Graded-lex-maximal term, used as a division pivot.
    fn leading_term(&self) -> Option<(&Vec<i64>, &Rat)> {
        self.terms.iter().max_by(|a, b| {
            let da: i64 = a.0.iter().sum();
            let db: i64 = b.0.iter().sum();
            da.cmp(&db).then_with(|| a.0.cmp(b.0))
        })
    }

    /// Exact division of Laurent polynomials. Errors when the quotient is not
    /// a Laurent polynomial; this is the Laurent-phenomenon trap.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        self.check_compatible(den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero("laurent division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Shift both to genuine polynomials; divide; shift back.
        let (sn, pn) = self.factor_monomial_content();
        let (sd, pd) = den.factor_monomial_content();
        let mut rem = pn;
        let mut quo = Self::zero(self.vars.clone());
        let (dl_e, dl_c) = {
            let (e, c) = pd.leading_term().expect("nonzero divisor");
            (e.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rl_e, rl_c) = {
                let (e, c) = rem.leading_term().expect("nonzero remainder");
                (e.clone(), c.clone())
            };
            let q_e: Vec<i64> = rl_e.iter().zip(&dl_e).map(|(a, b)| a - b).collect();
            if q_e.iter().any(|&x| x < 0) {
                return Err(Error::NonLaurent(
                    "exact Laurent division left a nonzero remainder".into(),
                ));
            }
            let q_c = rl_c / dl_c.clone();
            quo.add_term(q_e.clone(), q_c.clone());
            rem = rem.sub(&pd.mul_monomial(&q_e, &q_c));
        }
        let shift: Vec<i64> = sn.iter().zip(&sd).map(|(a, b)| a - b).collect();
        Ok(quo.mul_monomial(&shift, &Rat::one()))
    }

    /// True when `self` is a single monomial (possibly with negative exponents).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Exact evaluation at a rational point, one value per variable.
    /// A zero value at a variable occurring with a negative exponent is a
    /// division error.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.nvars() {
            return Err(Error::Dimension(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k == 0 {
                    continue;
                }
                if x.is_zero() && k < 0 {
                    return Err(Error::DivisionByZero(
                        "zero assigned to a variable with negative exponent".into(),
                    ));
                }
                t *= rat_pow(x, k);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes the given Laurent polynomials for the variables.
    /// Negative exponents require the substituted value to be a monomial,
    /// or the caller must guarantee invertibility via `div_exact` later;
    /// here we only support monomial inverses.
    pub fn eval_poly(&self, values: &[MultiLaurent]) -> Result<MultiLaurent> {
        if values.is_empty() {
            return Err(Error::Dimension("empty substitution".into()));
        }
        let vars = values[0].vars.clone();
        let mut acc = MultiLaurent::zero(vars.clone());
        for (e, c) in &self.terms {
            let mut t = MultiLaurent::constant(vars.clone(), c.clone());
            for (v, &k) in values.iter().zip(e) {
                match k.cmp(&0) {
                    std::cmp::Ordering::Equal => {}
                    std::cmp::Ordering::Greater => t = t.mul(&v.pow(k as u32)),
                    std::cmp::Ordering::Less => {
                        if !v.is_monomial() {
                            return Err(Error::NonLaurent(
                                "substituting a non-monomial at a negative exponent".into(),
                            ));
                        }
                        let (e0, c0) = v.terms.iter().next().expect("monomial");
                        let inv_e: Vec<i64> = e0.iter().map(|x| -x).collect();
                        let inv_c = Rat::one() / c0.clone();
                        let inv = MultiLaurent::monomial(vars.clone(), inv_e, inv_c);
                        t = t.mul(&inv.pow((-k) as u32));
                    }
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

/// Integer power of a rational, supporting negative exponents.
pub fn rat_pow(x: &Rat, k: i64) -> Rat {
    let mut r = Rat::one();
    let b = if k >= 0 { x.clone() } else { Rat::one() / x.clone() };
    for _ in 0..k.unsigned_abs() {
        r *= b.clone();
    }
    r
}

impl fmt::Debug for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", rat_to_string(&c))?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", rat_to_string(&c), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for MultiLaurent {
    /// `{"vars": [...], "terms": [{"e": [..], "c": "num/den"}, ...]}` with
    /// terms in canonical (sorted) order.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            e: &'a [i64],
            c: String,
        }
        #[derive(Serialize)]
        struct Poly<'a> {
            vars: &'a [String],
            terms: Vec<Term<'a>>,
        }
        let sorted = self.sorted_terms();
        let terms: Vec<Term> = sorted
            .iter()
            .map(|(e, c)| Term { e, c: rat_to_string(c) })
            .collect();
        Poly { vars: &self.vars, terms }.serialize(serializer)
    }
}

/// `BigRational` from an integer, shorthand.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(n.into())
}
