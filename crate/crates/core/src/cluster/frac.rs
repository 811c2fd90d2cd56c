use std::sync::Arc;

use num::{One, Zero};

use crate::algebra::{MultiLaurent, Rat, VarSet};
use crate::{Error, Result};

/// Rational function kept in factored form: a Laurent monomial times a
/// product of polynomial factors with integer exponents.
///
/// Cluster Poisson mutation only ever multiplies and divides by binomial-ish
/// factors, so keeping the factorization avoids the expression swell that
/// expanding to a single fraction would cause. Factors are normalized
/// (monomial content stripped, lowest term monic) and merged by equality.
#[derive(Clone, Debug)]
pub struct FracLaurent {
    mono: MultiLaurent,
    factors: Vec<(Arc<MultiLaurent>, i64)>,
}

fn normalize_factor(p: &MultiLaurent) -> (MultiLaurent, MultiLaurent) {
    // returns (unit monomial, normalized factor) with p = unit * factor
    let (shift, poly) = p.factor_monomial_content();
    let lead = poly
        .sorted_terms()
        .into_iter()
        .next()
        .expect("nonzero factor");
    let c = lead.1;
    let unit = MultiLaurent::monomial(p.vars().clone(), shift, c.clone());
    let norm = poly.scale(&(Rat::one() / c));
    (unit, norm)
}

impl FracLaurent {
    pub fn one(vars: VarSet) -> Self {
        FracLaurent { mono: MultiLaurent::one(vars), factors: Vec::new() }
    }

    pub fn variable(vars: VarSet, i: usize) -> Self {
        FracLaurent { mono: MultiLaurent::variable(vars, i), factors: Vec::new() }
    }

    pub fn from_poly(p: &MultiLaurent) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::DivisionByZero("zero is not a unit rational function".into()));
        }
        if p.is_monomial() {
            return Ok(FracLaurent { mono: p.clone(), factors: Vec::new() });
        }
        let (unit, norm) = normalize_factor(p);
        Ok(FracLaurent { mono: unit, factors: vec![(Arc::new(norm), 1)] })
    }

    pub fn vars(&self) -> &VarSet {
        self.mono.vars()
    }

    fn push_factor(&mut self, f: Arc<MultiLaurent>, e: i64) {
        if e == 0 {
            return;
        }
        for (g, ge) in self.factors.iter_mut() {
            if **g == *f {
                *ge += e;
                if *ge == 0 {
                    self.factors.retain(|(_, x)| *x != 0);
                }
                return;
            }
        }
        self.factors.push((f, e));
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.mono = r.mono.mul(&other.mono);
        for (f, e) in &other.factors {
            r.push_factor(f.clone(), *e);
        }
        r
    }

    pub fn inv(&self) -> Self {
        let (e0, c0) = self
            .mono
            .terms()
            .next()
            .map(|(e, c)| (e.clone(), c.clone()))
            .expect("unit monomial");
        let inv_mono = MultiLaurent::monomial(
            self.mono.vars().clone(),
            e0.iter().map(|x| -x).collect(),
            Rat::one() / c0,
        );
        FracLaurent {
            mono: inv_mono,
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one(self.vars().clone());
        }
        let base = if k > 0 { self.clone() } else { self.inv() };
        let mut r = Self::one(self.vars().clone());
        for _ in 0..k.unsigned_abs() {
            r = r.mul(&base);
        }
        r
    }

    /// Expanded numerator/denominator pair (both Laurent polynomials).
    pub fn to_num_den(&self) -> (MultiLaurent, MultiLaurent) {
        let vars = self.vars().clone();
        let mut num = self.mono.clone();
        let mut den = MultiLaurent::one(vars);
        for (f, e) in &self.factors {
            if *e > 0 {
                for _ in 0..*e {
                    num = num.mul(f);
                }
            } else {
                for _ in 0..(-e) {
                    den = den.mul(f);
                }
            }
        }
        (num, den)
    }

    /// `1 + self`, refactored so the new numerator becomes a single factor.
    pub fn one_plus(&self) -> Result<Self> {
        let (num, den) = self.to_num_den();
        let total = den.add(&num);
        if total.is_zero() {
            return Err(Error::DivisionByZero("1 + x vanished identically".into()));
        }
        let mut r = Self::from_poly(&total)?;
        // divide by the denominator, reusing its factorization
        for (f, e) in &self.factors {
            if *e < 0 {
                r.push_factor(f.clone(), *e);
            }
        }
        Ok(r)
    }

    /// Exact evaluation; errors when a denominator factor vanishes.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        let mut acc = self.mono.eval(point)?;
        for (f, e) in &self.factors {
            let v = f.eval(point)?;
            if v.is_zero() && *e < 0 {
                return Err(Error::DivisionByZero("factor vanishes at evaluation point".into()));
            }
            acc *= crate::algebra::rat_pow(&v, *e);
        }
        Ok(acc)
    }

    /// Exact equality by cross-multiplication of the expanded forms.
    pub fn eq_exact(&self, other: &Self) -> bool {
        let ratio = self.mul(&other.inv());
        // Cheap path: everything cancels in factored form.
        if ratio.factors.is_empty() {
            return ratio.mono.is_one();
        }
        let (n, d) = ratio.to_num_den();
        n == d
    }

    /// Equality against an explicit numerator/denominator pair.
    pub fn eq_num_den(&self, num: &MultiLaurent, den: &MultiLaurent) -> bool {
        let (sn, sd) = self.to_num_den();
        sn.mul(den) == num.mul(&sd)
    }
}
