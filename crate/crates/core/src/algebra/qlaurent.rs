use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::Serialize;

use super::laurent::rat_pow;
use super::{rat_to_string, Rat};
use crate::{Error, Result};

/// Laurent polynomial in the single quantum parameter `q`, with rational
/// coefficients. Terms are kept in a sorted map from q-exponent to nonzero
/// coefficient, so the representation is always canonical.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QLaurent {
    terms: BTreeMap<i64, Rat>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::q_pow(0)
    }

    /// The monomial `q^k`.
    pub fn q_pow(k: i64) -> Self {
        let mut t = BTreeMap::new();
        t.insert(k, Rat::one());
        QLaurent { terms: t }
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(0, c)
    }

    pub fn term(k: i64, c: Rat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(k, c);
        }
        QLaurent { terms: t }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut r = Self::zero();
        for (k, c) in terms {
            r.add_term(k, c);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, k: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (&k, c) in &other.terms {
            r.add_term(k, c.clone());
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
        let mut r = Self::zero();
        for (&k1, c1) in &self.terms {
            for (&k2, c2) in &other.terms {
                r.add_term(k1 + k2, c1 * c2);
            }
        }
        r
    }

    pub fn mul_q_pow(&self, k: i64) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut r = self.clone();
        for v in r.terms.values_mut() {
            *v = v.clone() * c;
        }
        r
    }

    /// The bar involution `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Exact evaluation at a rational value of `q`.
    pub fn eval(&self, q: &Rat) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (&k, c) in &self.terms {
            if q.is_zero() && k < 0 {
                return Err(Error::DivisionByZero("q = 0 with negative exponent".into()));
            }
            acc += c * rat_pow(q, k);
        }
        Ok(acc)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Exact division within Laurent polynomials; `None` when not divisible.
    pub fn div_exact(&self, den: &Self) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Shift so both have minimal exponent zero, divide as polynomials,
        // then shift the quotient back.
        let nlo = self.min_exp().expect("nonzero");
        let dlo = den.min_exp().expect("nonzero");
        let num = self.mul_q_pow(-nlo);
        let den = den.mul_q_pow(-dlo);
        let (dhi, dc) = {
            let (k, c) = den.terms.iter().next_back().expect("nonzero");
            (*k, c.clone())
        };
        let mut rem = num;
        let mut quo = Self::zero();
        while let Some((&rhi, rc)) = rem.terms.iter().next_back() {
            if rhi < dhi {
                return None; // nonzero remainder of lower degree
            }
            let k = rhi - dhi;
            let c = rc.clone() / dc.clone();
            quo.add_term(k, c.clone());
            rem = rem.sub(&den.mul(&Self::term(k, c)));
        }
        Some(quo.mul_q_pow(nlo - dlo))
    }
}

/// Element of the fraction field of the q-Laurent ring, kept as
/// `num / (extra * prod_a (q^{2a} - 1)^{e_a})`.
///
/// The factored denominator shape matches the quantum-dilogarithm
/// coefficients exactly, so products never need polynomial gcds. Equality is
/// decided by cross-multiplication; the struct is therefore not `Eq` by
/// structure but by value.
#[derive(Clone)]
pub struct QFrac {
    num: QLaurent,
    /// exponent of the factor `q^{2a} - 1`, keyed by `a >= 1`
    den_factors: BTreeMap<i64, u32>,
    /// leftover general denominator, kept monic-at-lowest-term and without
    /// q-power content; `1` in the common case
    den_extra: QLaurent,
}

fn cyclo_factor(a: i64) -> QLaurent {
    QLaurent::q_pow(2 * a).sub(&QLaurent::one())
}

impl QFrac {
    pub fn zero() -> Self {
        QFrac {
            num: QLaurent::zero(),
            den_factors: BTreeMap::new(),
            den_extra: QLaurent::one(),
        }
    }

    pub fn one() -> Self {
        QFrac::from_laurent(QLaurent::one())
    }

    pub fn from_laurent(num: QLaurent) -> Self {
        QFrac { num, den_factors: BTreeMap::new(), den_extra: QLaurent::one() }
    }

    /// `num / prod_a (q^{2a}-1)^{e_a}` for the given factor exponents.
    pub fn with_factored_den(num: QLaurent, factors: impl IntoIterator<Item = (i64, u32)>) -> Self {
        let mut f = QFrac {
            num,
            den_factors: factors.into_iter().filter(|&(_, e)| e > 0).collect(),
            den_extra: QLaurent::one(),
        };
        f.reduce();
        f
    }

    pub fn new(num: QLaurent, den: QLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("zero denominator in q-fraction".into()));
        }
        let mut f = QFrac { num, den_factors: BTreeMap::new(), den_extra: den };
        f.reduce();
        Ok(f)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den_full()
    }

    /// Expanded denominator.
    pub fn den_full(&self) -> QLaurent {
        let mut d = self.den_extra.clone();
        for (&a, &e) in &self.den_factors {
            let f = cyclo_factor(a);
            for _ in 0..e {
                d = d.mul(&f);
            }
        }
        d
    }

    pub fn num(&self) -> &QLaurent {
        &self.num
    }

    /// True when the denominator is trivial after the cheap reductions.
    pub fn is_laurent(&self) -> bool {
        self.den_factors.is_empty() && self.den_extra.is_one()
    }

    pub fn as_laurent(&self) -> Result<QLaurent> {
        if self.is_laurent() {
            return Ok(self.num.clone());
        }
        // Fall back on exact division by the expanded denominator.
        self.num
            .div_exact(&self.den_full())
            .ok_or_else(|| Error::NonLaurent(format!("{self} has a nontrivial denominator")))
    }

    /// Cheap normalization: trial-divides the numerator by denominator
    /// factors and strips q-power/content from the leftover denominator.
    /// Not a canonical form; equality goes through cross-multiplication.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den_factors.clear();
            self.den_extra = QLaurent::one();
            return;
        }
        let keys: Vec<i64> = self.den_factors.keys().copied().collect();
        for a in keys {
            let f = cyclo_factor(a);
            while *self.den_factors.get(&a).unwrap_or(&0) > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        let e = self.den_factors.get_mut(&a).expect("present");
                        *e -= 1;
                        if *e == 0 {
                            self.den_factors.remove(&a);
                        }
                    }
                    None => break,
                }
            }
        }
        if !self.den_extra.is_one() {
            if let Some(q) = self.num.div_exact(&self.den_extra) {
                self.num = q;
                self.den_extra = QLaurent::one();
            } else {
                // normalize: move q-power content and the lowest coefficient
                // of the leftover denominator into the numerator
                let lo = self.den_extra.min_exp().expect("nonzero");
                let c = self.den_extra.coeff(lo);
                let inv = Rat::one() / c;
                self.den_extra = self.den_extra.mul_q_pow(-lo).scale(&inv);
                self.num = self.num.mul_q_pow(-lo).scale(&inv);
            }
        }
    }

    fn den_lcm_parts(&self, other: &Self) -> (BTreeMap<i64, u32>, QLaurent, QLaurent, QLaurent) {
        // lcm of the factored parts; extras multiply (they are usually 1)
        let mut lcm = self.den_factors.clone();
        for (&a, &e) in &other.den_factors {
            let cur = lcm.entry(a).or_insert(0);
            *cur = (*cur).max(e);
        }
        // complement multiplier for each side: lcm/den_i
        let comp = |own: &BTreeMap<i64, u32>| {
            let mut m = QLaurent::one();
            for (&a, &e) in &lcm {
                let extra = e - own.get(&a).copied().unwrap_or(0);
                let f = cyclo_factor(a);
                for _ in 0..extra {
                    m = m.mul(&f);
                }
            }
            m
        };
        let c1 = comp(&self.den_factors).mul(&other.den_extra);
        let c2 = comp(&other.den_factors).mul(&self.den_extra);
        let extra = self.den_extra.mul(&other.den_extra);
        (lcm, c1, c2, extra)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lcm, c1, c2, extra) = self.den_lcm_parts(other);
        let num = self.num.mul(&c1).add(&other.num.mul(&c2));
        let mut f = QFrac { num, den_factors: lcm, den_extra: extra };
        f.reduce();
        f
    }

    pub fn neg(&self) -> Self {
        QFrac {
            num: self.num.neg(),
            den_factors: self.den_factors.clone(),
            den_extra: self.den_extra.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut den_factors = self.den_factors.clone();
        for (&a, &e) in &other.den_factors {
            *den_factors.entry(a).or_insert(0) += e;
        }
        let mut f = QFrac {
            num: self.num.mul(&other.num),
            den_factors,
            den_extra: self.den_extra.mul(&other.den_extra),
        };
        f.reduce();
        f
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverting zero q-fraction".into()));
        }
        let mut f = QFrac {
            num: self.den_full(),
            den_factors: BTreeMap::new(),
            den_extra: self.num.clone(),
        };
        f.reduce();
        Ok(f)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// The bar involution `q -> q^{-1}` extended to fractions:
    /// `bar(q^{2a}-1) = -q^{-2a}(q^{2a}-1)` keeps the factored shape.
    pub fn bar(&self) -> Self {
        let mut num = self.num.bar();
        let mut sign = false;
        let mut shift: i64 = 0;
        for (&a, &e) in &self.den_factors {
            if e % 2 == 1 {
                sign = !sign;
            }
            shift += 2 * a * i64::from(e);
        }
        num = num.mul_q_pow(shift);
        if sign {
            num = num.neg();
        }
        let mut f = QFrac {
            num,
            den_factors: self.den_factors.clone(),
            den_extra: self.den_extra.bar(),
        };
        f.reduce();
        f
    }

    pub fn eval(&self, q: &Rat) -> Result<Rat> {
        let d = self.den_full().eval(q)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero(format!(
                "denominator vanishes at q = {}",
                rat_to_string(q)
            )));
        }
        Ok(self.num.eval(q)? / d)
    }
}

impl PartialEq for QFrac {
    /// Value equality by cross-multiplication.
    fn eq(&self, other: &Self) -> bool {
        if self.num.is_zero() {
            return other.num.is_zero();
        }
        if std::ptr::eq(self, other) {
            return true;
        }
        // cancel the shared factored part before expanding
        let (_, c1, c2, _) = self.den_lcm_parts(other);
        self.num.mul(&c1) == other.num.mul(&c2)
    }
}

impl Eq for QFrac {}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&k, c)| {
                let qs = match k {
                    0 => String::new(),
                    1 => "q".into(),
                    _ => format!("q^{k}"),
                };
                match (qs.is_empty(), c.is_one()) {
                    (true, _) => rat_to_string(c),
                    (false, true) => qs,
                    (false, false) => {
                        if *c == -Rat::one() {
                            format!("-{qs}")
                        } else {
                            format!("{}*{}", rat_to_string(c), qs)
                        }
                    }
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        let mut first = true;
        for (&a, &e) in &self.den_factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "(q^{}-1)", 2 * a)?;
            } else {
                write!(f, "(q^{}-1)^{}", 2 * a, e)?;
            }
        }
        if !self.den_extra.is_one() {
            if !first {
                write!(f, " * ")?;
            }
            write!(f, "[{}]", self.den_extra)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for QFrac {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct F {
            num: Vec<(i64, String)>,
            den: Vec<(i64, String)>,
        }
        let enc = |p: &QLaurent| p.terms.iter().map(|(&k, c)| (k, rat_to_string(c))).collect();
        F { num: enc(&self.num), den: enc(&self.den_full()) }.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(k: i64) -> QLaurent {
        QLaurent::q_pow(k)
    }

    #[test]
    fn bar_negates_exponents() {
        // q + q^3 -> q^-1 + q^-3
        let a = qp(1).add(&qp(3));
        assert_eq!(a.bar(), qp(-1).add(&qp(-3)));
        // constants fixed
        assert_eq!(QLaurent::one().bar(), QLaurent::one());
    }

    #[test]
    fn bar_is_involutive_and_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                QLaurent::from_terms((0..rng.gen_range(0..5)).map(|_| {
                    (
                        rng.gen_range(-6..=6),
                        Rat::from_integer(rng.gen_range(-5..=5i64).into()),
                    )
                }))
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            assert_eq!(a.bar().bar(), a);
            assert_eq!(a.mul(&b).bar(), a.bar().mul(&b.bar()));
        }
    }

    #[test]
    fn laurent_exact_division() {
        // (q^4 - 1) / (q^2 - 1) = q^2 + 1
        let num = qp(4).sub(&qp(0));
        let den = qp(2).sub(&qp(0));
        assert_eq!(num.div_exact(&den).unwrap(), qp(2).add(&qp(0)));
        // not divisible
        assert!(qp(1).add(&qp(0)).div_exact(&den).is_none());
        // by a monomial with negative exponent
        let m = QLaurent::term(-3, Rat::from_integer(2.into()));
        let p = qp(1).add(&qp(0)).mul(&m);
        assert_eq!(p.div_exact(&m).unwrap(), qp(1).add(&qp(0)));
    }

    #[test]
    fn qfrac_reduction() {
        // (q^4 - 1) / (q^2 - 1) reduces to a Laurent polynomial
        let f = QFrac::with_factored_den(qp(4).sub(&qp(0)), [(1, 1)]);
        assert!(f.is_laurent());
        assert_eq!(f.as_laurent().unwrap(), qp(2).add(&qp(0)));
    }

    #[test]
    fn qfrac_field_ops() {
        // 1/(q^2-1) + 1/(1-q^2) = 0
        let a = QFrac::with_factored_den(QLaurent::one(), [(1, 1)]);
        let b = a.neg();
        assert!(a.add(&b).is_zero());
        let prod = a.mul(&a.inv().unwrap());
        assert!(prod.is_one());
    }

    #[test]
    fn qfrac_equality_by_cross_multiplication() {
        // q/(q^2-1) == q^-1/(1 - q^-2)
        let a = QFrac::new(qp(1), qp(2).sub(&qp(0))).unwrap();
        let b = QFrac::new(qp(-1), qp(0).sub(&qp(-2))).unwrap();
        assert_eq!(a, b);
        // and mixed factored/extra representations agree
        let c = QFrac::with_factored_den(qp(1), [(1, 1)]);
        assert_eq!(a, c);
    }

    #[test]
    fn qfrac_bar_on_factored_dens() {
        // bar(q/(q^2-1)) = q^-1/(q^-2-1) = -q/(q^2-1) * ... check involution
        let a = QFrac::with_factored_den(qp(1), [(1, 1), (2, 1)]);
        assert_eq!(a.bar().bar(), a);
        // bar at a sample point: f(1/q0) == bar(f)(q0)
        let q0 = Rat::new(3.into(), 2.into());
        let inv_q0 = Rat::new(2.into(), 3.into());
        assert_eq!(a.eval(&inv_q0).unwrap(), a.bar().eval(&q0).unwrap());
    }
}
