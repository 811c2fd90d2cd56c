use num::Zero;

use crate::algebra::{pairing, qtorus_mul, QFrac, QLaurent, QTorusElt, Rat, SkewForm};
use crate::{Error, Result};

/// Primitive direction of a lattice vector (all entries divided by the gcd),
/// with the sign fixed so the first nonzero entry is positive.
fn primitive_dir(v: &[i64]) -> Option<(Vec<i64>, i64)> {
    let mut g: i64 = 0;
    for &x in v {
        g = num::integer::gcd(g, x);
    }
    if g == 0 {
        return None;
    }
    let mut d: Vec<i64> = v.iter().map(|x| x / g).collect();
    let mut scale = g;
    if let Some(&first) = d.iter().find(|&&x| x != 0) {
        if first < 0 {
            for x in d.iter_mut() {
                *x = -*x;
            }
            scale = -scale;
        }
    }
    Some((d, scale))
}

/// Laurent polynomial supported on the line `Z*dir`, coefficient of
/// `X_{k*dir}` keyed by `k`. The subalgebra it spans is commutative.
#[derive(Clone, Debug, PartialEq)]
pub struct LinePoly {
    pub dir: Vec<i64>,
    pub coeffs: Vec<(i64, QFrac)>,
}

impl LinePoly {
    fn one(dir: Vec<i64>) -> Self {
        LinePoly { dir, coeffs: vec![(0, QFrac::one())] }
    }

    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].0 == 0 && self.coeffs[0].1.is_one()
    }

    fn from_torus(dir: Vec<i64>, e: &QTorusElt) -> Option<Self> {
        let mut coeffs = Vec::new();
        for (v, c) in e.sorted_terms() {
            if v.iter().all(|&x| x == 0) {
                coeffs.push((0, c));
                continue;
            }
            let (d, k) = primitive_dir(&v)?;
            if d != dir {
                return None;
            }
            coeffs.push((k, c));
        }
        coeffs.sort_by_key(|&(k, _)| k);
        Some(LinePoly { dir, coeffs })
    }

    fn to_torus(&self, rank: usize) -> QTorusElt {
        let mut e = QTorusElt::zero(rank);
        for (k, c) in &self.coeffs {
            let v: Vec<i64> = self.dir.iter().map(|x| x * k).collect();
            e.add_term(v, c.clone());
        }
        e
    }

    /// The factor `(1 + q^{c} X_{t*dir})`.
    fn binomial(dir: Vec<i64>, t: i64, c: i64) -> Self {
        let mut coeffs = vec![(0, QFrac::one()), (t, QFrac::from_laurent(QLaurent::q_pow(c)))];
        coeffs.sort_by_key(|&(k, _)| k);
        LinePoly { dir, coeffs }
    }

    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dir, other.dir);
        let mut acc: std::collections::BTreeMap<i64, QFrac> = Default::default();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                // X_{k1 d} X_{k2 d} = X_{(k1+k2) d} exactly, the line is isotropic
                let e = acc.entry(k1 + k2).or_insert_with(QFrac::zero);
                *e = e.add(&c1.mul(c2));
            }
        }
        LinePoly {
            dir: self.dir.clone(),
            coeffs: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Commutes the line polynomial across a monomial: `L * X_m = X_m * L'`
    /// with every coefficient of `X_{k*dir}` multiplied by `q^{2k(dir, m)}`.
    fn shift_past(&self, form: &SkewForm, m: &[i64]) -> Self {
        let p = pairing(form, &self.dir, m);
        LinePoly {
            dir: self.dir.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| {
                    (*k, c.mul(&QFrac::from_laurent(QLaurent::q_pow(2 * k * p))))
                })
                .collect(),
        }
    }

    // ---- univariate field arithmetic over Q(q) for gcd/lcm ----

    fn poly_vec(&self) -> (i64, Vec<QFrac>) {
        let lo = self.coeffs.first().map(|&(k, _)| k).unwrap_or(0);
        let hi = self.coeffs.last().map(|&(k, _)| k).unwrap_or(0);
        let mut v = vec![QFrac::zero(); (hi - lo + 1) as usize];
        for (k, c) in &self.coeffs {
            v[(k - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_poly_vec(dir: Vec<i64>, lo: i64, v: Vec<QFrac>) -> Self {
        LinePoly {
            dir,
            coeffs: v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, c))
                .collect(),
        }
    }

    /// Exact division in the commutative line algebra; `None` if inexact.
    fn div_exact(&self, den: &Self) -> Option<Self> {
        assert_eq!(self.dir, den.dir);
        if den.coeffs.is_empty() {
            return None;
        }
        if self.coeffs.is_empty() {
            return Some(LinePoly { dir: self.dir.clone(), coeffs: vec![] });
        }
        let (nlo, nv) = self.poly_vec();
        let (dlo, dv) = den.poly_vec();
        let dd = dv.len() - 1;
        let mut rem = nv;
        let mut quo = vec![QFrac::zero(); rem.len()];
        loop {
            // degree of remainder
            let dr = match rem.iter().rposition(|c| !c.is_zero()) {
                None => break,
                Some(d) => d,
            };
            if dr < dd {
                return None;
            }
            let f = rem[dr].div(&dv[dd]).ok()?;
            let shift = dr - dd;
            quo[shift] = f.clone();
            for i in 0..=dd {
                let t = dv[i].mul(&f);
                rem[i + shift] = rem[i + shift].sub(&t);
            }
        }
        Some(Self::from_poly_vec(self.dir.clone(), nlo - dlo, quo))
    }
}

/// Element of the quantum torus fraction field kept as an ordered product
/// `num * d_1^{-1} * d_2^{-1} * ...` where every denominator is supported on
/// a single lattice line. Quantum mutation produces exactly this shape.
#[derive(Clone, Debug)]
pub struct TorusRat {
    pub num: QTorusElt,
    pub dens: Vec<LinePoly>,
}

impl TorusRat {
    pub fn from_elt(num: QTorusElt) -> Self {
        TorusRat { num, dens: Vec::new() }
    }

    pub fn monomial(v: Vec<i64>, c: QFrac) -> Self {
        Self::from_elt(QTorusElt::monomial(v, c))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn is_laurent(&self) -> bool {
        self.dens.iter().all(|d| d.is_one())
    }

    pub fn as_torus_elt(&self) -> Result<QTorusElt> {
        if self.is_laurent() {
            return Ok(self.num.clone());
        }
        Err(Error::NonLaurent(
            "quantum torus element has a nontrivial denominator".into(),
        ))
    }

    /// Simplifies: merges same-line adjacent denominators, cancels them into
    /// the numerator when it is line-supported, drops units.
    fn normalize(&mut self, form: &SkewForm) {
        // merge adjacent same-line denominators
        let mut merged: Vec<LinePoly> = Vec::new();
        for d in self.dens.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.dir == d.dir {
                    *last = last.mul(&d);
                    continue;
                }
            }
            merged.push(d);
        }
        // cancel into the numerator where possible: num * d1^{-1} with num
        // divisible by d1 in the line algebra after commuting d1 leftwards
        let mut dens = Vec::new();
        for d in merged.into_iter() {
            if d.is_one() {
                continue;
            }
            // attempt: num = h * d  (with h line-supported or general)
            if let Some(nl) = LinePoly::from_torus(d.dir.clone(), &self.num) {
                if let Some(q) = nl.div_exact(&d) {
                    self.num = q.to_torus(self.num.rank());
                    continue;
                }
            }
            dens.push(d);
        }
        let _ = form;
        self.dens = dens;
    }

    /// Right-multiplies by the inverse of a line polynomial.
    fn push_den(&mut self, d: LinePoly, form: &SkewForm) {
        self.dens.push(d);
        self.normalize(form);
    }

    /// Multiplies two elements: `(N A^{-1} ...)(M B^{-1} ...)`. Denominators
    /// of `self` are commuted rightwards past the terms of `other.num`, which
    /// requires a common line denominator per term; this exists because line
    /// polynomials stay line polynomials under monomial shifts.
    pub fn mul(&self, other: &Self, form: &SkewForm) -> Result<Self> {
        let out = self.clone();
        // move each denominator of `out` past other.num:
        // D^{-1} * M = sum_w  c_w X_w * (D shifted by w)^{-1}; the common
        // denominator over the line is the lcm, here the product divided by
        // gcd -- for simplicity use per-term exact division against the
        // shifted D, falling back to the product form.
        let mut num = out.num.clone();
        let mut new_dens: Vec<LinePoly> = Vec::new();
        for d in out.dens.iter() {
            // D^{-1} * other.num: if other.num is supported on the same line,
            // commute exactly (line algebra is commutative after shifts only
            // if pairing vanishes; handle the general monomial case term by
            // term below).
            new_dens.push(d.clone());
        }
        // Multiply numerators: num * other.num requires moving dens past
        // other.num first. We handle the common cases:
        // 1. no denominators: plain product;
        // 2. denominators all on lines with zero pairing against every term
        //    of other.num: they commute up to coefficient shifts.
        if new_dens.is_empty() {
            num = qtorus_mul(&num, &other.num, form)?;
            let mut r = TorusRat { num, dens: other.dens.clone() };
            r.normalize(form);
            return Ok(r);
        }
        // check whether other.num is a single monomial: then all dens shift
        if other.num.num_terms() == 1 {
            let (w, c) = other.num.terms().next().expect("one term");
            let shifted: Vec<LinePoly> =
                new_dens.iter().map(|d| d.shift_past(form, w)).collect();
            let m = QTorusElt::monomial(w.clone(), c.clone());
            let num2 = qtorus_mul(&num, &m, form)?;
            let mut dens = shifted;
            dens.extend(other.dens.iter().cloned());
            let mut r = TorusRat { num: num2, dens };
            r.normalize(form);
            return Ok(r);
        }
        // general sum on a line commuting with all dens
        for d in &new_dens {
            for (w, _) in other.num.terms() {
                if pairing(form, &d.dir, w) != 0 {
                    return Err(Error::NonLaurent(
                        "cannot normalize product: denominator does not commute past the factor"
                            .into(),
                    ));
                }
            }
        }
        let num2 = qtorus_mul(&num, &other.num, form)?;
        let mut dens = new_dens;
        dens.extend(other.dens.iter().cloned());
        let mut r = TorusRat { num: num2, dens };
        r.normalize(form);
        Ok(r)
    }

    /// Value equality; decidable when, after normalization, both sides carry
    /// denominators on one common line.
    pub fn eq_rat(&self, other: &Self, form: &SkewForm) -> Result<bool> {
        let mut a = self.clone();
        let mut b = other.clone();
        a.normalize(form);
        b.normalize(form);
        if a.dens.is_empty() && b.dens.is_empty() {
            return Ok(a.num == b.num);
        }
        let mut dir: Option<Vec<i64>> = None;
        for d in a.dens.iter().chain(b.dens.iter()) {
            match &dir {
                None => dir = Some(d.dir.clone()),
                Some(g) if *g == d.dir => {}
                _ => {
                    return Err(Error::NonLaurent(
                        "equality undecidable: denominators on different lines".into(),
                    ))
                }
            }
        }
        let dir = dir.expect("at least one denominator");
        let prod = |dens: &[LinePoly]| -> LinePoly {
            let mut acc = LinePoly::one(dir.clone());
            for d in dens {
                acc = acc.mul(d);
            }
            acc
        };
        let da = prod(&a.dens).to_torus(a.num.rank());
        let db = prod(&b.dens).to_torus(b.num.rank());
        // a.num * da^{-1} == b.num * db^{-1}  <=>  a.num * (da^{-1} db) == b.num
        // and da, db commute (same line):     <=>  a.num * db == b.num * da
        let lhs = qtorus_mul(&a.num, &db, form)?;
        let rhs = qtorus_mul(&b.num, &da, form)?;
        Ok(lhs == rhs)
    }

    /// Classical specialization: evaluates at `q := q0` with commuting
    /// variables assigned the given values.
    pub fn eval_classical(&self, q0: &Rat, point: &[Rat]) -> Result<Rat> {
        let eval_elt = |e: &QTorusElt| -> Result<Rat> {
            let mut acc = Rat::zero();
            for (v, c) in e.terms() {
                let mut t = c.eval(q0)?;
                for (x, &k) in point.iter().zip(v) {
                    t *= crate::algebra::rat_pow(x, k);
                }
                acc += t;
            }
            Ok(acc)
        };
        let mut acc = eval_elt(&self.num)?;
        for d in &self.dens {
            let dv = eval_elt(&d.to_torus(self.num.rank()))?;
            if dv.is_zero() {
                return Err(Error::DivisionByZero("denominator vanishes".into()));
            }
            acc /= dv;
        }
        Ok(acc)
    }
}

/// Exact conjugation by the quantum dilogarithm, made rational by the
/// difference relation: for a monomial `X_w` with `c = (v, w)`,
/// `Ad_{Psi(X_v)^{sign}}(X_w) = X_w * prod_{a=1..|c|}(1 + q^{sgn(c)(2a-1)} X_v)^{sgn(c) sign}`,
/// extended to an algebra homomorphism.
pub fn ad_dilog_rat(
    v: &[i64],
    sign: i64,
    arg: &TorusRat,
    form: &SkewForm,
) -> Result<TorusRat> {
    assert!(sign == 1 || sign == -1);
    let rank = arg.rank();
    // Every existing denominator must commute with X_v, else the shape breaks.
    for d in &arg.dens {
        if pairing(form, v, &d.dir) != 0 {
            return Err(Error::NonLaurent(
                "dilogarithm conjugation mixes with an existing denominator line".into(),
            ));
        }
    }
    let (vdir, vscale) = match primitive_dir(v) {
        Some(x) => x,
        None => return Ok(arg.clone()), // X_0: conjugation is trivial
    };

    // Per term X_w: chain of |c| binomials in the v-line with exponent
    // sgn(c) * sign. Collect numerator expansions over a common denominator.
    struct TermData {
        w: Vec<i64>,
        coeff: QFrac,
        chain: LinePoly,
        inverted: bool,
    }
    let mut terms = Vec::new();
    for (w, cw) in arg.num.sorted_terms() {
        let c = pairing(form, v, &w);
        let s = c.signum();
        let mut chain = LinePoly::one(vdir.clone());
        for a in 1..=c.abs() {
            chain = chain.mul(&LinePoly::binomial(vdir.clone(), vscale, s * (2 * a - 1)));
        }
        let e = s * sign;
        terms.push(TermData { w, coeff: cw, chain, inverted: e < 0 });
    }
    // common denominator: product of distinct inverted chains (they are
    // pairwise comparable: chains for larger |c| contain the smaller ones)
    let mut den = LinePoly::one(vdir.clone());
    for t in &terms {
        if t.inverted {
            // den := lcm(den, t.chain); chains divide each other along
            // the nesting order, so use exact division to decide
            if den.div_exact(&t.chain).is_none() {
                if let Some(q) = t.chain.div_exact(&den) {
                    den = den.mul(&q);
                } else {
                    // fall back to the full product
                    den = den.mul(&t.chain);
                }
            }
        }
    }
    let mut num = QTorusElt::zero(rank);
    for t in &terms {
        // multiplier on the right of X_w, inside the commutative line algebra
        let line_mult = if t.inverted {
            den.div_exact(&t.chain)
                .expect("common denominator divisible by each chain")
        } else {
            t.chain.mul(&den)
        };
        let m = QTorusElt::monomial(t.w.clone(), t.coeff.clone());
        let contrib = qtorus_mul(&m, &line_mult.to_torus(rank), form)?;
        num = num.add(&contrib);
    }
    let mut out = TorusRat { num, dens: Vec::new() };
    if !den.is_one() {
        out.push_den(den, form);
    } else {
        out.normalize(form);
    }
    // carry over the original denominators (they commute with everything the
    // conjugation introduced)
    for d in &arg.dens {
        out.push_den(d.clone(), form);
    }
    Ok(out)
}

/// Conjugation on plain torus elements, for callers that guarantee a Laurent
/// result (quantum mutation does, on the appropriate generators).
pub fn ad_dilog(v: &[i64], sign: i64, m: &QTorusElt, form: &SkewForm) -> Result<TorusRat> {
    ad_dilog_rat(v, sign, &TorusRat::from_elt(m.clone()), form)
}
