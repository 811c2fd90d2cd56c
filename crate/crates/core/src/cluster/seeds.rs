use num::One;

use crate::algebra::{varset, MultiLaurent, Rat, VarSet};
use crate::cluster::frac::FracLaurent;
use crate::quiver::{MutationWord, Quiver, Step};
use crate::{Error, Result};

/// Cluster Poisson seed: a quiver with one rational function per vertex,
/// expressed in the initial X-coordinates.
#[derive(Clone, Debug)]
pub struct XSeed {
    pub quiver: Quiver,
    pub x: Vec<FracLaurent>,
}

impl XSeed {
    /// Initial seed: `x_i` is the i-th coordinate variable.
    pub fn initial(quiver: Quiver) -> Self {
        let names: Vec<String> = (1..=quiver.n).map(|i| format!("X{i}")).collect();
        let vars = varset(names);
        let x = (0..quiver.n)
            .map(|i| FracLaurent::variable(vars.clone(), i))
            .collect();
        XSeed { quiver, x }
    }

    /// Cluster Poisson mutation at unfrozen vertex `k`:
    /// `x_k' = x_k^{-1}`, `x_i' = x_i (1 + x_k^{-sgn(eps_ik)})^{-eps_ik}`.
    pub fn mutate(&self, k: usize) -> Result<XSeed> {
        if k >= self.quiver.n {
            return Err(Error::IndexOutOfRange(k, self.quiver.n));
        }
        if self.quiver.is_frozen(k) {
            return Err(Error::FrozenMutation(k));
        }
        let xk = &self.x[k];
        let mut out = Vec::with_capacity(self.quiver.n);
        for i in 0..self.quiver.n {
            if i == k {
                out.push(xk.inv());
                continue;
            }
            let e = i64::try_from(self.quiver.eps[i][k]).expect("seed quiver entry fits i64");
            if e == 0 {
                out.push(self.x[i].clone());
                continue;
            }
            let factor = xk.pow(-e.signum()).one_plus()?.pow(-e);
            out.push(self.x[i].mul(&factor));
        }
        Ok(XSeed { quiver: self.quiver.mutate(k)?, x: out })
    }

    pub fn permute(&self, p: &[usize]) -> Result<XSeed> {
        let quiver = self.quiver.permute(p)?;
        let mut x = self.x.clone();
        for (i, xi) in self.x.iter().enumerate() {
            x[p[i]] = xi.clone();
        }
        Ok(XSeed { quiver, x })
    }

    pub fn apply_word(&self, w: &MutationWord) -> Result<XSeed> {
        let mut s = self.clone();
        for step in &w.steps {
            s = match step {
                Step::Mutate(k) => s.mutate(*k)?,
                Step::Permute(p) => s.permute(p)?,
            };
        }
        Ok(s)
    }
}

/// Numeric replay of the cluster Poisson mutation: same formulas evaluated
/// on exact rational values, used as the randomized-equality backend.
pub fn x_apply_word_values(q: &Quiver, w: &MutationWord, values: &[Rat]) -> Result<Vec<Rat>> {
    if values.len() != q.n {
        return Err(Error::Dimension("one value per vertex required".into()));
    }
    let mut quiver = q.clone();
    let mut v = values.to_vec();
    for step in &w.steps {
        match step {
            Step::Mutate(k) => {
                let k = *k;
                if quiver.is_frozen(k) {
                    return Err(Error::FrozenMutation(k));
                }
                let xk = v[k].clone();
                if xk == Rat::from_integer(0.into()) {
                    return Err(Error::DivisionByZero("x_k = 0 during replay".into()));
                }
                let mut nv = v.clone();
                nv[k] = Rat::one() / xk.clone();
                for i in 0..quiver.n {
                    if i == k {
                        continue;
                    }
                    let e = i64::try_from(quiver.eps[i][k]).expect("seed quiver entry fits i64");
                    if e == 0 {
                        continue;
                    }
                    let base = if e > 0 {
                        Rat::one() + Rat::one() / xk.clone()
                    } else {
                        Rat::one() + xk.clone()
                    };
                    nv[i] = v[i].clone() * crate::algebra::rat_pow(&base, -e);
                }
                v = nv;
                quiver = quiver.mutate(k)?;
            }
            Step::Permute(p) => {
                let mut nv = v.clone();
                for (i, val) in v.iter().enumerate() {
                    nv[p[i]] = val.clone();
                }
                v = nv;
                quiver = quiver.permute(p)?;
            }
        }
    }
    Ok(v)
}

/// Cluster K2 seed: a quiver with one Laurent polynomial per vertex (frozen
/// vertices included), expressed in the initial A-coordinates.
#[derive(Clone, Debug)]
pub struct ASeed {
    pub quiver: Quiver,
    pub a: Vec<MultiLaurent>,
}

impl ASeed {
    pub fn initial(quiver: Quiver) -> Self {
        let names: Vec<String> = (1..=quiver.n).map(|i| format!("A{i}")).collect();
        Self::with_vars(quiver, varset(names))
    }

    pub fn with_vars(quiver: Quiver, vars: VarSet) -> Self {
        assert_eq!(vars.len(), quiver.n);
        let a = (0..quiver.n)
            .map(|i| MultiLaurent::variable(vars.clone(), i))
            .collect();
        ASeed { quiver, a }
    }

    pub fn vars(&self) -> &VarSet {
        self.a[0].vars()
    }

    /// The exchange binomial at `k`: products over outgoing and incoming
    /// arrows of the current variables.
    fn exchange(&self, k: usize) -> MultiLaurent {
        let vars = self.vars().clone();
        let mut plus = MultiLaurent::one(vars.clone());
        let mut minus = MultiLaurent::one(vars);
        for j in 0..self.quiver.n {
            let e = self.quiver.eps[k][j];
            if e > 0 {
                for _ in 0..e {
                    plus = plus.mul(&self.a[j]);
                }
            } else if e < 0 {
                for _ in 0..(-e) {
                    minus = minus.mul(&self.a[j]);
                }
            }
        }
        plus.add(&minus)
    }

    /// Cluster mutation at `k`: the exchange relation
    /// `A_k' A_k = prod_{eps_kj > 0} A_j^{eps_kj} + prod_{eps_kj < 0} A_j^{-eps_kj}`.
    /// The division must be exact; a failure is the Laurent-phenomenon trap.
    pub fn mutate(&self, k: usize) -> Result<ASeed> {
        if k >= self.quiver.n {
            return Err(Error::IndexOutOfRange(k, self.quiver.n));
        }
        if self.quiver.is_frozen(k) {
            return Err(Error::FrozenMutation(k));
        }
        let ex = self.exchange(k);
        let new_ak = ex.div_exact(&self.a[k]).map_err(|_| {
            Error::NonLaurent(format!("Laurent phenomenon violated mutating vertex {k}"))
        })?;
        let mut a = self.a.clone();
        a[k] = new_ak;
        Ok(ASeed { quiver: self.quiver.mutate(k)?, a })
    }

    pub fn permute(&self, p: &[usize]) -> Result<ASeed> {
        let quiver = self.quiver.permute(p)?;
        let mut a = self.a.clone();
        for (i, ai) in self.a.iter().enumerate() {
            a[p[i]] = ai.clone();
        }
        Ok(ASeed { quiver, a })
    }

    pub fn apply_word(&self, w: &MutationWord) -> Result<ASeed> {
        let mut s = self.clone();
        for step in &w.steps {
            s = match step {
                Step::Mutate(k) => s.mutate(*k)?,
                Step::Permute(p) => s.permute(p)?,
            };
        }
        Ok(s)
    }
}

/// Numeric replay of the A-mutation dynamics on exact rational values.
pub fn a_apply_word_values(q: &Quiver, w: &MutationWord, values: &[Rat]) -> Result<Vec<Rat>> {
    if values.len() != q.n {
        return Err(Error::Dimension("one value per vertex required".into()));
    }
    let mut quiver = q.clone();
    let mut v = values.to_vec();
    for step in &w.steps {
        match step {
            Step::Mutate(k) => {
                let k = *k;
                if quiver.is_frozen(k) {
                    return Err(Error::FrozenMutation(k));
                }
                let mut plus = Rat::one();
                let mut minus = Rat::one();
                for j in 0..quiver.n {
                    let e = i64::try_from(quiver.eps[k][j]).expect("seed quiver entry fits i64");
                    if e > 0 {
                        plus *= crate::algebra::rat_pow(&v[j], e);
                    } else if e < 0 {
                        minus *= crate::algebra::rat_pow(&v[j], -e);
                    }
                }
                if v[k] == Rat::from_integer(0.into()) {
                    return Err(Error::DivisionByZero("a_k = 0 during replay".into()));
                }
                v[k] = (plus + minus) / v[k].clone();
                quiver = quiver.mutate(k)?;
            }
            Step::Permute(p) => {
                let mut nv = v.clone();
                for (i, val) in v.iter().enumerate() {
                    nv[p[i]] = val.clone();
                }
                v = nv;
                quiver = quiver.permute(p)?;
            }
        }
    }
    Ok(v)
}

/// Seed with principal coefficients: cluster variables `A_i` plus one frozen
/// coefficient variable `y_i` per vertex.
///
/// Realized as an ordinary A-seed on the extended quiver with
/// `eps~ = [[eps, Id], [-Id, 0]]`: one frozen vertex per mutable vertex, with
/// `eps~_{k, y_k} = +1`, which places the coefficient monomial on the
/// `A_k^+` side of the exchange binomial. The evolving frozen block of the
/// extended quiver carries the coefficient monomials, so they mutate
/// monomially as the dual-basis vectors do.
#[derive(Clone, Debug)]
pub struct APrinSeed {
    inner: ASeed,
    n: usize,
}

impl APrinSeed {
    pub fn initial(quiver: Quiver) -> Self {
        let n = quiver.n;
        let mut names: Vec<String> = (1..=n).map(|i| format!("A{i}")).collect();
        names.extend((1..=n).map(|i| format!("y{i}")));
        let mut eps = vec![vec![0 as crate::algebra::Int; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                eps[i][j] = quiver.eps[i][j];
            }
            eps[i][n + i] = 1;
            eps[n + i][i] = -1;
        }
        let mut frozen: Vec<usize> = quiver.frozen.clone();
        frozen.extend(n..2 * n);
        let ext = Quiver::new(eps, frozen).expect("valid extended quiver");
        let inner = ASeed::with_vars(ext, varset(names));
        APrinSeed { inner, n }
    }

    /// The underlying (extended) quiver; the first `n` vertices are the
    /// original ones.
    pub fn quiver(&self) -> &Quiver {
        &self.inner.quiver
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cluster_variable(&self, i: usize) -> &MultiLaurent {
        &self.inner.a[i]
    }

    /// The coefficient monomial attached to vertex `k`: exponents of the
    /// initial `y_j` read off the frozen block of the extended quiver.
    pub fn y_exponents(&self, k: usize) -> Vec<i64> {
        (0..self.n)
            .map(|j| {
                i64::try_from(self.inner.quiver.eps[k][self.n + j])
                    .expect("coefficient exponent fits i64")
            })
            .collect()
    }

    pub fn mutate(&self, k: usize) -> Result<APrinSeed> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange(k, self.n));
        }
        Ok(APrinSeed { inner: self.inner.mutate(k)?, n: self.n })
    }

    pub fn permute(&self, p: &[usize]) -> Result<APrinSeed> {
        if p.len() != self.n {
            return Err(Error::InvalidPermutation(format!(
                "permutation length {} != {}",
                p.len(),
                self.n
            )));
        }
        let mut ext = p.to_vec();
        ext.extend(p.iter().map(|&i| self.n + i));
        Ok(APrinSeed { inner: self.inner.permute(&ext)?, n: self.n })
    }

    pub fn apply_word(&self, w: &MutationWord) -> Result<APrinSeed> {
        let mut s = self.clone();
        for step in &w.steps {
            s = match step {
                Step::Mutate(k) => s.mutate(*k)?,
                Step::Permute(p) => s.permute(p)?,
            };
        }
        Ok(s)
    }

    /// F-polynomial at vertex `i`: the cluster variable with all `A_j := 1`,
    /// a polynomial in the coefficient variables.
    pub fn f_polynomial(&self, i: usize) -> MultiLaurent {
        let n = self.n;
        let yvars = varset((1..=n).map(|j| format!("y{j}")));
        let mut out = MultiLaurent::zero(yvars.clone());
        for (e, c) in self.inner.a[i].terms() {
            let yexp: Vec<i64> = e[n..].to_vec();
            out = out.add(&MultiLaurent::monomial(yvars.clone(), yexp, c.clone()));
        }
        out
    }

    /// Specializing all coefficients to 1 recovers the plain A-seed entry.
    pub fn specialize_y_one(&self, i: usize) -> MultiLaurent {
        let n = self.n;
        let avars = varset((1..=n).map(|j| format!("A{j}")));
        let mut out = MultiLaurent::zero(avars.clone());
        for (e, c) in self.inner.a[i].terms() {
            let aexp: Vec<i64> = e[..n].to_vec();
            out = out.add(&MultiLaurent::monomial(avars.clone(), aexp, c.clone()));
        }
        out
    }
}
