//! Quivers as skew-symmetric integer matrices with frozen vertices,
//! mutation words, and the lattice-basis half-reflections.

use serde::{Deserialize, Serialize};

use crate::algebra::Int;
use crate::{Error, Result};

/// A quiver: a labeled vertex set with a skew-symmetric integer matrix and a
/// frozen subset. Vertices may carry opaque tags (surface coordinates).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Quiver {
    pub n: usize,
    #[serde(default)]
    pub frozen: Vec<usize>,
    pub eps: Vec<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Quiver {
    pub fn new(eps: Vec<Vec<Int>>, frozen: Vec<usize>) -> Result<Self> {
        let n = eps.len();
        let q = Quiver { n, frozen, eps, labels: None };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps.len() != self.n || self.eps.iter().any(|r| r.len() != self.n) {
            return Err(Error::Dimension(format!("eps must be {0}x{0}", self.n)));
        }
        for i in 0..self.n {
            if self.eps[i][i] != 0 {
                return Err(Error::InternalFault(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if self.eps[i][j] != -self.eps[j][i] {
                    return Err(Error::InternalFault(format!(
                        "eps not skew-symmetric at ({i},{j})"
                    )));
                }
            }
        }
        for &f in &self.frozen {
            if f >= self.n {
                return Err(Error::IndexOutOfRange(f, self.n));
            }
        }
        Ok(())
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.frozen.contains(&k)
    }

    /// Indices of unfrozen vertices, in increasing order.
    pub fn unfrozen(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.is_frozen(*i)).collect()
    }

    fn check_mutable(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange(k, self.n));
        }
        if self.is_frozen(k) {
            return Err(Error::FrozenMutation(k));
        }
        Ok(())
    }

    /// Quiver mutation at an unfrozen vertex `k`: the Fomin-Zelevinsky rule
    /// for the epsilon-matrix. Involutive.
    pub fn mutate(&self, k: usize) -> Result<Quiver> {
        self.check_mutable(k)?;
        let n = self.n;
        let e = &self.eps;
        let mut out = vec![vec![0 as Int; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = if i == k || j == k {
                    -e[i][j]
                } else {
                    let step = e[i][k]
                        .checked_mul(std::cmp::min(0, -e[i][k].signum() * e[k][j]))
                        .and_then(|p| e[i][j].checked_sub(p));
                    step.ok_or_else(|| {
                        Error::InternalFault("epsilon-matrix entry exceeds the wide integer range".into())
                    })?
                };
            }
        }
        let q = Quiver { n, frozen: self.frozen.clone(), eps: out, labels: self.labels.clone() };
        debug_assert!(q.validate().is_ok());
        Ok(q)
    }

    /// Relabels vertex `i` as `perm[i]`. Frozen vertices must map to frozen
    /// vertices.
    pub fn permute(&self, perm: &[usize]) -> Result<Quiver> {
        check_permutation(perm, self.n)?;
        for &f in &self.frozen {
            if !self.frozen.contains(&perm[f]) {
                return Err(Error::InvalidPermutation(format!(
                    "permutation moves frozen vertex {f} to unfrozen {}",
                    perm[f]
                )));
            }
        }
        let n = self.n;
        let mut eps = vec![vec![0 as Int; n]; n];
        for i in 0..n {
            for j in 0..n {
                eps[perm[i]][perm[j]] = self.eps[i][j];
            }
        }
        let labels = self.labels.as_ref().map(|ls| {
            let mut out = vec![String::new(); n];
            for i in 0..n {
                out[perm[i]] = ls[i].clone();
            }
            out
        });
        Ok(Quiver { n, frozen: self.frozen.clone(), eps, labels })
    }

    /// The opposite quiver: reverses the sign of the form, keeps frozen set.
    pub fn opposite(&self) -> Quiver {
        let eps = self.eps.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Quiver { n: self.n, frozen: self.frozen.clone(), eps, labels: self.labels.clone() }
    }

    /// Left-to-right application of a mutation word.
    pub fn apply_word(&self, w: &MutationWord) -> Result<Quiver> {
        let mut q = self.clone();
        for step in &w.steps {
            q = match step {
                Step::Mutate(k) => q.mutate(*k)?,
                Step::Permute(p) => q.permute(p)?,
            };
        }
        Ok(q)
    }

    /// Equality of epsilon-matrices restricted to pairs with at least one
    /// unfrozen vertex; comparisons in this mode ignore frozen-frozen arrows.
    pub fn eq_ignoring_frozen_arrows(&self, other: &Quiver) -> bool {
        if self.n != other.n || self.frozen != other.frozen {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if self.is_frozen(i) && self.is_frozen(j) {
                    continue;
                }
                if self.eps[i][j] != other.eps[i][j] {
                    return false;
                }
            }
        }
        true
    }
}

/// One step of a cluster transformation word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Step {
    /// `{"m": k}`: mutate at unfrozen vertex k.
    Mutate(usize),
    /// `{"p": [...]}`: relabel vertex i as p[i].
    Permute(Vec<usize>),
}

// The untagged serde form above would be ambiguous; use explicit wrappers.
mod step_serde {
    use super::Step;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct M {
        m: usize,
    }
    #[derive(Serialize, Deserialize)]
    struct P {
        p: Vec<usize>,
    }

    pub fn serialize<S: Serializer>(step: &Step, s: S) -> Result<S::Ok, S::Error> {
        match step {
            Step::Mutate(k) => M { m: *k }.serialize(s),
            Step::Permute(perm) => P { p: perm.clone() }.serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Step, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        if let Some(m) = v.get("m") {
            let k = m.as_u64().ok_or_else(|| D::Error::custom("bad mutate step"))?;
            return Ok(Step::Mutate(k as usize));
        }
        if let Some(p) = v.get("p") {
            let perm: Vec<usize> = serde_json::from_value(p.clone())
                .map_err(|e| D::Error::custom(format!("bad permute step: {e}")))?;
            return Ok(Step::Permute(perm));
        }
        Err(D::Error::custom("step must be {\"m\":k} or {\"p\":[...]}"))
    }
}

/// Ordered list of steps; the paper's cluster transformations as data.
/// The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MutationWord {
    pub steps: Vec<Step>,
}

impl Serialize for MutationWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.steps.len()))?;
        for st in &self.steps {
            seq.serialize_element(&StepWrap(st))?;
        }
        seq.end()
    }
}

struct StepWrap<'a>(&'a Step);
impl Serialize for StepWrap<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        step_serde::serialize(self.0, s)
    }
}

impl<'de> Deserialize<'de> for MutationWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = MutationWord;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "a list of word steps")
            }
            fn visit_seq<A: serde::de::SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut steps = Vec::new();
                while let Some(v) = seq.next_element::<serde_json::Value>()? {
                    let step = step_serde::deserialize(v).map_err(serde::de::Error::custom)?;
                    steps.push(step);
                }
                Ok(MutationWord { steps })
            }
        }
        d.deserialize_seq(V)
    }
}

impl MutationWord {
    pub fn new(steps: Vec<Step>) -> Self {
        MutationWord { steps }
    }

    pub fn empty() -> Self {
        MutationWord { steps: Vec::new() }
    }

    pub fn mutate(k: usize) -> Self {
        MutationWord { steps: vec![Step::Mutate(k)] }
    }

    pub fn permute(p: Vec<usize>) -> Self {
        MutationWord { steps: vec![Step::Permute(p)] }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn num_mutations(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Mutate(_))).count()
    }

    /// Concatenation: `self` applied first, then `other`.
    pub fn then(&self, other: &MutationWord) -> MutationWord {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        MutationWord { steps }
    }

    pub fn push_mutate(&mut self, k: usize) {
        self.steps.push(Step::Mutate(k));
    }

    pub fn push_permute(&mut self, p: Vec<usize>) {
        self.steps.push(Step::Permute(p));
    }

    /// The inverse word: steps reversed, permutations inverted. Mutations are
    /// involutive so they invert to themselves at the same index.
    pub fn inverse(&self) -> MutationWord {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| match s {
                Step::Mutate(k) => Step::Mutate(*k),
                Step::Permute(p) => Step::Permute(invert_permutation(p)),
            })
            .collect();
        MutationWord { steps }
    }

    /// Validates the word against a quiver: mutation indices must stay
    /// unfrozen and permutations must preserve the frozen set.
    pub fn validate_for(&self, q: &Quiver) -> Result<()> {
        let mut cur = q.clone();
        for step in &self.steps {
            cur = match step {
                Step::Mutate(k) => cur.mutate(*k)?,
                Step::Permute(p) => cur.permute(p)?,
            };
        }
        Ok(())
    }
}

pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} != {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

pub fn identity_permutation(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn compose_permutations(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| then[i]).collect()
}

/// Integer matrix whose rows express the current basis `{e_i'}` in the
/// initial basis `{e_i}`. Initialized to the identity; determinant stays
/// `+-1` under half-reflections.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeBasis {
    pub rows: Vec<Vec<Int>>,
}

impl LatticeBasis {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| Int::from(i == j)).collect())
            .collect();
        LatticeBasis { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Pairing `(e_i', e_k')` computed in the initial form transported by the
    /// basis.
    pub fn pairing(&self, form: &[Vec<Int>], i: usize, k: usize) -> Int {
        crate::algebra::pairing(&form.to_vec(), &self.rows[i], &self.rows[k])
    }

    /// Half-reflection of the basis at `k` with the given sign:
    /// `e_k' = -e_k`, `e_i' = e_i + [sign*(e_i,e_k)]_+ e_k` for `i != k`.
    pub fn mutate(&self, form: &[Vec<Int>], k: usize, sign: Int) -> LatticeBasis {
        assert!(sign == 1 || sign == -1, "sign must be +-1");
        let n = self.n();
        let mut rows = self.rows.clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let c = std::cmp::max(0, sign * self.pairing(form, i, k));
            if c != 0 {
                for j in 0..n {
                    rows[i][j] += c * self.rows[k][j];
                }
            }
        }
        for j in 0..n {
            rows[k][j] = -self.rows[k][j];
        }
        LatticeBasis { rows }
    }

    /// The twist `t_k = mu_k o mu_k`: `e_i -> e_i + (e_i, e_k) e_k`.
    pub fn twist(&self, form: &[Vec<Int>], k: usize) -> LatticeBasis {
        self.mutate(form, k, 1).mutate(form, k, 1)
    }

    pub fn permute(&self, perm: &[usize]) -> LatticeBasis {
        let n = self.n();
        let mut rows = vec![vec![0; n]; n];
        for i in 0..n {
            rows[perm[i]] = self.rows[i].clone();
        }
        LatticeBasis { rows }
    }

    pub fn det(&self) -> Int {
        // Fraction-free Gaussian elimination on a copy; sizes here are small.
        let n = self.n();
        let mut m: Vec<Vec<i128>> = self.rows.clone();
        let mut det: i128 = 1;
        let mut denom: i128 = 1;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r][col] != 0);
            let Some(p) = pivot else { return 0 };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let pv = m[col][col];
            for r in col + 1..n {
                let f = m[r][col];
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    m[r][c] = m[r][c] * pv - m[col][c] * f;
                }
                denom *= pv;
            }
            det *= pv;
        }
        det / denom
    }
}

/// Checks the braid relation for the twists `t_j`, `t_k` on the lattice
/// basis: commuting when `(e_j, e_k) = 0`, braiding when `(e_j, e_k) = +-1`.
pub fn braid_check(q: &Quiver, j: usize, k: usize) -> Result<bool> {
    if j >= q.n || k >= q.n {
        return Err(Error::IndexOutOfRange(j.max(k), q.n));
    }
    if q.is_frozen(j) || q.is_frozen(k) {
        return Err(Error::FrozenMutation(if q.is_frozen(j) { j } else { k }));
    }
    let p = q.eps[j][k];
    if p.abs() >= 2 {
        return Err(Error::BraidUnsupported(p.abs()));
    }
    let id = LatticeBasis::identity(q.n);
    let form = &q.eps;
    let tj_tk = id.twist(form, k).twist(form, j);
    let tk_tj = id.twist(form, j).twist(form, k);
    if p == 0 {
        Ok(tj_tk == tk_tj)
    } else {
        let tjk = id.twist(form, j).twist(form, k).twist(form, j);
        let tkj = id.twist(form, k).twist(form, j).twist(form, k);
        Ok(tjk == tkj)
    }
}

/// The A2 quiver: two vertices with `(e_1, e_2) = 1`.
pub fn a2_quiver() -> Quiver {
    Quiver::new(vec![vec![0, 1], vec![-1, 0]], vec![]).expect("valid")
}

/// The cyclic quiver `q_N`: no arrows for N = 2; for N > 2 a clockwise
/// N-cycle with `eps_{i,i+1} = 1` (indices mod N, zero-based).
pub fn cyclic_quiver(n: usize) -> Quiver {
    assert!(n >= 2);
    let mut eps = vec![vec![0 as Int; n]; n];
    if n > 2 {
        for i in 0..n {
            let j = (i + 1) % n;
            eps[i][j] = 1;
            eps[j][i] = -1;
        }
    }
    Quiver::new(eps, vec![]).expect("valid")
}
