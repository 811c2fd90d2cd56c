//! Tropical points, C-matrices, sign coherence, and the decision procedures
//! built on them: reddening detection, DT certification, permutation
//! detection, and the contravariant-functor inverse law.

use serde::{Deserialize, Serialize};

use crate::algebra::Int;
use crate::quiver::{check_permutation, MutationWord, Quiver, Step};
use crate::{Error, Result};

/// Integral tropical point in a fixed chart: one coordinate per unfrozen
/// vertex of the ambient quiver.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TropPoint {
    pub coords: Vec<Int>,
}

impl TropPoint {
    pub fn zero(n: usize) -> Self {
        TropPoint { coords: vec![0; n] }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut coords = vec![0; n];
        coords[i] = 1;
        TropPoint { coords }
    }
}

/// Tropicalized cluster Poisson mutation at unfrozen vertex `k`:
/// `x_k' = -x_k`, `x_i' = x_i - eps_ik * min(0, -sgn(eps_ik) x_k)`.
///
/// `q` must be the quiver of the chart `x` lives in. Coordinates are indexed
/// by the unfrozen vertices of `q` in increasing order.
pub fn trop_mutate(x: &TropPoint, q: &Quiver, k: usize) -> Result<TropPoint> {
    let unfrozen = q.unfrozen();
    if x.coords.len() != unfrozen.len() {
        return Err(Error::Dimension(format!(
            "tropical point has {} coordinates, quiver has {} unfrozen vertices",
            x.coords.len(),
            unfrozen.len()
        )));
    }
    let kpos = unfrozen
        .iter()
        .position(|&v| v == k)
        .ok_or(Error::FrozenMutation(k))?;
    let xk = x.coords[kpos];
    let mut out = x.coords.clone();
    for (ipos, &iv) in unfrozen.iter().enumerate() {
        if ipos == kpos {
            out[ipos] = -xk;
        } else {
            let e = q.eps[iv][k];
            out[ipos] = x.coords[ipos] - e * std::cmp::min(0, -e.signum() * xk);
        }
    }
    Ok(TropPoint { coords: out })
}

/// Applies a whole word to a tropical point, tracking the quiver alongside.
pub fn trop_apply_word(x: &TropPoint, q: &Quiver, w: &MutationWord) -> Result<TropPoint> {
    let unfrozen = q.unfrozen();
    let mut cur = x.clone();
    let mut quiver = q.clone();
    for step in &w.steps {
        match step {
            Step::Mutate(k) => {
                cur = trop_mutate(&cur, &quiver, *k)?;
                quiver = quiver.mutate(*k)?;
            }
            Step::Permute(p) => {
                quiver = quiver.permute(p)?;
                // coordinates follow the relabeling of unfrozen vertices
                let new_pos = unfrozen_positions(&unfrozen, p);
                let mut out = vec![0i64; cur.coords.len()];
                for (ipos, &np) in new_pos.iter().enumerate() {
                    out[np] = cur.coords[ipos];
                }
                cur = TropPoint { coords: out };
            }
        }
    }
    Ok(cur)
}

/// For a permutation `p` of all vertices, returns for each unfrozen position
/// its new position in the unfrozen ordering.
fn unfrozen_positions(unfrozen: &[usize], p: &[usize]) -> Vec<usize> {
    let images: Vec<usize> = unfrozen.iter().map(|&v| p[v]).collect();
    let mut sorted: Vec<usize> = images.clone();
    sorted.sort_unstable();
    images
        .iter()
        .map(|im| sorted.binary_search(im).expect("image present"))
        .collect()
}

/// Tropicalization of the inversion map: coordinatewise negation, valued in
/// the opposite quiver's chart.
pub fn i_x_tropical(x: &TropPoint) -> TropPoint {
    TropPoint { coords: x.coords.iter().map(|&c| -c).collect() }
}

/// Integer matrix tracking the initial basic positive laminations along a
/// word: `entries[i][j]` is the i-th coordinate of the image of `l_j^+` in
/// the current chart. Every row is sign-coherent and `det = +-1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CMatrix {
    pub entries: Vec<Vec<Int>>,
}

/// Canonical signs, one per `Mutate` step of a word.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SignSequence {
    pub signs: Vec<Int>,
}

impl CMatrix {
    pub fn identity(n: usize) -> Self {
        CMatrix {
            entries: (0..n)
                .map(|i| (0..n).map(|j| Int::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn is_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == Int::from(i == j)))
    }

    pub fn is_neg_identity(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == -Int::from(i == j)))
    }

    /// Row sign of a sign-coherent row: +1 when all entries >= 0 (and some
    /// positive), -1 when all <= 0. Errors on a mixed row, which would be an
    /// implementation bug by the sign-coherence theorem.
    pub fn row_sign(&self, i: usize) -> Result<Int> {
        let row = &self.entries[i];
        let has_pos = row.iter().any(|&x| x > 0);
        let has_neg = row.iter().any(|&x| x < 0);
        match (has_pos, has_neg) {
            (true, true) => Err(Error::InternalFault(format!(
                "sign-coherence violated in row {i}: {row:?}"
            ))),
            (false, true) => Ok(-1),
            _ => Ok(1),
        }
    }

    pub fn assert_sign_coherent(&self) -> Result<()> {
        for i in 0..self.n() {
            self.row_sign(i)?;
        }
        Ok(())
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n();
        let mut out = vec![vec![0 as Int; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s: Int = 0;
                for k in 0..n {
                    s = s
                        .checked_add(
                            self.entries[i][k]
                                .checked_mul(other.entries[k][j])
                                .expect("C-matrix product overflow"),
                        )
                        .expect("C-matrix product overflow");
                }
                out[i][j] = s;
            }
        }
        CMatrix { entries: out }
    }

    /// `C eps C^T` (for the check that C determines the quiver class).
    /// Returns `None` when an intermediate would not fit the wide integers.
    pub fn conjugate_form(&self, eps: &[Vec<Int>]) -> Option<Vec<Vec<Int>>> {
        let n = self.n();
        let mut tmp = vec![vec![0 as Int; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s: Int = 0;
                for k in 0..n {
                    s = s.checked_add(self.entries[i][k].checked_mul(eps[k][j])?)?;
                }
                tmp[i][j] = s;
            }
        }
        let mut out = vec![vec![0 as Int; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s: Int = 0;
                for k in 0..n {
                    s = s.checked_add(tmp[i][k].checked_mul(self.entries[j][k])?)?;
                }
                out[i][j] = s;
            }
        }
        Some(out)
    }
}

/// Replays a word from the identity C-matrix, recording the canonical sign
/// sequence. Permute steps permute the rows (the current-chart labels);
/// columns, which index the initial laminations, stay put.
///
/// Returns the final C-matrix, the sign sequence, and the final quiver.
pub fn cmatrix_of_word_full(
    q: &Quiver,
    w: &MutationWord,
) -> Result<(CMatrix, SignSequence, Quiver)> {
    let unfrozen = q.unfrozen();
    let n = unfrozen.len();
    let pos_of: std::collections::HashMap<usize, usize> =
        unfrozen.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let mut c = CMatrix::identity(n);
    let mut signs = Vec::new();
    let mut quiver = q.clone();
    for step in &w.steps {
        match step {
            Step::Mutate(k) => {
                let kpos = *pos_of
                    .get(k)
                    .filter(|_| !quiver.is_frozen(*k))
                    .ok_or(Error::FrozenMutation(*k))?;
                let sign = c.row_sign(kpos)?;
                signs.push(sign);
                // c_i' = c_i + [sgn(c_k) eps_ik]_+ c_k for i != k; c_k' = -c_k
                let ck = c.entries[kpos].clone();
                for (ipos, &iv) in unfrozen.iter().enumerate() {
                    if ipos == kpos {
                        continue;
                    }
                    let coef = std::cmp::max(0, sign * quiver.eps[iv][*k]);
                    if coef != 0 {
                        for j in 0..n {
                            c.entries[ipos][j] = coef
                                .checked_mul(ck[j])
                                .and_then(|p| c.entries[ipos][j].checked_add(p))
                                .ok_or_else(|| {
                                    Error::InternalFault("C-matrix entry overflow".into())
                                })?;
                        }
                    }
                }
                for j in 0..n {
                    c.entries[kpos][j] = -ck[j];
                }
                quiver = quiver.mutate(*k)?;
                c.assert_sign_coherent()?;
            }
            Step::Permute(p) => {
                check_permutation(p, quiver.n)?;
                let new_pos = unfrozen_positions(&unfrozen, p);
                let mut out = vec![vec![0 as Int; n]; n];
                for ipos in 0..n {
                    out[new_pos[ipos]] = c.entries[ipos].clone();
                }
                c = CMatrix { entries: out };
                quiver = quiver.permute(p)?;
            }
        }
        // The C-matrix must keep determining the quiver class:
        // eps_current = C eps_initial C^T on unfrozen vertices. The recheck
        // is skipped when the wide arithmetic would overflow.
        #[cfg(debug_assertions)]
        if let Some(cf) = c.conjugate_form(&restrict(&q.eps, &unfrozen)) {
            debug_assert_eq!(
                cf,
                restrict(&quiver.eps, &unfrozen),
                "C eps C^T must track the mutated quiver"
            );
        }
    }
    Ok((c, SignSequence { signs }, quiver))
}

/// Restriction of a matrix to a subset of indices.
pub fn restrict(m: &[Vec<Int>], idx: &[usize]) -> Vec<Vec<Int>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| m[i][j]).collect())
        .collect()
}

/// C-matrix and canonical signs of a word.
pub fn cmatrix_of_word(q: &Quiver, w: &MutationWord) -> Result<(CMatrix, SignSequence)> {
    cmatrix_of_word_full(q, w).map(|(c, s, _)| (c, s))
}

/// Per-mutation dilogarithm data of a word: for each `Mutate` step, the
/// positive-cone vector `f_s` (the signed row of the running C-matrix at the
/// mutated vertex) together with the canonical sign, plus the final C-matrix.
///
/// The rows of the final C-matrix express the final basis in the initial one,
/// which is the monomial part of the transformation.
pub fn word_dilog_data(
    q: &Quiver,
    w: &MutationWord,
) -> Result<(Vec<(Vec<Int>, Int)>, CMatrix)> {
    let unfrozen = q.unfrozen();
    let n = unfrozen.len();
    let pos_of: std::collections::HashMap<usize, usize> =
        unfrozen.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let mut c = CMatrix::identity(n);
    let mut quiver = q.clone();
    let mut data = Vec::new();
    for step in &w.steps {
        match step {
            Step::Mutate(k) => {
                let kpos = *pos_of
                    .get(k)
                    .filter(|_| !quiver.is_frozen(*k))
                    .ok_or(Error::FrozenMutation(*k))?;
                let sign = c.row_sign(kpos)?;
                let f: Vec<Int> = c.entries[kpos].iter().map(|&x| sign * x).collect();
                data.push((f, sign));
                let ck = c.entries[kpos].clone();
                for (ipos, &iv) in unfrozen.iter().enumerate() {
                    if ipos == kpos {
                        continue;
                    }
                    let coef = std::cmp::max(0, sign * quiver.eps[iv][*k]);
                    if coef != 0 {
                        for j in 0..n {
                            c.entries[ipos][j] = coef
                                .checked_mul(ck[j])
                                .and_then(|p| c.entries[ipos][j].checked_add(p))
                                .ok_or_else(|| {
                                    Error::InternalFault("C-matrix entry overflow".into())
                                })?;
                        }
                    }
                }
                for j in 0..n {
                    c.entries[kpos][j] = -ck[j];
                }
                quiver = quiver.mutate(*k)?;
            }
            Step::Permute(p) => {
                let new_pos = unfrozen_positions(&unfrozen, p);
                let mut out = vec![vec![0 as Int; n]; n];
                for ipos in 0..n {
                    out[new_pos[ipos]] = c.entries[ipos].clone();
                }
                c = CMatrix { entries: out };
                quiver = quiver.permute(p)?;
            }
        }
    }
    Ok((data, c))
}

/// True iff every entry of the word's C-matrix is non-positive.
pub fn is_reddening(q: &Quiver, w: &MutationWord) -> Result<bool> {
    let (c, _) = cmatrix_of_word(q, w)?;
    Ok(c.entries.iter().all(|row| row.iter().all(|&x| x <= 0)))
}

/// If `C_w = -P` for a permutation matrix `P`, returns the permutation `pi`
/// (over unfrozen positions) such that appending `Permute(pi)` to the word
/// yields `C = -Id`; the completed word is then a cluster DT-transformation.
pub fn extract_dt_permutation(q: &Quiver, w: &MutationWord) -> Result<Option<Vec<usize>>> {
    let (c, _) = cmatrix_of_word(q, w)?;
    neg_permutation_of(&c)
}

fn neg_permutation_of(c: &CMatrix) -> Result<Option<Vec<usize>>> {
    let n = c.n();
    // row i must equal -e_{t(i)} for a bijection t; the fixing permutation
    // sends position i to t(i).
    let mut perm = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for i in 0..n {
        let row = &c.entries[i];
        let mut target = None;
        for (j, &v) in row.iter().enumerate() {
            match v {
                0 => {}
                -1 if target.is_none() => target = Some(j),
                _ => return Ok(None),
            }
        }
        let Some(j) = target else { return Ok(None) };
        if hit[j] {
            return Ok(None);
        }
        hit[j] = true;
        perm[i] = j;
    }
    Ok(Some(perm))
}

/// If all C entries are non-negative the word is a relabeling; returns the
/// permutation identifying it (over unfrozen positions), else `None`.
pub fn is_permutation_word(q: &Quiver, w: &MutationWord) -> Result<Option<Vec<usize>>> {
    let (c, _) = cmatrix_of_word(q, w)?;
    let n = c.n();
    if !c.entries.iter().all(|r| r.iter().all(|&x| x >= 0)) {
        return Ok(None);
    }
    // Sign-coherent, invertible and non-negative forces a permutation matrix.
    // Row i of the C-matrix of `Permute(pi)` is the unit vector at pi^{-1}(i),
    // so the row scan recovers the inverse of the relabeling.
    let mut perm = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for i in 0..n {
        let mut target = None;
        for (j, &v) in c.entries[i].iter().enumerate() {
            match v {
                0 => {}
                1 if target.is_none() => target = Some(j),
                _ => return Ok(None),
            }
        }
        let Some(j) = target else { return Ok(None) };
        if hit[j] {
            return Ok(None);
        }
        hit[j] = true;
        perm[i] = j;
    }
    Ok(Some(crate::quiver::invert_permutation(&perm)))
}

/// The inverse law for the contravariant functor: the C-matrix of the
/// reversed word, replayed from the opposite of the word's final quiver,
/// multiplied by the C-matrix of the word itself, is the identity.
pub fn f_inverse_check(q: &Quiver, w: &MutationWord) -> Result<bool> {
    let (c, _, q_end) = cmatrix_of_word_full(q, w)?;
    let (c_rev, _) = cmatrix_of_word(&q_end.opposite(), &w.inverse())?;
    Ok(c_rev.mul(&c).is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{a2_quiver, cyclic_quiver};

    fn sigma1() -> MutationWord {
        MutationWord::new(vec![Step::Mutate(0), Step::Mutate(1)])
    }

    fn sigma2() -> MutationWord {
        MutationWord::new(vec![
            Step::Mutate(1),
            Step::Mutate(0),
            Step::Mutate(1),
            Step::Permute(vec![1, 0]),
        ])
    }

    #[test]
    fn trop_mutate_examples() {
        let q = a2_quiver();
        // x = (1,0), k = 0 -> (-1, 0)
        let x = TropPoint { coords: vec![1, 0] };
        assert_eq!(trop_mutate(&x, &q, 0).unwrap().coords, vec![-1, 0]);
        // zero is fixed
        let z = TropPoint::zero(2);
        assert_eq!(trop_mutate(&z, &q, 0).unwrap().coords, vec![0, 0]);
        // x = (0,1), k = 0 -> (0,1)
        let y = TropPoint { coords: vec![0, 1] };
        assert_eq!(trop_mutate(&y, &q, 0).unwrap().coords, vec![0, 1]);
    }

    #[test]
    fn cmatrix_sigma1_is_neg_identity() {
        let (c, s) = cmatrix_of_word(&a2_quiver(), &sigma1()).unwrap();
        assert!(c.is_neg_identity());
        assert_eq!(s.signs, vec![1, 1]);
    }

    #[test]
    fn cmatrix_sigma2_is_neg_identity_signs_111() {
        let (c, s) = cmatrix_of_word(&a2_quiver(), &sigma2()).unwrap();
        assert!(c.is_neg_identity());
        assert_eq!(s.signs, vec![1, 1, 1]);
    }

    #[test]
    fn cmatrix_empty_word_is_identity() {
        let (c, s) = cmatrix_of_word(&a2_quiver(), &MutationWord::empty()).unwrap();
        assert!(c.is_identity());
        assert!(s.signs.is_empty());
    }

    #[test]
    fn reddening_detection() {
        let q = a2_quiver();
        assert!(is_reddening(&q, &sigma1()).unwrap());
        assert!(!is_reddening(&q, &MutationWord::empty()).unwrap());
        assert!(!is_reddening(&q, &MutationWord::mutate(0)).unwrap());
    }

    #[test]
    fn dt_permutation_extraction() {
        let q = a2_quiver();
        assert_eq!(
            extract_dt_permutation(&q, &sigma1()).unwrap(),
            Some(vec![0, 1])
        );
        assert_eq!(extract_dt_permutation(&q, &MutationWord::mutate(0)).unwrap(), None);
    }

    #[test]
    fn permutation_word_detection() {
        let q = cyclic_quiver(3);
        let p = vec![2, 0, 1];
        assert_eq!(
            is_permutation_word(&q, &MutationWord::permute(p.clone())).unwrap(),
            Some(p)
        );
        // double mutation is the identity permutation
        let w = MutationWord::new(vec![Step::Mutate(0), Step::Mutate(0)]);
        assert_eq!(is_permutation_word(&q, &w).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(is_permutation_word(&q, &MutationWord::mutate(0)).unwrap(), None);
    }

    #[test]
    fn f_inverse_on_examples() {
        let q = a2_quiver();
        assert!(f_inverse_check(&q, &sigma1()).unwrap());
        assert!(f_inverse_check(&q, &MutationWord::empty()).unwrap());
    }

    #[test]
    fn i_x_tropical_is_negation() {
        let x = TropPoint { coords: vec![1, -2, 0] };
        assert_eq!(i_x_tropical(&x).coords, vec![-1, 2, 0]);
        assert_eq!(i_x_tropical(&i_x_tropical(&x)), x);
        let z = TropPoint::zero(3);
        assert_eq!(i_x_tropical(&z).coords, vec![0, 0, 0]);
    }

    #[test]
    fn trop_agrees_with_cmatrix_columns() {
        // the column update of the C-matrix is the tropical mutation of each
        // basic lamination
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rng.gen_range(2..=4);
            let mut eps = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..i {
                    let v = rng.gen_range(-2..=2);
                    eps[i][j] = v;
                    eps[j][i] = -v;
                }
            }
            let q = Quiver::new(eps, vec![]).unwrap();
            let mut w = MutationWord::empty();
            for _ in 0..rng.gen_range(1..=8) {
                w.push_mutate(rng.gen_range(0..n));
            }
            let (c, _) = cmatrix_of_word(&q, &w).unwrap();
            for j in 0..n {
                let l = TropPoint::basis(n, j);
                let img = trop_apply_word(&l, &q, &w).unwrap();
                let col: Vec<i64> = (0..n).map(|i| c.entries[i][j]).collect();
                assert_eq!(img.coords, col);
            }
        }
    }
}
