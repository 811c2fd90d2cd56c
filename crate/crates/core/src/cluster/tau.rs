use num::One;
use serde::Serialize;

use crate::algebra::{MultiLaurent, Rat, VarSet};
use crate::cluster::frac::FracLaurent;
use crate::cluster::seeds::{ASeed, XSeed};
use crate::quiver::{identity_permutation, MutationWord, Quiver};
use crate::{Error, Result};

/// The cyclic transformation word on a cycle of vertices: mutations along the
/// enumeration, a swap of the last two labels, then the mutations backwards.
///
/// `cycle` lists the vertex indices in any order (the transformation does not
/// depend on the enumeration); `n_total` is the ambient vertex count.
pub fn tau_word(cycle: &[usize], n_total: usize) -> MutationWord {
    assert!(cycle.len() >= 2, "cycle needs at least two vertices");
    let m = cycle.len();
    let mut w = MutationWord::empty();
    for &v in &cycle[..m - 1] {
        w.push_mutate(v);
    }
    let mut p = identity_permutation(n_total);
    p[cycle[m - 2]] = cycle[m - 1];
    p[cycle[m - 1]] = cycle[m - 2];
    w.push_permute(p);
    for &v in cycle[..m - 1].iter().rev() {
        w.push_mutate(v);
    }
    w
}

/// Satellite c-vectors: for each vertex `k` outside the cycle, the unique
/// vector with `eps_{k,i} = c_{k,i} - c_{k,i-1}` (cyclically) and minimum
/// entry zero. Errors when the zero-sum condition fails.
pub fn satellite_c_vectors(q: &Quiver, cycle: &[usize]) -> Result<Vec<(usize, Vec<i64>)>> {
    let incycle: std::collections::HashSet<usize> = cycle.iter().copied().collect();
    let n = cycle.len();
    let mut out = Vec::new();
    for k in 0..q.n {
        if incycle.contains(&k) {
            continue;
        }
        let sum: i64 = cycle.iter().map(|&i| q.eps[k][i]).sum();
        if sum != 0 {
            return Err(Error::Precondition(format!(
                "vertex {k} has nonzero total pairing {sum} with the cycle"
            )));
        }
        // c_i - c_{i-1} = eps_{k, cycle[i]}; fix c_0 = 0 then shift to min 0
        let mut c = vec![0i64; n];
        for i in 1..n {
            c[i] = c[i - 1] + q.eps[k][cycle[i]];
        }
        let min = *c.iter().min().expect("nonempty");
        for v in c.iter_mut() {
            *v -= min;
        }
        out.push((k, c));
    }
    Ok(out)
}

/// Closed forms of the cyclic transformation on a cycle `v_1..v_N` (indices
/// into the ambient quiver), as symbolic data in the initial variables.
struct ClosedForms {
    vars_x: VarSet,
    f: Vec<MultiLaurent>, // F_i, one per cycle position
}

impl ClosedForms {
    fn new(vars_x: VarSet, cycle: &[usize]) -> Self {
        let n = cycle.len();
        let mut f = Vec::with_capacity(n);
        for i in 0..n {
            // F_i = 1 + X_i + X_i X_{i-1} + ... + X_i ... X_{i-N+2}
            let mut acc = MultiLaurent::one(vars_x.clone());
            let mut run = MultiLaurent::one(vars_x.clone());
            for t in 0..n - 1 {
                let idx = cycle[(i + n - t) % n];
                run = run.mul(&MultiLaurent::variable(vars_x.clone(), idx));
                acc = acc.add(&run);
            }
            f.push(acc);
        }
        ClosedForms { vars_x, f }
    }

    /// `Y_i = X_i F_{i-1} / F_i` as a factored rational function.
    fn y(&self, cycle: &[usize], i: usize) -> Result<FracLaurent> {
        let n = cycle.len();
        let xi = FracLaurent::variable(self.vars_x.clone(), cycle[i]);
        let fi_prev = FracLaurent::from_poly(&self.f[(i + n - 1) % n])?;
        let fi = FracLaurent::from_poly(&self.f[i])?;
        Ok(xi.mul(&fi_prev).mul(&fi.inv()))
    }
}

/// Per-variable outcome of the closed-form verification.
#[derive(Clone, Debug, Serialize)]
pub struct TauMatch {
    pub variable: String,
    pub matched: bool,
}

/// Verification report for one quiver instance.
#[derive(Clone, Debug, Serialize)]
pub struct TauReport {
    pub cycle_len: usize,
    pub quiver_fixed: bool,
    pub a_matches: Vec<TauMatch>,
    pub x_matches: Vec<TauMatch>,
}

impl TauReport {
    pub fn all_matched(&self) -> bool {
        self.quiver_fixed
            && self.a_matches.iter().all(|m| m.matched)
            && self.x_matches.iter().all(|m| m.matched)
    }
}

/// Replays the cyclic transformation on the X- and A-seeds of `q` and
/// compares every variable against the closed forms:
/// `A_j -> A_j W` on the cycle (others fixed), with
/// `W = sum_i Q_i/(A_i A_{i+1})`, `Q_i = prod_k A_k^{c_{k,i}}`, and
/// `X_j -> X_j / (Y_j Y_{j-1})` on the cycle, `X_j prod_i Y_i^{c_{j,i}}` off
/// it, with `Y_i = X_i F_{i-1}/F_i`.
///
/// `exact` compares symbolically; otherwise equality is decided by exact
/// evaluation at `eval_points` random positive rational points.
pub fn verify_tau_closed_form(
    q: &Quiver,
    cycle: &[usize],
    exact: bool,
    eval_points: &[Vec<Rat>],
) -> Result<TauReport> {
    let n = cycle.len();
    let sats = satellite_c_vectors(q, cycle)?;
    let word = tau_word(cycle, q.n);

    let q_after = q.apply_word(&word)?;
    let quiver_fixed = q_after.eps == q.eps && q_after.frozen == q.frozen;

    // ---- A-part ----
    let a_seed = ASeed::initial(q.clone()).apply_word(&word)?;
    let vars_a = a_seed.vars().clone();
    // W = sum_i Q_i / (A_i A_{i+1})
    let mut w_poly = MultiLaurent::zero(vars_a.clone());
    for i in 0..n {
        let mut exps = vec![0i64; q.n];
        for (k, c) in &sats {
            exps[*k] += c[i];
        }
        exps[cycle[i]] -= 1;
        exps[cycle[(i + 1) % n]] -= 1;
        w_poly = w_poly.add(&MultiLaurent::monomial(vars_a.clone(), exps, Rat::one()));
    }
    let mut a_matches = Vec::new();
    for j in 0..q.n {
        let expected = if cycle.contains(&j) {
            MultiLaurent::variable(vars_a.clone(), j).mul(&w_poly)
        } else {
            MultiLaurent::variable(vars_a.clone(), j)
        };
        a_matches.push(TauMatch {
            variable: format!("A{}", j + 1),
            matched: a_seed.a[j] == expected,
        });
    }

    // ---- X-part ----
    let x_seed = XSeed::initial(q.clone()).apply_word(&word)?;
    let vars_x = x_seed.x[0].vars().clone();
    let forms = ClosedForms::new(vars_x.clone(), cycle);
    let mut x_matches = Vec::new();
    for j in 0..q.n {
        let expected = if let Some(i) = cycle.iter().position(|&v| v == j) {
            // X_j / (Y_i Y_{i-1}) in cycle position i
            let yi = forms.y(cycle, i)?;
            let yprev = forms.y(cycle, (i + n - 1) % n)?;
            FracLaurent::variable(vars_x.clone(), j)
                .mul(&yi.inv())
                .mul(&yprev.inv())
        } else {
            let c = &sats.iter().find(|(k, _)| *k == j).expect("satellite").1;
            let mut acc = FracLaurent::variable(vars_x.clone(), j);
            for i in 0..n {
                if c[i] != 0 {
                    acc = acc.mul(&forms.y(cycle, i)?.pow(c[i]));
                }
            }
            acc
        };
        let matched = if exact {
            x_seed.x[j].eq_exact(&expected)
        } else {
            eval_points.iter().try_fold(true, |ok, pt| -> Result<bool> {
                Ok(ok && x_seed.x[j].eval(pt)? == expected.eval(pt)?)
            })?
        };
        x_matches.push(TauMatch { variable: format!("X{}", j + 1), matched });
    }

    Ok(TauReport { cycle_len: n, quiver_fixed, a_matches, x_matches })
}
