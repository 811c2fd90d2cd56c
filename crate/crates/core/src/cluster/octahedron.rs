use std::collections::HashMap;

use num::{One, Zero};

use crate::algebra::{varset, MultiLaurent, QLaurent, Rat, VarSet};
use crate::{Error, Result};

/// Lattice points of the triangle of size `m` minus its corners; the
/// coordinate system for one face of functions.
pub fn gamma_m(m: i64) -> Vec<(i64, i64, i64)> {
    let mut v = Vec::new();
    for a in 0..=m {
        for b in 0..=(m - a) {
            let c = m - a - b;
            if (a == m && b == 0) || (b == m && a == 0) || (c == m && a == 0 && b == 0) {
                continue;
            }
            v.push((a, b, c));
        }
    }
    v
}

/// Variable names for the face symbols, in the `gamma_m` order.
pub fn face_var_names(m: i64) -> Vec<String> {
    gamma_m(m)
        .iter()
        .map(|(a, b, c)| format!("D{a}_{b}_{c}"))
        .collect()
}

/// The full table of layered functions produced by the octahedral recursion,
/// with the base face as free symbols.
pub struct OctahedralTable {
    pub m: i64,
    pub vars: VarSet,
    /// keyed by (a, b, c, s) with a+b+c = m-s
    pub delta: HashMap<(i64, i64, i64, i64), MultiLaurent>,
}

impl OctahedralTable {
    /// Dual values read off the layered table.
    pub fn dual(&self, a: i64, b: i64, c: i64) -> &MultiLaurent {
        &self.delta[&(c, 0, a, b)]
    }
}

/// Computes every layered function as a Laurent polynomial in the base-face
/// symbols, layer by layer.
///
/// Layer `s = 0` consists of the free symbols (with the corner convention
/// that all three corner values equal 1). The edges of each deeper layer
/// come from the boundary product identities; interior points come from the
/// octahedral relation, solved with exact Laurent division.
pub fn octahedral_expand(m: i64) -> Result<OctahedralTable> {
    if m < 2 {
        return Err(Error::Precondition("octahedral recursion needs m >= 2".into()));
    }
    let pts = gamma_m(m);
    let vars = varset(face_var_names(m));
    let mut delta: HashMap<(i64, i64, i64, i64), MultiLaurent> = HashMap::new();

    // face symbol lookup, with corners = 1
    let sym = |a: i64, b: i64, c: i64, vars: &VarSet| -> MultiLaurent {
        if (a == m && b == 0) || (b == m && a == 0) || (a == 0 && b == 0) {
            return MultiLaurent::one(vars.clone());
        }
        let idx = pts
            .iter()
            .position(|&(x, y, z)| (x, y, z) == (a, b, c))
            .expect("point in gamma_m");
        MultiLaurent::variable(vars.clone(), idx)
    };

    // layer 0
    for a in 0..=m {
        for b in 0..=(m - a) {
            let c = m - a - b;
            delta.insert((a, b, c, 0), sym(a, b, c, &vars));
        }
    }

    for s in 1..=m {
        let size = m - s; // a + b + c = size on this layer
        // edges first: a = 0 and c = 0
        for t in 0..=size {
            // a = 0: Delta^s_{0, t, size - t} = D_{s, m-s, 0} * D_{0, t, m-t}
            let v = sym(s, m - s, 0, &vars).mul(&sym(0, t, m - t, &vars));
            delta.insert((0, t, size - t, s), v);
            // c = 0: Delta^s_{size - t, t, 0} = D_{m-t, t, 0} * D_{0, m-s, s}
            let v = sym(m - t, t, 0, &vars).mul(&sym(0, m - s, s, &vars));
            delta.insert((size - t, t, 0, s), v);
        }
        // interior by increasing a + c (both recursion inputs have smaller a+c)
        let mut interior: Vec<(i64, i64, i64)> = Vec::new();
        for a in 1..=size {
            for c in 1..=(size - a) {
                let b = size - a - c;
                interior.push((a, b, c));
            }
        }
        interior.sort_by_key(|&(a, _, c)| a + c);
        for (a, b, c) in interior {
            // Delta^{s-1}_{a,b+1,c} * U = Delta^{s-1}_{a+1,b,c} * Delta^s_{a-1,b+1,c}
            //                            + Delta^{s-1}_{a,b,c+1} * Delta^s_{a,b+1,c-1}
            let lhs_factor = delta[&(a, b + 1, c, s - 1)].clone();
            let t1 = delta[&(a + 1, b, c, s - 1)].mul(&delta[&(a - 1, b + 1, c, s)]);
            let t2 = delta[&(a, b, c + 1, s - 1)].mul(&delta[&(a, b + 1, c - 1, s)]);
            let u = t1.add(&t2).div_exact(&lhs_factor).map_err(|_| {
                Error::InternalFault(format!(
                    "octahedral recursion produced a non-Laurent value at ({a},{b},{c},{s})"
                ))
            })?;
            delta.insert((a, b, c, s), u);
        }
    }
    Ok(OctahedralTable { m, vars, delta })
}

/// Value-level octahedral recursion at a rational point on the base face
/// (one value per `gamma_m` symbol, positive values recommended). Returns the
/// dual values `(a,b,c) -> Delta*`, for randomized comparison at sizes where
/// the symbolic table is large.
pub fn octahedral_dual_values(
    m: i64,
    face: &HashMap<(i64, i64, i64), Rat>,
) -> Result<HashMap<(i64, i64, i64), Rat>> {
    if m < 2 {
        return Err(Error::Precondition("octahedral recursion needs m >= 2".into()));
    }
    let val = |a: i64, b: i64, c: i64| -> Result<Rat> {
        if (a == m && b == 0) || (b == m && a == 0) || (a == 0 && b == 0) {
            return Ok(Rat::one());
        }
        face.get(&(a, b, c))
            .cloned()
            .ok_or_else(|| Error::Config(format!("missing face value at ({a},{b},{c})")))
    };
    let mut delta: HashMap<(i64, i64, i64, i64), Rat> = HashMap::new();
    for a in 0..=m {
        for b in 0..=(m - a) {
            let c = m - a - b;
            delta.insert((a, b, c, 0), val(a, b, c)?);
        }
    }
    for s in 1..=m {
        let size = m - s;
        for t in 0..=size {
            delta.insert((0, t, size - t, s), val(s, m - s, 0)? * val(0, t, m - t)?);
            delta.insert((size - t, t, 0, s), val(m - t, t, 0)? * val(0, m - s, s)?);
        }
        let mut interior: Vec<(i64, i64, i64)> = Vec::new();
        for a in 1..=size {
            for c in 1..=(size - a) {
                interior.push((a, size - a - c, c));
            }
        }
        interior.sort_by_key(|&(a, _, c)| a + c);
        for (a, b, c) in interior {
            let lhs = delta[&(a, b + 1, c, s - 1)].clone();
            if lhs.is_zero() {
                return Err(Error::DivisionByZero(
                    "octahedral denominator vanished at the evaluation point".into(),
                ));
            }
            let t1 = delta[&(a + 1, b, c, s - 1)].clone() * delta[&(a - 1, b + 1, c, s)].clone();
            let t2 = delta[&(a, b, c + 1, s - 1)].clone() * delta[&(a, b + 1, c - 1, s)].clone();
            delta.insert((a, b, c, s), (t1 + t2) / lhs);
        }
    }
    let mut out = HashMap::new();
    for (a, b, c) in gamma_m(m) {
        out.insert((a, b, c), delta[&(c, 0, a, b)].clone());
    }
    Ok(out)
}

/// Tropical valuation check of the ratio identity
/// `R1 R2 = (R6 + R4) / (R5^{-1} + R3^{-1})`:
/// substituting `R_i = t^{r_i}` and taking lowest t-degrees must reproduce
/// `r1 = min(r6, r4) + max(r5, r3) - r2`.
pub fn schutzenberger_trop_check(m: i64, trials: u64, seed: u64) -> Result<bool> {
    use rand::{Rng, SeedableRng};
    if m < 3 {
        return Err(Error::Precondition("ratio coordinates need m >= 3".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let case = |r2: i64, r3: i64, r4: i64, r5: i64, r6: i64| -> bool {
        // numerator t^{r6} + t^{r4}; denominator t^{-r5} + t^{-r3}
        let num = QLaurent::q_pow(r6).add(&QLaurent::q_pow(r4));
        let den = QLaurent::q_pow(-r5).add(&QLaurent::q_pow(-r3));
        let v_num = num.min_exp().expect("nonzero");
        let v_den = den.min_exp().expect("nonzero");
        let r1 = v_num - v_den - r2;
        r1 == r6.min(r4) + r5.max(r3) - r2
    };
    // fixed degenerate inputs first
    if !case(0, 0, 0, 0, 0) {
        return Ok(false);
    }
    if !case(3, 2, 5, 2, 5) {
        return Ok(false);
    }
    for _ in 0..trials {
        let r = |rng: &mut rand_chacha::ChaCha8Rng| rng.gen_range(-10..=10);
        if !case(r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng)) {
            return Ok(false);
        }
    }
    Ok(true)
}
