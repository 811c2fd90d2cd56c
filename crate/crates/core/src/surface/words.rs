use serde::Serialize;

use crate::cluster::tau_word;
use crate::quiver::{identity_permutation, MutationWord};
use crate::surface::flip::flip_word;
use crate::surface::mtriang::{build_quiver, puncture_cycle, BoundaryMode, MTriangQuiver, VertexCoord};
use crate::surface::{IdealTriangulation, Mark};
use crate::tropical::{cmatrix_of_word, extract_dt_permutation, CMatrix, SignSequence};
use crate::{Error, Result};

/// The simple-reflection word at a puncture and level: the cyclic
/// transformation on the level cycle.
pub fn weyl_generator_word(
    mtq: &MTriangQuiver,
    t: &IdealTriangulation,
    puncture_mark: usize,
    level: i64,
) -> Result<MutationWord> {
    let cycle = puncture_cycle(mtq, t, puncture_mark, level)?;
    Ok(tau_word(&cycle, mtq.quiver.n))
}

/// The longest-element word at a puncture:
/// `w_0 = d_1 d_2 ... d_{m-1}` with `d_k = s_{m-k} ... s_{m-2} s_{m-1}`,
/// both compositions applied rightmost-first.
pub fn w0_word(
    mtq: &MTriangQuiver,
    t: &IdealTriangulation,
    puncture_mark: usize,
) -> Result<MutationWord> {
    let m = mtq.m;
    let mut word = MutationWord::empty();
    // d_{m-1} first, then d_{m-2}, ..., d_1
    for k in (1..m).rev() {
        // d_k = s_{m-k} o ... o s_{m-1}: steps s_{m-1}, s_{m-2}, ..., s_{m-k}
        for i in ((m - k)..=(m - 1)).rev() {
            word = word.then(&weyl_generator_word(mtq, t, puncture_mark, i)?);
        }
    }
    Ok(word)
}

/// The longest-element word over all punctures (the actions commute).
pub fn w0_all_punctures(mtq: &MTriangQuiver, t: &IdealTriangulation) -> Result<MutationWord> {
    let mut word = MutationWord::empty();
    for p in t.punctures() {
        word = word.then(&w0_word(mtq, t, p)?);
    }
    Ok(word)
}

/// The duality word: per-triangle row words followed by a single permutation
/// combining the per-triangle inner reflections with the global edge swap.
///
/// Per triangle, rows are indexed `i = 1..m-2` at height `b = m - i - 1`;
/// the row word mutates `(i, b, 1), (i-1, b, 2), ..., (1, b, i)`; stage
/// `S_i` plays rows `i, i-1, ..., 1` and the full word plays stages
/// `1, 2, ..., m-2`. The final permutation applies `(a,b,c) -> (c,b,a)` on
/// interior vertices and `pos -> m - pos` on every edge.
pub fn involution_word(mtq: &MTriangQuiver, t: &IdealTriangulation) -> Result<MutationWord> {
    let m = mtq.m;
    let mut word = MutationWord::empty();
    for tri in 0..t.triangles.len() {
        // stages S_1, S_2, ..., S_{m-2}
        for stage in 1..=(m - 2).max(0) {
            // rows i = stage, stage-1, ..., 1
            for i in (1..=stage).rev() {
                let b = m - i - 1;
                for a in (1..=i).rev() {
                    let c = i + 1 - a;
                    let v = mtq
                        .resolve(t, tri, (a, b, c))
                        .ok_or_else(|| Error::InternalFault("row vertex missing".into()))?;
                    word.push_mutate(v);
                }
            }
        }
    }
    // final permutation: inner reflection per triangle + global edge swap
    let mut perm = identity_permutation(mtq.quiver.n);
    for (id, coord) in mtq.coords.iter().enumerate() {
        let image = match coord {
            VertexCoord::Interior { tri, abc } => VertexCoord::Interior {
                tri: *tri,
                abc: (abc.2, abc.1, abc.0),
            },
            VertexCoord::Edge { tri, side, pos } => VertexCoord::Edge {
                tri: *tri,
                side: *side,
                pos: m - pos,
            },
        };
        perm[id] = mtq
            .vertex(&image)
            .ok_or_else(|| Error::InternalFault("permutation image missing".into()))?;
    }
    word.push_permute(perm);
    Ok(word)
}

/// Matches two triangulations through a bijection of marks: for each triangle
/// of `from`, the triangle of `to` whose corner marks are the mapped ones up
/// to cyclic rotation. Returns per-triangle (target, rotation offset) with
/// `to_corner = (from_corner + offset) mod 3`.
pub(crate) fn match_triangles(
    from: &IdealTriangulation,
    to: &IdealTriangulation,
    mark_map: &dyn Fn(usize) -> usize,
) -> Result<Vec<(usize, u8)>> {
    let mut used = vec![false; to.triangles.len()];
    let mut out = Vec::with_capacity(from.triangles.len());
    for tri in &from.triangles {
        let want = [mark_map(tri[0]), mark_map(tri[1]), mark_map(tri[2])];
        let mut found = None;
        'search: for (t2, cand) in to.triangles.iter().enumerate() {
            if used[t2] {
                continue;
            }
            for off in 0..3u8 {
                let rotated = [
                    cand[off as usize],
                    cand[(off as usize + 1) % 3],
                    cand[(off as usize + 2) % 3],
                ];
                if rotated == want {
                    found = Some((t2, off));
                    break 'search;
                }
            }
        }
        let Some((t2, off)) = found else {
            return Err(Error::Domain("triangulations do not match".into()));
        };
        used[t2] = true;
        out.push((t2, off));
    }
    Ok(out)
}

/// Vertex relabeling induced by a triangle matching: `relabel[from_id] = to_id`.
pub(crate) fn relabel_by_matching(
    from_q: &MTriangQuiver,
    to_q: &MTriangQuiver,
    to_t: &IdealTriangulation,
    matching: &[(usize, u8)],
) -> Result<Vec<usize>> {
    let m = from_q.m;
    let mut relabel = vec![usize::MAX; from_q.quiver.n];
    for (id, coord) in from_q.coords.iter().enumerate() {
        let image = match coord {
            VertexCoord::Interior { tri, abc } => {
                let (t2, off) = matching[*tri];
                // corner j of `from` corresponds to corner j + off of `to`;
                // rotate barycentric coordinates accordingly
                let arr = [abc.0, abc.1, abc.2];
                let mut rot = [0i64; 3];
                for j in 0..3 {
                    rot[(j + off as usize) % 3] = arr[j];
                }
                VertexCoord::Interior { tri: t2, abc: (rot[0], rot[1], rot[2]) }
            }
            VertexCoord::Edge { tri, side, pos } => {
                let (t2, off) = matching[*tri];
                let nside = (side + off) % 3;
                // canonicalize in the target triangulation
                let (rt, rs) = to_t.edge_rep(t2, nside);
                let rpos = if (rt, rs) == (t2, nside) { *pos } else { m - *pos };
                VertexCoord::Edge { tri: rt, side: rs, pos: rpos }
            }
        };
        relabel[id] = to_q
            .vertex(&image)
            .ok_or_else(|| Error::Domain(format!("no image vertex for {coord:?}")))?;
    }
    Ok(relabel)
}

/// How the DT composite is ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Composition {
    /// apply rotation first, then the longest elements, then the duality word
    StarW0R,
    /// apply the longest elements, then the duality word, then rotation
    RStarW0,
}

/// Certification record of a DT-word run.
#[derive(Clone, Debug, Serialize)]
pub struct DTCertification {
    pub word_len: usize,
    pub mutations: usize,
    pub certified: bool,
    pub permutation: Option<Vec<usize>>,
    pub c_matrix: CMatrix,
    pub signs: SignSequence,
}

/// The rotation word: a flip path from the triangulation to its image under
/// rotating each boundary component's special points by one, followed by the
/// relabeling induced by the rotation homeomorphism. Surfaces without
/// boundary rotate trivially.
pub fn rotation_word(
    mtq: &MTriangQuiver,
    t: &IdealTriangulation,
    mode: BoundaryMode,
    budget: usize,
) -> Result<MutationWord> {
    let specials: Vec<usize> = (0..t.marks.len())
        .filter(|&i| matches!(t.marks[i], Mark::Special(_)))
        .collect();
    if specials.is_empty() {
        return Ok(MutationWord::empty());
    }
    // the canonical fans keep all special points on one boundary circle,
    // numbered consecutively; the rotation sends each to the next one
    let k = specials.len();
    let rho = |mark: usize| -> usize {
        match t.marks[mark] {
            Mark::Puncture(_) => mark,
            Mark::Special(_) => {
                let idx = specials.iter().position(|&s| s == mark).expect("special");
                specials[(idx + 1) % k]
            }
        }
    };

    // fast path: the rotated triangulation is the same set of triangles
    // (punctured-disk fans); the word is a pure relabeling
    if let Ok(matching) = match_triangles(t, t, &rho) {
        let relabel = relabel_by_matching(mtq, mtq, t, &matching)?;
        // must be a genuine automorphism of the quiver
        let q2 = mtq.quiver.permute(&relabel)?;
        if q2.eps == mtq.quiver.eps {
            return Ok(MutationWord::permute(relabel));
        }
    }

    // flip path: iteratively flip edges not present in the target
    let target_arcs = |tt: &IdealTriangulation| -> Vec<(usize, usize)> {
        tt.internal_edges()
            .iter()
            .map(|&(tri, s)| {
                let (a, b) = tt.side_marks(tri, s);
                (a.min(b), a.max(b))
            })
            .collect()
    };
    // the rotated triangulation: same complex with marks renamed by rho
    let rotated = IdealTriangulation {
        marks: t.marks.clone(),
        triangles: t
            .triangles
            .iter()
            .map(|tr| [rho(tr[0]), rho(tr[1]), rho(tr[2])])
            .collect(),
        gluing: t.gluing.clone(),
    };
    let mut want = target_arcs(&rotated);
    want.sort_unstable();

    let mut word = MutationWord::empty();
    let mut cur_t = t.clone();
    let mut cur_q = mtq.clone();
    let mut steps = 0usize;
    loop {
        let mut have = target_arcs(&cur_t);
        have.sort_unstable();
        if have == want {
            break;
        }
        // greedy: flip the first internal edge whose arc is not in the target
        let mut progressed = false;
        for e in cur_t.internal_edges() {
            let (a, b) = cur_t.side_marks(e.0, e.1);
            let arc = (a.min(b), a.max(b));
            if want.contains(&arc) {
                continue;
            }
            let Ok(res) = flip_word(&cur_t, &cur_q, e, mode) else {
                continue;
            };
            let new_arc = {
                let (x, y) = res.flipped.side_marks(e.0, 2);
                (x.min(y), x.max(y))
            };
            if !want.contains(&new_arc) {
                continue; // flip away from the target; try another edge
            }
            word = word.then(&res.word);
            word.push_permute(res.relabel.clone());
            cur_q = build_quiver(&res.flipped, mtq.m, mode)?;
            cur_t = res.flipped;
            progressed = true;
            break;
        }
        steps += 1;
        if steps > budget {
            return Err(Error::SearchBudget(budget));
        }
        if !progressed {
            return Err(Error::SearchBudget(budget));
        }
    }
    // final relabeling through the inverse rotation homeomorphism: triangle
    // (x, y, z) of cur_t corresponds to triangle (rho^{-1}x, ...) of t
    let rho_inv = |mark: usize| -> usize {
        match t.marks[mark] {
            Mark::Puncture(_) => mark,
            Mark::Special(_) => {
                let idx = specials.iter().position(|&s| s == mark).expect("special");
                specials[(idx + k - 1) % k]
            }
        }
    };
    let matching = match_triangles(&cur_t, t, &rho_inv)?;
    let relabel = relabel_by_matching(&cur_q, mtq, t, &matching)?;
    word.push_permute(relabel);
    // contract: the rotation word is an automorphism of the labeled quiver
    let q2 = mtq.quiver.apply_word(&word)?;
    let ok = match mode {
        BoundaryMode::Omit => q2.eps == mtq.quiver.eps,
        BoundaryMode::Frozen => q2.eq_ignoring_frozen_arrows(&mtq.quiver),
    };
    if !ok {
        return Err(Error::InternalFault(
            "rotation word is not a quiver automorphism".into(),
        ));
    }
    Ok(word)
}

/// Builds the composite DT word and certifies it: the certification succeeds
/// iff the C-matrix is minus a permutation matrix.
pub fn dt_word(
    mtq: &MTriangQuiver,
    t: &IdealTriangulation,
    comp: Composition,
    mode: BoundaryMode,
    budget: usize,
) -> Result<(MutationWord, DTCertification)> {
    let r = rotation_word(mtq, t, mode, budget)?;
    let w0 = w0_all_punctures(mtq, t)?;
    let star = involution_word(mtq, t)?;
    let word = match comp {
        // apply r first, then w0, then *
        Composition::StarW0R => r.then(&w0).then(&star),
        // apply w0 first, then *, then r
        Composition::RStarW0 => w0.then(&star).then(&r),
    };
    let (c, signs) = cmatrix_of_word(&mtq.quiver, &word)?;
    let permutation = extract_dt_permutation(&mtq.quiver, &word)?;
    let cert = DTCertification {
        word_len: word.len(),
        mutations: word.num_mutations(),
        certified: permutation.is_some(),
        permutation,
        c_matrix: c,
        signs,
    };
    Ok((word, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::cyclic_quiver;
    use crate::tropical::is_permutation_word;

    fn disk_setup(k: usize, m: i64) -> (IdealTriangulation, MTriangQuiver) {
        let t = IdealTriangulation::polygon_fan(k).unwrap();
        let q = build_quiver(&t, m, BoundaryMode::Omit).unwrap();
        (t, q)
    }

    fn punctured_setup(n: usize, m: i64) -> (IdealTriangulation, MTriangQuiver) {
        let t = IdealTriangulation::punctured_disk_fan(n).unwrap();
        let q = build_quiver(&t, m, BoundaryMode::Omit).unwrap();
        (t, q)
    }

    #[test]
    fn weyl_word_on_punctured_disk_m2_is_tau() {
        let (t, q) = punctured_setup(3, 2);
        let w = weyl_generator_word(&q, &t, 0, 1).unwrap();
        // the word fixes the quiver
        assert_eq!(q.quiver.apply_word(&w).unwrap().eps, q.quiver.eps);
        // squared: identity C-matrix with identity permutation
        let ww = w.then(&w);
        assert_eq!(
            is_permutation_word(&q.quiver, &ww).unwrap(),
            Some(identity_permutation(3))
        );
    }

    #[test]
    fn weyl_words_squared_at_higher_m() {
        let (t, q) = punctured_setup(3, 3);
        for level in 1..3 {
            let w = weyl_generator_word(&q, &t, 0, level).unwrap();
            let ww = w.then(&w);
            assert_eq!(
                is_permutation_word(&q.quiver, &ww).unwrap(),
                Some(identity_permutation(q.quiver.n)),
                "level {level}"
            );
        }
    }

    #[test]
    fn weyl_orderings_agree() {
        // the cyclic transformation does not depend on the enumeration
        let (t, q) = punctured_setup(4, 2);
        let cyc = puncture_cycle(&q, &t, 0, 1).unwrap();
        let w1 = tau_word(&cyc, q.quiver.n);
        let rot: Vec<usize> = cyc.iter().cycle().skip(2).take(cyc.len()).copied().collect();
        let w2 = tau_word(&rot, q.quiver.n);
        let (c1, _) = cmatrix_of_word(&q.quiver, &w1).unwrap();
        let (c2, _) = cmatrix_of_word(&q.quiver, &w2).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn w0_m2_is_single_generator() {
        let (t, q) = punctured_setup(3, 2);
        let w0 = w0_word(&q, &t, 0).unwrap();
        let s1 = weyl_generator_word(&q, &t, 0, 1).unwrap();
        assert_eq!(w0, s1);
    }

    #[test]
    fn w0_squares_to_identity() {
        for (n, m) in [(3usize, 2i64), (3, 3), (4, 2)] {
            let (t, q) = punctured_setup(n, m);
            let w0 = w0_word(&q, &t, 0).unwrap();
            let ww = w0.then(&w0);
            assert_eq!(
                is_permutation_word(&q.quiver, &ww).unwrap(),
                Some(identity_permutation(q.quiver.n)),
                "n={n}, m={m}"
            );
        }
    }

    #[test]
    fn weyl_actions_at_distinct_punctures_commute() {
        let t = IdealTriangulation::sphere_four_punctures();
        let q = build_quiver(&t, 2, BoundaryMode::Omit).unwrap();
        let w01 = w0_word(&q, &t, 0).unwrap();
        let w02 = w0_word(&q, &t, 1).unwrap();
        let (c12, _) = cmatrix_of_word(&q.quiver, &w01.then(&w02)).unwrap();
        let (c21, _) = cmatrix_of_word(&q.quiver, &w02.then(&w01)).unwrap();
        assert_eq!(c12, c21);
    }

    #[test]
    fn involution_word_shapes() {
        // m = 2: pure edge permutation
        let (t, q) = punctured_setup(3, 2);
        let d = involution_word(&q, &t).unwrap();
        assert_eq!(d.num_mutations(), 0);
        assert_eq!(d.len(), 1);

        // m = 3 single triangle (A-convention): one mutation + swaps
        let t = IdealTriangulation::polygon_fan(3).unwrap();
        let q = build_quiver(&t, 3, BoundaryMode::Frozen).unwrap();
        let d = involution_word(&q, &t).unwrap();
        assert_eq!(d.num_mutations(), 1);
    }

    #[test]
    fn involution_maps_quiver_to_itself() {
        for (n, m) in [(3usize, 2i64), (3, 3), (4, 3)] {
            let (t, q) = punctured_setup(n, m);
            let d = involution_word(&q, &t).unwrap();
            assert_eq!(
                q.quiver.apply_word(&d).unwrap().eps,
                q.quiver.eps,
                "n={n} m={m}"
            );
        }
        // with frozen boundary, only frozen-frozen arrows may change
        let t = IdealTriangulation::polygon_fan(3).unwrap();
        for m in [3i64, 4] {
            let q = build_quiver(&t, m, BoundaryMode::Frozen).unwrap();
            let d = involution_word(&q, &t).unwrap();
            let q2 = q.quiver.apply_word(&d).unwrap();
            assert!(q2.eq_ignoring_frozen_arrows(&q.quiver), "m={m}");
        }
    }

    #[test]
    fn rotation_punctured_disk_is_relabel() {
        let (t, q) = punctured_setup(4, 2);
        let r = rotation_word(&q, &t, BoundaryMode::Omit, 1000).unwrap();
        assert_eq!(r.num_mutations(), 0);
        // iterating n times returns to the identity
        let mut acc = MutationWord::empty();
        for _ in 0..4 {
            acc = acc.then(&r);
        }
        assert_eq!(
            is_permutation_word(&q.quiver, &acc).unwrap(),
            Some(identity_permutation(q.quiver.n))
        );
    }

    #[test]
    fn rotation_square_is_one_flip() {
        let (t, q) = disk_setup(4, 2);
        let r = rotation_word(&q, &t, BoundaryMode::Omit, 1000).unwrap();
        assert_eq!(r.num_mutations(), 1);
    }

    #[test]
    fn rotation_iterates_to_identity_on_disks() {
        for (k, m) in [(4usize, 2i64), (5, 2), (4, 3)] {
            let (t, q) = disk_setup(k, m);
            let r = rotation_word(&q, &t, BoundaryMode::Omit, 1000).unwrap();
            let mut acc = MutationWord::empty();
            for _ in 0..k {
                acc = acc.then(&r);
            }
            assert_eq!(
                is_permutation_word(&q.quiver, &acc).unwrap(),
                Some(identity_permutation(q.quiver.n)),
                "k={k}, m={m}"
            );
        }
    }

    #[test]
    fn rotation_sphere_is_empty() {
        let t = IdealTriangulation::sphere_four_punctures();
        let q = build_quiver(&t, 2, BoundaryMode::Omit).unwrap();
        let r = rotation_word(&q, &t, BoundaryMode::Omit, 10).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn dt_word_on_punctured_disk_is_r_tau() {
        // the composite on q_N should certify with C = -Id
        let (t, q) = punctured_setup(3, 2);
        let (_, cert) = dt_word(&q, &t, Composition::StarW0R, BoundaryMode::Omit, 1000).unwrap();
        assert!(cert.certified, "{cert:?}");
        let (_, cert2) = dt_word(&q, &t, Composition::RStarW0, BoundaryMode::Omit, 1000).unwrap();
        assert!(cert2.certified);
        let _ = cyclic_quiver(3);
    }
}
