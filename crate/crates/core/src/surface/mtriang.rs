use std::collections::HashMap;

use crate::quiver::Quiver;
use crate::surface::IdealTriangulation;
use crate::{Error, Result};

/// Placement of a quiver vertex inside the refined triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexCoord {
    /// Interior point of a triangle, barycentric (a, b, c) with a+b+c = m,
    /// all positive; coordinate `a` belongs to corner 0 of the triangle.
    Interior { tri: usize, abc: (i64, i64, i64) },
    /// Point on an edge, keyed by the canonical side representative and the
    /// position `1..m-1` measured from that side's starting corner.
    Edge { tri: usize, side: u8, pos: i64 },
}

/// What to do with the vertices on boundary intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryMode {
    /// The cluster Poisson convention: no vertices on boundary intervals.
    Omit,
    /// The decorated (K2) convention: boundary vertices present and frozen.
    Frozen,
}

/// The quiver of an m-triangulation, with per-vertex placement data.
#[derive(Clone, Debug)]
pub struct MTriangQuiver {
    pub quiver: Quiver,
    pub m: i64,
    pub coords: Vec<VertexCoord>,
    index: HashMap<VertexCoord, usize>,
}

impl MTriangQuiver {
    pub fn vertex(&self, c: &VertexCoord) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Vertex index for a point of triangle `t` given in local barycentric
    /// coordinates; edge and corner points are resolved through the gluing.
    pub fn resolve(&self, t: &IdealTriangulation, tri: usize, abc: (i64, i64, i64)) -> Option<usize> {
        let c = locate(t, self.m, tri, abc)?;
        self.vertex(&c)
    }
}

/// Classifies a local barycentric point as a vertex placement; corners give
/// `None`.
fn locate(
    t: &IdealTriangulation,
    m: i64,
    tri: usize,
    (a, b, c): (i64, i64, i64),
) -> Option<VertexCoord> {
    debug_assert_eq!(a + b + c, m);
    let zeros = [a == 0, b == 0, c == 0];
    match zeros.iter().filter(|z| **z).count() {
        0 => Some(VertexCoord::Interior { tri, abc: (a, b, c) }),
        1 => {
            // side 0: c = 0, from corner 0, pos = b
            // side 1: a = 0, from corner 1, pos = c
            // side 2: b = 0, from corner 2, pos = a
            let (side, pos) = if c == 0 {
                (0u8, b)
            } else if a == 0 {
                (1u8, c)
            } else {
                (2u8, a)
            };
            let (rt, rs) = t.edge_rep(tri, side);
            let rpos = if (rt, rs) == (tri, side) { pos } else { m - pos };
            Some(VertexCoord::Edge { tri: rt, side: rs, pos: rpos })
        }
        _ => None, // corner
    }
}

/// Builds the quiver of the m-refined triangulation.
///
/// Vertices: per-triangle interior lattice points, plus `m-1` points on every
/// internal edge; boundary-interval points are omitted or frozen per `mode`.
/// Arrows: each small upward triangle contributes an oriented 3-cycle
/// compatible with the triangle orientation, with contributions across glued
/// edges summed.
pub fn build_quiver(t: &IdealTriangulation, m: i64, mode: BoundaryMode) -> Result<MTriangQuiver> {
    if m < 2 {
        return Err(Error::Precondition("refinement needs m >= 2".into()));
    }
    t.validate()?;
    let mut coords: Vec<VertexCoord> = Vec::new();
    let mut frozen: Vec<usize> = Vec::new();
    // interior vertices, triangle by triangle
    for tri in 0..t.triangles.len() {
        for a in 1..m {
            for b in 1..(m - a) {
                let c = m - a - b;
                coords.push(VertexCoord::Interior { tri, abc: (a, b, c) });
            }
        }
    }
    // edge vertices: internal always, boundary per mode
    for tri in 0..t.triangles.len() {
        for side in 0..3u8 {
            let internal = !t.is_boundary(tri, side);
            if internal && t.edge_rep(tri, side) != (tri, side) {
                continue; // the partner side owns the vertices
            }
            if !internal && mode == BoundaryMode::Omit {
                continue;
            }
            for pos in 1..m {
                if !internal {
                    frozen.push(coords.len());
                }
                coords.push(VertexCoord::Edge { tri, side, pos });
            }
        }
    }
    let index: HashMap<VertexCoord, usize> =
        coords.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let n = coords.len();
    let mut eps = vec![vec![0i64; n]; n];
    // arrows: upward small triangles (a+1,b,c) -> (a,b+1,c) -> (a,b,c+1)
    for tri in 0..t.triangles.len() {
        for a in 0..m {
            for b in 0..(m - a) {
                let c = m - a - b - 1;
                if c < 0 {
                    continue;
                }
                let pts = [(a + 1, b, c), (a, b + 1, c), (a, b, c + 1)];
                let ids: Vec<Option<usize>> = pts
                    .iter()
                    .map(|&p| locate(t, m, tri, p).and_then(|vc| index.get(&vc).copied()))
                    .collect();
                for s in 0..3 {
                    let (Some(u), Some(v)) = (ids[s], ids[(s + 1) % 3]) else {
                        continue;
                    };
                    eps[u][v] += 1;
                    eps[v][u] -= 1;
                }
            }
        }
    }
    let labels = coords
        .iter()
        .map(|c| match c {
            VertexCoord::Interior { tri, abc } => {
                format!("t{tri}:{},{},{}", abc.0, abc.1, abc.2)
            }
            VertexCoord::Edge { tri, side, pos } => format!("e{tri}.{side}:{pos}"),
        })
        .collect();
    let mut quiver = Quiver::new(eps, frozen)?;
    quiver.labels = Some(labels);
    Ok(MTriangQuiver { quiver, m, coords, index })
}

/// The level-`i` cycle around a puncture: the vertices at lattice distance
/// `m - i` from the puncture, ordered along the cycle and oriented so that
/// consecutive pairing is `+1` (for cycles of length at least 3).
///
/// Also asserts the zero-sum condition: every vertex outside the cycle has
/// total pairing zero with it.
pub fn puncture_cycle(
    mtq: &MTriangQuiver,
    t: &IdealTriangulation,
    puncture_mark: usize,
    level: i64,
) -> Result<Vec<usize>> {
    let m = mtq.m;
    if level < 1 || level >= m {
        return Err(Error::Domain(format!("level {level} out of range 1..{}", m - 1)));
    }
    if !matches!(t.marks.get(puncture_mark), Some(crate::surface::Mark::Puncture(_))) {
        return Err(Error::Domain(format!("mark {puncture_mark} is not a puncture")));
    }
    // triangles incident to the puncture, with the corner position of p
    let mut corner_of: HashMap<usize, u8> = HashMap::new();
    for (tri, tricorners) in t.triangles.iter().enumerate() {
        let hits: Vec<u8> = (0..3u8)
            .filter(|&j| tricorners[j as usize] == puncture_mark)
            .collect();
        match hits.len() {
            0 => {}
            1 => {
                corner_of.insert(tri, hits[0]);
            }
            _ => {
                return Err(Error::UnsupportedTriangulation(format!(
                    "triangle {tri} touches the puncture at two corners"
                )))
            }
        }
    }
    if corner_of.is_empty() {
        return Err(Error::Domain("puncture not in any triangle".into()));
    }
    // walk the fan: from triangle `tri` with p at corner cp, the next triangle
    // counterclockwise is across side cp (the side leaving p)
    let start = *corner_of.keys().min().expect("nonempty");
    let mut fan: Vec<(usize, u8)> = Vec::new();
    let mut cur = start;
    loop {
        let cp = corner_of[&cur];
        fan.push((cur, cp));
        let side = cp; // side from corner cp to cp+1
        let Some(&(t2, _)) = t.gluing.get(&(cur, side)) else {
            return Err(Error::UnsupportedTriangulation(
                "puncture touches a boundary side".into(),
            ));
        };
        cur = t2;
        if cur == start {
            break;
        }
        if fan.len() > t.triangles.len() {
            return Err(Error::InternalFault("fan walk does not close".into()));
        }
    }
    // in-triangle path at p-coordinate = level, from the entering spoke to the
    // leaving spoke; spokes are shared so take the leaving one per triangle
    let a = level;
    let mut cycle = Vec::new();
    for &(tri, cp) in &fan {
        // local coordinates with p at position cp: coordinate vector where
        // index cp has value a; walk from the side (cp+2) [entering spoke]
        // to side cp [leaving spoke]; interior points ordered along the way.
        // Local (x, y, z) with x at corner cp, y at cp+1, z at cp+2:
        // entering spoke = side cp+2 (corners cp+2 -> cp), its level point is
        // (x=a, y=0, z=m-a); path: z descending; leaving spoke point is
        // (a, m-a, 0) on side cp.
        for z in (0..=(m - a)).rev() {
            let y = m - a - z;
            if z == m - a {
                continue; // entering spoke vertex: emitted by previous triangle
            }
            let mut abc = [0i64; 3];
            abc[cp as usize] = a;
            abc[((cp + 1) % 3) as usize] = y;
            abc[((cp + 2) % 3) as usize] = z;
            let id = mtq
                .resolve(t, tri, (abc[0], abc[1], abc[2]))
                .ok_or_else(|| Error::InternalFault("cycle vertex missing".into()))?;
            cycle.push(id);
        }
    }
    // orient so consecutive pairing is +1
    if cycle.len() >= 3 {
        let e = mtq.quiver.eps[cycle[0]][cycle[1]];
        if e < 0 {
            cycle.reverse();
        } else if e == 0 {
            return Err(Error::InternalFault("cycle neighbors unpaired".into()));
        }
    }
    // zero-sum condition for outside vertices
    for k in 0..mtq.quiver.n {
        if cycle.contains(&k) {
            continue;
        }
        let s: i64 = cycle.iter().map(|&v| mtq.quiver.eps[k][v]).sum();
        if s != 0 {
            return Err(Error::InternalFault(format!(
                "zero-sum condition fails at vertex {k}"
            )));
        }
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::cyclic_quiver;

    #[test]
    fn single_triangle_counts() {
        let t = IdealTriangulation::polygon_fan(3).unwrap();
        // m = 3 with frozen boundary: 7 vertices, 1 interior
        let q = build_quiver(&t, 3, BoundaryMode::Frozen).unwrap();
        assert_eq!(q.quiver.n, 7);
        assert_eq!(
            q.coords
                .iter()
                .filter(|c| matches!(c, VertexCoord::Interior { .. }))
                .count(),
            1
        );
        assert_eq!(q.quiver.frozen.len(), 6);
        // X-space convention drops them all but the interior one
        let qx = build_quiver(&t, 3, BoundaryMode::Omit).unwrap();
        assert_eq!(qx.quiver.n, 1);
    }

    #[test]
    fn vertex_count_formula() {
        // per triangle (m-1)(m-2)/2 interior, plus m-1 per internal edge
        for m in 2..=5i64 {
            let t = IdealTriangulation::polygon_fan(5).unwrap();
            let q = build_quiver(&t, m, BoundaryMode::Omit).unwrap();
            let tris = t.triangles.len() as i64;
            let edges = t.internal_edges().len() as i64;
            assert_eq!(
                q.quiver.n as i64,
                tris * (m - 1) * (m - 2) / 2 + edges * (m - 1),
                "m = {m}"
            );
        }
    }

    #[test]
    fn square_m2_is_single_free_vertex() {
        let t = IdealTriangulation::polygon_fan(4).unwrap();
        let q = build_quiver(&t, 2, BoundaryMode::Omit).unwrap();
        assert_eq!(q.quiver.n, 1);
        assert_eq!(q.quiver.eps, vec![vec![0]]);
    }

    #[test]
    fn punctured_disk_m2_is_cyclic_quiver() {
        for n in 2..=6 {
            let t = IdealTriangulation::punctured_disk_fan(n).unwrap();
            let q = build_quiver(&t, 2, BoundaryMode::Omit).unwrap();
            assert_eq!(q.quiver.n, n);
            // spoke i+1 is owned by (triangle i, side 2)
            let cyc = puncture_cycle(&q, &t, 0, 1).unwrap();
            assert_eq!(cyc.len(), n);
            // relabel along the cycle and compare with the cyclic quiver
            let mut perm = vec![0usize; n];
            for (pos, &v) in cyc.iter().enumerate() {
                perm[v] = pos;
            }
            let relabeled = q.quiver.permute(&perm).unwrap();
            assert_eq!(relabeled.eps, cyclic_quiver(n).eps, "n = {n}");
        }
    }

    #[test]
    fn puncture_cycles_at_higher_m() {
        let t = IdealTriangulation::punctured_disk_fan(3).unwrap();
        for m in 2..=4i64 {
            let q = build_quiver(&t, m, BoundaryMode::Omit).unwrap();
            for level in 1..m {
                let cyc = puncture_cycle(&q, &t, 0, level).unwrap();
                assert_eq!(cyc.len(), 3 * (m - level) as usize, "m={m}, level={level}");
                // consecutive pairing +1 along the cycle
                if cyc.len() >= 3 {
                    for i in 0..cyc.len() {
                        let u = cyc[i];
                        let v = cyc[(i + 1) % cyc.len()];
                        assert_eq!(q.quiver.eps[u][v], 1, "m={m} l={level} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_quiver_is_regular() {
        let t = IdealTriangulation::sphere_four_punctures();
        let q = build_quiver(&t, 2, BoundaryMode::Omit).unwrap();
        assert_eq!(q.quiver.n, 6);
        for p in 0..4 {
            let cyc = puncture_cycle(&q, &t, p, 1).unwrap();
            assert_eq!(cyc.len(), 3);
        }
    }
}
