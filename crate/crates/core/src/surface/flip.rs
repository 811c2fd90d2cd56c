use std::collections::HashMap;

use crate::quiver::MutationWord;
use crate::surface::mtriang::{build_quiver, BoundaryMode, MTriangQuiver, VertexCoord};
use crate::surface::IdealTriangulation;
use crate::{Error, Result};

/// Outcome of a flip: the mutation word on the current quiver, the flipped
/// triangulation, and the vertex relabeling that matches the mutated quiver
/// with the quiver freshly built from the flipped triangulation
/// (`relabel[old_index] = new_index`).
#[derive(Clone, Debug)]
pub struct FlipResult {
    pub word: MutationWord,
    pub flipped: IdealTriangulation,
    pub relabel: Vec<usize>,
}

/// Each mutation moves the tetrahedron point carried by its grid cell by
/// this step; the mutated cell `(i, j) = (x1+x2, x2+x3)` is invariant.
const DELTA: [i64; 4] = [-1, 1, -1, 1];

/// Tetrahedron point carried by grid cell `(i, j)` after `s` mutations.
fn cell_point(m: i64, i: i64, j: i64, s: i64) -> [i64; 4] {
    let old = Quad::old_point(m, i, j);
    [
        old[0] + s * DELTA[0],
        old[1] + s * DELTA[1],
        old[2] + s * DELTA[2],
        old[3] + s * DELTA[3],
    ]
}

/// Number of mutations a grid cell undergoes during the flip.
fn cell_count(m: i64, i: i64, j: i64) -> i64 {
    i.min(j).min(m - i).min(m - j)
}

/// The mutation schedule of the size-`m` flip, as `(i, j)` grid cells in a
/// valid dependency order: the next mutation of a cell is enabled only when
/// each in-grid neighbor currently carries exactly the function the exchange
/// relation consumes. All valid schedules differ by swapping commuting
/// mutations, so they give the same cluster transformation.
fn flip_schedule(m: i64) -> Vec<(i64, i64)> {
    let idx = |i: i64, j: i64| ((i - 1) * (m - 1) + (j - 1)) as usize;
    let size = ((m - 1) * (m - 1)) as usize;
    let mut stage = vec![0i64; size];
    let mut out = Vec::new();
    let total: i64 = (1..m).map(|i| (1..m).map(|j| cell_count(m, i, j)).sum::<i64>()).sum();
    let offsets: [[i64; 4]; 4] = [
        [-1, 1, 0, 0], // neighbor (i, j+1)
        [0, 1, -1, 0], // neighbor (i+1, j)
        [-1, 0, 0, 1], // neighbor (i-1, j)
        [0, 0, -1, 1], // neighbor (i, j-1)
    ];
    while (out.len() as i64) < total {
        // eligible cells, preferring the far corner of the grid
        let mut pick: Option<(i64, i64)> = None;
        let mut cells: Vec<(i64, i64)> = (1..m)
            .flat_map(|i| (1..m).map(move |j| (i, j)))
            .collect();
        cells.sort_by_key(|&(i, j)| (-(i + j), i));
        'cells: for (i, j) in cells {
            let t = stage[idx(i, j)] + 1;
            if t > cell_count(m, i, j) {
                continue;
            }
            let pre = cell_point(m, i, j, t - 1);
            for w in &offsets {
                let p = [pre[0] + w[0], pre[1] + w[1], pre[2] + w[2], pre[3] + w[3]];
                let (ni, nj) = (p[0] + p[1], p[1] + p[2]);
                if ni < 1 || ni > m - 1 || nj < 1 || nj > m - 1 {
                    continue; // boundary value, no constraint
                }
                let old = Quad::old_point(m, ni, nj);
                let s = p[1] - old[1];
                let consistent = (0..4).all(|c| p[c] == old[c] + s * DELTA[c]);
                if !consistent || stage[idx(ni, nj)] != s {
                    continue 'cells;
                }
            }
            pick = Some((i, j));
            break;
        }
        let Some((i, j)) = pick else {
            unreachable!("flip schedule deadlocked at m = {m}");
        };
        stage[idx(i, j)] += 1;
        out.push((i, j));
    }
    out
}

/// Geometry of the flip quadrilateral: the two triangles adjacent to the
/// edge, with corners named so the tetrahedron coordinates (x1..x4) sit at
/// (A, C2, B, C1). Triangle 1 is (A, B, C1), triangle 2 is (B, A, C2).
struct Quad {
    t1: usize,
    j1: u8,
    t2: usize,
    j2: u8,
}

impl Quad {
    /// Local barycentric coordinates of a tetrahedron point on the old
    /// triangulation, when it lies on one of the old faces.
    fn old_coord(&self, m: i64, x: [i64; 4]) -> Option<(usize, (i64, i64, i64))> {
        let [x1, x2, x3, x4] = x;
        if x2 == 0 {
            // face of triangle 1 = (A, B, C1): coordinate x1 at corner j1
            let mut abc = [0i64; 3];
            abc[self.j1 as usize] = x1;
            abc[(self.j1 as usize + 1) % 3] = x3;
            abc[(self.j1 as usize + 2) % 3] = x4;
            Some((self.t1, (abc[0], abc[1], abc[2])))
        } else if x4 == 0 {
            // face of triangle 2 = (B, A, C2): coordinate x3 at corner j2
            let mut abc = [0i64; 3];
            abc[self.j2 as usize] = x3;
            abc[(self.j2 as usize + 1) % 3] = x1;
            abc[(self.j2 as usize + 2) % 3] = x2;
            Some((self.t2, (abc[0], abc[1], abc[2])))
        } else {
            let _ = m;
            None
        }
    }

    /// The grid position of a tetrahedron point: the quiver vertex mutated at
    /// this point lives at `(i, j) = (x1 + x2, x2 + x3)`.
    fn grid(x: [i64; 4]) -> (i64, i64) {
        (x[0] + x[1], x[1] + x[2])
    }

    /// Tetrahedron point of a grid cell on the old faces.
    fn old_point(m: i64, i: i64, j: i64) -> [i64; 4] {
        use std::cmp::Ordering::*;
        match (i + j).cmp(&m) {
            Less => [i, 0, j, m - i - j],
            Equal => [i, 0, j, 0],
            Greater => [m - j, i + j - m, m - i, 0],
        }
    }

    /// Tetrahedron point of a grid cell on the new faces (diagonal i = j).
    fn new_point(m: i64, i: i64, j: i64) -> [i64; 4] {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => [0, i, j - i, m - j],
            Equal => [0, i, 0, m - i],
            Greater => [i - j, j, 0, m - i],
        }
    }

    /// Local coordinates of a tetrahedron point on the flipped triangulation,
    /// which stores `(C2, B, C1)` in slot t1 and `(A, C2, C1)` in slot t2.
    fn new_coord(&self, x: [i64; 4]) -> Option<(usize, (i64, i64, i64))> {
        let [x1, x2, x3, x4] = x;
        if x1 == 0 {
            Some((self.t1, (x2, x3, x4)))
        } else if x3 == 0 {
            Some((self.t2, (x1, x2, x4)))
        } else {
            None
        }
    }
}

/// Computes the flipped triangulation and the side translation map
/// (old side -> new side) for the four outer sides.
fn flip_triangulation(
    t: &IdealTriangulation,
    quad: &Quad,
) -> Result<(IdealTriangulation, HashMap<(usize, u8), (usize, u8)>)> {
    let &Quad { t1, j1, t2, j2 } = quad;
    let tri1 = t.triangles[t1];
    let tri2 = t.triangles[t2];
    let a = tri1[j1 as usize];
    let b = tri1[(j1 as usize + 1) % 3];
    let c1 = tri1[(j1 as usize + 2) % 3];
    let c2 = tri2[(j2 as usize + 2) % 3];
    if c1 == c2 {
        return Err(Error::Flip(
            "flip would create an arc from a marked point to itself".into(),
        ));
    }
    let mut triangles = t.triangles.clone();
    triangles[t1] = [c2, b, c1];
    triangles[t2] = [a, c2, c1];
    // translate the four outer sides
    let mut side_map: HashMap<(usize, u8), (usize, u8)> = HashMap::new();
    side_map.insert((t1, (j1 + 1) % 3), (t1, 1)); // (B, C1)
    side_map.insert((t1, (j1 + 2) % 3), (t2, 2)); // (C1, A)
    side_map.insert((t2, (j2 + 1) % 3), (t2, 0)); // (A, C2)
    side_map.insert((t2, (j2 + 2) % 3), (t1, 0)); // (C2, B)
    let translate = |s: (usize, u8)| side_map.get(&s).copied().unwrap_or(s);
    let mut gluing = HashMap::new();
    for (&from, &to) in &t.gluing {
        if from == (t1, j1) || from == (t2, j2) {
            continue; // the flipped diagonal
        }
        gluing.insert(translate(from), translate(to));
    }
    // the new diagonal: side 2 of slot t1 = (C1, C2), side 1 of slot t2 = (C2, C1)
    gluing.insert((t1, 2), (t2, 1));
    gluing.insert((t2, 1), (t1, 2));
    let flipped = IdealTriangulation { marks: t.marks.clone(), triangles, gluing };
    flipped.validate().map_err(|e| Error::Flip(format!("flip result invalid: {e}")))?;
    Ok((flipped, side_map))
}

/// Emits the mutation word realizing the flip at an internal edge, the
/// flipped triangulation, and the vertex relabeling onto the freshly built
/// quiver of the flipped triangulation.
///
/// The mutated quiver equals the rebuilt one under the relabeling, exactly in
/// the `Omit` convention and up to frozen-frozen arrows in the `Frozen` one;
/// this contract is asserted before returning.
pub fn flip_word(
    t: &IdealTriangulation,
    mtq: &MTriangQuiver,
    edge: (usize, u8),
    mode: BoundaryMode,
) -> Result<FlipResult> {
    let m = mtq.m;
    let (t1, j1) = t.edge_rep(edge.0, edge.1);
    let &(t2, j2) = t
        .gluing
        .get(&(t1, j1))
        .ok_or_else(|| Error::Flip("cannot flip a boundary side".into()))?;
    if t1 == t2 {
        return Err(Error::Flip("adjacent triangles are not distinct".into()));
    }
    let quad = Quad { t1, j1, t2, j2 };
    let (flipped, side_map) = flip_triangulation(t, &quad)?;
    let new_mtq = build_quiver(&flipped, m, mode)?;

    // the mutation word, in schedule order, at grid-cell vertices
    let mut word = MutationWord::empty();
    for (i, j) in flip_schedule(m) {
        let old = Quad::old_point(m, i, j);
        let (tri, abc) = quad.old_coord(m, old).expect("grid cell on old faces");
        let v = mtq
            .resolve(t, tri, abc)
            .ok_or_else(|| Error::InternalFault("flip vertex missing".into()))?;
        word.push_mutate(v);
    }

    // relabeling: grid cells move through the tetrahedron, everything else
    // translates through the side map
    let mut relabel = vec![usize::MAX; mtq.quiver.n];
    for (old_id, coord) in mtq.coords.iter().enumerate() {
        let new_id = match old_to_new_coord(t, &flipped, &quad, &side_map, m, coord) {
            Some(c) => new_mtq
                .vertex(&c)
                .ok_or_else(|| Error::InternalFault(format!("missing image for {coord:?}")))?,
            None => {
                return Err(Error::InternalFault(format!(
                    "no translation for vertex {coord:?}"
                )))
            }
        };
        relabel[old_id] = new_id;
    }

    // contract: replaying the word and relabeling reproduces the built quiver
    let mutated = mtq.quiver.apply_word(&word)?;
    let mut expected = new_mtq.quiver.clone();
    for u in 0..mtq.quiver.n {
        for v in 0..mtq.quiver.n {
            expected.eps[relabel[u]][relabel[v]] = mutated.eps[u][v];
        }
    }
    let ok = match mode {
        BoundaryMode::Omit => expected.eps == new_mtq.quiver.eps,
        BoundaryMode::Frozen => expected.eq_ignoring_frozen_arrows(&new_mtq.quiver),
    };
    if !ok {
        return Err(Error::InternalFault(
            "flip word does not reproduce the flipped quiver".into(),
        ));
    }
    Ok(FlipResult { word, flipped, relabel })
}

/// Translates an old vertex placement to a placement on the flipped
/// triangulation.
fn old_to_new_coord(
    t: &IdealTriangulation,
    flipped: &IdealTriangulation,
    quad: &Quad,
    side_map: &HashMap<(usize, u8), (usize, u8)>,
    m: i64,
    coord: &VertexCoord,
) -> Option<VertexCoord> {
    let in_quad_interior = |tri: usize| tri == quad.t1 || tri == quad.t2;
    match coord {
        VertexCoord::Interior { tri, abc } if in_quad_interior(*tri) => {
            // through the grid
            let x = if *tri == quad.t1 {
                // local (a,b,c): a at corner 0; x1 sits at corner j1
                let arr = [abc.0, abc.1, abc.2];
                let x1 = arr[quad.j1 as usize];
                let x3 = arr[(quad.j1 as usize + 1) % 3];
                let x4 = arr[(quad.j1 as usize + 2) % 3];
                [x1, 0, x3, x4]
            } else {
                let arr = [abc.0, abc.1, abc.2];
                let x3 = arr[quad.j2 as usize];
                let x1 = arr[(quad.j2 as usize + 1) % 3];
                let x2 = arr[(quad.j2 as usize + 2) % 3];
                [x1, x2, x3, 0]
            };
            let (i, j) = Quad::grid(x);
            let nx = Quad::new_point(m, i, j);
            let (slot, abc) = quad.new_coord(nx)?;
            locate_public(flipped, m, slot, abc)
        }
        VertexCoord::Interior { tri, abc } => {
            Some(VertexCoord::Interior { tri: *tri, abc: *abc })
        }
        VertexCoord::Edge { tri, side, pos } => {
            if (*tri, *side) == (quad.t1, quad.j1) || (*tri, *side) == (quad.t2, quad.j2) {
                // the flipped diagonal: pos measured from A equals x3 = j
                let (i, j) = if (*tri, *side) == (quad.t1, quad.j1) {
                    (m - *pos, *pos)
                } else {
                    (*pos, m - *pos)
                };
                let nx = Quad::new_point(m, i, j);
                let (slot, abc) = quad.new_coord(nx)?;
                return locate_public(flipped, m, slot, abc);
            }
            // outer sides translate; positions are preserved because the
            // translated sides keep their direction
            let (nt, ns) = side_map.get(&(*tri, *side)).copied().unwrap_or((*tri, *side));
            // re-canonicalize in the new triangulation
            let (rt, rs) = flipped.edge_rep(nt, ns);
            let rpos = if (rt, rs) == (nt, ns) { *pos } else { m - *pos };
            let _ = t;
            Some(VertexCoord::Edge { tri: rt, side: rs, pos: rpos })
        }
    }
}

fn locate_public(
    t: &IdealTriangulation,
    m: i64,
    tri: usize,
    (a, b, c): (i64, i64, i64),
) -> Option<VertexCoord> {
    // mirror of the private `locate` in mtriang
    let zeros = [a == 0, b == 0, c == 0];
    match zeros.iter().filter(|z| **z).count() {
        0 => Some(VertexCoord::Interior { tri, abc: (a, b, c) }),
        1 => {
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
        _ => None,
    }
}
