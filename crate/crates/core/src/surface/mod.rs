//! Decorated surfaces and their cluster words: m-triangulation quivers,
//! flips, Weyl-generator words, boundary rotation, the duality word, and the
//! composite DT word with certification.

mod flip;
mod mtriang;
mod words;

pub use flip::{flip_word, FlipResult};
pub use mtriang::{build_quiver, puncture_cycle, BoundaryMode, MTriangQuiver, VertexCoord};
pub use words::{
    dt_word, involution_word, rotation_word, w0_word, weyl_generator_word, Composition,
    DTCertification,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A decorated surface: genus, puncture count, and the number of special
/// points on each boundary component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub punctures: usize,
    pub boundary: Vec<usize>,
}

impl SurfaceSpec {
    pub fn disk(special_points: usize) -> Self {
        SurfaceSpec { genus: 0, punctures: 0, boundary: vec![special_points] }
    }

    pub fn punctured_disk(special_points: usize) -> Self {
        SurfaceSpec { genus: 0, punctures: 1, boundary: vec![special_points] }
    }

    pub fn sphere_with_punctures(n: usize) -> Self {
        SurfaceSpec { genus: 0, punctures: n, boundary: vec![] }
    }

    /// Total number of marked points.
    pub fn marked_points(&self) -> usize {
        self.punctures + self.boundary.iter().sum::<usize>()
    }

    /// Admissibility: `g + mu >= 3` (or the annulus with one special point on
    /// each circle), and more than one puncture when there are no special
    /// points; every boundary component needs a special point and `mu > 0`.
    pub fn is_admissible(&self) -> bool {
        let mu = self.marked_points();
        if mu == 0 || self.boundary.iter().any(|&k| k == 0) {
            return false;
        }
        let special: usize = self.boundary.iter().sum();
        let condition_i = self.genus as usize + mu >= 3
            || (self.genus == 0
                && self.punctures == 0
                && self.boundary.len() == 2
                && self.boundary.iter().all(|&k| k == 1));
        let condition_ii = special > 0 || self.punctures > 1;
        condition_i && condition_ii
    }
}

/// A marked point of the triangulated surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mark {
    Puncture(usize),
    Special(usize),
}

/// An ideal triangulation given combinatorially: oriented triangles over the
/// marked points, with internal sides glued in opposite-direction pairs.
///
/// Side `j` of a triangle runs from corner `j` to corner `j + 1 (mod 3)`.
/// Unglued sides are boundary intervals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealTriangulation {
    pub marks: Vec<Mark>,
    pub triangles: Vec<[usize; 3]>,
    /// symmetric map between glued sides
    pub gluing: HashMap<(usize, u8), (usize, u8)>,
}

impl IdealTriangulation {
    /// Every side is either boundary or glued to a distinct side, gluings are
    /// symmetric, no self-folded triangles, and every edge has two distinct
    /// endpoints.
    pub fn validate(&self) -> Result<()> {
        for (t, tri) in self.triangles.iter().enumerate() {
            for j in 0..3u8 {
                let (a, b) = self.side_marks(t, j);
                if a == b {
                    return Err(Error::UnsupportedTriangulation(format!(
                        "side {j} of triangle {t} joins a marked point to itself"
                    )));
                }
                if let Some(&(t2, j2)) = self.gluing.get(&(t, j)) {
                    if self.gluing.get(&(t2, j2)) != Some(&(t, j)) {
                        return Err(Error::UnsupportedTriangulation(
                            "gluing is not symmetric".into(),
                        ));
                    }
                    if t2 == t && j2 == j {
                        return Err(Error::UnsupportedTriangulation(
                            "side glued to itself".into(),
                        ));
                    }
                    if t2 == t {
                        return Err(Error::UnsupportedTriangulation(format!(
                            "triangle {t} is self-folded"
                        )));
                    }
                    // opposite orientation: marks must match reversed
                    let (c, d) = self.side_marks(t2, j2);
                    if (a, b) != (d, c) {
                        return Err(Error::UnsupportedTriangulation(format!(
                            "glued sides ({t},{j}) and ({t2},{j2}) do not match"
                        )));
                    }
                }
            }
            for &v in tri {
                if v >= self.marks.len() {
                    return Err(Error::UnsupportedTriangulation(format!(
                        "corner {v} out of range"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn side_marks(&self, t: usize, j: u8) -> (usize, usize) {
        let tri = &self.triangles[t];
        (tri[j as usize], tri[(j as usize + 1) % 3])
    }

    pub fn is_boundary(&self, t: usize, j: u8) -> bool {
        !self.gluing.contains_key(&(t, j))
    }

    /// Canonical representative of an edge: the lexicographically smaller of
    /// the glued side pair (the side itself if boundary).
    pub fn edge_rep(&self, t: usize, j: u8) -> (usize, u8) {
        match self.gluing.get(&(t, j)) {
            Some(&(t2, j2)) if (t2, j2) < (t, j) => (t2, j2),
            _ => (t, j),
        }
    }

    /// Internal edges, by canonical representative.
    pub fn internal_edges(&self) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for t in 0..self.triangles.len() {
            for j in 0..3u8 {
                if !self.is_boundary(t, j) && self.edge_rep(t, j) == (t, j) {
                    out.push((t, j));
                }
            }
        }
        out
    }

    /// Boundary sides.
    pub fn boundary_edges(&self) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for t in 0..self.triangles.len() {
            for j in 0..3u8 {
                if self.is_boundary(t, j) {
                    out.push((t, j));
                }
            }
        }
        out
    }

    /// The fan triangulation of a disk with `k >= 3` special points:
    /// triangles `(s_0, s_i, s_{i+1})`.
    pub fn polygon_fan(k: usize) -> Result<IdealTriangulation> {
        if k < 3 {
            return Err(Error::UnsupportedTriangulation(
                "a disk needs at least 3 special points".into(),
            ));
        }
        let marks = (0..k).map(Mark::Special).collect();
        let triangles: Vec<[usize; 3]> = (1..k - 1).map(|i| [0, i, i + 1]).collect();
        let mut gluing = HashMap::new();
        for i in 0..triangles.len().saturating_sub(1) {
            // side 2 of triangle i is (s_{i+2}, s_0); side 0 of triangle i+1 is (s_0, s_{i+2})
            gluing.insert((i, 2), (i + 1, 0));
            gluing.insert((i + 1, 0), (i, 2));
        }
        let t = IdealTriangulation { marks, triangles, gluing };
        t.validate()?;
        Ok(t)
    }

    /// The fan triangulation of a once-punctured disk with `n >= 2` special
    /// points: triangles `(p, s_i, s_{i+1})` around the puncture.
    pub fn punctured_disk_fan(n: usize) -> Result<IdealTriangulation> {
        if n < 2 {
            return Err(Error::UnsupportedTriangulation(
                "the punctured-disk fan needs at least 2 special points".into(),
            ));
        }
        let mut marks = vec![Mark::Puncture(0)];
        marks.extend((0..n).map(Mark::Special));
        // marks: p = 0, s_i = 1 + i
        let triangles: Vec<[usize; 3]> = (0..n)
            .map(|i| [0, 1 + i, 1 + ((i + 1) % n)])
            .collect();
        let mut gluing = HashMap::new();
        for i in 0..n {
            let next = (i + 1) % n;
            // spoke (p, s_{i+1}): side 2 of triangle i, side 0 of triangle i+1
            gluing.insert((i, 2), (next, 0));
            gluing.insert((next, 0), (i, 2));
        }
        let t = IdealTriangulation { marks, triangles, gluing };
        t.validate()?;
        Ok(t)
    }

    /// The tetrahedral triangulation of the 4-punctured sphere.
    pub fn sphere_four_punctures() -> IdealTriangulation {
        let marks = (0..4).map(Mark::Puncture).collect();
        let triangles = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
        let mut gluing = HashMap::new();
        let mut side_of: HashMap<(usize, usize), (usize, u8)> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for j in 0..3u8 {
                let a = tri[j as usize];
                let b = tri[(j as usize + 1) % 3];
                side_of.insert((a, b), (t, j));
            }
        }
        for (&(a, b), &(t, j)) in &side_of {
            let &(t2, j2) = side_of.get(&(b, a)).expect("closed surface");
            gluing.insert((t, j), (t2, j2));
        }
        let t = IdealTriangulation { marks, triangles: triangles.clone(), gluing };
        t.validate().expect("tetrahedron is valid");
        t
    }

    /// The canonical test triangulation of a supported surface.
    pub fn canonical(spec: &SurfaceSpec) -> Result<IdealTriangulation> {
        match (spec.genus, spec.punctures, spec.boundary.as_slice()) {
            (0, 0, [k]) => Self::polygon_fan(*k),
            (0, 1, [k]) => Self::punctured_disk_fan(*k),
            (0, 4, []) => Ok(Self::sphere_four_punctures()),
            _ => Err(Error::UnsupportedTriangulation(format!(
                "no canonical triangulation for genus {}, {} punctures, boundary {:?}",
                spec.genus, spec.punctures, spec.boundary
            ))),
        }
    }

    /// Punctures among the marks.
    pub fn punctures(&self) -> Vec<usize> {
        (0..self.marks.len())
            .filter(|&i| matches!(self.marks[i], Mark::Puncture(_)))
            .collect()
    }
}
