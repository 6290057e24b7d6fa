//! Ribbon graphs as rotation systems on darts.
//!
//! Orientation convention: `nu` lists the darts leaving a vertex
//! counterclockwise and the face successor is `S+(d) = nu(rev(d))`.

use crate::error::{Error, Result};
use crate::perm;

#[inline]
pub fn rev(d: usize) -> usize {
    d ^ 1
}

#[inline]
pub fn edge_of(d: usize) -> usize {
    d / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    nu: Vec<usize>,
    nu_inv: Vec<usize>,
    vertex_of: Vec<usize>,
    vertices: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    face_pos: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

impl RibbonGraph {
    /// Builds from counterclockwise dart lists, keeping the vertex order given.
    pub fn from_rotations(rotations: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = rotations.iter().map(|r| r.len()).sum();
        if n == 0 || n % 2 == 1 {
            return Err(Error::MalformedPermutation(format!(
                "rotations cover {n} darts, need a positive even count"
            )));
        }
        let mut nu = vec![usize::MAX; n];
        for (v, r) in rotations.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::MalformedPermutation(format!("vertex v{} has no darts", v + 1)));
            }
            for (i, &d) in r.iter().enumerate() {
                if d >= n || nu[d] != usize::MAX {
                    return Err(Error::MalformedPermutation(format!(
                        "dart {} is out of range or listed twice",
                        d + 1
                    )));
                }
                nu[d] = r[(i + 1) % r.len()];
            }
        }
        Ok(Self::assemble(nu, rotations))
    }

    /// Builds from the rotation permutation; vertices are keyed by smallest dart.
    pub fn from_nu(nu: Vec<usize>) -> Result<Self> {
        if nu.is_empty() || nu.len() % 2 == 1 || !perm::is_permutation(&nu) {
            return Err(Error::MalformedPermutation("nu is not a permutation of 2m darts".into()));
        }
        let vertices = perm::cycles(&nu);
        Ok(Self::assemble(nu, vertices))
    }

    /// Builds the ribbon graph whose face cycles are exactly `faces`.
    /// Every dart must appear in exactly one face word.
    pub fn from_faces(faces: &[Vec<usize>]) -> Result<Self> {
        let n: usize = faces.iter().map(|f| f.len()).sum();
        let mut succ = vec![usize::MAX; n];
        for f in faces {
            for (i, &d) in f.iter().enumerate() {
                if d >= n || succ[d] != usize::MAX {
                    return Err(Error::MalformedPermutation(format!(
                        "dart {} is out of range or used twice in face words",
                        d + 1
                    )));
                }
                succ[d] = f[(i + 1) % f.len()];
            }
        }
        let nu = (0..n).map(|x| succ[rev(x)]).collect();
        Self::from_nu(nu)
    }

    fn assemble(nu: Vec<usize>, vertices: Vec<Vec<usize>>) -> Self {
        let n = nu.len();
        let mut nu_inv = vec![0; n];
        for (d, &e) in nu.iter().enumerate() {
            nu_inv[e] = d;
        }
        let mut vertex_of = vec![0; n];
        for (v, r) in vertices.iter().enumerate() {
            for &d in r {
                vertex_of[d] = v;
            }
        }
        let succ: Vec<usize> = (0..n).map(|d| nu[rev(d)]).collect();
        let faces = perm::cycles(&succ);
        let mut face_of = vec![0; n];
        let mut face_pos = vec![0; n];
        for (f, c) in faces.iter().enumerate() {
            for (i, &d) in c.iter().enumerate() {
                face_of[d] = f;
                face_pos[d] = i;
            }
        }
        RibbonGraph { nu, nu_inv, vertex_of, vertices, face_of, face_pos, faces }
    }

    pub fn dart_count(&self) -> usize {
        self.nu.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nu.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn nu(&self, d: usize) -> usize {
        self.nu[d]
    }

    pub fn nu_inv(&self, d: usize) -> usize {
        self.nu_inv[d]
    }

    pub fn nu_perm(&self) -> &[usize] {
        &self.nu
    }

    /// Face successor `S+`.
    pub fn succ(&self, d: usize) -> usize {
        self.nu[rev(d)]
    }

    /// Inverse of `S+`.
    pub fn pred(&self, d: usize) -> usize {
        rev(self.nu_inv[d])
    }

    /// `(S+)^k (d)`, `k` may be negative.
    pub fn shift(&self, d: usize, k: i64) -> usize {
        let f = &self.faces[self.face_of[d]];
        let l = f.len() as i64;
        let p = (self.face_pos[d] as i64 + k).rem_euclid(l);
        f[p as usize]
    }

    pub fn tail(&self, d: usize) -> usize {
        self.vertex_of[d]
    }

    pub fn head(&self, d: usize) -> usize {
        self.vertex_of[rev(d)]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.vertices[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn valency(&self, v: usize) -> usize {
        self.vertices[v].len()
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    pub fn face_pos(&self, d: usize) -> usize {
        self.face_pos[d]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.tail(2 * e) == self.head(2 * e)
    }

    /// Connected components as sorted edge lists, ordered by smallest edge.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let m = self.edge_count();
        let mut comp = vec![usize::MAX; m];
        let mut out = Vec::new();
        for s in 0..m {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(e) = stack.pop() {
                members.push(e);
                for d in [2 * e, 2 * e + 1] {
                    for &x in &self.vertices[self.vertex_of[d]] {
                        let f = edge_of(x);
                        if comp[f] == usize::MAX {
                            comp[f] = id;
                            stack.push(f);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Component index of every edge, matching `components()`.
    pub fn component_of_edges(&self) -> Vec<usize> {
        let mut out = vec![0; self.edge_count()];
        for (i, c) in self.components().iter().enumerate() {
            for &e in c {
                out[e] = i;
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64
    }
}

/// Oriented boundary circles. Each cycle lists its orientation darts in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relative {
    pub cycles: Vec<Vec<usize>>,
}

impl Relative {
    pub fn new(cycles: Vec<Vec<usize>>) -> Self {
        Relative { cycles }
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// `true` for edges on A.
    pub fn edge_mask(&self, edge_count: usize) -> Vec<bool> {
        let mut m = vec![false; edge_count];
        for c in &self.cycles {
            for &d in c {
                m[edge_of(d)] = true;
            }
        }
        m
    }

    /// `true` for orientation darts.
    pub fn dart_mask(&self, dart_count: usize) -> Vec<bool> {
        let mut m = vec![false; dart_count];
        for c in &self.cycles {
            for &d in c {
                m[d] = true;
            }
        }
        m
    }

    pub fn cycle_of_edge(&self, e: usize) -> Option<usize> {
        self.cycles.iter().position(|c| c.iter().any(|&d| edge_of(d) == e))
    }
}

fn opt_rel(rel: Option<&Relative>) -> Relative {
    rel.cloned().unwrap_or_default()
}

/// First violated invariant, or `Ok(())`.
pub fn validate(g: &RibbonGraph, rel: Option<&Relative>) -> Result<()> {
    validate_with(g, rel, false)
}

/// As `validate`; `allow_univalent` admits univalent vertices (bare intervals
/// and realizations whose univalent vertices are about to be blown up).
pub fn validate_with(g: &RibbonGraph, rel: Option<&Relative>, allow_univalent: bool) -> Result<()> {
    if let Some(c) = g.components().get(1) {
        return Err(Error::DisconnectedGraph { dart: 2 * c[0] + 1 });
    }
    if !allow_univalent {
        if let Some(v) = (0..g.vertex_count()).find(|&v| g.valency(v) == 1) {
            return Err(Error::UnivalentVertex { vertex: v + 1 });
        }
    }
    if let Some(rel) = rel {
        validate_relative(g, rel)?;
    }
    surface_invariants(g, rel)?;
    Ok(())
}

pub fn validate_relative(g: &RibbonGraph, rel: &Relative) -> Result<()> {
    let mut edge_used = vec![false; g.edge_count()];
    for c in &rel.cycles {
        if c.is_empty() {
            return Err(Error::RelativeIncompatibility { vertex: 0, reason: "empty A-cycle".into() });
        }
        let mut seen_v = std::collections::BTreeSet::new();
        for (i, &d) in c.iter().enumerate() {
            if d >= g.dart_count() {
                return Err(Error::MalformedPermutation(format!("A-dart {} out of range", d + 1)));
            }
            let e = edge_of(d);
            if edge_used[e] {
                return Err(Error::RelativeIncompatibility {
                    vertex: g.tail(d) + 1,
                    reason: format!("edge e{} used twice in A", e + 1),
                });
            }
            edge_used[e] = true;
            let next = c[(i + 1) % c.len()];
            let w = g.head(d);
            if g.tail(next) != w {
                return Err(Error::RelativeIncompatibility {
                    vertex: w + 1,
                    reason: "A-cycle is not closed".into(),
                });
            }
            if !seen_v.insert(w) {
                return Err(Error::RelativeIncompatibility {
                    vertex: w + 1,
                    reason: "A-cycle is not simple".into(),
                });
            }
            // departure edge last, arrival edge first in the cyclic order
            if g.nu(next) != rev(d) {
                return Err(Error::RelativeIncompatibility {
                    vertex: w + 1,
                    reason: "A-edges are not at the extreme positions".into(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub vertices: usize,
    pub edges: usize,
    pub chi: i64,
    pub boundaries: usize,
    pub genus: usize,
    pub faces: Vec<Vec<usize>>,
    pub a_faces: Vec<bool>,
}

impl SurfaceInvariants {
    pub fn cylinder_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| !self.a_faces[f]).collect()
    }
}

/// Marks faces made of reversed A orientation darts.
pub fn a_face_mask(g: &RibbonGraph, rel: Option<&Relative>) -> Vec<bool> {
    let rel = opt_rel(rel);
    let darts = rel.dart_mask(g.dart_count());
    g.faces().iter().map(|f| darts[rev(f[0])]).collect()
}

pub fn surface_invariants(g: &RibbonGraph, rel: Option<&Relative>) -> Result<SurfaceInvariants> {
    let chi = g.euler_characteristic();
    let b = g.faces().len();
    let twice = 2 - chi - b as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::NonIntegerGenus { chi, boundaries: b });
    }
    Ok(SurfaceInvariants {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        chi,
        boundaries: b,
        genus: (twice / 2) as usize,
        faces: g.faces().to_vec(),
        a_faces: a_face_mask(g, rel),
    })
}

/// Ribbon graph induced on an edge subset, with id maps back to the parent.
#[derive(Clone, Debug)]
pub struct SubRibbon {
    pub graph: RibbonGraph,
    /// parent edge of each sub edge
    pub edge_map: Vec<usize>,
    /// sub edge of each parent edge
    pub sub_edge: Vec<Option<usize>>,
    /// parent vertex of each sub vertex
    pub vertex_map: Vec<usize>,
}

impl SubRibbon {
    pub fn to_sub(&self, d: usize) -> Option<usize> {
        self.sub_edge[edge_of(d)].map(|j| 2 * j + (d & 1))
    }

    pub fn to_parent(&self, d: usize) -> usize {
        2 * self.edge_map[edge_of(d)] + (d & 1)
    }
}

/// The rotation of a kept dart is the first nu-iterate that stays in the subset.
pub fn induced_subgraph_ribbon(g: &RibbonGraph, keep: &[bool]) -> Result<SubRibbon> {
    let edge_map: Vec<usize> = (0..g.edge_count()).filter(|&e| keep[e]).collect();
    if edge_map.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut sub_edge = vec![None; g.edge_count()];
    for (j, &e) in edge_map.iter().enumerate() {
        sub_edge[e] = Some(j);
    }
    let mut rotations = Vec::new();
    let mut vertex_map = Vec::new();
    for v in 0..g.vertex_count() {
        let r: Vec<usize> = g
            .rotation(v)
            .iter()
            .filter_map(|&d| sub_edge[edge_of(d)].map(|j| 2 * j + (d & 1)))
            .collect();
        if !r.is_empty() {
            rotations.push(r);
            vertex_map.push(v);
        }
    }
    let graph = RibbonGraph::from_rotations(rotations)?;
    Ok(SubRibbon { graph, edge_map, sub_edge, vertex_map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> RibbonGraph {
        RibbonGraph::from_rotations(vec![vec![0, 3], vec![1, 2]]).unwrap()
    }

    #[test]
    fn circle_has_two_faces() {
        let g = circle();
        assert_eq!(g.faces().len(), 2);
        let inv = surface_invariants(&g, None).unwrap();
        assert_eq!((inv.genus, inv.boundaries), (0, 2));
    }

    #[test]
    fn single_edge_is_univalent() {
        let g = RibbonGraph::from_rotations(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(validate(&g, None), Err(Error::UnivalentVertex { vertex: 1 }));
    }

    #[test]
    fn from_faces_inverts_faces() {
        let g = circle();
        let h = RibbonGraph::from_faces(g.faces()).unwrap();
        assert_eq!(h.faces(), g.faces());
        assert_eq!(h.vertex_count(), 2);
    }

    #[test]
    fn shift_matches_succ() {
        let g = circle();
        for d in 0..4 {
            assert_eq!(g.shift(d, 1), g.succ(d));
            assert_eq!(g.shift(d, -1), g.pred(d));
        }
    }
}
