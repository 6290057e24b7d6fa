use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::q::{self, Q};
use crate::ribbon::{edge_of, rev, Relative, RibbonGraph};

/// Refinements larger than this are refused as having no practical unit.
pub const MAX_UNIT_DARTS: i128 = 4_000_000;

/// Edge lengths in units of pi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric(pub Vec<Q>);

impl Metric {
    pub fn uniform(edges: usize, len: Q) -> Self {
        Metric(vec![len; edges])
    }

    pub fn len(&self, e: usize) -> Q {
        self.0[e]
    }

    pub fn dart_len(&self, d: usize) -> Q {
        self.0[edge_of(d)]
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_positive(&self) -> Result<()> {
        match self.0.iter().position(|l| *l <= Q::zero()) {
            Some(e) => Err(Error::PropertyDoesNotHold(format!("edge e{} has non-positive length", e + 1))),
            None => Ok(()),
        }
    }

    pub fn face_length(&self, face: &[usize]) -> Q {
        face.iter().map(|&d| self.dart_len(d)).sum()
    }

    pub fn scaled(&self, k: Q) -> Self {
        Metric(self.0.iter().map(|l| *l * k).collect())
    }
}

/// Rational gcd of all edge lengths and the extra lengths.
pub fn common_unit(metric: &Metric, extra: &[Q]) -> Q {
    let u = q::gcd(q::gcd_all(&metric.0), q::gcd_all(extra));
    if u.is_zero() {
        Q::one()
    } else {
        u
    }
}

/// Every edge cut into unit pieces. Original vertices keep their indices;
/// the first piece of edge `k` keeps the id `k`.
#[derive(Clone, Debug)]
pub struct UnitSubdivision {
    pub unit: Q,
    pub graph: RibbonGraph,
    /// refined darts along each original dart, from its tail
    pub pieces: Vec<Vec<usize>>,
    /// original edge of every refined edge
    pub parent_edge: Vec<usize>,
    /// for a refined dart: (original dart in the same direction, piece index from its tail)
    pub origin: Vec<(usize, usize)>,
}

pub fn subdivide(g: &RibbonGraph, metric: &Metric, unit: Q) -> Result<UnitSubdivision> {
    let m = g.edge_count();
    let mut counts = Vec::with_capacity(m);
    let mut total: i128 = 0;
    for e in 0..m {
        let c = q::div_exact(metric.len(e), unit)
            .filter(|&c| c > 0)
            .ok_or(Error::IndivisibleLength { edge: e + 1, unit: q::fmt(&unit) })?;
        total += c;
        if total > MAX_UNIT_DARTS {
            return Err(Error::IncommensurableLengths);
        }
        counts.push(c as usize);
    }
    // forward refined edge ids of each original edge
    let mut fwd: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut next = m;
    for (e, &c) in counts.iter().enumerate() {
        let mut ids = vec![e];
        for _ in 1..c {
            ids.push(next);
            next += 1;
        }
        fwd.push(ids);
    }
    let mm = next;
    let mut parent_edge = vec![0; mm];
    let mut origin = vec![(0, 0); 2 * mm];
    let mut pieces = vec![Vec::new(); 2 * m];
    for e in 0..m {
        let c = counts[e];
        for (j, &r) in fwd[e].iter().enumerate() {
            parent_edge[r] = e;
            origin[2 * r] = (2 * e, j);
            origin[2 * r + 1] = (2 * e + 1, c - 1 - j);
        }
        pieces[2 * e] = fwd[e].iter().map(|&r| 2 * r).collect();
        pieces[2 * e + 1] = fwd[e].iter().rev().map(|&r| 2 * r + 1).collect();
    }
    let mut rotations: Vec<Vec<usize>> =
        g.rotations().iter().map(|r| r.iter().map(|&d| pieces[d][0]).collect()).collect();
    for e in 0..m {
        for w in fwd[e].windows(2) {
            rotations.push(vec![2 * w[0] + 1, 2 * w[1]]);
        }
    }
    let graph = RibbonGraph::from_rotations(rotations)?;
    Ok(UnitSubdivision { unit, graph, pieces, parent_edge, origin })
}

impl UnitSubdivision {
    pub fn refine_relative(&self, rel: &Relative) -> Relative {
        Relative::new(
            rel.cycles
                .iter()
                .map(|c| c.iter().flat_map(|&d| self.pieces[d].iter().copied()).collect())
                .collect(),
        )
    }

    pub fn refine_edge_mask(&self, mask: &[bool]) -> Vec<bool> {
        self.parent_edge.iter().map(|&e| mask[e]).collect()
    }

    /// Refined (dart, offset) for an original point given along dart `d`.
    /// Offsets on piece boundaries resolve to the start of the later piece.
    pub fn refine_point(&self, d: usize, t: Q) -> (usize, Q) {
        let ps = &self.pieces[d];
        let mut j = (t / self.unit).floor().to_integer() as usize;
        if j >= ps.len() {
            j = ps.len() - 1;
        }
        (ps[j], t - self.unit * Q::from_integer(j as i128))
    }

    /// Original (dart, offset) for a refined point.
    pub fn original_point(&self, rd: usize, t: Q) -> (usize, Q) {
        let (d, j) = self.origin[rd];
        (d, self.unit * Q::from_integer(j as i128) + t)
    }

    /// Original face index containing the refined dart.
    pub fn original_dart(&self, rd: usize) -> usize {
        self.origin[rd].0
    }

    /// Midpoint of a refined dart, expressed on the forward dart of its original edge.
    pub fn midpoint(&self, rd: usize, metric: &Metric) -> (usize, Q) {
        let half = self.unit / Q::from_integer(2);
        let (d, t) = self.original_point(rd, half);
        if d % 2 == 0 {
            (edge_of(d), t)
        } else {
            (edge_of(d), metric.dart_len(d) - t)
        }
    }

    pub fn is_forward(&self, rd: usize) -> bool {
        self.origin[rd].0 % 2 == 0
    }

    pub fn rev_consistent(&self) -> bool {
        (0..self.graph.dart_count()).all(|x| {
            let (d, j) = self.origin[x];
            let (e, k) = self.origin[rev(x)];
            e == rev(d) && j + k + 1 == self.pieces[d].len()
        })
    }
}
