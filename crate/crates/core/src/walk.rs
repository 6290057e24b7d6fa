//! Safe walks on metric ribbon graphs.
//!
//! A walker at `(d, t)` sits on the side of dart `d` (its face), `t` from
//! `tail(d)`. Sign `+` moves forward along that face, sign `-` backward.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::q::{self, Q};
use crate::ribbon::{edge_of, rev, Relative, RibbonGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn from_i8(s: i8) -> Sign {
        match s.signum() {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => Sign::Zero,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::Zero => 0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Zero => '0',
        }
    }
}

/// A point of the graph. Interior points use the even (forward) dart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Edge { dart: usize, offset: Q },
    Vertex(usize),
}

impl Point {
    pub fn canonical(g: &RibbonGraph, metric: &Metric, d: usize, t: Q) -> Point {
        let l = metric.dart_len(d);
        if t.is_zero() {
            Point::Vertex(g.tail(d))
        } else if t == l {
            Point::Vertex(g.head(d))
        } else if d % 2 == 0 {
            Point::Edge { dart: d, offset: t }
        } else {
            Point::Edge { dart: rev(d), offset: l - t }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Point::Edge { dart, offset } => format!("e{}:{}", edge_of(*dart) + 1, q::fmt(offset)),
            Point::Vertex(v) => format!("v{}", v + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTrace {
    pub start: Point,
    pub sign: Sign,
    /// traversed darts with the offset at which each was entered
    pub steps: Vec<(usize, Q)>,
    pub total: Q,
    /// final position, with the direction carried through
    pub end_dart: usize,
    pub end_offset: Q,
    pub endpoint: Point,
}

/// Walk of `length` from `(d, t)`; `0 <= t <= len(d)`.
pub fn safe_walk(g: &RibbonGraph, metric: &Metric, d: usize, t: Q, sign: Sign, length: Q) -> WalkTrace {
    let start = Point::canonical(g, metric, d, t);
    let mut steps = vec![(d, t)];
    let (mut d, mut t) = (d, t);
    let mut r = length;
    match sign {
        Sign::Zero => {}
        Sign::Plus => {
            while r > Q::zero() {
                let rem = metric.dart_len(d) - t;
                if r < rem {
                    t += r;
                    r = Q::zero();
                } else {
                    r -= rem;
                    d = g.succ(d);
                    t = Q::zero();
                    steps.push((d, t));
                }
            }
        }
        Sign::Minus => {
            while r > Q::zero() {
                if r < t {
                    t -= r;
                    r = Q::zero();
                } else {
                    r -= t;
                    d = g.pred(d);
                    t = metric.dart_len(d);
                    steps.push((d, t));
                }
            }
        }
    }
    WalkTrace {
        start,
        sign,
        steps,
        total: if sign == Sign::Zero { Q::zero() } else { length },
        end_dart: d,
        end_offset: t,
        endpoint: Point::canonical(g, metric, d, t),
    }
}

/// Walk from a point; vertex starts need an explicit dart.
pub fn safe_walk_from(
    g: &RibbonGraph,
    metric: &Metric,
    start: Point,
    dart: Option<usize>,
    sign: Sign,
    length: Q,
) -> Result<WalkTrace> {
    match start {
        Point::Vertex(v) => {
            let d = dart.ok_or(Error::MissingDirection)?;
            if g.tail(d) != v {
                return Err(Error::MissingDirection);
            }
            Ok(safe_walk(g, metric, d, Q::zero(), sign, length))
        }
        Point::Edge { dart: e, offset } => match dart {
            Some(d) if d == rev(e) => Ok(safe_walk(g, metric, d, metric.dart_len(d) - offset, sign, length)),
            _ => Ok(safe_walk(g, metric, e, offset, sign, length)),
        },
    }
}

/// Walk from a point of A, starting on the side of its orientation dart.
pub fn boundary_safe_walk(
    g: &RibbonGraph,
    metric: &Metric,
    rel: &Relative,
    edge: usize,
    offset: Q,
    sign: Sign,
    length: Q,
) -> Result<WalkTrace> {
    let darts = rel.dart_mask(g.dart_count());
    let d = if darts[2 * edge] {
        2 * edge
    } else if darts[2 * edge + 1] {
        2 * edge + 1
    } else {
        return Err(Error::NotOnA { edge: edge + 1 });
    };
    let t = if d == 2 * edge { offset } else { metric.len(edge) - offset };
    Ok(safe_walk(g, metric, d, t, sign, length))
}

/// `T(d) = (S+)^(sign(face(d)) * n)(d)` on a unit graph. A-faces must carry sign 0.
pub fn endpoint_dart_map(g: &RibbonGraph, face_sign: &[i8], a_faces: &[bool], n: i64) -> Result<Vec<usize>> {
    if let Some(f) = (0..face_sign.len()).find(|&f| a_faces[f] && face_sign[f] != 0) {
        return Err(Error::SignOnAFace { face: f + 1 });
    }
    Ok((0..g.dart_count()).map(|d| g.shift(d, face_sign[g.face_of(d)] as i64 * n)).collect())
}
